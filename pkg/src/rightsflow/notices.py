"""Typed notices: exercise points, status updates, and the GDPR-specific kinds.

A notice is a machine-interpretable communication from the controller to the
data subject (or, for recipient notices, to downstream recipients). Every
notice names the controller and the entity implementing it, and exports with
temporal metadata.
"""

from __future__ import annotations

import enum
import uuid
from dataclasses import dataclass, field
from datetime import datetime
from typing import Optional

from .graph import (
    DCT,
    DPV,
    EU_GDPR,
    ODRL,
    RDF_TYPE,
    XSD_DATETIME,
    Graph,
    Iri,
    Literal,
    Triple,
    iri_join,
)
from .lifecycle import STATUS_FOR_IRI, STATUS_IRIS, RequestStatus, RightsRequest, request_iri
from .timeutil import ensure_utc, format_timestamp, parse_timestamp
from .vocab import VocabDataset


class NoticeError(Exception):
    pass


class UnknownRight(NoticeError):
    pass


class InvalidNotice(NoticeError):
    """Construction refused: a structural invariant does not hold."""


class NoticeKind(enum.Enum):
    RIGHT_EXERCISE = "RightExerciseNotice"
    RIGHT_FULFILMENT = "RightFulfilmentNotice"
    RIGHT_NON_FULFILMENT = "RightNonFulfilmentNotice"
    DIRECT_DATA_COLLECTION = "DirectDataCollectionNotice"
    INDIRECT_DATA_COLLECTION = "IndirectDataCollectionNotice"
    SUBJECT_ACCESS_REQUEST = "SubjectAccessRequestNotice"
    RECIPIENT = "RecipientNotice"


KIND_IRIS = {
    NoticeKind.RIGHT_EXERCISE: DPV.RightExerciseNotice,
    NoticeKind.RIGHT_FULFILMENT: DPV.RightFulfilmentNotice,
    NoticeKind.RIGHT_NON_FULFILMENT: DPV.RightNonFulfilmentNotice,
    NoticeKind.DIRECT_DATA_COLLECTION: EU_GDPR.DirectDataCollectionNotice,
    NoticeKind.INDIRECT_DATA_COLLECTION: EU_GDPR.IndirectDataCollectionNotice,
    NoticeKind.SUBJECT_ACCESS_REQUEST: EU_GDPR.SARNotice,
    NoticeKind.RECIPIENT: EU_GDPR.RightsRecipientsNotice,
}
KIND_FOR_IRI = {v: k for k, v in KIND_IRIS.items()}

IMPLEMENTED_BY = DPV.isImplementedByEntity


@dataclass(frozen=True)
class Notice:
    id: Iri
    kind: NoticeKind
    controller: Iri
    implementing_entity: Iri
    recipient: Iri
    issued: datetime
    status: Optional[RequestStatus] = None
    justification: Optional[Iri] = None
    right: Optional[Iri] = None
    exercise_point: Optional[Iri] = None
    required_info_process: Optional[Iri] = None
    attached_duty: Optional[Iri] = None
    # Art. 19 notices address every recipient of the data.
    recipients: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "issued", ensure_utc(self.issued))
        if self.kind is NoticeKind.RIGHT_NON_FULFILMENT and self.justification is None:
            raise InvalidNotice("a non-fulfilment notice carries its justification")
        if self.kind is NoticeKind.RIGHT_EXERCISE:
            if self.right is None or self.exercise_point is None:
                raise InvalidNotice("an exercise notice names the right and its exercise point")
        if self.kind is NoticeKind.RECIPIENT and not self.recipients:
            raise InvalidNotice("a recipient notice addresses at least one recipient")


def mint_notice_id(controller: Iri) -> Iri:
    return iri_join(controller, "notices", uuid.uuid4().hex)


def build_exercise_notice(right: Iri, exercise_point: Iri, required_info: Iri,
                          controller: Iri, implementer: Iri, at: datetime,
                          ds: VocabDataset, notice_id: Optional[Iri] = None,
                          recipient: Optional[Iri] = None,
                          attached_duty: Optional[Iri] = None) -> Notice:
    """Where and how to exercise a right, and what information it needs.

    Exercise-point notices are not addressed to one individual; the recipient
    defaults to the data-subject category.
    """
    if ds.right(right) is None:
        raise UnknownRight(f"{right} is not in the rights registry")
    return Notice(
        id=notice_id or mint_notice_id(controller),
        kind=NoticeKind.RIGHT_EXERCISE,
        controller=controller,
        implementing_entity=implementer,
        recipient=recipient or DPV.DataSubject,
        issued=at,
        right=right,
        exercise_point=exercise_point,
        required_info_process=required_info,
        attached_duty=attached_duty,
    )


def build_status_notice(r: RightsRequest, at: datetime,
                        notice_id: Optional[Iri] = None) -> Notice:
    """An update on a submitted request, mirroring its current status.

    Fulfilled requests get a fulfilment notice, rejected ones a non-fulfilment
    notice carrying the rejection's justification; anything in between is an
    exercise notice whose exercise point is the request itself (where the
    subject continues the exchange).
    """
    last = r.history[-1]
    kind = NoticeKind.RIGHT_EXERCISE
    exercise_point = request_iri(r)
    if r.status is RequestStatus.FULFILLED:
        kind = NoticeKind.RIGHT_FULFILMENT
        exercise_point = None
    elif r.status is RequestStatus.REJECTED:
        kind = NoticeKind.RIGHT_NON_FULFILMENT
        exercise_point = None
    return Notice(
        id=notice_id or mint_notice_id(r.controller),
        kind=kind,
        controller=r.controller,
        implementing_entity=r.controller,
        recipient=r.data_subject,
        issued=at,
        status=r.status,
        justification=last.justification,
        right=r.right,
        exercise_point=exercise_point,
    )


def build_recipient_notice(controller: Iri, implementer: Iri, right: Iri,
                           recipients: frozenset, at: datetime,
                           notice_id: Optional[Iri] = None,
                           justification: Optional[Iri] = None) -> Notice:
    """Art. 19 notification to each recipient of rectification or erasure."""
    recipients = frozenset(recipients)
    if not recipients:
        raise InvalidNotice("a recipient notice addresses at least one recipient")
    primary = sorted(recipients)[0]
    return Notice(
        id=notice_id or mint_notice_id(controller),
        kind=NoticeKind.RECIPIENT,
        controller=controller,
        implementing_entity=implementer,
        recipient=primary,
        issued=at,
        right=right,
        justification=justification,
        recipients=recipients,
    )


def export_notice(n: Notice) -> Graph:
    """The notice as a graph, typed by kind, with DCMI temporal metadata."""
    triples = [
        Triple(n.id, RDF_TYPE, KIND_IRIS[n.kind]),
        Triple(n.id, DPV.hasDataController, n.controller),
        Triple(n.id, IMPLEMENTED_BY, n.implementing_entity),
        Triple(n.id, DPV.hasRecipient, n.recipient),
        Triple(n.id, DCT.issued, Literal(format_timestamp(n.issued), datatype=XSD_DATETIME)),
    ]
    for extra in n.recipients:
        triples.append(Triple(n.id, DPV.hasRecipient, extra))
    if n.status is not None:
        triples.append(Triple(n.id, DPV.hasStatus, STATUS_IRIS[n.status]))
    if n.justification is not None:
        triples.append(Triple(n.id, DPV.hasJustification, n.justification))
    if n.right is not None:
        triples.append(Triple(n.id, DPV.hasRight, n.right))
    if n.exercise_point is not None:
        triples.append(Triple(n.id, DPV.isExercisedAt, n.exercise_point))
    if n.required_info_process is not None:
        triples.append(Triple(n.id, DPV.hasProcess, n.required_info_process))
    if n.attached_duty is not None:
        triples.append(Triple(n.id, ODRL.hasPolicy, n.attached_duty))
    return Graph(triples)


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_notice(g: Graph, ds: VocabDataset) -> ValidationReport:
    """Check the structural rules; problems go in the report, never raised."""
    violations = []
    subjects = sorted(
        (s for s in {t.subject for t in g.triples}
         if any(o in KIND_FOR_IRI for o in g.objects(s, RDF_TYPE))),
        key=str)
    if len(subjects) != 1:
        violations.append("document must describe exactly one notice of a known kind")
        return ValidationReport(tuple(violations))
    s = subjects[0]
    kinds = [KIND_FOR_IRI[o] for o in g.objects(s, RDF_TYPE) if o in KIND_FOR_IRI]
    if len(kinds) != 1:
        violations.append("notice carries more than one kind")
    kind = kinds[0]

    if g.value(s, DPV.hasDataController) is None:
        violations.append("missing data controller")
    if g.value(s, IMPLEMENTED_BY) is None:
        violations.append("missing implementing entity")
    if not g.objects(s, DPV.hasRecipient):
        violations.append("missing recipient")
    issued = g.value(s, DCT.issued)
    if not isinstance(issued, Literal):
        violations.append("missing dct:issued timestamp")
    else:
        try:
            parse_timestamp(issued.lexical)
        except ValueError:
            violations.append("dct:issued is not a timestamp")

    justification = g.value(s, DPV.hasJustification)
    if kind is NoticeKind.RIGHT_NON_FULFILMENT and justification is None:
        violations.append("non-fulfilment notice without a justification")
    if justification is not None and ds.justification(justification) is None:
        violations.append(f"unknown justification {justification}")

    right = g.value(s, DPV.hasRight)
    if kind is NoticeKind.RIGHT_EXERCISE:
        if right is None:
            violations.append("exercise notice without a right")
        if g.value(s, DPV.isExercisedAt) is None:
            violations.append("exercise notice without an exercise point")
    if right is not None and ds.right(right) is None:
        violations.append(f"right {right} is not in the rights registry")

    status = g.value(s, DPV.hasStatus)
    if status is not None and status not in STATUS_FOR_IRI:
        violations.append(f"unknown request status {status}")

    return ValidationReport(tuple(violations))
