"""Right-exercise records: append-only activity catalogs with provenance.

One record per data subject per controller, spanning all of that subject's
requests. Activities form a singly linked chain (prev pointers) ordered by
append time, so the most recent activity is always reachable in constant
time. Records are event-sourced: corrections are new activities, never edits.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import Optional

from .graph import (
    DCAT,
    DCT,
    DPV,
    PROV,
    RDF_TYPE,
    XSD_DATETIME,
    Graph,
    Iri,
    Literal,
    ShapeViolation,
    Triple,
    iri_join,
)
from .lifecycle import STATUS_FOR_IRI, STATUS_IRIS, RequestStatus
from .timeutil import ensure_utc, format_timestamp, parse_timestamp


class RecordError(Exception):
    pass


class OutOfOrderTimestamp(RecordError):
    pass


class UnknownRequest(RecordError):
    pass


@dataclass(frozen=True)
class RightExerciseActivity:
    id: Iri
    request_id: Iri
    at: datetime
    status_after: RequestStatus
    associated_entities: frozenset
    generated_artifacts: frozenset = field(default_factory=frozenset)
    prev: Optional[Iri] = None

    def __post_init__(self):
        object.__setattr__(self, "at", ensure_utc(self.at))
        object.__setattr__(self, "associated_entities", frozenset(self.associated_entities))
        object.__setattr__(self, "generated_artifacts", frozenset(self.generated_artifacts))
        if not self.associated_entities:
            raise ValueError("an activity names at least one associated entity")


@dataclass(frozen=True)
class RightExerciseRecord:
    id: Iri
    data_subject: Iri
    request_ids: frozenset = field(default_factory=frozenset)
    series: tuple[RightExerciseActivity, ...] = ()

    @property
    def first(self) -> Optional[Iri]:
        return self.series[0].id if self.series else None

    @property
    def last(self) -> Optional[Iri]:
        return self.series[-1].id if self.series else None


def with_request(rec: RightExerciseRecord, request_id: Iri) -> RightExerciseRecord:
    return replace(rec, request_ids=rec.request_ids | {request_id})


def append_activity(rec: RightExerciseRecord, a: RightExerciseActivity) -> RightExerciseRecord:
    """Chain the activity onto the record; ties in timestamps keep append order."""
    if a.request_id not in rec.request_ids:
        raise UnknownRequest(f"{a.request_id} is not registered on record {rec.id}")
    if rec.series and a.at < rec.series[-1].at:
        raise OutOfOrderTimestamp(
            f"activity at {a.at.isoformat()} precedes the record's last activity")
    chained = replace(a, prev=rec.last)
    return replace(rec, series=rec.series + (chained,))


def latest_activity(rec: RightExerciseRecord,
                    request_id: Optional[Iri] = None) -> Optional[RightExerciseActivity]:
    """The newest activity, optionally restricted to one request."""
    if request_id is None:
        return rec.series[-1] if rec.series else None
    for a in reversed(rec.series):
        if a.request_id == request_id:
            return a
    return None


def _series_iri(rec: RightExerciseRecord) -> Iri:
    return iri_join(rec.id, "series")


def export_record(rec: RightExerciseRecord) -> Graph:
    """The record as a DCAT catalog whose activities form a dataset series."""
    triples = [
        Triple(rec.id, RDF_TYPE, DPV.RightExerciseRecord),
        Triple(rec.id, RDF_TYPE, DCAT.Catalog),
        Triple(rec.id, DPV.hasDataSubject, rec.data_subject),
    ]
    for request_id in rec.request_ids:
        triples.append(Triple(rec.id, DCT.references, request_id))
    if rec.series:
        series = _series_iri(rec)
        triples.append(Triple(rec.id, DCAT.dataset, series))
        triples.append(Triple(series, RDF_TYPE, DCAT.DatasetSeries))
        triples.append(Triple(series, DCAT.first, rec.first))
        triples.append(Triple(series, DCAT.last, rec.last))
        for a in rec.series:
            triples.append(Triple(a.id, RDF_TYPE, DPV.RightExerciseActivity))
            triples.append(Triple(a.id, RDF_TYPE, DCAT.Resource))
            triples.append(Triple(a.id, DCAT.inSeries, series))
            triples.append(Triple(a.id, PROV.used, a.request_id))
            triples.append(Triple(a.id, PROV.startedAtTime,
                                  Literal(format_timestamp(a.at), datatype=XSD_DATETIME)))
            triples.append(Triple(a.id, DPV.hasStatus, STATUS_IRIS[a.status_after]))
            for entity in a.associated_entities:
                triples.append(Triple(a.id, PROV.wasAssociatedWith, entity))
            for artifact in a.generated_artifacts:
                triples.append(Triple(a.id, PROV.generated, artifact))
            if a.prev is not None:
                triples.append(Triple(a.id, DCAT.prev, a.prev))
    return Graph(triples)


def _import_activity(g: Graph, s: Iri) -> RightExerciseActivity:
    request_id = g.value(s, PROV.used)
    if not isinstance(request_id, Iri):
        raise ShapeViolation(f"activity {s} is missing its request reference")
    at = g.value(s, PROV.startedAtTime)
    if not isinstance(at, Literal):
        raise ShapeViolation(f"activity {s} is missing prov:startedAtTime")
    status = g.value(s, DPV.hasStatus)
    if status not in STATUS_FOR_IRI:
        raise ShapeViolation(f"activity {s} has an unknown status {status}")
    entities = g.objects(s, PROV.wasAssociatedWith)
    if not entities:
        raise ShapeViolation(f"activity {s} is missing its prov association")
    prevs = g.objects(s, DCAT.prev)
    if len(prevs) > 1:
        raise ShapeViolation(f"activity {s} has more than one prev link")
    try:
        parsed_at = parse_timestamp(at.lexical)
    except ValueError as exc:
        raise ShapeViolation(str(exc))
    return RightExerciseActivity(
        id=s,
        request_id=request_id,
        at=parsed_at,
        status_after=STATUS_FOR_IRI[status],
        associated_entities=frozenset(entities),
        generated_artifacts=frozenset(g.objects(s, PROV.generated)),
        prev=prevs[0] if prevs else None,
    )


def import_record(g: Graph) -> RightExerciseRecord:
    """Inverse of export_record, validating the chain shape on the way in."""
    records = [s for s in g.subjects_of_type(DPV.RightExerciseRecord) if isinstance(s, Iri)]
    if len(records) != 1:
        raise ShapeViolation("document must describe exactly one right-exercise record")
    rec_id = records[0]
    data_subject = g.value(rec_id, DPV.hasDataSubject)
    if not isinstance(data_subject, Iri):
        raise ShapeViolation("record is missing its data subject")
    request_ids = frozenset(g.objects(rec_id, DCT.references))

    activities = {}
    for s in g.subjects_of_type(DPV.RightExerciseActivity):
        if not isinstance(s, Iri):
            raise ShapeViolation("activities must be named by IRIs")
        activities[s] = _import_activity(g, s)
    for a in activities.values():
        if a.request_id not in request_ids:
            raise ShapeViolation(f"activity {a.id} references unregistered request {a.request_id}")

    if not activities:
        return RightExerciseRecord(rec_id, data_subject, request_ids, ())

    series_nodes = g.objects(rec_id, DCAT.dataset)
    if len(series_nodes) != 1:
        raise ShapeViolation("record must link exactly one dataset series")
    series = series_nodes[0]
    firsts = g.objects(series, DCAT.first)
    lasts = g.objects(series, DCAT.last)
    if len(firsts) != 1:
        raise ShapeViolation(f"series must carry exactly one dcat:first, found {len(firsts)}")
    if len(lasts) != 1:
        raise ShapeViolation(f"series must carry exactly one dcat:last, found {len(lasts)}")
    first, last = firsts[0], lasts[0]
    if first not in activities or last not in activities:
        raise ShapeViolation("dcat:first/dcat:last must point at activities in the record")

    no_prev = [a for a in activities.values() if a.prev is None]
    if len(no_prev) != 1:
        raise ShapeViolation(f"exactly one activity must lack a prev link, found {len(no_prev)}")

    # Walk the chain backwards from last; it must visit every activity once.
    chain = []
    cursor: Optional[Iri] = last
    seen = set()
    while cursor is not None:
        if cursor in seen:
            raise ShapeViolation("prev links form a cycle")
        if cursor not in activities:
            raise ShapeViolation(f"prev link points outside the record: {cursor}")
        seen.add(cursor)
        activity = activities[cursor]
        chain.append(activity)
        cursor = activity.prev
    if len(chain) != len(activities):
        raise ShapeViolation("prev chain does not visit every activity")
    chain.reverse()
    if chain[0].id != first:
        raise ShapeViolation("dcat:first does not match the head of the prev chain")

    return RightExerciseRecord(rec_id, data_subject, request_ids, tuple(chain))
