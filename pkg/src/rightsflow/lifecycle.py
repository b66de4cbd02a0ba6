"""Rights-request lifecycle: state machine, deadlines, extensions, breaches.

Requests are immutable values; every operation returns a new request with the
event appended to its history. Deadlines use calendar-month arithmetic (one
month from submission, three once the extension is applied) and the breach
boundary is strict: the deadline day itself is still compliant.
"""

from __future__ import annotations

import enum
import uuid
from dataclasses import dataclass, replace
from datetime import datetime
from typing import Optional

from .graph import DPV, Iri, iri_join
from .timeutil import add_calendar_months, ensure_utc
from .vocab import (
    IDENTITY_VERIFICATION_REQUIRED,
    JustificationCategory,
    ProcessSpec,
    RightNotExercisable,
    VocabDataset,
    applicable_rights_for_process,
)


class LifecycleError(Exception):
    pass


class InvalidTransition(LifecycleError):
    def __init__(self, current: "RequestStatus", event: "LifecycleEvent | str"):
        super().__init__(f"no transition for {event} from {current.value}")
        self.current = current
        self.event = event


class RightNotApplicable(LifecycleError):
    pass


class ExtensionAlreadyApplied(LifecycleError):
    pass


class TerminalState(LifecycleError):
    pass


class WrongJustificationCategory(LifecycleError):
    pass


class MissingJustification(LifecycleError):
    pass


class UnknownJustification(LifecycleError):
    pass


class IdentityNotVerified(LifecycleError):
    pass


class NonMonotonicTimestamp(LifecycleError):
    pass


class RequestStatus(enum.Enum):
    INITIATED = "Initiated"
    ACKNOWLEDGED = "Acknowledged"
    REQUIRES_ACTION = "RequiresAction"
    ACTION_DELAYED = "ActionDelayed"
    ACCEPTED = "Accepted"
    REJECTED = "Rejected"
    FULFILLED = "Fulfilled"


class LifecycleEvent(enum.Enum):
    ACKNOWLEDGE = "Acknowledge"
    ACCEPT = "Accept"
    REJECT = "Reject"
    REQUIRE_ACTION = "RequireAction"
    ACTION_RESPONSE = "ActionResponse"
    DELAY_ACTION = "DelayAction"
    FULFIL = "Fulfil"


TERMINAL_STATUSES = frozenset({RequestStatus.REJECTED, RequestStatus.FULFILLED})

TRANSITIONS: dict[tuple[RequestStatus, LifecycleEvent], RequestStatus] = {
    (RequestStatus.INITIATED, LifecycleEvent.ACKNOWLEDGE): RequestStatus.ACKNOWLEDGED,
    (RequestStatus.ACKNOWLEDGED, LifecycleEvent.ACCEPT): RequestStatus.ACCEPTED,
    (RequestStatus.ACKNOWLEDGED, LifecycleEvent.REJECT): RequestStatus.REJECTED,
    (RequestStatus.ACKNOWLEDGED, LifecycleEvent.REQUIRE_ACTION): RequestStatus.REQUIRES_ACTION,
    (RequestStatus.REQUIRES_ACTION, LifecycleEvent.ACTION_RESPONSE): RequestStatus.ACKNOWLEDGED,
    (RequestStatus.REQUIRES_ACTION, LifecycleEvent.DELAY_ACTION): RequestStatus.ACTION_DELAYED,
    (RequestStatus.ACTION_DELAYED, LifecycleEvent.ACTION_RESPONSE): RequestStatus.ACKNOWLEDGED,
    (RequestStatus.ACCEPTED, LifecycleEvent.FULFIL): RequestStatus.FULFILLED,
    (RequestStatus.ACCEPTED, LifecycleEvent.REJECT): RequestStatus.REJECTED,
}

# DPV request-status concepts used in exported documents.
STATUS_IRIS = {
    RequestStatus.INITIATED: DPV.RequestInitiated,
    RequestStatus.ACKNOWLEDGED: DPV.RequestAcknowledged,
    RequestStatus.REQUIRES_ACTION: DPV.RequestRequiresAction,
    RequestStatus.ACTION_DELAYED: DPV.RequestActionDelayed,
    RequestStatus.ACCEPTED: DPV.RequestAccepted,
    RequestStatus.REJECTED: DPV.RequestRejected,
    RequestStatus.FULFILLED: DPV.RequestFulfilled,
}
STATUS_FOR_IRI = {v: k for k, v in STATUS_IRIS.items()}


def transition(current: RequestStatus, event: LifecycleEvent) -> RequestStatus:
    """The transition table; InvalidTransition for every pair not in it."""
    try:
        return TRANSITIONS[(current, event)]
    except KeyError:
        raise InvalidTransition(current, event)


@dataclass(frozen=True)
class TransitionEvent:
    from_status: RequestStatus
    to_status: RequestStatus
    at: datetime
    actor: Iri
    justification: Optional[Iri] = None
    notice_id: Optional[Iri] = None


@dataclass(frozen=True)
class BreachReport:
    request_id: str
    deadline: datetime
    detected_at: datetime
    status_at_detection: RequestStatus


@dataclass(frozen=True)
class RightsRequest:
    id: str
    data_subject: Iri
    controller: Iri
    right: Iri
    submitted_at: datetime
    status: RequestStatus
    identity_verified: bool
    deadline: datetime
    extension_applied: bool
    history: tuple[TransitionEvent, ...]

    @property
    def terminal(self) -> bool:
        return self.status in TERMINAL_STATUSES


def request_iri(r: RightsRequest) -> Iri:
    """The request's address in the controller's namespace."""
    return iri_join(r.controller, "requests", r.id)


def submit_request(data_subject: Iri, controller: Iri, right: Iri, at: datetime,
                   ds: VocabDataset, process: Optional[ProcessSpec] = None,
                   jurisdiction: Optional[Iri] = None,
                   request_id: Optional[str] = None) -> RightsRequest:
    """Open a request in Initiated with the 1-month response deadline."""
    at = ensure_utc(at)
    entry = ds.right(right)
    if entry is None or not entry.exercisable_by_request:
        raise RightNotExercisable(f"{right} is not exercisable by request")
    if process is not None:
        allowed = applicable_rights_for_process(process, ds, jurisdiction)
        if right not in allowed:
            raise RightNotApplicable(
                f"{right} is not applicable under process {process.iri}")
    opening = TransitionEvent(RequestStatus.INITIATED, RequestStatus.INITIATED,
                              at, data_subject)
    return RightsRequest(
        id=request_id or uuid.uuid4().hex,
        data_subject=data_subject,
        controller=controller,
        right=right,
        submitted_at=at,
        status=RequestStatus.INITIATED,
        identity_verified=False,
        deadline=add_calendar_months(at, 1),
        extension_applied=False,
        history=(opening,),
    )


def _check_justification(ds: VocabDataset, justification: Optional[Iri],
                         allowed: tuple[JustificationCategory, ...], why: str) -> None:
    if justification is None:
        raise MissingJustification(why)
    category = ds.justification_category(justification)
    if category is None:
        raise UnknownJustification(f"{justification} is not in the justification taxonomy")
    if category not in allowed:
        names = "/".join(c.value for c in allowed)
        raise WrongJustificationCategory(
            f"{why}: expected a {names} justification, got {category.value}")


def apply_event(r: RightsRequest, event: LifecycleEvent, at: datetime, actor: Iri,
                ds: VocabDataset, justification: Optional[Iri] = None,
                notice_id: Optional[Iri] = None) -> RightsRequest:
    """Apply a lifecycle event, enforcing the justification obligations."""
    at = ensure_utc(at)
    target = transition(r.status, event)
    if at <= r.history[-1].at:
        raise NonMonotonicTimestamp(
            f"event at {at.isoformat()} is not after the previous history entry")
    if target is RequestStatus.REJECTED:
        _check_justification(ds, justification, (JustificationCategory.NON_FULFILMENT,),
                             "rejection must be justified")
    elif target in (RequestStatus.REQUIRES_ACTION, RequestStatus.ACTION_DELAYED):
        _check_justification(
            ds, justification,
            (JustificationCategory.DELAY, JustificationCategory.EXERCISE),
            "requesting or delaying action must be justified")
    if event is LifecycleEvent.ACCEPT and not r.identity_verified:
        raise IdentityNotVerified("identity must be verified before acceptance")
    entry = TransitionEvent(r.status, target, at, actor, justification, notice_id)
    return replace(r, status=target, history=r.history + (entry,))


def verify_identity(r: RightsRequest, outcome: bool, at: datetime,
                    ds: VocabDataset, notice_id: Optional[Iri] = None) -> RightsRequest:
    """Record an identity check. Failure sends the request to RequiresAction
    with the identity-verification justification; success flips the flag
    without a transition."""
    if r.status is not RequestStatus.ACKNOWLEDGED:
        raise InvalidTransition(r.status, "VerifyIdentity")
    if outcome:
        return replace(r, identity_verified=True)
    return apply_event(r, LifecycleEvent.REQUIRE_ACTION, at, r.controller, ds,
                       justification=IDENTITY_VERIFICATION_REQUIRED,
                       notice_id=notice_id)


def apply_extension(r: RightsRequest, justification: Iri, at: datetime,
                    ds: VocabDataset, notice_id: Optional[Iri] = None) -> RightsRequest:
    """Apply the one-off 2-month extension (deadline becomes submission + 3 months)."""
    at = ensure_utc(at)
    if r.extension_applied:
        raise ExtensionAlreadyApplied(f"request {r.id} was already extended")
    if r.terminal:
        raise TerminalState(f"request {r.id} is {r.status.value}")
    _check_justification(ds, justification, (JustificationCategory.DELAY,),
                         "extension must be justified")
    if at <= r.history[-1].at:
        raise NonMonotonicTimestamp(
            f"event at {at.isoformat()} is not after the previous history entry")
    entry = TransitionEvent(r.status, r.status, at, r.controller, justification, notice_id)
    return replace(r, extension_applied=True,
                   deadline=add_calendar_months(r.submitted_at, 3),
                   history=r.history + (entry,))


def check_breach(r: RightsRequest, now: datetime) -> Optional[BreachReport]:
    """A breach report iff now is strictly past the deadline on an open request."""
    now = ensure_utc(now)
    if now > r.deadline and not r.terminal:
        return BreachReport(r.id, r.deadline, now, r.status)
    return None


def replay_history(r: RightsRequest) -> RequestStatus:
    """Re-run the history through the transition table; self-entries (the
    opening event, extensions) carry no transition and are skipped."""
    status = RequestStatus.INITIATED
    for entry in r.history:
        if entry.from_status is entry.to_status:
            continue
        if entry.from_status is not status:
            raise LifecycleError(
                f"history entry departs from {entry.from_status.value} "
                f"but the replayed status is {status.value}")
        event = _EVENT_FOR_EDGE[(entry.from_status, entry.to_status)]
        status = transition(status, event)
    return status


_EVENT_FOR_EDGE = {(src, dst): ev for (src, ev), dst in TRANSITIONS.items()}
