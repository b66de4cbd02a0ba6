"""Event-sourced request store.

The append-only journal is the source of truth; the in-memory maps and the
Turtle files under the data directory are caches rebuilt by replaying it.
Every mutation appends one journal entry carrying the minted identifiers and
the effective timestamp, so replay reconstructs identical state byte for
byte. A store-wide lock serializes mutations; readers see immutable
snapshots and never take it.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import Optional

from . import lifecycle, notices, policy, records
from .graph import Iri, parse_turtle, serialize_turtle
from .lifecycle import LifecycleEvent, RightsRequest, request_iri
from .notices import Notice
from .policy import ActionEvent, RequestPolicy, RuleKind
from .records import RightExerciseRecord
from .timeutil import add_calendar_months, ensure_utc, format_timestamp, parse_timestamp
from .vocab import ProcessSpec, VocabDataset


class StoreError(Exception):
    pass


class UnknownRequestId(StoreError):
    pass


class WrongController(StoreError):
    """The policy's assignee is not the controller this service acts for."""


class DuplicatePolicy(StoreError):
    pass


class MissingDecisionField(StoreError):
    pass


DECISION_EVENTS = {
    "acknowledge": LifecycleEvent.ACKNOWLEDGE,
    "accept": LifecycleEvent.ACCEPT,
    "reject": LifecycleEvent.REJECT,
    "require-action": LifecycleEvent.REQUIRE_ACTION,
    "action-response": LifecycleEvent.ACTION_RESPONSE,
    "delay-action": LifecycleEvent.DELAY_ACTION,
    "fulfil": LifecycleEvent.FULFIL,
}
DECISION_ACTIONS = tuple(DECISION_EVENTS) + ("verify-identity", "extend")


def subject_key(subject: Iri) -> str:
    return hashlib.sha256(subject.value.encode("utf-8")).hexdigest()[:16]


def _notice_key(notice_id: Iri) -> str:
    return notice_id.value.rsplit("/", 1)[-1]


@dataclass(frozen=True)
class MutationResult:
    request: RightsRequest
    notice: Notice


class RequestStore:
    def __init__(self, data_dir: Path, ds: VocabDataset, controller: Iri,
                 process: Optional[ProcessSpec] = None):
        self.data_dir = Path(data_dir)
        self.ds = ds
        self.controller = controller
        self.process = process
        self.requests: dict[str, RightsRequest] = {}
        self.policies: dict[str, RequestPolicy] = {}
        self.policy_for_request: dict[str, RequestPolicy] = {}
        self.notices: dict[str, Notice] = {}
        self.records: dict[str, RightExerciseRecord] = {}
        self.journal: list[dict] = []
        self._lock = threading.RLock()
        self.data_dir.mkdir(parents=True, exist_ok=True)
        for sub in ("notices", "policies", "records"):
            (self.data_dir / sub).mkdir(exist_ok=True)
        self._journal_path = self.data_dir / "journal.log"
        self._replay()

    # -- public API -----------------------------------------------------

    def submit(self, policy_text: str, at: datetime, actor: Optional[Iri] = None) -> MutationResult:
        """Open a request from a policy document; journals one submit entry."""
        with self._lock:
            at = ensure_utc(at)
            entry = {
                "seq": len(self.journal) + 1,
                "kind": "submit",
                "at": format_timestamp(at),
                "requestId": uuid.uuid4().hex,
                "policyTurtle": policy_text,
                "noticeId": uuid.uuid4().hex,
                "activityId": uuid.uuid4().hex,
            }
            result = self._apply_submit(entry)
            self._journal_append(entry)
            self._write_caches(result.request)
            return result

    def decide(self, request_id: str, action: str, at: datetime,
               actor: Optional[Iri] = None, justification: Optional[Iri] = None,
               outcome: Optional[bool] = None) -> MutationResult:
        """Apply a controller decision; journals one decision entry."""
        with self._lock:
            if request_id not in self.requests:
                raise UnknownRequestId(request_id)
            if action not in DECISION_ACTIONS:
                raise MissingDecisionField(f"unknown action {action!r}; expected one of "
                                           + ", ".join(DECISION_ACTIONS))
            if action == "verify-identity" and outcome is None:
                raise MissingDecisionField("verify-identity requires an outcome")
            at = ensure_utc(at)
            last = self.requests[request_id].history[-1].at
            if at <= last:
                # Fixed clocks stall between calls; history must stay monotone.
                at = last + timedelta(microseconds=1)
            entry = {
                "seq": len(self.journal) + 1,
                "kind": "decision",
                "action": action,
                "at": format_timestamp(at),
                "requestId": request_id,
                "actor": (actor or self.controller).value,
                "justification": justification.value if justification else None,
                "outcome": outcome,
                "noticeId": uuid.uuid4().hex,
                "activityId": uuid.uuid4().hex,
            }
            result = self._apply_decision(entry)
            self._journal_append(entry)
            self._write_caches(result.request)
            return result

    def request(self, request_id: str) -> RightsRequest:
        try:
            return self.requests[request_id]
        except KeyError:
            raise UnknownRequestId(request_id)

    def record_for_subject(self, subject: Iri) -> Optional[RightExerciseRecord]:
        return self.records.get(subject.value)

    def record_for_key(self, key: str) -> Optional[RightExerciseRecord]:
        for subject, rec in self.records.items():
            if subject_key(Iri(subject)) == key:
                return rec
        return None

    def notice(self, key: str) -> Optional[Notice]:
        return self.notices.get(key)

    def derived_event_log(self, request_id: str) -> list[ActionEvent]:
        """The deontic action events implied by the journal for one request:
        a fulfil decision discharges each obligation of the stored policy."""
        r = self.request(request_id)
        p = self.policy_for_request[request_id]
        log = []
        for entry in self.journal:
            if entry.get("requestId") != request_id:
                continue
            if entry["kind"] == "decision" and entry["action"] == "fulfil":
                at = parse_timestamp(entry["at"])
                for rule in p.rules:
                    if rule.kind is RuleKind.OBLIGATION:
                        log.append(ActionEvent(rule.assignee, rule.action, rule.target, at))
        return log

    # -- journal application ---------------------------------------------

    def _apply_submit(self, entry: dict) -> MutationResult:
        at = parse_timestamp(entry["at"])
        deadline = add_calendar_months(at, 1)
        imported = policy.import_policy(parse_turtle(entry["policyTurtle"]),
                                        default_deadline=deadline)
        if imported.assignee != self.controller:
            raise WrongController(
                f"policy is addressed to {imported.assignee}, not {self.controller}")
        if imported.id.value in self.policies:
            raise DuplicatePolicy(f"policy {imported.id} was already submitted")

        request = lifecycle.submit_request(
            imported.assigner, self.controller, imported.right, at, self.ds,
            process=self.process, request_id=entry["requestId"])
        # The stored policy is canonical: obligations carry the lifecycle deadline.
        stamped = RequestPolicy(
            imported.id, imported.right, imported.assigner, imported.assignee,
            tuple(policy.Rule(r.kind, r.action, r.target, r.assigner, r.assignee,
                              request.deadline if r.kind is RuleKind.OBLIGATION else r.deadline)
                  for r in imported.rules))

        notice_id = self._notice_iri(entry["noticeId"])
        receipt = notices.build_status_notice(request, at, notice_id=notice_id)

        self.requests[request.id] = request
        self.policies[stamped.id.value] = stamped
        self.policy_for_request[request.id] = stamped
        self.notices[entry["noticeId"]] = receipt
        self._append_record_activity(request, entry["activityId"], at,
                                     receipt.id, actor=request.data_subject)
        return MutationResult(request, receipt)

    def _apply_decision(self, entry: dict) -> MutationResult:
        request = self.requests[entry["requestId"]]
        at = parse_timestamp(entry["at"])
        actor = Iri(entry["actor"])
        justification = Iri(entry["justification"]) if entry.get("justification") else None
        notice_id = self._notice_iri(entry["noticeId"])
        action = entry["action"]

        status_before = request.status
        if action == "verify-identity":
            request = lifecycle.verify_identity(request, bool(entry["outcome"]), at,
                                                self.ds, notice_id=notice_id)
        elif action == "extend":
            request = lifecycle.apply_extension(request, justification, at, self.ds,
                                                notice_id=notice_id)
        else:
            request = lifecycle.apply_event(request, DECISION_EVENTS[action], at, actor,
                                            self.ds, justification=justification,
                                            notice_id=notice_id)

        notice = notices.build_status_notice(request, at, notice_id=notice_id)
        self.requests[request.id] = request
        self.notices[entry["noticeId"]] = notice
        if request.status is not status_before:
            self._append_record_activity(request, entry["activityId"], at,
                                         notice.id, actor=actor)
        return MutationResult(request, notice)

    def _append_record_activity(self, request: RightsRequest, activity_id: str,
                                at: datetime, generated: Iri, actor: Iri) -> None:
        subject = request.data_subject
        rec = self.records.get(subject.value)
        if rec is None:
            rec_id = Iri(f"{self.controller.value.rstrip('/')}/records/{subject_key(subject)}")
            rec = RightExerciseRecord(rec_id, subject)
        rec = records.with_request(rec, request_iri(request))
        if rec.series and at < rec.series[-1].at:
            at = rec.series[-1].at
        activity = records.RightExerciseActivity(
            id=Iri(f"{self.controller.value.rstrip('/')}/activities/{activity_id}"),
            request_id=request_iri(request),
            at=at,
            status_after=request.status,
            associated_entities=frozenset({actor, self.controller}),
            generated_artifacts=frozenset({generated}),
        )
        self.records[subject.value] = records.append_activity(rec, activity)

    def _notice_iri(self, key: str) -> Iri:
        return Iri(f"{self.controller.value.rstrip('/')}/notices/{key}")

    # -- persistence -------------------------------------------------------

    def _journal_append(self, entry: dict) -> None:
        line = json.dumps(entry, separators=(",", ":"))
        with open(self._journal_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self.journal.append(entry)

    def _replay(self) -> None:
        if not self._journal_path.exists():
            return
        with open(self._journal_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                if entry["kind"] == "submit":
                    result = self._apply_submit(entry)
                else:
                    result = self._apply_decision(entry)
                self.journal.append(entry)
                self._write_caches(result.request)

    def _write_caches(self, request: RightsRequest) -> None:
        p = self.policy_for_request[request.id]
        policy_path = self.data_dir / "policies" / f"{request.id}.ttl"
        policy_path.write_text(serialize_turtle(policy.export_policy(p)), encoding="utf-8")
        rec = self.records[request.data_subject.value]
        record_path = self.data_dir / "records" / f"{subject_key(request.data_subject)}.ttl"
        record_path.write_text(serialize_turtle(records.export_record(rec)), encoding="utf-8")
        for key, notice in self.notices.items():
            notice_path = self.data_dir / "notices" / f"{key}.ttl"
            if not notice_path.exists():
                notice_path.write_text(serialize_turtle(notices.export_notice(notice)),
                                       encoding="utf-8")
