"""HTTP service binding the engine into the subject/controller protocol.

Control metadata (ids, statuses, deadlines) is JSON; documents (policies,
notices, records) are text/turtle. Graph endpoints honor the Accept header
and answer 406 to anything that cannot take Turtle.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .clock import FixedClock, make_clock
from .graph import GraphError, Iri, parse_turtle, serialize_turtle
from .lifecycle import (
    TRANSITIONS,
    ExtensionAlreadyApplied,
    IdentityNotVerified,
    InvalidTransition,
    LifecycleEvent,
    MissingJustification,
    NonMonotonicTimestamp,
    RequestStatus,
    RightNotApplicable,
    RightsRequest,
    TerminalState,
    UnknownJustification,
    WrongJustificationCategory,
    check_breach,
    request_iri,
)
from .notices import export_notice
from .policy import evaluate_policy, evaluate_rule, export_policy
from .records import export_record
from .store import (
    DuplicatePolicy,
    MissingDecisionField,
    RequestStore,
    UnknownRequestId,
    WrongController,
    subject_key,
)
from .timeutil import format_timestamp, parse_timestamp
from .vocab import (
    JustificationCategory,
    RightNotExercisable,
    applicable_rights,
    justifications_for,
    load_seed_dataset,
    load_vocab_dataset,
    process_spec_from_graph,
)

TURTLE = "text/turtle"

EVENT_ACTION_NAMES = {
    LifecycleEvent.ACKNOWLEDGE: "acknowledge",
    LifecycleEvent.ACCEPT: "accept",
    LifecycleEvent.REJECT: "reject",
    LifecycleEvent.REQUIRE_ACTION: "require-action",
    LifecycleEvent.ACTION_RESPONSE: "action-response",
    LifecycleEvent.DELAY_ACTION: "delay-action",
    LifecycleEvent.FULFIL: "fulfil",
}


@dataclass
class ServiceConfig:
    listen_address: str = "127.0.0.1:8045"
    data_directory: str = "data"
    vocab_path: Optional[str] = None
    controller_iri: str = "https://controller.example/"
    clock_mode: str = "system"
    fixed_now: Optional[str] = None
    process_path: Optional[str] = None

    @classmethod
    def load(cls, path: Optional[str] = None, env: Optional[dict] = None) -> "ServiceConfig":
        """Read the JSON config file, then let RIGHTS_* env vars override."""
        values: dict = {}
        if path:
            raw = json.loads(Path(path).read_text())
            mapping = {
                "listenAddress": "listen_address",
                "dataDirectory": "data_directory",
                "vocabPath": "vocab_path",
                "controllerIri": "controller_iri",
                "clockMode": "clock_mode",
                "fixedNow": "fixed_now",
                "processPath": "process_path",
            }
            for key, attr in mapping.items():
                if key in raw:
                    values[attr] = raw[key]
        if env is None:
            import os
            env = dict(os.environ)
        for attr in ("listen_address", "data_directory", "vocab_path",
                     "controller_iri", "clock_mode", "fixed_now", "process_path"):
            env_key = "RIGHTS_" + attr.upper()
            if env_key in env:
                values[attr] = env[env_key]
        return cls(**values)


def _wants_json(request: Request) -> bool:
    accept = request.headers.get("accept", "")
    return "application/json" in accept


def _turtle_acceptable(request: Request) -> bool:
    accept = request.headers.get("accept")
    if not accept:
        return True
    for part in accept.split(","):
        media = part.split(";")[0].strip().lower()
        if media in (TURTLE, "text/*", "*/*"):
            return True
    return False


def _turtle_response(request: Request, graph, status_code=200, headers=None):
    if not _turtle_acceptable(request):
        return JSONResponse({"detail": f"only {TURTLE} is served here"}, status_code=406)
    return Response(serialize_turtle(graph), status_code=status_code,
                    media_type=TURTLE, headers=headers or {})


def _request_json(store: RequestStore, r: RightsRequest, now) -> dict:
    breach = check_breach(r, now)
    last = r.history[-1]
    return {
        "id": r.id,
        "iri": request_iri(r).value,
        "dataSubject": r.data_subject.value,
        "subjectKey": subject_key(r.data_subject),
        "right": r.right.value,
        "rightArticle": store.ds.right(r.right).gdpr_article,
        "rightLabel": store.ds.right(r.right).label,
        "status": r.status.value,
        "submittedAt": format_timestamp(r.submitted_at),
        "deadline": format_timestamp(r.deadline),
        "extensionApplied": r.extension_applied,
        "identityVerified": r.identity_verified,
        "breach": breach is not None,
        "lastJustification": last.justification.value if last.justification else None,
        "legalEvents": sorted(EVENT_ACTION_NAMES[ev]
                              for (status, ev) in TRANSITIONS if status is r.status),
        "canVerifyIdentity": r.status is RequestStatus.ACKNOWLEDGED and not r.identity_verified,
        "canExtend": not r.extension_applied and not r.terminal,
        "policyId": store.policy_for_request[r.id].id.value,
        "history": [{
            "from": e.from_status.value,
            "to": e.to_status.value,
            "at": format_timestamp(e.at),
            "actor": e.actor.value,
            "justification": e.justification.value if e.justification else None,
            "noticeId": e.notice_id.value if e.notice_id else None,
        } for e in r.history],
    }


def create_app(config: ServiceConfig) -> FastAPI:
    data_dir = Path(config.data_directory)
    data_dir.mkdir(parents=True, exist_ok=True)

    if config.vocab_path:
        ds = load_vocab_dataset(parse_turtle(Path(config.vocab_path).read_text()))
    else:
        ds = load_seed_dataset()

    process = None
    if config.process_path:
        process = process_spec_from_graph(
            parse_turtle(Path(config.process_path).read_text()), ds)

    clock = make_clock(config.clock_mode, data_dir,
                       parse_timestamp(config.fixed_now) if config.fixed_now else None)
    controller = Iri(config.controller_iri)
    store = RequestStore(data_dir, ds, controller, process)

    app = FastAPI(title="rightsflow", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.clock = clock
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    def actor_from(request: Request) -> Optional[Iri]:
        # Header-based identity assertion; a no-op verifier in dev mode.
        header = request.headers.get("x-agent-iri")
        if header:
            try:
                return Iri(header)
            except ValueError:
                return None
        return None

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/requests")
    async def submit(request: Request):
        body = (await request.body()).decode("utf-8", errors="replace")
        try:
            result = store.submit(body, clock.now(), actor_from(request))
        except GraphError as exc:
            return JSONResponse({"detail": str(exc)}, status_code=400)
        except (RightNotExercisable, RightNotApplicable, WrongController) as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        except DuplicatePolicy as exc:
            return JSONResponse({"detail": str(exc)}, status_code=409)
        r = result.request
        headers = {"Location": f"/requests/{r.id}", "X-Request-Id": r.id}
        if _wants_json(request):
            payload = _request_json(store, r, clock.now())
            payload["noticeId"] = result.notice.id.value
            return JSONResponse(payload, status_code=201, headers=headers)
        return _turtle_response(request, export_notice(result.notice),
                                status_code=201, headers=headers)

    @app.post("/requests/{request_id}/decisions")
    async def decide(request_id: str, request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return JSONResponse({"detail": "decision body must be JSON"}, status_code=400)
        action = body.get("action")
        justification = None
        if body.get("justification"):
            try:
                justification = Iri(body["justification"])
            except ValueError as exc:
                return JSONResponse({"detail": str(exc)}, status_code=422)
        try:
            result = store.decide(request_id, action, clock.now(),
                                  actor=actor_from(request),
                                  justification=justification,
                                  outcome=body.get("outcome"))
        except UnknownRequestId:
            return JSONResponse({"detail": f"unknown request {request_id}"}, status_code=404)
        except (InvalidTransition, IdentityNotVerified, ExtensionAlreadyApplied,
                TerminalState, NonMonotonicTimestamp) as exc:
            return JSONResponse({"detail": str(exc),
                                 "error": type(exc).__name__}, status_code=409)
        except (MissingJustification, WrongJustificationCategory, UnknownJustification,
                MissingDecisionField) as exc:
            return JSONResponse({"detail": str(exc),
                                 "error": type(exc).__name__}, status_code=422)
        r = result.request
        if _wants_json(request):
            payload = _request_json(store, r, clock.now())
            payload["noticeId"] = result.notice.id.value
            return JSONResponse(payload)
        return _turtle_response(request, export_notice(result.notice))

    @app.get("/requests")
    def list_requests(status: Optional[str] = None):
        now = clock.now()
        rows = [_request_json(store, r, now) for r in store.requests.values()]
        if status is not None:
            rows = [row for row in rows if row["status"] == status]
        rows.sort(key=lambda row: (row["deadline"], row["id"]))
        return rows

    @app.get("/requests/{request_id}")
    def get_request(request_id: str):
        try:
            r = store.request(request_id)
        except UnknownRequestId:
            return JSONResponse({"detail": f"unknown request {request_id}"}, status_code=404)
        return _request_json(store, r, clock.now())

    @app.get("/requests/{request_id}/policy")
    def get_request_policy(request_id: str, request: Request):
        if request_id not in store.requests:
            return JSONResponse({"detail": f"unknown request {request_id}"}, status_code=404)
        p = store.policy_for_request[request_id]
        return _turtle_response(request, export_policy(p))

    @app.get("/requests/{request_id}/events")
    def get_request_events(request_id: str):
        if request_id not in store.requests:
            return JSONResponse({"detail": f"unknown request {request_id}"}, status_code=404)
        return [{"actor": e.actor.value, "action": e.action.value,
                 "target": e.target.value, "at": format_timestamp(e.at)}
                for e in store.derived_event_log(request_id)]

    @app.get("/requests/{request_id}/verdict")
    def get_request_verdict(request_id: str):
        if request_id not in store.requests:
            return JSONResponse({"detail": f"unknown request {request_id}"}, status_code=404)
        p = store.policy_for_request[request_id]
        log = store.derived_event_log(request_id)
        # Journal timestamps may run microseconds ahead of a stalled fixed
        # clock; never evaluate earlier than the newest event.
        now = max([clock.now()] + [e.at for e in log])
        return {
            "verdict": evaluate_policy(p, log, now).value,
            "rules": [{
                "kind": rule.kind.value,
                "action": rule.action.value,
                "target": rule.target.value,
                "deadline": format_timestamp(rule.deadline) if rule.deadline else None,
                "verdict": evaluate_rule(rule, log, now).value,
            } for rule in p.rules],
        }

    @app.get("/records/{key}")
    def get_record(key: str, request: Request):
        rec = store.record_for_key(key)
        if rec is None:
            return JSONResponse({"detail": f"no record under key {key}"}, status_code=404)
        return _turtle_response(request, export_record(rec))

    @app.get("/records")
    def get_record_by_subject(request: Request, subject: Optional[str] = None):
        if not subject:
            return JSONResponse({"detail": "subject query parameter required"}, status_code=400)
        rec = store.record_for_subject(Iri(subject))
        if rec is None:
            return JSONResponse({"detail": f"no record for {subject}"}, status_code=404)
        return _turtle_response(request, export_record(rec))

    @app.get("/notices/{key}")
    def get_notice(key: str, request: Request):
        notice = store.notice(key)
        if notice is None:
            return JSONResponse({"detail": f"unknown notice {key}"}, status_code=404)
        return _turtle_response(request, export_notice(notice))

    @app.get("/rights")
    def rights_for_basis(legalBasis: Optional[str] = None):
        if not legalBasis:
            return JSONResponse({"detail": "legalBasis query parameter required"},
                                status_code=400)
        basis = None
        if ":" in legalBasis:
            for candidate in ds.legal_bases.values():
                if candidate.iri.value == legalBasis:
                    basis = candidate
        else:
            basis = ds.basis_for_clause(legalBasis)
        if basis is None:
            return JSONResponse({"detail": f"unknown legal basis {legalBasis}"},
                                status_code=404)
        rights = sorted(applicable_rights(ds, basis.iri), key=lambda i: i.value)
        return {
            "legalBasis": basis.iri.value,
            "clause": basis.gdpr_clause,
            "rights": [{"iri": r.value,
                        "article": ds.right(r).gdpr_article,
                        "label": ds.right(r).label} for r in rights],
        }

    @app.get("/vocab/justifications")
    def vocab_justifications(category: Optional[str] = None):
        if category is not None:
            try:
                wanted = [JustificationCategory(category)]
            except ValueError:
                return JSONResponse({"detail": f"unknown category {category}"},
                                    status_code=404)
        else:
            wanted = list(JustificationCategory)
        out = []
        for cat in wanted:
            for j in sorted(justifications_for(ds, cat), key=lambda j: j.iri.value):
                out.append({"iri": j.iri.value, "label": j.label, "category": cat.value})
        return out

    @app.get("/clock")
    def get_clock():
        return {"mode": clock.mode, "now": format_timestamp(clock.now())}

    @app.post("/clock")
    async def set_clock(request: Request):
        if not isinstance(clock, FixedClock):
            return JSONResponse({"detail": "clock is not in fixed mode"}, status_code=409)
        body = await request.json()
        try:
            clock.set(parse_timestamp(body["now"]))
        except (KeyError, ValueError) as exc:
            return JSONResponse({"detail": str(exc)}, status_code=422)
        return {"mode": clock.mode, "now": format_timestamp(clock.now())}

    return app
