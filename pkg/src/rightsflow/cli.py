"""Command-line entry points: serve, validate, evaluate, rights."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .graph import DPV, ODRL, RDF_TYPE, GraphError, Iri, parse_turtle
from .policy import ActionEvent, ShapeViolation, evaluate_policy, evaluate_rule, import_policy
from .records import import_record
from .notices import KIND_FOR_IRI, validate_notice
from .timeutil import parse_timestamp
from .vocab import applicable_rights, load_seed_dataset, load_vocab_dataset


def _load_vocab(path: str | None):
    if path:
        return load_vocab_dataset(parse_turtle(Path(path).read_text(encoding="utf-8")))
    return load_seed_dataset()


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceConfig, create_app

    config = ServiceConfig.load(args.config)
    if args.vocab:
        config.vocab_path = args.vocab
    host, _, port = config.listen_address.partition(":")
    app = create_app(config)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8045), log_level="warning")
    return 0


def cmd_validate(args) -> int:
    ds = _load_vocab(args.vocab)
    try:
        g = parse_turtle(Path(args.file).read_text(encoding="utf-8"))
    except GraphError as exc:
        print(f"INVALID {args.file}: {exc}")
        return 1

    types = {t.object for t in g.match(None, RDF_TYPE, None)}
    try:
        if ODRL.Request in types:
            p = import_policy(g)
            print(f"OK {args.file}: request policy {p.id} with {len(p.rules)} rule(s)")
        elif DPV.RightExerciseRecord in types:
            rec = import_record(g)
            print(f"OK {args.file}: record {rec.id} with {len(rec.series)} activit(ies)")
        elif types & set(KIND_FOR_IRI):
            report = validate_notice(g, ds)
            if report.ok:
                print(f"OK {args.file}: notice")
            else:
                print(f"INVALID {args.file}:")
                for violation in report.violations:
                    print(f"  - {violation}")
                return 1
        else:
            print(f"INVALID {args.file}: not a policy, record, or notice document")
            return 1
    except (ShapeViolation, GraphError) as exc:
        print(f"INVALID {args.file}: {exc}")
        return 1
    return 0


def _read_event_log(path: str) -> list[ActionEvent]:
    log = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = json.loads(line)
        log.append(ActionEvent(Iri(row["actor"]), Iri(row["action"]),
                               Iri(row["target"]), parse_timestamp(row["at"])))
    return log


def cmd_evaluate(args) -> int:
    g = parse_turtle(Path(args.policy).read_text(encoding="utf-8"))
    p = import_policy(g)
    log = _read_event_log(args.log) if args.log else []
    now = parse_timestamp(args.now)
    for rule in p.rules:
        verdict = evaluate_rule(rule, log, now)
        deadline = f" by {rule.deadline.isoformat()}" if rule.deadline else ""
        print(f"{rule.kind.value:<11} {rule.action.value} on {rule.target.value}{deadline}: "
              f"{verdict.value}")
    overall = evaluate_policy(p, log, now)
    print(f"policy {p.id}: {overall.value}")
    return 0


def cmd_rights(args) -> int:
    ds = _load_vocab(args.vocab)
    basis = None
    if ":" in args.legal_basis and ds.legal_bases.get(Iri(args.legal_basis)):
        basis = ds.legal_bases[Iri(args.legal_basis)]
    else:
        basis = ds.basis_for_clause(args.legal_basis)
    if basis is None:
        print(f"unknown legal basis: {args.legal_basis}", file=sys.stderr)
        return 1
    print(f"{basis.label} ({basis.gdpr_clause}):")
    for iri in sorted(applicable_rights(ds, basis.iri), key=lambda i: i.value):
        right = ds.right(iri)
        print(f"  {right.gdpr_article:<5} {right.label}  <{iri.value}>")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rightsflow",
                                     description="GDPR rights-exercise engine")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", help="JSON config file")
    serve.add_argument("--vocab", help="vocabulary seed Turtle file")
    serve.set_defaults(func=cmd_serve)

    validate = sub.add_parser("validate", help="shape-check a Turtle document")
    validate.add_argument("file")
    validate.add_argument("--vocab", help="vocabulary seed Turtle file")
    validate.set_defaults(func=cmd_validate)

    evaluate = sub.add_parser("evaluate", help="evaluate a policy against an event log")
    evaluate.add_argument("--policy", required=True, help="policy Turtle file")
    evaluate.add_argument("--log", help="JSONL event log (actor, action, target, at)")
    evaluate.add_argument("--now", required=True, help="evaluation timestamp (ISO 8601)")
    evaluate.set_defaults(func=cmd_evaluate)

    rights = sub.add_parser("rights", help="applicable rights for a legal basis")
    rights.add_argument("--legal-basis", required=True,
                        help="clause (A6-1-a) or full IRI")
    rights.add_argument("--vocab", help="vocabulary seed Turtle file")
    rights.set_defaults(func=cmd_rights)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
