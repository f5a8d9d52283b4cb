"""Command-line front end.

State lives in an explicit session file (the same replayable JSON document
the service serves as an archive), so consultations are scriptable and
reproducible. Exit codes: 0 ok, 1 parse/IO, 2 knowledge-base validation,
3 rejected evidence, 4 explanation failure, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (
    FilterExhausted,
    FilterRequired,
    ImpossibleEvidence,
    InvalidConstraint,
    InvalidQuery,
    LegNetError,
    ParseError,
    UnknownUpdate,
)
from .explain import (
    ALL_HISTORY,
    Detail,
    Filter,
    Scope,
    explain,
    explanation_to_dict,
    parse_query,
    render,
)
from .kb import load_net, make_archive, session_from_archive
from .table import check_consistency
from .update import EvidenceSpec, apply_evidence

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_VALIDATION = 2
EXIT_EVIDENCE = 3
EXIT_EXPLANATION = 4
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A003 - argparse API
        raise _UsageError(message)


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None


def _write_json(path: str, document: dict) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(document, handle, indent=2)
        handle.write("\n")


def _parse_event_option(values: list[str]) -> dict[str, float]:
    constraints: dict[str, float] = {}
    for item in values:
        name, sep, raw = item.partition("=")
        if not sep or not name:
            raise _UsageError(f"--event expects NAME=PROBABILITY, got {item!r}")
        try:
            p = float(raw)
        except ValueError:
            raise _UsageError(f"--event {name}: {raw!r} is not a number") from None
        if not 0.0 <= p <= 1.0:
            raise _UsageError(f"--event {name}: probability {p} is outside [0, 1]")
        constraints[name] = p
    return constraints


def cmd_validate(args) -> int:
    try:
        net = load_net(_read_json(args.kb))
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LegNetError as exc:
        print(f"invalid knowledge base [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    report = check_consistency(net)
    if args.json:
        print(
            json.dumps(
                {
                    "legs": len(net.legs),
                    "events": len(net.vocabulary),
                    "max_discrepancy": report.max_discrepancy,
                    "pairs": [
                        {
                            "leg_a": pair.leg_a,
                            "leg_b": pair.leg_b,
                            "shared": list(pair.shared),
                            "max_discrepancy": pair.max_discrepancy,
                        }
                        for pair in report.pairs
                    ],
                },
                indent=2,
            )
        )
        return EXIT_OK
    print(
        f"OK: {len(net.legs)} legs, {len(net.vocabulary)} events, "
        f"max marginal discrepancy {report.max_discrepancy:.3e}"
    )
    return EXIT_OK


def cmd_new(args) -> int:
    kb_doc = _read_json(args.kb)
    net = load_net(kb_doc)
    document = {
        "kb": kb_doc,
        "evidence": [],
        "causal_links": [{"from": a, "to": b} for a, b in net.causal_links],
    }
    _write_json(args.session, document)
    print(f"session written to {args.session} ({len(net.legs)} legs)")
    return EXIT_OK


def _load_session(path: str):
    document = _read_json(path)
    session, kb_doc = session_from_archive(document)
    return session, kb_doc


def cmd_assert(args) -> int:
    constraints = _parse_event_option(args.event)
    if not constraints:
        raise _UsageError("assert needs at least one --event NAME=P")
    session, kb_doc = _load_session(args.session)
    record = apply_evidence(session, EvidenceSpec(args.leg, constraints))
    _write_json(args.session, make_archive(kb_doc, session))
    print(f"update {record.index}: touched {' '.join(record.propagation_order)}")
    return EXIT_OK


def cmd_explain(args) -> int:
    session, _ = _load_session(args.session)
    when = args.when
    if when is not None and when != ALL_HISTORY:
        try:
            when = int(when)
        except ValueError:
            raise _UsageError(f"--when expects an update number or 'all', got {when!r}") from None
    query = parse_query(
        {
            "hypothesis": args.event,
            "leg": args.leg,
            "scope": args.scope,
            "filter": args.filter,
            "detail": "ke" if args.detail == "ke" else "user",
            "when": when,
        }
    )
    explanation = explain(session, query)
    text = render(explanation, query.detail)
    if args.json:
        print(json.dumps({"explanation": explanation_to_dict(explanation), "rendered_text": text}, indent=2))
    else:
        print(text)
    return EXIT_OK


def cmd_history(args) -> int:
    session, _ = _load_session(args.session)
    if args.json:
        updates = [
            {
                "index": record.index,
                "source_leg": record.evidence.source_leg,
                "constraints": dict(record.evidence.constraints),
                "touched": list(record.propagation_order),
            }
            for record in session.history
        ]
        print(json.dumps({"updates": updates}, indent=2))
        return EXIT_OK
    for record in session.history:
        constraints = ",".join(f"{k}={v:g}" for k, v in record.evidence.constraints.items())
        print(
            f"{record.index}: {record.evidence.source_leg} [{constraints}] "
            f"-> {' '.join(record.propagation_order)}"
        )
    return EXIT_OK


def cmd_init(args) -> int:
    document = _read_json(args.session)
    session, kb_doc = session_from_archive(document)
    session.history = []
    session.net = session.initial_net
    _write_json(args.session, make_archive(kb_doc, session))
    print("session reset to priors")
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    kb_doc = _read_json(args.kb) if args.kb else None
    app = create_app(kb_document=kb_doc, ui_dir=args.ui_dir)
    if kb_doc is not None:
        print(f"preloaded session: {app.state.default_session}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="legnet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a knowledge-base file")
    p.add_argument("kb")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("new", help="start a session file from a knowledge base")
    p.add_argument("kb")
    p.add_argument("session")
    p.set_defaults(func=cmd_new)

    p = sub.add_parser("assert", help="apply evidence and rewrite the session file")
    p.add_argument("session")
    p.add_argument("--leg", required=True)
    p.add_argument("--event", action="append", default=[], metavar="NAME=P")
    p.set_defaults(func=cmd_assert)

    p = sub.add_parser("explain", help="print an explanation for an event")
    p.add_argument("session")
    p.add_argument("--event", required=True, help="hypothesis event")
    p.add_argument("--leg", required=True, help="context leg")
    p.add_argument("--scope", choices=[s.value for s in Scope], default=Scope.LOCAL.value)
    p.add_argument("--filter", choices=[f.value for f in Filter], default=Filter.NONE.value)
    p.add_argument("--detail", choices=[d.value for d in Detail], default=Detail.USER.value)
    p.add_argument("--when", default=None, help="update number or 'all'")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("history", help="list the updates in a session file")
    p.add_argument("session")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_history)

    p = sub.add_parser("init", help="reset a session file to its priors")
    p.add_argument("session")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--kb", default=None, help="knowledge base to preload")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui-dir", default=None, help="directory of static UI assets")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ImpossibleEvidence, InvalidConstraint) as exc:
        print(f"evidence rejected [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_EVIDENCE
    except (FilterRequired, FilterExhausted, UnknownUpdate, InvalidQuery) as exc:
        print(f"no explanation [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_EXPLANATION
    except LegNetError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console()
