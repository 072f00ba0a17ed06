"""Command line: ``sfc run|verify|explore|report``.

Exit codes: 0 success, 1 expectation failure or invalid log, 2 bad input or
a failed scenario step.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .amounts import to_display
from .auditlog import AuditLog, EventKind, parse_export, verify_chain
from .errors import ScenarioError, StepError
from .explorer import format_event, replay
from .scenario import ScenarioRunner, load_scenario

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _load_verified(path: str) -> AuditLog | None:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None
    if not verify_chain(data):
        print(f"error: {path} failed hash-chain verification", file=sys.stderr)
        return None
    return AuditLog.from_events(parse_export(data))


def cmd_run(args) -> int:
    try:
        runner = ScenarioRunner(load_scenario(args.scenario))
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    try:
        report = runner.run()
    except StepError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.export_log:
            runner.engine.log.export(args.export_log)
            print(f"partial log written to {args.export_log}", file=sys.stderr)
        return EXIT_ERROR
    if args.export_log:
        runner.engine.log.export(args.export_log)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.format())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(args) -> int:
    try:
        data = Path(args.log).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {args.log}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if verify_chain(data):
        log = AuditLog.from_events(parse_export(data))
        print(f"OK {len(log)} events, head {log.head}")
        return EXIT_OK
    print("TAMPERED: hash chain does not verify")
    return EXIT_FAIL


def cmd_explore(args) -> int:
    log = _load_verified(args.log)
    if log is None:
        return EXIT_FAIL
    events = log.query(
        account=args.account,
        contract=args.contract,
        kind=args.kind,
        seq_from=args.seq_from,
        seq_to=args.seq_to,
    )
    for ev in events:
        print(ev.to_line() if args.json else format_event(ev))
    return EXIT_OK


def cmd_report(args) -> int:
    log = _load_verified(args.log)
    if log is None:
        return EXIT_FAIL
    r = replay(log)
    print(f"events: {len(log)}")
    print(f"head: {log.head}")
    print(f"total supply: {to_display(r.total_supply, r.decimals)}")
    print("balances:")
    width = max((len(a) for a in r.balances), default=0)
    for acct, shown in r.display_balances().items():
        print(f"  {acct:<{width}s}  {shown}")
    if r.contracts:
        print("contracts:")
        for cid, state in sorted(r.contracts.items()):
            print(f"  {cid}  {state}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sfc", description="Standing Forest Coin protocol engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a scenario file")
    p.add_argument("scenario")
    p.add_argument("--export-log", metavar="PATH", help="write the audit log as NDJSON")
    p.add_argument("--json", action="store_true", help="print the run report as JSON")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("verify", help="verify an exported audit log")
    p.add_argument("log")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("explore", help="query events in an exported audit log")
    p.add_argument("log")
    p.add_argument("--account")
    p.add_argument("--contract")
    p.add_argument("--kind", choices=[k.value for k in EventKind])
    p.add_argument("--seq-from", type=int)
    p.add_argument("--seq-to", type=int)
    p.add_argument("--json", action="store_true", help="print raw NDJSON lines")
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("report", help="reconstruct balances by replaying an exported log")
    p.add_argument("log")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "explore" and not (args.account or args.contract or args.kind) and (
        args.seq_from is None and args.seq_to is None
    ):
        print("error: explore needs --account, --contract, --kind or a seq range", file=sys.stderr)
        return EXIT_ERROR
    return args.func(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
