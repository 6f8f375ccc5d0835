"""Operator and author tooling.

    logictutor validate-exercise PATH...   check exercise files
    logictutor diagnose --solution F --student S   offline feedback
    logictutor stats --log PATH            error statistics from a log
    logictutor serve [--config PATH]       run the HTTP service

Exit codes: 0 ok, 1 data error, 2 usage error. --format structured emits
the same JSON the service would, for scripting.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .errors import FormulaSyntaxError, LogicTutorError, MalformedLog, SchemaError
from .eventlog import read_events
from .exercises import load_exercise_file
from .feedback import FeedbackConfig, generate_feedback
from .messages import default_catalogue
from .parser import parse
from .stats import compute_stats


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logictutor")
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate-exercise", help="validate exercise XML files")
    validate.add_argument("paths", nargs="+", metavar="PATH", help="files or directories (recurses over *.xml)")
    validate.add_argument("--format", choices=("text", "structured"), default="text")

    diagnose = sub.add_parser("diagnose", help="run the feedback cascade on one formula pair")
    diagnose.add_argument("--solution", required=True)
    diagnose.add_argument("--student", required=True)
    diagnose.add_argument("--level", type=int, default=2)
    diagnose.add_argument("--lang", default="en")
    diagnose.add_argument("--format", choices=("text", "structured"), default="text")

    stats = sub.add_parser("stats", help="compute error statistics from an event log")
    stats.add_argument("--log", required=True)
    stats.add_argument("--group", default=None)
    stats.add_argument("--exercise", default=None)
    stats.add_argument("--format", choices=("text", "structured"), default="text")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--config", default=None)
    serve.add_argument("--host", default=None)
    serve.add_argument("--port", type=int, default=None)
    return parser


def _iter_exercise_files(paths):
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            yield from sorted(path.rglob("*.xml"))
        else:
            yield path


def cmd_validate(args) -> int:
    failures = 0
    results = []
    for path in _iter_exercise_files(args.paths):
        entry = {"file": str(path), "ok": False, "errors": [], "warnings": []}
        try:
            exercise = load_exercise_file(path)
        except (SchemaError, OSError) as err:
            entry["errors"].append(str(err))
            failures += 1
        else:
            entry["ok"] = True
            entry["warnings"] = list(exercise.warnings)
            entry["tasks"] = len(exercise.tasks)
            entry["pipeline"] = [t.output for t in exercise.tasks if t.output]
        results.append(entry)
    if args.format == "structured":
        print(json.dumps({"files": results}, indent=2, ensure_ascii=False))
    else:
        for entry in results:
            if entry["ok"]:
                chain = "→".join(entry["pipeline"]) or "(no outputs)"
                print(f"OK, {entry['tasks']} tasks, pipeline {chain}: {entry['file']}")
                for warning in entry["warnings"]:
                    print(f"  warning: {warning}")
            else:
                for error in entry["errors"]:
                    print(f"ERROR {entry['file']}: {error}")
    return 1 if failures else 0


def _caret_line(text: str, span) -> str:
    start, end = span
    end = max(end, start + 1)
    return " " * start + "^" * max(1, end - start)


def cmd_diagnose(args) -> int:
    try:
        solution = parse(args.solution)
    except FormulaSyntaxError as err:
        print(f"--solution does not parse: {err}", file=sys.stderr)
        return 2
    config = FeedbackConfig(max_level=args.level)
    report = generate_feedback(args.student, solution, config)
    catalogue = default_catalogue()
    items = catalogue.resolve_items(report.items, args.lang)
    if args.format == "structured":
        print(json.dumps({"verdict": report.verdict, "items": items}, indent=2, ensure_ascii=False))
        return 0
    print(f"student:  {args.student}")
    print(f"verdict:  {report.verdict}")
    for item in items:
        print(f"[{item['level']}] {item['kind']}: {item['text']}")
        if item.get("span"):
            print(f"    {args.student}")
            print("    " + _caret_line(args.student, item["span"]))
        if "offset" in item.get("params", {}):
            offset = item["params"]["offset"]
            print(f"    {args.student}")
            print("    " + _caret_line(args.student, (offset, offset + 1)))
    return 0


def cmd_stats(args) -> int:
    try:
        events = list(read_events(args.log))
    except MalformedLog as err:
        print(f"malformed log: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"cannot read log: {err}", file=sys.stderr)
        return 1
    rows = compute_stats(events, exercise=args.exercise, group=args.group)
    if args.format == "structured":
        print(json.dumps({"rows": [row.to_dict() for row in rows]}, indent=2, ensure_ascii=False))
        return 0
    header = f"{'group':10} {'exercise':28} {'statement':20} {'n':>4} {'err':>6} {'mf-err':>6}  most frequent"
    print(header)
    print("-" * len(header))
    for row in rows:
        print(
            f"{row.group or '-':10} {row.exercise:28.28} {row.statement:20.20} {row.attempts:>4}"
            f" {row.error_rate:>6.2f} {row.most_frequent_rate:>6.2f}  {row.most_frequent_error or '-'}"
        )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    config = load_config(args.config)
    if args.host:
        config.host = args.host
    if args.port:
        config.port = args.port
    uvicorn.run(create_app(config), host=config.host, port=config.port)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "validate-exercise":
            return cmd_validate(args)
        if args.command == "diagnose":
            return cmd_diagnose(args)
        if args.command == "stats":
            return cmd_stats(args)
        if args.command == "serve":
            return cmd_serve(args)
    except LogicTutorError as err:
        print(str(err), file=sys.stderr)
        return 1
    return 2


if __name__ == "__main__":
    sys.exit(main())
