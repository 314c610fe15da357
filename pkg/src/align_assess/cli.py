"""Command-line driver. Runs the embedded engine directly against the data
directory; no server needed. Data goes to stdout, messages to stderr.

Exit codes: 0 ok, 2 validation, 3 not found, 4 wrong phase / immutability,
5 storage corruption, 1 unexpected.
"""

from __future__ import annotations

import argparse
import contextlib
import fcntl
import json
import os
import sys
from pathlib import Path

from . import catalog
from .errors import AppError, ValidationError, exit_code_for
from .model import model_from_json, model_to_json, validate_model
from .service import AssessmentService

DEFAULT_DATA_DIR = "align-assess-data"
ENV_DATA_DIR = "ALIGN_ASSESS_DATA_DIR"


def _data_dir(args) -> Path:
    if args.data_dir:
        return Path(args.data_dir)
    env = os.environ.get(ENV_DATA_DIR)
    return Path(env) if env else Path(DEFAULT_DATA_DIR)


@contextlib.contextmanager
def _exclusive_lock(data_dir: Path):
    data_dir.mkdir(parents=True, exist_ok=True)
    lock_path = data_dir / ".lock"
    with open(lock_path, "w") as handle:
        fcntl.flock(handle, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(handle, fcntl.LOCK_UN)


def _emit(data) -> None:
    if isinstance(data, (dict, list)):
        print(json.dumps(data, indent=2, ensure_ascii=False, sort_keys=True))
    else:
        print(data)


def _read_json_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise ValidationError(f"file not found: {path}", path=path)
    except json.JSONDecodeError as err:
        raise ValidationError(f"invalid JSON in {path}: {err}", path=path)


# -- commands ---------------------------------------------------------------


def cmd_catalog_list(args) -> int:
    _emit(catalog.list_builtin())
    return 0


def cmd_catalog_export(args) -> int:
    entry = catalog.get_builtin(args.model)
    text = model_to_json(entry.model)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        print(text)
    return 0


def cmd_model_validate(args) -> int:
    with open(args.file, encoding="utf-8") as handle:
        model = model_from_json(handle.read())
    result = validate_model(model)
    if result.ok:
        _emit(f"{len(model.criteria)} criteria, {model.practice_count()} practices, OK")
        return 0
    for message in result.messages():
        print(message, file=sys.stderr)
    return 2


def cmd_session_create(args, service: AssessmentService) -> int:
    profile = _read_json_file(args.profile) if args.profile else {"sector": "unspecified"}
    session = service.create_session(args.model, profile, args.mode,
                                     session_id=args.id)
    _emit({"id": session.id, "phase": session.phase,
           "model_id": session.model_id, "model_version": session.model_version})
    return 0


def cmd_session_list(args, service: AssessmentService) -> int:
    _emit(service.list_sessions())
    return 0


def cmd_session_show(args, service: AssessmentService) -> int:
    _emit(service.get_session(args.session_id).to_dict())
    return 0


def cmd_session_add_assessor(args, service: AssessmentService) -> int:
    session = service.add_assessor(args.session_id, args.id, args.name, args.role)
    _emit({"id": session.id, "assessors": [a.to_dict() for a in session.assessors]})
    return 0


def cmd_session_phase(args, service: AssessmentService) -> int:
    session, warnings = service.transition(args.session_id, args.transition)
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    _emit({"id": session.id, "phase": session.phase})
    return 0


def cmd_session_import(args, service: AssessmentService) -> int:
    text = Path(args.csv).read_text(encoding="utf-8")
    session, result = service.import_responses_csv(args.session_id, text)
    _emit(result.to_dict())
    if result.rejected:
        print(f"{len(result.rejected)} row(s) rejected", file=sys.stderr)
    return 0


def cmd_session_set_weights(args, service: AssessmentService) -> int:
    if args.file:
        mapping = _read_json_file(args.file)
    else:
        try:
            mapping = json.loads(args.inline)
        except json.JSONDecodeError as err:
            raise ValidationError(f"invalid inline JSON: {err}", path="weights")
    session = service.set_weights(args.session_id, mapping)
    _emit({"id": session.id, "weights": session.weights.to_mapping()})
    return 0


def cmd_session_consensus(args, service: AssessmentService) -> int:
    gaps = []
    for gap in args.gap or []:
        description, _, severity = gap.partition(":")
        gaps.append({"description": description,
                     "severity": severity or "medium"})
    session = service.record_consensus(
        args.session_id, args.practice, args.score,
        gaps=gaps, actions=list(args.action or []))
    record = session.consensus_for(args.practice)
    _emit(record.to_dict())
    return 0


def cmd_session_adjust(args, service: AssessmentService) -> int:
    session = service.set_adjustment(args.session_id, args.value, args.rationale)
    _emit({"id": session.id, "overall_adjustment": session.overall_adjustment})
    return 0


def cmd_session_finalize(args, service: AssessmentService) -> int:
    session, _ = service.transition(args.session_id, "finalize")
    _emit({"id": session.id, "phase": session.phase,
           "scores": session.frozen_scores})
    return 0


def cmd_session_what_if(args, service: AssessmentService) -> int:
    mapping = _read_json_file(args.weights) if args.weights else None
    _emit(service.what_if(args.session_id, mapping))
    return 0


def cmd_session_report(args, service: AssessmentService) -> int:
    payload = service.generate_report(args.session_id, args.format)
    if args.output:
        Path(args.output).write_bytes(payload)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(payload.decode("utf-8"))
        if not payload.endswith(b"\n"):
            sys.stdout.write("\n")
    return 0


def cmd_serve(args, service: AssessmentService) -> int:
    import uvicorn

    from .api import create_app

    host, _, port = args.listen.rpartition(":")
    app = create_app(service, ui_dir=args.ui_dir)
    print(f"listening on {host}:{port}", file=sys.stderr)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
    return 0


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="align-assess",
        description="Maturity assessment of business/IT alignment with customers.",
        epilog=("exit codes: 0 ok, 2 validation error, 3 not found, "
                "4 wrong phase or immutability, 5 storage corruption, 1 unexpected"))
    parser.add_argument("--data-dir", default=None,
                        help=f"store root (default ${ENV_DATA_DIR} or ./{DEFAULT_DATA_DIR})")
    sub = parser.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="built-in models")
    cat_sub = cat.add_subparsers(dest="subcommand", required=True)
    cat_sub.add_parser("list", help="list built-in models")
    cat_export = cat_sub.add_parser("export", help="write a built-in rubric file")
    cat_export.add_argument("--model", default=catalog.BUILTIN_MODEL_ID)
    cat_export.add_argument("-o", "--output", default=None)

    model = sub.add_parser("model", help="rubric files")
    model_sub = model.add_subparsers(dest="subcommand", required=True)
    model_validate = model_sub.add_parser("validate", help="validate a rubric file")
    model_validate.add_argument("file")

    session = sub.add_parser("session", help="assessment sessions")
    session_sub = session.add_subparsers(dest="subcommand", required=True)

    s_create = session_sub.add_parser("create")
    s_create.add_argument("--model", required=True)
    s_create.add_argument("--profile", help="org profile JSON file")
    s_create.add_argument("--mode", default="individual-survey",
                          choices=["joint", "individual-survey", "combined"])
    s_create.add_argument("--id", help="explicit session id (scripting)")

    session_sub.add_parser("list")

    s_show = session_sub.add_parser("show")
    s_show.add_argument("session_id")

    s_assessor = session_sub.add_parser("add-assessor")
    s_assessor.add_argument("session_id")
    s_assessor.add_argument("--id", required=True)
    s_assessor.add_argument("--name", default="")
    s_assessor.add_argument("--role", required=True, choices=["IT", "Business"])

    s_phase = session_sub.add_parser("phase")
    s_phase.add_argument("session_id")
    s_phase.add_argument("transition",
                         choices=["open-collection", "close-collection", "finalize"])

    s_import = session_sub.add_parser("import-responses")
    s_import.add_argument("session_id")
    s_import.add_argument("csv")

    s_weights = session_sub.add_parser("set-weights")
    s_weights.add_argument("session_id")
    weights_src = s_weights.add_mutually_exclusive_group(required=True)
    weights_src.add_argument("--file")
    weights_src.add_argument("--inline")

    s_consensus = session_sub.add_parser("consensus")
    s_consensus.add_argument("session_id")
    s_consensus.add_argument("practice")
    s_consensus.add_argument("score", type=float)
    s_consensus.add_argument("--gap", action="append",
                             help="'description' or 'description:severity'")
    s_consensus.add_argument("--action", action="append")

    s_adjust = session_sub.add_parser("adjust")
    s_adjust.add_argument("session_id")
    s_adjust.add_argument("value", type=float)
    s_adjust.add_argument("--rationale", required=True)

    s_finalize = session_sub.add_parser("finalize")
    s_finalize.add_argument("session_id")

    s_what_if = session_sub.add_parser("what-if")
    s_what_if.add_argument("session_id")
    s_what_if.add_argument("--weights", help="weights JSON file")

    s_report = session_sub.add_parser("report")
    s_report.add_argument("session_id")
    s_report.add_argument("--format", default="md",
                          choices=["md", "markdown", "json", "structured"])
    s_report.add_argument("-o", "--output")

    serve = sub.add_parser("serve", help="run the HTTP API")
    serve.add_argument("--listen", default="127.0.0.1:8423")
    serve.add_argument("--ui-dir", default=None)
    # Accepted after the subcommand too; SUPPRESS keeps the global value
    # when the flag is absent here.
    serve.add_argument("--data-dir", dest="data_dir", default=argparse.SUPPRESS)

    return parser


# Commands that change store state take the advisory lock.
_MUTATING = {
    ("session", "create"), ("session", "add-assessor"), ("session", "phase"),
    ("session", "import-responses"), ("session", "set-weights"),
    ("session", "consensus"), ("session", "adjust"), ("session", "finalize"),
    ("session", "report"),  # first generation flips phase to reported
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "catalog":
            return {"list": cmd_catalog_list,
                    "export": cmd_catalog_export}[args.subcommand](args)
        if args.command == "model":
            return cmd_model_validate(args)

        data_dir = _data_dir(args)
        if args.command == "serve":
            with _exclusive_lock(data_dir):
                return cmd_serve(args, AssessmentService(data_dir))

        handlers = {
            "create": cmd_session_create,
            "list": cmd_session_list,
            "show": cmd_session_show,
            "add-assessor": cmd_session_add_assessor,
            "phase": cmd_session_phase,
            "import-responses": cmd_session_import,
            "set-weights": cmd_session_set_weights,
            "consensus": cmd_session_consensus,
            "adjust": cmd_session_adjust,
            "finalize": cmd_session_finalize,
            "what-if": cmd_session_what_if,
            "report": cmd_session_report,
        }
        handler = handlers[args.subcommand]
        if (args.command, args.subcommand) in _MUTATING:
            with _exclusive_lock(data_dir):
                return handler(args, AssessmentService(data_dir))
        return handler(args, AssessmentService(data_dir))
    except AppError as err:
        print(f"error [{err.code}]: {err.message}", file=sys.stderr)
        return exit_code_for(err)
    except FileNotFoundError as err:
        print(f"error [not-found]: {err}", file=sys.stderr)
        return 3
    except json.JSONDecodeError as err:
        print(f"error [validation]: invalid JSON: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
