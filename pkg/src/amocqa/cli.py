"""Command-line entry point: dataset generation, parsing, execution, scoring.

Exit codes: 0 success, 2 usage error, 3 parse or validation error,
4 execution error. With --json, stdout carries a single JSON object.
The QAPT_CONSTANTS environment variable points at a key=value constants
file overriding the box-model defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import boxmodel, datagen, dsl, executor, metrics, qforms, textcodec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_EXEC = 4


def _constants():
    path = os.environ.get("QAPT_CONSTANTS")
    if path:
        return boxmodel.load_constants(path)
    return boxmodel.DEFAULT_CONSTANTS


def _emit(args, payload: dict, text_lines) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload))
    else:
        for line in text_lines:
            print(line)


def _read_text_arg(value: str | None) -> str:
    if value is None or value == "-":
        return sys.stdin.read().strip()
    return value


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_gen(args) -> int:
    try:
        config = datagen.GenConfig(
            n_examples=args.n,
            seed=args.seed,
            execute_answers=args.execute,
            balance=not args.no_balance,
        )
    except datagen.InvalidConfig as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        bundle = datagen.build_dataset(config, _constants())
        datagen.write_dataset(bundle, args.out)
    except (datagen.InsufficientUnique, boxmodel.NumericalBlowup) as exc:
        return _fail(str(exc), EXIT_EXEC)
    if args.vocab:
        corpus = (text for pair in qforms.language_corpus() for text in pair)
        textcodec.build_vocab(corpus).save(args.vocab)
    _emit(
        args,
        bundle.manifest,
        [
            f"wrote {len(bundle.train)} train and {len(bundle.test)} test "
            f"examples to {args.out}",
        ],
    )
    return EXIT_OK


def cmd_split(args) -> int:
    if not 0 < args.test_frac < 1:
        return _fail("--test-frac must lie in (0, 1)", EXIT_USAGE)
    try:
        examples = datagen.read_jsonl(args.input)
    except OSError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        train, test = datagen.split(examples, args.test_frac, args.seed)
    except datagen.InsufficientUnique as exc:
        return _fail(str(exc), EXIT_EXEC)
    os.makedirs(args.out, exist_ok=True)
    datagen.write_jsonl(train, os.path.join(args.out, "train.jsonl"))
    datagen.write_jsonl(test, os.path.join(args.out, "test.jsonl"))
    payload = {"train": len(train), "test": len(test)}
    _emit(args, payload, [f"wrote {len(train)} train and {len(test)} test examples"])
    return EXIT_OK


def cmd_parse(args) -> int:
    text = _read_text_arg(args.program)
    try:
        prog = dsl.parse(text)
    except dsl.ProgramSyntaxError as exc:
        return _fail(
            f"syntax error at position {exc.position}: expected {exc.expected}, "
            f"found {exc.found!r}",
            EXIT_PARSE,
        )
    except dsl.ValidationError as exc:
        return _fail(f"invalid program: {exc}", EXIT_PARSE)
    canonical = dsl.print_program(prog)
    _emit(args, {"program": canonical}, [canonical])
    return EXIT_OK


def _write_series_csv(path: str, out: boxmodel.RunOutput) -> None:
    import csv

    names = ("M_n", "S_north", "S_south", "S_low", "S_deep", "T_low", "D_low")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(("step",) + names)
        for i in range(len(out.M_n)):
            writer.writerow([i] + [repr(getattr(out, n)[i]) for n in names])


def cmd_run(args) -> int:
    text = _read_text_arg(args.program)
    try:
        prog = dsl.parse(text)
    except dsl.ProgramSyntaxError as exc:
        return _fail(
            f"syntax error at position {exc.position}: expected {exc.expected}, "
            f"found {exc.found!r}",
            EXIT_PARSE,
        )
    except dsl.ValidationError as exc:
        return _fail(f"invalid program: {exc}", EXIT_PARSE)
    try:
        answer, out = executor.run_program(prog, _constants())
    except (boxmodel.InvalidParams, boxmodel.NumericalBlowup) as exc:
        return _fail(str(exc), EXIT_EXEC)
    if args.series:
        _write_series_csv(args.series, out)
    payload = {"program": dsl.print_program(prog), "answer": answer.to_dict()}
    if answer.warnings:
        payload["warnings"] = list(answer.warnings)
    print(json.dumps(payload if args.json else answer.to_dict()))
    return EXIT_OK


def cmd_ask(args) -> int:
    question = _read_text_arg(args.question)
    try:
        result = qforms.match_question(question)
    except qforms.NoMatch:
        return _fail(f"question not in the closed language: {question!r}", EXIT_PARSE)
    try:
        answer = executor.execute(result.program, _constants())
    except (boxmodel.InvalidParams, boxmodel.NumericalBlowup) as exc:
        return _fail(str(exc), EXIT_EXEC)
    canonical = dsl.print_program(result.program)
    payload = {
        "question": question,
        "form_id": result.form_id,
        "program": canonical,
        "answer": answer.to_dict(),
    }
    _emit(
        args,
        payload,
        [canonical, json.dumps(answer.to_dict())],
    )
    return EXIT_OK


def cmd_eval(args) -> int:
    try:
        records = metrics.read_predictions(args.predictions)
    except OSError as exc:
        return _fail(str(exc), EXIT_USAGE)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        return _fail(f"malformed predictions file: {exc}", EXIT_PARSE)
    granularity = "char" if args.granularity == "char" else "token"
    try:
        report = metrics.evaluate(records, granularity, args.normalization)
    except metrics.EmptyInput as exc:
        return _fail(str(exc), EXIT_USAGE)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "report.json"), "w", encoding="utf-8") as fh:
            json.dump(report.to_json_dict(), fh, indent=2)
            fh.write("\n")
        report.write_cdf_csv(os.path.join(args.out, "cdf.csv"))
        report.write_forms_csv(os.path.join(args.out, "forms.csv"))
    lines = []
    for direction in metrics.DIRECTIONS:
        stats = report.directions.get(direction)
        if stats is not None:
            lines.append(
                f"{direction}: mean {stats.mean:.2f} std {stats.std:.2f} "
                f"(n={stats.count})"
            )
    if report.unweighted_form_mean is not None:
        lines.append(f"PTQ unweighted form mean: {report.unweighted_form_mean:.2f}")
    _emit(args, report.to_json_dict(), lines)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    port = args.port or int(os.environ.get("QAPT_PORT", "8000"))
    app = create_app(constants=_constants())
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amocqa",
        description="Box-model question answering toolchain",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate train/test dataset files")
    p.add_argument("--n", type=int, required=True, help="total examples to draw")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--execute", action="store_true", help="attach executed answers")
    p.add_argument("--no-balance", action="store_true")
    p.add_argument("--vocab", help="also write the question-language vocabulary here")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("split", help="re-split a dataset file")
    p.add_argument("--in", dest="input", required=True, help="input JSONL")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--test-frac", type=float, default=0.1)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("parse", help="canonicalize a program")
    p.add_argument("program", nargs="?", help="program text (default: stdin)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("run", help="execute a program")
    p.add_argument("program", nargs="?", help="program text (default: stdin)")
    p.add_argument("--series", help="write the full time series to this CSV")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("ask", help="translate a question and execute it")
    p.add_argument("question", nargs="?", help="question text (default: stdin)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("eval", help="score a predictions file")
    p.add_argument("predictions", help="JSON Lines prediction records")
    p.add_argument("--granularity", choices=("token", "char"), default="token")
    p.add_argument(
        "--normalization", choices=metrics.NORMALIZATIONS, default="max"
    )
    p.add_argument("--out", help="directory for report.json and CSV exports")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except OSError as exc:
        return _fail(str(exc), EXIT_USAGE)


if __name__ == "__main__":
    sys.exit(main())
