"""Command line entry point for barcode computations and stability experiments."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import ValidationError

from .complex import Filtration, format_time, parse_filtration, parse_time
from .config import StabilityConfig, load_settings, load_stability_config
from .document import (
    barcodes_to_document,
    document_to_barcodes,
    looks_like_document,
    parse_document,
    serialize_document,
)
from .errors import (
    DimensionMismatch,
    FiltrationError,
    HarmoniaError,
    InternalInvariantViolation,
)
from .harmonic import canonical_barcode, subordinate_as_barcode, subordinate_barcode
from .harness import instability_demo, run_trials
from .metrics import bottleneck_distance
from .persistence import Barcode, persistence_barcode
from .render import write_svg
from .reports import summarize, to_json_lines, write_workbook
from .utils.logging_setup import setup_logger

_BASE_LOGGER = setup_logger()
LOGGER = _BASE_LOGGER.getChild("cli")

ALGORITHMS = ("persistence", "canonical", "subordinate")

EXIT_OK = 0
EXIT_IO = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"muss positiv sein: {value}")
    return number


def _rational(value: str) -> str:
    try:
        parse_time(value)
    except FiltrationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return value


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--verbose", action="store_true", help="Ausführliche Log-Ausgabe aktivieren"
    )
    common.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help="Obergrenze für parallele Threads (Standard: HARMONIA_THREADS oder alle Kerne)",
    )

    parser = argparse.ArgumentParser(
        prog="harmonia", description="Exakte harmonische Barcodes von Simplizialfiltrationen"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    validate = commands.add_parser("validate", parents=[common], help="Filtration prüfen")
    validate.add_argument("path", help="Filtrationsdatei (Text oder JSON)")

    barcode = commands.add_parser("barcode", parents=[common], help="Barcode berechnen")
    barcode.add_argument("path", help="Filtrationsdatei (Text oder JSON)")
    barcode.add_argument("--dim", type=int, default=1, help="Homologiedimension (Standard: 1)")
    barcode.add_argument("--algo", choices=ALGORITHMS, default="canonical")
    barcode.add_argument("--reps", action="store_true", help="Repräsentanten ausgeben")
    barcode.add_argument("--format", choices=("json", "text"), default="json")
    barcode.add_argument("--decimal", action="store_true", help="Abbrechende Dezimalzahlen")

    bottleneck = commands.add_parser(
        "bottleneck", parents=[common], help="Bottleneck-Distanz zweier Barcodes"
    )
    bottleneck.add_argument("left", help="Barcode-Dokument oder Filtrationsdatei")
    bottleneck.add_argument("right", help="Barcode-Dokument oder Filtrationsdatei")
    bottleneck.add_argument("--dim", type=int, default=1)
    bottleneck.add_argument(
        "--algo",
        choices=ALGORITHMS,
        default="canonical",
        help="Algorithmus für Filtrationsdateien (Standard: canonical)",
    )
    bottleneck.add_argument("--decimal", action="store_true")

    render = commands.add_parser("render", parents=[common], help="Barcode als SVG zeichnen")
    render.add_argument("path", help="Filtrationsdatei (Text oder JSON)")
    render.add_argument("--dim", type=int, default=1)
    render.add_argument("--algo", choices=ALGORITHMS, default="canonical")
    render.add_argument("--out", required=True, help="Ziel-SVG")

    stability = commands.add_parser(
        "stability", parents=[common], help="Stabilitätsläufe als JSON-Zeilen"
    )
    source = stability.add_mutually_exclusive_group()
    source.add_argument("--complex", help="Filtrationsdatei, deren Komplex verwendet wird")
    source.add_argument("--random", type=int, help="Start-Seed für Zufallskomplexe")
    stability.add_argument("--eps", type=_rational, help="Störungsgröße (z. B. 1/10)")
    stability.add_argument("--trials", type=_positive_int)
    stability.add_argument("--dim", type=int)
    stability.add_argument("--kind", choices=("monotone", "lower_star"))
    stability.add_argument("--max-vertices", type=_positive_int)
    stability.add_argument("--config", help="YAML-Datei mit Experiment-Parametern")
    stability.add_argument("--xlsx", help="Berichte zusätzlich als Excel-Arbeitsmappe")

    instability = commands.add_parser(
        "instability", parents=[common], help="Subordinierte vs. kanonische Distanzen"
    )
    instability.add_argument(
        "--scales", nargs="+", type=_rational, default=["10", "100", "1000", "10000"]
    )
    instability.add_argument("--dim", type=int, default=1)
    return parser


def _configure_logging(verbose: bool) -> None:
    if verbose:
        setup_logger(level=logging.DEBUG)
        return
    level = logging.getLevelName(load_settings().log_level)
    setup_logger(level=level if isinstance(level, int) else logging.INFO)


def _read(path: str) -> bytes:
    return Path(path).read_bytes()


def _compute(
    filtration: Filtration, p: int, algo: str, *, reps: bool, n_jobs: int | None
) -> Barcode:
    if algo == "persistence":
        return persistence_barcode(filtration, p, with_representatives=reps)
    if algo == "canonical":
        return canonical_barcode(filtration, p, representatives=reps, n_jobs=n_jobs)
    pieces = subordinate_as_barcode(subordinate_barcode(filtration, p), p)
    return pieces if reps else Barcode(p, pieces.bars)


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        filtration = parse_filtration(_read(args.path))
    except OSError as exc:
        print(f"error: cannot read {args.path}: {exc.strerror or exc}")
        return EXIT_IO
    except FiltrationError as exc:
        print(f"invalid: {exc}")
        return EXIT_INPUT
    print(f"ok: {len(filtration)} simplices, {len(filtration.critical_times)} critical times")
    return EXIT_OK


def _cmd_barcode(args: argparse.Namespace) -> int:
    data = _read(args.path)
    filtration = parse_filtration(data)
    barcode = _compute(filtration, args.dim, args.algo, reps=args.reps, n_jobs=args.threads)
    if args.format == "text":
        for bar in barcode.bars:
            birth = format_time(bar.birth, decimal=args.decimal)
            print(f"{birth} {format_time(bar.death, decimal=args.decimal)}")
        return EXIT_OK
    document = barcodes_to_document(
        [barcode],
        input_bytes=data,
        algorithm=args.algo,
        representatives=args.reps,
        decimal=args.decimal,
    )
    sys.stdout.write(serialize_document(document))
    return EXIT_OK


def _load_barcode(path: str, p: int, algo: str, n_jobs: int | None) -> Barcode:
    data = _read(path)
    if looks_like_document(data):
        barcodes = document_to_barcodes(parse_document(data))
        if p not in barcodes:
            raise DimensionMismatch(p, min(barcodes, default=-1))
        return barcodes[p]
    return _compute(parse_filtration(data), p, algo, reps=False, n_jobs=n_jobs)


def _cmd_bottleneck(args: argparse.Namespace) -> int:
    left = _load_barcode(args.left, args.dim, args.algo, args.threads)
    right = _load_barcode(args.right, args.dim, args.algo, args.threads)
    print(format_time(bottleneck_distance(left, right), decimal=args.decimal))
    return EXIT_OK


def _cmd_render(args: argparse.Namespace) -> int:
    filtration = parse_filtration(_read(args.path))
    barcode = _compute(filtration, args.dim, args.algo, reps=False, n_jobs=args.threads)
    write_svg(barcode, args.out, title=f"{args.algo} H{args.dim}")
    return EXIT_OK


def _stability_config(args: argparse.Namespace) -> StabilityConfig:
    config = load_stability_config(args.config)
    overrides = {
        "trials": args.trials,
        "eps": args.eps,
        "dimension": args.dim,
        "kind": args.kind,
        "seed": args.random,
        "max_vertices": args.max_vertices,
    }
    values = config.model_dump()
    values.update({key: value for key, value in overrides.items() if value is not None})
    try:
        return StabilityConfig.model_validate(values)
    except ValidationError as exc:
        raise ValueError(f"Ungültige Stability-Parameter: {exc}") from exc


def _cmd_stability(args: argparse.Namespace) -> int:
    config = _stability_config(args)
    simplices = None
    if args.complex:
        simplices = [simplex for simplex, _ in parse_filtration(_read(args.complex))]
    reports = run_trials(config, simplices=simplices, n_jobs=args.threads)
    summary = summarize(reports)
    sys.stdout.write(to_json_lines(reports))
    sys.stdout.write(json.dumps({"summary": summary.model_dump()}) + "\n")
    if args.xlsx:
        write_workbook(reports, args.xlsx)
    if summary.passed != summary.trials:
        LOGGER.error("Fehlgeschlagene Seeds: %s", summary.failed_seeds)
        return EXIT_INTERNAL
    return EXIT_OK


def _cmd_instability(args: argparse.Namespace) -> int:
    rows = instability_demo([parse_time(scale) for scale in args.scales], p=args.dim)
    sys.stdout.write(to_json_lines(rows))
    return EXIT_OK


_COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "validate": _cmd_validate,
    "barcode": _cmd_barcode,
    "bottleneck": _cmd_bottleneck,
    "render": _cmd_render,
    "stability": _cmd_stability,
    "instability": _cmd_instability,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_INPUT

    try:
        _configure_logging(args.verbose)
    except ValueError as exc:
        LOGGER.error("%s", exc)
        return EXIT_INPUT

    try:
        return _COMMANDS[args.command](args)
    except OSError as exc:
        LOGGER.error("E/A-Fehler: %s", exc)
        return EXIT_IO
    except InternalInvariantViolation as exc:
        LOGGER.error("Interne Invariante verletzt: %s", exc)
        return EXIT_INTERNAL
    except (HarmoniaError, ValueError) as exc:
        LOGGER.error("Ungültige Eingabe: %s", exc)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
