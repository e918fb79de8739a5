"""Command-line front end.

Every command prints one report on stdout in the requested format. JSON
documents carry a ``schema`` field and echo tolerance overrides. When
``TRISPECTRUM_OUTPUT_DIR`` is set, a copy of the report is also written there.

Exit status: 0 on success or match, 2 on mismatch, 1 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .closed_form import spectrum_begin, systole
from .config import DEFAULT
from .errors import TrispectrumError
from .oracle import MAX_WORD_LEN, Verdict, oracle_spectrum
from .rigidity import rigidity_scan
from .tiling import build_tiling_ball, rho3, rho_argmin_class, rho_empirical, verify_level3_bound
from .triangle import validate_params

__all__ = ["main", "build_parser", "run"]

OUTPUT_DIR_ENV = "TRISPECTRUM_OUTPUT_DIR"
EXIT_OK, EXIT_USAGE, EXIT_MISMATCH = 0, 1, 2
_RHO_RADIUS = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which would collide with "mismatch"
    def error(self, message):
        raise UsageError(message)


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "text"), default="text")
    common.add_argument("--tol", action="append", type=_tolerance, default=[], metavar="NAME=VALUE",
                        help="override a tolerance; repeatable")
    group = _Parser(add_help=False)
    group.add_argument("--p", type=int, required=True)
    group.add_argument("--q", type=int, required=True)

    parser = _Parser(prog="trispectrum", description="Length spectra of triangle groups Γ(2, p, q).")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common, group], help="certified beginning of the length spectrum")
    sub.add_parser("systole", parents=[common, group], help="shortest closed geodesic")
    rho = sub.add_parser("rho", parents=[common, group], help="rho(3) closed form with a tiling cross-check")
    rho.add_argument("--export-ball", type=Path, metavar="PATH", help="write the tiling ball as JSON")
    sub.add_parser("levels", parents=[common, group], help="level-3 bound verdict")
    oracle = sub.add_parser("oracle", parents=[common, group], help="brute-force word enumeration check")
    oracle.add_argument("--word-len", type=int, default=12)
    oracle.add_argument("--cutoff", type=float, default=None)
    scan = sub.add_parser("scan", parents=[common], help="systole collisions and rigidity candidate sets")
    scan.add_argument("--p-max", type=int, default=15)
    scan.add_argument("--q-max", type=int, default=15)
    verify = sub.add_parser("verify", parents=[common], help="run the acceptance grid")
    verify.add_argument("--only", type=int, action="append", metavar="N", help="run criterion N only; repeatable")
    return parser


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _text(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if key == "schema":
            continue
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{key}:")
            lines.extend("  " + ", ".join(f"{k}={v!r}" if isinstance(v, float) else f"{k}={v}" for k, v in item.items())
                         for item in value)
        else:
            lines.append(f"{key}: {value!r}" if isinstance(value, float) else f"{key}: {value}")
    return "\n".join(lines) + "\n"


def _flat_csv(doc: dict) -> str:
    scalars = [[k, v] for k, v in doc.items() if not isinstance(v, (list, dict))]
    return _csv(["field", "value"], scalars)


def _spectrum(args, tol):
    prefix = spectrum_begin((args.p, args.q), tol)
    doc = {"schema": "spectrum/1", **prefix.to_dict()}
    rows = [[e.label, e.value, e.cosh_half, ";".join(e.aliases)] for e in prefix.entries]
    return doc, _csv(["label", "value", "cosh_half", "aliases"], rows), EXIT_OK


def _systole(args, tol):
    validate_params(args.p, args.q)
    lv = systole((args.p, args.q))
    doc = {"schema": "systole/1", "p": args.p, "q": args.q, **lv.to_dict()}
    return doc, _csv(["label", "value", "cosh_half"], [[lv.label, lv.value, lv.cosh_half]]), EXIT_OK


def _rho(args, tol):
    case, value = rho3((args.p, args.q))
    ball = build_tiling_ball((args.p, args.q), _RHO_RADIUS, tol)
    empirical = rho_empirical(ball, 3)
    argmin = sorted(rho_argmin_class(ball))
    if args.export_ball is not None:
        args.export_ball.write_text(ball.to_json())
    delta = abs(empirical - value)
    doc = {
        "schema": "rho/1", "p": args.p, "q": args.q, "case": case, "value": value,
        "empirical": empirical, "delta": delta, "argmin_classes": [list(c) for c in argmin],
        "ball_vertices": len(ball),
    }
    status = EXIT_OK if delta <= 1e-9 else EXIT_MISMATCH
    return doc, _flat_csv(doc), status


def _levels(args, tol):
    v = verify_level3_bound((args.p, args.q))
    doc = {"schema": "levels/1", "p": args.p, "q": args.q, **v.to_dict()}
    return doc, _flat_csv(doc), EXIT_OK if v.holds else EXIT_MISMATCH


def _oracle(args, tol):
    if not 1 <= args.word_len <= MAX_WORD_LEN:
        raise UsageError(f"--word-len must lie in [1, {MAX_WORD_LEN}]")
    rep = oracle_spectrum((args.p, args.q), args.word_len, args.cutoff, tol)
    rows = [[found, lv.label, delta] for found, lv, delta in rep.matched]
    text_csv = _csv(["found", "label", "delta"], rows)
    return rep.to_dict(), text_csv, EXIT_OK if rep.verdict == Verdict.MATCH else EXIT_MISMATCH


def _scan(args, tol):
    rep = rigidity_scan(args.p_max, args.q_max, tol)
    return rep.to_dict(), rep.to_csv(), EXIT_OK if rep.ok else EXIT_MISMATCH


def _verify(args, tol):
    from .acceptance import CRITERIA, format_line, run_one

    known = [n for n, _, _ in CRITERIA]
    numbers = args.only or known
    if any(n not in known for n in numbers):
        raise UsageError(f"--only takes criterion numbers in {known}")
    results = [run_one(n) for n in numbers]
    for r in results:
        print(format_line(r), file=sys.stderr)
    doc = {
        "schema": "verify/1",
        "passed": sum(r.passed for r in results),
        "total": len(results),
        "criteria": [{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail} for r in results],
    }
    rows = [[r.number, r.name, "pass" if r.passed else "fail", r.detail] for r in results]
    return doc, _csv(["number", "name", "verdict", "detail"], rows), EXIT_OK if all(r.passed for r in results) else EXIT_MISMATCH


_COMMANDS = {
    "spectrum": _spectrum,
    "systole": _systole,
    "rho": _rho,
    "levels": _levels,
    "oracle": _oracle,
    "scan": _scan,
    "verify": _verify,
}


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Parse ``argv`` and return ``(exit status, rendered report)``."""
    args = build_parser().parse_args(argv)
    overrides = dict(args.tol)
    try:
        tol = DEFAULT.with_overrides(overrides)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0]) if exc.args else str(exc)) from None
    try:
        doc, as_csv, status = _COMMANDS[args.command](args, tol)
    except TrispectrumError as exc:
        if isinstance(exc, ValueError):
            raise UsageError(str(exc)) from None
        raise
    doc = {"schema": doc.pop("schema"), "tolerance_overrides": overrides, **doc}
    if args.output == "json":
        rendered = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    elif args.output == "csv":
        rendered = as_csv
    else:
        rendered = _text(doc)
    _save_copy(args, rendered)
    return status, rendered


def _save_copy(args, rendered: str) -> None:
    target = os.environ.get(OUTPUT_DIR_ENV)
    if not target:
        return
    out = Path(target)
    out.mkdir(parents=True, exist_ok=True)
    stem = args.command
    if hasattr(args, "p"):
        stem += f"-{args.p}-{args.q}"
    elif hasattr(args, "p_max"):
        stem += f"-{args.p_max}-{args.q_max}"
    ext = {"json": "json", "csv": "csv", "text": "txt"}[args.output]
    (out / f"{stem}.{ext}").write_text(rendered)


def main(argv: list[str] | None = None) -> int:
    try:
        status, rendered = run(argv)
    except UsageError as exc:
        print(f"trispectrum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(rendered)
    return status


if __name__ == "__main__":
    sys.exit(main())
