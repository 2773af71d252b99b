"""Command-line surface: build Lax data, verify invariants, map across the
duality, and integrate flows.

Output conventions
------------------
* JSON for structured reports; CSV/TSV for trajectories and matrix-entry
  tables.  All floats carry 17 significant digits so files round-trip to
  the exact double.
* Complex matrices serialize as {rows, cols, re: [...], im: [...]} with
  entries flattened row-major.
* Exit codes: 0 success, 1 verification failure (or runtime error),
  2 usage error, 3 non-generic point.
* Output is byte-identical for fixed seed and flags.  The default seed
  comes from the TODADUAL_SEED environment variable when set; explicit
  --seed wins.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .duality import toda_to_goldfish, goldfish_to_toda, verify_duality_identities
from .errors import NonGenericPointError, TodaDualError, ValidationError
from .rootsys import FAMILIES, AlgebraType, RootDatum, build_root_datum
from .sampling import sample_flow_toda, sample_toda, spawn_rng
from .toda import (
    TodaPoint,
    build_lax,
    integrate_flow,
    quadratic_index,
    toda_group_element,
    toda_hamiltonians,
)
from .verify import RANK_CAP, run_suite

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_NONGENERIC = 3

SEED_ENV = "TODADUAL_SEED"


def _fmt(x: float) -> str:
    """17-significant-digit decimal, round-trip exact for doubles."""
    return "%.17g" % float(x)


def _json_text(obj, indent: int = 0) -> str:
    """Recursive JSON emitter with fixed float formatting.

    json.dumps uses shortest-repr floats, which breaks the fixed-width
    contract, so structured output goes through this instead.
    """
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f'{pad}  {json.dumps(str(k))}: {_json_text(v, indent + 1)}' for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(not isinstance(v, (dict, list, tuple)) for v in seq)
        if flat:
            return "[" + ", ".join(_json_text(v, indent) for v in seq) + "]"
        items = [f"{pad}  {_json_text(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if np.isnan(x):
            return "NaN"
        if np.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return _fmt(x)
    if obj is None:
        return "null"
    return json.dumps(str(obj))


def _matrix_payload(M: np.ndarray) -> dict:
    M = np.asarray(M, dtype=complex)
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "re": [float(v) for v in M.real.ravel(order="C")],
        "im": [float(v) for v in M.imag.ravel(order="C")],
    }


def _vector(values) -> list:
    return [float(v) for v in np.asarray(values, dtype=float)]


def _parse_vector(text: str, rank: int, flag: str) -> np.ndarray:
    try:
        values = np.array([float(tok) for tok in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ValidationError(f"{flag} expects comma-separated floats: {exc}") from None
    if values.shape != (rank,):
        raise ValidationError(f"{flag} must have {rank} entries, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise ValidationError(f"{flag} has non-finite entries")
    return values


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def _datum_for(args) -> RootDatum:
    datum = build_root_datum(AlgebraType(args.type, args.rank))
    if args.rank > RANK_CAP:
        print(
            f"warning: rank {args.rank} exceeds the desk-scale bound {RANK_CAP}; "
            "minor enumeration cost grows combinatorially",
            file=sys.stderr,
        )
    return datum


def _toda_point(args, datum: RootDatum, sampler=sample_toda):
    """Explicit --p/--q point, or a seeded sample when neither is given.

    Returns (point, seed_used); seed_used is None for explicit points.
    """
    n = datum.algebra.rank
    if (args.p is None) != (args.q is None):
        raise ValidationError("provide both --p and --q, or neither")
    if args.p is not None:
        return (
            TodaPoint(q=_parse_vector(args.q, n, "--q"), p=_parse_vector(args.p, n, "--p")),
            None,
        )
    seed = _resolve_seed(args)
    return sampler(datum, spawn_rng(seed, 0)), seed


def _header(args, command: str, seed) -> dict:
    return {
        "tool": "todadual",
        "version": __version__,
        "command": command,
        "family": args.type,
        "rank": int(args.rank),
        "seed": None if seed is None else int(seed),
    }


def _require_format(args, allowed: tuple, what: str) -> None:
    if args.format not in allowed:
        raise ValidationError(f"{what} supports --format {'|'.join(allowed)}, got {args.format}")


def cmd_lax(args) -> tuple[int, str]:
    datum = _datum_for(args)
    point, seed = _toda_point(args, datum)
    g = toda_group_element(datum, point)
    X = build_lax(datum, point)
    if args.format == "json":
        payload = {
            "header": _header(args, "lax", seed),
            "point": {"q": _vector(point.q), "p": _vector(point.p)},
            "g": _matrix_payload(g),
            "X": _matrix_payload(X),
        }
        return EXIT_OK, _json_text(payload) + "\n"
    sep = "," if args.format == "csv" else "\t"
    lines = [sep.join(["matrix", "row", "col", "re", "im"])]
    for name, M in (("g", g), ("X", X)):
        M = np.asarray(M, dtype=complex)
        for i in range(M.shape[0]):
            for j in range(M.shape[1]):
                lines.append(
                    sep.join([name, str(i), str(j), _fmt(M[i, j].real), _fmt(M[i, j].imag)])
                )
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_verify(args) -> tuple[int, str]:
    _require_format(args, ("json",), "verify")
    datum = _datum_for(args)
    seed = _resolve_seed(args)
    report = run_suite(datum, seed, npoints=args.points, flow_steps=args.flow_steps)
    report["header"] = {
        "tool": "todadual",
        "version": __version__,
        "command": "verify",
        **report["header"],
    }
    code = EXIT_OK if report["all_passed"] else EXIT_FAILURE
    return code, _json_text(report) + "\n"


def cmd_dual_map(args) -> tuple[int, str]:
    _require_format(args, ("json",), "dual-map")
    datum = _datum_for(args)
    point, seed = _toda_point(args, datum)
    kmax = args.kmax if args.kmax is not None else datum.algebra.rank
    gp = toda_to_goldfish(datum, point)
    report = verify_duality_identities(datum, point, kmax)
    back = goldfish_to_toda(datum, gp)
    roundtrip_err = float(
        max(np.max(np.abs(back.q - point.q)), np.max(np.abs(back.p - point.p)))
    )
    payload = {
        "header": _header(args, "dual-map", seed),
        "toda_point": {"q": _vector(point.q), "p": _vector(point.p)},
        "goldfish_point": {"qhat": _vector(gp.qhat), "phat": _vector(gp.phat)},
        "identities": {
            "kmax": int(kmax),
            "toda_values": _vector(report.toda_values),
            "goldfish_values": _vector(report.goldfish_values),
            "jk_toda_gauge": _vector(report.jk_toda_gauge),
            "ik_moser_gauge": _vector(report.ik_moser_gauge),
            "max_relative_mismatch": float(report.max_relative_mismatch),
        },
        "roundtrip": {
            "q": _vector(back.q),
            "p": _vector(back.p),
            "max_abs_error": roundtrip_err,
        },
    }
    return EXIT_OK, _json_text(payload) + "\n"


def cmd_integrate(args) -> tuple[int, str]:
    _require_format(args, ("csv", "tsv"), "integrate")
    datum = _datum_for(args)
    point, _ = _toda_point(args, datum, sampler=sample_flow_toda)
    n = datum.algebra.rank
    k = args.hamiltonian if args.hamiltonian is not None else quadratic_index(datum)
    traj = integrate_flow(datum, point, k, args.dt, args.steps)
    sep = "," if args.format == "csv" else "\t"
    names = (
        ["t"]
        + [f"q{i}" for i in range(1, n + 1)]
        + [f"p{i}" for i in range(1, n + 1)]
        + [f"H{i}" for i in range(1, n + 1)]
        + [f"lam{i}" for i in range(1, datum.size + 1)]
    )
    lines = [sep.join(names)]
    for step, row in enumerate(traj):
        pt = TodaPoint(q=row[:n], p=row[n:])
        hs = toda_hamiltonians(datum, pt)
        lam = np.linalg.eigvalsh(build_lax(datum, pt))[::-1]  # descending, chamber order
        cells = [_fmt(step * args.dt)]
        cells += [_fmt(v) for v in row]
        cells += [_fmt(v) for v in hs]
        cells += [_fmt(v) for v in lam]
        lines.append(sep.join(cells))
    return EXIT_OK, "\n".join(lines) + "\n"


def _add_common(sub: argparse.ArgumentParser, default_format: str) -> None:
    sub.add_argument("--type", required=True, choices=list(FAMILIES), help="algebra family")
    sub.add_argument("--rank", required=True, type=int, help="rank n")
    sub.add_argument("--seed", type=int, default=None, help=f"sampler seed (default: ${SEED_ENV} or 0)")
    sub.add_argument("--format", default=default_format, choices=["json", "csv", "tsv"], help="output format")
    sub.add_argument("--out", default=None, metavar="PATH", help="output file (default: stdout)")


def _add_point_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--p", default=None, help="comma-separated momenta (with --q)")
    sub.add_argument("--q", default=None, help="comma-separated positions (with --p)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="todadual",
        description="Open Toda chains of types A-D, their rational goldfish duals, "
        "and numerical verification of the duality.",
    )
    parser.add_argument("--version", action="version", version=f"todadual {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    lax = commands.add_parser("lax", help="emit the group element g and Lax matrix X at a point")
    _add_common(lax, "json")
    _add_point_flags(lax)
    lax.set_defaults(fn=cmd_lax)

    ver = commands.add_parser("verify", help="run the seeded invariant suite, JSON report")
    _add_common(ver, "json")
    ver.add_argument("--points", type=int, default=8, help="sample points per property")
    ver.add_argument("--flow-steps", type=int, default=200, help="integrator steps in the flow property")
    ver.set_defaults(fn=cmd_verify)

    dual = commands.add_parser("dual-map", help="map a Toda point to its dual coordinates and back")
    _add_common(dual, "json")
    _add_point_flags(dual)
    dual.add_argument("--kmax", type=int, default=None, help="number of invariant pairs to compare")
    dual.set_defaults(fn=cmd_dual_map)

    integ = commands.add_parser("integrate", help="implicit-midpoint trajectory with invariant columns")
    _add_common(integ, "csv")
    _add_point_flags(integ)
    integ.add_argument("--dt", type=float, default=1.0e-3, help="time step")
    integ.add_argument("--steps", type=int, default=1000, help="number of steps")
    integ.add_argument(
        "--hamiltonian",
        type=int,
        default=None,
        metavar="K",
        help="flow index (default: the quadratic one)",
    )
    integ.set_defaults(fn=cmd_integrate)
    return parser


def _write(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return 0 if exc.code is None else int(exc.code)
    try:
        code, text = args.fn(args)
        _write(text, args.out)
        return code
    except ValidationError as exc:
        print(f"todadual: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonGenericPointError as exc:
        print(f"todadual: non-generic point: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    except TodaDualError as exc:
        print(f"todadual: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"todadual: i/o error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
