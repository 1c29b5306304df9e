"""Command-line entry point.

Exit codes: 0 success, 1 malformed input, 2 internal invariant violation,
3 verification failed.  JSON goes to standard output (and to --json-out);
diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .family import paper_family, run_sweep, verify_theorem_hypotheses
from .isometry import LatticeIsometry, is_isometry, is_o_plus, phi
from .lattice import DimensionMismatch, k3_lattice, minus_E8, vector_degree, vector_from_json
from .roots.enumerate import enumerate_norm, standard_basis
from .roots.linalg import IndefiniteRestriction
from .roots.search import NotAPositivePlane, find_roots_orthogonal_to
from .scalars import as_fraction, fraction_str
from .search2d import grid, search2d

log = logging.getLogger("k3arith")

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL, EXIT_FAILED = 0, 1, 2, 3


def _error(message: str) -> None:
    sys.stderr.write(f"k3arith: error: {message}\n")


class InputError(Exception):
    """Malformed user input (exit code 1)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def _fraction(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} ({exc})")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="k3arith", description="Exact verification tools for the K3 lattice.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, s_min="-5", s_max="5", samples=1001):
        p.add_argument("--s-min", type=_fraction, default=Fraction(s_min))
        p.add_argument("--s-max", type=_fraction, default=Fraction(s_max))
        p.add_argument("--samples", type=_positive_int, default=samples)
        p.add_argument("--workers", type=_positive_int, default=1)
        p.add_argument("--json-out", metavar="FILE")

    p = sub.add_parser("verify-paper", help="check every hypothesis for the built-in one-parameter family")
    common(p)
    p.add_argument("--e-scale", type=_fraction, default=None, help="scale of e' (0 gives the degenerate control)")
    p.add_argument("--symbolic-only", action="store_true")
    p.add_argument("--samples-only", action="store_true")

    p = sub.add_parser("roots", help="roots orthogonal to user-supplied vectors")
    p.add_argument("vectors", help="JSON file: list of vectors or {kappa, w1, w2}")
    p.add_argument("--s", type=_fraction, default=None, help="parameter value for s-dependent input")
    p.add_argument("--list-witnesses", action="store_true")
    p.add_argument("--json-out", metavar="FILE")

    p = sub.add_parser("e8-roots", help="enumerate the roots of -E8")
    p.add_argument("--list-witnesses", action="store_true")
    p.add_argument("--json-out", metavar="FILE")

    p = sub.add_parser("check-isometry", help="isometry and O+ test for a 22x22 matrix")
    p.add_argument("matrix", help='JSON file: {"matrix": [[...]]} or a bare array')
    p.add_argument("--json-out", metavar="FILE")

    p = sub.add_parser("scan", help="per-sample membership table over an s-range")
    common(p, samples=11)
    p.add_argument("--e-scale", type=_fraction, default=None)
    p.add_argument("--list-witnesses", action="store_true")

    p = sub.add_parser("search2d", help="experimental grid search over two-parameter families")
    common(p, s_min="-1", s_max="1", samples=3)
    p.add_argument("--p", type=_positive_int, nargs="+", default=[1, 2, 3], dest="p_values")
    p.add_argument("--symbolic-only", action="store_true")
    p.add_argument("--samples-only", action="store_true")
    return parser


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}")
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}")


def _check_range(args):
    if args.s_min >= args.s_max and args.samples > 1:
        raise InputError("--s-min must be smaller than --s-max")
    if getattr(args, "symbolic_only", False) and getattr(args, "samples_only", False):
        raise InputError("--symbolic-only and --samples-only are mutually exclusive")


def _read_vectors(data) -> List:
    if isinstance(data, dict):
        missing = [k for k in ("kappa", "w1", "w2") if k not in data]
        if missing:
            raise InputError(f"missing keys: {', '.join(missing)}")
        data = [data["kappa"], data["w1"], data["w2"]]
    if not isinstance(data, list) or not data:
        raise InputError("expected a non-empty list of vectors")
    try:
        return [vector_from_json(v) for v in data]
    except (DimensionMismatch, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise InputError(f"bad vector: {exc}")


def _read_matrix(data):
    if isinstance(data, dict):
        data = data.get("matrix")
    n = k3_lattice().rank
    if not isinstance(data, list) or len(data) != n or any(not isinstance(r, list) or len(r) != n for r in data):
        raise InputError(f"expected a {n}x{n} integer matrix")
    out = []
    for row in data:
        cells = []
        for a in row:
            if isinstance(a, bool) or not isinstance(a, (int, str)):
                raise InputError(f"matrix entries must be integers, got {a!r}")
            try:
                q = as_fraction(a)
            except (ValueError, TypeError, ZeroDivisionError):
                raise InputError(f"matrix entries must be integers, got {a!r}")
            if q.denominator != 1:
                raise InputError(f"matrix entries must be integers, got {a!r}")
            cells.append(int(q))
        out.append(cells)
    return out


def cmd_verify_paper(args):
    _check_range(args)
    fam = paper_family(args.e_scale)
    sweep = grid(args.s_min, args.s_max, args.samples)
    log.info("family %s, %d sample points, %d workers", fam.name, len(sweep), args.workers)
    cert = verify_theorem_hypotheses(
        fam,
        phi(),
        sweep=sweep,
        workers=args.workers,
        symbolic=not args.samples_only,
        samples=not args.symbolic_only,
    )
    if cert.consistency_violation:
        _error(f"internal inconsistency: {cert.consistency_violation}")
        return cert.to_json(), EXIT_INTERNAL
    return cert.to_json(), EXIT_OK if cert.all_pass else EXIT_FAILED


def cmd_roots(args):
    vectors = _read_vectors(_load_json(args.vectors))
    if any(vector_degree(v) > 0 for v in vectors) and args.s is None:
        raise InputError("the vectors depend on s; pass --s")
    try:
        result = find_roots_orthogonal_to(vectors, at=args.s)
    except NotAPositivePlane as exc:
        raise InputError(str(exc))
    except IndefiniteRestriction as exc:
        raise InputError(f"orthogonal complement is not negative definite: {exc}")
    return result.to_json(list_witnesses=args.list_witnesses), EXIT_OK if result.is_empty else EXIT_FAILED


def cmd_e8_roots(args):
    lat = minus_E8()
    roots = enumerate_norm(standard_basis(lat.rank), lat, -2)
    out = {"count": len(roots)}
    if args.list_witnesses:
        out["roots"] = [list(r) for r in roots]
    return out, EXIT_OK


def cmd_check_isometry(args):
    matrix = _read_matrix(_load_json(args.matrix))
    lat = k3_lattice()
    iso = is_isometry(matrix, lat)
    out = {"isometry": iso, "o_plus": False}
    if iso:
        g = LatticeIsometry(tuple(tuple(r) for r in matrix), lat)
        out["o_plus"] = is_o_plus(g)
        out["determinant"] = g.determinant
    return out, EXIT_OK if iso else EXIT_FAILED


def cmd_scan(args):
    _check_range(args)
    fam = paper_family(args.e_scale)
    rows = run_sweep(fam, grid(args.s_min, args.s_max, args.samples), args.workers)
    if not args.list_witnesses:
        for r in rows:
            r.pop("witness", None)
    ok = all(r["in_k_omega_zero"] for r in rows)
    out = {
        "family": fam.name,
        "e_scale": fraction_str(fam.e_scale),
        "rows": rows,
        "all_in_k_omega_zero": ok,
    }
    return out, EXIT_OK if ok else EXIT_FAILED


def cmd_search2d(args):
    _check_range(args)
    out = search2d(
        args.p_values,
        args.s_min,
        args.s_max,
        args.samples,
        workers=args.workers,
        symbolic=not args.samples_only,
        run_samples=not args.symbolic_only,
    )
    return out, EXIT_OK if out["passing"] else EXIT_FAILED


COMMANDS = {
    "verify-paper": cmd_verify_paper,
    "roots": cmd_roots,
    "e8-roots": cmd_e8_roots,
    "check-isometry": cmd_check_isometry,
    "scan": cmd_scan,
    "search2d": cmd_search2d,
}


def render(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        payload, code = COMMANDS[args.command](args)
    except InputError as exc:
        _error(str(exc))
        return EXIT_INPUT
    except Exception as exc:  # anything else is a bug or a broken invariant
        _error(f"internal error: {type(exc).__name__}: {exc}")
        return EXIT_INTERNAL
    text = render(payload)
    sys.stdout.write(text)
    if getattr(args, "json_out", None):
        try:
            with open(args.json_out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            _error(f"cannot write {args.json_out}: {exc.strerror}")
            return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
