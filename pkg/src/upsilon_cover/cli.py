"""Command-line front end.

Exit codes: 0 success or pass, 1 usage or I/O error, 2 obstruction found
(or no equivalence), 3 an input violates a complex invariant.  The
environment variable UPSILON_CAP overrides search caps ("none" disables).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import complex_core as cc
from . import concordance as co
from . import grid as gd
from . import models as md
from . import oneone as oo
from . import regions as rg
from . import upsilon as up

EXIT_OK, EXIT_USAGE, EXIT_OBSTRUCTED, EXIT_INVARIANT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def resolve_cap(default: Optional[int]) -> Optional[int]:
    raw = os.environ.get("UPSILON_CAP")
    if raw is None or raw == "":
        return default
    if raw.strip().lower() == "none":
        return None
    try:
        return int(float(raw))
    except ValueError as exc:
        raise UsageError(f"UPSILON_CAP must be an integer or 'none', got {raw!r}") from exc


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        Path(path).write_text(text if text.endswith("\n") else text + "\n")


def _read_complex(path: str) -> cc.KnotComplex:
    K = cc.loads(Path(path).read_text())
    cc.require_valid(K)
    return K


def _int_list(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _grid_slice(p: int, h: int) -> cc.KnotComplex:
    return gd.spinc_slice(gd.build_torus_grid(p), h)


def _family_complex(family: str, n: int) -> cc.KnotComplex:
    if family in ("torus", "staircase"):
        return oo.torus_staircase(n)
    if family == "twist":
        return oo.twist_complex(n)
    raise UsageError(f"unknown family {family!r}")


def _complex_from_args(args: argparse.Namespace) -> list[tuple[str, cc.KnotComplex]]:
    """(label, complex) pairs described by --complex / --family / --grid-p."""
    if getattr(args, "complex", None):
        return [(args.complex, _read_complex(args.complex))]
    if getattr(args, "family", None):
        if args.n is None:
            raise UsageError("--family needs --n")
        return [(f"{args.family}:{args.n}", _family_complex(args.family, args.n))]
    if getattr(args, "grid_p", None):
        hs = _int_list(args.spinc) if args.spinc else [0]
        ks = _map(args, _grid_slice, [(args.grid_p, h) for h in hs])
        return [(f"grid:{args.grid_p}:{h}", K) for h, K in zip(hs, ks)]
    raise UsageError("give one of --complex, --family or --grid-p")


def _map(args: argparse.Namespace, fn: Callable, items: list[tuple]) -> list:
    if getattr(args, "parallel", False) and len(items) > 1:
        with ProcessPoolExecutor() as ex:
            return list(ex.map(fn, *zip(*items)))
    return [fn(*it) for it in items]


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--complex", help="complex JSON file")
    p.add_argument("--family", choices=["torus", "staircase", "twist"], help="built-in family")
    p.add_argument("--n", type=int, help="family parameter")
    p.add_argument("--grid-p", type=int, help="use the grid slices of L(p,1)")
    p.add_argument("--spinc", help="comma-separated spin^c labels for --grid-p")


# ---------------------------------------------------------------------------
# subcommands


def cmd_build(args: argparse.Namespace) -> int:
    if args.family == "random":
        K = cc.random_knot_complex(random.Random(args.seed), args.max_generators)
    elif args.family == "grid":
        if args.p is None:
            raise UsageError("--family grid needs --p")
        K = _grid_slice(args.p, args.spinc)
    elif args.family == "fused":
        if args.e is None or args.w is None:
            raise UsageError("--family fused needs --e and --w")
        K = md.make_fused(args.e, args.w).to_knot_complex()
    else:
        if args.n is None:
            raise UsageError(f"--family {args.family} needs --n")
        K = _family_complex(args.family, args.n)
    _write(args.out, cc.dumps(K))
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    K = cc.loads(Path(args.complex).read_text())
    bad = cc.validate(K)
    for v in bad:
        print(v)
    if bad:
        return EXIT_INVARIANT
    print("valid")
    return EXIT_OK


def cmd_upsilon(args: argparse.Namespace) -> int:
    out = []
    for label, K in _complex_from_args(args):
        if args.region in (None, "ht-sweep"):
            f = up.upsilon_function(K)
            out.append(f.to_csv())
        else:
            if args.region.startswith("ht:"):
                C = rg.parse_region(args.region)
            else:
                C = rg.from_dict(json.loads(Path(args.region).read_text()))
            out.append(f"{cc.fmt_fraction(up.upsilon_region(K, C))}\n")
    _write(args.out, "".join(out))
    return EXIT_OK


def _fmt_plain(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def cmd_tau(args: argparse.Namespace) -> int:
    values = [up.tau(K) for _, K in _complex_from_args(args)]
    print(",".join(_fmt_plain(v) for v in values))
    return EXIT_OK


def cmd_v(args: argparse.Namespace) -> int:
    rows = []
    for label, K in _complex_from_args(args):
        rows.append(",".join(_fmt_plain(cc.v_invariant(K, m)) for m in _int_list(args.m)))
    print("\n".join(rows))
    return EXIT_OK


def cmd_grid(args: argparse.Namespace) -> int:
    G = gd.build_torus_grid(args.p)
    status = EXIT_OK
    if args.check_differentials:
        only_rect, only_closed = gd.compare_differentials(G)
        bad_out = [g for g, c in gd.outgoing_counts(gd.rect_differential(G)).items() if c > 2]
        hs = list(range(-G.n, G.n + 1))
        slices = _map(args, _grid_slice, [(args.p, h) for h in hs])
        bad_slices = [h for h, K in zip(hs, slices) if cc.validate(K)]
        print(f"rectangles only: {len(only_rect)}; closed form only: {len(only_closed)}; "
              f"generators with > 2 arrows: {len(bad_out)}; invalid slices: {bad_slices}")
        if only_rect or only_closed or bad_out or bad_slices:
            status = EXIT_INVARIANT
    if args.spinc is not None:
        K = _grid_slice(args.p, args.spinc)
        _write(args.emit, cc.dumps(K))
    elif not args.check_differentials:
        print(f"grid L({args.p},1): {len(gd.generators(G))} generators, "
              f"{len(gd.rect_differential(G))} X-free rectangles")
    return status


def cmd_models(args: argparse.Namespace) -> int:
    if args.fused:
        e, w = _int_list(args.fused)
        M = md.make_fused(e, w)
    elif args.pole is not None:
        M = md.make_pole(args.pole)
    elif args.wire is not None:
        M = md.make_wire(args.wire)
    else:
        raise UsageError("give --fused e,w, --pole e or --wire w")
    for _ in range(args.reduce):
        M = md.reduce_step(M)
    if args.compare_grid:
        p, h = _int_list(args.compare_grid)
        ok = md.graded_iso_check(M, _grid_slice(p, h))
        print("isomorphic" if ok else "not isomorphic")
        return EXIT_OK if ok else EXIT_OBSTRUCTED
    _write(args.emit, cc.dumps(M.to_knot_complex()))
    return EXIT_OK


def cmd_lift(args: argparse.Namespace) -> int:
    K = oo.oneone(args.family, args.n)
    T = oo.lift_table(K)
    if args.table:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "j", "A", "class"])
        for r in T.rows:
            w.writerow([r.i, r.j, _fmt_plain(r.alexander), r.spinc_class])
        _write(args.table, buf.getvalue())
    if args.s0:
        _write(args.s0, cc.dumps(oo.lift_s0_complex(K)))
    if args.zero_classes or not (args.table or args.s0):
        print("zero classes: " + ",".join(map(str, oo.zero_alexander_classes(T))))
    return EXIT_OK


def _load_map(path: str) -> co.UpsilonMap:
    return co.upsilon_map_from_json(json.loads(Path(path).read_text()))


def _report(result) -> int:
    if isinstance(result, co.PassesWith):
        print(f"passes with subgroup of order {result.subgroup.order}: "
              + " ".join(",".join(map(str, x)) for x in result.subgroup))
        return EXIT_OK
    print(f"obstructed: {result.reason}")
    return EXIT_OBSTRUCTED


def cmd_obstruct(args: argparse.Namespace) -> int:
    cap = resolve_cap(10**4)
    if args.kind == "slice":
        U = _load_map(args.upsilon_map)
        H = co.FiniteAbelianGroup(tuple(_int_list(args.group))) if args.group else U.group
        return _report(co.slice_obstruction(U, H, cap))
    if args.kind == "concordance":
        U1, U2 = _load_map(args.upsilon_map), _load_map(args.other)
        return _report(co.concordance_test(U1, U2, U1.group, U2.group, cap))
    if args.kind == "finite-order":
        U = _load_map(args.upsilon_map)
        res = co.finite_order_S(U, args.p, args.t)
        if isinstance(res, co.Zero):
            print("S_t = 0")
            return EXIT_OK
        print(f"S_t = {_fmt_plain(res.value)} (nonzero)")
        return EXIT_OBSTRUCTED
    if args.kind == "independence":
        verdicts = co.torus_independence_driver(tuple(_int_list(args.ps)), args.bound, cap)
        survivors = [v for v in verdicts if not v.rejected]
        for v in verdicts:
            print(f"{','.join(map(str, v.coefficients))}: {v.reason}")
        print(f"{len(verdicts) - len(survivors)} of {len(verdicts)} relations ruled out")
        # success means independence is established within the bound
        return EXIT_OK if not survivors else EXIT_OBSTRUCTED
    if args.kind == "det-bound":
        ok = co.torus_det_bound(args.n, args.det)
        print("consistent" if ok else "obstructed")
        return EXIT_OK if ok else EXIT_OBSTRUCTED
    raise UsageError(f"unknown obstruction {args.kind!r}")


def cmd_compare(args: argparse.Namespace) -> int:
    K1, K2 = _read_complex(args.first), _read_complex(args.second)
    if args.graded:
        ok = md.graded_iso_check(K1, K2)
        print("isomorphic" if ok else "not isomorphic")
        return EXIT_OK if ok else EXIT_OBSTRUCTED
    try:
        res = cc.local_equiv_search(K1, K2, resolve_cap(args.cap))
    except cc.CapExceeded as exc:
        print(f"inconclusive: {exc}")
        return EXIT_USAGE
    if isinstance(res, cc.Equivalent):
        print("locally equivalent")
        return EXIT_OK
    print(f"not equivalent: {res.reason}")
    return EXIT_OBSTRUCTED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized drivers (default 0)")
    common.add_argument("--parallel", action="store_true", default=argparse.SUPPRESS,
                        help="fan out per spin^c work to worker processes")
    parser = argparse.ArgumentParser(prog="upsilon-cover", description=__doc__.split("\n")[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)
    _sub = sub.add_parser
    sub.add_parser = lambda *a, **kw: _sub(*a, parents=[common], **kw)  # type: ignore[method-assign]

    p = sub.add_parser("build", help="emit a complex as JSON")
    p.add_argument("--family", required=True, choices=["torus", "staircase", "twist", "grid", "fused", "random"])
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--spinc", type=int, default=0)
    p.add_argument("--e", type=int)
    p.add_argument("--w", type=int)
    p.add_argument("--max-generators", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("validate", help="check complex invariants")
    p.add_argument("--complex", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("upsilon", help="Upsilon function (CSV) or a single region value")
    _add_source(p)
    p.add_argument("--region", help="'ht-sweep' (default), 'ht:<t>' or a region JSON file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_upsilon)

    p = sub.add_parser("tau", help="tau as the negated initial slope of Upsilon")
    _add_source(p)
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("v", help="V invariants")
    _add_source(p)
    p.add_argument("--m", default="0", help="comma-separated m values")
    p.set_defaults(func=cmd_v)

    p = sub.add_parser("grid", help="twisted grid for L(p,1)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--spinc", type=int)
    p.add_argument("--emit")
    p.add_argument("--check-differentials", action="store_true")
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("models", help="poles, wires and fused complexes")
    p.add_argument("--fused", help="e,w")
    p.add_argument("--pole", type=int)
    p.add_argument("--wire", type=int)
    p.add_argument("--reduce", type=int, default=0, help="apply reduce_step this many times")
    p.add_argument("--compare-grid", help="p,h: compare with the grid slice")
    p.add_argument("--emit")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("lift", help="lift tables of (1,1)-knots")
    p.add_argument("--family", required=True, choices=["torus", "twist"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--table")
    p.add_argument("--s0")
    p.add_argument("--zero-classes", action="store_true")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("obstruct", help="slice, concordance and independence obstructions")
    p.add_argument("kind", choices=["slice", "concordance", "finite-order", "independence", "det-bound"])
    p.add_argument("--upsilon-map")
    p.add_argument("--other", help="second Upsilon map for 'concordance'")
    p.add_argument("--group", help="cyclic orders, e.g. 9 or 3,3")
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--t", default="1")
    p.add_argument("--ps", default="3,5,7")
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--n", type=int)
    p.add_argument("--det", type=int)
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("compare", help="local equivalence (or graded isomorphism) of two complexes")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--cap", type=int, default=10**6)
    p.add_argument("--graded", action="store_true")
    p.set_defaults(func=cmd_compare)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for key, default in (("seed", 0), ("parallel", False)):
        if not hasattr(args, key):
            setattr(args, key, default)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (cc.InvalidComplex, cc.NotKnotType, gd.DisconnectedSlice) as exc:
        print(f"invariant violated: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (OSError, json.JSONDecodeError, KeyError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[Sequence[str]] = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
