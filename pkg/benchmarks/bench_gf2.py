"""Compare the compiled and pure-Python GF(2) kernels.

    python3 benchmarks/bench_gf2.py [--size 400] [--repeat 5] [--seed 0]

Both kernels see identical random bitset matrices; results are checked for
agreement before timings are reported.
"""

from __future__ import annotations

import argparse
import random
import timeit

from upsilon_cover import _gf2_py

try:
    from upsilon_cover import _gf2_ext
except ImportError:  # extension not built
    _gf2_ext = None


def random_matrix(rng: random.Random, rows: int, cols: int, density: float) -> list[int]:
    return [sum(1 << j for j in range(cols) if rng.random() < density) for _ in range(rows)]


def bench(kernel, name: str, mats: list[list[int]], repeat: int) -> dict[str, float]:
    out = {}
    for op in ("rank", "nullspace"):
        fn = getattr(kernel, op)
        t = min(timeit.repeat(lambda: [fn(m) for m in mats], number=1, repeat=repeat))
        out[op] = t / len(mats)
    rhs = [m[0] ^ m[-1] for m in mats]
    t = min(timeit.repeat(lambda: [kernel.solve(m, r) for m, r in zip(mats, rhs)], number=1, repeat=repeat))
    out["solve"] = t / len(mats)
    return out


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=400)
    ap.add_argument("--count", type=int, default=4)
    ap.add_argument("--density", type=float, default=0.5)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    mats = [random_matrix(rng, args.size, args.size, args.density) for _ in range(args.count)]
    # rank-deficient copies exercise the nullspace path
    mats += [m[: args.size // 2] * 2 for m in mats[:2]]

    kernels = [(_gf2_py, "python")]
    if _gf2_ext is not None:
        kernels.append((_gf2_ext, "cython"))
        for m in mats:
            assert _gf2_ext.rank(m) == _gf2_py.rank(m)
            assert len(_gf2_ext.nullspace(m)) == len(_gf2_py.nullspace(m))
    else:
        print("compiled kernel not built; timing the fallback only")

    results = {name: bench(k, name, mats, args.repeat) for k, name in kernels}
    print(f"{len(mats)} matrices, {args.size} x {args.size}, density {args.density}")
    print(f"{'op':<10}" + "".join(f"{name:>14}" for name in results) + ("      speedup" if len(results) == 2 else ""))
    for op in ("rank", "nullspace", "solve"):
        row = f"{op:<10}" + "".join(f"{r[op] * 1e3:>11.3f} ms" for r in results.values())
        if len(results) == 2:
            row += f"{results['python'][op] / results['cython'][op]:>12.1f}x"
        print(row)


if __name__ == "__main__":
    main()
