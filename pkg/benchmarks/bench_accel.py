"""Compare the numba and numpy backends of the F_p kernels.

    python3 benchmarks/bench_accel.py [--repeat 3] [--json out.json]

Both backends are run on the same inputs, their answers are checked for
equality, and the best wall time of each is printed.
"""

import argparse
import json
import random
import time

import numpy as np

from strassmann import _accel


def random_system(p, nvars, nterms, deg, count, rng):
    polys = []
    for _ in range(count):
        f = {}
        for _ in range(nterms):
            e = tuple(rng.randrange(deg + 1) for _ in range(nvars))
            f[e] = rng.randrange(1, p)
        polys.append(f)
    # plant a zero at the origin so the answer is never empty
    for f in polys:
        f.pop((0,) * nvars, None)
    return polys


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_zeros(p, nvars, repeat, rng):
    polys = random_system(p, nvars, 6, 3, nvars, rng)
    offsets, exps, coeffs = _accel.pack_polys(polys, nvars)
    if _accel.backend() == "numba":
        _accel._zeros_numba(p, nvars, offsets, exps, coeffs)  # compile
    t_np, z_np = best_time(lambda: _accel._zeros_numpy(p, nvars, offsets, exps, coeffs), repeat)
    row = {"kernel": "common_zeros", "size": f"p={p} n={nvars}", "numpy_s": t_np}
    if _accel.backend() == "numba":
        t_nb, hit = best_time(lambda: _accel._zeros_numba(p, nvars, offsets, exps, coeffs), repeat)
        idx = np.nonzero(hit)[0]
        assert idx.size == len(z_np), "backends disagree on the zero set"
        row["numba_s"] = t_nb
    return row


def bench_rank(p, size, repeat, rng):
    mat = np.array([[rng.randrange(p) for _ in range(size)] for _ in range(size)], dtype=np.int64)
    mat[-1] = (mat[0] + 2 * mat[1]) % p  # force a rank drop
    t_np, r_np = best_time(lambda: _accel._rank_numpy(mat, p), repeat)
    row = {"kernel": "rank_mod_p", "size": f"p={p} {size}x{size}", "numpy_s": t_np}
    if _accel.backend() == "numba":
        _accel._rank_numba(mat, p)
        t_nb, r_nb = best_time(lambda: _accel._rank_numba(mat, p), repeat)
        assert r_nb == r_np, "backends disagree on the rank"
        row["numba_s"] = t_nb
    return row


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", help="also write the rows as JSON")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    rows = [
        bench_zeros(31, 3, args.repeat, rng),
        bench_zeros(101, 3, args.repeat, rng),
        bench_zeros(11, 5, args.repeat, rng),
        bench_rank(10007, 120, args.repeat, rng),
        bench_rank(10007, 300, args.repeat, rng),
    ]
    print(f"backend available: {_accel.backend()}")
    print(f"{'kernel':<14}{'size':<20}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for r in rows:
        nb = r.get("numba_s")
        speed = f"{r['numpy_s'] / nb:8.1f}x" if nb else "      n/a"
        nb_txt = f"{nb:12.4f}" if nb else f"{'n/a':>12}"
        print(f"{r['kernel']:<14}{r['size']:<20}{r['numpy_s']:12.4f}{nb_txt}{speed:>10}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
