"""Time the compiled kernels against the numpy fallback on representative inputs.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from charsum import kernels
from charsum.arith import primes_upto, spf_table
from charsum.characters import build_group


def cases():
    q = 99_991
    G = build_group(q)
    chi = G.character(12_345)
    logs = G.log_matrix
    w = np.asarray(chi.weights, dtype=np.int64)
    d = chi.order
    a = chi.residue_exponents

    G2 = build_group(1009)
    orders, _ = G2.character_table
    W = G2.weight_matrix(G2.exponent_matrix, orders)

    N = 10**6
    spf = spf_table(N)
    p = primes_upto(N)
    pexp = np.zeros(N + 1, dtype=np.int64)
    pexp[p] = p % 7
    flag = np.zeros(N + 1, dtype=np.uint8)
    flag[p[p % 3 == 1]] = 1
    x = np.random.default_rng(0).random(N)

    reps = np.arange(1, d // 2 + 1, dtype=np.int64)
    yield "residue_exponents q=99991", lambda k: k.residue_exponents(logs, w, d)
    yield "level_counts q=99991 x=q", lambda k: k.level_counts(logs, w, d, q)
    yield "level_stats_batch q=1009 all chars", lambda k: k.level_stats_batch(G2.log_matrix, W, orders, 1009)
    yield f"prefix_max_powers q=99991 ({len(reps[:200])} powers)", lambda k: k.prefix_max_powers(a, d, reps[:200], 0.0)
    yield "prefix_max_batch q=1009 all chars", lambda k: k.prefix_max_batch(G2.log_matrix, W, orders, 1009)
    yield "multiplicative_exponents N=1e6", lambda k: k.multiplicative_exponents(spf, pexp, 7, N)
    yield "additive_counts N=1e6", lambda k: k.additive_counts(spf, flag, N)
    yield "kahan_cumsum N=1e6", lambda k: k.kahan_cumsum(x)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.compiled is None:
        raise SystemExit("compiled extension not available; build with `pip install -e . --no-build-isolation`")
    print(f"{'kernel':<44}{'cython (s)':>12}{'python (s)':>12}{'speedup':>10}")
    for name, fn in cases():
        tc = min(timeit.repeat(lambda: fn(kernels.compiled), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fn(kernels.python), number=1, repeat=args.repeat))
        print(f"{name:<44}{tc:>12.4f}{tp:>12.4f}{tp / tc:>9.1f}x")


if __name__ == "__main__":
    main()
