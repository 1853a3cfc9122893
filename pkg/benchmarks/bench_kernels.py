"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from euclidean_ideals.kernels import _fallback

try:
    from euclidean_ideals.kernels import _ckernels
except ImportError:
    _ckernels = None

from euclidean_ideals.orders import fincke_pohst_form, maximal_order
from euclidean_ideals.zmod import small_primes


def cases():
    order = maximal_order([27, -30, -1, 1])
    gram = [[float(x) for x in row] for row in order.trace_form]
    q = fincke_pohst_form(gram)
    base = small_primes(1001)
    rng = random.Random(1)
    p = 1_000_003
    bases = [rng.randrange(2, p) for _ in range(2000)]
    exps = [(p - 1) // l for l in (2, 3, 166667)]
    return {
        "enumerate_ellipsoid": lambda m: m.enumerate_ellipsoid(q, 4000.0, 10**7),
        "sieve_segment": lambda m: m.sieve_segment(0, 1 << 20, base),
        "progression_primes": lambda m: m.progression_primes(0, 1 << 20, 1455, 1456, base),
        "power_orders_ok": lambda m: m.power_orders_ok(bases, exps, p),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'kernel':<22}{'python (s)':>12}{'cython (s)':>12}{'speedup':>10}")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_fallback), number=1, repeat=args.repeat))
        if _ckernels is None:
            print(f"{name:<22}{py:>12.4f}{'n/a':>12}{'':>10}")
            continue
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=1, repeat=args.repeat))
        print(f"{name:<22}{py:>12.4f}{cy:>12.4f}{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
