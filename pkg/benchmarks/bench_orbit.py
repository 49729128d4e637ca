"""Compare the compiled and pure-Python orbit kernels.

    python3 benchmarks/bench_orbit.py [--repeat 3] [--points 20]

Each workload expands a fixed set of seeded rationals in both systems and
reports the best wall time per backend. Results are checked for equality.
"""

import argparse
import random
import time
from fractions import Fraction

from negabase.expansions import System, in_domain, orbit
from negabase.kernels import BACKEND
from negabase.number_field import BaseSpec

WORKLOADS = [
    ("x^2-x-1", 200),
    ("x^3-x-1", 60),
    ("x^2-4*x-2", 300),
    ("x^4-x^3-x^2-x-1", 25),
]


def points(base, system, count, max_den, rng):
    lo, hi = (float(base.l), float(base.r)) if system == System.NEG else (0.0, 1.0)
    out = []
    while len(out) < count:
        q = rng.randint(max_den // 2, max_den)
        x = base.from_rational(Fraction(rng.randint(int(lo * q) - 1, int(hi * q) + 1), q))
        if in_domain(system, x):
            out.append(x)
    return out


def best_time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if BACKEND != "cython":
        print("compiled kernel not built; only the Python kernel will be timed")
    backends = ["python"] + (["cython"] if BACKEND == "cython" else [])
    rng = random.Random(args.seed)

    print(f"{'base':<20}{'sys':<5}{'steps':>9}" + "".join(f"{b:>10}" for b in backends) + f"{'speedup':>9}")
    for poly, max_den in WORKLOADS:
        base = BaseSpec.parse(poly)
        for system in (System.POS, System.NEG):
            xs = points(base, system, args.points, max_den, rng)
            times, results = {}, {}
            for b in backends:
                times[b], results[b] = best_time(
                    lambda b=b: [orbit(system, x, backend=b).digits for x in xs], args.repeat)
            if len(backends) == 2:
                assert results["python"] == results["cython"], "kernels disagree"
            steps = sum(len(d) for d in results["python"])
            row = f"{poly:<20}{system.value:<5}{steps:>9}" + "".join(f"{times[b]:>9.3f}s" for b in backends)
            if len(backends) == 2:
                row += f"{times['python'] / times['cython']:>8.1f}x"
            print(row)


if __name__ == "__main__":
    main()
