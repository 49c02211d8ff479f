"""Compare the numba and numpy search backends on synthetic instances.

Usage::

    python3 benchmarks/bench_backends.py [--instances 200] [--seed 0] [--max-sentences 15]

Both backends must return the same incumbent, oracle family and node count
on every instance; the script exits non-zero otherwise.
"""

import argparse
import statistics
import sys
import time

import numpy as np

from oracle_summ.search import enumerate_oracles
from oracle_summ.synthetic import instance_bank, random_instance


def run(bank, lmax, backend):
    t0 = time.perf_counter()
    res = enumerate_oracles(bank, lmax, backend=backend)
    return res, time.perf_counter() - t0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-sentences", type=int, default=15)
    ap.add_argument("--max-lmax", type=int, default=30)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    suite = []
    for _ in range(args.instances):
        inst = random_instance(rng, max_sentences=args.max_sentences, max_lmax=args.max_lmax)
        suite.append((instance_bank(inst), inst["lmax"]))

    run(*suite[0], "numba")  # compile (or load the cache) before timing
    times = {"numba": [], "numpy": []}
    disagree = 0
    for bank, lmax in suite:
        a, ta = run(bank, lmax, "numba")
        b, tb = run(bank, lmax, "numpy")
        times["numba"].append(ta)
        times["numpy"].append(tb)
        disagree += (a.numerator, a.oracles, a.nodes_checked) != (b.numerator, b.oracles, b.nodes_checked)

    print(f"{args.instances} instances, |D| <= {args.max_sentences}, lmax <= {args.max_lmax}")
    print(f"{'backend':<8} {'total s':>9} {'median ms':>10} {'max ms':>9}")
    for name, ts in times.items():
        print(f"{name:<8} {sum(ts):>9.3f} {1e3 * statistics.median(ts):>10.3f} {1e3 * max(ts):>9.3f}")
    print(f"speedup (total numpy / total numba): {sum(times['numpy']) / sum(times['numba']):.1f}x")
    print(f"disagreements: {disagree}")
    return 1 if disagree else 0


if __name__ == "__main__":
    sys.exit(main())
