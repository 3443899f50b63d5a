#!/usr/bin/env python3
"""Simulator correctness against the exact Markov chain.

On complete graphs small enough to enumerate (state space 3^n), the
expected time to full consensus solves a linear system over the
one-interaction transition matrix.  Averaging many stochastic runs must
land within sampling error of that value; this is the sharpest
end-to-end check the simulator has.
"""

import math

import numpy as np

from ngpair import network as nw, oracle
from ngpair.naming_game import SimConfig, run

CASES = [
    ("n=3, start (A,B,B)", 3, 0, (nw.A, nw.B, nw.B), ("A", "B", "B"), 11),
    ("n=4, start (A,A,B,B)", 4, 0, (nw.A, nw.A, nw.B, nw.B),
     ("A", "A", "B", "B"), 12),
    ("n=4, one committed, rest B", 4, 1, (nw.C, nw.B, nw.B, nw.B),
     ("B", "B", "B"), 13),
    ("n=5, one committed, rest B", 5, 1, (nw.C, nw.B, nw.B, nw.B, nw.B),
     ("B", "B", "B", "B"), 14),
]
RUNS = 40_000


def main():
    print(f"{RUNS} runs per case, eta = 1 (true absorption)\n")
    print(f"{'case':<28} {'exact':>8} {'simulated':>10} {'dev/se':>7}")
    for label, n, committed, ops, chain_init, seed in CASES:
        exact = oracle.exact_expected_consensus_time(n, committed, 1.0,
                                                     chain_init)
        net = nw.complete_network(n)
        init = nw.OpinionState(np.array(ops, dtype=np.int8), committed)
        cfg = SimConfig(n=n, k_avg=n - 1.0, eta=1.0, runs=1, seed=seed,
                        max_time_per_node=1e5, sample_interval=None)
        times = np.empty(RUNS)
        for r in range(RUNS):
            seq = np.random.SeedSequence((seed, r))
            times[r] = run(net, init, cfg, np.random.default_rng(seq)).t_eta
        se = times.std(ddof=1) / math.sqrt(RUNS)
        dev = (times.mean() - exact) / se
        print(f"{label:<28} {exact:>8.4f} {times.mean():>10.4f} {dev:>7.2f}")


if __name__ == "__main__":
    main()
