"""Stochastic simulation of the original direct binary naming game.

One interaction: a speaker is drawn uniformly, a listener uniformly from
the speaker's neighbors, and the speaker transmits one word (AB speakers
flip a fair coin, committed speakers always say A).  A listener lacking
the word appends it; otherwise both sides collapse to it.  Committed
listeners never change, but hearing A still counts as agreement and
collapses an AB speaker.  Time advances by 1/n per interaction, so one
unit time is n interactions.  Speakers drawn with no neighbors are
redrawn without consuming the interaction.

Consensus bookkeeping counts committed nodes in p_A.  A run stops at the
first time p_A or p_B reaches eta, or at the max_time_per_node cap.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .network import (A, AB, B, C, DegenerateNetworkError, Network,
                      OpinionState, assign_opinions, generate_er)

_RNG_BLOCK = 1 << 15


@dataclass(frozen=True)
class SimConfig:
    n: int
    k_avg: float
    committed_fraction: float = 0.0
    eta: float = 0.95
    runs: int = 1
    seed: int = 0
    max_time_per_node: float = 1e4
    sample_interval: float | None = 1.0

    def __post_init__(self):
        if not (0.5 < self.eta <= 1.0):
            raise ValueError("eta must lie in (1/2, 1]")
        if self.max_time_per_node <= 0:
            raise ValueError("max_time_per_node must be positive")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not (0.0 <= self.committed_fraction < 1.0):
            raise ValueError("committed_fraction must lie in [0, 1)")


@dataclass
class SimResult:
    reached: bool
    t_eta: float           # cap value when not reached
    p_a: float
    p_b: float
    p_ab: float
    trajectory: np.ndarray  # (s, 4): t, p_A, p_B, p_AB


def step(net: Network, state: OpinionState, rng,
         word_order: tuple[int, int] = (A, B)) -> OpinionState:
    """Apply exactly one speaker-listener interaction; returns a new state.

    Draws uniforms in the same order as run(), so folding step() over a
    fresh generator replays a run exactly.  word_order controls which
    word an AB speaker utters on coin < 1/2; flipping it together with an
    A<->B relabeling of the state mirrors the dynamics draw for draw.
    """
    if net.m == 0:
        raise DegenerateNetworkError("step needs at least one edge")
    n = net.n
    ops = state.opinions.copy()
    while True:
        s = int(rng.random() * n)
        nbrs = net.adjacency[s]
        if nbrs:
            break
    li = nbrs[int(rng.random() * len(nbrs))]
    so = int(ops[s])
    lo = int(ops[li])
    if so == AB:
        w = word_order[0] if rng.random() < 0.5 else word_order[1]
    elif so == B:
        w = B
    else:  # A speaker or committed speaker
        w = A
    if w == A:
        if lo == B:
            ops[li] = AB
        else:
            if lo == AB:
                ops[li] = A
            if so == AB:
                ops[s] = A
    else:
        if lo == A:
            ops[li] = AB
        elif lo != C:
            if lo == AB:
                ops[li] = B
            if so == AB:
                ops[s] = B
    return OpinionState(opinions=ops, committed_count=state.committed_count)


def run(net: Network, init: OpinionState, cfg: SimConfig, rng,
        word_order: tuple[int, int] = (A, B)) -> SimResult:
    """Simulate until eta-consensus or the time cap; init is not mutated."""
    if net.m == 0:
        raise DegenerateNetworkError("run needs at least one edge")
    if len(init.opinions) != net.n:
        raise ValueError("initial state size does not match network")
    n = net.n
    adj = net.adjacency
    op = init.opinions.tolist()
    nc = init.committed_count
    cnt_a = op.count(A)
    cnt_b = op.count(B)
    cnt_ab = op.count(AB)
    thr = math.ceil(cfg.eta * n - 1e-9)
    w_lo, w_hi = word_order
    max_inter = int(round(cfg.max_time_per_node * n))
    stride = (None if cfg.sample_interval is None
              else max(1, int(round(cfg.sample_interval * n))))

    samples = [(0.0, (cnt_a + nc) / n, cnt_b / n, cnt_ab / n)]
    if cnt_a + nc >= thr or cnt_b >= thr:
        return SimResult(True, 0.0, (cnt_a + nc) / n, cnt_b / n, cnt_ab / n,
                         np.array(samples))

    # grow the uniform buffer geometrically so short runs stay cheap while
    # long runs amortize generation; consumption order is unaffected
    rnd = rng.random
    blen = 512
    buf = rnd(blen).tolist()
    ptr = 0
    next_sample = stride if stride is not None else -1
    reached = False
    t_eta = cfg.max_time_per_node
    i = 0
    while i < max_inter:
        if ptr == blen:
            blen = min(blen * 4, _RNG_BLOCK)
            buf = rnd(blen).tolist()
            ptr = 0
        s = int(buf[ptr] * n)
        ptr += 1
        nbrs = adj[s]
        deg = len(nbrs)
        if deg == 0:
            continue  # redraw the speaker; the interaction is not consumed
        i += 1
        if ptr == blen:
            blen = min(blen * 4, _RNG_BLOCK)
            buf = rnd(blen).tolist()
            ptr = 0
        li = nbrs[int(buf[ptr] * deg)]
        ptr += 1
        so = op[s]
        lo = op[li]
        if so == AB:
            if ptr == blen:
                blen = min(blen * 4, _RNG_BLOCK)
                buf = rnd(blen).tolist()
                ptr = 0
            w = w_lo if buf[ptr] < 0.5 else w_hi
            ptr += 1
        elif so == B:
            w = B
        else:
            w = A
        if w == A:
            if lo == B:
                op[li] = AB
                cnt_b -= 1
                cnt_ab += 1
            else:
                if lo == AB:
                    op[li] = A
                    cnt_ab -= 1
                    cnt_a += 1
                if so == AB:
                    op[s] = A
                    cnt_ab -= 1
                    cnt_a += 1
                if cnt_a + nc >= thr:
                    reached = True
                    t_eta = i / n
                    break
        else:
            if lo == A:
                op[li] = AB
                cnt_a -= 1
                cnt_ab += 1
            elif lo != C:
                if lo == AB:
                    op[li] = B
                    cnt_ab -= 1
                    cnt_b += 1
                if so == AB:
                    op[s] = B
                    cnt_ab -= 1
                    cnt_b += 1
                if cnt_b >= thr:
                    reached = True
                    t_eta = i / n
                    break
        if i == next_sample:
            samples.append((i / n, (cnt_a + nc) / n, cnt_b / n, cnt_ab / n))
            next_sample += stride

    return SimResult(reached, t_eta, (cnt_a + nc) / n, cnt_b / n, cnt_ab / n,
                     np.array(samples))


@dataclass
class EnsembleStats:
    """Aggregate of independent runs; per-run records keep run order."""

    runs: int
    records: list  # (run, seed, reached, t_eta) tuples
    fraction_reached: float
    t_eta_mean: float | None
    t_eta_std: float | None
    t_eta_relstd: float | None
    traj_times: np.ndarray   # (s,)
    traj_mean: np.ndarray    # (s, 3)
    traj_std: np.ndarray     # (s, 3)
    traj_count: np.ndarray   # (s,) runs still alive at each sample time
    trajectories: list | None = None  # per-run (s_r, 4) arrays when kept


def _run_seeds(base_seed: int, run_index: int) -> tuple[int, int, int]:
    """Three decorrelated 64-bit seeds derived from (base seed, run index)."""
    words = np.random.SeedSequence((base_seed, run_index)).generate_state(3, np.uint64)
    return int(words[0]), int(words[1]), int(words[2])


def _default_net(cfg: SimConfig, seed: int) -> Network:
    return generate_er(cfg.n, cfg.k_avg, seed)


def _default_init(cfg: SimConfig, net: Network, seed: int) -> OpinionState:
    if cfg.committed_fraction > 0.0:
        return assign_opinions(net, cfg.committed_fraction, "committed", seed)
    return assign_opinions(net, 0.0, "symmetric", seed)


def _one_run(args):
    cfg, r, net_factory, init_factory = args
    net_seed, init_seed, dyn_seed = _run_seeds(cfg.seed, r)
    net = (net_factory or _default_net)(cfg, net_seed)
    init = (init_factory or _default_init)(cfg, net, init_seed)
    res = run(net, init, cfg, np.random.default_rng(dyn_seed))
    return r, dyn_seed, res


def resolve_workers(workers: int | None, runs: int) -> int:
    """Worker count: explicit argument, else NG_THREADS, else CPU count."""
    if workers is None:
        env = os.environ.get("NG_THREADS")
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(workers, runs))


def ensemble(cfg: SimConfig, workers: int | None = None,
             net_factory=None, init_factory=None,
             keep_trajectories: bool = False) -> EnsembleStats:
    """Run cfg.runs independent realizations and aggregate.

    Each run draws its own network and initial opinions from seeds hashed
    out of (cfg.seed, run index), so results do not depend on worker
    scheduling.  Factories (cfg, seed) -> Network and
    (cfg, net, seed) -> OpinionState may replace the ER defaults; they
    must be picklable when workers > 1.
    """
    tasks = [(cfg, r, net_factory, init_factory) for r in range(cfg.runs)]
    nworkers = resolve_workers(workers, cfg.runs)
    if nworkers == 1:
        results = [_one_run(t) for t in tasks]
    else:
        chunk = max(1, cfg.runs // (4 * nworkers))
        with ProcessPoolExecutor(max_workers=nworkers) as pool:
            results = list(pool.map(_one_run, tasks, chunksize=chunk))
    results.sort(key=lambda x: x[0])

    records = [(r, seed, res.reached, res.t_eta) for r, seed, res in results]
    t_reached = np.array([res.t_eta for _, _, res in results if res.reached])
    if len(t_reached):
        mean = float(t_reached.mean())
        std = float(t_reached.std())
        relstd = std / mean if mean > 0 else 0.0
    else:
        mean = std = relstd = None

    longest = max(len(res.trajectory) for _, _, res in results)
    times = None
    for _, _, res in results:
        if len(res.trajectory) == longest:
            times = res.trajectory[:, 0]
            break
    stacked = np.full((len(results), longest, 3), np.nan)
    for row, (_, _, res) in enumerate(results):
        s = len(res.trajectory)
        stacked[row, :s, :] = res.trajectory[:, 1:4]
    alive = ~np.isnan(stacked[:, :, 0])
    count = alive.sum(axis=0)
    with np.errstate(invalid="ignore"):
        mean_traj = np.nanmean(stacked, axis=0)
        std_traj = np.nanstd(stacked, axis=0)
    return EnsembleStats(
        runs=cfg.runs,
        records=records,
        fraction_reached=float(np.mean([rec[2] for rec in records])),
        t_eta_mean=mean,
        t_eta_std=std,
        t_eta_relstd=relstd,
        traj_times=times,
        traj_mean=mean_traj,
        traj_std=std_traj,
        traj_count=count,
        trajectories=([res.trajectory for _, _, res in results]
                      if keep_trajectories else None),
    )
