"""Tipping-point location, stable-state sweeps, and MC-vs-ODE comparisons.

The tipping point is located numerically: for each committed fraction p
the 9D system is integrated from the all-B-susceptible product state
until it settles, and the terminal fraction of B nodes classifies p as
above (p_B* below a small threshold) or below the transition.  Bisection
then shrinks the bracket.  No bifurcation theory is involved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from . import pair_ode
from .naming_game import SimConfig, ensemble
from .rk4 import OdeConfig, integrate, steady_state

# Steady-state sweeps trade step size for horizon: accuracy of the
# terminal state, not of timings, is what classification needs, and the
# slow transit near the tipping point is bounded well inside this horizon.
SWEEP_ODE = OdeConfig(dt=0.02, t_max=2e4, sample_interval=None)


class TippingNotFoundError(RuntimeError):
    """No above-tipping point inside the searched committed-fraction range."""


@dataclass(frozen=True)
class SweepRow:
    k_avg: float
    p: float
    p_b_star: float
    converged: bool
    t_end: float


@dataclass(frozen=True)
class TippingResult:
    k_avg: float
    p_c: float
    p_low: float
    p_high: float
    evaluations: tuple  # SweepRow per probed p, in probe order


def stable_pb(k_avg: float, p: float, cfg: OdeConfig | None = None) -> SweepRow:
    """Terminal fraction of B nodes from the all-B-susceptible start."""
    if k_avg < 1.0:
        raise ValueError("k_avg must be >= 1")
    if not (0.0 <= p < 1.0):
        raise ValueError("p must lie in [0, 1)")
    l0, l_cc = pair_ode.all_b_committed_state(p)
    l_star, converged, t_end = steady_state(
        partial(pair_ode.rhs9, k_avg=k_avg), l0, cfg or SWEEP_ODE, l_cc=l_cc)
    p_b = float(pair_ode.node_fractions(l_star, l_cc)[1])
    return SweepRow(k_avg=k_avg, p=p, p_b_star=p_b, converged=converged,
                    t_end=t_end)


def find_tipping(k_avg: float, p_tol: float = 1e-4, p_max: float = 0.2,
                 pb_threshold: float = 0.01,
                 cfg: OdeConfig | None = None) -> TippingResult:
    """Bisection for the committed fraction where p_B* collapses.

    A probe counts as above the tipping point when its stable p_B falls
    below pb_threshold; the drop is sharp, so the classification is
    insensitive to the exact threshold.
    """
    if p_tol <= 0:
        raise ValueError("p_tol must be positive")
    rows = []

    def above(p: float) -> bool:
        row = stable_pb(k_avg, p, cfg)
        rows.append(row)
        return row.p_b_star < pb_threshold

    lo, hi = 0.0, p_max
    if above(lo):
        raise TippingNotFoundError(
            f"p = 0 already classifies as above tipping at k_avg={k_avg}")
    if not above(hi):
        raise TippingNotFoundError(
            f"no tipping found below p = {p_max} at k_avg={k_avg}")
    while hi - lo > p_tol:
        mid = 0.5 * (lo + hi)
        if above(mid):
            hi = mid
        else:
            lo = mid
    return TippingResult(k_avg=k_avg, p_c=0.5 * (lo + hi), p_low=lo, p_high=hi,
                         evaluations=tuple(rows))


def pc_vs_k(k_list, p_tol: float = 1e-4, p_max: float = 0.2,
            pb_threshold: float = 0.01,
            cfg: OdeConfig | None = None) -> list[TippingResult]:
    """find_tipping per average degree, returned sorted by k."""
    if not k_list:
        raise ValueError("k_list must not be empty")
    return [find_tipping(k, p_tol, p_max, pb_threshold, cfg)
            for k in sorted(k_list)]


@dataclass(frozen=True)
class CurveRow:
    p: float
    t_mc_mean: float | None
    t_mc_relstd: float | None
    censored_fraction: float
    t_ode: float | None


def ode_consensus_time(k_avg: float, p: float, eta: float = 0.95,
                       dt: float = 0.01, t_cap: float = 1e4) -> float | None:
    """eta-crossing time of the 9D system from the all-B start, or None."""
    l0, l_cc = pair_ode.all_b_committed_state(p)
    traj = integrate(partial(pair_ode.rhs9, k_avg=k_avg), l0,
                     OdeConfig(dt=dt, t_max=t_cap, eta=eta,
                               sample_interval=None), l_cc=l_cc)
    return traj.t_eta


def consensus_time_curve(k_avg: float, p_grid, n: int, runs: int,
                         eta: float = 0.95, seed: int = 0,
                         t_cap: float = 1e4, workers: int | None = None,
                         ode_dt: float = 0.01) -> list[CurveRow]:
    """Normalized consensus times around the tipping point.

    The MC column averages eta-consensus times over the runs that reach
    consensus before the cap; the censored fraction reports the rest.
    The ODE column is the deterministic 9D crossing time.  Note that for
    p <= 1 - eta the all-B start itself satisfies "p_B reaches eta", so
    stochastic runs report t = 0; meaningful grids keep p above that.
    """
    out = []
    for p in p_grid:
        if p <= 0.0:
            raise ValueError("committed fraction grid must be positive")
        cfg = SimConfig(n=n, k_avg=k_avg, committed_fraction=p, eta=eta,
                        runs=runs, seed=seed, max_time_per_node=t_cap,
                        sample_interval=None)
        stats = ensemble(cfg, workers=workers)
        out.append(CurveRow(
            p=p,
            t_mc_mean=stats.t_eta_mean,
            t_mc_relstd=stats.t_eta_relstd,
            censored_fraction=1.0 - stats.fraction_reached,
            t_ode=ode_consensus_time(k_avg, p, eta, ode_dt, t_cap),
        ))
    return out


@dataclass
class TrajectoryComparison:
    times: np.ndarray       # common sample grid, all runs alive
    mc: np.ndarray          # (s, 3) ensemble-mean fractions
    ode: np.ndarray         # (s, 3) pair-approximation prediction
    meanfield: np.ndarray   # (s, 3) infinite-degree baseline
    sup_pair: float         # sup-norm discrepancy MC vs pair ODE
    sup_meanfield: float    # sup-norm discrepancy MC vs mean field
    window_end: float


def trajectory_compare(k_avg: float, n: int, runs: int, eta: float = 0.95,
                       seed: int = 0, sample_interval: float = 0.25,
                       dt: float = 0.01, polarization_onset: float = 0.75,
                       workers: int | None = None) -> TrajectoryComparison:
    """Ensemble-mean trajectories against both ODE approximations.

    Symmetric start (no committed agents).  The measured mean initial
    fractions of the ensemble seed both ODEs through the product-measure
    embedding.  The comparison runs over the pre-consensus window, which
    ends as soon as any run reaches max(p_A, p_B) >= polarization_onset:
    past that point runs are inside their consensus ramp and the ensemble
    mean no longer estimates the symmetric coarse-grained flow that the
    deterministic curves describe.
    """
    if not (0.5 < polarization_onset < eta):
        raise ValueError("polarization_onset must lie in (1/2, eta)")
    cfg = SimConfig(n=n, k_avg=k_avg, eta=eta, runs=runs, seed=seed,
                    sample_interval=sample_interval)
    stats = ensemble(cfg, workers=workers, keep_trajectories=True)
    window_end = np.inf
    for traj in stats.trajectories:
        hot = np.maximum(traj[:, 1], traj[:, 2]) >= polarization_onset
        hit = np.where(hot)[0]
        if len(hit):
            window_end = min(window_end, traj[hit[0], 0])
    alive = stats.traj_count == runs
    if np.isfinite(window_end):
        alive &= stats.traj_times <= window_end
    s = int(np.sum(alive))
    if s < 2:
        raise ValueError("comparison window is empty; lower sample_interval")
    times = stats.traj_times[:s]
    mc = stats.traj_mean[:s]
    p0 = mc[0]

    l0, _ = pair_ode.embed_product(p0)
    # near-zero steady_tol: the symmetric flow stalls at its saddle and
    # must not stop early, the comparison needs the whole window
    ode_cfg = OdeConfig(dt=dt, t_max=float(times[-1]) + dt,
                        sample_interval=sample_interval, steady_tol=1e-15)
    traj = integrate(partial(pair_ode.rhs6, k_avg=k_avg), l0, ode_cfg)
    ode = traj.fractions[:s]
    mf_traj = integrate(pair_ode.rhs_meanfield, np.asarray(p0, float), ode_cfg)
    mf = mf_traj.fractions[:s]
    if (len(traj.times) < s or len(mf_traj.times) < s
            or abs(traj.times[s - 1] - times[s - 1]) > 1e-6):
        raise RuntimeError("ODE sampling grid failed to cover the MC window")

    sup_pair = float(np.max(np.abs(mc - ode)))
    sup_mf = float(np.max(np.abs(mc - mf)))
    return TrajectoryComparison(times=times, mc=mc, ode=ode, meanfield=mf,
                                sup_pair=sup_pair, sup_meanfield=sup_mf,
                                window_end=float(times[-1]))


@dataclass(frozen=True)
class SizeRow:
    n: int
    k_avg: float
    t_mc_mean: float
    t_mc_relstd: float
    t_ode: float | None


def consensus_time_vs_n(k_avg: float, n_list, runs: int, eta: float = 0.95,
                        seed: int = 0,
                        workers: int | None = None) -> list[SizeRow]:
    """Symmetric-start eta-consensus times across system sizes.

    The deterministic ODE started exactly on the symmetric manifold never
    leaves it, so its prediction is seeded with the finite-size binomial
    fluctuation p_A(0) = 1/2 + 1/(2 sqrt(n)); the logarithmic growth in n
    is insensitive to that O(1) seeding constant.
    """
    out = []
    for n in n_list:
        cfg = SimConfig(n=n, k_avg=k_avg, eta=eta, runs=runs, seed=seed,
                        sample_interval=None)
        stats = ensemble(cfg, workers=workers)
        if stats.t_eta_mean is None:
            raise RuntimeError(f"no run reached consensus at n={n}")
        pa0 = 0.5 + 0.5 / math.sqrt(n)
        l0, _ = pair_ode.embed_product((pa0, 1.0 - pa0, 0.0))
        traj = integrate(partial(pair_ode.rhs6, k_avg=k_avg), l0,
                         OdeConfig(dt=0.01, t_max=1e4, eta=eta,
                                   sample_interval=None))
        out.append(SizeRow(n=n, k_avg=k_avg, t_mc_mean=stats.t_eta_mean,
                           t_mc_relstd=stats.t_eta_relstd, t_ode=traj.t_eta))
    return out
