"""Fixed-step classical RK4 with threshold-crossing and steady-state stops.

The vector field on the link simplex is smooth and bounded, so a fixed
step resolves every time scale of interest; adaptivity would only cost
determinism.  Crossings of the consensus threshold are checked on every
step (not just stored samples) and located by linear interpolation,
whose O(dt^2) error sits far below the O(dt^4) state error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .pair_ode import GUARD_TOL, clamp_link_state, node_fractions

REASON_ETA = "eta-crossed"
REASON_STEADY = "steady"
REASON_HORIZON = "horizon"


class IntegrationError(RuntimeError):
    """Domain-guard violation beyond tolerance; carries time and state."""

    def __init__(self, message, t, state):
        super().__init__(message)
        self.t = t
        self.state = state


@dataclass(frozen=True)
class OdeConfig:
    dt: float = 0.01
    t_max: float = 1e6
    steady_tol: float = 1e-10
    eta: float | None = None
    sample_interval: float | None = 1.0

    def __post_init__(self):
        if self.dt <= 0 or self.t_max <= 0 or self.steady_tol <= 0:
            raise ValueError("dt, t_max and steady_tol must be positive")
        if self.eta is not None and not (0.5 < self.eta <= 1.0):
            raise ValueError("eta must lie in (1/2, 1]")


@dataclass
class Trajectory:
    times: np.ndarray      # (s,)
    states: np.ndarray     # (s, dim)
    fractions: np.ndarray  # (s, 3): p_A, p_B, p_AB
    reason: str
    t_end: float
    l_end: np.ndarray
    t_eta: float | None
    l_cc: float = 0.0


def _fraction_fn(dim: int, l_cc: float):
    if dim in (6, 9):
        return lambda l: node_fractions(l, l_cc)
    if dim == 3:  # mean-field node-fraction state integrates as-is
        return lambda l: l
    raise ValueError(f"unsupported state dimension {dim}")


def integrate(rhs, l0, cfg: OdeConfig, l_cc: float = 0.0) -> Trajectory:
    """Integrate dl/dt = rhs(l) from l0 until eta-crossing, steady state,
    or the horizon, whichever comes first.

    rhs must already have its parameters bound (e.g. functools.partial of
    rhs6 with k_avg).  The conserved component sum is taken from l0 and
    enforced by the domain guard after every step.
    """
    l = np.asarray(l0, dtype=float).copy()
    dim = l.shape[0]
    frac = _fraction_fn(dim, l_cc)
    target = float(l.sum())
    dt = cfg.dt
    n_steps = int(math.ceil(cfg.t_max / dt - 1e-12))
    stride = None
    if cfg.sample_interval is not None:
        if cfg.sample_interval < dt:
            raise ValueError("sample_interval must be >= dt")
        stride = max(1, int(round(cfg.sample_interval / dt)))

    times = [0.0]
    states = [l.copy()]
    fracs = [frac(l)]
    f_cur = np.asarray(rhs(l), dtype=float)
    p_prev = frac(l)
    reason = REASON_HORIZON
    t = 0.0
    t_eta = None

    for step in range(1, n_steps + 1):
        k1 = f_cur
        k2 = np.asarray(rhs(l + (0.5 * dt) * k1), dtype=float)
        k3 = np.asarray(rhs(l + (0.5 * dt) * k2), dtype=float)
        k4 = np.asarray(rhs(l + dt * k3), dtype=float)
        l_new = l + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        l_new, violation = clamp_link_state(l_new, target)
        if violation > GUARD_TOL:
            raise IntegrationError(
                f"domain guard violated by {violation:.3e} at t={t + dt:.6g}",
                t + dt, l_new)
        t_new = step * dt
        p_new = frac(l_new)

        if cfg.eta is not None:
            crossings = []
            for comp in (0, 1):
                a, b = p_prev[comp], p_new[comp]
                if a < cfg.eta <= b:
                    frac_step = (cfg.eta - a) / (b - a)
                    crossings.append(t + frac_step * dt)
            if crossings:
                t_eta = min(crossings)
                reason = REASON_ETA
                l, t, p_prev = l_new, t_new, p_new
                break

        f_cur = np.asarray(rhs(l_new), dtype=float)
        l, t, p_prev = l_new, t_new, p_new
        if stride is not None and step % stride == 0:
            times.append(t)
            states.append(l.copy())
            fracs.append(p_prev)
        if float(np.abs(f_cur).max()) < cfg.steady_tol:
            reason = REASON_STEADY
            break

    if times[-1] < t:
        times.append(t)
        states.append(l.copy())
        fracs.append(p_prev)

    return Trajectory(
        times=np.array(times),
        states=np.array(states),
        fractions=np.array(fracs),
        reason=reason,
        t_end=t,
        l_end=l,
        t_eta=t_eta,
        l_cc=l_cc,
    )


def detect_eta_crossing(traj: Trajectory, eta: float) -> float | None:
    """First time p_A or p_B crosses eta from below, linearly interpolated
    between consecutive samples.

    Meaningful only when the trajectory is sampled densely (every step);
    integrate() already performs this check internally when cfg.eta is
    set, which is what the analysis layer uses.
    """
    times = traj.times
    best = None
    for comp in (0, 1):
        series = traj.fractions[:, comp]
        for i in range(1, len(times)):
            a, b = series[i - 1], series[i]
            if a < eta <= b:
                tc = times[i - 1] + (eta - a) / (b - a) * (times[i] - times[i - 1])
                if best is None or tc < best:
                    best = tc
                break
    return best


def steady_state(rhs, l0, cfg: OdeConfig | None = None,
                 l_cc: float = 0.0) -> tuple[np.ndarray, bool, float]:
    """Integrate until the sup-norm of the vector field drops below
    steady_tol; returns (l_end, converged, t_end)."""
    if cfg is None:
        cfg = OdeConfig()
    cfg = replace(cfg, eta=None, sample_interval=None)
    traj = integrate(rhs, l0, cfg, l_cc=l_cc)
    return traj.l_end, traj.reason == REASON_STEADY, traj.t_end
