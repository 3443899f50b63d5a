"""Homogeneous pair-approximation ODEs for the binary naming game.

The coarse-grained state is the vector l of link-type fractions (see
:mod:`ngpair.network` for the component order).  Writing D for the
constant direct-change matrix and R(l) for the state-dependent
related-change matrix, the dynamics in units of one interaction per node
per unit time are

    dl/dt = 2 [ (1/k) D + ((k-1)/k) R(l) ] l

with k the average degree.  R is assembled from two link-correspondence
matrices Q_A (an A node turning into AB) and Q_B (a B node turning into
AB) contracted with the conditional neighbor-opinion distributions
P(.|A), P(.|B), P(.|AB); the reverse conversions AB->A and AB->B use
-Q_A and -Q_B.

All matrices are transcribed as exact rationals and checked against the
first-principles enumeration in :mod:`ngpair.oracle`; the float copies
below are what the integrator consumes.
"""

from __future__ import annotations

from fractions import Fraction as F

import numpy as np

GUARD_TOL = 1e-9

_H = F(1, 2)
_Q = F(1, 4)
_T = F(3, 4)

# --- 6D symmetric system: links (A-A, A-B, A-AB, B-B, B-AB, AB-AB),
#     neighbor order (A, B, AB) ------------------------------------------

D6_EXACT = (
    (0, 0, _T, 0, 0, _H),
    (0, -1, 0, 0, 0, 0),
    (0, _H, -1, 0, 0, 0),
    (0, 0, 0, 0, _T, _H),
    (0, _H, 0, 0, -1, 0),
    (0, 0, _Q, 0, _Q, -1),
)

QA6_EXACT = (
    (-1, 0, 0),
    (0, -1, 0),
    (1, 0, -1),
    (0, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
)

QB6_EXACT = (
    (0, 0, 0),
    (-1, 0, 0),
    (1, 0, 0),
    (0, -1, 0),
    (0, 1, -1),
    (0, 0, 1),
)

# --- 9D committed system: links (A-C, B-C, AB-C, A-A, A-B, A-AB, B-B,
#     B-AB, AB-AB), neighbor order (C, A, B, AB) --------------------------

D9_EXACT = (
    (0, 0, _T, 0, 0, 0, 0, 0, 0),
    (0, -_H, 0, 0, 0, 0, 0, 0, 0),
    (0, _H, -_T, 0, 0, 0, 0, 0, 0),
    (0, 0, 0, 0, 0, _T, 0, 0, _H),
    (0, 0, 0, 0, -1, 0, 0, 0, 0),
    (0, 0, 0, 0, _H, -1, 0, 0, 0),
    (0, 0, 0, 0, 0, 0, 0, _T, _H),
    (0, 0, 0, 0, _H, 0, 0, -1, 0),
    (0, 0, 0, 0, 0, _Q, 0, _Q, -1),
)

QA9_EXACT = (
    (-1, 0, 0, 0),
    (0, 0, 0, 0),
    (1, 0, 0, 0),
    (0, -1, 0, 0),
    (0, 0, -1, 0),
    (0, 1, 0, -1),
    (0, 0, 0, 0),
    (0, 0, 1, 0),
    (0, 0, 0, 1),
)

QB9_EXACT = (
    (0, 0, 0, 0),
    (-1, 0, 0, 0),
    (1, 0, 0, 0),
    (0, 0, 0, 0),
    (0, -1, 0, 0),
    (0, 1, 0, 0),
    (0, 0, -1, 0),
    (0, 0, 1, -1),
    (0, 0, 0, 1),
)


def _to_float(table) -> np.ndarray:
    return np.array([[float(x) for x in row] for row in table])


D6 = _to_float(D6_EXACT)
QA6 = _to_float(QA6_EXACT)
QB6 = _to_float(QB6_EXACT)
D9 = _to_float(D9_EXACT)
QA9 = _to_float(QA9_EXACT)
QB9 = _to_float(QB9_EXACT)

# linear node-fraction maps p(l); the 9D map counts committed mass in p_A
PROJ6 = np.array([
    [1.0, 0.5, 0.5, 0.0, 0.0, 0.0],
    [0.0, 0.5, 0.0, 1.0, 0.5, 0.0],
    [0.0, 0.0, 0.5, 0.0, 0.5, 1.0],
])
PROJ9 = np.array([
    [1.0, 0.5, 0.5, 1.0, 0.5, 0.5, 0.0, 0.0, 0.0],
    [0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 1.0, 0.5, 0.0],
    [0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.5, 1.0],
])


def node_fractions(l, l_cc: float = 0.0) -> np.ndarray:
    """(p_A, p_B, p_AB) from a 6- or 9-dim link state.

    In the committed case the committed mass l_cc + (l_AC+l_BC+l_ABC)/2 is
    folded into p_A, so the three fractions always sum to 1.
    """
    l = np.asarray(l, dtype=float)
    if l.shape == (6,):
        return PROJ6 @ l
    if l.shape == (9,):
        p = PROJ9 @ l
        p[0] += l_cc
        return p
    raise ValueError(f"link state must have 6 or 9 components, got {l.shape}")


def effective_fields(l):
    """Conditional neighbor-opinion distributions (P(.|A), P(.|B), P(.|AB)).

    Entries follow the neighbor order (A, B, AB) in 6D and (C, A, B, AB)
    in 9D.  A field whose denominator vanishes (no such nodes attached to
    any link) is returned as None; every term multiplying it in the
    dynamics carries a simultaneously vanishing link fraction.
    """
    l = np.asarray(l, dtype=float)
    if l.shape == (6,):
        num_a = np.array([2.0 * l[0], l[1], l[2]])
        num_b = np.array([l[1], 2.0 * l[3], l[4]])
        num_ab = np.array([l[2], l[4], 2.0 * l[5]])
    elif l.shape == (9,):
        num_a = np.array([l[0], 2.0 * l[3], l[4], l[5]])
        num_b = np.array([l[1], l[4], 2.0 * l[6], l[7]])
        num_ab = np.array([l[2], l[5], l[7], 2.0 * l[8]])
    else:
        raise ValueError(f"link state must have 6 or 9 components, got {l.shape}")
    out = []
    for num in (num_a, num_b, num_ab):
        den = num.sum()
        out.append(num / den if den > 0.0 else None)
    return tuple(out)


# The rhs evaluations dominate every sweep and bisection, so the cores
# below are unrolled scalar arithmetic (several times faster than 6x6
# matvecs at this size).  They are transcription-checked two ways: the
# oracle enumeration must agree at random states, and the test suite also
# evaluates the matrix form D @ l + Q contractions directly.

def _related_core_6(l0, l1, l2, l3, l4, l5):
    """Components of R(l) @ l, 6D."""
    den_a = 2.0 * l0 + l1 + l2
    den_b = l1 + 2.0 * l3 + l4
    den_ab = l2 + l4 + 2.0 * l5
    ca = 0.5 * l1 + 0.25 * l2
    cb = 0.5 * l1 + 0.25 * l4
    ca_ab = 0.75 * l2 + l5
    cb_ab = 0.75 * l4 + l5
    if den_a > 0.0:
        wa = ca / den_a
        pa0, pa1, pa2 = 2.0 * l0 * wa, l1 * wa, l2 * wa
    else:
        pa0 = pa1 = pa2 = 0.0
    if den_b > 0.0:
        wb = cb / den_b
        pb0, pb1, pb2 = l1 * wb, 2.0 * l3 * wb, l4 * wb
    else:
        pb0 = pb1 = pb2 = 0.0
    if den_ab > 0.0:
        qa = ca_ab / den_ab
        qb = cb_ab / den_ab
        ua0, ua1, ua2 = pa0 - l2 * qa, pa1 - l4 * qa, pa2 - 2.0 * l5 * qa
        ub0, ub1, ub2 = pb0 - l2 * qb, pb1 - l4 * qb, pb2 - 2.0 * l5 * qb
    else:
        ua0, ua1, ua2 = pa0, pa1, pa2
        ub0, ub1, ub2 = pb0, pb1, pb2
    return (-ua0,
            -ua1 - ub0,
            ua0 - ua2 + ub0,
            -ub1,
            ua1 + ub1 - ub2,
            ua2 + ub2)


def _related_core_9(l0, l1, l2, l3, l4, l5, l6, l7, l8):
    """Components of R(l) @ l, 9D; neighbor order (C, A, B, AB)."""
    den_a = l0 + 2.0 * l3 + l4 + l5
    den_b = l1 + l4 + 2.0 * l6 + l7
    den_ab = l2 + l5 + l7 + 2.0 * l8
    ca = 0.5 * l4 + 0.25 * l5
    cb = 0.5 * l1 + 0.5 * l4 + 0.25 * l7
    ca_ab = 0.75 * (l2 + l5) + l8
    cb_ab = 0.75 * l7 + l8
    if den_a > 0.0:
        wa = ca / den_a
        pa0, pa1, pa2, pa3 = l0 * wa, 2.0 * l3 * wa, l4 * wa, l5 * wa
    else:
        pa0 = pa1 = pa2 = pa3 = 0.0
    if den_b > 0.0:
        wb = cb / den_b
        pb0, pb1, pb2, pb3 = l1 * wb, l4 * wb, 2.0 * l6 * wb, l7 * wb
    else:
        pb0 = pb1 = pb2 = pb3 = 0.0
    if den_ab > 0.0:
        qa = ca_ab / den_ab
        qb = cb_ab / den_ab
        ua0, ua1, ua2, ua3 = (pa0 - l2 * qa, pa1 - l5 * qa,
                              pa2 - l7 * qa, pa3 - 2.0 * l8 * qa)
        ub0, ub1, ub2, ub3 = (pb0 - l2 * qb, pb1 - l5 * qb,
                              pb2 - l7 * qb, pb3 - 2.0 * l8 * qb)
    else:
        ua0, ua1, ua2, ua3 = pa0, pa1, pa2, pa3
        ub0, ub1, ub2, ub3 = pb0, pb1, pb2, pb3
    return (-ua0,
            -ub0,
            ua0 + ub0,
            -ua1,
            -ua2 - ub1,
            ua1 - ua3 + ub1,
            -ub2,
            ua2 + ub2 - ub3,
            ua3 + ub3)


def _related_6(l):
    return np.array(_related_core_6(*l))


def _related_9(l):
    return np.array(_related_core_9(*l))


def rhs6(l, k_avg: float) -> np.ndarray:
    """dl/dt of the 6D symmetric system at average degree k_avg >= 1."""
    if k_avg < 1.0:
        raise ValueError(f"k_avg must be >= 1, got {k_avg!r}")
    if len(l) != 6:
        raise ValueError("rhs6 expects a 6-component link state")
    l0, l1, l2, l3, l4, l5 = (float(x) for x in l)
    r0, r1, r2, r3, r4, r5 = _related_core_6(l0, l1, l2, l3, l4, l5)
    cd = 2.0 / k_avg
    cr = 2.0 * (k_avg - 1.0) / k_avg
    return np.array([
        cd * (0.75 * l2 + 0.5 * l5) + cr * r0,
        cd * -l1 + cr * r1,
        cd * (0.5 * l1 - l2) + cr * r2,
        cd * (0.75 * l4 + 0.5 * l5) + cr * r3,
        cd * (0.5 * l1 - l4) + cr * r4,
        cd * (0.25 * l2 + 0.25 * l4 - l5) + cr * r5,
    ])


def rhs9(l, k_avg: float) -> np.ndarray:
    """dl/dt of the 9D committed system; the inert l_cc is not part of l."""
    if k_avg < 1.0:
        raise ValueError(f"k_avg must be >= 1, got {k_avg!r}")
    if len(l) != 9:
        raise ValueError("rhs9 expects a 9-component link state")
    l0, l1, l2, l3, l4, l5, l6, l7, l8 = (float(x) for x in l)
    r = _related_core_9(l0, l1, l2, l3, l4, l5, l6, l7, l8)
    cd = 2.0 / k_avg
    cr = 2.0 * (k_avg - 1.0) / k_avg
    return np.array([
        cd * 0.75 * l2 + cr * r[0],
        cd * -0.5 * l1 + cr * r[1],
        cd * (0.5 * l1 - 0.75 * l2) + cr * r[2],
        cd * (0.75 * l5 + 0.5 * l8) + cr * r[3],
        cd * -l4 + cr * r[4],
        cd * (0.5 * l4 - l5) + cr * r[5],
        cd * (0.75 * l7 + 0.5 * l8) + cr * r[6],
        cd * (0.5 * l4 - l7) + cr * r[7],
        cd * (0.25 * l5 + 0.25 * l7 - l8) + cr * r[8],
    ])


def embed_product(p, committed_fraction: float = 0.0) -> tuple[np.ndarray, float]:
    """Product-measure link state consistent with node fractions p.

    p = (p_A, p_B, p_AB) where p_A includes the committed fraction.
    Returns (l, l_cc); l has 6 components when committed_fraction == 0 and
    9 otherwise, with l_cc = committed_fraction**2.
    """
    pa, pb, pab = (float(x) for x in p)
    c = float(committed_fraction)
    if not (0.0 <= c < 1.0):
        raise ValueError("committed_fraction must lie in [0, 1)")
    if min(pa, pb, pab) < -1e-12 or abs(pa + pb + pab - 1.0) > 1e-9:
        raise ValueError("node fractions must be nonnegative and sum to 1")
    a = pa - c
    if a < -1e-12:
        raise ValueError("p_A must be at least the committed fraction")
    a = max(a, 0.0)
    if c == 0.0:
        l = np.array([a * a, 2 * a * pb, 2 * a * pab,
                      pb * pb, 2 * pb * pab, pab * pab])
        return l, 0.0
    l = np.array([2 * a * c, 2 * pb * c, 2 * pab * c,
                  a * a, 2 * a * pb, 2 * a * pab,
                  pb * pb, 2 * pb * pab, pab * pab])
    return l, c * c


def all_b_committed_state(committed_fraction: float) -> tuple[np.ndarray, float]:
    """Product-measure 9D start with every susceptible node at B.

    This is the canonical initial condition for tipping-point sweeps;
    committed_fraction = 0 degenerates to pure B-B mass but stays in the
    9D representation so the committed dynamics can be applied uniformly.
    """
    c = float(committed_fraction)
    if not (0.0 <= c < 1.0):
        raise ValueError("committed_fraction must lie in [0, 1)")
    b = 1.0 - c
    l = np.zeros(9)
    l[1] = 2.0 * b * c   # B-C
    l[6] = b * b         # B-B
    return l, c * c


def rhs_meanfield(p, committed_fraction: float = 0.0) -> np.ndarray:
    """dp/dt in the infinite-degree limit, defined constructively.

    Evaluates the related-change dynamics 2 R(l) l at the product-measure
    embedding of p (where every effective field equals p itself) and
    projects back to node fractions; no separately transcribed mean-field
    equations exist to drift out of sync.
    """
    l, _ = embed_product(p, committed_fraction)
    if len(l) == 6:
        return PROJ6 @ (2.0 * _related_6(l))
    return PROJ9 @ (2.0 * _related_9(l))


def clamp_link_state(l, target_sum: float, tol: float = GUARD_TOL):
    """Domain guard: clip tiny negative overshoots and renormalize.

    Returns (clamped, violation) where violation is the largest observed
    defect (negative excess or drift of the conserved sum).  Callers treat
    violation > tol as an integration failure.
    """
    l = np.asarray(l, dtype=float)
    neg = max(0.0, float(-l.min())) if l.size else 0.0
    clipped = np.clip(l, 0.0, 1.0)
    s = float(clipped.sum())
    drift = abs(s - target_sum)
    violation = max(neg, drift)
    if s > 0.0 and target_sum > 0.0:
        clipped = clipped * (target_sum / s)
    return clipped, violation
