"""Random networks and opinion bookkeeping for the binary naming game.

Opinions are small integer codes: A, B, AB (mixed memory) and C, a
committed node that permanently holds and transmits A.  Link types are
counted in a fixed order that the ODE modules share:

    6 entries (no committed nodes):  A-A, A-B, A-AB, B-B, B-AB, AB-AB
    9 entries (with committed):      A-C, B-C, AB-C, then the six above

C-C links are dynamically inert and are reported as a separate scalar
``l_cc`` so that the nine tracked fractions sum to ``1 - l_cc``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

A, B, AB, C = 0, 1, 2, 3

OPINION_NAMES = {A: "A", B: "B", AB: "AB", C: "C"}

LINK_NAMES_6 = ("A-A", "A-B", "A-AB", "B-B", "B-AB", "AB-AB")
LINK_NAMES_9 = ("A-C", "B-C", "AB-C") + LINK_NAMES_6

# unordered opinion pair -> position in the 6- or 9-vector; C-C maps nowhere
_PAIR_TO_IDX6 = {(A, A): 0, (A, B): 1, (A, AB): 2, (B, B): 3, (B, AB): 4, (AB, AB): 5}
_PAIR_TO_IDX9 = {(A, C): 0, (B, C): 1, (AB, C): 2, (A, A): 3, (A, B): 4,
                 (A, AB): 5, (B, B): 6, (B, AB): 7, (AB, AB): 8}


class DegenerateNetworkError(ValueError):
    """Raised when an operation needs edges but the network has none."""


@dataclass(frozen=True)
class Network:
    """Undirected simple graph held as adjacency lists plus an edge array."""

    n: int
    adjacency: list[list[int]]
    edges: np.ndarray  # (m, 2) int64, each row i < j
    m: int


@dataclass(frozen=True)
class OpinionState:
    """Per-node opinion codes; committed nodes carry code C."""

    opinions: np.ndarray  # (n,) int8
    committed_count: int


def _pairs_from_linear(h: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Map linear indices over ordered pairs (i < j) back to (i, j).

    Row i spans offsets [i*(2n-i-1)/2, (i+1)*(2n-i-2)/2).  The float
    inversion can be off by one, so correct it exactly afterwards.
    """
    b = 2.0 * n - 1.0
    i = np.floor((b - np.sqrt(b * b - 8.0 * h)) / 2.0).astype(np.int64)
    offs = i * (2 * n - i - 1) // 2
    over = offs > h
    while np.any(over):
        i[over] -= 1
        offs = i * (2 * n - i - 1) // 2
        over = offs > h
    nxt = (i + 1) * (2 * n - i - 2) // 2
    under = nxt <= h
    while np.any(under):
        i[under] += 1
        nxt = (i + 1) * (2 * n - i - 2) // 2
        under = nxt <= h
    offs = i * (2 * n - i - 1) // 2
    j = h - offs + i + 1
    return i, j


def generate_er(n: int, k_avg: float, seed: int) -> Network:
    """Erdos-Renyi G(n, p) with p = k_avg/(n-1), deterministic in the seed.

    Uses geometric gap sampling over the linear pair index, so the cost is
    O(m) rather than O(n^2).  k_avg may equal n-1 (complete graph).
    """
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n!r}")
    if not (0.0 < k_avg <= n - 1):
        raise ValueError(f"k_avg must satisfy 0 < k_avg <= n-1, got {k_avg!r}")
    p = float(k_avg) / (n - 1)
    total = n * (n - 1) // 2
    if p >= 1.0:
        hits = np.arange(total, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        chunk = int(total * p * 1.1) + 16
        parts = []
        pos = -1
        while pos < total:
            gaps = rng.geometric(p, size=chunk).astype(np.int64)
            idx = pos + np.cumsum(gaps)
            parts.append(idx)
            pos = int(idx[-1])
        hits = np.concatenate(parts)
        hits = hits[hits < total]
    i, j = _pairs_from_linear(hits, n)
    edges = np.stack([i, j], axis=1)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges.tolist():
        adjacency[a].append(b)
        adjacency[b].append(a)
    return Network(n=n, adjacency=adjacency, edges=edges, m=len(edges))


def complete_network(n: int) -> Network:
    """Complete graph on n nodes (handy for exact-chain validation)."""
    if n < 2:
        raise ValueError("complete_network needs n >= 2")
    i, j = np.triu_indices(n, k=1)
    edges = np.stack([i.astype(np.int64), j.astype(np.int64)], axis=1)
    adjacency = [[v for v in range(n) if v != u] for u in range(n)]
    return Network(n=n, adjacency=adjacency, edges=edges, m=len(edges))


def assign_opinions(net: Network, committed_fraction: float, mode: str,
                    seed: int) -> OpinionState:
    """Initial opinion draw.

    mode="symmetric": every node independently A or B with probability 1/2
    (committed_fraction must be 0).  mode="committed": round-half-up of
    committed_fraction*n uniformly random nodes become committed C, the
    rest start at B.
    """
    if mode not in ("symmetric", "committed"):
        raise ValueError(f"unknown mode {mode!r}")
    if not (0.0 <= committed_fraction < 1.0):
        raise ValueError("committed_fraction must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    n = net.n
    if mode == "symmetric":
        if committed_fraction != 0.0:
            raise ValueError("symmetric mode requires committed_fraction == 0")
        ops = rng.integers(0, 2, size=n).astype(np.int8)  # A or B
        return OpinionState(opinions=ops, committed_count=0)
    count = int(math.floor(committed_fraction * n + 0.5))  # round half up
    ops = np.full(n, B, dtype=np.int8)
    if count:
        chosen = rng.permutation(n)[:count]
        ops[chosen] = C
    return OpinionState(opinions=ops, committed_count=count)


def node_counts(st: OpinionState) -> tuple[int, int, int]:
    """Counts of susceptible A, B and AB nodes (committed excluded)."""
    ops = st.opinions
    return (int(np.sum(ops == A)), int(np.sum(ops == B)), int(np.sum(ops == AB)))


def node_fractions_of_state(st: OpinionState) -> tuple[float, float, float]:
    """(p_A, p_B, p_AB) with committed nodes counted as A."""
    n = len(st.opinions)
    ca, cb, cab = node_counts(st)
    return ((ca + st.committed_count) / n, cb / n, cab / n)


@dataclass(frozen=True)
class LinkCensus:
    """Edge-type census: integer counts plus fractions of total edge count."""

    counts: np.ndarray  # (6,) or (9,) int64
    l: np.ndarray       # counts / m
    cc_count: int
    l_cc: float
    m: int


def link_census(net: Network, st: OpinionState) -> LinkCensus:
    """Count every edge once into its unordered type bucket.

    Returns the 6-vector when the state has no committed nodes, else the
    9-vector with the C-C bucket split out.
    """
    if net.m == 0:
        raise DegenerateNetworkError("link census of a network with no edges")
    if len(st.opinions) != net.n:
        raise ValueError("opinion state size does not match network")
    ops = st.opinions
    a = ops[net.edges[:, 0]].astype(np.int64)
    b = ops[net.edges[:, 1]].astype(np.int64)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    codes = np.bincount(lo * 4 + hi, minlength=16)
    committed = st.committed_count > 0
    table = _PAIR_TO_IDX9 if committed else _PAIR_TO_IDX6
    counts = np.zeros(len(table), dtype=np.int64)
    for (x, y), idx in table.items():
        counts[idx] = codes[min(x, y) * 4 + max(x, y)]
    cc = int(codes[C * 4 + C])
    if not committed and cc:
        raise ValueError("C-C links present in a state with committed_count == 0")
    return LinkCensus(counts=counts, l=counts / net.m, cc_count=cc,
                      l_cc=cc / net.m, m=net.m)


def save_edgelist(net: Network, path) -> None:
    """Write edges as '<i> <j>' lines, 0-indexed, i < j, lexicographically sorted."""
    order = np.lexsort((net.edges[:, 1], net.edges[:, 0]))
    with open(path, "w", newline="\n") as fh:
        for a, b in net.edges[order].tolist():
            fh.write(f"{a} {b}\n")


def load_edgelist(path, n: int | None = None) -> Network:
    """Read an edge list written by save_edgelist.

    Trailing isolated nodes are invisible in the format, so pass n
    explicitly when they matter.
    """
    pairs = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            a, b = line.split()
            a, b = int(a), int(b)
            if a >= b:
                raise ValueError(f"edge list rows must have i < j, got {a} {b}")
            pairs.append((a, b))
    if not pairs and n is None:
        raise ValueError("empty edge list and no node count given")
    edges = np.array(sorted(set(pairs)), dtype=np.int64).reshape(-1, 2)
    if len(edges) != len(pairs):
        raise ValueError("duplicate edges in edge list")
    inferred = int(edges[:, 1].max()) + 1 if len(edges) else 0
    if n is None:
        n = inferred
    elif inferred > n:
        raise ValueError("edge list references nodes beyond n")
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for a, b in edges.tolist():
        adjacency[a].append(b)
        adjacency[b].append(a)
    return Network(n=n, adjacency=adjacency, edges=edges, m=len(edges))
