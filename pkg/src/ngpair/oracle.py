"""Independent first-principles checkers for the naming-game dynamics.

Two oracles live here.  ``enumerate_rhs`` rebuilds the pair-approximation
right-hand side by enumerating every (speaker, listener, utterance) event
from the raw game rules: the direct relinking of the communicating pair
plus, for each node that switched opinion, the expected relinking of its
other (k-1) edges under the conditional neighbor field of its *old*
opinion.  It never touches the transcribed matrices in
:mod:`ngpair.pair_ode`, which is what makes the comparison meaningful.

``exact_expected_consensus_time`` solves the naming-game Markov chain on
small complete graphs for the expected first-passage time to consensus,
giving a closed-form target for the stochastic simulator.

Both oracles run in exact rational arithmetic when fed Fractions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as F

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

OPINIONS_6 = ("A", "B", "AB")
OPINIONS_9 = ("C", "A", "B", "AB")

LINKS_6 = (("A", "A"), ("A", "B"), ("A", "AB"),
           ("B", "B"), ("B", "AB"), ("AB", "AB"))
LINKS_9 = (("A", "C"), ("B", "C"), ("AB", "C")) + LINKS_6

_IDX6 = {frozenset(pair): i for i, pair in enumerate(LINKS_6)}
_IDX9 = {frozenset(pair): i for i, pair in enumerate(LINKS_9)}

# words a node recognizes; a committed node holds A and only A
MEMORY = {"A": ("A",), "B": ("B",), "AB": ("A", "B"), "C": ("A",)}

# (word, probability) pairs a speaker can transmit
UTTERANCES = {"A": (("A", 1),), "B": (("B", 1),), "C": (("A", 1),),
              "AB": (("A", F(1, 2)), ("B", F(1, 2)))}


def interaction(speaker: str, listener: str, word: str) -> tuple[str, str]:
    """Post-interaction opinions under the original direct rules.

    A listener lacking the word appends it (becoming AB); a listener that
    knows it triggers agreement and both sides collapse to the word.
    Committed listeners never change but an utterance of A still counts
    as agreement; committed speakers never change.
    """
    if listener == "C":
        agreed = word == "A"
        new_listener = "C"
    elif word in MEMORY[listener]:
        agreed = True
        new_listener = word
    else:
        agreed = False
        new_listener = "AB"
    new_speaker = speaker
    if agreed and speaker == "AB":
        new_speaker = word
    return new_speaker, new_listener


@dataclass(frozen=True)
class CommunicationEvent:
    """One (speaker, listener, utterance) branch with its probability."""

    speaker: str
    listener: str
    word: str
    probability: object  # Fraction or float, matching the input state
    direct: tuple        # change of the pair's own link, one entry per link type
    speaker_change: tuple | None  # (old, new) opinion or None
    listener_change: tuple | None


def _tables(dim: int):
    if dim == 6:
        return OPINIONS_6, _IDX6
    if dim == 9:
        return OPINIONS_9, _IDX9
    raise ValueError("link state must have 6 or 9 components")


def _pair_probability(l, l_cc, idx, s_op, o_op):
    """P(random speaker has s_op and its random neighbor has o_op)."""
    if s_op == "C" and o_op == "C":
        return l_cc
    p = l[idx[frozenset((s_op, o_op))]]
    if s_op != o_op:
        p = p * F(1, 2)
    return p


def enumerate_events(l, l_cc=0) -> list[CommunicationEvent]:
    """All communication events with positive probability at state l."""
    opinions, idx = _tables(len(l))
    dim = len(l)
    events = []
    for s_op in opinions:
        for o_op in opinions:
            p_pair = _pair_probability(l, l_cc, idx, s_op, o_op)
            if p_pair == 0:
                continue
            for word, weight in UTTERANCES[s_op]:
                new_s, new_o = interaction(s_op, o_op, word)
                direct = [0] * dim
                old_key = frozenset((s_op, o_op))
                new_key = frozenset((new_s, new_o))
                if old_key != new_key:
                    direct[idx[old_key]] -= 1
                    direct[idx[new_key]] += 1
                events.append(CommunicationEvent(
                    speaker=s_op, listener=o_op, word=word,
                    probability=p_pair * weight,
                    direct=tuple(direct),
                    speaker_change=(s_op, new_s) if new_s != s_op else None,
                    listener_change=(o_op, new_o) if new_o != o_op else None,
                ))
    return events


def conditional_field(l, given: str):
    """P(neighbor opinion | node opinion) from the link fractions.

    Returns a dict over neighbor opinions, or None when no links touch a
    node of the given opinion.  Exact when l holds Fractions.
    """
    opinions, idx = _tables(len(l))
    num = {}
    for nb in opinions:
        key = frozenset((given, nb))
        if key not in idx:  # C-C in the 9D table
            continue
        w = l[idx[key]]
        num[nb] = 2 * w if nb == given else w
    den = sum(num.values())
    if den == 0:
        return None
    return {nb: w / den for nb, w in num.items()}


def link_correspondence(old: str, new: str, dim: int) -> list[list[int]]:
    """Relinking matrix when a node flips old->new: rows are link types,
    columns follow the neighbor-opinion order of the system."""
    opinions, idx = _tables(dim)
    cols = []
    for nb in opinions:
        col = [0] * dim
        old_key = frozenset((old, nb))
        new_key = frozenset((new, nb))
        if old_key in idx:
            col[idx[old_key]] -= 1
        if new_key in idx:
            col[idx[new_key]] += 1
        cols.append(col)
    return [[cols[j][i] for j in range(len(opinions))] for i in range(dim)]


def enumerate_rhs(l, k_avg, l_cc=0):
    """dl/dt rebuilt from the raw rules; exact for Fraction inputs.

    Sums probability * (direct + (k-1) * related) over every event and
    scales by 2/k, the conversion from per-interaction link counts to
    per-unit-time fractions.
    """
    opinions, idx = _tables(len(l))
    dim = len(l)
    if k_avg < 1:
        raise ValueError(f"k_avg must be >= 1, got {k_avg!r}")
    fields = {op: conditional_field(l, op) for op in opinions}
    km1 = k_avg - 1
    out = [0] * dim
    for ev in enumerate_events(l, l_cc):
        for i, d in enumerate(ev.direct):
            if d:
                out[i] += ev.probability * d
        for change in (ev.speaker_change, ev.listener_change):
            if change is None:
                continue
            old, new = change
            field = fields[old]
            if field is None:
                continue
            for nb, w_nb in field.items():
                if w_nb == 0:
                    continue
                scale = ev.probability * km1 * w_nb
                old_key = frozenset((old, nb))
                new_key = frozenset((new, nb))
                if old_key in idx:
                    out[idx[old_key]] -= scale
                if new_key in idx:
                    out[idx[new_key]] += scale
    return [x * F(2) / k_avg for x in out]


def direct_matrix(dim: int) -> list[list[F]]:
    """The constant direct-change matrix, column by column, by evaluating
    the enumeration at unit mass on each link type with k = 1."""
    cols = []
    for j in range(dim):
        basis = [F(0)] * dim
        basis[j] = F(1)
        col = enumerate_rhs(basis, F(1))
        cols.append([c / 2 for c in col])
    return [[cols[j][i] for j in range(dim)] for i in range(dim)]


def event_probability_total(l, l_cc=0):
    """Total probability mass over events, including the inert C-C pair."""
    return sum(ev.probability for ev in enumerate_events(l, l_cc))


# --- exact Markov chain on small complete graphs -------------------------

_CODE = {"A": 0, "B": 1, "AB": 2}


def exact_expected_consensus_time(n: int, committed_count: int = 0,
                                  eta: float = 1.0,
                                  init: tuple[str, ...] | None = None) -> float:
    """Expected first time p_A or p_B reaches eta, in unit times.

    Builds the one-interaction transition matrix of the naming game on the
    complete graph with ``committed_count`` committed-A nodes and solves
    the first-passage linear system.  ``init`` lists the opinions of the
    susceptible nodes ("A"/"B"/"AB"); it defaults to all B when committed
    nodes are present.  State space is 3**(n - committed_count), so n is
    capped at 8.
    """
    if not 2 <= n <= 8:
        raise ValueError("exact chain supports 2 <= n <= 8")
    if not 0 <= committed_count < n:
        raise ValueError("committed_count must lie in [0, n)")
    m = n - committed_count
    if init is None:
        if committed_count == 0:
            raise ValueError("init is required when there are no committed nodes")
        init = ("B",) * m
    if len(init) != m or any(op not in _CODE for op in init):
        raise ValueError("init must list A/B/AB for each susceptible node")

    states = list(itertools.product(("A", "B", "AB"), repeat=m))
    index = {s: i for i, s in enumerate(states)}
    thr = eta * n - 1e-12

    def is_target(state) -> bool:
        count_a = committed_count + sum(1 for op in state if op == "A")
        count_b = sum(1 for op in state if op == "B")
        return count_a >= thr or count_b >= thr

    target = np.array([is_target(s) for s in states])
    transient = np.where(~target)[0]
    pos = {int(i): k for k, i in enumerate(transient)}
    start = index[tuple(init)]
    if target[start]:
        return 0.0

    pick = F(1, n * (n - 1))
    rows, cols, vals = [], [], []
    for si in transient:
        state = states[si]
        acc: dict[int, F] = {}
        for speaker in range(n):
            s_op = "C" if speaker < committed_count else state[speaker - committed_count]
            for listener in range(n):
                if listener == speaker:
                    continue
                o_op = ("C" if listener < committed_count
                        else state[listener - committed_count])
                for word, weight in UTTERANCES[s_op]:
                    new_s, new_o = interaction(s_op, o_op, word)
                    nxt = list(state)
                    if speaker >= committed_count:
                        nxt[speaker - committed_count] = new_s
                    if listener >= committed_count:
                        nxt[listener - committed_count] = new_o
                    ni = index[tuple(nxt)]
                    acc[ni] = acc.get(ni, F(0)) + pick * weight
        for ni, pr in acc.items():
            if not target[ni]:
                rows.append(pos[int(si)])
                cols.append(pos[ni])
                vals.append(float(pr))

    size = len(transient)
    t_mat = scipy.sparse.csr_matrix(
        (vals, (rows, cols)), shape=(size, size))
    lhs = scipy.sparse.identity(size, format="csr") - t_mat
    rhs = np.full(size, 1.0 / n)
    times = scipy.sparse.linalg.spsolve(lhs.tocsc(), rhs)
    return float(times[pos[start]])
