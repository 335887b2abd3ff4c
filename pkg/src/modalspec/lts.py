"""Finite labeled transition systems, bisimilarity and simulation."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import InvalidState
from .relations import StateRelation, greatest_fixpoint


@dataclass(frozen=True)
class Lts:
    """An LTS ``(S, s0, T)`` over the states ``0 .. n_states-1``.

    Duplicate transitions collapse (set semantics) and labels used by
    transitions are added to ``alphabet``.
    """

    n_states: int
    initial: int
    transitions: frozenset = frozenset()
    alphabet: frozenset = field(default=frozenset())

    def __post_init__(self):
        n = self.n_states
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidState(f"an LTS needs at least one state, got {n!r}")
        object.__setattr__(self, "n_states", int(n))
        if not 0 <= self.initial < n:
            raise InvalidState(f"initial state {self.initial} out of range 0..{n - 1}")
        object.__setattr__(self, "initial", int(self.initial))
        trans = set()
        for s, a, t in self.transitions:
            if not (0 <= s < n and 0 <= t < n):
                raise InvalidState(f"transition ({s}, {a!r}, {t}) leaves range 0..{n - 1}")
            trans.add((int(s), str(a), int(t)))
        object.__setattr__(self, "transitions", frozenset(trans))
        labels = {str(a) for a in self.alphabet} | {a for _, a, _ in trans}
        object.__setattr__(self, "alphabet", frozenset(labels))

    @property
    def states(self) -> range:
        return range(self.n_states)

    @cached_property
    def successors(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """``successors[s]``: sorted ``(label, target)`` pairs leaving ``s``."""
        out = [[] for _ in self.states]
        for s, a, t in self.transitions:
            out[s].append((a, t))
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        out = [[] for _ in self.states]
        for s, a, t in self.transitions:
            out[t].append((a, s))
        return tuple(tuple(sorted(x)) for x in out)

    def actions(self, s: int) -> frozenset:
        return frozenset(a for a, _ in self.successors[s])

    def post(self, s: int, a: str) -> tuple[int, ...]:
        return tuple(t for b, t in self.successors[s] if b == a)

    def adjacency(self, a: str) -> np.ndarray:
        """Boolean ``n x n`` matrix of the ``a``-transitions."""
        return self._adjacency.get(a, np.zeros((self.n_states, self.n_states), dtype=bool))

    @cached_property
    def _adjacency(self) -> dict:
        mats = {}
        for s, a, t in self.transitions:
            m = mats.setdefault(a, np.zeros((self.n_states, self.n_states), dtype=bool))
            m[s, t] = True
        for m in mats.values():
            m.setflags(write=False)
        return mats

    def sorted_transitions(self) -> list[tuple[int, str, int]]:
        return sorted(self.transitions)


def validate_lts(raw) -> Lts:
    """Validate a candidate LTS given as an :class:`Lts` or a mapping of its fields."""
    if isinstance(raw, Lts):
        return Lts(raw.n_states, raw.initial, raw.transitions, raw.alphabet)
    if isinstance(raw, Mapping):
        return Lts(
            raw["n_states"],
            raw.get("initial", 0),
            frozenset(tuple(x) for x in raw.get("transitions", ())),
            frozenset(raw.get("alphabet", ())),
        )
    raise TypeError(f"cannot build an LTS from {type(raw).__name__}")


# Transfer clauses, evaluated for all pairs at once.  Each helper returns the
# boolean matrix of pairs (s1, s2) satisfying the clause w.r.t. ``target``.

def forward_match(i1: Lts, i2: Lts, target: np.ndarray) -> np.ndarray:
    """``for all s1 -a-> t1 exists s2 -a-> t2 with (t1, t2) in target``."""
    ok = np.ones((i1.n_states, i2.n_states), dtype=bool)
    for a in i1.alphabet:
        a1 = i1.adjacency(a)
        # matched[t1, s2]: some a-successor t2 of s2 has (t1, t2) in target
        matched = (target.astype(np.int64) @ i2.adjacency(a).T.astype(np.int64)) > 0
        bad = (a1.astype(np.int64) @ (~matched).astype(np.int64)) > 0
        ok &= ~bad
    return ok


def backward_match(i1: Lts, i2: Lts, target: np.ndarray) -> np.ndarray:
    """``for all s2 -a-> t2 exists s1 -a-> t1 with (t1, t2) in target``."""
    ok = np.ones((i1.n_states, i2.n_states), dtype=bool)
    for a in i2.alphabet:
        a2 = i2.adjacency(a)
        # matched[s1, t2]: some a-successor t1 of s1 has (t1, t2) in target
        matched = (i1.adjacency(a).astype(np.int64) @ target.astype(np.int64)) > 0
        bad = ((~matched).astype(np.int64) @ a2.T.astype(np.int64)) > 0
        ok &= ~bad
    return ok


def forward_ready(i1: Lts, i2: Lts) -> np.ndarray:
    """``for all s1 -a-> _ exists s2 -a-> _`` (action inclusion, no target)."""
    return np.array(
        [[i1.actions(s1) <= i2.actions(s2) for s2 in i2.states] for s1 in i1.states],
        dtype=bool,
    ).reshape(i1.n_states, i2.n_states)


def backward_ready(i1: Lts, i2: Lts) -> np.ndarray:
    """``for all s2 -a-> _ exists s1 -a-> _``."""
    return np.array(
        [[i2.actions(s2) <= i1.actions(s1) for s2 in i2.states] for s1 in i1.states],
        dtype=bool,
    ).reshape(i1.n_states, i2.n_states)


def _full(i1: Lts, i2: Lts) -> np.ndarray:
    return np.ones((i1.n_states, i2.n_states), dtype=bool)


def greatest_bisimulation(i1: Lts, i2: Lts) -> StateRelation:
    """The greatest bisimulation between the two state spaces (initial pair not required)."""
    gfp = greatest_fixpoint(
        {0: _full(i1, i2)},
        lambda r: {0: forward_match(i1, i2, r[0]) & backward_match(i1, i2, r[0])},
    )
    return StateRelation(gfp[0])


def greatest_simulation(i1: Lts, i2: Lts) -> StateRelation:
    gfp = greatest_fixpoint({0: _full(i1, i2)}, lambda r: {0: forward_match(i1, i2, r[0])})
    return StateRelation(gfp[0])


def bisimilar(i1: Lts, i2: Lts) -> StateRelation | None:
    """Greatest bisimulation if it relates the initial states, else ``None``."""
    rel = greatest_bisimulation(i1, i2)
    return rel if (i1.initial, i2.initial) in rel else None


def simulates(i1: Lts, i2: Lts) -> StateRelation | None:
    """Greatest simulation of ``i1`` by ``i2`` if it relates the initial states."""
    rel = greatest_simulation(i1, i2)
    return rel if (i1.initial, i2.initial) in rel else None


def simulation_equivalent(i1: Lts, i2: Lts) -> bool:
    return simulates(i1, i2) is not None and simulates(i2, i1) is not None


def is_bisimulation(i1: Lts, i2: Lts, rel: StateRelation) -> bool:
    """Check both transfer clauses pair by pair, without the fixpoint machinery."""
    for s1, s2 in rel:
        for a, t1 in i1.successors[s1]:
            if not any((t1, t2) in rel for t2 in i2.post(s2, a)):
                return False
        for a, t2 in i2.successors[s2]:
            if not any((t1, t2) in rel for t1 in i1.post(s1, a)):
                return False
    return True


def is_simulation(i1: Lts, i2: Lts, rel: StateRelation) -> bool:
    for s1, s2 in rel:
        for a, t1 in i1.successors[s1]:
            if not any((t1, t2) in rel for t2 in i2.post(s2, a)):
                return False
    return True
