"""Disjunctive modal transition systems, the LTS embedding and modal refinement."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import InconsistentMust, InvalidState
from .lts import Lts
from .relations import StateRelation, greatest_fixpoint


@dataclass(frozen=True)
class Dmts:
    """A DMTS ``(S, S0, may, must)`` over the states ``0 .. n_states-1``.

    ``may`` holds triples ``(s, a, t)``; ``must`` holds pairs ``(s, N)`` where
    ``N`` is a frozenset of ``(a, t)`` branches.  ``N`` may be empty, and the
    initial set may be empty or contain several states.
    """

    n_states: int
    initial: frozenset = frozenset()
    may: frozenset = frozenset()
    must: frozenset = frozenset()

    def __post_init__(self):
        n = self.n_states
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise InvalidState(f"state count must be a natural number, got {n!r}")
        object.__setattr__(self, "n_states", int(n))

        def check(s, what):
            if not 0 <= s < n:
                raise InvalidState(f"{what} {s} out of range 0..{n - 1}")
            return int(s)

        init = frozenset(check(s, "initial state") for s in self.initial)
        may = set()
        for s, a, t in self.may:
            may.add((check(s, "may source"), str(a), check(t, "may target")))
        must = set()
        for s, branches in self.must:
            s = check(s, "must source")
            nb = frozenset((str(a), check(t, "must branch target")) for a, t in branches)
            for a, t in nb:
                if (s, a, t) not in may:
                    raise InconsistentMust(
                        f"must-transition from {s} has branch ({a!r}, {t}) "
                        f"without may-transition ({s}, {a!r}, {t})"
                    )
            must.add((s, nb))
        object.__setattr__(self, "initial", init)
        object.__setattr__(self, "may", frozenset(may))
        object.__setattr__(self, "must", frozenset(must))

    @property
    def states(self) -> range:
        return range(self.n_states)

    @cached_property
    def alphabet(self) -> frozenset:
        return frozenset(a for _, a, _ in self.may)

    @cached_property
    def may_successors(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        out = [[] for _ in self.states]
        for s, a, t in self.may:
            out[s].append((a, t))
        return tuple(tuple(sorted(x)) for x in out)

    @cached_property
    def musts(self) -> tuple[tuple[tuple[tuple[str, int], ...], ...], ...]:
        """``musts[s]``: the branch sets of ``s``, each a sorted tuple, in canonical order."""
        out = [[] for _ in self.states]
        for s, branches in self.must:
            out[s].append(tuple(sorted(branches)))
        return tuple(tuple(sorted(x, key=lambda b: (len(b), b))) for x in out)

    @cached_property
    def must_successors(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """One-step relation of must-traces: ``(a, u)`` for every branch of every ``s -> N``."""
        return tuple(
            tuple(sorted({b for branches in self.musts[s] for b in branches}))
            for s in self.states
        )

    def may_actions(self, s: int) -> frozenset:
        return frozenset(a for a, _ in self.may_successors[s])

    def may_post(self, s: int, a: str) -> tuple[int, ...]:
        return tuple(t for b, t in self.may_successors[s] if b == a)

    def may_adjacency(self, a: str) -> np.ndarray:
        m = np.zeros((self.n_states, self.n_states), dtype=bool)
        for s, b, t in self.may:
            if b == a:
                m[s, t] = True
        return m

    @cached_property
    def _may_adjacency(self) -> dict:
        return {a: self.may_adjacency(a) for a in self.alphabet}


def validate_dmts(raw) -> Dmts:
    """Validate a candidate DMTS given as a :class:`Dmts` or a mapping of its fields."""
    if isinstance(raw, Dmts):
        return Dmts(raw.n_states, raw.initial, raw.may, raw.must)
    if isinstance(raw, Mapping):
        return Dmts(
            raw["n_states"],
            frozenset(raw.get("initial", ())),
            frozenset(tuple(x) for x in raw.get("may", ())),
            frozenset((s, frozenset(tuple(b) for b in n)) for s, n in raw.get("must", ())),
        )
    raise TypeError(f"cannot build a DMTS from {type(raw).__name__}")


def chi_embed(i: Lts) -> Dmts:
    """The characteristic DMTS of an LTS: mays are its transitions, musts their singletons."""
    return Dmts(
        i.n_states,
        frozenset({i.initial}),
        i.transitions,
        frozenset((s, frozenset({(a, t)})) for s, a, t in i.transitions),
    )


# Clause evaluators over all pairs.  ``target`` is a boolean S1 x S2 matrix, or
# None for the target-free (ready) versions of the clauses.

def may_clause(d1: Dmts, d2: Dmts, target) -> np.ndarray:
    """``for all s1 ~a~> t1 exists s2 ~a~> t2 with (t1, t2) in target``."""
    n1, n2 = d1.n_states, d2.n_states
    if target is None:
        return np.array(
            [[d1.may_actions(s1) <= d2.may_actions(s2) for s2 in range(n2)] for s1 in range(n1)],
            dtype=bool,
        ).reshape(n1, n2)
    ok = np.ones((n1, n2), dtype=bool)
    tgt = target.astype(np.int64)
    for a, a1 in d1._may_adjacency.items():
        a2 = d2._may_adjacency.get(a)
        if a2 is None:
            matched = np.zeros((n1, n2), dtype=bool)
        else:
            matched = (tgt @ a2.T.astype(np.int64)) > 0
        ok &= ~((a1.astype(np.int64) @ (~matched).astype(np.int64)) > 0)
    return ok


def must_clause(d1: Dmts, d2: Dmts, target) -> np.ndarray:
    """``for all s2 -> N2 exists s1 -> N1: for all (a, t1) in N1 exists (a, t2) in N2
    with (t1, t2) in target``."""
    n1, n2 = d1.n_states, d2.n_states
    ok = np.ones((n1, n2), dtype=bool)
    for s2 in range(n2):
        musts2 = d2.musts[s2]
        if not musts2:
            continue
        for s1 in range(n1):
            musts1 = d1.musts[s1]
            ok[s1, s2] = all(
                any(_covers(n1_, n2_, target) for n1_ in musts1) for n2_ in musts2
            )
    return ok


def _covers(branches1, branches2, target) -> bool:
    for a, t1 in branches1:
        if not any(b == a and (target is None or target[t1, t2]) for b, t2 in branches2):
            return False
    return True


def initial_forward(d1: Dmts, d2: Dmts, rel: np.ndarray) -> list[int]:
    """Initial states of ``d1`` related by ``rel`` to no initial state of ``d2``."""
    init2 = sorted(d2.initial)
    return [s1 for s1 in sorted(d1.initial) if not any(rel[s1, s2] for s2 in init2)]


def initial_backward(d1: Dmts, d2: Dmts, rel: np.ndarray) -> list[int]:
    """Initial states of ``d2`` related by ``rel`` to no initial state of ``d1``."""
    init1 = sorted(d1.initial)
    return [s2 for s2 in sorted(d2.initial) if not any(rel[s1, s2] for s1 in init1)]


def greatest_modal_refinement(d1: Dmts, d2: Dmts) -> StateRelation:
    start = np.ones((d1.n_states, d2.n_states), dtype=bool)
    gfp = greatest_fixpoint(
        {0: start},
        lambda r: {0: may_clause(d1, d2, r[0]) & must_clause(d1, d2, r[0])},
    )
    return StateRelation(gfp[0])


def modal_refines(d1: Dmts, d2: Dmts) -> StateRelation | None:
    """Greatest modal refinement witness for ``d1 <= d2``, or ``None``."""
    rel = greatest_modal_refinement(d1, d2)
    if initial_forward(d1, d2, rel.matrix):
        return None
    return rel


def satisfies(i: Lts, d: Dmts) -> bool:
    """``i |= d`` iff the characteristic DMTS of ``i`` modally refines ``d``."""
    return modal_refines(chi_embed(i), d) is not None
