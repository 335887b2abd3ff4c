"""Seeded random LTS and DMTS.

Every generator is a pure function of its parameters: randomness comes from
``numpy.random.default_rng(seed)`` only.  Unreachable states are pruned and
the remaining ones renumbered in breadth-first order, so a subset
construction over a generated system never pays for dead states.
"""
from __future__ import annotations

import string
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from .dmts import Dmts
from .lts import Lts

SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class GenParams:
    min_states: int = 1
    max_states: int = 5
    n_labels: int = 2
    density: float = 0.15        # probability of each possible (s, a, t)
    must_per_state: tuple = (0, 2)
    branch_size: tuple = (1, 2)
    n_initial: tuple = (1, 2)    # DMTS only
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.min_states <= self.max_states:
            raise ValueError("need 1 <= min_states <= max_states")
        if not 1 <= self.n_labels <= 26:
            raise ValueError("n_labels must lie in 1..26")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        for name in ("must_per_state", "branch_size", "n_initial"):
            lo, hi = getattr(self, name)
            if not 0 <= lo <= hi:
                raise ValueError(f"{name} must be a range 0 <= lo <= hi")
        if self.n_initial[1] < 1:
            raise ValueError("n_initial must allow at least one initial state")
        object.__setattr__(self, "seed", int(self.seed) & SEED_MASK)

    @property
    def labels(self) -> list[str]:
        return list(string.ascii_lowercase[: self.n_labels])

    def with_seed(self, seed: int) -> "GenParams":
        return replace(self, seed=int(seed) & SEED_MASK)


def _rng(p_or_rng):
    if isinstance(p_or_rng, np.random.Generator):
        return p_or_rng
    return np.random.default_rng(p_or_rng.seed)


def _random_triples(rng, n, labels, density):
    mask = rng.random((n, len(labels), n)) < density
    return [(int(s), labels[int(a)], int(t)) for s, a, t in zip(*np.nonzero(mask))]


def _reachable_order(n, roots, triples):
    succ = [[] for _ in range(n)]
    for s, _, t in sorted(triples):
        succ[s].append(t)
    order = {}
    queue = deque()
    for r in roots:
        if r not in order:
            order[r] = len(order)
            queue.append(r)
    while queue:
        s = queue.popleft()
        for t in succ[s]:
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    return order


def prune_lts(i: Lts) -> Lts:
    """Restrict to reachable states, numbered breadth first from the initial state."""
    order = _reachable_order(i.n_states, [i.initial], i.transitions)
    trans = {(order[s], a, order[t]) for s, a, t in i.transitions if s in order}
    return Lts(len(order), 0, frozenset(trans))


def prune_dmts(d: Dmts) -> Dmts:
    """Restrict to states may-reachable from an initial state; keeps at least one state."""
    order = _reachable_order(d.n_states, sorted(d.initial), d.may)
    if not order:
        return Dmts(0)
    may = {(order[s], a, order[t]) for s, a, t in d.may if s in order}
    must = {(order[s], frozenset((a, order[t]) for a, t in n)) for s, n in d.must if s in order}
    return Dmts(len(order), frozenset(order[s] for s in d.initial), frozenset(may), frozenset(must))


def random_lts(p: GenParams, rng=None) -> Lts:
    rng = _rng(rng if rng is not None else p)
    n = int(rng.integers(p.min_states, p.max_states + 1))
    return prune_lts(Lts(n, 0, frozenset(_random_triples(rng, n, p.labels, p.density))))


def random_dmts(p: GenParams, rng=None) -> Dmts:
    """Random DMTS; must-branches are drawn from existing may-transitions."""
    rng = _rng(rng if rng is not None else p)
    n = int(rng.integers(p.min_states, p.max_states + 1))
    may = _random_triples(rng, n, p.labels, p.density)
    out = [[(a, t) for x, a, t in may if x == s] for s in range(n)]
    must = set()
    for s in range(n):
        for _ in range(int(rng.integers(p.must_per_state[0], p.must_per_state[1] + 1))):
            lo = min(p.branch_size[0], len(out[s]))
            hi = min(p.branch_size[1], len(out[s]))
            if lo == 0 and p.branch_size[0] > 0:
                continue  # no may-transition to build a branch from
            size = int(rng.integers(lo, hi + 1))
            picks = rng.choice(len(out[s]), size=size, replace=False) if size else []
            must.add((s, frozenset(out[s][int(i)] for i in picks)))
    k = int(rng.integers(p.n_initial[0], p.n_initial[1] + 1))
    k = max(1, min(k, n))
    initial = frozenset(int(x) for x in rng.choice(n, size=k, replace=False))
    return prune_dmts(Dmts(n, initial, frozenset(may), frozenset(must)))


def unfold(i: Lts, rng) -> Lts:
    """A bisimilar copy of ``i``: one state duplicated, then states shuffled."""
    n = i.n_states
    s = int(rng.integers(n))
    copy = n
    trans = set(i.transitions)
    trans |= {(copy, a, t) for x, a, t in i.transitions if x == s}
    for x, a, t in sorted(i.transitions):
        if t == s and rng.random() < 0.5:
            trans.discard((x, a, t))
            trans.add((x, a, copy))
    perm = [0] + [int(v) + 1 for v in rng.permutation(n)]
    return prune_lts(Lts(n + 1, perm[i.initial], frozenset((perm[x], a, perm[t]) for x, a, t in trans)))


def mutate(i: Lts, rng, labels) -> Lts:
    """Flip one transition of ``i`` (add it if absent, remove it if present)."""
    n = i.n_states
    t = (int(rng.integers(n)), labels[int(rng.integers(len(labels)))], int(rng.integers(n)))
    return prune_lts(Lts(n, i.initial, i.transitions ^ {t}))


def add_summand(i: Lts, rng) -> Lts:
    """Add ``s -a-> c`` next to an existing ``s -a-> t``, where ``c`` copies part of ``t``.

    ``c`` is simulated by ``t``, so the result stays simulation equivalent to
    ``i`` while finer relations may break.
    """
    trans = sorted(i.transitions)
    if not trans:
        return i
    s, a, t = trans[int(rng.integers(len(trans)))]
    c = i.n_states
    out = [(b, u) for x, b, u in trans if x == t]
    keep = [bu for bu in out if rng.random() < 0.6]
    new = set(i.transitions) | {(s, a, c)} | {(c, b, u) for b, u in keep}
    return prune_lts(Lts(i.n_states + 1, i.initial, frozenset(new)))


def random_lts_pair(p: GenParams) -> tuple[Lts, Lts]:
    """A pair biased towards related systems.

    Modes, equally likely: bisimilar copies, single-transition mutants,
    summand extensions (simulation equivalent, often related at low switch
    bounds only) and independent pairs.
    """
    rng = np.random.default_rng(p.seed)
    i1 = random_lts(p, rng)
    mode = int(rng.integers(4))
    if mode == 3:
        i2 = i1
        for _ in range(int(rng.integers(1, 3))):
            nxt = add_summand(i2, rng)
            if nxt.n_states > p.max_states:
                break
            i2 = nxt
        if i2.n_states < p.max_states and rng.random() < 0.5:
            i2 = unfold(i2, rng)
        if i2 == i1 and i1.n_states < p.max_states:
            i1 = unfold(i1, rng)
    elif mode == 0:
        i2 = unfold(i1, rng)
        if i2.n_states > p.max_states:
            i2 = i1
    elif mode == 1:
        i2 = mutate(unfold(i1, rng) if i1.n_states < p.max_states else i1, rng, p.labels)
    else:
        i2 = random_lts(p, rng)
    if rng.random() < 0.5:
        i1, i2 = i2, i1
    return i1, i2


def weaken(d: Dmts, rng) -> Dmts:
    """A DMTS modally refining ``d``.

    Drops some may-transitions outside all musts, drops must-branches, adds
    musts built from remaining mays and keeps a non-empty subset of the initial
    states; the identity relation witnesses the refinement.
    """
    used = {(s, a, t) for s, n in d.must for a, t in n}
    may = {x for x in sorted(d.may) if x in used or rng.random() < 0.7}
    must = set()
    for s, n in sorted(d.must, key=lambda x: (x[0], sorted(x[1]))):
        keep = frozenset(b for b in sorted(n) if rng.random() < 0.8 or len(n) == 1)
        must.add((s, keep))
    for s in range(d.n_states):
        out = sorted((a, t) for x, a, t in may if x == s)
        if out and rng.random() < 0.3:
            must.add((s, frozenset({out[int(rng.integers(len(out)))]})))
    init = sorted(d.initial)
    if init:
        chosen = [x for x in init if rng.random() < 0.7] or [init[0]]
    else:
        chosen = []
    return Dmts(d.n_states, frozenset(chosen), frozenset(may), frozenset(must))


def random_refinement_pair(p: GenParams) -> tuple[Dmts, Dmts]:
    """``(d1, d2)`` with ``d1`` modally refining ``d2`` by construction."""
    rng = np.random.default_rng(p.seed)
    d2 = random_dmts(p, rng)
    return weaken(d2, rng), d2


def random_dmts_pair(p: GenParams) -> tuple[Dmts, Dmts]:
    """Half refinement pairs (in random order), half independent pairs."""
    rng = np.random.default_rng(p.seed)
    d1 = random_dmts(p, rng)
    if rng.random() < 0.5:
        d2 = weaken(d1, rng)
        return (d2, d1) if rng.random() < 0.7 else (d1, d2)
    return d1, random_dmts(p, rng)


def sample_implementation(d: Dmts, rng) -> Lts | None:
    """An LTS satisfying ``d`` by construction, or ``None`` if the sample is stuck.

    Each state keeps one branch of every must plus a random part of its other
    mays; the result is pruned from a random initial state.
    """
    if not d.initial:
        return None
    trans = set()
    for s in range(d.n_states):
        for n in d.musts[s]:
            if n:
                trans.add((s,) + n[int(rng.integers(len(n)))])
        for a, t in d.may_successors[s]:
            if rng.random() < 0.5:
                trans.add((s, a, t))
    init = sorted(d.initial)[int(rng.integers(len(d.initial)))]
    i = prune_lts(Lts(d.n_states, init, frozenset(trans)))
    # a reachable state with an empty must cannot be implemented
    order = _reachable_order(d.n_states, [init], trans)
    if any(not n for s in order for n in d.musts[s]):
        return None
    return i
