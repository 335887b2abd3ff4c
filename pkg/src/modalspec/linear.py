"""Linear k-switching and k-ready relation families.

The trace clauses quantify over arbitrary words, e.g. "every trace from
``s1`` ending in ``t1`` is matched by a trace from ``s2`` ending in some
``t2`` with ``(t1, t2)`` in the next level".  Words are never materialized:
a *subset product* explores configurations ``(t1, Q2)``, where ``t1`` is the
end of some trace of the driving side and ``Q2`` the set of all ends of the
same trace on the following side.  A trace clause then holds iff every
reachable configuration passes a per-configuration test.

Which side drives, and with which one-step relation (plain transitions,
may-transitions or must-branches), is again a function of the family side and
level parity.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .dmts import Dmts, initial_backward, initial_forward, may_clause, must_clause
from .errors import SizeLimit
from .lts import Lts, backward_ready, forward_ready
from .relations import (
    DoubleRelationFamily,
    LtsRelationFamily,
    StateRelation,
    SwitchBound,
    greatest_fixpoint,
)

DEFAULT_MAX_STATES = 16

TRACE = "trace"  # transitions of an LTS
MAY = "may"      # may-transitions of a DMTS
MUST = "must"    # branches of must-transitions of a DMTS


def step_table(system, mode: str) -> tuple[tuple[tuple[str, int], ...], ...]:
    """One-step relation driving the closure ``mode`` of ``system``, per state."""
    if mode == TRACE:
        return system.successors
    if mode == MAY:
        return system.may_successors
    if mode == MUST:
        return system.must_successors
    raise ValueError(f"unknown closure mode {mode!r}")


@dataclass(frozen=True)
class SubsetProduct:
    """Configurations reachable from ``(seed_left, {seed_right})``.

    ``configurations`` is in breadth-first discovery order; ``violations``
    lists those whose right set is empty (a trace of the left side that the
    right side cannot perform).
    """

    seed_left: int
    seed_right: int
    configurations: tuple[tuple[int, frozenset], ...]

    @property
    def violations(self) -> tuple[tuple[int, frozenset], ...]:
        return tuple(c for c in self.configurations if not c[1])

    def __contains__(self, config) -> bool:
        left, right = config
        return (left, frozenset(right)) in set(self.configurations)

    def __len__(self) -> int:
        return len(self.configurations)


def _product_masks(left_steps, right_steps, seed_left, seed_right):
    """Breadth-first subset product with right sets encoded as bit masks."""
    # per right state: label -> successor mask
    right_post = []
    for succ in right_steps:
        d = {}
        for a, t in succ:
            d[a] = d.get(a, 0) | (1 << t)
        right_post.append(d)
    start = (seed_left, 1 << seed_right)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        t1, mask = queue.popleft()
        for a, u1 in left_steps[t1]:
            nxt = 0
            m = mask
            while m:
                low = m & -m
                nxt |= right_post[low.bit_length() - 1].get(a, 0)
                m ^= low
            cfg = (u1, nxt)
            if cfg not in seen:
                seen.add(cfg)
                order.append(cfg)
                queue.append(cfg)
    return order


def _mask_to_set(mask: int) -> frozenset:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return frozenset(out)


def subset_product(lhs, rhs, seed: tuple[int, int], mode=(TRACE, TRACE),
                   max_states: int = DEFAULT_MAX_STATES) -> SubsetProduct:
    """Closure of ``(seed[0], {seed[1]})`` under synchronized steps.

    ``lhs`` drives: each step ``t1 -a-> u1`` of its ``mode[0]`` closure moves
    the right set to all ``a``-successors (under ``mode[1]``) of its members.
    """
    if rhs.n_states > max_states:
        raise SizeLimit(f"subset construction over {rhs.n_states} states exceeds cap {max_states}")
    configs = _product_masks(step_table(lhs, mode[0]), step_table(rhs, mode[1]), *seed)
    return SubsetProduct(seed[0], seed[1], tuple((t, _mask_to_set(m)) for t, m in configs))


class _Side:
    """Precomputed subset products for every seed pair, driven by one side."""

    def __init__(self, driver_steps, follower_steps, n_driver, n_follower):
        self.configs = {}
        for sd in range(n_driver):
            for sf in range(n_follower):
                self.configs[sd, sf] = _product_masks(driver_steps, follower_steps, sd, sf)

    def no_target(self, transpose: bool, shape) -> np.ndarray:
        out = np.zeros(shape, dtype=bool)
        for (sd, sf), cfgs in self.configs.items():
            ok = all(mask for _, mask in cfgs)
            out[(sf, sd) if transpose else (sd, sf)] = ok
        return out

    def each_has(self, pred: np.ndarray, transpose: bool, shape) -> np.ndarray:
        """Pairs whose every configuration ``(t, Q)`` has ``q`` in ``Q`` with ``pred``.

        ``pred`` is indexed ``[left, right]``; with ``transpose`` the driver
        is the right side.
        """
        masks = _row_masks(pred.T if transpose else pred)
        out = np.zeros(shape, dtype=bool)
        for (sd, sf), cfgs in self.configs.items():
            ok = all(masks[t] & mask for t, mask in cfgs)
            out[(sf, sd) if transpose else (sd, sf)] = ok
        return out


def _row_masks(m: np.ndarray) -> list[int]:
    out = []
    for row in m:
        v = 0
        for idx in np.nonzero(row)[0]:
            v |= 1 << int(idx)
        out.append(v)
    return out


def _linear_gfp(shape, keys, spec, sides, bound):
    """Shared fixpoint for LTS and DMTS families.

    ``spec[key] = (side_name, next_key, ready_pred)``: the driving subset
    product, the level targeted by the switch clause (``None`` at the top)
    and, for the ready top level, the endpoint predicate.
    """
    static = {}
    for key in keys:
        side_name, nxt, ready_pred = spec[key]
        side, transpose = sides[side_name]
        ok = side.no_target(transpose, shape)
        if nxt is None and bound.ready:
            ok &= side.each_has(ready_pred, transpose, shape)
        static[key] = ok

    def refine(r):
        out = {}
        for key in keys:
            side_name, nxt, _ = spec[key]
            ok = static[key]
            if nxt is not None:
                side, transpose = sides[side_name]
                ok = ok & side.each_has(r[nxt], transpose, shape)
            out[key] = ok
        return out

    return greatest_fixpoint({key: np.ones(shape, dtype=bool) for key in keys}, refine)


def _bound(bound) -> SwitchBound:
    return SwitchBound.coerce(bound)


def _cap(system, max_states):
    if system.n_states > max_states:
        raise SizeLimit(
            f"subset construction over {system.n_states} states exceeds cap {max_states}"
        )


def greatest_linear_lts_family(i1: Lts, i2: Lts, bound, max_states=DEFAULT_MAX_STATES):
    bound = _bound(bound)
    _cap(i2, max_states)
    if bound.n_levels > 1:
        _cap(i1, max_states)
    shape = (i1.n_states, i2.n_states)
    spec = {}
    for j in bound.levels():
        if j % 2 == 0:
            spec[j] = ("L", bound.next_level(j), backward_ready(i1, i2))
        else:
            spec[j] = ("R", bound.next_level(j), forward_ready(i1, i2))
    used = {name for name, _, _ in spec.values()}
    sides = {}
    if "L" in used:
        sides["L"] = (_Side(i1.successors, i2.successors, i1.n_states, i2.n_states), False)
    if "R" in used:
        sides["R"] = (_Side(i2.successors, i1.successors, i2.n_states, i1.n_states), True)
    gfp = _linear_gfp(shape, list(bound.levels()), spec, sides, bound)
    return [gfp[j] for j in bound.levels()]


def linear_family(i1: Lts, i2: Lts, bound, max_states: int = DEFAULT_MAX_STATES
                  ) -> LtsRelationFamily | None:
    """Greatest linear k-switching (k-ready) family from ``i1`` to ``i2``, or ``None``.

    Level 0 alone is trace inclusion, with ``k = 1`` impossible-futures
    inclusion, with ``k = 0`` and ready failure inclusion.
    """
    bound = _bound(bound)
    levels = greatest_linear_lts_family(i1, i2, bound, max_states)
    if not levels[0][i1.initial, i2.initial]:
        return None
    return LtsRelationFamily(bound, tuple(StateRelation(m) for m in levels))


def equiv_linear(i1: Lts, i2: Lts, bound, max_states: int = DEFAULT_MAX_STATES) -> bool:
    bound = _bound(bound)
    return (linear_family(i1, i2, bound, max_states) is not None
            and linear_family(i2, i1, bound, max_states) is not None)


def dmts_driver(side: int, j: int) -> str:
    """Closure driving ``R_side^j``: ``may`` (left drives) or ``must`` (right drives)."""
    return MAY if (side == 1) == (j % 2 == 0) else MUST


def greatest_linear_dmts_family(d1: Dmts, d2: Dmts, bound, literal: bool = False,
                                max_states: int = DEFAULT_MAX_STATES) -> dict:
    """Greatest linear double family keyed by ``(side, level)``; initial clause not applied.

    With ``literal`` the even backward levels step into forward level ``j + 1``
    instead of backward level ``j + 1``.
    """
    bound = _bound(bound)
    _cap(d1, max_states)
    _cap(d2, max_states)
    shape = (d1.n_states, d2.n_states)
    sides = {
        MAY: (_Side(d1.may_successors, d2.may_successors, d1.n_states, d2.n_states), False),
        MUST: (_Side(d2.must_successors, d1.must_successors, d2.n_states, d1.n_states), True),
    }
    ready = {MAY: must_clause(d1, d2, None), MUST: may_clause(d1, d2, None)}
    keys = [(side, j) for side in (1, 2) for j in bound.levels()]
    spec = {}
    for side, j in keys:
        drive = dmts_driver(side, j)
        nxt = bound.next_level(j)
        target_side = 1 if (literal and side == 2 and j % 2 == 0) else side
        spec[side, j] = (drive, None if nxt is None else (target_side, nxt), ready[drive])
    return _linear_gfp(shape, keys, spec, sides, bound)


def linear_refines(d1: Dmts, d2: Dmts, bound, literal: bool = False,
                   max_states: int = DEFAULT_MAX_STATES) -> DoubleRelationFamily | None:
    """Greatest linear k-switching (k-ready) double family from ``d1`` to ``d2``, or ``None``."""
    bound = _bound(bound)
    gfp = greatest_linear_dmts_family(d1, d2, bound, literal, max_states)
    if initial_forward(d1, d2, gfp[1, 0]) or initial_backward(d1, d2, gfp[2, 0]):
        return None
    return DoubleRelationFamily(
        bound,
        tuple(StateRelation(gfp[1, j]) for j in bound.levels()),
        tuple(StateRelation(gfp[2, j]) for j in bound.levels()),
    )
