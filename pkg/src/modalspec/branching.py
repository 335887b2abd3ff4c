"""Branching k-switching and k-ready relation families.

Every level ``j`` of a family carries two clauses: a *within* clause whose
matched successors stay in level ``j``, and a *switch* clause (only when a next
level exists) whose matched successors land in level ``j + 1``.  Which
transfer clause plays which role depends only on the family side and the
parity of ``j``; :func:`lts_roles` and :func:`dmts_roles` encode that table.
With the ready flag, the top level ``k`` additionally satisfies the switch
clause without a target relation.
"""
from __future__ import annotations

import numpy as np

from . import lts as _lts
from .dmts import (
    Dmts,
    initial_backward,
    initial_forward,
    may_clause,
    must_clause,
)
from .lts import Lts
from .relations import (
    DoubleRelationFamily,
    LtsRelationFamily,
    StateRelation,
    SwitchBound,
    greatest_fixpoint,
)

FORWARD = "forward"    # for all moves of the left system, matched on the right
BACKWARD = "backward"  # for all moves of the right system, matched on the left
MAY = "may"            # for all may-moves of d1, matched by may-moves of d2
MUST = "must"          # for all must-moves of d2, answered by must-moves of d1


def lts_roles(j: int) -> tuple[str, str]:
    """``(within, switch)`` clause kinds of level ``j`` of an LTS family."""
    return (FORWARD, BACKWARD) if j % 2 == 0 else (BACKWARD, FORWARD)


def dmts_roles(side: int, j: int) -> tuple[str, str]:
    """``(within, switch)`` clause kinds of ``R_side^j`` (side 1 or 2) of a DMTS family."""
    if (side == 1) == (j % 2 == 0):
        return (MAY, MUST)
    return (MUST, MAY)


def _lts_clause(kind, i1, i2, target):
    if kind == FORWARD:
        return _lts.forward_ready(i1, i2) if target is None else _lts.forward_match(i1, i2, target)
    return _lts.backward_ready(i1, i2) if target is None else _lts.backward_match(i1, i2, target)


def _dmts_clause(kind, d1, d2, target):
    if kind == MAY:
        return may_clause(d1, d2, target)
    return must_clause(d1, d2, target)


def _check(bound) -> SwitchBound:
    return SwitchBound.coerce(bound)


def greatest_lts_family(i1: Lts, i2: Lts, bound: SwitchBound) -> list[np.ndarray]:
    """Greatest branching family from ``i1`` to ``i2``, ignoring the initial pair."""
    bound = _check(bound)
    full = np.ones((i1.n_states, i2.n_states), dtype=bool)

    def refine(r):
        out = {}
        for j in bound.levels():
            within, switch = lts_roles(j)
            ok = _lts_clause(within, i1, i2, r[j])
            nxt = bound.next_level(j)
            if nxt is not None:
                ok = ok & _lts_clause(switch, i1, i2, r[nxt])
            elif bound.ready:
                ok = ok & _lts_clause(switch, i1, i2, None)
            out[j] = ok
        return out

    gfp = greatest_fixpoint({j: full for j in bound.levels()}, refine)
    return [gfp[j] for j in bound.levels()]


def branching_family(i1: Lts, i2: Lts, bound) -> LtsRelationFamily | None:
    """Greatest branching k-switching (or k-ready) family from ``i1`` to ``i2``, or ``None``."""
    bound = _check(bound)
    levels = greatest_lts_family(i1, i2, bound)
    if not levels[0][i1.initial, i2.initial]:
        return None
    return LtsRelationFamily(bound, tuple(StateRelation(m) for m in levels))


def equiv_branching(i1: Lts, i2: Lts, bound) -> bool:
    """``i1 ~_k i2`` (or the ready variant): families exist in both directions."""
    bound = _check(bound)
    return branching_family(i1, i2, bound) is not None and branching_family(i2, i1, bound) is not None


def sim_refines(d1: Dmts, d2: Dmts) -> DoubleRelationFamily | None:
    """Greatest simulation refinement ``(R_1, R_2)`` of ``d1`` by ``d2``, or ``None``.

    ``R_1`` simulates may-transitions of ``d1``; ``R_2`` simulates
    must-transitions of ``d2``.  Returned as a 0-switching double family.
    """
    full = np.ones((d1.n_states, d2.n_states), dtype=bool)
    gfp = greatest_fixpoint(
        {1: full, 2: full},
        lambda r: {1: may_clause(d1, d2, r[1]), 2: must_clause(d1, d2, r[2])},
    )
    if initial_forward(d1, d2, gfp[1]) or initial_backward(d1, d2, gfp[2]):
        return None
    return DoubleRelationFamily(SwitchBound(0), (StateRelation(gfp[1]),), (StateRelation(gfp[2]),))


def greatest_dmts_family(d1: Dmts, d2: Dmts, bound: SwitchBound) -> dict:
    """Greatest branching double family, keyed by ``(side, level)``; initial clause not applied."""
    bound = _check(bound)
    full = np.ones((d1.n_states, d2.n_states), dtype=bool)
    keys = [(side, j) for side in (1, 2) for j in bound.levels()]

    def refine(r):
        out = {}
        for side, j in keys:
            within, switch = dmts_roles(side, j)
            ok = _dmts_clause(within, d1, d2, r[side, j])
            nxt = bound.next_level(j)
            if nxt is not None:
                ok = ok & _dmts_clause(switch, d1, d2, r[side, nxt])
            elif bound.ready:
                ok = ok & _dmts_clause(switch, d1, d2, None)
            out[side, j] = ok
        return out

    return greatest_fixpoint({key: full for key in keys}, refine)


def _as_double_family(bound, gfp) -> DoubleRelationFamily:
    return DoubleRelationFamily(
        bound,
        tuple(StateRelation(gfp[1, j]) for j in bound.levels()),
        tuple(StateRelation(gfp[2, j]) for j in bound.levels()),
    )


def uncovered_initial(d1: Dmts, d2: Dmts, forward0: np.ndarray, backward0: np.ndarray):
    """First initial state breaking initial coverage, as ``(side, state)``, or ``None``."""
    missing = initial_forward(d1, d2, forward0)
    if missing:
        return (1, missing[0])
    missing = initial_backward(d1, d2, backward0)
    if missing:
        return (2, missing[0])
    return None


def branching_refines(d1: Dmts, d2: Dmts, bound) -> DoubleRelationFamily | None:
    """Greatest branching k-switching (k-ready) family from ``d1`` to ``d2``, or ``None``."""
    bound = _check(bound)
    gfp = greatest_dmts_family(d1, d2, bound)
    if uncovered_initial(d1, d2, gfp[1, 0], gfp[2, 0]) is not None:
        return None
    return _as_double_family(bound, gfp)


def branching_counterexample(d1: Dmts, d2: Dmts, bound):
    """Why ``branching_refines`` fails: ``(1, s)`` if initial ``s`` of ``d1`` is uncovered
    by forward level 0, ``(2, s)`` for an initial ``s`` of ``d2`` uncovered by backward
    level 0;
    ``None`` when the refinement holds."""
    bound = _check(bound)
    gfp = greatest_dmts_family(d1, d2, bound)
    return uncovered_initial(d1, d2, gfp[1, 0], gfp[2, 0])
