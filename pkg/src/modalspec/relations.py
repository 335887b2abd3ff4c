"""State relations, switch bounds and relation families.

A :class:`StateRelation` is a boolean matrix over ``S1 x S2``.  Relation
families are tuples of such matrices indexed by a switch level.  For an
unbounded number of switches (``k = inf``) a family is stored with exactly two
levels, ``0`` (even role) and ``1`` (odd role): the union of all even levels of
an infinite family and the union of all odd levels satisfy the same clauses, so
two relations lose nothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import InvalidBound

INF = math.inf


class StateRelation:
    """An immutable relation ``R <= S1 x S2`` stored as a bit matrix."""

    __slots__ = ("_m",)

    def __init__(self, matrix):
        m = np.array(matrix, dtype=bool, copy=True)
        if m.ndim != 2:
            raise ValueError("a state relation needs a 2-d matrix")
        m.setflags(write=False)
        self._m = m

    @classmethod
    def empty(cls, n1: int, n2: int) -> StateRelation:
        return cls(np.zeros((n1, n2), dtype=bool))

    @classmethod
    def full(cls, n1: int, n2: int) -> StateRelation:
        return cls(np.ones((n1, n2), dtype=bool))

    @classmethod
    def from_pairs(cls, n1: int, n2: int, pairs) -> StateRelation:
        m = np.zeros((n1, n2), dtype=bool)
        for s1, s2 in pairs:
            m[s1, s2] = True
        return cls(m)

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def shape(self) -> tuple[int, int]:
        return self._m.shape

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(a), int(b)) for a, b in zip(*np.nonzero(self._m))]

    def transpose(self) -> StateRelation:
        return StateRelation(self._m.T)

    def __contains__(self, pair) -> bool:
        s1, s2 = pair
        n1, n2 = self._m.shape
        return 0 <= s1 < n1 and 0 <= s2 < n2 and bool(self._m[s1, s2])

    def __len__(self) -> int:
        return int(self._m.sum())

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateRelation):
            return NotImplemented
        return self._m.shape == other._m.shape and bool((self._m == other._m).all())

    def __hash__(self):
        return hash((self._m.shape, self._m.tobytes()))

    def __le__(self, other: StateRelation) -> bool:
        return bool((self._m <= other._m).all())

    def __repr__(self):
        return f"StateRelation({self._m.shape[0]}x{self._m.shape[1]}, {self.pairs()})"


@dataclass(frozen=True)
class SwitchBound:
    """A point of the spectrum: at most ``k`` side switches, optionally ready.

    ``k`` is a non-negative integer or :data:`INF`.
    """

    k: int | float = 0
    ready: bool = False

    def __post_init__(self):
        k = self.k
        if k != INF:
            if isinstance(k, bool) or not float(k).is_integer() or k < 0:
                raise InvalidBound(f"switch bound must be a natural number or inf, got {k!r}")
            object.__setattr__(self, "k", int(k))
        elif self.ready:
            raise InvalidBound("the ready variant is only defined for finite k")

    @classmethod
    def parse(cls, text: str) -> SwitchBound:
        """Parse ``"2"``, ``"inf"``, or a ready bound such as ``"1r"``."""
        t = text.strip().lower()
        ready = t.endswith("r")
        if ready:
            t = t[:-1]
        if t in ("inf", "infinity", "oo"):
            return cls(INF, ready)
        try:
            return cls(int(t), ready)
        except ValueError:
            raise InvalidBound(f"cannot parse switch bound {text!r}") from None

    @classmethod
    def coerce(cls, bound) -> SwitchBound:
        """Accept a bound, a ``(k, ready)`` tuple, an integer or :meth:`parse` text."""
        if isinstance(bound, cls):
            return bound
        if isinstance(bound, str):
            return cls.parse(bound)
        if isinstance(bound, tuple):
            return cls(*bound)
        return cls(bound)

    @property
    def finite(self) -> bool:
        return self.k != INF

    @property
    def n_levels(self) -> int:
        return self.k + 1 if self.finite else 2

    def levels(self) -> range:
        return range(self.n_levels)

    def next_level(self, j: int) -> int | None:
        """Level reached by a switch from level ``j``; ``None`` when ``j == k``."""
        if not self.finite:
            return 1 - j
        return j + 1 if j < self.k else None

    def is_top(self, j: int) -> bool:
        return self.finite and j == self.k

    def __str__(self):
        k = "inf" if not self.finite else str(self.k)
        return k + ("r" if self.ready else "")


@dataclass(frozen=True)
class LtsRelationFamily:
    """Relations ``R^0 .. R^k`` witnessing a family from one LTS to another."""

    bound: SwitchBound
    relations: tuple[StateRelation, ...]

    def __post_init__(self):
        if len(self.relations) != self.bound.n_levels:
            raise ValueError("family length does not match the switch bound")
        shapes = {r.shape for r in self.relations}
        if len(shapes) > 1:
            raise ValueError("all relations of a family share one carrier")

    def __getitem__(self, j: int) -> StateRelation:
        return self.relations[j]

    def size(self) -> int:
        return sum(len(r) for r in self.relations)


@dataclass(frozen=True)
class DoubleRelationFamily:
    """Forward and backward relation chains between two DMTS, one relation per level."""

    bound: SwitchBound
    forward: tuple[StateRelation, ...]
    backward: tuple[StateRelation, ...]

    def __post_init__(self):
        n = self.bound.n_levels
        if len(self.forward) != n or len(self.backward) != n:
            raise ValueError("family length does not match the switch bound")
        shapes = {r.shape for r in self.forward + self.backward}
        if len(shapes) > 1:
            raise ValueError("all relations of a family share one carrier")

    def size(self) -> int:
        return sum(len(r) for r in self.forward + self.backward)


def greatest_fixpoint(start: dict, refine: Callable[[dict], dict]) -> dict:
    """Iterate ``refine`` from ``start`` until nothing changes.

    ``start`` maps keys to boolean matrices.  ``refine`` receives the current
    map and returns, per key, the pairs that still satisfy their clauses; the
    result is intersected with the current value, so every round only deletes
    pairs.  All clauses used in this package are monotone, hence the limit is
    the greatest fixpoint below ``start``.
    """
    current = {key: np.array(m, dtype=bool) for key, m in start.items()}
    while True:
        proposed = refine(current)
        changed = False
        for key, m in current.items():
            new = m & proposed[key]
            if not np.array_equal(new, m):
                changed = True
            current[key] = new
        if not changed:
            return current
