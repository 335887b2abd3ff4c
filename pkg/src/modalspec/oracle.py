"""Slow reference checks, independent of the fixpoint and game engines.

Nothing here reuses the clause evaluators of :mod:`modalspec.branching`,
:mod:`modalspec.linear` or :mod:`modalspec.games`; only the data types are
shared.

Branching families are decided top-down: a goal ``(level, s1, s2)`` is
assumed to hold while its subgoals are explored, and a revisit of an assumed
goal on the current path succeeds.  Failures are cached globally (a failure
under extra assumptions is a failure outright); successes are committed once
the assumptions they leaned on are discharged.

Linear families are decided over explicit traces.  Traces are enumerated
breadth first as words; a word is kept only if the pair ``(P, Q)`` of its end
sets on the two sides is new, since the future of a word depends on nothing
else.  The length of enumerated words is additionally capped by
``|S1| * 2**|S2|``: along a shortest violating trace, the configurations
``(t1, Q2)`` of one left run are pairwise distinct (otherwise the loop between
two equal ones could be cut out), and there are at most that many of them.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .dmts import Dmts
from .errors import SizeLimit
from .lts import Lts
from .relations import SwitchBound

MAX_PAIRS = 36
MAX_K = 3
MAX_TRACES = 10**6
MAX_TRACE_LEN = 12
MAX_CUTOFF = 4096


def _bound(bound) -> SwitchBound:
    return SwitchBound.coerce(bound)


def _check_size(n1, n2, bound):
    if n1 * n2 > MAX_PAIRS:
        raise SizeLimit(f"oracle handles at most {MAX_PAIRS} state pairs, got {n1 * n2}")
    if bound.finite and bound.k > MAX_K:
        raise SizeLimit(f"oracle handles k <= {MAX_K}, got {bound.k}")


def _succ(n, triples):
    out = {s: [] for s in range(n)}
    for s, a, t in sorted(triples):
        out[s].append((a, t))
    return out


class _Coinduction:
    """Path-based coinductive evaluation of goals given by a clause function.

    A success that leaned on an assumption further up the path is kept as
    tentative, together with the depth of the deepest-reaching assumption it
    needs, and may be reused while that goal is still on the path.  When a
    goal finishes, the tentative successes found below it are dropped if it
    failed (they may have relied on it), committed if it succeeded on its own
    (together they form a set closed under the clauses), and otherwise
    re-attached to whatever the goal itself leaned on.
    """

    def __init__(self, clauses):
        self.clauses = clauses
        self.failed = set()
        self.proved = set()
        self.order = []    # tentative successes, in completion order
        self.low = {}      # tentative success -> depth of the assumption it needs

    def holds(self, goal) -> bool:
        return self._eval(goal, {})[0]

    def _eval(self, goal, path):
        if goal in self.failed:
            return False, math.inf
        if goal in self.proved:
            return True, math.inf
        if goal in path:
            return True, path[goal]
        if goal in self.low:
            return True, self.low[goal]
        depth = len(path)
        path[goal] = depth
        mark = len(self.order)
        low = math.inf

        def sub(g):
            nonlocal low
            ok, lw = self._eval(g, path)
            if ok:
                low = min(low, lw)
            return ok

        ok = self.clauses(goal, sub)
        del path[goal]
        below = self.order[mark:]
        if not ok:
            self.failed.add(goal)
            del self.order[mark:]
            for g in below:
                del self.low[g]
        elif low >= depth:
            self.proved.update(below)
            self.proved.add(goal)
            del self.order[mark:]
            for g in below:
                del self.low[g]
        else:
            for g in below:
                self.low[g] = low
            self.order.append(goal)
            self.low[goal] = low
        return ok, low


def recursive_family_check(i1: Lts, i2: Lts, bound) -> bool:
    """Does a branching k-switching (k-ready) family from ``i1`` to ``i2`` exist?"""
    bound = _bound(bound)
    _check_size(i1.n_states, i2.n_states, bound)
    succ1, succ2 = _succ(i1.n_states, i1.transitions), _succ(i2.n_states, i2.transitions)
    top = bound.k if bound.finite else None

    def nxt(j):
        if top is None:
            return (j + 1) % 2
        return j + 1 if j < top else None

    def clauses(goal, sub):
        j, s1, s2 = goal
        forward = j % 2 == 0
        # within-level clause
        if forward:
            for a, t1 in succ1[s1]:
                if not any(sub((j, t1, t2)) for b, t2 in succ2[s2] if b == a):
                    return False
        else:
            for a, t2 in succ2[s2]:
                if not any(sub((j, t1, t2)) for b, t1 in succ1[s1] if b == a):
                    return False
        n = nxt(j)
        if n is not None:
            if forward:
                for a, t2 in succ2[s2]:
                    if not any(sub((n, t1, t2)) for b, t1 in succ1[s1] if b == a):
                        return False
            else:
                for a, t1 in succ1[s1]:
                    if not any(sub((n, t1, t2)) for b, t2 in succ2[s2] if b == a):
                        return False
        elif bound.ready:
            acts1 = {a for a, _ in succ1[s1]}
            acts2 = {a for a, _ in succ2[s2]}
            if forward and not acts2 <= acts1:
                return False
            if not forward and not acts1 <= acts2:
                return False
        return True

    return _Coinduction(clauses).holds((0, i1.initial, i2.initial))


def recursive_dmts_check(d1: Dmts, d2: Dmts, bound) -> bool:
    """Does a branching k-switching (k-ready) double family from ``d1`` to ``d2`` exist?"""
    bound = _bound(bound)
    _check_size(d1.n_states, d2.n_states, bound)
    may1, may2 = _succ(d1.n_states, d1.may), _succ(d2.n_states, d2.may)
    must1 = {s: [] for s in range(d1.n_states)}
    must2 = {s: [] for s in range(d2.n_states)}
    for s, n in sorted(d1.must, key=lambda x: (x[0], sorted(x[1]))):
        must1[s].append(sorted(n))
    for s, n in sorted(d2.must, key=lambda x: (x[0], sorted(x[1]))):
        must2[s].append(sorted(n))
    top = bound.k if bound.finite else None

    def nxt(j):
        if top is None:
            return (j + 1) % 2
        return j + 1 if j < top else None

    def may_ok(s1, s2, tgt, sub):
        for a, t1 in may1[s1]:
            if not any((tgt is None or sub(tgt + (t1, t2))) for b, t2 in may2[s2] if b == a):
                return False
        return True

    def must_ok(s1, s2, tgt, sub):
        for n2 in must2[s2]:
            if not any(
                all(any((tgt is None or sub(tgt + (t1, t2))) for b, t2 in n2 if b == a)
                    for a, t1 in n1)
                for n1 in must1[s1]
            ):
                return False
        return True

    def clauses(goal, sub):
        side, j, s1, s2 = goal
        may_first = (side == 1) == (j % 2 == 0)
        within, switch = (may_ok, must_ok) if may_first else (must_ok, may_ok)
        if not within(s1, s2, (side, j), sub):
            return False
        n = nxt(j)
        if n is not None:
            return switch(s1, s2, (side, n), sub)
        if bound.ready:
            return switch(s1, s2, None, sub)
        return True

    co = _Coinduction(clauses)
    for s1 in sorted(d1.initial):
        if not any(co.holds((1, 0, s1, s2)) for s2 in sorted(d2.initial)):
            return False
    for s2 in sorted(d2.initial):
        if not any(co.holds((2, 0, s1, s2)) for s1 in sorted(d1.initial)):
            return False
    return True


def bounded_traces(i: Lts, s: int, maxlen: int) -> frozenset:
    """All traces of length at most ``maxlen`` from ``s``, as tuples of labels."""
    if maxlen > MAX_TRACE_LEN:
        raise SizeLimit(f"maxlen {maxlen} exceeds {MAX_TRACE_LEN}")
    succ = _succ(i.n_states, i.transitions)
    traces = {()}
    frontier = {((), s)}
    for _ in range(maxlen):
        new = set()
        for word, state in frontier:
            for a, t in succ[state]:
                new.add((word + (a,), t))
        frontier = new
        traces.update(w for w, _ in frontier)
        if len(traces) > MAX_TRACES:
            raise SizeLimit(f"more than {MAX_TRACES} traces")
        if not frontier:
            break
    return frozenset(traces)


@dataclass
class TraceClass:
    """A representative word with the end sets it reaches on both sides."""

    word: tuple
    left: frozenset
    right: frozenset


def trace_classes(n_left, succ_left, n_right, succ_right, s_left, s_right, cutoff=None):
    """Distinct ``(end set left, end set right)`` pairs of words from ``(s_left, s_right)``.

    Only words performable on the left are explored.  ``succ_*`` map a state to
    its ``(label, target)`` steps.
    """
    if cutoff is None:
        cutoff = n_left * 2**n_right
    start = TraceClass((), frozenset({s_left}), frozenset({s_right}))
    seen = {(start.left, start.right)}
    out = [start]
    frontier = [start]
    length = 0
    while frontier and length < cutoff:
        length += 1
        new = []
        for cls in frontier:
            labels = sorted({a for s in cls.left for a, _ in succ_left[s]})
            for a in labels:
                left = frozenset(t for s in cls.left for b, t in succ_left[s] if b == a)
                right = frozenset(t for s in cls.right for b, t in succ_right[s] if b == a)
                if (left, right) in seen:
                    continue
                seen.add((left, right))
                nc = TraceClass(cls.word + (a,), left, right)
                out.append(nc)
                new.append(nc)
        frontier = new
    return out


def trace_inclusion_bruteforce(i1: Lts, i2: Lts) -> bool:
    """Is every trace of ``i1`` a trace of ``i2``?"""
    cutoff = i1.n_states * 2**i2.n_states
    if cutoff > MAX_CUTOFF:
        raise SizeLimit(f"cutoff {cutoff} exceeds {MAX_CUTOFF}")
    succ1, succ2 = _succ(i1.n_states, i1.transitions), _succ(i2.n_states, i2.transitions)
    classes = trace_classes(i1.n_states, succ1, i2.n_states, succ2, i1.initial, i2.initial, cutoff)
    return all(c.right for c in classes)


def shortest_missing_trace(i1: Lts, i2: Lts):
    """A shortest trace of ``i1`` that ``i2`` lacks, or ``None``."""
    succ1, succ2 = _succ(i1.n_states, i1.transitions), _succ(i2.n_states, i2.transitions)
    for c in trace_classes(i1.n_states, succ1, i2.n_states, succ2, i1.initial, i2.initial):
        if not c.right:
            return c.word
    return None


def _linear_trace_check(n1, n2, steps, ready_pred, bound, initial_goals, literal=False):
    """Shared recursion for linear families.

    ``steps[(side, parity)]`` gives ``(driver_is_left, succ_left, succ_right)``
    for the closure used at that family side and level parity.
    ``ready_pred(driver_is_left, t1, t2)`` is the endpoint test of the ready
    clause.
    """
    top = bound.k if bound.finite else None

    def nxt(j):
        if top is None:
            return (j + 1) % 2
        return j + 1 if j < top else None

    cache = {}

    def classes(side, parity, s1, s2):
        key = (side, parity, s1, s2)
        if key not in cache:
            left_drives, succ1, succ2 = steps[side, parity]
            if left_drives:
                found = trace_classes(n1, succ1, n2, succ2, s1, s2)
                cache[key] = [(c.left, c.right) for c in found]
            else:
                found = trace_classes(n2, succ2, n1, succ1, s2, s1)
                cache[key] = [(c.right, c.left) for c in found]
        return cache[key]

    def clauses(goal, sub):
        side, j, s1, s2 = goal
        left_drives = steps[side, j % 2][0]
        n = nxt(j)
        target_side = 1 if (literal and side == 2 and j % 2 == 0) else side
        for ends1, ends2 in classes(side, j % 2, s1, s2):
            drivers, followers = (ends1, ends2) if left_drives else (ends2, ends1)
            if not followers:
                return False
            for d in sorted(drivers):
                pairs = [((d, f) if left_drives else (f, d)) for f in sorted(followers)]
                if n is not None:
                    if not any(sub((target_side, n) + p) for p in pairs):
                        return False
                elif bound.ready:
                    if not any(ready_pred(left_drives, *p) for p in pairs):
                        return False
        return True

    co = _Coinduction(clauses)
    return initial_goals(co)


def linear_trace_check(i1: Lts, i2: Lts, bound) -> bool:
    """Does a linear k-switching (k-ready) family from ``i1`` to ``i2`` exist?"""
    bound = _bound(bound)
    _check_size(i1.n_states, i2.n_states, bound)
    succ1, succ2 = _succ(i1.n_states, i1.transitions), _succ(i2.n_states, i2.transitions)
    acts1 = {s: {a for a, _ in succ1[s]} for s in succ1}
    acts2 = {s: {a for a, _ in succ2[s]} for s in succ2}
    steps = {(1, 0): (True, succ1, succ2), (1, 1): (False, succ1, succ2)}

    def ready_pred(left_drives, t1, t2):
        # the follower offers nothing the driver refuses
        return acts2[t2] <= acts1[t1] if left_drives else acts1[t1] <= acts2[t2]

    return _linear_trace_check(
        i1.n_states, i2.n_states, steps, ready_pred, bound,
        lambda co: co.holds((1, 0, i1.initial, i2.initial)),
    )


def linear_dmts_check(d1: Dmts, d2: Dmts, bound, literal: bool = False) -> bool:
    """Does a linear k-switching (k-ready) double family from ``d1`` to ``d2`` exist?"""
    bound = _bound(bound)
    _check_size(d1.n_states, d2.n_states, bound)
    may1, may2 = _succ(d1.n_states, d1.may), _succ(d2.n_states, d2.may)
    mustb1 = _succ(d1.n_states, {(s, a, t) for s, n in d1.must for a, t in n})
    mustb2 = _succ(d2.n_states, {(s, a, t) for s, n in d2.must for a, t in n})
    musts1 = {s: [n for x, n in d1.must if x == s] for s in range(d1.n_states)}
    musts2 = {s: [n for x, n in d2.must if x == s] for s in range(d2.n_states)}
    may_steps = (True, may1, may2)
    must_steps = (False, mustb1, mustb2)
    steps = {(1, 0): may_steps, (1, 1): must_steps, (2, 0): must_steps, (2, 1): may_steps}

    def ready_pred(left_drives, t1, t2):
        if left_drives:
            # every must of t2 is answered by a must of t1 with label-matched branches
            return all(
                any(all(any(b == a for b, _ in n2) for a, _ in n1) for n1 in musts1[t1])
                for n2 in musts2[t2]
            )
        return {a for a, _ in may1[t1]} <= {a for a, _ in may2[t2]}

    def initial_goals(co):
        for s1 in sorted(d1.initial):
            if not any(co.holds((1, 0, s1, s2)) for s2 in sorted(d2.initial)):
                return False
        for s2 in sorted(d2.initial):
            if not any(co.holds((2, 0, s1, s2)) for s1 in sorted(d1.initial)):
                return False
        return True

    return _linear_trace_check(d1.n_states, d2.n_states, steps, ready_pred, bound,
                               initial_goals, literal)


@dataclass
class CrossCheckReport:
    relation: str
    bound: str
    direction: str
    verdicts: dict = field(default_factory=dict)
    experimental: bool = False

    @property
    def unanimous(self) -> bool:
        return len(set(self.verdicts.values())) <= 1

    @property
    def verdict(self):
        values = set(self.verdicts.values())
        return values.pop() if len(values) == 1 else None

    def as_dict(self) -> dict:
        return {
            "relation": self.relation,
            "bound": self.bound,
            "direction": self.direction,
            "verdicts": dict(self.verdicts),
            "unanimous": self.unanimous,
            "verdict": self.verdict,
            "experimental": self.experimental,
        }

    def line(self) -> str:
        v = " ".join(f"{k}={'T' if b else 'F'}" for k, b in self.verdicts.items())
        flag = " experimental" if self.experimental else ""
        return f"{self.relation} {self.direction} k={self.bound}: {v} unanimous={self.unanimous}{flag}"


def default_engines(kind: str, relation: str) -> dict:
    """Engines run by :func:`cross_check` for inputs of ``kind`` ('lts' or 'dmts')."""
    from . import branching, games, linear

    if kind == "lts" and relation == "branching":
        return {
            "relation": branching.equiv_branching,
            "game": lambda a, b, k: games.winner(games.build_sim_game(a, b, k)) == games.PLAYER_II,
            "oracle": lambda a, b, k: recursive_family_check(a, b, k) and recursive_family_check(b, a, k),
        }
    if kind == "lts" and relation == "linear":
        return {
            "relation": linear.equiv_linear,
            "oracle": lambda a, b, k: linear_trace_check(a, b, k) and linear_trace_check(b, a, k),
        }
    if kind == "dmts" and relation == "branching":
        return {
            "relation": lambda a, b, k: branching.branching_refines(a, b, k) is not None,
            "game": lambda a, b, k: games.winner(games.build_spec_game(a, b, k)) == games.PLAYER_II,
            "oracle": recursive_dmts_check,
        }
    if kind == "dmts" and relation == "linear":
        return {
            "relation": lambda a, b, k: linear.linear_refines(a, b, k) is not None,
            "oracle": linear_dmts_check,
        }
    raise ValueError(f"no engines for {kind} {relation}")


def cross_check(x1, x2, bound, relation: str = "branching", engines: dict | None = None
                ) -> CrossCheckReport:
    """Run every engine on one query and report all verdicts.

    LTS pairs are compared for equivalence, DMTS pairs for refinement.
    ``engines`` replaces the default engine table (used to inject mutants).
    """
    bound = _bound(bound)
    kind = "lts" if isinstance(x1, Lts) else "dmts"
    if engines is None:
        engines = default_engines(kind, relation)
    report = CrossCheckReport(
        relation, str(bound), "equiv" if kind == "lts" else "refine",
        experimental=(relation == "linear" and not bound.finite),
    )
    for name, fn in engines.items():
        report.verdicts[name] = bool(fn(x1, x2, bound))
    return report
