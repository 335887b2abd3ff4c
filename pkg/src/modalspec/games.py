"""Generalized simulation games on LTS and specification games on DMTS.

Both games are played on finite arenas of memoryless positions.  A position
records the current pair of states, the side player I played on last, and
the switch counter ``sco`` (how often the side changed).  Player I wins by
reaching a player-II position without moves; every other play, including
infinite ones, is won by player II.

Switch bounds restrict player I: under a k-switching bound a move whose
resulting counter exceeds ``k`` is not available; under a k-ready bound player
I may move only from positions whose counter is at most ``k`` (so the last
move may switch once more).  For ``k = inf`` the counter is not tracked.

The specification game opens with an explicit selection of initial states:
player I picks an initial state on one side and a side to play on, player II
picks an initial state of the other system.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import NamedTuple

from .dmts import Dmts
from .errors import IllegalStrategy
from .lts import Lts
from .relations import SwitchBound

PLAYER_I = "I"
PLAYER_II = "II"

I_CHOOSE = "I-choose"
II_MATCH = "II-match"
I_BRANCH = "I-branch"
II_BRANCH = "II-branch"

OWNER = {I_CHOOSE: PLAYER_I, I_BRANCH: PLAYER_I, II_MATCH: PLAYER_II, II_BRANCH: PLAYER_II}

LEFT, RIGHT = 0, 1


class GamePosition(NamedTuple):
    kind: str
    left: int | None
    right: int | None
    side: int | None
    sco: int
    pending: tuple | None = None

    @property
    def owner(self) -> str:
        return OWNER[self.kind]


@dataclass
class GameGraph:
    """A finite two-player arena; position ``0`` is the initial configuration."""

    positions: list[GamePosition]
    moves: list[tuple[int, ...]]
    bound: SwitchBound
    kind: str = "simulation"
    index: dict = field(default_factory=dict, repr=False)

    @property
    def root(self) -> int:
        return 0

    def owner(self, p: int) -> str:
        return self.positions[p].owner

    def initial_moves(self) -> tuple[int, ...]:
        return self.moves[0]

    def __len__(self) -> int:
        return len(self.positions)

    def describe(self, p: int) -> str:
        return describe_position(self.positions[p], self.kind)


def _explore(root: GamePosition, successors, bound, kind) -> GameGraph:
    positions = [root]
    index = {root: 0}
    moves = []
    queue = deque([root])
    while queue:
        pos = queue.popleft()
        out = []
        for nxt in successors(pos):
            idx = index.get(nxt)
            if idx is None:
                idx = len(positions)
                index[nxt] = idx
                positions.append(nxt)
                queue.append(nxt)
            if idx not in out:
                out.append(idx)
        moves.append(tuple(out))
    return GameGraph(positions, moves, bound, kind, index)


def _counter(bound: SwitchBound, side, new_side, sco):
    """Counter after a player-I move, or ``None`` when the bound forbids it."""
    if not bound.finite:
        return 0
    new = sco if side is None or side == new_side else sco + 1
    if bound.ready:
        return new if sco <= bound.k else None
    return new if new <= bound.k else None


def _bound(bound) -> SwitchBound:
    return SwitchBound.coerce(bound)


def build_sim_game(i1: Lts, i2: Lts, bound) -> GameGraph:
    """Arena of the generalized simulation game on ``i1``, ``i2`` under ``bound``."""
    bound = _bound(bound)
    systems = (i1, i2)

    def successors(pos: GamePosition):
        l, r = pos.left, pos.right
        if pos.kind == I_CHOOSE:
            for new_side in (LEFT, RIGHT):
                sco = _counter(bound, pos.side, new_side, pos.sco)
                if sco is None:
                    continue
                state = l if new_side == LEFT else r
                for a, t in systems[new_side].successors[state]:
                    yield GamePosition(II_MATCH, l, r, new_side, sco, (a, t))
        else:
            a, t = pos.pending
            other = RIGHT if pos.side == LEFT else LEFT
            state = r if pos.side == LEFT else l
            for b, u in systems[other].successors[state]:
                if b == a:
                    pair = (t, u) if pos.side == LEFT else (u, t)
                    yield GamePosition(I_CHOOSE, *pair, pos.side, pos.sco)

    root = GamePosition(I_CHOOSE, i1.initial, i2.initial, None, 0)
    return _explore(root, successors, bound, "simulation")


MAY_SIDE, MUST_SIDE = LEFT, RIGHT


def build_spec_game(d1: Dmts, d2: Dmts, bound) -> GameGraph:
    """Arena of the specification game on ``d1``, ``d2`` under ``bound``.

    Sides: ``0`` is player I playing may-transitions of ``d1``, ``1`` is
    player I playing must-transitions of ``d2``.
    """
    bound = _bound(bound)

    def successors(pos: GamePosition):
        l, r, side = pos.left, pos.right, pos.side
        if pos.kind == I_CHOOSE:
            if side is None:
                for s in sorted(d1.initial):
                    yield GamePosition(II_MATCH, s, None, MAY_SIDE, 0, ("init",))
                for s in sorted(d2.initial):
                    yield GamePosition(II_MATCH, None, s, MUST_SIDE, 0, ("init",))
                return
            sco = _counter(bound, side, MAY_SIDE, pos.sco)
            if sco is not None:
                for a, t in d1.may_successors[l]:
                    yield GamePosition(II_MATCH, l, r, MAY_SIDE, sco, ("may", a, t))
            sco = _counter(bound, side, MUST_SIDE, pos.sco)
            if sco is not None:
                for n2 in d2.musts[r]:
                    yield GamePosition(II_MATCH, l, r, MUST_SIDE, sco, ("must", n2))
        elif pos.kind == II_MATCH:
            tag = pos.pending[0]
            if tag == "init":
                if side == MAY_SIDE:
                    for s2 in sorted(d2.initial):
                        yield GamePosition(I_CHOOSE, l, s2, side, 0)
                else:
                    for s1 in sorted(d1.initial):
                        yield GamePosition(I_CHOOSE, s1, r, side, 0)
            elif tag == "may":
                _, a, t = pos.pending
                for b, u in d2.may_successors[r]:
                    if b == a:
                        yield GamePosition(I_CHOOSE, t, u, side, pos.sco)
            else:
                n2 = pos.pending[1]
                for n1 in d1.musts[l]:
                    yield GamePosition(I_BRANCH, l, r, side, pos.sco, (n2, n1))
        elif pos.kind == I_BRANCH:
            n2, n1 = pos.pending
            for a, t in n1:
                yield GamePosition(II_BRANCH, l, r, side, pos.sco, (n2, a, t))
        else:
            n2, a, t = pos.pending
            for b, u in n2:
                if b == a:
                    yield GamePosition(I_CHOOSE, t, u, side, pos.sco)

    root = GamePosition(I_CHOOSE, None, None, None, 0)
    return _explore(root, successors, bound, "specification")


@dataclass(frozen=True)
class Strategy:
    """Memoryless strategy of ``player``: position index -> chosen successor index.

    Undefined positions mean the player stops there (for player I) or has no
    answer (for player II).
    """

    player: str
    choices: dict

    def __contains__(self, p) -> bool:
        return p in self.choices

    def get(self, p):
        return self.choices.get(p)


def attractor_i(g: GameGraph) -> dict[int, int]:
    """Player-I attractor of the dead player-II positions, mapped to insertion order."""
    preds = [[] for _ in g.positions]
    remaining = [len(m) for m in g.moves]
    for p, succ in enumerate(g.moves):
        for q in succ:
            preds[q].append(p)
    order = {}
    queue = deque()
    for p, succ in enumerate(g.moves):
        if not succ and g.owner(p) == PLAYER_II:
            order[p] = len(order)
            queue.append(p)
    while queue:
        p = queue.popleft()
        for q in preds[p]:
            if q in order:
                continue
            if g.owner(q) == PLAYER_I:
                order[q] = len(order)
                queue.append(q)
            else:
                remaining[q] -= 1
                if remaining[q] == 0:
                    order[q] = len(order)
                    queue.append(q)
    return order


def player_ii_region(g: GameGraph) -> set[int]:
    """Positions from which player II can keep the play safe, as a greatest fixpoint.

    Independent of :func:`attractor_i`; used to cross-check determinacy.
    """
    region = set(range(len(g)))
    changed = True
    while changed:
        changed = False
        for p in sorted(region):
            succ = g.moves[p]
            if g.owner(p) == PLAYER_I:
                keep = all(q in region for q in succ)
            else:
                keep = any(q in region for q in succ)
            if not keep:
                region.discard(p)
                changed = True
    return region


def solve_game(g: GameGraph) -> tuple[str, Strategy]:
    """Winner from the initial position and a memoryless winning strategy for it.

    Ties are broken towards the lowest-numbered admissible successor.
    """
    attr = attractor_i(g)
    if g.root in attr:
        choices = {}
        for p, rank in attr.items():
            if g.owner(p) == PLAYER_I:
                choices[p] = min(q for q in g.moves[p] if q in attr and attr[q] < rank)
        return PLAYER_I, Strategy(PLAYER_I, choices)
    choices = {}
    for p in range(len(g)):
        if p in attr or g.owner(p) != PLAYER_II or not g.moves[p]:
            continue
        choices[p] = min(q for q in g.moves[p] if q not in attr)
    return PLAYER_II, Strategy(PLAYER_II, choices)


def winner(g: GameGraph) -> str:
    return PLAYER_I if g.root in attractor_i(g) else PLAYER_II


@dataclass(frozen=True)
class Play:
    """A play induced by two strategies.

    ``positions`` ends at the last position reached; when the play runs into
    a cycle, ``cycle_start`` is the index in ``positions`` where the repeated
    position first occurred.
    """

    positions: tuple[int, ...]
    cycle_start: int | None
    winner: str


def distinguishing_play(g: GameGraph, strategy_i: Strategy | None, strategy_ii: Strategy | None
                        ) -> Play:
    """Follow both strategies from the initial position until a stop or a repetition."""
    strategies = {PLAYER_I: strategy_i, PLAYER_II: strategy_ii}
    seen = {}
    trace = []
    p = g.root
    while True:
        if p in seen:
            return Play(tuple(trace), seen[p], PLAYER_II)
        seen[p] = len(trace)
        trace.append(p)
        owner = g.owner(p)
        strat = strategies[owner]
        choice = None if strat is None else strat.get(p)
        if choice is None:
            return Play(tuple(trace), None, PLAYER_II if owner == PLAYER_I else PLAYER_I)
        if choice not in g.moves[p]:
            raise IllegalStrategy(f"position {p} has no move to {choice}")
        p = choice


def restrict(g: GameGraph, strategy: Strategy) -> GameGraph:
    """The arena in which ``strategy``'s owner may only play its chosen moves."""
    moves = []
    for p, succ in enumerate(g.moves):
        if g.owner(p) == strategy.player:
            c = strategy.get(p)
            moves.append((c,) if c is not None else ())
        else:
            moves.append(succ)
    return GameGraph(g.positions, moves, g.bound, g.kind, g.index)


def describe_position(pos: GamePosition, kind: str = "simulation") -> str:
    if kind == "simulation":
        sides = {None: "-", LEFT: "L", RIGHT: "R"}
    else:
        sides = {None: "-", MAY_SIDE: "may", MUST_SIDE: "must"}
    l = "_" if pos.left is None else pos.left
    r = "_" if pos.right is None else pos.right
    text = f"{pos.kind}({l},{r}) side={sides[pos.side]} sco={pos.sco}"
    if pos.pending is not None:
        text += f" pending={_fmt_pending(pos.pending)}"
    return text


def _fmt_pending(pending) -> str:
    def branches(n):
        return "{" + ",".join(f"{a}:{t}" for a, t in n) + "}"

    if len(pending) == 2 and isinstance(pending[0], str) and isinstance(pending[1], int):
        return f"{pending[0]}:{pending[1]}"
    tag = pending[0]
    if tag == "init":
        return "init"
    if tag == "may":
        return f"may {pending[1]}:{pending[2]}"
    if tag == "must":
        return f"must {branches(pending[1])}"
    if len(pending) == 2:
        return f"{branches(pending[0])} vs {branches(pending[1])}"
    return f"{branches(pending[0])} branch {pending[1]}:{pending[2]}"


def format_strategy(g: GameGraph, strategy: Strategy) -> str:
    """One line per move: ``<position>\\t<description>\\t-> <successor>\\t<description>``."""
    lines = [f"# strategy of player {strategy.player}"]
    for p in sorted(strategy.choices):
        q = strategy.choices[p]
        lines.append(f"{p}\t{g.describe(p)}\t-> {q}\t{g.describe(q)}")
    return "\n".join(lines) + "\n"


def parse_strategy(text: str) -> Strategy:
    """Read back the output of :func:`format_strategy` (descriptions are ignored)."""
    player = None
    choices = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            player = line.split()[-1]
            continue
        fields = line.split("\t")
        choices[int(fields[0])] = int(fields[2].removeprefix("-> "))
    if player not in (PLAYER_I, PLAYER_II):
        raise ValueError("missing strategy header")
    return Strategy(player, choices)


def format_play(g: GameGraph, play: Play) -> str:
    lines = []
    for n, p in enumerate(play.positions):
        mark = " <- cycle start" if play.cycle_start == n else ""
        lines.append(f"{p}\t{g.describe(p)}{mark}")
    if play.cycle_start is not None:
        lines.append(f"... repeats from {play.positions[play.cycle_start]}")
    lines.append(f"winner: {play.winner}")
    return "\n".join(lines) + "\n"
