import itertools

import pytest
from hypothesis import given, settings

from modalspec.branching import branching_refines, equiv_branching
from modalspec.dmts import Dmts, chi_embed
from modalspec.errors import IllegalStrategy, InvalidBound
from modalspec.games import (
    I_BRANCH,
    PLAYER_I,
    PLAYER_II,
    Strategy,
    attractor_i,
    build_sim_game,
    build_spec_game,
    distinguishing_play,
    format_play,
    format_strategy,
    parse_strategy,
    player_ii_region,
    restrict,
    solve_game,
    winner,
)
from modalspec.relations import SwitchBound

from strategies import bounds, dmts, lts


def test_empty_systems_give_player_ii_the_win(fx):
    g = build_sim_game(fx["I"], fx["I"], 0)
    assert g.initial_moves() == ()
    w, strat = solve_game(g)
    assert w == PLAYER_II and strat.choices == {}
    assert winner(build_spec_game(chi_embed(fx["I"]), chi_embed(fx["I"]), 0)) == PLAYER_II


def test_ready_infinite_rejected(fx):
    with pytest.raises(InvalidBound):
        build_sim_game(fx["P"], fx["Q"], SwitchBound(float("inf"), True))


# reachable position counts, produced once by the implementation and frozen
SIM_GAME_SIZES = {
    ("P", "Q"): {"0": 13, "inf": 13, "0r": 18, "1": 18, "2": 18},
    ("DET", "NDET"): {"0": 18, "inf": 18, "0r": 28, "1": 28, "2": 28},
    ("I", "I"): {"0": 1, "1": 1},
}


@pytest.mark.parametrize("pair", list(SIM_GAME_SIZES))
def test_sim_game_sizes(fx, pair):
    for b, n in SIM_GAME_SIZES[pair].items():
        assert len(build_sim_game(fx[pair[0]], fx[pair[1]], b)) == n


def test_fixture_winners(fx):
    assert winner(build_sim_game(fx["DET"], fx["NDET"], 0)) == PLAYER_I
    assert winner(build_sim_game(fx["P"], fx["Q"], 0)) == PLAYER_II
    assert winner(build_sim_game(fx["P"], fx["Q"], 1)) == PLAYER_I


def test_switch_counter_monotone(fx):
    for b in ["0", "0r", "1", "2r", "inf"]:
        g = build_sim_game(fx["DET"], fx["NDET"], b)
        bound = SwitchBound.parse(b)
        for p, succ in enumerate(g.moves):
            for q in succ:
                a, c = g.positions[p], g.positions[q]
                if bound.finite:
                    assert c.sco in (a.sco, a.sco + 1)
                    assert c.sco <= bound.k + 1


def test_winning_strategy_play_ends_in_dead_position(fx):
    g = build_sim_game(fx["DET"], fx["NDET"], 0)
    w, strat = solve_game(g)
    for opponent in _all_strategies(g, PLAYER_II):
        play = distinguishing_play(g, strat, opponent)
        assert play.winner == PLAYER_I and play.cycle_start is None
        last = play.positions[-1]
        assert g.owner(last) == PLAYER_II


def test_empty_strategies_stop_at_root(fx):
    g = build_sim_game(fx["P"], fx["Q"], 0)
    play = distinguishing_play(g, None, None)
    assert play.positions == (g.root,) and play.winner == PLAYER_II


def test_self_loop_play_is_cycle_marked(fx):
    g = build_sim_game(fx["LOOP"], fx["LOOP"], 0)
    first = Strategy(PLAYER_I, {p: ms[0] for p, ms in enumerate(g.moves) if ms and g.owner(p) == PLAYER_I})
    answer = Strategy(PLAYER_II, {p: ms[0] for p, ms in enumerate(g.moves) if ms and g.owner(p) == PLAYER_II})
    play = distinguishing_play(g, first, answer)
    assert play.cycle_start is not None and play.winner == PLAYER_II
    assert "cycle start" in format_play(g, play)


def test_illegal_strategy_rejected(fx):
    g = build_sim_game(fx["P"], fx["Q"], 0)
    with pytest.raises(IllegalStrategy):
        distinguishing_play(g, Strategy(PLAYER_I, {g.root: g.root}), None)


def test_strategy_text_round_trip(fx):
    g = build_sim_game(fx["DET"], fx["NDET"], 0)
    _, strat = solve_game(g)
    assert parse_strategy(format_strategy(g, strat)) == strat


def test_empty_must_branch_phase():
    # player I plays the empty must of the right; II answers with the empty must
    # of the left, after which player I has no branch to pick
    d = Dmts(1, frozenset({0}), frozenset(), frozenset({(0, frozenset())}))
    g = build_spec_game(d, d, 0)
    assert winner(g) == PLAYER_II
    stuck = [p for p, pos in enumerate(g.positions) if pos.kind == I_BRANCH]
    assert stuck and all(not g.moves[p] for p in stuck)


def test_chi_branch_phases_forced(fx):
    g = build_spec_game(chi_embed(fx["DET"]), chi_embed(fx["NDET"]), 1)
    for p, pos in enumerate(g.positions):
        if pos.kind == I_BRANCH:
            assert len(g.moves[p]) == 1


def _all_strategies(g, player, cap=4096):
    """Every memoryless strategy of ``player`` (undefined counts as a choice for player I)."""
    owned = [p for p in range(len(g)) if g.owner(p) == player and g.moves[p]]
    options = [list(g.moves[p]) + ([None] if player == PLAYER_I else []) for p in owned]
    total = 1
    for o in options:
        total *= len(o)
    if total > cap:
        return None
    out = []
    for combo in itertools.product(*options):
        out.append(Strategy(player, {p: c for p, c in zip(owned, combo) if c is not None}))
    return out


def _check_strategy(g):
    w, strat = solve_game(g)
    # symbolic: in the arena restricted to the strategy the opponent cannot win
    r = restrict(g, strat)
    if w == PLAYER_I:
        assert g.root not in player_ii_region(r)
    else:
        assert g.root not in attractor_i(r)
    # explicit: replay against every memoryless opposing strategy when few exist
    loser = PLAYER_II if w == PLAYER_I else PLAYER_I
    opponents = _all_strategies(g, loser)
    if opponents is not None:
        for o in opponents:
            play = distinguishing_play(g, *((strat, o) if w == PLAYER_I else (o, strat)))
            assert play.winner == w


@settings(max_examples=120, deadline=None)
@given(lts(max_states=3), lts(max_states=3), bounds)
def test_sim_game_adequacy_and_strategy_soundness(i1, i2, b):
    g = build_sim_game(i1, i2, b)
    assert (winner(g) == PLAYER_II) == equiv_branching(i1, i2, b)
    # determinacy: exactly one of the two independent region computations holds the root
    assert (g.root in attractor_i(g)) != (g.root in player_ii_region(g))
    if len(g) <= 200:
        _check_strategy(g)


@settings(max_examples=120, deadline=None)
@given(dmts(), dmts(), bounds)
def test_spec_game_adequacy(d1, d2, b):
    g = build_spec_game(d1, d2, b)
    assert (winner(g) == PLAYER_II) == (branching_refines(d1, d2, b) is not None)
    assert (g.root in attractor_i(g)) != (g.root in player_ii_region(g))
    if len(g) <= 200:
        _check_strategy(g)


@settings(max_examples=120, deadline=None)
@given(lts(), lts(), bounds)
def test_spec_game_on_embeddings_matches_sim_game(i1, i2, b):
    assert winner(build_spec_game(chi_embed(i1), chi_embed(i2), b)) == winner(build_sim_game(i1, i2, b))
