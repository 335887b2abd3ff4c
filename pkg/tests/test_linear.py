import pytest
from hypothesis import given, settings

from modalspec.branching import equiv_branching
from modalspec.dmts import Dmts, chi_embed
from modalspec.errors import InvalidBound, SizeLimit
from modalspec.linear import (
    MAY,
    MUST,
    TRACE,
    dmts_driver,
    equiv_linear,
    linear_family,
    linear_refines,
    step_table,
    subset_product,
)
from modalspec.lts import Lts
from modalspec.oracle import bounded_traces, linear_dmts_check, linear_trace_check
from modalspec.relations import SwitchBound

from strategies import dmts, finite_bounds, lts

# which trace closure drives each block of the linear DMTS family, transcribed
# block by block: even levels of R_1 and odd levels of R_2 quantify over
# may-traces of the left, the others over must-traces of the right
LINEAR_DRIVERS = {(1, "even"): "may", (1, "odd"): "must", (2, "even"): "must", (2, "odd"): "may"}


@pytest.mark.parametrize("side", [1, 2])
@pytest.mark.parametrize("j", range(5))
def test_driver_table_matches_transcription(side, j):
    assert dmts_driver(side, j) == {MAY: "may", MUST: "must"}[
        LINEAR_DRIVERS[side, "even" if j % 2 == 0 else "odd"]]


def test_subset_product_fixtures(fx):
    sp = subset_product(fx["NDET"], fx["DET"], (0, 0))
    assert len(sp) == 5 and sp.violations == ()
    back = subset_product(fx["DET"], fx["NDET"], (0, 0))
    assert (1, {1, 3}) in back
    dead = subset_product(fx["I"], fx["DET"], (0, 0))
    assert dead.configurations == ((0, frozenset({0})),)


def test_subset_product_reports_violations(fx):
    sp = subset_product(fx["LOOP"], fx["I"], (0, 0))
    assert sp.violations == ((0, frozenset()),)


def test_fixture_families(fx):
    det, ndet = fx["DET"], fx["NDET"]
    assert linear_family(ndet, det, 0) is not None
    assert linear_family(ndet, det, "0r") is None
    assert linear_family(ndet, det, 1) is None
    assert equiv_linear(det, ndet, 0)
    assert not equiv_linear(det, ndet, "0r")
    assert not equiv_linear(det, ndet, 1)
    # the same verdicts from the trace-class oracle
    assert linear_trace_check(ndet, det, 0)
    assert not linear_trace_check(ndet, det, "0r")
    assert not linear_trace_check(ndet, det, 1)


def test_dmts_fixture_refinements(fx):
    cd, cn = chi_embed(fx["DET"]), chi_embed(fx["NDET"])
    assert linear_refines(cn, cd, 0) is not None
    assert linear_refines(cd, cn, 1) is None
    assert linear_dmts_check(cn, cd, 0) and not linear_dmts_check(cd, cn, 1)


@pytest.mark.parametrize("name", ["I", "LOOP", "DET", "NDET", "P", "Q"])
@pytest.mark.parametrize("b", ["0", "0r", "1", "1r", "2", "2r", "inf"])
def test_diagonal(fx, name, b):
    assert linear_family(fx[name], fx[name], b) is not None
    assert linear_refines(chi_embed(fx[name]), chi_embed(fx[name]), b) is not None


def test_ready_infinite_rejected(fx):
    with pytest.raises(InvalidBound):
        linear_family(fx["P"], fx["Q"], (float("inf"), True))


def test_size_cap():
    big = Lts(20, 0, frozenset((s, "a", s + 1) for s in range(19)))
    with pytest.raises(SizeLimit):
        linear_family(big, big, 0)
    assert linear_family(big, big, 0, max_states=20) is not None


def test_literal_reading_differs():
    # the deadlocked initial state 0 of d2 must be paired with 1 at backward level 0;
    # the empty trace then needs (1, 0) one level up.  At backward level 1 the b-step of
    # d1.1 is unmatched, while the literal reading sends the pair to forward level 1,
    # where d2.0 has no must-trace to answer
    d1 = Dmts(2, frozenset({1}), frozenset({(1, "b", 0)}), frozenset({(1, frozenset({("b", 0)}))}))
    d2 = Dmts(2, frozenset({0, 1}), frozenset({(1, "b", 0)}), frozenset({(1, frozenset({("b", 0)}))}))
    assert linear_refines(d1, d2, 1) is None
    assert linear_refines(d1, d2, 1, literal=True) is not None
    assert not linear_dmts_check(d1, d2, 1)
    assert linear_dmts_check(d1, d2, 1, literal=True)


@settings(max_examples=100, deadline=None)
@given(lts())
def test_closures_coincide_on_embeddings(i):
    c = chi_embed(i)
    assert step_table(c, MAY) == step_table(c, MUST) == step_table(i, TRACE)


@settings(max_examples=150, deadline=None)
@given(lts(max_states=4), lts(max_states=4))
def test_no_target_clause_is_trace_inclusion(i1, i2):
    cutoff = min(12, i1.n_states * 2 ** i2.n_states)
    included = bounded_traces(i1, i1.initial, cutoff) <= bounded_traces(i2, i2.initial, cutoff)
    assert (not subset_product(i1, i2, (i1.initial, i2.initial)).violations) == included
    assert (linear_family(i1, i2, 0) is not None) == included


@settings(max_examples=150, deadline=None)
@given(lts(max_states=4), lts(max_states=4), finite_bounds)
def test_engine_matches_trace_oracle(i1, i2, b):
    assert (linear_family(i1, i2, b) is not None) == linear_trace_check(i1, i2, b)


@settings(max_examples=150, deadline=None)
@given(dmts(), dmts(), finite_bounds)
def test_dmts_engine_matches_trace_oracle(d1, d2, b):
    assert (linear_refines(d1, d2, b) is not None) == linear_dmts_check(d1, d2, b)
    assert (linear_refines(d1, d2, b, literal=True) is not None) == linear_dmts_check(d1, d2, b, literal=True)


@settings(max_examples=150, deadline=None)
@given(lts(), lts(), finite_bounds)
def test_branching_implies_linear(i1, i2, b):
    if equiv_branching(i1, i2, b):
        assert equiv_linear(i1, i2, b)


@settings(max_examples=150, deadline=None)
@given(lts(), lts())
def test_monotone_in_bound(i1, i2):
    v = {b: linear_family(i1, i2, b) is not None for b in ["0", "0r", "1", "1r", "2", "2r"]}
    assert v["1"] <= v["0"] and v["2"] <= v["1"]
    assert v["1r"] <= v["0r"] and v["2r"] <= v["1r"]
    for k in "012":
        assert v[k + "r"] <= v[k]


@settings(max_examples=150, deadline=None)
@given(lts(), lts(), finite_bounds)
def test_chi_images_reduce_to_equivalence(i1, i2, b):
    assert (linear_refines(chi_embed(i1), chi_embed(i2), b) is not None) == equiv_linear(i1, i2, b)
