from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modalspec.dmts import modal_refines, satisfies, validate_dmts
from modalspec.generate import (
    GenParams,
    random_dmts,
    random_dmts_pair,
    random_lts,
    random_lts_pair,
    random_refinement_pair,
    sample_implementation,
    unfold,
)
from modalspec.lts import bisimilar

seeds = st.integers(0, 2**64 - 1)


def _reachable(n, roots, triples):
    seen, queue = set(roots), deque(roots)
    while queue:
        s = queue.popleft()
        for x, _, t in triples:
            if x == s and t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


@pytest.mark.parametrize("kwargs", [
    {"min_states": 0}, {"min_states": 4, "max_states": 3}, {"n_labels": 0},
    {"density": 1.5}, {"density": -0.1}, {"branch_size": (2, 1)}, {"n_initial": (0, 0)},
])
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        GenParams(**kwargs)


def test_seed_is_64_bit():
    assert GenParams(seed=2**64 + 5).seed == 5


def test_density_zero_gives_no_transitions():
    p = GenParams(density=0.0, max_states=6)
    assert random_lts(p).transitions == frozenset()
    d = random_dmts(p)
    assert not d.may and all(not n for _, n in d.must)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_deterministic(seed):
    p = GenParams(seed=seed)
    assert random_lts(p) == random_lts(p)
    assert random_dmts(p) == random_dmts(p)
    assert random_lts_pair(p) == random_lts_pair(p)
    assert random_dmts_pair(p) == random_dmts_pair(p)


@settings(max_examples=150, deadline=None)
@given(seeds, st.floats(0, 1))
def test_generated_systems_valid_and_reachable(seed, density):
    p = GenParams(seed=seed, density=density, max_states=6)
    i = random_lts(p)
    assert _reachable(i.n_states, [i.initial], i.transitions) == set(range(i.n_states))
    d = random_dmts(p)
    assert validate_dmts(d) == d
    assert _reachable(d.n_states, sorted(d.initial), d.may) == set(range(d.n_states))
    assert 1 <= len(d.initial) <= 2


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_pairs_stay_within_size(seed):
    p = GenParams(seed=seed, max_states=6)
    i1, i2 = random_lts_pair(p)
    assert i1.n_states <= 6 and i2.n_states <= 6


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_unfolding_is_bisimilar(seed):
    rng = np.random.default_rng(seed)
    i = random_lts(GenParams(seed=seed), rng)
    assert bisimilar(i, unfold(i, rng)) is not None


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_refinement_pairs_refine(seed):
    d1, d2 = random_refinement_pair(GenParams(seed=seed))
    assert modal_refines(d1, d2) is not None


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_sampled_implementations_satisfy(seed):
    rng = np.random.default_rng(seed)
    d = random_dmts(GenParams(seed=seed), rng)
    i = sample_implementation(d, rng)
    if i is not None:
        assert satisfies(i, d)


def test_generators_ignore_string_hash_seed():
    import os
    import subprocess
    import sys

    code = (
        "from modalspec.generate import GenParams, random_dmts_pair, random_refinement_pair, random_lts_pair\n"
        "from modalspec.formats import write_dmts, write_aut\n"
        "p = GenParams(max_states=5)\n"
        "for s in range(40):\n"
        "    for d in random_dmts_pair(p.with_seed(s)) + random_refinement_pair(p.with_seed(s)):\n"
        "        print(write_dmts(d))\n"
        "    for i in random_lts_pair(p.with_seed(s)):\n"
        "        print(write_aut(i))\n"
    )
    outs = set()
    for h in ("1", "2", "3"):
        env = dict(os.environ, PYTHONHASHSEED=h)
        outs.add(subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                                text=True, check=True).stdout)
    assert len(outs) == 1
