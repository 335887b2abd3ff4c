"""Disjunctive modal specifications: refinement, implementations, games.

``python3 demos/modal_specs.py``
"""
# %%
import numpy as np

from modalspec import (Dmts, GenParams, SwitchBound, branching_refines, build_spec_game,
                       linear_refines, modal_refines, satisfies, winner, write_dmts)
from modalspec.generate import random_refinement_pair, sample_implementation

# state 0 must do a or b; both lead to a terminal state
either = Dmts(2, frozenset({0}), frozenset({(0, "a", 1), (0, "b", 1)}),
              frozenset({(0, frozenset({("a", 1), ("b", 1)}))}))
# only a, and it is required
only_a = Dmts(2, frozenset({0}), frozenset({(0, "a", 1)}),
              frozenset({(0, frozenset({("a", 1)}))}))
print(write_dmts(only_a))

# %%
print("only_a <= either:", modal_refines(only_a, either) is not None)
print("either <= only_a:", modal_refines(either, only_a) is not None)
for k in ("0", "1", "inf"):
    g = build_spec_game(only_a, either, k)
    print(f"k={k:>3} branching: {branching_refines(only_a, either, k) is not None}, "
          f"game winner: {winner(g)}, positions: {len(g.positions)}")
# the linear family reads a disjunctive must as separate required traces, so the
# trace "b" that either offers has no counterpart in only_a
print("linear k=1:", linear_refines(only_a, either, SwitchBound(1)) is not None)

# %%
# refinement is sound: every implementation of the finer spec implements the coarser one
params = GenParams(max_states=4, seed=11)
d1, d2 = random_refinement_pair(params)
rng = np.random.default_rng(0)
impls = [i for i in (sample_implementation(d1, rng) for _ in range(200)) if i is not None]
print(len(impls), "implementations sampled;",
      sum(satisfies(i, d1) and not satisfies(i, d2) for i in impls), "violations")
