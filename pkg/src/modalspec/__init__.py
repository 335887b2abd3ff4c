"""Refinement checking for labeled and disjunctive modal transition systems.

The public API re-exports the data types, the relation engines, the game
solver, the oracle and the file formats.
"""
from .branching import (
    branching_counterexample,
    branching_family,
    branching_refines,
    equiv_branching,
    sim_refines,
)
from .dmts import Dmts, chi_embed, modal_refines, satisfies, validate_dmts
from .errors import (
    CountMismatch,
    IllegalStrategy,
    InconsistentMust,
    InvalidBound,
    InvalidState,
    ModalSpecError,
    ParseError,
    SizeLimit,
)
from .formats import parse_aut, parse_dmts, write_aut, write_dmts
from .generate import GenParams, random_dmts, random_lts
from .games import build_sim_game, build_spec_game, solve_game, winner
from .linear import equiv_linear, linear_family, linear_refines
from .lts import (
    Lts,
    bisimilar,
    greatest_bisimulation,
    greatest_simulation,
    simulates,
    simulation_equivalent,
    validate_lts,
)
from .oracle import cross_check, recursive_family_check
from .relations import INF, StateRelation, SwitchBound

__version__ = "0.1.0"
