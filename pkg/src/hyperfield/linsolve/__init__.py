"""Homogeneous linear systems over finite hyperfields."""

from hyperfield.linsolve.brute import BRUTE_CAP, CapExceededError, brute_solve
from hyperfield.linsolve.piles import (
    Pile,
    find_pile,
    find_pile_bruteforce,
    find_pile_sets,
    is_pilefree,
    remove_piles,
)
from hyperfield.linsolve.reduce import (
    combine_for_induction,
    eliminate_small_eqs,
    merge_terms,
    reduce_to_three,
    strengthen,
    substitute,
)
from hyperfield.linsolve.solver import solve, solve_pilefree3
from hyperfield.linsolve.sweep import canonical_equations, fetvins_sweep
from hyperfield.linsolve.system import (
    CONTAINS0,
    COVERS,
    InvariantError,
    LinearSystem,
    PreconditionError,
    SolutionCheck,
    SystemParseError,
    check_solution,
    eval_equation,
    format_assignment,
    named,
    parse_system,
)
from hyperfield.linsolve.trace import (
    DropEquation,
    MergeCoefficient,
    ReductionTrace,
    RemoveTerm,
    Substitute,
    ZeroVar,
)

__all__ = [name for name in dir() if not name.startswith("_")]
