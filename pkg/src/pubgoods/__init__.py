"""Indivisible public goods games on directed graphs, the Pure-Circuit
problem, and the gadget reduction from circuits to games, with exact
rational verifiers throughout."""
from .circuit import (
    BOT, NOR, PURIFY, Assignment, CircuitInstance, Gate, GateReport, Value,
    check_assignment, generate_random, solve_bruteforce, validate_instance,
)
from .errors import BudgetExceeded, FormatError, NoTrivialEquilibrium, ReductionUndefined
from .game import (
    EquilibriumReport, Game, PureProfile, StrategyProfile, check_epsilon_ne, check_pure_ne,
    check_wsne, epsilon_best_responses, expected_payoff, mixed_expected_payoff, trivial_wsne,
    utility_difference,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .reduction import (
    ReductionMap, ReductionParams, certify_params, chain_length, compile_circuit, lift_profile,
    verify_reduction,
)
from .solvers import SolverConfig, solve_dynamics, solve_grid, solve_pure_enum

__version__ = "0.1.0"
