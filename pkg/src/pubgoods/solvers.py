"""Desk-scale equilibrium finders.

None of these come with guarantees beyond exhaustiveness at small sizes.
Whatever they return has been re-checked by the exact verifiers in
:mod:`pubgoods.game`; a candidate that fails the check is never returned.
"""
from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .circuit import BOT, CircuitInstance, solve_bruteforce, DEFAULT_SOLVE_LIMIT
from .errors import BudgetExceeded
from .game import (
    Game, PureProfile, StrategyProfile, best_responses_for, check_pure_ne, check_wsne,
    support, utility_difference,
)
from .rational import as_rational
from .reduction import ReductionMap

log = logging.getLogger(__name__)

METHODS = ("pure_enum", "grid", "dynamics")
DEFAULT_GRID_BUDGET = 10**7
DEFAULT_PURE_LIMIT = 20


@dataclass(frozen=True)
class SolverConfig:
    method: str = "grid"
    grid_denominator: int = 4
    max_iterations: int = 700
    restarts: int = 50
    damping: Fraction = Fraction(1, 2)
    temperature_schedule: tuple[Fraction, ...] = (
        Fraction(1), Fraction(1, 2), Fraction(1, 5), Fraction(1, 10),
        Fraction(1, 20), Fraction(1, 50), Fraction(1, 100),
    )
    seed: int = 0
    float_rationalization_denominator: int = 1000
    grid_budget: int = DEFAULT_GRID_BUDGET

    def __post_init__(self):
        object.__setattr__(self, "damping", as_rational(self.damping))
        object.__setattr__(
            self, "temperature_schedule", tuple(as_rational(t) for t in self.temperature_schedule)
        )
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.grid_denominator < 1:
            raise ValueError("grid_denominator must be positive")
        if self.max_iterations < 0 or self.restarts < 0:
            raise ValueError("max_iterations and restarts must be non-negative")
        if not 0 < self.damping < 1:
            raise ValueError("damping must lie strictly between 0 and 1")
        if not self.temperature_schedule or any(t <= 0 for t in self.temperature_schedule):
            raise ValueError("temperature schedule must be a non-empty list of positive values")
        if self.float_rationalization_denominator < 1 or self.grid_budget < 1:
            raise ValueError("rationalization denominator and grid budget must be positive")


def solve_pure_enum(game: Game, node_limit: int = DEFAULT_PURE_LIMIT) -> list[PureProfile]:
    """All pure Nash equilibria, lexicographically ordered."""
    if game.node_count > node_limit:
        raise BudgetExceeded(
            f"pure enumeration limited to {node_limit} nodes; game has {game.node_count}"
        )
    found = [PureProfile(a) for a in kernels.pure_ne_profiles(game)]
    for prof in found:
        if not check_pure_ne(game, prof).accepted:
            raise RuntimeError(f"kernel returned a non-equilibrium {prof.actions}")
    return found


def _grid_profile(numerators, D: int) -> StrategyProfile:
    return StrategyProfile(tuple(Fraction(k, D) for k in numerators))


def solve_grid(game: Game, epsilon, config: SolverConfig = SolverConfig(), all_solutions: bool = False):
    """Lexicographically first epsilon-WSNE on the grid ``{0, 1/D, ..., 1}^n``.

    Returns ``None`` when the grid holds none. With ``all_solutions`` the
    full ordered list of grid equilibria is returned instead.
    """
    epsilon = as_rational(epsilon)
    D = config.grid_denominator
    size = (D + 1) ** game.node_count
    if size > config.grid_budget:
        raise BudgetExceeded(
            f"grid has {size} profiles, above the budget of {config.grid_budget}"
        )
    scan = kernels.grid_scan(game, epsilon, D, first_only=not all_solutions)
    profiles = [_grid_profile(k, D) for k in scan.accepted]
    for prof in profiles:
        if not check_wsne(game, prof, epsilon).accepted:
            raise RuntimeError(f"kernel accepted a non-equilibrium {prof.strategies}")
    if all_solutions:
        return profiles
    return profiles[0] if profiles else None


def _logistic(x: float) -> float:
    return 0.5 * (1.0 + math.tanh(0.5 * x))


def _rationalize(s: list[float], R: int) -> list[Fraction]:
    return [Fraction(min(max(round(x * R), 0), R), R) for x in s]


def _repair(game: Game, values: list[Fraction], epsilon: Fraction) -> StrategyProfile:
    """Gauss-Seidel sweeps moving every node that violates the WSNE condition
    onto its unique epsilon-best-response."""
    values = list(values)
    for _ in range(2 * game.node_count):
        changed = False
        for i in range(game.node_count):
            prof = StrategyProfile(tuple(values))
            br = best_responses_for(utility_difference(game, prof, i), epsilon)
            if not support(values[i]) <= br:
                (only,) = br
                values[i] = Fraction(only)
                changed = True
        if not changed:
            break
    return StrategyProfile(tuple(values))


def _structured_start(game: Game, rmap: ReductionMap, solution, rng: random.Random) -> list[float]:
    p = float(game.price)
    start = [rng.random() for _ in range(game.node_count)]
    for orig, node in enumerate(rmap.original_to_game):
        v = solution[orig]
        start[node] = 1.0 - p if v == BOT else float(int(v))
    for node in rmap.auxiliary_nodes:
        start[node] = rng.choice((0.0, 1.0, 1.0 - p))
    return start


def solve_dynamics(game: Game, epsilon, config: SolverConfig = SolverConfig(),
                   reduction_map: ReductionMap | None = None,
                   circuit: CircuitInstance | None = None) -> StrategyProfile | None:
    """Damped logit best-response dynamics with annealed temperature.

    Each of ``config.restarts`` runs starts from a seeded profile. When both a
    reduction map and its circuit are supplied, starts cycle through the
    circuit's solutions (circuit nodes at their values, ⊥ as ``1 - p``) with
    random pure-or-mixed auxiliaries; otherwise starts are uniform random.
    The start and the iterate after each temperature stage are rounded to a multiple of
    ``1/R``, repaired by best-response sweeps and checked exactly.
    """
    epsilon = as_rational(epsilon)
    rng = random.Random(config.seed)
    n = game.node_count
    p = float(game.price)
    alpha = float(config.damping)
    R = config.float_rationalization_denominator
    nbs = game.in_neighbors
    stages = config.temperature_schedule
    per_stage = config.max_iterations // len(stages)

    def verified(s: list[float]) -> StrategyProfile | None:
        cand = _repair(game, _rationalize(s, R), epsilon)
        return cand if check_wsne(game, cand, epsilon).accepted else None

    solutions = []
    if reduction_map is not None and circuit is not None and config.restarts:
        if circuit.node_count <= DEFAULT_SOLVE_LIMIT:
            solutions = solve_bruteforce(circuit)

    for attempt in range(config.restarts):
        if solutions:
            s = _structured_start(game, reduction_map, solutions[attempt % len(solutions)], rng)
        else:
            s = [rng.random() for _ in range(n)]
        found = verified(s)
        if found is not None:
            log.debug("dynamics: start %d is already an equilibrium", attempt)
            return found
        for T in stages if per_stage else ():
            inv_t = 1.0 / float(T)
            for _ in range(per_stage):
                nxt = []
                for i in range(n):
                    prod = 1.0
                    for j in nbs[i]:
                        prod *= 1.0 - s[j]
                    nxt.append((1.0 - alpha) * s[i] + alpha * _logistic((prod - p) * inv_t))
                s = nxt
            found = verified(s)
            if found is not None:
                log.debug("dynamics: verified equilibrium on restart %d at T=%s", attempt, T)
                return found
    return None


def solve(game: Game, epsilon, config: SolverConfig, **kwargs):
    if config.method == "pure_enum":
        found = solve_pure_enum(game)
        return found[0].embed() if found else None
    if config.method == "grid":
        return solve_grid(game, epsilon, config)
    return solve_dynamics(game, epsilon, config, **kwargs)
