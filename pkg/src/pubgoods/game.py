"""Indivisible public goods games on directed graphs.

A player either produces the good (action 1, payoff ``1 - p``) or free-rides
(action 0, payoff 1 if some in-neighbour produces and 0 otherwise). A mixed
profile assigns each player the probability ``s_i`` of producing. Everything
here is exact: payoffs and utility differences are Fractions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NoTrivialEquilibrium
from .rational import as_rational

ZERO = Fraction(0)
ONE = Fraction(1)

BOTH = frozenset({0, 1})
ONLY_0 = frozenset({0})
ONLY_1 = frozenset({1})


@dataclass(frozen=True)
class Game:
    """Directed graph of players with a common price ``p`` in (0, 1).

    ``in_neighbors[i]`` lists the players whose production benefits ``i``,
    i.e. the sources of edges ``j -> i``, stored sorted so that equal graphs
    compare equal.
    """

    node_count: int
    in_neighbors: tuple[tuple[int, ...], ...]
    price: Fraction

    def __post_init__(self):
        object.__setattr__(self, "price", as_rational(self.price))
        object.__setattr__(
            self, "in_neighbors", tuple(tuple(sorted(int(j) for j in nb)) for nb in self.in_neighbors)
        )
        if self.node_count < 1:
            raise ValueError("a game needs at least one player")
        if not 0 < self.price < 1:
            raise ValueError(f"price must lie strictly between 0 and 1, got {self.price}")
        if len(self.in_neighbors) != self.node_count:
            raise ValueError("in_neighbors must have one entry per node")
        for i, nb in enumerate(self.in_neighbors):
            if len(set(nb)) != len(nb):
                raise ValueError(f"duplicate in-neighbour of node {i}")
            for j in nb:
                if not 0 <= j < self.node_count:
                    raise ValueError(f"edge {j}->{i} references a missing node")
                if j == i:
                    raise ValueError(f"self-loop at node {i}")

    @classmethod
    def from_edges(cls, node_count: int, edges: Iterable[tuple[int, int]], price) -> "Game":
        nbs: list[list[int]] = [[] for _ in range(node_count)]
        for src, dst in edges:
            if not 0 <= dst < node_count:
                raise ValueError(f"edge {src}->{dst} references a missing node")
            nbs[dst].append(src)
        return cls(node_count, tuple(tuple(nb) for nb in nbs), price)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((j, i) for i, nb in enumerate(self.in_neighbors) for j in nb)

    @property
    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.in_neighbors)


@dataclass(frozen=True)
class StrategyProfile:
    strategies: tuple[Fraction, ...]

    def __post_init__(self):
        values = tuple(as_rational(s) for s in self.strategies)
        for i, s in enumerate(values):
            if not 0 <= s <= 1:
                raise ValueError(f"strategy of node {i} is outside [0, 1]: {s}")
        object.__setattr__(self, "strategies", values)

    def __len__(self):
        return len(self.strategies)

    def __getitem__(self, i):
        return self.strategies[i]

    @classmethod
    def uniform(cls, n: int, value) -> "StrategyProfile":
        return cls((as_rational(value),) * n)


@dataclass(frozen=True)
class PureProfile:
    actions: tuple[int, ...]

    def __post_init__(self):
        acts = tuple(int(a) for a in self.actions)
        if any(a not in (0, 1) for a in acts):
            raise ValueError("pure actions must be 0 or 1")
        object.__setattr__(self, "actions", acts)

    def __len__(self):
        return len(self.actions)

    def embed(self) -> StrategyProfile:
        return StrategyProfile(tuple(Fraction(a) for a in self.actions))


@dataclass(frozen=True)
class PlayerRecord:
    player: int
    delta_u: Fraction
    support: frozenset
    best_responses: frozenset
    violation: str | None = None


@dataclass(frozen=True)
class EquilibriumReport:
    accepted: bool
    players: tuple[PlayerRecord, ...] = field(default=())

    def __post_init__(self):
        if self.accepted != (not any(r.violation for r in self.players)):
            raise ValueError("accepted must hold exactly when no player has a violation")

    @property
    def violations(self) -> list[PlayerRecord]:
        return [r for r in self.players if r.violation]


def _check_profile(game: Game, profile: StrategyProfile) -> None:
    if len(profile) != game.node_count:
        raise ValueError(
            f"profile has {len(profile)} entries but the game has {game.node_count} nodes"
        )


def _check_player(game: Game, player: int) -> None:
    if not 0 <= player < game.node_count:
        raise IndexError(f"player {player} out of range for {game.node_count} nodes")


def _none_produce(game: Game, profile: StrategyProfile, player: int) -> Fraction:
    prod = ONE
    for j in game.in_neighbors[player]:
        prod *= ONE - profile.strategies[j]
    return prod


def expected_payoff(game: Game, profile: StrategyProfile, player: int, action: int) -> Fraction:
    """Expected payoff of a pure ``action`` against the others' mixed strategies."""
    _check_profile(game, profile)
    _check_player(game, player)
    if action == 1:
        return ONE - game.price
    if action == 0:
        return ONE - _none_produce(game, profile, player)
    raise ValueError(f"action must be 0 or 1, got {action!r}")


def mixed_expected_payoff(game: Game, profile: StrategyProfile, player: int) -> Fraction:
    produce = expected_payoff(game, profile, player, 1)
    idle = expected_payoff(game, profile, player, 0)
    s = profile.strategies[player]
    return s * produce + (ONE - s) * idle


def utility_difference(game: Game, profile: StrategyProfile, player: int) -> Fraction:
    """``Δu_i = ∏_{j ∈ N(i)} (1 - s_j) - p``; always within ``[-p, 1 - p]``."""
    _check_profile(game, profile)
    _check_player(game, player)
    return _none_produce(game, profile, player) - game.price


def best_responses_for(delta_u: Fraction, epsilon: Fraction) -> frozenset:
    if delta_u > epsilon:
        return ONLY_1
    if delta_u < -epsilon:
        return ONLY_0
    return BOTH


def epsilon_best_responses(game: Game, profile: StrategyProfile, player: int, epsilon) -> frozenset:
    """Pure actions within ``epsilon`` of the best attainable payoff (closed boundary)."""
    epsilon = _check_epsilon(epsilon)
    return best_responses_for(utility_difference(game, profile, player), epsilon)


def support(s: Fraction) -> frozenset:
    if s == 0:
        return ONLY_0
    if s == 1:
        return ONLY_1
    return BOTH


def _check_epsilon(epsilon) -> Fraction:
    epsilon = as_rational(epsilon)
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    return epsilon


def check_wsne(game: Game, profile: StrategyProfile, epsilon) -> EquilibriumReport:
    """Every action played with positive probability must be an epsilon-best-response."""
    epsilon = _check_epsilon(epsilon)
    _check_profile(game, profile)
    records = []
    for i in range(game.node_count):
        du = utility_difference(game, profile, i)
        br = best_responses_for(du, epsilon)
        sup = support(profile.strategies[i])
        violation = None
        if not sup <= br:
            bad = sorted(sup - br)
            violation = (
                f"plays {bad[0]} with s={profile.strategies[i]} but Δu={du} "
                f"leaves only {sorted(br)} within ε={epsilon}"
            )
        records.append(PlayerRecord(i, du, sup, br, violation))
    return EquilibriumReport(not any(r.violation for r in records), tuple(records))


def check_epsilon_ne(game: Game, profile: StrategyProfile, epsilon) -> EquilibriumReport:
    """Every player's expected payoff is within ``epsilon`` of a best response."""
    epsilon = _check_epsilon(epsilon)
    _check_profile(game, profile)
    records = []
    for i in range(game.node_count):
        produce = expected_payoff(game, profile, i, 1)
        idle = expected_payoff(game, profile, i, 0)
        s = profile.strategies[i]
        regret = max(produce, idle) - (s * produce + (ONE - s) * idle)
        du = produce - idle
        violation = None
        if regret > epsilon:
            violation = f"regret {regret} exceeds ε={epsilon} (s={s}, Δu={du})"
        records.append(
            PlayerRecord(i, du, support(s), best_responses_for(du, epsilon), violation)
        )
    return EquilibriumReport(not any(r.violation for r in records), tuple(records))


def check_pure_ne(game: Game, actions: PureProfile | Sequence[int]) -> EquilibriumReport:
    """Producers have no producing in-neighbour; idlers have at least one."""
    if not isinstance(actions, PureProfile):
        actions = PureProfile(tuple(actions))
    if len(actions) != game.node_count:
        raise ValueError(
            f"profile has {len(actions)} entries but the game has {game.node_count} nodes"
        )
    a = actions.actions
    records = []
    for i in range(game.node_count):
        covered = any(a[j] == 1 for j in game.in_neighbors[i])
        du = -game.price if covered else ONE - game.price
        violation = None
        if a[i] == 1 and covered:
            violation = "produces although an in-neighbour already produces"
        elif a[i] == 0 and not covered:
            violation = "idles although no in-neighbour produces"
        records.append(
            PlayerRecord(i, du, frozenset({a[i]}), best_responses_for(du, ZERO), violation)
        )
    return EquilibriumReport(not any(r.violation for r in records), tuple(records))


def trivial_wsne(game: Game, epsilon) -> StrategyProfile:
    """All-ones if ``epsilon >= p``, else all-zeros if ``epsilon >= 1 - p``."""
    epsilon = _check_epsilon(epsilon)
    p = game.price
    if epsilon >= p:
        return StrategyProfile.uniform(game.node_count, ONE)
    if epsilon >= ONE - p:
        return StrategyProfile.uniform(game.node_count, ZERO)
    raise NoTrivialEquilibrium(
        f"no trivial equilibrium: ε={epsilon} < min(p, 1-p)={min(p, ONE - p)}"
    )

