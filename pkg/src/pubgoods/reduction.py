"""Compile Pure-Circuit instances into public goods games.

Each circuit node keeps its index as a player. A ``NOR(u, v -> w)`` gate adds
the edges ``u -> w`` and ``v -> w``, so ``Δu_w = (1 - s_u)(1 - s_v) - p``.
A ``PURIFY(u -> v, w)`` gate appends auxiliary players ``d, c_1, ..., c_{2l+1}``
wired as

* a chain ``u -> c_1 -> c_2 -> ... -> c_{2l+1} -> w``,
* ``u -> d`` and ``c_{2j} -> d`` for ``j = 1..l``,
* ``d -> v``,

so that ``Δu_d = (1 - s_u) ∏_j (1 - s_{c_{2j}}) - p``. The chain length ``l``
is the least ``l >= 1`` with ``(p + ε)^l <= p - ε``, found by exact search.

Auxiliaries are appended after the circuit nodes in gate order, as
``d, c_1, ..., c_{2l+1}`` per PURIFY gate.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .circuit import (
    BOT, NOR, PURIFY, Assignment, CircuitInstance, GateReport, Value,
    check_assignment, require_valid,
)
from .errors import ReductionUndefined
from .game import EquilibriumReport, Game, StrategyProfile, check_wsne
from .rational import as_rational

ONE = Fraction(1)
HALF = Fraction(1, 2)


def _check_params(p, epsilon) -> tuple[Fraction, Fraction]:
    p = as_rational(p)
    epsilon = as_rational(epsilon)
    if not 0 < p < 1:
        raise ValueError(f"price must lie strictly between 0 and 1, got {p}")
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    bound = min(p, ONE - p)
    if epsilon >= bound:
        raise ReductionUndefined(
            f"ε={epsilon} >= min(p, 1-p)={bound}: the reduction is undefined because the "
            f"game already has a trivial ε-WSNE (all players produce if ε >= p, none if ε >= 1-p)"
        )
    return p, epsilon


def chain_length(p, epsilon) -> int:
    """Least ``l >= 1`` with ``(p + ε)^l <= p - ε``.

    Equals ``ceil(log(p - ε) / log(p + ε))`` (clamped to 1 when ε = 0) but
    avoids floating-point logarithms.
    """
    p, epsilon = _check_params(p, epsilon)
    base = p + epsilon
    target = p - epsilon
    l, power = 1, base
    while power > target:
        l += 1
        power *= base
    return l


@dataclass(frozen=True)
class ReductionParams:
    price: Fraction
    epsilon: Fraction
    chain_l: int

    def __post_init__(self):
        p, eps = _check_params(self.price, self.epsilon)
        object.__setattr__(self, "price", p)
        object.__setattr__(self, "epsilon", eps)
        if self.chain_l < 1:
            raise ValueError("chain length must be positive")
        base, target = p + eps, p - eps
        if base ** self.chain_l > target:
            raise ValueError(f"(p+ε)^{self.chain_l} > p-ε")
        if self.chain_l > 1 and base ** (self.chain_l - 1) <= target:
            raise ValueError(f"chain length {self.chain_l} is not minimal")

    @classmethod
    def of(cls, p, epsilon) -> "ReductionParams":
        return cls(as_rational(p), as_rational(epsilon), chain_length(p, epsilon))


@dataclass(frozen=True)
class ParamCertificate:
    price: Fraction
    epsilon: Fraction
    chain_l: int
    power_l: Fraction  # (p+ε)^l
    p_minus_eps: Fraction
    power_l1_minus_p: Fraction  # (p+ε)^(l+1) - p
    chain_holds: bool  # (p+ε)^l <= p-ε
    minimal: bool  # l = 1 or (p+ε)^(l-1) > p-ε
    d_forced_zero: bool  # (p+ε)^(l+1) - p < -ε

    @property
    def ok(self) -> bool:
        return self.chain_holds and self.minimal and self.d_forced_zero


def certify_params(p, epsilon) -> ParamCertificate:
    """Exact check of the inequalities behind the PURIFY gadget."""
    p, epsilon = _check_params(p, epsilon)
    l = chain_length(p, epsilon)
    base = p + epsilon
    power_l = base ** l
    target = p - epsilon
    tail = base ** (l + 1) - p
    return ParamCertificate(
        price=p,
        epsilon=epsilon,
        chain_l=l,
        power_l=power_l,
        p_minus_eps=target,
        power_l1_minus_p=tail,
        chain_holds=power_l <= target,
        minimal=l == 1 or base ** (l - 1) > target,
        d_forced_zero=tail < -epsilon,
    )


@dataclass(frozen=True)
class PurifyGadget:
    gate_index: int
    d: int
    chain: tuple[int, ...]  # c_1 .. c_{2l+1}


@dataclass(frozen=True)
class ReductionMap:
    params: ReductionParams
    original_to_game: tuple[int, ...]
    gadgets: tuple[PurifyGadget, ...]

    def gadget_for(self, gate_index: int) -> PurifyGadget | None:
        for g in self.gadgets:
            if g.gate_index == gate_index:
                return g
        return None

    @property
    def auxiliary_nodes(self) -> list[int]:
        return [x for g in self.gadgets for x in (g.d, *g.chain)]


def purify_edges(u: int, v: int, w: int, d: int, chain: Sequence[int]) -> list[tuple[int, int]]:
    """Edges of one PURIFY gadget; ``chain`` is ``c_1 .. c_{2l+1}``."""
    l = (len(chain) - 1) // 2
    edges = [(u, chain[0])]
    edges += [(chain[k], chain[k + 1]) for k in range(len(chain) - 1)]
    edges.append((chain[-1], w))
    edges.append((u, d))
    # c_{2j} sits at chain[2j - 1]
    edges += [(chain[2 * j - 1], d) for j in range(1, l + 1)]
    edges.append((d, v))
    return edges


def compile_circuit(instance: CircuitInstance, p, epsilon) -> tuple[Game, ReductionMap]:
    """Build the public goods game simulating ``instance`` at price ``p``."""
    params = ReductionParams.of(p, epsilon)
    require_valid(instance)
    l = params.chain_l
    n = instance.node_count
    edges: list[tuple[int, int]] = []
    gadgets = []
    nxt = n
    for gi, g in enumerate(instance.gates):
        if g.gate_type == NOR:
            edges += [(g.u, g.w), (g.v, g.w)]
        else:
            d = nxt
            chain = tuple(range(nxt + 1, nxt + 2 * l + 2))
            nxt += 2 * l + 2
            edges += purify_edges(g.u, g.v, g.w, d, chain)
            gadgets.append(PurifyGadget(gi, d, chain))
    game = Game.from_edges(nxt, edges, params.price)
    return game, ReductionMap(params, tuple(range(n)), tuple(gadgets))


def purify_gadget_game(p, epsilon) -> tuple[Game, dict]:
    """A lone PURIFY gadget with a free input ``u`` (no in-neighbours).

    Node layout: ``u=0, v=1, w=2, d=3, c_k=3+k``. Returns the game and a
    name -> index dict.
    """
    params = ReductionParams.of(p, epsilon)
    l = params.chain_l
    chain = tuple(range(4, 4 + 2 * l + 1))
    edges = purify_edges(0, 1, 2, 3, chain)
    names = {"u": 0, "v": 1, "w": 2, "d": 3}
    names.update({f"c{k}": c for k, c in enumerate(chain, start=1)})
    return Game.from_edges(4 + len(chain), edges, params.price), names


def expected_size(instance: CircuitInstance, l: int) -> tuple[int, int]:
    counts = instance.gate_counts
    nodes = instance.node_count + (2 * l + 2) * counts[PURIFY]
    edges = 2 * counts[NOR] + (3 * l + 4) * counts[PURIFY]
    return nodes, edges


def lift_value(s: Fraction, tolerance: Fraction = Fraction(0)) -> Value:
    if s <= tolerance:
        return Value.ZERO
    if s >= ONE - tolerance:
        return Value.ONE
    return BOT


def lift_profile(rmap: ReductionMap, profile: StrategyProfile, tolerance=0) -> Assignment:
    """Read a circuit assignment off the circuit nodes of a game profile.

    Pure strategies map to their value and anything strictly mixed to ⊥.
    A positive ``tolerance`` snaps values within it of 0 or 1; only the
    default of 0 carries the soundness guarantee.
    """
    tolerance = as_rational(tolerance)
    if not 0 <= tolerance < HALF:
        raise ValueError(f"tolerance must lie in [0, 1/2), got {tolerance}")
    needed = max(rmap.original_to_game, default=-1) + 1
    if len(profile) < needed:
        raise ValueError("profile does not cover the compiled game")
    return Assignment(tuple(lift_value(profile[g], tolerance) for g in rmap.original_to_game))


@dataclass(frozen=True)
class ReductionVerdict:
    game_report: EquilibriumReport
    assignment: Assignment | None
    circuit_report: GateReport | None

    @property
    def failed_stage(self) -> str | None:
        if not self.game_report.accepted:
            return "wsne"
        if not self.circuit_report.accepted:
            return "circuit"
        return None

    @property
    def accepted(self) -> bool:
        return self.failed_stage is None


def verify_reduction(instance: CircuitInstance, p, epsilon, profile: StrategyProfile,
                     compiled: tuple[Game, ReductionMap] | None = None) -> ReductionVerdict:
    """Stage 1: ``profile`` is an ε-WSNE of the compiled game. Stage 2: its
    lift solves the circuit. Stage 2 only runs when stage 1 passes."""
    game, rmap = compiled or compile_circuit(instance, p, epsilon)
    report = check_wsne(game, profile, rmap.params.epsilon)
    if not report.accepted:
        return ReductionVerdict(report, None, None)
    assignment = lift_profile(rmap, profile)
    return ReductionVerdict(report, assignment, check_assignment(instance, assignment))
