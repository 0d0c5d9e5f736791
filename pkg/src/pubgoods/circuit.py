"""Pure-Circuit instances with NOR and PURIFY gates.

Node values are ``0``, ``1`` or ``⊥`` (undetermined). A NOR gate ``(u, v) -> w``
forces ``w = 1`` on inputs ``0, 0`` and ``w = 0`` when either input is 1. A
PURIFY gate ``u -> (v, w)`` needs at least one pure output and copies a pure
input to both outputs.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .rational import as_rational

NOR = "NOR"
PURIFY = "PURIFY"
GATE_TYPES = (NOR, PURIFY)


class Value(enum.IntEnum):
    """Node value. The integer order 0 < 1 < ⊥ is the enumeration order."""

    ZERO = 0
    ONE = 1
    BOT = 2

    def __str__(self):
        return "⊥" if self is Value.BOT else str(int(self))

    @property
    def is_pure(self) -> bool:
        return self is not Value.BOT


BOT = Value.BOT


@dataclass(frozen=True)
class Gate:
    """``NOR``: inputs u, v and output w. ``PURIFY``: input u and outputs v, w."""

    gate_type: str
    u: int
    v: int
    w: int

    def __post_init__(self):
        if self.gate_type not in GATE_TYPES:
            raise ValueError(f"unknown gate type {self.gate_type!r}")

    @property
    def inputs(self) -> tuple[int, ...]:
        return (self.u, self.v) if self.gate_type == NOR else (self.u,)

    @property
    def outputs(self) -> tuple[int, ...]:
        return (self.w,) if self.gate_type == NOR else (self.v, self.w)

    def __str__(self):
        if self.gate_type == NOR:
            return f"NOR({self.u}, {self.v} -> {self.w})"
        return f"PURIFY({self.u} -> {self.v}, {self.w})"


@dataclass(frozen=True)
class CircuitInstance:
    node_count: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))

    @property
    def gate_counts(self) -> dict[str, int]:
        counts = {NOR: 0, PURIFY: 0}
        for g in self.gates:
            counts[g.gate_type] += 1
        return counts


@dataclass(frozen=True)
class Assignment:
    values: tuple[Value, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Value(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def __str__(self):
        return "(" + ", ".join(str(v) for v in self.values) + ")"


@dataclass(frozen=True)
class GateRecord:
    gate_index: int
    satisfied: bool
    clause: str | None = None


@dataclass(frozen=True)
class GateReport:
    gates: tuple[GateRecord, ...]

    @property
    def accepted(self) -> bool:
        return all(r.satisfied for r in self.gates)

    @property
    def violations(self) -> list[GateRecord]:
        return [r for r in self.gates if not r.satisfied]


class InvalidInstance(ValueError):
    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def validate_instance(instance: CircuitInstance) -> list[str]:
    """Structural errors of ``instance``; an empty list means it is well formed."""
    errors = []
    n = instance.node_count
    if n < 1:
        errors.append("instance has no nodes")
    producers: list[list[int]] = [[] for _ in range(max(n, 0))]
    for gi, g in enumerate(instance.gates):
        nodes = (g.u, g.v, g.w)
        bad = [x for x in nodes if not 0 <= x < n]
        if bad:
            errors.append(f"gate {gi} {g}: node index out of range {bad}")
            continue
        if len(set(nodes)) != 3:
            errors.append(f"gate {gi} {g}: nodes are not distinct")
        for out in g.outputs:
            producers[out].append(gi)
    for node, prod in enumerate(producers):
        if not prod:
            errors.append(f"node {node} is not the output of any gate")
        elif len(prod) > 1:
            errors.append(f"node {node} is the output of {len(prod)} gates {prod}")
    return errors


def require_valid(instance: CircuitInstance) -> None:
    errors = validate_instance(instance)
    if errors:
        raise InvalidInstance(errors)


def gate_clause_violation(gate_type: str, xu: Value, xv: Value, xw: Value) -> str | None:
    """The first violated clause of one gate, or None when it is satisfied."""
    if gate_type == NOR:
        if xu == 0 and xv == 0 and xw != 1:
            return "inputs 0, 0 require output 1"
        if (xu == 1 or xv == 1) and xw != 0:
            return "an input 1 requires output 0"
        return None
    if xv == BOT and xw == BOT:
        return "at least one output must be pure"
    if xu != BOT and not (xv == xu and xw == xu):
        return f"pure input {int(xu)} must be copied to both outputs"
    return None


def check_assignment(instance: CircuitInstance, assignment: Assignment) -> GateReport:
    if len(assignment) != instance.node_count:
        raise ValueError(
            f"assignment has {len(assignment)} values but the instance has "
            f"{instance.node_count} nodes"
        )
    x = assignment.values
    records = []
    for gi, g in enumerate(instance.gates):
        clause = gate_clause_violation(g.gate_type, x[g.u], x[g.v], x[g.w])
        records.append(GateRecord(gi, clause is None, clause))
    return GateReport(tuple(records))


DEFAULT_SOLVE_LIMIT = 12


def solve_bruteforce(instance: CircuitInstance, limit: int = DEFAULT_SOLVE_LIMIT) -> list[Assignment]:
    """All solutions, in lexicographic order with 0 < 1 < ⊥."""
    require_valid(instance)
    if instance.node_count > limit:
        raise ValueError(
            f"brute force limited to {limit} nodes; instance has {instance.node_count}"
        )
    raw = kernels.circuit_solutions(instance)
    return [Assignment(tuple(Value(v) for v in sol)) for sol in raw]


def generate_random(num_nodes_target: int, nor_fraction, seed: int, max_retries: int = 100) -> CircuitInstance:
    """Random valid instance with at least ``num_nodes_target`` nodes.

    Gates are drawn first, each allocating fresh output nodes, until the
    target is reached; every input slot is then wired to distinct random nodes
    other than the gate's own outputs. Deterministic in ``seed``.
    """
    nor_fraction = as_rational(nor_fraction)
    if num_nodes_target < 3:
        raise ValueError("num_nodes_target must be at least 3")
    if not 0 <= nor_fraction <= 1:
        raise ValueError(f"nor_fraction must lie in [0, 1], got {nor_fraction}")
    rng = random.Random(seed)
    for _ in range(max_retries):
        kinds = []
        n = 0
        while n < num_nodes_target:
            # exact Bernoulli draw with probability nor_fraction
            is_nor = rng.randrange(nor_fraction.denominator) < nor_fraction.numerator
            kinds.append(NOR if is_nor else PURIFY)
            n += 1 if is_nor else 2
        gates = []
        nxt = 0
        for kind in kinds:
            if kind == NOR:
                w = nxt
                nxt += 1
                u, v = rng.sample([x for x in range(n) if x != w], 2)
                gates.append(Gate(NOR, u, v, w))
            else:
                v, w = nxt, nxt + 1
                nxt += 2
                u = rng.choice([x for x in range(n) if x not in (v, w)])
                gates.append(Gate(PURIFY, u, v, w))
        instance = CircuitInstance(n, tuple(gates))
        if not validate_instance(instance):
            return instance
    raise ValueError(
        f"could not generate a valid instance after {max_retries} attempts "
        f"(target={num_nodes_target}, nor_fraction={nor_fraction})"
    )


def assignment_from_string(text: str) -> Assignment:
    """``"01⊥"`` or ``"0 1 bot"`` style shorthand, mostly for tests."""
    tokens = text.split() if " " in text else list(text)
    table = {"0": Value.ZERO, "1": Value.ONE, "⊥": BOT, "bot": BOT, "b": BOT}
    return Assignment(tuple(table[t] for t in tokens))

