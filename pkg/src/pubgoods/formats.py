"""Line-based text formats.

All formats are UTF-8, use 0-based indices, ignore blank lines and ``#``
comments, and write rationals as ``num/den``.

Game::

    pgg-v1
    nodes 3
    price 1/2
    edge 0 1

Profile: ``<node> <num>/<den>`` per node. Circuit::

    pc-v1
    nodes 3
    gate PURIFY 0 -> 1 2
    gate NOR 1 2 -> 0

Assignment: ``<node> <0|1|bot>`` per node. Reduction map::

    map-v1
    price 1/2
    epsilon 1/10
    l 2
    node 0 0
    gadget 0 PURIFY d 3 chain 4 5 6 7 8
"""
from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator

from .circuit import BOT, NOR, PURIFY, Assignment, CircuitInstance, Gate, Value
from .errors import FormatError
from .game import Game, StrategyProfile
from .rational import format_rational, parse_rational
from .reduction import PurifyGadget, ReductionMap, ReductionParams


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"line {lineno}: expected an integer, got {token!r}") from None


def _rat(token: str, lineno: int) -> Fraction:
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None


def _header(lines, magic: str):
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise FormatError(f"empty file, expected {magic!r} header") from None
    if tokens != [magic]:
        raise FormatError(f"line {lineno}: expected header {magic!r}, got {' '.join(tokens)!r}")


def _keyed(lines, key: str, nargs: int = 1) -> tuple[int, list[str]]:
    try:
        lineno, tokens = next(lines)
    except StopIteration:
        raise FormatError(f"unexpected end of file, expected {key!r}") from None
    if tokens[0] != key or len(tokens) != nargs + 1:
        raise FormatError(f"line {lineno}: expected '{key}' with {nargs} argument(s)")
    return lineno, tokens[1:]


# -- games -----------------------------------------------------------------

def parse_game(text: str) -> Game:
    lines = _lines(text)
    _header(lines, "pgg-v1")
    lineno, (n_tok,) = _keyed(lines, "nodes")
    n = _int(n_tok, lineno)
    lineno, (p_tok,) = _keyed(lines, "price")
    price = _rat(p_tok, lineno)
    edges = []
    seen = set()
    for lineno, tokens in lines:
        if tokens[0] != "edge" or len(tokens) != 3:
            raise FormatError(f"line {lineno}: expected 'edge <from> <to>'")
        e = (_int(tokens[1], lineno), _int(tokens[2], lineno))
        if e in seen:
            raise FormatError(f"line {lineno}: duplicate edge {e[0]} -> {e[1]}")
        if not (0 <= e[0] < n and 0 <= e[1] < n):
            raise FormatError(f"line {lineno}: edge {e[0]} -> {e[1]} outside 0..{n - 1}")
        seen.add(e)
        edges.append(e)
    try:
        return Game.from_edges(n, edges, price)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_game(game: Game) -> str:
    out = ["pgg-v1", f"nodes {game.node_count}", f"price {format_rational(game.price)}"]
    out += [f"edge {j} {i}" for j, i in game.edges]
    return "\n".join(out) + "\n"


# -- profiles --------------------------------------------------------------

def _per_node(text: str, n: int | None, convert: Callable[[str, int], object], what: str) -> list:
    entries: dict[int, object] = {}
    for lineno, tokens in _lines(text):
        if len(tokens) != 2:
            raise FormatError(f"line {lineno}: expected '<node> <{what}>'")
        node = _int(tokens[0], lineno)
        if node in entries:
            raise FormatError(f"line {lineno}: node {node} given twice")
        if node < 0:
            raise FormatError(f"line {lineno}: negative node index")
        entries[node] = convert(tokens[1], lineno)
    count = n if n is not None else (max(entries) + 1 if entries else 0)
    missing = [i for i in range(count) if i not in entries]
    if missing:
        raise FormatError(f"missing {what} for node(s) {missing}")
    extra = [i for i in entries if i >= count]
    if extra:
        raise FormatError(f"node(s) {sorted(extra)} out of range for {count} nodes")
    return [entries[i] for i in range(count)]


def parse_profile(text: str, node_count: int | None = None) -> StrategyProfile:
    values = _per_node(text, node_count, _rat, "probability")
    try:
        return StrategyProfile(tuple(values))
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_profile(profile: StrategyProfile) -> str:
    return "".join(f"{i} {format_rational(s)}\n" for i, s in enumerate(profile.strategies))


# -- circuits --------------------------------------------------------------

def parse_circuit(text: str) -> CircuitInstance:
    lines = _lines(text)
    _header(lines, "pc-v1")
    lineno, (n_tok,) = _keyed(lines, "nodes")
    n = _int(n_tok, lineno)
    gates = []
    for lineno, tokens in lines:
        if tokens[0] != "gate" or len(tokens) != 6:
            raise FormatError(f"line {lineno}: expected a 'gate' line")
        kind = tokens[1]
        if kind == NOR and tokens[4] == "->":
            u, v, w = (_int(t, lineno) for t in (tokens[2], tokens[3], tokens[5]))
        elif kind == PURIFY and tokens[3] == "->":
            u, v, w = (_int(t, lineno) for t in (tokens[2], tokens[4], tokens[5]))
        else:
            raise FormatError(
                f"line {lineno}: expected 'gate NOR <u> <v> -> <w>' or 'gate PURIFY <u> -> <v> <w>'"
            )
        gates.append(Gate(kind, u, v, w))
    return CircuitInstance(n, tuple(gates))


def format_circuit(instance: CircuitInstance) -> str:
    out = ["pc-v1", f"nodes {instance.node_count}"]
    for g in instance.gates:
        if g.gate_type == NOR:
            out.append(f"gate NOR {g.u} {g.v} -> {g.w}")
        else:
            out.append(f"gate PURIFY {g.u} -> {g.v} {g.w}")
    return "\n".join(out) + "\n"


_VALUE_TOKENS = {"0": Value.ZERO, "1": Value.ONE, "bot": BOT}


def _value(token: str, lineno: int) -> Value:
    try:
        return _VALUE_TOKENS[token]
    except KeyError:
        raise FormatError(f"line {lineno}: value must be 0, 1 or bot, got {token!r}") from None


def parse_assignment(text: str, node_count: int | None = None) -> Assignment:
    return Assignment(tuple(_per_node(text, node_count, _value, "value")))


def format_assignment(assignment: Assignment) -> str:
    return "".join(
        f"{i} {'bot' if v == BOT else int(v)}\n" for i, v in enumerate(assignment.values)
    )


# -- reduction maps --------------------------------------------------------

def parse_map(text: str) -> ReductionMap:
    lines = _lines(text)
    _header(lines, "map-v1")
    lineno, (p_tok,) = _keyed(lines, "price")
    price = _rat(p_tok, lineno)
    lineno, (e_tok,) = _keyed(lines, "epsilon")
    epsilon = _rat(e_tok, lineno)
    lineno, (l_tok,) = _keyed(lines, "l")
    l = _int(l_tok, lineno)
    try:
        params = ReductionParams(price, epsilon, l)
    except ValueError as exc:
        raise FormatError(f"line {lineno}: {exc}") from None
    nodes: dict[int, int] = {}
    gadgets = []
    for lineno, tokens in lines:
        if tokens[0] == "node" and len(tokens) == 3:
            orig = _int(tokens[1], lineno)
            if orig in nodes:
                raise FormatError(f"line {lineno}: circuit node {orig} mapped twice")
            nodes[orig] = _int(tokens[2], lineno)
        elif (
            tokens[0] == "gadget"
            and len(tokens) == 7 + 2 * l
            and tokens[2] == PURIFY
            and tokens[3] == "d"
            and tokens[5] == "chain"
        ):
            gadgets.append(
                PurifyGadget(
                    _int(tokens[1], lineno),
                    _int(tokens[4], lineno),
                    tuple(_int(t, lineno) for t in tokens[6:]),
                )
            )
        else:
            raise FormatError(
                f"line {lineno}: expected 'node <orig> <game>' or "
                f"'gadget <gate> PURIFY d <i> chain <{2 * l + 1} indices>'"
            )
    missing = [i for i in range(len(nodes)) if i not in nodes]
    if missing:
        raise FormatError(f"map misses circuit node(s) {missing}")
    originals = tuple(nodes[i] for i in range(len(nodes)))
    used = list(originals) + [x for g in gadgets for x in (g.d, *g.chain)]
    if len(set(used)) != len(used):
        raise FormatError("map assigns one game node to two roles")
    return ReductionMap(params, originals, tuple(gadgets))


def format_map(rmap: ReductionMap) -> str:
    prm = rmap.params
    out = [
        "map-v1",
        f"price {format_rational(prm.price)}",
        f"epsilon {format_rational(prm.epsilon)}",
        f"l {prm.chain_l}",
    ]
    out += [f"node {i} {g}" for i, g in enumerate(rmap.original_to_game)]
    for g in rmap.gadgets:
        chain = " ".join(str(c) for c in g.chain)
        out.append(f"gadget {g.gate_index} PURIFY d {g.d} chain {chain}")
    return "\n".join(out) + "\n"


def read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror or exc}") from None


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")
