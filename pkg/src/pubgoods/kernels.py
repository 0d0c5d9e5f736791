"""Backend selection and input encoding for the enumeration kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_fallback`` twin. Set ``PUBGOODS_KERNELS=python`` to force the
fallback. Every public function also takes ``backend="cython"|"python"``.

Graph encoding (CSR): the in-neighbours of node ``i`` are
``idx[offs[i]:offs[i+1]]``. An item that depends on a set of coordinates is
"ready" at the largest of them; ``ready_offs``/``ready_*`` list the items to
check once coordinate ``t`` is fixed.

Grid encoding: strategy ``s_i = k_i / D``. With ``p = pn/pd``, ``ε = en/ed``
and ``deg = |N(i)|``, ``Δu_i - ε > 0`` iff
``prod·pd·ed - pn·ed·D^deg > en·pd·D^deg`` where ``prod = ∏ (D - k_j)``, so
``scale = pd·ed``, ``B_i = pn·ed·D^deg`` and ``E_i = en·pd·D^deg``.
"""
from __future__ import annotations

import os
from array import array
from dataclasses import dataclass
from fractions import Fraction

from . import _fallback

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_INT64_SAFE = 1 << 62

if os.environ.get("PUBGOODS_KERNELS", "").lower() == "python" or _compiled is None:
    BACKEND = "python"
else:
    BACKEND = "cython"


def available_backends() -> list[str]:
    return ["python"] if _compiled is None else ["cython", "python"]


def _module(backend: str | None):
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    if backend == "python":
        return _fallback
    raise ValueError(f"unknown backend {backend!r}")


def _i64(values) -> array:
    return array("q", values)


def _csr(game):
    offs = [0]
    idx = []
    for nb in game.in_neighbors:
        idx.extend(nb)
        offs.append(len(idx))
    return offs, idx


def _ready(n: int, items) -> tuple[list[int], list[int]]:
    """``items`` is a sequence of (item_id, dependency coordinates)."""
    buckets: list[list[int]] = [[] for _ in range(n)]
    for item, deps in items:
        buckets[max(deps)].append(item)
    offs = [0]
    flat = []
    for b in buckets:
        flat.extend(b)
        offs.append(len(flat))
    return offs, flat


@dataclass(frozen=True)
class GridScan:
    accepted: list[tuple[int, ...]]
    covered: int
    backend: str


def _grid_constants(game, epsilon: Fraction, D: int):
    p = game.price
    pn, pd = p.numerator, p.denominator
    en, ed = epsilon.numerator, epsilon.denominator
    scale = pd * ed
    B = [pn * ed * D ** len(nb) for nb in game.in_neighbors]
    E = [en * pd * D ** len(nb) for nb in game.in_neighbors]
    max_deg = max((len(nb) for nb in game.in_neighbors), default=0)
    fits = D ** max_deg * (scale + pn * ed + en * pd) < _INT64_SAFE
    return scale, B, E, fits


def grid_scan(game, epsilon, denominator: int, checked=None, first_only=False, backend=None) -> GridScan:
    """Enumerate the grid ``{0, 1/D, ..., 1}^n`` lexicographically.

    A profile is accepted when every node in ``checked`` (default: all) plays
    only epsilon-best-responses. Accepted profiles are returned as numerator
    tuples.
    """
    epsilon = Fraction(epsilon)
    D = int(denominator)
    if D < 1:
        raise ValueError("grid denominator must be positive")
    n = game.node_count
    checked = range(n) if checked is None else sorted(set(checked))
    offs, idx = _csr(game)
    items = [(i, (i, *game.in_neighbors[i])) for i in checked]
    ready_offs, ready_nodes = _ready(n, items)
    scale, B, E, fits = _grid_constants(game, epsilon, D)
    subtree = [(D + 1) ** (n - 1 - t) for t in range(n)]
    name = backend or BACKEND
    if name == "cython" and backend is None and (not fits or subtree[0] * (D + 1) >= _INT64_SAFE):
        name = "python"
    if name == "cython":
        if not fits or subtree[0] * (D + 1) >= _INT64_SAFE:
            raise OverflowError("grid too large for int64 kernels")
        args = (n, D, _i64(offs), _i64(idx), _i64(ready_offs), _i64(ready_nodes),
                scale, _i64(B), _i64(E), _i64(subtree), bool(first_only))
    else:
        args = (n, D, offs, idx, ready_offs, ready_nodes, scale, B, E, subtree, bool(first_only))
    accepted, covered = _module(name).grid_scan(*args)
    return GridScan(accepted, covered, name)


def profile_violation(game, epsilon, numerators, denominator: int, backend=None) -> int:
    """First node of the grid profile ``numerators / D`` that is not an
    epsilon-best-response, or -1 when the profile is an epsilon-WSNE."""
    epsilon = Fraction(epsilon)
    D = int(denominator)
    n = game.node_count
    if len(numerators) != n:
        raise ValueError("profile length mismatch")
    offs, idx = _csr(game)
    scale, B, E, fits = _grid_constants(game, epsilon, D)
    name = backend or BACKEND
    if name == "cython" and backend is None and not fits:
        name = "python"
    if name == "cython":
        if not fits:
            raise OverflowError("profile too fine for int64 kernels")
        return _compiled.profile_violation(n, D, _i64(offs), _i64(idx), scale, _i64(B), _i64(E),
                                           _i64(numerators))
    return _fallback.profile_violation(n, D, offs, idx, scale, B, E, list(numerators))


def circuit_solutions(instance, backend=None) -> list[tuple[int, ...]]:
    """All solutions of a valid instance as tuples over {0, 1, 2=⊥}."""
    n = instance.node_count
    gates = instance.gates
    gtype = [0 if g.gate_type == "NOR" else 1 for g in gates]
    gu = [g.u for g in gates]
    gv = [g.v for g in gates]
    gw = [g.w for g in gates]
    ready_offs, ready_gates = _ready(n, [(gi, (g.u, g.v, g.w)) for gi, g in enumerate(gates)])
    mod = _module(backend)
    if mod is _compiled:
        return mod.circuit_scan(n, _i64(gtype), _i64(gu), _i64(gv), _i64(gw),
                                _i64(ready_offs), _i64(ready_gates))
    return mod.circuit_scan(n, gtype, gu, gv, gw, ready_offs, ready_gates)


def pure_ne_profiles(game, backend=None) -> list[tuple[int, ...]]:
    n = game.node_count
    offs, idx = _csr(game)
    ready_offs, ready_nodes = _ready(n, [(i, (i, *game.in_neighbors[i])) for i in range(n)])
    mod = _module(backend)
    if mod is _compiled:
        return mod.pure_scan(n, _i64(offs), _i64(idx), _i64(ready_offs), _i64(ready_nodes))
    return mod.pure_scan(n, offs, idx, ready_offs, ready_nodes)
