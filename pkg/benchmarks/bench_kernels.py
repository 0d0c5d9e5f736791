"""Compare the compiled and pure-Python enumeration kernels.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each case runs on every available backend; results must agree, and the
table reports the best wall time per backend and the speedup.
"""
import argparse
import random
import sys
import time
from fractions import Fraction as F

from pubgoods import Game, compile_circuit, generate_random, kernels
from pubgoods.reduction import purify_gadget_game


def _purify_grid(D):
    game, names = purify_gadget_game(F(1, 2), F(1, 10))
    checked = [i for i in range(game.node_count) if i != names["u"]]
    return lambda backend: kernels.grid_scan(game, F(1, 10), D, checked=checked, backend=backend).accepted


def _loop_grid(D):
    from pubgoods import NOR, PURIFY, CircuitInstance, Gate

    loop = CircuitInstance(3, (Gate(PURIFY, 0, 1, 2), Gate(NOR, 1, 2, 0)))
    game, _ = compile_circuit(loop, F(1, 2), F(1, 10))
    return lambda backend: kernels.grid_scan(game, F(1, 10), D, backend=backend).accepted


def _circuit(n, seed=7):
    inst = generate_random(n, "1/2", seed)
    return lambda backend: kernels.circuit_solutions(inst, backend=backend)


def _pure(n, seed=3):
    rng = random.Random(seed)
    edges = [(a, b) for a in range(n) for b in range(n) if a != b and rng.random() < 3 / n]
    game = Game.from_edges(n, edges, F(1, 3))
    return lambda backend: kernels.pure_ne_profiles(game, backend=backend)


def cases(quick):
    if quick:
        return [
            ("PURIFY gadget grid D=4 (9 nodes)", _purify_grid(4)),
            ("circuit brute force n=9", _circuit(9)),
            ("pure NE enumeration n=14", _pure(14)),
        ]
    return [
        ("PURIFY gadget grid D=4 (9 nodes)", _purify_grid(4)),
        ("PURIFY gadget grid D=12 (9 nodes)", _purify_grid(12)),
        ("compiled loop game grid D=4", _loop_grid(4)),
        ("circuit brute force n=12", _circuit(12)),
        ("pure NE enumeration n=20", _pure(20)),
    ]


def best_time(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)} (default {kernels.BACKEND})")
    header = f"{'case':38}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, run in cases(args.quick):
        times, results = {}, {}
        for b in backends:
            times[b], results[b] = best_time(lambda: run(b), args.repeat)
        if len({repr(r) for r in results.values()}) != 1:
            print(f"{name}: backends disagree", file=sys.stderr)
            return 1
        row = f"{name:38}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
        if len(backends) > 1:
            row += f"{times['python'] / max(times['cython'], 1e-9):>9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
