"""Command-line front end.

Exit codes: 0 success/accepted, 1 rejected or no solution, 2 usage or
format error. ``--report <path>`` writes a JSON version of the printed report.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import formats
from .circuit import BOT, InvalidInstance, check_assignment, generate_random, require_valid, solve_bruteforce
from .errors import FormatError, NoTrivialEquilibrium
from .game import check_epsilon_ne, check_pure_ne, check_wsne, trivial_wsne
from .rational import parse_rational
from .reduction import certify_params, compile_circuit, lift_profile, verify_reduction
from .solvers import SolverConfig, solve_dynamics, solve_grid, solve_pure_enum

OK, REJECTED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class CommandOutcome:
    exit_code: int
    lines: list[str] = field(default_factory=list)
    report: dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fr(x) -> str:
    return str(Fraction(x))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="PATH", help="write a JSON report here")

    parser = _Parser(prog="pubgoods", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compile", parents=[common], help="compile a circuit into a game")
    p.add_argument("--circuit", required=True)
    p.add_argument("--price", required=True, type=_rational_arg)
    p.add_argument("--epsilon", required=True, type=_rational_arg)
    p.add_argument("--game-out", required=True)
    p.add_argument("--map-out", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a profile against a game")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--epsilon", type=_rational_arg, default=Fraction(0))
    p.add_argument("--mode", choices=("wsne", "ne", "pure"), default="wsne")

    p = sub.add_parser("solve", parents=[common], help="search for an equilibrium")
    p.add_argument("--game", required=True)
    p.add_argument("--epsilon", required=True, type=_rational_arg)
    p.add_argument("--method", choices=("pure", "grid", "dynamics"), required=True)
    p.add_argument("--grid-denominator", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--max-iters", type=int, default=700)
    p.add_argument("--damping", type=_rational_arg, default=Fraction(1, 2))
    p.add_argument("--rational-denominator", type=int, default=1000)
    p.add_argument("--map", help="reduction map, for structure-aware dynamics seeding")
    p.add_argument("--circuit", help="circuit behind --map")
    p.add_argument("--profile-out", required=True)

    p = sub.add_parser("lift", parents=[common], help="read a circuit assignment off a profile")
    p.add_argument("--map", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--tolerance", type=_rational_arg, default=Fraction(0))
    p.add_argument("--assignment-out", required=True)

    p = sub.add_parser("verify-reduction", parents=[common],
                       help="check a game profile and its lifted circuit assignment")
    p.add_argument("--circuit", required=True)
    p.add_argument("--price", required=True, type=_rational_arg)
    p.add_argument("--epsilon", required=True, type=_rational_arg)
    p.add_argument("--profile", required=True)

    p = sub.add_parser("check-circuit", parents=[common], help="check an assignment")
    p.add_argument("--circuit", required=True)
    p.add_argument("--assignment", required=True)

    p = sub.add_parser("solve-circuit", parents=[common], help="enumerate all circuit solutions")
    p.add_argument("--circuit", required=True)
    p.add_argument("--limit", type=int, default=12)
    p.add_argument("--assignment-out", help="write the first solution here")

    p = sub.add_parser("gen-circuit", parents=[common], help="generate a random circuit")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--nor-fraction", type=_rational_arg, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("trivial", parents=[common], help="all-ones or all-zeros equilibrium")
    p.add_argument("--game", required=True)
    p.add_argument("--epsilon", required=True, type=_rational_arg)
    p.add_argument("--profile-out", required=True)

    p = sub.add_parser("certify-params", parents=[common], help="chain length certificate")
    p.add_argument("--price", required=True, type=_rational_arg)
    p.add_argument("--epsilon", required=True, type=_rational_arg)
    return parser


def _load_circuit(path):
    instance = formats.parse_circuit(formats.read_text(path))
    try:
        require_valid(instance)
    except InvalidInstance as exc:
        raise FormatError(f"invalid circuit {path}: {exc}") from None
    return instance


def _player_lines(report) -> list[str]:
    out = []
    for r in report.players:
        status = f"VIOLATION: {r.violation}" if r.violation else "ok"
        out.append(f"  player {r.player}: Δu={_fr(r.delta_u)} {status}")
    return out


def _player_json(report) -> list[dict]:
    return [
        {
            "player": r.player,
            "delta_u": _fr(r.delta_u),
            "support": sorted(r.support),
            "best_responses": sorted(r.best_responses),
            "violation": r.violation,
        }
        for r in report.players
    ]


def _cmd_compile(args) -> CommandOutcome:
    instance = _load_circuit(args.circuit)
    game, rmap = compile_circuit(instance, args.price, args.epsilon)
    formats.write_text(args.game_out, formats.format_game(game))
    formats.write_text(args.map_out, formats.format_map(rmap))
    lines = [
        f"compiled {instance.node_count} circuit nodes, {len(instance.gates)} gates",
        f"l={rmap.params.chain_l} game nodes={game.node_count} edges={game.edge_count}",
    ]
    return CommandOutcome(OK, lines, {
        "chain_l": rmap.params.chain_l, "nodes": game.node_count, "edges": game.edge_count,
    })


def _cmd_verify(args) -> CommandOutcome:
    game = formats.parse_game(formats.read_text(args.game))
    profile = formats.parse_profile(formats.read_text(args.profile), game.node_count)
    if args.mode == "pure":
        if any(s not in (0, 1) for s in profile.strategies):
            raise UsageError("--mode pure needs a profile with values 0 or 1 only")
        report = check_pure_ne(game, [int(s) for s in profile.strategies])
        label = "pure NE"
    elif args.mode == "ne":
        report = check_epsilon_ne(game, profile, args.epsilon)
        label = f"{_fr(args.epsilon)}-NE"
    else:
        report = check_wsne(game, profile, args.epsilon)
        label = f"{_fr(args.epsilon)}-WSNE"
    verdict = "accepted" if report.accepted else "rejected"
    lines = [f"{label}: {verdict}"] + _player_lines(report)
    return CommandOutcome(OK if report.accepted else REJECTED, lines, {
        "mode": args.mode, "epsilon": _fr(args.epsilon), "verdict": verdict,
        "players": _player_json(report),
    })


def _cmd_solve(args) -> CommandOutcome:
    game = formats.parse_game(formats.read_text(args.game))
    method = {"pure": "pure_enum"}.get(args.method, args.method)
    try:
        config = SolverConfig(
            method=method, grid_denominator=args.grid_denominator, max_iterations=args.max_iters,
            restarts=args.restarts, damping=args.damping, seed=args.seed,
            float_rationalization_denominator=args.rational_denominator,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    extra = {}
    if method == "pure_enum":
        found = solve_pure_enum(game)
        extra["pure_equilibria"] = ["".join(str(a) for a in f.actions) for f in found]
        profile = found[0].embed() if found else None
    elif method == "grid":
        profile = solve_grid(game, args.epsilon, config)
    else:
        rmap = circuit = None
        if args.map or args.circuit:
            if not (args.map and args.circuit):
                raise UsageError("--map and --circuit must be given together")
            rmap = formats.parse_map(formats.read_text(args.map))
            circuit = _load_circuit(args.circuit)
        profile = solve_dynamics(game, args.epsilon, config, reduction_map=rmap, circuit=circuit)
    if profile is None:
        return CommandOutcome(REJECTED, [f"{args.method}: no equilibrium found"],
                              {"method": args.method, "verdict": "none", **extra})
    # re-check at the command boundary too
    if method == "pure_enum":
        report = check_wsne(game, profile, 0)
    else:
        report = check_wsne(game, profile, args.epsilon)
    if not report.accepted:
        raise RuntimeError("solver returned an unverified profile")
    formats.write_text(args.profile_out, formats.format_profile(profile))
    values = " ".join(_fr(s) for s in profile.strategies)
    lines = [f"{args.method}: found verified equilibrium", f"  profile: {values}"]
    if "pure_equilibria" in extra:
        lines.append(f"  pure equilibria: {len(extra['pure_equilibria'])}")
    return CommandOutcome(OK, lines, {
        "method": args.method, "verdict": "found",
        "profile": [_fr(s) for s in profile.strategies], **extra,
    })


def _cmd_lift(args) -> CommandOutcome:
    rmap = formats.parse_map(formats.read_text(args.map))
    profile = formats.parse_profile(formats.read_text(args.profile))
    try:
        assignment = lift_profile(rmap, profile, args.tolerance)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    formats.write_text(args.assignment_out, formats.format_assignment(assignment))
    lines = [f"assignment: {assignment}"]
    if args.tolerance:
        lines.append("  note: tolerance > 0 is heuristic; soundness holds only for tolerance 0")
    return CommandOutcome(OK, lines, {
        "assignment": [str(v) if v != BOT else "bot" for v in assignment.values],
        "tolerance": _fr(args.tolerance),
    })


def _cmd_verify_reduction(args) -> CommandOutcome:
    instance = _load_circuit(args.circuit)
    game, rmap = compile_circuit(instance, args.price, args.epsilon)
    profile = formats.parse_profile(formats.read_text(args.profile), game.node_count)
    verdict = verify_reduction(instance, args.price, args.epsilon, profile, compiled=(game, rmap))
    stage1 = "accepted" if verdict.game_report.accepted else "rejected"
    lines = [f"stage 1 ({_fr(args.epsilon)}-WSNE of compiled game): {stage1}"]
    lines += _player_lines(verdict.game_report)
    report = {"stage1": stage1, "players": _player_json(verdict.game_report)}
    if verdict.circuit_report is not None:
        stage2 = "accepted" if verdict.circuit_report.accepted else "rejected"
        lines.append(f"stage 2 (lifted assignment {verdict.assignment}): {stage2}")
        lines += [f"  gate {r.gate_index}: {r.clause}" for r in verdict.circuit_report.violations]
        report["stage2"] = stage2
        report["assignment"] = [str(v) if v != BOT else "bot" for v in verdict.assignment.values]
    failed = verdict.failed_stage
    lines.append("reduction verified" if failed is None else f"first failing stage: {failed}")
    report["failed_stage"] = failed
    return CommandOutcome(OK if failed is None else REJECTED, lines, report)


def _cmd_check_circuit(args) -> CommandOutcome:
    instance = _load_circuit(args.circuit)
    assignment = formats.parse_assignment(formats.read_text(args.assignment), instance.node_count)
    report = check_assignment(instance, assignment)
    verdict = "accepted" if report.accepted else "rejected"
    lines = [f"assignment {assignment}: {verdict}"]
    lines += [f"  gate {r.gate_index} {instance.gates[r.gate_index]}: {r.clause}"
              for r in report.violations]
    return CommandOutcome(OK if report.accepted else REJECTED, lines, {
        "verdict": verdict,
        "violations": [{"gate": r.gate_index, "clause": r.clause} for r in report.violations],
    })


def _cmd_solve_circuit(args) -> CommandOutcome:
    instance = _load_circuit(args.circuit)
    if instance.node_count > args.limit:
        raise UsageError(f"instance has {instance.node_count} nodes, above --limit {args.limit}")
    solutions = solve_bruteforce(instance, args.limit)
    lines = [f"{len(solutions)} solution(s)"] + [f"  {s}" for s in solutions]
    if solutions and args.assignment_out:
        formats.write_text(args.assignment_out, formats.format_assignment(solutions[0]))
    return CommandOutcome(OK if solutions else REJECTED, lines, {
        "solutions": ["".join("b" if v == BOT else str(int(v)) for v in s.values)
                      for s in solutions],
    })


def _cmd_gen_circuit(args) -> CommandOutcome:
    try:
        instance = generate_random(args.nodes, args.nor_fraction, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    formats.write_text(args.out, formats.format_circuit(instance))
    counts = instance.gate_counts
    lines = [f"generated {instance.node_count} nodes: {counts['NOR']} NOR, {counts['PURIFY']} PURIFY"]
    return CommandOutcome(OK, lines, {"nodes": instance.node_count, **counts})


def _cmd_trivial(args) -> CommandOutcome:
    game = formats.parse_game(formats.read_text(args.game))
    try:
        profile = trivial_wsne(game, args.epsilon)
    except NoTrivialEquilibrium as exc:
        return CommandOutcome(REJECTED, [str(exc)], {"verdict": "none"})
    if not check_wsne(game, profile, args.epsilon).accepted:
        raise RuntimeError("trivial profile failed verification")
    formats.write_text(args.profile_out, formats.format_profile(profile))
    which = "all-ones" if profile.strategies[0] == 1 else "all-zeros"
    return CommandOutcome(OK, [f"trivial {_fr(args.epsilon)}-WSNE: {which}"], {"profile": which})


def _cmd_certify(args) -> CommandOutcome:
    cert = certify_params(args.price, args.epsilon)
    mark = {True: "✓", False: "✗"}
    l = cert.chain_l
    lines = [
        f"p={_fr(cert.price)} ε={_fr(cert.epsilon)} l={l}",
        f"  (p+ε)^{l} = {_fr(cert.power_l)} <= p-ε = {_fr(cert.p_minus_eps)} {mark[cert.chain_holds]}",
        f"  minimality: l=1 or (p+ε)^{l - 1} > p-ε {mark[cert.minimal]}",
        f"  (p+ε)^{l + 1} - p = {_fr(cert.power_l1_minus_p)} < -ε = {_fr(-cert.epsilon)} "
        f"{mark[cert.d_forced_zero]}",
    ]
    return CommandOutcome(OK if cert.ok else REJECTED, lines, {
        "price": _fr(cert.price), "epsilon": _fr(cert.epsilon), "l": l,
        "power_l": _fr(cert.power_l), "p_minus_eps": _fr(cert.p_minus_eps),
        "power_l1_minus_p": _fr(cert.power_l1_minus_p),
        "chain_holds": cert.chain_holds, "minimal": cert.minimal,
        "d_forced_zero": cert.d_forced_zero,
    })


COMMANDS = {
    "compile": _cmd_compile,
    "verify": _cmd_verify,
    "solve": _cmd_solve,
    "lift": _cmd_lift,
    "verify-reduction": _cmd_verify_reduction,
    "check-circuit": _cmd_check_circuit,
    "solve-circuit": _cmd_solve_circuit,
    "gen-circuit": _cmd_gen_circuit,
    "trivial": _cmd_trivial,
    "certify-params": _cmd_certify,
}


def execute(argv: Sequence[str]) -> CommandOutcome:
    """Parse and run one command without touching stdout."""
    args = None
    try:
        args = build_parser().parse_args(list(argv))
        outcome = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        # FormatError, BudgetExceeded, InvalidInstance and ReductionUndefined
        # are ValueErrors; the last one's message names the trivial regime
        outcome = CommandOutcome(USAGE, [f"error: {exc}"], {"error": str(exc)})
    outcome.report.setdefault("exit_code", outcome.exit_code)
    if args is not None and args.command:
        outcome.report.setdefault("command", args.command)
    if args is not None and getattr(args, "report", None):
        formats.write_text(args.report, json.dumps(outcome.report, indent=2, sort_keys=True,
                                                   ensure_ascii=False) + "\n")
    return outcome


def run(argv: Sequence[str] | None = None, stdout=None) -> CommandOutcome:
    outcome = execute(sys.argv[1:] if argv is None else argv)
    if outcome.exit_code == USAGE:
        sys.stderr.write(outcome.text)
    else:
        (stdout or sys.stdout).write(outcome.text)
    return outcome


def main() -> None:
    sys.exit(run().exit_code)


if __name__ == "__main__":
    main()
