from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from pubgoods import (
    BOT, NOR, PURIFY, CircuitInstance, Gate, ReductionUndefined, StrategyProfile, Value,
    check_assignment, check_wsne, epsilon_best_responses, generate_random, utility_difference,
)
from pubgoods.kernels import grid_scan
from pubgoods.reduction import (
    ReductionParams, certify_params, chain_length, compile_circuit, expected_size, lift_profile,
    purify_gadget_game, verify_reduction,
)

HALF = F(1, 2)
mpmath.mp.dps = 60


@st.composite
def params(draw):
    den = draw(st.integers(2, 30))
    p = F(draw(st.integers(1, den - 1)), den)
    bound = min(p, 1 - p)
    q = F(draw(st.integers(0, 99)), 100)
    return p, q * bound


def log_formula(p, eps):
    """Ceiling of the log ratio evaluated at 60 digits, or None near an integer."""
    if eps == 0:
        return 1
    ratio = mpmath.log(mpmath.mpf(p.numerator) / p.denominator - mpmath.mpf(eps.numerator) / eps.denominator)
    ratio /= mpmath.log(mpmath.mpf(p.numerator) / p.denominator + mpmath.mpf(eps.numerator) / eps.denominator)
    if abs(ratio - mpmath.nint(ratio)) < mpmath.mpf(10) ** -40:
        return None
    return max(1, int(mpmath.ceil(ratio)))


class TestChainLength:
    @pytest.mark.parametrize("p, eps, l", [(HALF, 0, 1), (HALF, F(1, 4), 5), (HALF, F(1, 10), 2)])
    def test_examples(self, p, eps, l):
        assert chain_length(p, eps) == l

    @pytest.mark.parametrize("p, eps", [(HALF, HALF), (F(3, 10), F(3, 10)), (HALF, F(-1, 10)), (F(1), 0)])
    def test_precondition(self, p, eps):
        with pytest.raises(ValueError):
            chain_length(p, eps)

    def test_undefined_mentions_trivial_regime(self):
        with pytest.raises(ReductionUndefined, match="trivial"):
            chain_length(F(3, 10), F(7, 20))

    @given(params())
    @settings(max_examples=300)
    def test_agrees_with_log_ceiling(self, pe):
        p, eps = pe
        expected = log_formula(p, eps)
        assume(expected is not None)
        assert chain_length(p, eps) == expected

    @given(params())
    @settings(max_examples=300)
    def test_params_invariants(self, pe):
        prm = ReductionParams.of(*pe)
        base, target = prm.price + prm.epsilon, prm.price - prm.epsilon
        assert base ** prm.chain_l <= target
        assert prm.chain_l == 1 or base ** (prm.chain_l - 1) > target

    def test_params_reject_non_minimal(self):
        with pytest.raises(ValueError, match="minimal"):
            ReductionParams(HALF, F(1, 10), 3)
        with pytest.raises(ValueError):
            ReductionParams(HALF, F(1, 10), 1)


class TestCertify:
    def test_quarter(self):
        c = certify_params(HALF, F(1, 4))
        assert (c.chain_l, c.power_l, c.p_minus_eps) == (5, F(243, 1024), F(1, 4))
        assert c.power_l1_minus_p == F(729, 4096) - HALF
        assert c.ok

    def test_tenth(self):
        c = certify_params(HALF, F(1, 10))
        assert (c.chain_l, c.power_l) == (2, F(9, 25))
        assert c.ok

    def test_equality_case(self):
        c = certify_params(HALF, 0)
        assert c.chain_l == 1 and c.power_l == c.p_minus_eps == HALF and c.ok

    @given(params())
    @settings(max_examples=300)
    def test_always_holds(self, pe):
        assert certify_params(*pe).ok


class TestCompile:
    def test_loop_sizes(self, loop_compiled):
        game, rmap = loop_compiled
        assert (game.node_count, game.edge_count) == (9, 12)
        assert rmap.params.chain_l == 2
        (gadget,) = rmap.gadgets
        assert (gadget.gate_index, gadget.d, gadget.chain) == (0, 3, (4, 5, 6, 7, 8))

    def test_loop_neighbourhoods(self, loop_compiled):
        game, _ = loop_compiled
        a, b, c, d, c1, c2, c3, c4, c5 = range(9)
        nb = {i: set(game.in_neighbors[i]) for i in range(9)}
        assert nb[a] == {b, c}  # NOR(b, c -> a)
        assert nb[c1] == {a} and nb[c2] == {c1} and nb[c3] == {c2}
        assert nb[c4] == {c3} and nb[c5] == {c4}
        assert nb[c] == {c5}
        assert nb[d] == {a, c2, c4}
        assert nb[b] == {d}

    def test_nor_only(self):
        inst = generate_random(8, 1, seed=11)
        game, rmap = compile_circuit(inst, F(1, 3), F(1, 5))
        assert game.node_count == inst.node_count
        assert game.edge_count == 2 * len(inst.gates)
        assert rmap.gadgets == ()

    def test_bad_epsilon(self, loop_circuit):
        with pytest.raises(ReductionUndefined):
            compile_circuit(loop_circuit, HALF, HALF)

    def test_invalid_instance(self):
        with pytest.raises(ValueError):
            compile_circuit(CircuitInstance(3, (Gate(NOR, 0, 1, 2),)), HALF, 0)

    @given(st.integers(3, 30), st.sampled_from(["0", "1/3", "1/2", "1"]), st.integers(0, 10**6), params())
    @settings(max_examples=200, deadline=None)
    def test_size_formula_and_layout(self, n, frac, seed, pe):
        inst = generate_random(n, frac, seed)
        game, rmap = compile_circuit(inst, *pe)
        l = rmap.params.chain_l
        assert (game.node_count, game.edge_count) == expected_size(inst, l)
        assert rmap.original_to_game == tuple(range(inst.node_count))
        aux = rmap.auxiliary_nodes
        assert len(set(aux)) == len(aux)
        assert set(aux).isdisjoint(rmap.original_to_game)
        assert sorted(aux) == list(range(inst.node_count, game.node_count))
        # every circuit node's in-neighbourhood comes from its producing gate only
        for g in inst.gates:
            if g.gate_type == NOR:
                assert set(game.in_neighbors[g.w]) == {g.u, g.v}
            else:
                gad = rmap.gadget_for(inst.gates.index(g))
                assert game.in_neighbors[g.v] == (gad.d,)
                assert game.in_neighbors[g.w] == (gad.chain[-1],)


def loop_profile(**overrides):
    base = dict(a=HALF, b=HALF, c=0, d=HALF, c1=1, c2=0, c3=1, c4=0, c5=1)
    base.update(overrides)
    return StrategyProfile(tuple(base[k] for k in ("a", "b", "c", "d", "c1", "c2", "c3", "c4", "c5")))


class TestVerifyReduction:
    def test_explicit_equilibrium(self, loop_circuit, loop_compiled):
        game, _ = loop_compiled
        prof = loop_profile()
        assert {utility_difference(game, prof, i) for i in range(9)} <= {-HALF, 0, HALF}
        verdict = verify_reduction(loop_circuit, HALF, F(1, 10), prof)
        assert verdict.accepted and verdict.failed_stage is None
        assert str(verdict.assignment) == "(⊥, ⊥, 0)"

    def test_b_pure_breaks_a(self, loop_circuit):
        verdict = verify_reduction(loop_circuit, HALF, F(1, 10), loop_profile(b=0))
        assert verdict.failed_stage == "wsne"
        assert [r.player for r in verdict.game_report.violations] == [0]
        assert verdict.game_report.players[0].delta_u == HALF

    def test_all_ones(self, loop_circuit):
        verdict = verify_reduction(loop_circuit, HALF, F(1, 10), StrategyProfile.uniform(9, 1))
        assert verdict.failed_stage == "wsne"

    def test_circuit_stage_reported_for_mismatched_game(self, loop_compiled):
        """Stage 2 can only fail when the game was not compiled from this circuit."""
        other = CircuitInstance(3, (Gate(PURIFY, 2, 0, 1), Gate(NOR, 0, 1, 2)))
        verdict = verify_reduction(other, HALF, F(1, 10), loop_profile(), compiled=loop_compiled)
        assert verdict.game_report.accepted
        assert verdict.failed_stage == "circuit"
        assert verdict.circuit_report.violations[0].clause == "at least one output must be pure"


class TestLift:
    def test_examples(self, loop_compiled):
        _, rmap = loop_compiled
        prof = loop_profile(a=1, b=0, c=1)
        assert lift_profile(rmap, prof).values == (Value.ONE, Value.ZERO, Value.ONE)
        assert lift_profile(rmap, loop_profile()).values[0] == BOT
        near = loop_profile(a=F(999, 1000))
        assert lift_profile(rmap, near).values[0] == BOT
        assert lift_profile(rmap, near, F(1, 100)).values[0] == Value.ONE

    def test_tolerance_bound(self, loop_compiled):
        _, rmap = loop_compiled
        with pytest.raises(ValueError):
            lift_profile(rmap, loop_profile(), HALF)


def _gadget_profile(names, values):
    prof = [0] * len(names)
    for k, v in values.items():
        prof[names[k]] = v
    return StrategyProfile(tuple(prof))


@st.composite
def nor_params(draw):
    den = draw(st.integers(2, 20))
    p = F(draw(st.integers(1, den - 1)), den)
    eps = F(draw(st.integers(0, 99)), 100) * min(p, 1 - p)
    return p, eps


class TestGadgetForcing:
    @given(nor_params(), st.data())
    @settings(max_examples=200)
    def test_nor(self, pe, data):
        p, eps = pe
        inst = CircuitInstance(3, (Gate(NOR, 0, 1, 2), Gate(NOR, 2, 0, 1), Gate(NOR, 1, 2, 0)))
        game, _ = compile_circuit(inst, p, eps)
        other = data.draw(st.fractions(0, 1))
        w_value = data.draw(st.fractions(0, 1))
        # gate 0: inputs 0, 1 -> output 2
        assert epsilon_best_responses(game, StrategyProfile((0, 0, w_value)), 2, eps) == {1}
        assert epsilon_best_responses(game, StrategyProfile((1, other, w_value)), 2, eps) == {0}
        assert epsilon_best_responses(game, StrategyProfile((other, 1, w_value)), 2, eps) == {0}

    @pytest.mark.parametrize("p, eps", [(HALF, F(1, 10)), (HALF, F(1, 4)), (F(3, 10), F(1, 5)), (F(4, 5), F(3, 20)), (F(1, 3), 0)])
    @pytest.mark.parametrize("su", [0, 1])
    def test_purify_pure_propagation(self, p, eps, su):
        game, names = purify_gadget_game(p, eps)
        l = chain_length(p, eps)
        forced = {"u": su, "w": su, "d": 1 - su, "v": su}
        for k in range(1, 2 * l + 2):
            forced[f"c{k}"] = su if k % 2 == 0 else 1 - su
        prof = _gadget_profile(names, forced)
        d = names["d"]
        assert utility_difference(game, prof, d) == (1 - su) ** (l + 1) - p
        for name, value in forced.items():
            if name == "u":
                continue
            assert epsilon_best_responses(game, prof, names[name], eps) == {value}, name

    @pytest.mark.parametrize("p, eps, D", [(HALF, F(1, 10), 4), (HALF, F(1, 4), 2), (F(2, 5), F(1, 10), 5)])
    def test_purify_garbage_propagation(self, p, eps, D):
        game, names = purify_gadget_game(p, eps)
        l = chain_length(p, eps)
        checked = [i for i in range(game.node_count) if i != names["u"]]
        scan = grid_scan(game, eps, D, checked=checked)
        assert scan.covered == (D + 1) ** game.node_count
        lo, hi = 1 - p - eps, 1 - p + eps
        garbage_seen = 0
        for k in scan.accepted:
            s = [F(x, D) for x in k]
            if s[names["w"]] in (0, 1):
                continue
            garbage_seen += 1
            tracked = ["u", f"c{2 * l + 1}"] + [f"c{2 * j}" for j in range(1, l + 1)]
            for name in tracked:
                assert lo <= s[names[name]] <= hi, name
            assert s[names["v"]] == 1
        # make sure the branch is exercised when the grid can represent garbage
        if any(lo <= F(x, D) <= hi and 0 < F(x, D) < 1 for x in range(D + 1)):
            assert garbage_seen > 0


class TestSoundness:
    def test_loop_grid(self, loop_circuit, loop_compiled):
        game, rmap = loop_compiled
        scan = grid_scan(game, F(1, 10), 4)
        assert scan.accepted
        for k in scan.accepted:
            prof = StrategyProfile(tuple(F(x, 4) for x in k))
            assert check_wsne(game, prof, F(1, 10)).accepted
            assert check_assignment(loop_circuit, lift_profile(rmap, prof)).accepted

    @pytest.mark.parametrize("seed", range(8))
    def test_random_small_circuits(self, seed):
        inst = generate_random(3 + seed % 3, ["1", "1/2"][seed % 2], seed)
        p, eps = [(HALF, F(1, 10)), (F(1, 3), F(1, 10)), (F(3, 5), F(1, 10))][seed % 3]
        game, rmap = compile_circuit(inst, p, eps)
        D = 2 if 3 ** game.node_count <= 2 * 10**6 else 1
        assert (D + 1) ** game.node_count <= 2 * 10**6
        scan = grid_scan(game, eps, D)
        for k in scan.accepted:
            prof = StrategyProfile(tuple(F(x, D) for x in k))
            assert check_assignment(inst, lift_profile(rmap, prof)).accepted
