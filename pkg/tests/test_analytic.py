from __future__ import annotations

import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybrid3sat.analytic import (
    SUCCESS_TARGET,
    grover_iterations,
    hamming_amp,
    hamming_t_alpha,
    p_sol,
    plan_cyclical,
    plan_hamming,
    round_half_away,
)

from oracles import GROVER_TABLE, mp_hamming_amp, mp_t_alpha, ring_distance


def test_grover_table():
    assert {n: grover_iterations(n) for n in GROVER_TABLE} == GROVER_TABLE


def test_grover_errors():
    with pytest.raises(ValueError):
        grover_iterations(0)


def test_round_half_away():
    assert [round_half_away(x) for x in (0.5, 1.5, 2.5, -0.5, -1.5, 2.49)] == [1, 2, 3, -1, -2, 2]


class TestHammingAmp:
    def test_n7_k1(self):
        amp = hamming_amp(7, 1, 1)
        assert amp == pytest.approx(float(mp_hamming_amp(7, 1, 1)), abs=1e-15)
        assert amp == pytest.approx(0.23803, abs=5e-5)

    def test_antipode(self):
        assert hamming_amp(5, 5, 5) == 1.0

    @pytest.mark.parametrize("n", range(1, 13))
    def test_mpmath_all(self, n):
        for k in range(1, n + 1):
            for k_f in range(n + 1):
                assert hamming_amp(n, k, k_f) == pytest.approx(float(mp_hamming_amp(n, k, k_f)), rel=1e-13, abs=1e-300)

    def test_errors(self):
        with pytest.raises(ValueError):
            hamming_amp(5, 0, 1)
        with pytest.raises(ValueError):
            hamming_amp(5, 1, 6)


class TestTAlpha:
    def test_n7_k1(self):
        real, t = hamming_t_alpha(7, 1, 1)
        assert real == pytest.approx(float(mp_t_alpha(7, 1, 1)), abs=1e-12)
        assert real == pytest.approx(2.7676, abs=2e-3)
        assert t == 3

    def test_amp_one_floors_to_zero(self):
        real, t = hamming_t_alpha(4, 4, 4)
        assert real == pytest.approx(0.0, abs=1e-15)
        assert t == 0

    def test_unreachable(self):
        with pytest.raises(ValueError):
            hamming_t_alpha(4, 4, 2)

    @pytest.mark.parametrize("n", range(2, 23))
    def test_mpmath_diagonal(self, n):
        for k in range(1, n):
            real, t = hamming_t_alpha(n, k, k)
            ref = mp_t_alpha(n, k, k)
            assert real == pytest.approx(float(ref), rel=1e-11)
            assert t == max(0, int(mpmath.floor(ref + mpmath.mpf(1) / 2)))


class TestPSol:
    def test_n7(self):
        assert p_sol(1, 1, 7) == pytest.approx(0.98762367, abs=1e-8)
        assert p_sol(1, 1, 7) >= SUCCESS_TARGET

    def test_single_factor(self):
        amp = hamming_amp(9, 1, 3)
        t = hamming_t_alpha(9, 1, 1)[1]
        assert p_sol(1, 3, 9) == pytest.approx(math.sin((2 * t + 1) * math.asin(amp)) ** 2)

    @given(st.integers(2, 22).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
    def test_monotone(self, args):
        n, k_f = args
        vals = [p_sol(k, k_f, n) for k in range(1, n + 1)]
        assert all(0 <= v <= 1 for v in vals)
        assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))

    def test_errors(self):
        with pytest.raises(ValueError):
            p_sol(0, 1, 5)


class TestPlanHamming:
    def test_n7_kf1(self):
        plan = plan_hamming(7, 1)
        assert (plan.k_i, plan.total_unknown, plan.total_known) == (1, 3, 3)
        assert not plan.capped

    def test_solved(self):
        plan = plan_hamming(9, 0)
        assert plan.total_unknown == plan.total_known == 0 and plan.k_i == 0

    def test_errors(self):
        with pytest.raises(ValueError):
            plan_hamming(5, 6)

    @pytest.mark.parametrize("n", range(1, 23))
    def test_invariants(self, n):
        for k_f in range(1, n + 1):
            plan = plan_hamming(n, k_f)
            assert plan.total_unknown == sum(s.t for s in plan.per_k)
            assert plan.total_known <= plan.total_unknown
            assert [s.k for s in plan.per_k] == list(range(1, plan.k_i + 1))
            for s in plan.per_k:
                assert 0 < s.theta <= math.pi / 2 or (s.theta == 0 and s.p_hit == 0)
                assert 0 <= s.p_hit <= 1
            assert plan.p_sol == pytest.approx(p_sol(plan.k_i, k_f, n))
            assert plan.p_sol >= SUCCESS_TARGET and not plan.capped
            if plan.k_i > 1:
                assert p_sol(plan.k_i - 1, k_f, n) < SUCCESS_TARGET

    def test_to_dict(self):
        d = plan_hamming(7, 2).to_dict()
        assert d["k_f"] == 2 and [s["k"] for s in d["per_k"]] == list(range(1, d["k_i"] + 1))


class TestPlanCyclical:
    def test_uniform_iterations(self):
        assert plan_cyclical(7, 0, 1, r=6).t_r == 6

    def test_n5_example(self):
        plan = plan_cyclical(5, 10, 2, r=4)
        assert (plan.d_f, plan.direction, plan.s_f, plan.t_r) == (8, "gamma>=tau", 2, 3)
        assert plan.total_unknown == 9 and plan.total_executions_only == 6 and plan.total_known == 3

    def test_equal_states(self):
        plan = plan_cyclical(6, 9, 9, r=3)
        assert plan.s_f == 1

    def test_default_r_and_wrap_flag(self):
        plan = plan_cyclical(6, 1, 62)
        assert plan.r == 5 and plan.wraps and plan.d_f == 3
        assert not plan_cyclical(6, 30, 20).wraps

    def test_errors(self):
        with pytest.raises(ValueError):
            plan_cyclical(4, 0, 1, r=5)
        with pytest.raises(ValueError):
            plan_cyclical(4, 0, 16)

    @given(st.integers(1, 12).flatmap(lambda n: st.tuples(
        st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1), st.integers(1, n))))
    def test_formula(self, args):
        n, g, t, r = args
        plan = plan_cyclical(n, g, t, r)
        d = ring_distance(g, t, n)
        half = 2 ** (r - 1)
        expected = math.ceil((d + 1) / half) if g >= t else math.ceil(d / half)
        assert plan.d_f == d and plan.s_f == expected
        assert plan.total_unknown == (plan.s_f + 1) * plan.t_r
        assert plan.total_known <= plan.total_unknown
        assert plan.t_r == grover_iterations(r)

    @given(st.integers(2, 10).flatmap(lambda n: st.tuples(
        st.just(n), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1), st.integers(0, 2**n - 1))))
    def test_translation_when_branch_kept(self, args):
        n, g, t, c = args
        size = 2**n
        g2, t2 = (g + c) % size, (t + c) % size
        a, b = plan_cyclical(n, g, t), plan_cyclical(n, g2, t2)
        if (g >= t) == (g2 >= t2):
            assert a.total_unknown == b.total_unknown
