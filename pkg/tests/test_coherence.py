"""l1 coherence: brute force, series closed forms, freezing limits."""

import math

import pytest

from unruh_coherence import (AccelerationParameter, ContractViolation,
                             ConvergenceError, Family, FREEZING_F, Method,
                             Observer, PairKind, ScenarioConfig,
                             SeriesTolerance, TruncationPolicy,
                             bipartite_w_coherence, closed_ghz_coherence,
                             closed_w_coherence, freezing_limit, ghz_state,
                             l1_coherence, outer, partial_trace,
                             scenario_density, series_f, series_f_info,
                             transform_mode, w_state)
from reference_forms import MPMATH_F

POLICY = TruncationPolicy(epsilon_trunc=1e-10)
TOL = SeriesTolerance(rel_tol=1e-10)


def _scenario(family, s_values, names="ABC", policy=POLICY):
    observers = tuple(
        Observer(nm, AccelerationParameter(s) if s is not None else None)
        for nm, s in zip(names, s_values))
    return ScenarioConfig(family, len(observers), observers, policy)


class TestBruteForce:
    def test_ghz_projector(self):
        cv = l1_coherence(outer(ghz_state(3)))
        assert cv.value == pytest.approx(1.0, abs=1e-15)
        assert cv.method is Method.BRUTE_FORCE
        assert cv.error_budget <= 1e-14

    def test_w_projector(self):
        assert l1_coherence(outer(w_state(3))).value == pytest.approx(2.0, abs=1e-15)

    def test_diagonal_reduction_has_zero_coherence(self):
        # tracing the inertial mode out of the GHZ operator leaves a diagonal
        rho = scenario_density(_scenario(Family.GHZ, [None, 0.7, 0.4]))
        rho_bc = partial_trace(rho, {"B_I", "C_I"})
        assert l1_coherence(rho_bc).value == 0.0

    def test_region_ii_mode_rejected(self):
        psi = transform_mode(ghz_state(3, "ABC"), "B",
                             AccelerationParameter(0.5), POLICY)
        rho = outer(psi)
        with pytest.raises(ContractViolation, match="wedge II"):
            l1_coherence(rho)

    def test_error_budget_tracks_trace_deficit(self):
        rho = scenario_density(_scenario(Family.GHZ, [None, 1.0, 1.0]))
        cv = l1_coherence(rho)
        deficit = 1.0 - rho.trace()
        assert cv.error_budget == pytest.approx(10.1 * deficit)


class TestSeriesF:
    def test_at_rest(self):
        assert series_f(0.0, TOL) == 1.0

    @pytest.mark.parametrize("s,expected", sorted(MPMATH_F.items()))
    def test_against_polylog_oracle(self, s, expected):
        assert series_f(s, TOL) == pytest.approx(expected, abs=1e-9)

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0])
    def test_tail_bound_is_honest(self, s):
        info = series_f_info(s, TOL)
        assert abs(MPMATH_F[s] - info.value) <= info.tail_bound + 1e-13

    def test_strictly_decreasing(self):
        grid = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 6.0]
        values = [series_f(s, TOL) for s in grid]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_range(self):
        for s in [0.0, 0.5, 1.5, 3.0, 6.0]:
            assert FREEZING_F < series_f(s, TOL) <= 1.0

    def test_matches_brute_force_bipartite_route(self):
        # f(1) cross-checked through the accelerated-inertial reduction:
        # C(rho_{A,B_I}) = (2/3) f(w) for the tripartite W state
        cfg = _scenario(Family.W, [None, 1.0, 0.3])
        rho = scenario_density(cfg)
        pair = l1_coherence(partial_trace(rho, {"A", "B_I"}))
        assert series_f(1.0, TOL) == pytest.approx(1.5 * pair.value, abs=1e-8)

    def test_accepts_parameter_objects(self):
        assert series_f(AccelerationParameter(1.0), TOL) == series_f(1.0, TOL)

    def test_cap_exhaustion_raises_with_bound(self):
        with pytest.raises(ConvergenceError) as err:
            series_f(2.0, SeriesTolerance(rel_tol=1e-10, max_terms=5))
        assert err.value.achieved_bound > 0
        assert err.value.terms >= 5

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            SeriesTolerance(rel_tol=0.0)
        with pytest.raises(ValueError):
            SeriesTolerance(max_terms=0)


class TestClosedForms:
    def test_ghz_empty_product(self):
        cv = closed_ghz_coherence([], TOL)
        assert cv.value == 1.0
        assert cv.method is Method.CLOSED_FORM

    def test_ghz_at_rest(self):
        assert closed_ghz_coherence([0.0, 0.0], TOL).value == 1.0

    def test_ghz_matches_brute_force(self):
        cfg = _scenario(Family.GHZ, [None, 0.7, 1.2])
        brute = l1_coherence(scenario_density(cfg))
        closed = closed_ghz_coherence([0.7, 1.2], TOL)
        budget = brute.error_budget + closed.error_budget
        assert budget <= 1e-6
        assert abs(closed.value - brute.value) <= budget

    def test_w_tripartite_at_rest(self):
        assert closed_w_coherence(3, [0.0, 0.0], TOL).value == pytest.approx(2.0)

    def test_w_matches_paper_identity(self):
        # (2/3) [f(w) f(r) + f(w) + f(r)]
        w, r = 0.8, 1.4
        fw, fr = series_f(w, TOL), series_f(r, TOL)
        assert closed_w_coherence(3, [w, r], TOL).value == pytest.approx(
            (2 / 3) * (fw * fr + fw + fr), rel=1e-14)

    def test_w_five_party_matches_brute_force(self):
        cfg = _scenario(Family.W, [None, 0.6, 1.1, None, None], names="ABCDE")
        brute = l1_coherence(scenario_density(cfg))
        closed = closed_w_coherence(5, [0.6, 1.1], TOL)
        assert abs(closed.value - brute.value) <= (
            brute.error_budget + closed.error_budget)

    def test_w_rejects_too_many_parameters(self):
        with pytest.raises(ValueError, match="more accelerated"):
            closed_w_coherence(2, [0.5, 0.5, 0.5], TOL)


class TestBipartiteW:
    def test_acc_acc_matches_brute(self):
        w, r = 1.0, 0.3
        cfg = _scenario(Family.W, [None, w, r])
        rho = scenario_density(cfg)
        pair = l1_coherence(partial_trace(rho, {"B_I", "C_I"}))
        closed = bipartite_w_coherence(PairKind.ACC_ACC, 3,
                                       AccelerationParameter(w),
                                       AccelerationParameter(r), TOL)
        assert closed.value == pytest.approx(
            (2 / 3) * series_f(w, TOL) * series_f(r, TOL), rel=1e-14)
        assert abs(closed.value - pair.value) <= 1e-8

    def test_acc_inertial_at_rest_reduces(self):
        cv = bipartite_w_coherence(PairKind.ACC_INERTIAL, 3,
                                   AccelerationParameter(0.0), tol=TOL)
        assert cv.value == pytest.approx(2 / 3)

    def test_inertial_inertial(self):
        assert bipartite_w_coherence(PairKind.INERTIAL_INERTIAL, 4).value == 0.5

    def test_missing_parameters_rejected(self):
        with pytest.raises(ValueError, match="both"):
            bipartite_w_coherence(PairKind.ACC_ACC, 3, AccelerationParameter(1.0))
        with pytest.raises(ValueError, match="accelerated parameter"):
            bipartite_w_coherence(PairKind.ACC_INERTIAL, 3)


class TestFreezingLimits:
    def test_ghz_two_accelerated(self):
        assert freezing_limit(Family.GHZ, 3, 2) == pytest.approx(math.pi / 4)

    def test_ghz_independent_of_parties(self):
        assert freezing_limit(Family.GHZ, 3, 2) == freezing_limit(Family.GHZ, 9, 2)

    def test_ghz_none_accelerated(self):
        assert freezing_limit(Family.GHZ, 4, 0) == 1.0

    def test_w_tripartite(self):
        expected = (math.pi + 4 * math.sqrt(math.pi)) / 6
        assert freezing_limit(Family.W, 3, 2) == pytest.approx(expected)

    def test_w_none_accelerated(self):
        assert freezing_limit(Family.W, 5, 0) == pytest.approx(4.0)

    def test_invalid_count_rejected(self):
        with pytest.raises(ValueError):
            freezing_limit(Family.GHZ, 3, 4)

    @pytest.mark.parametrize("family,n", [(Family.GHZ, 1), (Family.GHZ, 2),
                                          (Family.W, 1), (Family.W, 2)])
    def test_closed_forms_approach_limits_at_s6(self, family, n):
        params = [6.0] * n
        if family is Family.GHZ:
            value = closed_ghz_coherence(params, TOL).value
        else:
            value = closed_w_coherence(3, params, TOL).value
        assert abs(value - freezing_limit(family, 3, n)) <= 1e-3

    def test_finite_params_stay_above_ghz_limit(self):
        for s in (0.5, 1.5, 3.0):
            value = closed_ghz_coherence([s, s], TOL).value
            assert value > freezing_limit(Family.GHZ, 3, 2)
