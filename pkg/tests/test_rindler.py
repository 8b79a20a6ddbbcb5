"""The Unruh substitution and its truncation control."""

import math
import warnings

import numpy as np
import pytest

from unruh_coherence import (AccelerationParameter, ConfigurationError,
                             ModeLabel, PhysicalAcceleration, PureState,
                             Region, TruncationCapWarning, TruncationPolicy,
                             UnsupportedInputError, acceleration_parameter,
                             ghz_state, one_particle_tail, transform_mode,
                             truncation_level, unruh_one_particle,
                             unruh_vacuum, vacuum_tail, w_state)
from reference_forms import N_MAX_S1_EPS1E10, S_AT_A_EQ_2PI_OMEGA

POLICY = TruncationPolicy(epsilon_trunc=1e-10)
MODE_I = ModeLabel("B_I", Region.RINDLER_I)
MODE_II = ModeLabel("B_II", Region.RINDLER_II)


class TestAccelerationParameter:
    def test_defining_formula_at_reference_point(self):
        # a = 2*pi*omega => s = asinh(1/sqrt(e-1)), frozen at build time
        param = acceleration_parameter(PhysicalAcceleration(2 * math.pi, 1.0))
        assert param.s == pytest.approx(S_AT_A_EQ_2PI_OMEGA, abs=1e-15)
        assert not param.underflowed

    def test_vanishes_for_small_acceleration(self):
        param = acceleration_parameter(PhysicalAcceleration(0.05, 1.0))
        assert 0 < param.s < 1e-20

    def test_monotone_unbounded_in_acceleration(self):
        values = [acceleration_parameter(PhysicalAcceleration(a, 1.0)).s
                  for a in np.geomspace(0.5, 1e6, 25)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert values[-1] > 1.0

    def test_underflow_flagged_not_raised(self):
        param = acceleration_parameter(PhysicalAcceleration(1e-4, 100.0))
        assert param.s == 0.0
        assert param.underflowed

    @pytest.mark.parametrize("a,omega", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
    def test_nonpositive_inputs_rejected(self, a, omega):
        with pytest.raises(ValueError):
            acceleration_parameter(PhysicalAcceleration(a, omega))

    def test_infinite_s_rejected(self):
        with pytest.raises(ValueError):
            AccelerationParameter(math.inf)
        with pytest.raises(ValueError):
            AccelerationParameter(-0.5)


class TestTruncationLevel:
    def test_zero_acceleration_needs_no_excitation(self):
        assert truncation_level(AccelerationParameter(0.0), POLICY) == 0

    def test_frozen_regression_at_s1(self):
        n_max = truncation_level(AccelerationParameter(1.0), POLICY)
        assert n_max == N_MAX_S1_EPS1E10
        # smallest such level: one below must violate the tolerance
        assert one_particle_tail(1.0, n_max) <= 1e-10
        assert one_particle_tail(1.0, n_max - 1) > 1e-10

    def test_loose_tolerance_gives_zero(self):
        policy = TruncationPolicy(epsilon_trunc=0.9)
        assert truncation_level(AccelerationParameter(0.5), policy) == 0

    def test_hard_cap_binds_with_warning(self):
        policy = TruncationPolicy(epsilon_trunc=1e-10, hard_cap=10)
        with pytest.warns(TruncationCapWarning):
            assert truncation_level(AccelerationParameter(2.0), policy) == 10

    def test_tail_formula_equals_direct_remainder(self):
        # closed form of sum_{n>M} (n+1) tanh^{2n} / cosh^4
        for s, M in [(0.7, 5), (1.0, 20), (2.0, 50)]:
            q = math.tanh(s) ** 2
            direct = sum((n + 1) * q ** n for n in range(M + 1, 6000))
            direct /= math.cosh(s) ** 4
            assert one_particle_tail(s, M) == pytest.approx(direct, rel=1e-10)

    def test_policy_validation(self):
        with pytest.raises(ValueError):
            TruncationPolicy(epsilon_trunc=0.0)
        with pytest.raises(ValueError):
            TruncationPolicy(hard_cap=0)


class TestUnruhStates:
    def test_vacuum_at_rest_is_exact(self):
        psi = unruh_vacuum(AccelerationParameter(0.0), POLICY, MODE_I, MODE_II)
        assert dict(psi.items()) == {(0, 0): 1.0}

    def test_vacuum_amplitudes_geometric(self):
        s = AccelerationParameter(0.5)
        psi = unruh_vacuum(s, POLICY, MODE_I, MODE_II)
        amp = {k: v for k, v in psi.items()}
        n_max = truncation_level(s, POLICY)
        assert amp[(0, 0)] == pytest.approx(1 / math.cosh(0.5))
        for n in range(1, n_max + 1):
            assert amp[(n, n)] / amp[(n - 1, n - 1)] == pytest.approx(math.tanh(0.5))

    def test_vacuum_norm_equals_geometric_tail(self):
        s = AccelerationParameter(1.0)
        psi = unruh_vacuum(s, POLICY, MODE_I, MODE_II)
        n_max = truncation_level(s, POLICY)
        assert psi.norm_squared() == pytest.approx(
            1.0 - vacuum_tail(1.0, n_max), abs=1e-14)
        assert 1.0 - psi.norm_squared() <= 1e-10

    def test_one_particle_at_rest_is_exact(self):
        psi = unruh_one_particle(AccelerationParameter(0.0), POLICY, MODE_I, MODE_II)
        assert dict(psi.items()) == {(1, 0): 1.0}

    def test_one_particle_norm_within_tail(self):
        # truncated Eq.-(17)-type sum reaches 1 within the closed-form bound,
        # up to the float accumulation slack of the norm itself
        policy = TruncationPolicy(epsilon_trunc=1e-10, hard_cap=100_000)
        for s in (0.5, 1.0, 2.0, 4.0):
            psi = unruh_one_particle(AccelerationParameter(s), policy, MODE_I, MODE_II)
            n_max = truncation_level(AccelerationParameter(s), policy)
            deficit = 1.0 - psi.norm_squared()
            slack = len(psi) * 2.3e-16
            assert -slack <= deficit <= one_particle_tail(s, n_max) + slack

    def test_one_particle_amplitude_ratio(self):
        s = AccelerationParameter(0.8)
        psi = unruh_one_particle(s, POLICY, MODE_I, MODE_II)
        amp = dict(psi.items())
        for n in range(1, 10):
            ratio = amp[(n + 1, n)] / amp[(n, n - 1)]
            assert ratio == pytest.approx(math.tanh(0.8) * math.sqrt((n + 1) / n))

    def test_wrong_region_tags_rejected(self):
        s = AccelerationParameter(0.5)
        with pytest.raises(ConfigurationError, match="RINDLER_I"):
            unruh_vacuum(s, POLICY, ModeLabel("x"), MODE_II)
        with pytest.raises(ConfigurationError, match="RINDLER_II"):
            unruh_one_particle(s, POLICY, MODE_I, ModeLabel("y", Region.RINDLER_I))


def _ghz_abc():
    return ghz_state(3, "ABC")


class TestTransformMode:
    def test_ghz_coefficient_pattern(self):
        # transformed GHZ amplitudes: (1/sqrt2) tanh^m(w) tanh^n(r) times
        # sech(w) sech(r) on |0 m n>|m n> and
        # sqrt((m+1)(n+1)) sech^2(w) sech^2(r) on |1 m+1 n+1>|m n>
        w, r = 0.5, 0.5
        psi = transform_mode(_ghz_abc(), "B", AccelerationParameter(w), POLICY)
        psi = transform_mode(psi, "C", AccelerationParameter(r), POLICY)
        assert psi.mode_names() == ("A", "B_I", "C_I", "B_II", "C_II")
        amp = dict(psi.items())
        pref = 1 / math.sqrt(2)
        for m, n in [(0, 0), (1, 0), (2, 3)]:
            base = pref * math.tanh(w) ** m * math.tanh(r) ** n
            low = base / (math.cosh(w) * math.cosh(r))
            high = (base * math.sqrt((m + 1) * (n + 1))
                    / (math.cosh(w) * math.cosh(r)) ** 2)
            assert amp[(0, m, n, m, n)] == pytest.approx(low, rel=1e-14)
            assert amp[(1, m + 1, n + 1, m, n)] == pytest.approx(high, rel=1e-14)

    def test_w_state_coefficient_families(self):
        # the three families of the transformed W state
        w, r = 1.0, 0.3
        psi = transform_mode(w_state(3, "ABC"), "B", AccelerationParameter(w), POLICY)
        psi = transform_mode(psi, "C", AccelerationParameter(r), POLICY)
        amp = dict(psi.items())
        pref = 1 / math.sqrt(3)
        for m, n in [(0, 0), (2, 1)]:
            base = pref * math.tanh(w) ** m * math.tanh(r) ** n
            with_c = base * math.sqrt(n + 1) / (math.cosh(w) * math.cosh(r) ** 2)
            with_b = base * math.sqrt(m + 1) / (math.cosh(w) ** 2 * math.cosh(r))
            with_a = base / (math.cosh(w) * math.cosh(r))
            assert amp[(0, m, n + 1, m, n)] == pytest.approx(with_c, rel=1e-14)
            assert amp[(0, m + 1, n, m, n)] == pytest.approx(with_b, rel=1e-14)
            assert amp[(1, m, n, m, n)] == pytest.approx(with_a, rel=1e-14)

    def test_rest_transform_is_isomorphic(self):
        psi = transform_mode(_ghz_abc(), "B", AccelerationParameter(0.0), POLICY)
        assert psi.mode_names() == ("A", "B_I", "C", "B_II")
        assert dict(psi.items()) == pytest.approx(
            {(0, 0, 0, 0): 1 / math.sqrt(2), (1, 1, 1, 0): 1 / math.sqrt(2)})

    def test_norm_accounting(self):
        # 1 - |psi'|^2 <= (number of transformed modes) * epsilon
        psi = transform_mode(_ghz_abc(), "B", AccelerationParameter(1.5), POLICY)
        psi = transform_mode(psi, "C", AccelerationParameter(0.9), POLICY)
        assert 1.0 - psi.norm_squared() <= 2 * POLICY.epsilon_trunc

    def test_order_independence(self):
        a = transform_mode(_ghz_abc(), "B", AccelerationParameter(0.7), POLICY)
        a = transform_mode(a, "C", AccelerationParameter(1.2), POLICY)
        b = transform_mode(_ghz_abc(), "C", AccelerationParameter(1.2), POLICY)
        b = transform_mode(b, "B", AccelerationParameter(0.7), POLICY)
        # same region-I/II modes, different column order
        amp_a = dict(a.items())
        names_a, names_b = a.mode_names(), b.mode_names()
        perm = [names_b.index(nm) for nm in names_a]
        amp_b = {tuple(k[i] for i in perm): v for k, v in b.items()}
        assert set(amp_a) == set(amp_b)
        for key, v in amp_a.items():
            assert abs(amp_b[key] - v) <= 1e-15

    def test_double_occupation_rejected(self):
        psi = PureState.from_amplitudes([ModeLabel("A")], {(2,): 1.0})
        with pytest.raises(UnsupportedInputError, match="occupation 2"):
            transform_mode(psi, "A", AccelerationParameter(0.5), POLICY)

    def test_non_minkowski_mode_rejected(self):
        s = AccelerationParameter(0.5)
        psi = unruh_vacuum(s, POLICY, MODE_I, MODE_II)
        with pytest.raises(ConfigurationError, match="Minkowski"):
            transform_mode(psi, "B_I", s, POLICY)

    def test_unknown_mode_rejected(self):
        with pytest.raises(ValueError, match="unknown mode"):
            transform_mode(_ghz_abc(), "Q", AccelerationParameter(0.5), POLICY)


class TestNormalizationIdentities:
    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 4.0])
    def test_vacuum_sum_reaches_one_within_geometric_tail(self, s):
        # sech^2 sum tanh^{2n} -> 1 with tail tanh^{2(n_max+1)}
        policy = TruncationPolicy(epsilon_trunc=1e-10, hard_cap=100_000)
        psi = unruh_vacuum(AccelerationParameter(s), policy, MODE_I, MODE_II)
        n_max = truncation_level(AccelerationParameter(s), policy)
        deficit = 1.0 - psi.norm_squared()
        slack = len(psi) * 2.3e-16
        assert -slack <= deficit <= vacuum_tail(s, n_max) + slack

    @pytest.mark.parametrize("s", [0.5, 1.0, 2.0, 4.0])
    def test_one_particle_sum_reaches_one_within_closed_tail(self, s):
        policy = TruncationPolicy(epsilon_trunc=1e-10, hard_cap=100_000)
        psi = unruh_one_particle(AccelerationParameter(s), policy, MODE_I, MODE_II)
        n_max = truncation_level(AccelerationParameter(s), policy)
        deficit = 1.0 - psi.norm_squared()
        slack = len(psi) * 2.3e-16
        assert -slack <= deficit <= one_particle_tail(s, n_max) + slack
