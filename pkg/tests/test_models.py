import math

import numpy as np
import pytest

from nhlab.errors import ExcludedMomentum, ParameterError
from nhlab.models import (
    ModelParams,
    bound_states,
    continuation_limit,
    continuum_poles,
    continuum_state,
    default_grid,
    denominator,
    potential,
    regularized_bracket,
    rotated_pair,
    threshold_chain,
)


class TestParamValidation:
    def test_z_must_be_complex(self):
        with pytest.raises(ParameterError):
            ModelParams("JordanBound", alpha=1.0, z=0.5)

    def test_alpha_positive_real_for_transparent_models(self):
        with pytest.raises(ParameterError):
            ModelParams("JordanBound", alpha=-1.0, z=1j)
        with pytest.raises(ParameterError):
            ModelParams("ContinuumBS", alpha=1j, z=1j)

    def test_two_level_beta_window(self):
        # |beta| < pi / (2 |Im z|) keeps W(x) zero-free on the real line
        ModelParams("TwoLevel", alpha=1.0, beta=1.5, z=1j)
        with pytest.raises(ParameterError):
            ModelParams("TwoLevel", alpha=1.0, beta=math.pi / 2, z=1j)
        with pytest.raises(ParameterError):
            ModelParams("TwoLevel", alpha=1.0, beta=0.0, z=1j)

    def test_beta_rejected_off_two_level(self):
        with pytest.raises(ParameterError):
            ModelParams("JordanBound", alpha=1.0, beta=0.3, z=1j)

    def test_threshold_needs_positive_n(self):
        with pytest.raises(ParameterError):
            ModelParams("Threshold", n=0, z=1j)

    def test_unknown_model(self):
        with pytest.raises(ParameterError):
            ModelParams("Harmonic", alpha=1.0, z=1j)


class TestDenominator:
    @pytest.mark.parametrize("model,kw", [
        ("JordanBound", {"alpha": 1.0}),
        ("TwoLevel", {"alpha": 1.0, "beta": 0.3}),
        ("ContinuumBS", {"alpha": 0.5}),
        ("Threshold", {"n": 3}),
    ])
    def test_no_real_zeros(self, model, kw):
        params = ModelParams(model, z=1j, **kw)
        den = denominator(params)
        assert den.min_modulus(-60.0, 60.0) > 1e-3

    def test_log_abs_matches_eval(self, jb):
        den = denominator(jb)
        x = np.linspace(-5, 5, 41)
        assert np.allclose(den.log_abs(x), np.log(np.abs(den.eval(x))), atol=1e-12)

    def test_log_abs_stable_far_out(self, tl):
        # direct eval overflows near x ~ 400; the log route must not
        den = denominator(tl)
        val = den.log_abs(np.array([380.0]))
        assert np.isfinite(val).all() and val[0] > 700.0


class TestBoundStates:
    def test_labels(self, jb, tl, th3, cbs):
        assert [s.label for s in bound_states(jb)] == ["psi0", "psi1"]
        assert [s.label for s in bound_states(tl)] == ["psi+", "psi-"]
        assert [s.label for s in bound_states(th3)] == ["psi0", "psi1"]
        assert [s.label for s in bound_states(cbs)] == ["psi0", "psi1"]

    def test_roles_and_values(self, jb, tl, cbs):
        s0, s1 = bound_states(jb)
        assert s0.role.kind == "eigen" and s1.role.order == 1
        assert s0.lam == -1.0 and s1.lam == -1.0
        lp, lm = (s.lam for s in bound_states(tl))
        assert lp == pytest.approx(-(1.3 ** 2)) and lm == pytest.approx(-(0.7 ** 2))
        assert bound_states(cbs)[0].lam == pytest.approx(0.25)

    def test_threshold_chain_coefficients(self, th3):
        chain = threshold_chain(th3)
        # n=3: psi0 = (x-z)^-3, psi1 = (3!!/ (2!! 5!!)) (x-z)^-1 = (1/10)(x-z)^-1
        assert chain[0] == (1.0, 3)
        assert chain[1] == pytest.approx((0.1, 1))
        x = 1.7
        vals = [s((x,))[0] for s in bound_states(th3)]
        assert vals[0] == pytest.approx((x - 1j) ** -3)
        assert vals[1] == pytest.approx(0.1 * (x - 1j) ** -1)

    def test_threshold_chain_requires_threshold(self, jb):
        with pytest.raises(ParameterError):
            threshold_chain(jb)

    def test_bound_states_decay_exponentially(self, jb, tl):
        for params in (jb, tl):
            for s in bound_states(params):
                far = np.abs(s(np.array([35.0, -35.0])))
                near = np.abs(s(np.array([0.0])))
                assert far.max() < 1e-6 * max(1.0, near.max())

    def test_embedded_state_decays_algebraically(self, cbs):
        # embedded eigenfunction falls off like 1/x; its associated partner
        # only stays bounded (hence the divergent self-binorm)
        psi0, psi1 = bound_states(cbs)
        x = np.linspace(39.0, 41.0, 201)
        lo = np.abs(psi0(x)).max()
        hi = np.abs(psi0(10 * x)).max()
        assert lo < 0.05
        assert hi < 0.15 * lo
        assert np.abs(psi1(10 * x)).max() < 1.5


class TestRotatedPair:
    def test_linear_combination(self, jb):
        psi0, psi1 = bound_states(jb)
        big1, big2 = rotated_pair(jb, kappa=0.8)
        x = np.linspace(-3, 3, 7)
        want1 = (0.8 * psi0(x) + psi1(x) / 0.8) / math.sqrt(2)
        want2 = 1j * (0.8 * psi0(x) - psi1(x) / 0.8) / math.sqrt(2)
        assert np.allclose(big1(x), want1, atol=1e-14)
        assert np.allclose(big2(x), want2, atol=1e-14)
        assert big1.label == "Psi1(kappa=0.8)"

    def test_only_for_jordan_bound(self, th):
        with pytest.raises(ParameterError):
            rotated_pair(th)
        with pytest.raises(ParameterError):
            rotated_pair(ModelParams("JordanBound", alpha=1.0, z=1j), kappa=0.0)


class TestContinuum:
    def test_pole_locations(self, jb, tl, th, cbs):
        assert continuum_poles(jb) == (1j, -1j)
        assert continuum_poles(tl) == (1.3j, -1.3j, 0.7j, -0.7j)
        assert continuum_poles(th) == (0.0,)
        assert continuum_poles(cbs) == (0.5, -0.5)

    def test_excluded_momenta(self, th, cbs):
        with pytest.raises(ExcludedMomentum):
            continuum_state(th, 0.0)
        with pytest.raises(ExcludedMomentum):
            continuum_state(cbs, 0.5)
        continuum_state(cbs, 0.6)  # off the pole: fine

    def test_threshold_continuum_needs_n1(self, th3):
        with pytest.raises(ParameterError):
            continuum_state(th3, 1.0)

    def test_plane_wave_recovered_far_away(self, jb):
        # transparent potential: psi(x;k) -> plane wave (up to phase) as |x| -> oo
        k = 0.9
        st = continuum_state(jb, k)
        x = np.array([60.0])
        plane = np.exp(1j * k * x) / math.sqrt(2 * math.pi)
        assert np.abs(np.abs(st(x) / plane) - 1.0) < 1e-6

    def test_regularized_bracket_at_safe_momentum(self, jb):
        # (k^2 - lam) psi(x;k) stays finite and matches the direct product
        k, lam = 0.8, -1.0
        x = np.linspace(-2, 2, 5)
        direct = (k * k - lam) * continuum_state(jb, k)(x)
        assert np.allclose(regularized_bracket(jb, x, k), direct, rtol=1e-10)


class TestContinuationLimits:
    @pytest.mark.parametrize("model,kw,which", [
        ("JordanBound", {"alpha": 1.0}, "psi0+"),
        ("JordanBound", {"alpha": 1.0}, "psi1-"),
        ("TwoLevel", {"alpha": 1.0, "beta": 0.3}, "psi_plus_upper"),
        ("TwoLevel", {"alpha": 1.0, "beta": 0.3}, "psi_minus_lower"),
        ("Threshold", {"n": 1}, "psi0"),
        ("ContinuumBS", {"alpha": 0.5}, "psi0+"),
        ("ContinuumBS", {"alpha": 0.5}, "psi1-"),
    ])
    def test_continuum_continues_to_bound_state(self, model, kw, which):
        params = ModelParams(model, z=1j, **kw)
        res = continuation_limit(params, which)
        assert res.sup_error < 1e-3
        assert res.stabilization < 1e-2

    def test_unknown_limit_name(self, jb):
        with pytest.raises(ParameterError):
            continuation_limit(jb, "psi7_plus")


def test_default_grid_shape(th, jb):
    x = default_grid(th)
    assert x.size == 8001 and x[0] == -40.0 and x[-1] == 40.0
    assert default_grid(jb)[-1] >= 40.0


def test_potential_vanishes_at_infinity(jb, tl, cbs):
    for params in (jb, tl):
        v = potential(params, np.array([55.0, -55.0]))
        assert np.max(np.abs(v)) < 1e-8
    # embedded model's tail is only O(1/x)
    assert np.max(np.abs(potential(cbs, np.array([55.0, -55.0])))) < 0.2
    assert np.max(np.abs(potential(cbs, np.array([5500.0])))) < 2e-3


def test_threshold_potential_closed_form(th3):
    x = np.array([2.0, -1.5])
    assert np.allclose(potential(th3, x), 12.0 / (x - 1j) ** 2, rtol=1e-14)
