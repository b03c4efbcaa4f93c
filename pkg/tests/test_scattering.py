import cmath
import math

import numpy as np
import pytest

from nhlab.errors import ParameterError
from nhlab.models import ModelParams
from nhlab.scattering import (
    branch_sqrt,
    green,
    green_defect,
    pole_order,
    reflection_bound,
    transmission,
    transmission_closed,
)


def test_branch_sqrt_physical_sheet():
    assert branch_sqrt(-4.0 + 0j) == pytest.approx(2j)
    assert branch_sqrt(4.0 + 0j) == pytest.approx(2.0)
    assert branch_sqrt(2j) == pytest.approx(1 + 1j)
    # Im k >= 0 everywhere on the sheet
    for lam in (-1 + 0.3j, -1 - 0.3j, 2 - 0.5j):
        assert branch_sqrt(lam).imag >= 0


class TestGreen:
    def test_threshold_branch_point_rejected(self, jb):
        with pytest.raises(ParameterError):
            green(jb, 0.3, -0.4, 0.0)

    def test_symmetric_in_positions(self, jb):
        lam = -0.3 + 0.4j
        assert green(jb, 0.3, -0.4, lam) == pytest.approx(green(jb, -0.4, 0.3, lam))

    @pytest.mark.parametrize("model,kw,lam,jump_tol", [
        ("JordanBound", {"alpha": 1.0}, -0.3 + 0.4j, 1e-2),
        ("TwoLevel", {"alpha": 1.0, "beta": 0.3}, -0.3 + 0.4j, 1e-2),
        ("Threshold", {"n": 1}, -0.5 + 0.3j, 1e-3),
        ("ContinuumBS", {"alpha": 0.5}, -0.6 + 0.3j, 3e-2),
    ])
    def test_resolvent_equation_and_unit_jump(self, model, kw, lam, jump_tol):
        params = ModelParams(model, z=1j, **kw)
        ode, jump = green_defect(params, 0.2, lam)
        assert ode < 1e-8
        assert jump < jump_tol


class TestPoleOrders:
    def test_double_pole_at_the_jordan_level(self, jb):
        fit = pole_order(jb, 0.3, -0.4, -1.0)
        assert fit.order == pytest.approx(2.0, abs=0.05)

    def test_simple_poles_after_splitting(self, tl):
        up = pole_order(tl, 0.3, -0.4, -(1.3 ** 2))
        dn = pole_order(tl, 0.3, -0.4, -(0.7 ** 2))
        assert up.order == pytest.approx(1.0, abs=0.05)
        assert dn.order == pytest.approx(1.0, abs=0.05)

    def test_threshold_branch_exponent(self, th):
        fit = pole_order(th, 0.3, -0.4, 0.0)
        assert fit.order == pytest.approx(1.5, abs=0.05)

    def test_embedded_double_pole(self):
        params = ModelParams("ContinuumBS", alpha=0.7, z=1j)
        fit = pole_order(params, 0.3, -0.4, 0.49)
        assert fit.order == pytest.approx(2.0, abs=0.05)

    def test_fit_metadata(self, jb):
        fit = pole_order(jb, 0.3, -0.4, -1.0)
        assert fit.lam0 == -1.0
        assert len(fit.radii) == len(fit.magnitudes) == 5
        assert fit.direction == pytest.approx(cmath.exp(3j * math.pi / 4))


class TestTransmission:
    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
    def test_jordan_bound_closed_form(self, jb, k):
        t = transmission(jb, k)
        want = ((k + 1j) / (k - 1j)) ** 2
        assert abs(t - want) < 1e-10
        assert abs(abs(t) - 1.0) < 1e-10

    @pytest.mark.parametrize("k", [0.5, 1.0, 2.0])
    def test_two_level_closed_form(self, tl, k):
        t = transmission(tl, k)
        want = (0.09 + (k + 1j) ** 2) / (0.09 + (k - 1j) ** 2)
        assert abs(t - want) < 1e-10

    @pytest.mark.parametrize("model,kw", [
        ("Threshold", {"n": 1}),
        ("ContinuumBS", {"alpha": 0.7}),
    ])
    def test_unit_transmission_models(self, model, kw):
        params = ModelParams(model, z=1j, **kw)
        for k in (0.5, 1.0, 2.0):
            assert abs(transmission(params, k) - transmission_closed(params, k)) < 1e-8

    def test_two_level_closed_form_requires_small_splitting(self):
        params = ModelParams("TwoLevel", alpha=1.0, beta=1.2, z=1j)
        with pytest.raises(ParameterError):
            transmission_closed(params, 1.0)


class TestReflection:
    @pytest.mark.parametrize("model,kw", [
        ("JordanBound", {"alpha": 1.0}),
        ("TwoLevel", {"alpha": 1.0, "beta": 0.3}),
        ("Threshold", {"n": 1}),
        ("ContinuumBS", {"alpha": 0.7}),
    ])
    def test_no_reflected_wave(self, model, kw):
        params = ModelParams(model, z=1j, **kw)
        r, resid = reflection_bound(params, 1.0)
        assert r < 1e-8
        assert resid < 1e-6
