import math

import numpy as np
import pytest

from nhlab.errors import ParameterError
from nhlab.observables import (
    EXACT_BINORM_PREFACTOR,
    EXACT_ENERGY_PREFACTOR,
    average,
    exact_values,
    fit_slope,
    h_action_consistency,
    kinetic_fd_route,
    packet,
    packet_momentum_route,
    packet_values,
    sweep,
)


class TestPacket:
    def test_packets_need_the_n1_model(self, jb, th3):
        for params in (jb, th3):
            with pytest.raises(ParameterError):
                packet(params, 0.1)

    def test_binorm_and_energy_match_closed_forms(self, th):
        vals = packet_values(th, 0.1)
        exact = exact_values(0.1)
        assert vals.binorm == pytest.approx(exact["binorm"], rel=1e-10)
        assert vals.ev_total == pytest.approx(exact["ev_total"], rel=1e-10)
        assert vals.ev_kinetic == pytest.approx(vals.ev_total - vals.ev_potential)

    def test_prefactors(self):
        assert EXACT_BINORM_PREFACTOR == pytest.approx(math.sqrt(math.pi / 8))
        assert EXACT_ENERGY_PREFACTOR == pytest.approx(math.sqrt(9 * math.pi / 128))

    def test_momentum_route_agrees_with_closed_form(self, th):
        psi, _ = packet(th, 0.1)
        for x in (0.7, -1.3):
            via_k = packet_momentum_route(th, 0.1, x)
            assert via_k == pytest.approx(complex(psi(np.array([x]))[0]), abs=1e-12)

    def test_kinetic_by_finite_differences(self, th):
        vals = packet_values(th, 0.1)
        fd = kinetic_fd_route(th, 0.1)
        assert fd == pytest.approx(vals.ev_kinetic, abs=1e-9)

    def test_analytic_h_image_matches_stencil(self, th):
        assert h_action_consistency(th, 0.1) < 1e-6

    def test_ratio_vanishes_linearly(self, th):
        v1 = packet_values(th, 1e-2)
        v2 = packet_values(th, 1e-3)
        r1 = abs(v1.ev_total) / abs(v1.binorm)
        r2 = abs(v2.ev_total) / abs(v2.binorm)
        assert r1 == pytest.approx(0.75e-2, rel=1e-6)
        assert r2 == pytest.approx(0.75e-3, rel=1e-6)


class TestSlopes:
    def test_binorm_scales_like_sqrt_eps(self, th):
        grid = np.geomspace(1e-3, 1e-1, 9)
        rows = sweep(th, grid)
        s = fit_slope(grid, [r.binorm for r in rows])
        assert s == pytest.approx(0.5, abs=1e-3)

    def test_total_energy_scales_like_eps_three_halves(self, th):
        grid = np.geomspace(1e-3, 1e-1, 9)
        rows = sweep(th, grid)
        s = fit_slope(grid, [r.ev_total for r in rows])
        assert s == pytest.approx(1.5, abs=1e-3)

    def test_potential_slope_approaches_three_halves_from_below(self, th):
        # the potential term carries a sqrt(eps) subleading correction, so the
        # window [1e-3, 1e-1] reads ~1.42 and a smaller-eps decade reads higher
        window = np.geomspace(1e-3, 1e-1, 9)
        decade = np.geomspace(1e-4, 1e-3, 5)
        s_win = fit_slope(window, [r.ev_potential for r in sweep(th, window)])
        s_dec = fit_slope(decade, [r.ev_potential for r in sweep(th, decade)])
        assert 1.40 < s_win < 1.44
        assert 1.45 < s_dec < 1.52
        assert s_dec > s_win

    def test_windowed_fit(self):
        grid = np.array([1e-3, 1e-2, 1e-1, 1.0])
        vals = grid ** 2
        assert fit_slope(grid, vals, lo=1e-2, hi=1e-1) == pytest.approx(2.0)

    def test_fit_needs_two_points(self):
        with pytest.raises(ParameterError):
            fit_slope(np.array([1e-3, 1e-2]), np.array([1.0, 2.0]), hi=1e-3)


class TestAverage:
    def test_hermitian_potential_on_threshold_eigenstate(self, th):
        from nhlab.models import bound_states

        psi0 = bound_states(th)[0]
        rep = average(th, "potential", state=psi0.eval)
        assert rep.value == pytest.approx(-0.5, abs=1e-9)
        assert rep.denominator == pytest.approx(math.pi, abs=1e-9)

    def test_hermitian_total_needs_h_image(self, th):
        from nhlab.models import bound_states

        psi0 = bound_states(th)[0]
        with pytest.raises(ParameterError):
            average(th, "total", state=psi0.eval)
        # with the image supplied (lam = 0 so h psi0 = 0) the average vanishes
        rep = average(th, "total", state=(psi0.eval, lambda x: 0.0 * np.asarray(x)))
        assert abs(rep.value) < 1e-9

    def test_binorm_average_recovers_eigenvalue(self, jb, tl):
        rep = average(jb, "total", coeffs=(1.0, 0.0), prescription="binorm")
        assert rep.value == pytest.approx(-1.0, abs=1e-9)
        rep = average(tl, "total", coeffs=(1.0, 1.0), prescription="binorm")
        # equal mixture averages the two levels: ((-1.69) + (-0.49)) / 2
        assert rep.value == pytest.approx(-1.09, abs=1e-9)

    def test_binorm_average_splits_into_potential_plus_kinetic(self, jb):
        tot = average(jb, "total", coeffs=(1.0, 0.0), prescription="binorm")
        pot = average(jb, "potential", coeffs=(1.0, 0.0), prescription="binorm")
        kin = average(jb, "kinetic", coeffs=(1.0, 0.0), prescription="binorm")
        assert tot.value == pytest.approx(pot.value + kin.value, abs=1e-8)

    def test_raw_average_flags_zero_over_zero(self, th):
        from nhlab.models import bound_states

        psi0 = bound_states(th)[0]
        rep = average(th, "potential", state=psi0.eval, prescription="raw")
        assert rep.value is None
        assert "0/0" in rep.flag

    def test_raw_average_fine_off_the_degenerate_directions(self, th):
        g = lambda x: np.exp(-0.5 * np.asarray(x) ** 2)  # noqa: E731
        rep = average(th, "potential", state=g, prescription="raw")
        assert rep.value is not None and rep.flag == ""

    def test_argument_validation(self, jb, th):
        with pytest.raises(ParameterError):
            average(jb, "total")
        with pytest.raises(ParameterError):
            average(jb, "total", state=lambda x: x, coeffs=(1.0, 0.0))
        with pytest.raises(ParameterError):
            average(jb, "total", state=lambda x: x, prescription="binorm")
        with pytest.raises(ParameterError):
            average(th, "total", coeffs=(1.0,), prescription="binorm")
        with pytest.raises(ParameterError):
            average(jb, "charge", coeffs=(1.0, 0.0), prescription="binorm")
        with pytest.raises(ParameterError):
            average(jb, "total", coeffs=(1.0, 0.0), prescription="cayley")
        with pytest.raises(ParameterError):
            average(jb, "total", coeffs=(1.0, 0.0, 0.0), prescription="binorm")
