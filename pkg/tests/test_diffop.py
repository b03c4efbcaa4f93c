import numpy as np
import pytest

from nhlab.diffop import apply, residual, second_derivative
from nhlab.errors import ParameterError
from nhlab.models import ModelParams, bound_states, potential


def test_apply_on_plane_wave(jb):
    # h e^{ikx} = (k^2 + V) e^{ikx}; stencil error only in the derivative part
    k = 0.7
    x = np.linspace(-10, 10, 2001)
    x_in, got = apply(jb, lambda t: np.exp(1j * k * t), x)
    want = (k * k + potential(jb, x_in)) * np.exp(1j * k * x_in)
    assert x_in.size == x.size - 8
    assert np.max(np.abs(got - want)) < 1e-9


def test_second_derivative_exact_on_cubic():
    x = np.linspace(-1, 1, 41)
    d2 = second_derivative(x ** 3 + 2 * x, x[1] - x[0])
    assert np.allclose(d2, 6 * x[4:-4], atol=1e-11)


class TestResidual:
    def test_eigen_equation(self, jb):
        psi0, psi1 = bound_states(jb)
        rep = residual(jb, psi0, psi0.lam)
        assert rep.sup_residual < 1e-8
        assert rep.relative < 1e-8

    def test_chain_link_needs_partner(self, jb):
        psi0, psi1 = bound_states(jb)
        lone = residual(jb, psi1, psi1.lam)
        linked = residual(jb, psi1, psi1.lam, partner=psi0)
        # (h - lam) psi1 = psi0, so without the partner the defect is O(1)
        assert lone.sup_residual > 1e-2
        assert linked.sup_residual < 1e-8

    @pytest.mark.parametrize("model,kw", [
        ("JordanBound", {"alpha": 1.0}),
        ("TwoLevel", {"alpha": 1.0, "beta": 0.3}),
        ("Threshold", {"n": 3}),
        ("ContinuumBS", {"alpha": 1.0}),
    ])
    def test_whole_chain_closes(self, model, kw):
        params = ModelParams(model, z=1j, **kw)
        states = bound_states(params)
        for j, state in enumerate(states):
            partner = states[j - 1] if state.role.order > 0 else None
            rep = residual(params, state, state.lam, partner=partner)
            assert rep.sup_residual < 1e-6, (model, state.label)

    def test_eighth_order_convergence(self, jb):
        psi0 = bound_states(jb)[0]
        coarse = residual(jb, psi0, -1.0, grid=np.linspace(-20, 20, 1001))
        fine = residual(jb, psi0, -1.0, grid=np.linspace(-20, 20, 2001))
        # 8th-order stencil: halving h should cut the defect by ~2^8
        assert coarse.sup_residual / fine.sup_residual > 50.0

    def test_report_window_trims_stencil_pad(self, jb):
        psi0 = bound_states(jb)[0]
        grid = np.linspace(-20, 20, 1001)
        rep = residual(jb, psi0, -1.0, grid=grid)
        assert rep.window[0] == pytest.approx(grid[4])
        assert rep.window[1] == pytest.approx(grid[-5])
        assert rep.step == pytest.approx(0.04)


class TestGridValidation:
    def test_nonuniform_grid_rejected(self, jb):
        psi0 = bound_states(jb)[0]
        bad = np.concatenate([np.linspace(-5, 0, 100), np.linspace(0.01, 5, 130)])
        with pytest.raises(ParameterError):
            residual(jb, psi0, -1.0, grid=bad)

    def test_short_grid_rejected(self, jb):
        psi0 = bound_states(jb)[0]
        with pytest.raises(ParameterError):
            residual(jb, psi0, -1.0, grid=np.linspace(-1, 1, 8))

    def test_second_derivative_needs_enough_points(self):
        with pytest.raises(ParameterError):
            second_derivative(np.zeros(8), 0.1)
