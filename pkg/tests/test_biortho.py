import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nhlab.biortho import binorm, binorm_states, expected_gram, gram, smeared_orthonormality
from nhlab.errors import ParameterError
from nhlab.models import ModelParams, bound_states


def test_binorm_of_gaussians():
    g = lambda x: np.exp(-x * x)  # noqa: E731
    assert binorm(g, g) == pytest.approx(math.sqrt(math.pi / 2), abs=1e-10)


def test_binorm_is_bilinear_not_sesquilinear():
    # (if, if) = -(f, f): no complex conjugation anywhere
    f = lambda x: np.exp(-x * x)  # noqa: E731
    g = lambda x: 1j * np.exp(-x * x)  # noqa: E731
    assert binorm(g, g) == pytest.approx(-binorm(f, f), abs=1e-12)


class TestGramTables:
    def test_jordan_bound(self, jb):
        rep = gram(jb)
        assert rep.labels == ("psi0", "psi1")
        # self-orthogonal eigenfunction, unit cross pairing
        assert abs(rep.matrix[0, 0]) < 1e-9
        assert rep.matrix[0, 1] == pytest.approx(1.0, abs=1e-9)
        assert rep.max_deviation < 1e-9

    def test_two_level(self, tl):
        rep = gram(tl)
        assert rep.labels == ("psi+", "psi-")
        assert rep.matrix[0, 0] == pytest.approx(1.0, abs=1e-9)
        assert rep.matrix[1, 1] == pytest.approx(1.0, abs=1e-9)
        assert abs(rep.matrix[0, 1]) < 1e-9
        assert rep.max_deviation < 1e-9

    def test_threshold_all_self_orthogonal(self, th3):
        rep = gram(th3)
        assert rep.matrix.shape == (2, 2)
        assert rep.max_deviation < 1e-9
        assert np.all(np.abs(rep.matrix) < 1e-9)

    def test_continuum_bs_masks_divergent_entry(self, cbs):
        rep = gram(cbs)
        assert rep.max_deviation < 1e-9
        assert not rep.asserted[1, 1]
        assert math.isnan(rep.matrix[1, 1].real)
        assert abs(rep.matrix[0, 0]) < 1e-9
        assert abs(rep.matrix[0, 1]) < 1e-9

    def test_threshold_n5_has_three_chain_members(self):
        params = ModelParams("Threshold", n=5, z=1j)
        rep = gram(params)
        assert rep.matrix.shape == (3, 3)
        assert rep.max_deviation < 1e-8

    def test_expected_shapes(self, jb, cbs):
        m, mask = expected_gram(jb)
        assert m.shape == (2, 2) and mask.all()
        m, mask = expected_gram(cbs)
        assert math.isnan(m[1, 1]) and not mask[1, 1]


@given(st.floats(min_value=0.3, max_value=3.0, allow_nan=False))
@settings(max_examples=8, deadline=None)
def test_rotated_pair_is_orthonormal_for_any_kappa(kappa):
    params = ModelParams("JordanBound", alpha=1.0, z=1j)
    rep = gram(params, kappa=kappa)
    assert rep.max_deviation < 5e-9


def test_divergent_pairing_rejected(cbs):
    s0, s1 = bound_states(cbs)
    with pytest.raises(ParameterError):
        binorm_states(cbs, s1, s1)


class TestSmearedOrthonormality:
    @pytest.mark.parametrize("model,kw,ka,kb", [
        ("JordanBound", {"alpha": 1.0}, 1.5, -1.5),
        ("TwoLevel", {"alpha": 1.0, "beta": 0.3}, 1.5, -1.5),
        ("Threshold", {"n": 1}, 3.0, -3.0),
        ("ContinuumBS", {"alpha": 0.5}, 3.0, -3.0),
    ])
    def test_diagonal_pairing_matches_delta_prediction(self, model, kw, ka, kb):
        params = ModelParams(model, z=1j, **kw)
        rep = smeared_orthonormality(params, ka, kb)
        assert abs(rep.target) > 1e-6
        assert rep.rel_error < 1e-9

    def test_off_diagonal_pairing_vanishes(self, th):
        # amplitudes three sigma-widths apart: predicted pairing ~ e^-56
        rep = smeared_orthonormality(th, 3.0, -6.0)
        assert abs(rep.target) < 1e-12
        assert rep.abs_error < 1e-10

    def test_amplitude_near_excluded_momentum_rejected(self, cbs):
        with pytest.raises(ParameterError):
            smeared_orthonormality(cbs, 0.7, -3.0)

    def test_amplitude_near_threshold_rejected(self, th):
        with pytest.raises(ParameterError):
            smeared_orthonormality(th, 1.0, -3.0)
