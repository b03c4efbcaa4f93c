import numpy as np
import pytest

from nhlab.errors import ParameterError
from nhlab.suites import (
    MODEL_SLUGS,
    SUITE_NAMES,
    SWEEP_KINDS,
    RunSettings,
    check_floor,
    run_suite,
    settings_from,
    suite_binorm,
    suite_chain,
    suite_coalescence,
    suite_finite,
    suite_packet,
    suite_scattering,
    sweep_rows,
    verify_model,
)


class TestSettings:
    def test_defaults(self):
        s = settings_from(None)
        assert s == RunSettings()
        assert s.z == 1j and s.seed == 0

    def test_field_parsing(self):
        s = settings_from({"model": "two-level", "alpha": 2, "z_re": 0.5,
                           "z_im": -1, "tol": "1e-7", "seed": 3})
        assert s.model == "two-level"
        assert s.z == 0.5 - 1j
        assert s.tol == 1e-7 and s.seed == 3

    def test_unknown_key_rejected(self):
        with pytest.raises(ParameterError):
            settings_from({"alpha": 1.0, "omega": 2.0})

    def test_unknown_model_rejected(self):
        with pytest.raises(ParameterError):
            settings_from({"model": "JordanBound"})  # slugs only

    def test_params_adapts_to_model(self):
        s = RunSettings(alpha=1.5, beta=0.2, n=5)
        assert s.params("TwoLevel").beta == 0.2
        assert s.params("Threshold").n == 5
        assert s.params("JordanBound").alpha == 1.5

    def test_check_floor(self):
        assert check_floor("x", "a", 0.9, 0.8).passed
        assert not check_floor("x", "a", 0.7, 0.8).passed
        assert not check_floor("x", "a", float("nan"), 0.8).passed


class TestSuites:
    def test_chain_default_covers_both_transparent_models(self):
        rep = suite_chain(None)
        assert rep.passed
        ids = [r.id for r in rep.records]
        assert "chain.jordan-bound.psi1" in ids
        assert "chain.continuum-bs.psi1" in ids

    def test_chain_scoped(self):
        rep = suite_chain({"model": "threshold", "n": 3})
        assert rep.passed
        assert all(r.id.startswith("chain.threshold.") for r in rep.records)

    def test_binorm_covers_all_models_by_default(self):
        rep = suite_binorm(None)
        assert rep.passed
        slugs = {r.id.split(".")[1] for r in rep.records}
        assert slugs == set(MODEL_SLUGS)

    def test_packet_failure_is_exactly_the_potential_slope(self):
        rep = suite_packet(None)
        failing = [r.id for r in rep.records if not r.passed]
        assert failing == ["packet.ev-potential.slope"]
        rec = {r.id: r for r in rep.records}
        assert rec["packet.binorm.slope"].passed
        assert rec["packet.ev-total.slope"].passed
        assert rec["packet.binorm.prefactor"].passed
        assert rec["packet.ev-potential.slope"].detail != ""

    def test_coalescence(self):
        rep = suite_coalescence(None)
        assert rep.passed

    def test_scattering(self):
        rep = suite_scattering(None)
        assert rep.passed
        ids = [r.id for r in rep.records]
        assert any(i.startswith("scatter.pole.") for i in ids)
        assert any(i.startswith("scatter.R.") for i in ids)
        assert any(i.startswith("scatter.T.") for i in ids)

    def test_finite_passes_and_is_deterministic(self):
        a = suite_finite({"seed": 0})
        b = suite_finite({"seed": 0})
        assert a.passed
        assert [r.computed for r in a.records] == [r.computed for r in b.records]

    def test_finite_other_seed_still_passes(self):
        assert suite_finite({"seed": 12345}).passed

    def test_unknown_suite(self):
        with pytest.raises(ParameterError):
            run_suite("harmonics")

    def test_run_suite_dispatch(self):
        rep = run_suite("finite", {"seed": 1})
        assert rep.suite == "finite"
        assert rep.config["seed"] == 1
        assert rep.config["trials"] == 100
        assert rep.passed


class TestVerifyModel:
    def test_requires_model(self):
        with pytest.raises(ParameterError):
            verify_model({"alpha": 1.0})

    def test_scoped_run(self):
        rep = verify_model({"model": "jordan-bound"})
        assert rep.suite == "verify[jordan-bound]"
        assert rep.passed
        kinds = {r.id.split(".")[0] for r in rep.records}
        assert kinds == {"chain", "binorm"}


class TestSweeps:
    def test_kinds(self):
        assert SWEEP_KINDS == ("beta", "k", "eps")
        with pytest.raises(ParameterError):
            sweep_rows("omega")

    def test_empty_grid_rejected(self):
        with pytest.raises(ParameterError):
            sweep_rows("beta", grid=[])

    def test_beta_rows_decrease(self):
        fieldnames, rows, rep = sweep_rows("beta")
        assert fieldnames[0] == "beta"
        assert len(rows) == 5
        assert rep.passed
        errs = [r["sup_err_psi1"] for r in rows]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_k_rows_unimodular(self):
        fieldnames, rows, rep = sweep_rows(
            "k", {"model": "continuum-bs", "alpha": 0.7}, grid=[0.5, 2.0])
        assert [r["k"] for r in rows] == [0.5, 2.0]
        assert rep.passed
        for row in rows:
            assert row["abs_T"] == pytest.approx(1.0, abs=1e-9)
            assert row["closed_gap"] < 1e-8

    def test_eps_rows_carry_packet_columns(self):
        fieldnames, rows, rep = sweep_rows("eps", grid=[1e-3, 1e-2])
        assert fieldnames == ["epsilon", "binorm", "ev_total", "ev_potential",
                              "ev_kinetic"]
        assert len(rows) == 2
        slope_ids = [r.id for r in rep.records]
        assert "sweep.eps.binorm.slope" in slope_ids
        binorm_slope = next(r for r in rep.records
                            if r.id == "sweep.eps.binorm.slope")
        assert binorm_slope.passed

    def test_single_point_eps_grid_has_no_slope_records(self):
        _, rows, rep = sweep_rows("eps", grid=[1e-2])
        assert len(rows) == 1
        assert rep.records == []

    def test_suite_names_fixed(self):
        assert SUITE_NAMES == ("chain", "binorm", "packet", "coalescence",
                               "identity", "scattering", "finite")
