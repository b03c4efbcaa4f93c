import csv
import json

import pytest

from nhlab.cli import main


@pytest.fixture(autouse=True)
def in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _load(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


class TestVerify:
    def test_scoped_verify_passes(self, in_tmp, capsys):
        rc = main(["verify", "--model", "jordan-bound"])
        assert rc == 0
        data = _load(in_tmp / "nhlab-verify.json")
        assert data["suite"] == "verify[jordan-bound]"
        assert data["pass"] is True
        line = capsys.readouterr().out.strip()
        assert line.startswith("verify[jordan-bound]: PASS")
        assert line.endswith("-> nhlab-verify.json")

    def test_bad_parameter_exits_2(self, in_tmp, capsys):
        rc = main(["verify", "--model", "jordan-bound", "--z-im", "0"])
        assert rc == 2
        err = capsys.readouterr().err
        assert "invalid configuration" in err
        assert not (in_tmp / "nhlab-verify.json").exists()

    def test_unknown_model_rejected_by_parser(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--model", "harmonic"])
        assert exc.value.code == 2


class TestFormats:
    def test_csv_format_inferred_from_out(self, in_tmp):
        rc = main(["finite", "--out", "fin.csv"])
        assert rc == 0
        with open(in_tmp / "fin.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert rows
        assert set(rows[0]) == {"id", "anchor", "computed", "target",
                                "tolerance", "pass", "detail"}
        assert all(row["pass"] == "true" for row in rows)

    def test_explicit_csv_format(self, in_tmp):
        rc = main(["finite", "--format", "csv"])
        assert rc == 0
        assert (in_tmp / "nhlab-finite.csv").exists()

    def test_reports_identical_modulo_runtime(self, in_tmp):
        assert main(["finite", "--out", "a.json", "--seed", "7"]) == 0
        assert main(["finite", "--out", "b.json", "--seed", "7"]) == 0
        a, b = _load(in_tmp / "a.json"), _load(in_tmp / "b.json")
        a.pop("runtime"), b.pop("runtime")
        assert a == b


class TestPacket:
    def test_packet_table_and_honest_exit(self, in_tmp, capsys):
        # the potential-term slope misses 1.5 on this window; the command
        # must report that failure, not mask it
        rc = main(["packet", "--out", "packet.csv"])
        assert rc == 1
        with open(in_tmp / "packet.csv", newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = list(reader)
        assert header == ["epsilon", "binorm", "ev_total", "ev_potential",
                          "ev_kinetic"]
        assert len(rows) == 9
        out = capsys.readouterr().out
        assert "sweep[eps]: FAIL" in out

    def test_packet_slopes_recoverable_from_the_table(self, in_tmp):
        import numpy as np

        main(["packet", "--out", "packet.csv"])
        with open(in_tmp / "packet.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        eps = np.array([float(r["epsilon"]) for r in rows])
        binorm = np.array([abs(complex(r["binorm"])) for r in rows])
        slope = np.polyfit(np.log(eps), np.log(binorm), 1)[0]
        assert slope == pytest.approx(0.5, abs=1e-3)


class TestSweep:
    def test_beta_sweep(self, in_tmp):
        rc = main(["sweep", "--kind", "beta", "--out", "beta.csv"])
        assert rc == 0
        with open(in_tmp / "beta.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 5
        errs = [float(r["sup_err_psi0_plus"]) for r in rows]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_k_sweep_with_grid(self, in_tmp):
        rc = main(["sweep", "--kind", "k", "--model", "continuum-bs",
                   "--alpha", "0.7", "--grid", "0.5,2.0"])
        assert rc == 0
        data = _load(in_tmp / "nhlab-sweep.json")
        assert [row["k"] for row in data["rows"]] == [0.5, 2.0]

    def test_empty_grid_exits_2(self, capsys):
        rc = main(["sweep", "--kind", "beta", "--grid", ""])
        assert rc == 2
        assert "empty sweep grid" in capsys.readouterr().err


class TestConfigFile:
    def test_flags_override_file(self, in_tmp):
        cfg = in_tmp / "run.json"
        cfg.write_text(json.dumps({"model": "two-level", "beta": 0.2}))
        rc = main(["verify", "--config", str(cfg), "--beta", "0.4"])
        assert rc == 0
        data = _load(in_tmp / "nhlab-verify.json")
        assert data["suite"] == "verify[two-level]"
        assert data["config"]["beta"] == 0.4

    def test_unknown_config_key_exits_2(self, in_tmp, capsys):
        cfg = in_tmp / "run.json"
        cfg.write_text(json.dumps({"bogus": 1}))
        rc = main(["finite", "--config", str(cfg)])
        assert rc == 2
        assert "bogus" in capsys.readouterr().err

    def test_missing_config_file_exits_2(self, capsys):
        rc = main(["finite", "--config", "nope.json"])
        assert rc == 2
        assert "invalid configuration" in capsys.readouterr().err

    def test_non_object_config_exits_2(self, in_tmp, capsys):
        cfg = in_tmp / "run.json"
        cfg.write_text("[1, 2]")
        rc = main(["finite", "--config", str(cfg)])
        assert rc == 2
        assert "JSON object" in capsys.readouterr().err
