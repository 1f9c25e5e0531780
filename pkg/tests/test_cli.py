import json

import numpy as np
import pytest

from gsteer import fixtures
from gsteer.channels import apply
from gsteer.cli import main
from gsteer.states import make_state, state_from_json, state_to_json
from gsteer.steering import pure_family_state


@pytest.fixture()
def vacuum_file(tmp_path):
    path = tmp_path / "vacuum.json"
    path.write_text(state_to_json(make_state(1, 1, np.eye(4))))
    return str(path)


@pytest.fixture()
def steerable_file(tmp_path):
    path = tmp_path / "r2.json"
    path.write_text(state_to_json(pure_family_state(2.0)))
    return str(path)


@pytest.fixture()
def unphysical_file(tmp_path):
    doc = {"modes_a": 1, "modes_b": 1,
           "cov": (0.5 * np.eye(4)).tolist(), "mean": [0.0] * 4}
    path = tmp_path / "unphysical.json"
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture()
def witness_state_file(tmp_path):
    path = tmp_path / "witness.json"
    path.write_text(fixtures.fixture_text(fixtures.STATE_SHEAR_WITNESS))
    return str(path)


@pytest.fixture()
def shear_channel_file(tmp_path):
    path = tmp_path / "shear.json"
    path.write_text(fixtures.fixture_text(fixtures.CHANNEL_SHEAR_LOCAL))
    return str(path)


@pytest.fixture()
def noncert_channel_file(tmp_path):
    path = tmp_path / "noncert.json"
    path.write_text(fixtures.fixture_text(fixtures.CHANNEL_NONCERT_UNSTEERABLE))
    return str(path)


class TestCheck:
    def test_vacuum(self, vacuum_file, capsys):
        assert main(["check", vacuum_file]) == 0
        out = capsys.readouterr().out
        assert "bona_fide: true" in out
        assert "unsteerable: true" in out

    def test_steerable_state(self, steerable_file, capsys):
        assert main(["check", steerable_file]) == 0
        assert "unsteerable: false" in capsys.readouterr().out

    def test_unphysical_state_exits_3(self, unphysical_file, capsys):
        assert main(["check", unphysical_file]) == 3
        out = capsys.readouterr().out
        assert "bona_fide: false" in out
        assert "-0.5" in out

    def test_truncated_json_exits_2(self, tmp_path, capsys):
        path = tmp_path / "trunc.json"
        path.write_text('{"modes_a": 1, "modes')
        assert main(["check", str(path)]) == 2
        err = capsys.readouterr().err
        assert "line 1" in err and "column" in err

    def test_missing_file_exits_2(self, tmp_path):
        assert main(["check", str(tmp_path / "nope.json")]) == 2

    def test_wrong_dimension_exits_2(self, tmp_path):
        doc = {"modes_a": 1, "modes_b": 2,
               "cov": np.eye(4).tolist(), "mean": [0.0] * 4}
        path = tmp_path / "dim.json"
        path.write_text(json.dumps(doc))
        assert main(["check", str(path)]) == 2

    def test_tol_flag_loosens_verdict(self, unphysical_file, capsys):
        assert main(["check", "--tol", "1.0", unphysical_file]) == 0
        assert "bona_fide: true" in capsys.readouterr().out

    def test_env_var_tolerance(self, unphysical_file, capsys, monkeypatch):
        monkeypatch.setenv("GSTEER_TOL", "1.0")
        assert main(["check", unphysical_file]) == 0
        assert "bona_fide: true" in capsys.readouterr().out


class TestQuantify:
    def test_witness_state(self, witness_state_file, capsys):
        assert main(["quantify", witness_state_file]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["j2"] == pytest.approx(0.0148, abs=5e-4)
        assert doc["unsteerable"] is False

    def test_vacuum_zeroes(self, vacuum_file, capsys):
        assert main(["quantify", vacuum_file]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["j1"] == 0.0 and doc["j2"] == 0.0

    def test_steerable_value(self, steerable_file, capsys):
        assert main(["quantify", steerable_file]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["j2"] == pytest.approx(np.sqrt(13.0) - 3.0, abs=1e-12)

    def test_multimode_state(self, tmp_path, capsys):
        from gsteer.states import schmidt_pure_state

        path = tmp_path / "wide.json"
        path.write_text(state_to_json(schmidt_pure_state(1, 2, [2.0])))
        assert main(["quantify", str(path)]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["j2"] == pytest.approx(np.sqrt(13.0) - 3.0, abs=1e-12)

    def test_unphysical_exits_3(self, unphysical_file):
        assert main(["quantify", unphysical_file]) == 3


class TestChannel:
    def test_classify(self, noncert_channel_file, capsys):
        assert main(["channel", noncert_channel_file, "--classify"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["valid_gaussian"]["verdict"] is True
        assert doc["unsteerable"]["verdict"] is False

    def test_apply_identity_round_trips(self, tmp_path, witness_state_file, capsys):
        from gsteer.channels import channel_to_json, identity_channel

        ch_path = tmp_path / "id.json"
        ch_path.write_text(channel_to_json(identity_channel(1, 1)))
        out_path = tmp_path / "out.json"
        assert main(["channel", str(ch_path), witness_state_file,
                     "--output", str(out_path)]) == 0
        original = state_from_json(open(witness_state_file).read())
        result = state_from_json(out_path.read_text())
        assert np.array_equal(result.cov, original.cov)

    def test_apply_shear_matches_reference(self, shear_channel_file,
                                           witness_state_file, tmp_path):
        out_path = tmp_path / "sheared.json"
        assert main(["channel", shear_channel_file, witness_state_file,
                     "--output", str(out_path)]) == 0
        result = state_from_json(out_path.read_text())
        shear = fixtures.load_channel(fixtures.CHANNEL_SHEAR_LOCAL)
        witness = fixtures.load_state(fixtures.STATE_SHEAR_WITNESS)
        assert np.array_equal(result.cov, apply(shear, witness).cov)

    def test_no_action_exits_2(self, noncert_channel_file):
        assert main(["channel", noncert_channel_file]) == 2

    def test_dimension_mismatch_exits_2(self, noncert_channel_file, tmp_path):
        from gsteer.states import random_state

        path = tmp_path / "wide.json"
        path.write_text(state_to_json(random_state(1, 2, 2.0, 0)))
        assert main(["channel", noncert_channel_file, str(path)]) == 2


class TestSweep:
    def test_reference_curve_monotone(self, capsys):
        assert main(["sweep", "--r", "1", "--nth", "0", "--R", "1",
                     "--phi", "10", "--lambda", "0.1",
                     "--tmax", "20", "--dt", "0.1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "t,j2,bound"
        j2s = np.array([float(l.split(",")[1]) for l in lines[1:]])
        bounds = np.array([float(l.split(",")[2]) for l in lines[1:]])
        assert len(j2s) == 201
        assert np.all(np.diff(j2s) <= 1e-12)
        assert np.all(j2s <= bounds + 1e-9)

    def test_tmax_zero_single_row(self, capsys):
        assert main(["sweep", "--tmax", "0", "--dt", "0.5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("0,")

    def test_unsqueezed_start_gives_zero_column(self, capsys):
        # block-diagonal initial and stationary covariances stay product
        # states along the whole trajectory, so j2 is identically zero
        assert main(["sweep", "--r", "0", "--tmax", "5", "--dt", "0.5"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert all(float(l.split(",")[1]) == 0.0 for l in lines[1:])

    def test_writes_file(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert main(["sweep", "--tmax", "1", "--dt", "0.5",
                     "--output", str(out)]) == 0
        assert out.read_text().startswith("t,j2,bound\n")

    def test_invalid_dt_exits_2(self):
        assert main(["sweep", "--dt", "0"]) == 2

    def test_invalid_bath_exits_2(self):
        assert main(["sweep", "--nth", "-1"]) == 2

    def test_deterministic_output(self, capsys):
        args = ["sweep", "--r", "0.7", "--phi", "3", "--tmax", "3", "--dt", "0.1"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        assert capsys.readouterr().out == first


class TestSample:
    def test_noncert_channel_clean(self, noncert_channel_file, capsys):
        assert main(["sample", noncert_channel_file, "--n", "300", "--seed", "5",
                     "--predicate", "unsteerable-preserving"]) == 0
        out = capsys.readouterr().out
        assert "violations: 0" in out

    def test_abort_exits_4(self, noncert_channel_file, capsys):
        assert main(["sample", noncert_channel_file, "--n", "5", "--seed", "5",
                     "--predicate", "unsteerable-preserving",
                     "--max-sympl-eigen", "1.0"]) == 4
        assert "oversampling" in capsys.readouterr().err

    def test_deterministic_output(self, noncert_channel_file, capsys):
        args = ["sample", noncert_channel_file, "--n", "50", "--seed", "9"]
        assert main(args) == 0
        first = capsys.readouterr().out
        assert main(args) == 0
        assert capsys.readouterr().out == first

    def test_different_seeds_differ(self, noncert_channel_file, capsys):
        assert main(["sample", noncert_channel_file, "--n", "50", "--seed", "1"]) == 0
        first = capsys.readouterr().out
        assert main(["sample", noncert_channel_file, "--n", "50", "--seed", "2"]) == 0
        assert capsys.readouterr().out != first


class TestVerify:
    def test_paper_suite_passes(self, capsys):
        assert main(["verify", "--suite", "paper"]) == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out
        assert "checks passed" in out

    def test_failures_exit_nonzero(self, capsys, monkeypatch):
        import gsteer.cli
        from gsteer.verify import CheckResult

        def fake_suite(suite, seed=0):
            return [CheckResult("doomed", False, "0", "1", "exact")]

        monkeypatch.setattr(gsteer.cli, "run_suite", fake_suite)
        assert main(["verify", "--suite", "properties"]) == 1
        out = capsys.readouterr().out
        assert "FAIL doomed" in out
        assert "0/1 checks passed" in out

    def test_unknown_suite_rejected_by_parser(self):
        with pytest.raises(SystemExit):
            main(["verify", "--suite", "bogus"])

    def test_unknown_suite_rejected_by_registry(self):
        from gsteer.verify import run_suite

        with pytest.raises(ValueError, match="unknown suite"):
            run_suite("bogus")


class TestRoundTrip:
    def test_state_parse_serialize_parse(self, witness_state_file):
        text = open(witness_state_file).read()
        first = state_from_json(text)
        serialized = state_to_json(first)
        second = state_from_json(serialized)
        assert np.array_equal(first.cov, second.cov)
        assert np.array_equal(first.mean, second.mean)
        assert state_to_json(second) == serialized
