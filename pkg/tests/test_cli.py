import json
from pathlib import Path

import pytest
import yaml

from hfbgeo import __version__
from hfbgeo.cli import EXIT_BAD_INPUT, EXIT_CHECK_FAILED, EXIT_OK, build_parser, flags_from_args, main
from hfbgeo.execution_plane.common.connectors.evidence_store import EvidenceStore

INPUTS = Path(__file__).parent.parent / "staging" / "inputs"


def _section(out, *extra):
    return ["section-test", "--spec", "0.4,0", "--n", "4", "--trials", "5", "--seed", "7",
            "--out", str(out), "-q", *extra]


class TestArguments:
    def test_flags_nest_model_settings(self):
        args = build_parser().parse_args(["hfb-minimize", "--L", "2", "--U", "4", "--restarts", "1", "--seed", "3"])
        flags = flags_from_args(args)
        assert flags == {"seed": 3, "hubbard": {"sites": 2, "u_int": 4.0}, "hfb": {"restarts": 1}}

    def test_suite_trials_flag(self):
        assert flags_from_args(build_parser().parse_args(["suite", "--trials", "3"])) == {"suite_trials": 3}
        assert flags_from_args(build_parser().parse_args(["constants", "--trials", "3"])) == {"trials": 3}

    def test_model_flags_only_on_hfb_minimize(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["constants", "--U", "4"])

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["orbit-dance"])


class TestSweeps:
    def test_section_csv(self, tmp_path):
        out = tmp_path / "section.csv"
        assert main(_section(out)) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == f"# hfbgeo {__version__} section-test seed=7"
        assert lines[1].startswith("trial,seed,distance,inside_radius")
        assert lines[1].endswith(",error")
        assert len(lines) == 2 + 5
        assert [line.split(",")[0] for line in lines[2:]] == ["0", "1", "2", "3", "4"]

    def test_reruns_are_byte_identical(self, tmp_path):
        first, second, threaded = tmp_path / "a.csv", tmp_path / "b.csv", tmp_path / "c.csv"
        assert main(_section(first)) == EXIT_OK
        assert main(_section(second)) == EXIT_OK
        assert main(_section(threaded, "--threads", "3")) == EXIT_OK
        assert first.read_bytes() == second.read_bytes() == threaded.read_bytes()

    def test_record_dir(self, tmp_path):
        records = tmp_path / "runs"
        out = tmp_path / "cocycle.csv"
        code = main(["cocycle-test", "--n", "3", "--spec", "0.4,0.1", "--trials", "3",
                     "--out", str(out), "--record-dir", str(records), "-q"])
        assert code == EXIT_OK
        (record,) = EvidenceStore.list_runs(records)
        assert record["command"] == "cocycle-test"
        assert record["status"] == "SUCCESS"
        assert record["rows"] == 3
        assert record["config"]["spectrum"] == [0.4, 0.1]

    def test_config_file_with_flag_override(self, tmp_path):
        config = tmp_path / "geo.yaml"
        config.write_text(yaml.safe_dump({"experiment": {"n": 3, "sampling": {"trials": 2, "t_values": [0.5, 1.0]}}}))
        out = tmp_path / "geo.csv"
        assert main(["geodesic", "--config", str(config), "--trials", "1", "--out", str(out), "-q"]) == EXIT_OK
        # one trial, two t values
        assert len(out.read_text().splitlines()) == 2 + 2


class TestDiagonalize:
    def test_pair_input(self, tmp_path):
        out = tmp_path / "w.json"
        assert main(["diagonalize", "--in", str(INPUTS / "g_pair.json"), "--out", str(out), "-q"]) == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["lambda"] == pytest.approx([0.5 - 0.08 ** 0.5] * 2, abs=1e-12)
        assert payload["residual"] < 1e-10
        assert set(payload["W"]) == {"u", "v", "residual"}

    def test_malformed_json(self, capsys):
        assert main(["diagonalize", "--in", str(INPUTS / "g_malformed.json"), "-q"]) == EXIT_BAD_INPUT
        assert "configuration error" in capsys.readouterr().err

    def test_missing_block(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"gamma": {"n": 1, "re": [[0.2]]}}))
        assert main(["diagonalize", "--in", str(path), "-q"]) == EXIT_BAD_INPUT

    def test_inadmissible(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"gamma": {"n": 1, "re": [[2.0]]}, "alpha": {"n": 1, "re": [[0.0]]}}))
        assert main(["diagonalize", "--in", str(path), "-q"]) == EXIT_BAD_INPUT

    def test_missing_file(self, tmp_path):
        assert main(["diagonalize", "--in", str(tmp_path / "absent.json"), "-q"]) == EXIT_BAD_INPUT


class TestBadConfiguration:
    @pytest.mark.parametrize("extra", [["--spec", "0.7"], ["--trials", "0"], ["--spec", "0.4,0.3,0.2", "--n", "2"]])
    def test_exit_two(self, tmp_path, extra, capsys):
        code = main(["constants", "--out", str(tmp_path / "c.csv"), "-q", *extra])
        assert code == EXIT_BAD_INPUT
        assert capsys.readouterr().err.startswith("hfbgeo: configuration error")

    def test_missing_config_file(self, tmp_path):
        assert main(["constants", "--config", str(tmp_path / "none.yaml"), "-q"]) == EXIT_BAD_INPUT

    def test_fock_cap(self, tmp_path):
        code = main(["fock-verify", "--n", "5", "--fock-cap", "4", "--out", str(tmp_path / "f.csv"), "-q"])
        assert code == EXIT_BAD_INPUT


class TestHfbMinimize:
    def test_spinless_dimer(self, tmp_path):
        out = tmp_path / "result.json"
        code = main(["hfb-minimize", "--L", "2", "--t", "1", "--U", "0", "--convention", "spinless",
                     "--restarts", "1", "--seed", "3", "--out", str(out), "-q"])
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["exact_ground_energy"] == pytest.approx(-1.0)
        assert payload["gap"] == pytest.approx(0.0, abs=1e-6)
        assert len(payload["lambdas"]) == 2


def _manifest(name, path, version="1.0.0", **params):
    return {
        "manifest": {
            "identity": {"name": name, "domain": "tests", "owner": "hfbgeo"},
            "evolution": {"manifest_version": "1.0.0", "manifest_schema_version": "1.0.0",
                          "engine": "python", "engine_version": "1.0.0"},
            "intent": {
                "defaults": {},
                "steps": [{"step": "only", "component": {"path": path, "version": version}, "params": params}],
            },
        }
    }


class TestSuite:
    def test_tiny_suite(self, tmp_path, capsys):
        path = tmp_path / "cli_suite_v1.0.0.yaml"
        path.write_text(yaml.safe_dump(_manifest("cli_suite", "v1.symplectic_checks.run",
                                                 dimensions=[2], trials=2, spectra=[[0.4, 0.0]])))
        assert main(["suite", "--suite", str(path), "-q"]) == EXIT_OK
        summary = capsys.readouterr().out
        assert "sympkahler.cocycle_identity" in summary
        assert "FAIL" not in summary

    def test_trials_flag_overrides_manifest(self, tmp_path):
        path = tmp_path / "cli_suite_v1.0.0.yaml"
        path.write_text(yaml.safe_dump(_manifest("cli_suite", "v1.group_checks.run", dimensions=[2], trials=50)))
        records = tmp_path / "runs"
        out = tmp_path / "summary.csv"
        code = main(["suite", "--suite", str(path), "--trials", "2", "--record-dir", str(records),
                     "--out", str(out), "-q"])
        assert code == EXIT_OK
        (record,) = EvidenceStore.list_runs(records)
        assert record["config"]["suite_trials"] == 2
        unitary = next(line for line in out.read_text().splitlines() if line.startswith("boggroup.unitary,"))
        assert unitary.split(",")[1] == "2"

    def test_component_version_mismatch(self, tmp_path, capsys):
        path = tmp_path / "bad_v1.0.0.yaml"
        path.write_text(yaml.safe_dump(_manifest("bad", "v1.group_checks.run", version="3.0.0")))
        assert main(["suite", "--suite", str(path), "-q"]) == EXIT_BAD_INPUT
        assert "VERSION MISMATCH" in capsys.readouterr().err


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_CHECK_FAILED, EXIT_BAD_INPUT}) == 3
