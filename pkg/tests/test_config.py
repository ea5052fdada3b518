import pytest

from hfbgeo.control_plane.config import (
    ExperimentConfig,
    ExperimentConfigParser,
    HubbardSettings,
    build_config,
    load_config_file,
)
from hfbgeo.control_plane.config.experiment_config import ENV_RECORD_DIR, ENV_THREADS, parse_floats
from hfbgeo.core.errors import ConfigError, NoTrials


class TestLayering:
    def test_defaults(self, make_config):
        cfg = make_config()
        assert cfg == ExperimentConfig()
        assert cfg.hubbard == HubbardSettings()

    def test_file_over_env_and_flags_over_file(self):
        env = {ENV_THREADS: "3", ENV_RECORD_DIR: "env_runs"}
        file_data = {"experiment": {"sampling": {"trials": 7, "seed": 11}, "runtime": {"threads": 2}}}
        cfg = build_config("constants", file_data, {"seed": 5}, env=env)
        assert cfg.command == "constants"
        assert cfg.trials == 7
        assert cfg.seed == 5
        assert cfg.threads == 2
        assert cfg.record_dir == "env_runs"

    def test_environment_layer(self):
        cfg = build_config("suite", None, {}, env={ENV_THREADS: "4"})
        assert cfg.threads == 4

    def test_none_flags_are_ignored(self, make_config):
        assert make_config(trials=None).trials == ExperimentConfig().trials

    def test_positional_command_wins(self):
        cfg = build_config("geodesic", {"command": "constants"}, {}, env={})
        assert cfg.command == "geodesic"

    def test_flat_keys(self):
        cfg = build_config(None, {"command": "section-test", "n": 3, "spectrum": "0.5,0.2"}, {}, env={})
        assert (cfg.command, cfg.n, cfg.spectrum) == ("section-test", 3, (0.5, 0.2))

    def test_nested_blocks(self):
        data = {"hubbard": {"sites": "3", "u_int": 2, "periodic": "yes", "convention": "spinless"},
                "hfb": {"gradient_mode": "generator", "restarts": 0}}
        cfg = build_config("hfb-minimize", data, {"hubbard": {"mu": 0.5}}, env={})
        assert cfg.hubbard == HubbardSettings(sites=3, u_int=2.0, mu=0.5, convention="spinless", periodic=True)
        assert cfg.hfb.gradient_mode == "generator"
        assert cfg.hfb.to_params(9).seed == 9
        assert cfg.hfb.to_params(9).restarts == 0

    def test_to_dict_round_trips(self, make_config):
        cfg = make_config("constants", spectrum="0.5,0.3", n=3)
        data = cfg.to_dict()
        data.pop("command")
        assert build_config("constants", None, data, env={}) == cfg


class TestValidation:
    def test_zero_trials(self, make_config):
        with pytest.raises(NoTrials):
            make_config(trials=0)

    def test_suite_trials(self, make_config):
        assert make_config().suite_trials is None
        cfg = build_config("suite", {"sampling": {"suite_trials": 3}}, {}, env={})
        assert cfg.suite_trials == 3 and cfg.trials == ExperimentConfig().trials
        with pytest.raises(NoTrials):
            make_config(suite_trials=0)
        with pytest.raises(ConfigError):
            make_config(suite_trials=-2)

    @pytest.mark.parametrize(
        "flags",
        [
            {"trials": -1},
            {"n": 0},
            {"spectrum": "0.6"},
            {"spectrum": "0.4,0.3,0.2", "n": 2},
            {"tol": 0},
            {"threads": 0},
            {"seed": -1},
            {"hubbard": {"convention": "bosonic"}},
            {"hfb": {"gradient_mode": "newton"}},
            {"n": "four"},
        ],
    )
    def test_rejected(self, make_config, flags):
        with pytest.raises(ConfigError):
            make_config(**flags)

    def test_unknown_command(self):
        with pytest.raises(ConfigError):
            build_config("orbit-dance", None, {}, env={})

    def test_no_trials_is_a_config_error(self):
        assert issubclass(NoTrials, ConfigError)


class TestParser:
    def test_unknown_top_level_key(self):
        with pytest.raises(ConfigError, match="Unknown config keys"):
            ExperimentConfigParser({"colour": "blue"})

    def test_unknown_section_key(self):
        with pytest.raises(ConfigError, match="sampling"):
            ExperimentConfigParser({"sampling": {"trials": 3, "shots": 4}})

    def test_experiment_root_must_be_alone(self):
        with pytest.raises(ConfigError):
            ExperimentConfigParser({"experiment": {}, "n": 3})

    def test_section_overrides_flat_key(self):
        parser = ExperimentConfigParser({"n": 2, "dimensions": {"n": 5}})
        assert parser.get_dimensions() == {"n": 5}

    def test_parse_floats(self):
        assert parse_floats("0.4, 0", "spectrum") == (0.4, 0.0)
        assert parse_floats([0.5], "spectrum") == (0.5,)
        assert parse_floats(0.25, "spectrum") == (0.25,)
        with pytest.raises(ConfigError):
            parse_floats("0.4,x", "spectrum")


class TestFiles:
    def test_yaml(self, tmp_path):
        path = tmp_path / "c.yaml"
        path.write_text("experiment:\n  dimensions: {n: 3, spectrum: [0.5, 0.2]}\n")
        cfg = build_config("section-test", load_config_file(path), {}, env={})
        assert cfg.spectrum == (0.5, 0.2)

    def test_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"trials": 12}')
        assert load_config_file(path) == {"trials": 12}

    def test_empty_file(self, tmp_path):
        path = tmp_path / "c.yml"
        path.write_text("")
        assert load_config_file(path) == {}

    @pytest.mark.parametrize("name,text", [("c.yaml", "a: [1, 2"), ("c.json", "{\"a\": "), ("c.toml", "a = 1"),
                                           ("c.yaml", "- 1\n- 2\n")])
    def test_bad_files(self, tmp_path, name, text):
        path = tmp_path / name
        path.write_text(text)
        with pytest.raises(ConfigError):
            load_config_file(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config_file(tmp_path / "absent.yaml")
