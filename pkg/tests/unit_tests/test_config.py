import pytest

from morrey.config import (
    ConfigManager,
    ExperimentConfig,
    default_output_dir,
    parse_config,
    serialize_config,
)
from morrey.errors import ConfigError


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ("MORREY_P", "MORREY_ELL", "MORREY_K", "MORREY_OUT"):
        monkeypatch.delenv(key, raising=False)


class TestExperimentConfig:

    def test_reference_defaults(self):
        config = ExperimentConfig()
        assert (config.n, config.ell, config.k, config.p) == (2, 6, 10, 4.0)
        assert config.tau == 1e-10
        assert config.max_iters == 10 ** 8
        assert config.out == default_output_dir()
        assert config.out.endswith("morrey/runs")

    @pytest.mark.parametrize("kwargs", [
        dict(n=3),
        dict(ell=1),
        dict(k=0),
        dict(p=2.0),
        dict(n=1, p=1.5),
        dict(tau=0.0),
        dict(levels=[0.05]),
        dict(analysis=["holder", "spectrum"]),
        dict(seminorm_mode="fast"),
        dict(x0=[0.0, 1.0, 2.0]),
        dict(alpha=1.0, beta=1.0),
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            ExperimentConfig(**kwargs)

    def test_small_p_with_smoothing(self):
        config = ExperimentConfig(n=1, p=1.5, smoothing_eps=1e-3)
        assert config.p == 1.5

    def test_environment(self, monkeypatch):
        monkeypatch.setenv("MORREY_ELL", "3")
        assert ExperimentConfig().ell == 3
        assert ExperimentConfig(ell=4).ell == 4


class TestSerialization:

    def test_round_trip(self, tmp_path):
        config = ExperimentConfig(n=2, ell=3, k=4, p=6.0, adaptive=True, x0=[0.0, 1.0],
                                  y0=[0.0, -1.0], analysis=["holder", "gap"], out=str(tmp_path))
        assert parse_config(serialize_config(config)) == config

    def test_defaults_round_trip(self):
        config = ExperimentConfig()
        assert parse_config(serialize_config(config)) == config

    def test_comments_and_overrides(self):
        text = "# reference problem\n\nell = 3\nk=4\n"
        config = parse_config(text, k=8, p=None)
        assert (config.ell, config.k, config.p) == (3, 8, 4.0)

    def test_lists_from_text(self):
        config = parse_config("analysis=holder, bounds\nlevels=0.3,0.7\n")
        assert config.analysis == ["holder", "bounds"]
        assert config.levels == [0.3, 0.7]

    @pytest.mark.parametrize("text, match", [
        ("ell 3\n", "expected key=value"),
        ("colour=blue\n", "unknown key"),
        ("ell=one\n", "ell"),
    ])
    def test_invalid(self, text, match):
        with pytest.raises(ConfigError, match=match):
            parse_config(text)


class TestConfigManager:

    def test_without_file(self):
        cm = ConfigManager(ell=3, k=None)
        assert cm.config_path is None
        assert cm.C.ell == 3
        assert cm.C.k == 10

    def test_save_and_load(self, tmp_path):
        path = tmp_path / "conf" / "run.cfg"
        cm = ConfigManager(ell=3, k=4)
        cm.save_config(path)
        loaded = ConfigManager(path, p=6.0)
        assert loaded.config_path == path
        assert (loaded.C.ell, loaded.C.k, loaded.C.p) == (3, 4, 6.0)

    def test_save_needs_a_path(self):
        with pytest.raises(ConfigError):
            ConfigManager().save_config()

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            ConfigManager(tmp_path / "absent.cfg")

    def test_invalid_override(self):
        with pytest.raises(ConfigError):
            ConfigManager(ell=1)

    def test_set_and_get(self):
        cm = ConfigManager()
        cm.set("k", 20)
        assert cm.get("k") == 20
        assert cm.get("missing", "fallback") == "fallback"
        with pytest.raises(ConfigError):
            cm.set("k", 0)

