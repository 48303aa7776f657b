import pytest
import yaml

from morrey.cli.experiment import (
    CHECKPOINT_DIR,
    CONTOUR_FILE,
    FIELD_FILE,
    MANIFEST_FILE,
    REPORT_FILE,
    execute,
    run_experiment,
)
from morrey.config import ExperimentConfig
from morrey.field import load_archive


def line_config(out, **kwargs):
    values = dict(n=1, ell=2, k=5, tau=1e-4, adaptive=True, rel_tol=1e-8, max_iters=400_000,
                  analysis=["holder", "bounds", "gap", "stability"], out=str(out))
    values.update(kwargs)
    return ExperimentConfig(**values)


def without_out(text):
    return [line for line in text.splitlines() if not line.startswith("out = ")]


class TestExecute:

    def test_1d_run(self, tmp_path):
        result = execute(line_config(tmp_path), quiet=True)
        for name in (FIELD_FILE, REPORT_FILE, MANIFEST_FILE):
            assert (tmp_path / name).exists()
        assert not (tmp_path / CONTOUR_FILE).exists()
        assert load_archive(tmp_path / FIELD_FILE).field == result.state.field
        text = (tmp_path / REPORT_FILE).read_text()
        assert text == result.report_text
        assert "verdict = PASS" in text
        assert "[holder]" in text
        assert "[gap]" not in text
        manifest = yaml.safe_load((tmp_path / MANIFEST_FILE).read_text())
        assert manifest["stop_reason"] == "converged"

    def test_reports_are_reproducible(self, tmp_path):
        a = execute(line_config(tmp_path / "a"), quiet=True)
        b = execute(line_config(tmp_path / "b"), quiet=True)
        assert without_out(a.report_text) == without_out(b.report_text)

    def test_2d_run_writes_contours(self, tmp_path):
        config = ExperimentConfig(n=2, ell=3, k=4, tau=1e-4, adaptive=True, max_iters=500,
                                  stability_trials=1, out=str(tmp_path))
        assert run_experiment(config, quiet=True) == 0
        contours = (tmp_path / CONTOUR_FILE).read_text().splitlines()
        assert contours[0] == "# morrey contours n=2 ell=3 k=4"
        assert sum(line.startswith("level ") for line in contours) == 9
        report = (tmp_path / REPORT_FILE).read_text()
        for section in ("[config]", "[gap]", "[holder]", "[properties]", "[singular]",
                        "[stability]", "[summary]"):
            assert section in report

    def test_custom_pins_skip_canonical_checks(self, tmp_path):
        config = ExperimentConfig(n=2, ell=3, k=4, tau=1e-4, adaptive=True, max_iters=200,
                                  x0=[1.0, 0.0], y0=[-1.0, 0.0], alpha=3.0, beta=1.0,
                                  analysis=["holder", "symmetry", "bounds"], out=str(tmp_path))
        result = execute(config, quiet=True)
        assert result.constraints.high.value == 3.0
        assert "antisymmetry" not in result.report_text
        assert "bounds = " in result.report_text

    def test_resume(self, tmp_path):
        first = line_config(tmp_path / "first", max_iters=50, rel_tol=0.0, checkpoint_every=50)
        execute(first, quiet=True)
        checkpoint = tmp_path / "first" / CHECKPOINT_DIR / "field-0000000050.archive"
        assert checkpoint.exists()
        second = line_config(tmp_path / "second", max_iters=100, rel_tol=0.0,
                             resume=str(checkpoint))
        assert execute(second, quiet=True).state.iteration == 100


class TestExitCodes:

    def test_pins_off_the_grid(self, tmp_path):
        config = line_config(tmp_path, x0=[0.33])
        assert run_experiment(config, quiet=True) == 1

    def test_divergence(self, tmp_path):
        config = line_config(tmp_path, tau=10.0, adaptive=False, max_iters=100)
        assert run_experiment(config, quiet=True) == 2

    def test_missing_checkpoint(self, tmp_path):
        config = line_config(tmp_path, resume=str(tmp_path / "absent.archive"))
        assert run_experiment(config, quiet=True) == 3

    def test_mismatched_checkpoint(self, tmp_path):
        execute(line_config(tmp_path / "a", max_iters=5, rel_tol=0.0, checkpoint_every=5),
                quiet=True)
        checkpoint = tmp_path / "a" / CHECKPOINT_DIR / "field-0000000005.archive"
        config = line_config(tmp_path / "b", k=10, resume=str(checkpoint))
        assert run_experiment(config, quiet=True) == 1

