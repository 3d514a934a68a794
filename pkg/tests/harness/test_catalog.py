import pytest

from seedwave.core.errors import ConfigurationError, ExperimentFailure
from seedwave.harness.base import BaseExperiment, ExperimentMetadata
from seedwave.harness.manager import ExperimentCatalog, default_catalog

EXPECTED = [
    "critical",
    "ordering",
    "eigenstructure",
    "sweeps",
    "phase_transition",
    "fronts",
    "supercritical_wave",
    "subcritical_front",
    "rightmost",
    "duality",
    "martingale",
    "feynman_kac",
]


class AlwaysFails(BaseExperiment):
    @staticmethod
    def get_metadata() -> ExperimentMetadata:
        return ExperimentMetadata(name="always_fails", anchor="nothing", description="fails")

    def run(self, report):
        report.close("wrong", 2.0, 1.0, 0.1)


class Passes(BaseExperiment):
    @staticmethod
    def get_metadata() -> ExperimentMetadata:
        return ExperimentMetadata(name="passes", anchor="identity", description="passes")

    def run(self, report):
        report.close("right", 1.0, 1.0, 0.0)
        self.write_csv("values.csv", report.to_frame())


def test_default_catalog_names(settings):
    assert default_catalog(settings).names() == EXPECTED


def test_describe_lists_anchors_and_slow_marker(settings):
    lines = default_catalog(settings).describe()
    assert len(lines) == len(EXPECTED)
    assert lines[0].startswith("critical")
    assert any("[slow]" in line for line in lines)


def test_metadata_validation():
    with pytest.raises(ValueError):
        ExperimentMetadata(name="has space", anchor="a", description="d")
    with pytest.raises(ValueError):
        ExperimentMetadata(name="ok", anchor=" ", description="d")


def test_duplicate_registration(settings):
    catalog = ExperimentCatalog(settings)
    catalog.register(Passes)
    with pytest.raises(ConfigurationError):
        catalog.register(Passes)


def test_unknown_experiment(settings):
    with pytest.raises(ConfigurationError):
        ExperimentCatalog(settings).get("missing")


def test_run_tracks_passed_and_failed(settings, tmp_path):
    catalog = ExperimentCatalog(settings)
    catalog.register(Passes)
    catalog.register(AlwaysFails)
    reports = catalog.run_many(output_dir=str(tmp_path), threads=2)
    assert [r.name for r in reports] == ["passes", "always_fails"]
    assert catalog.passed_experiments == {"passes"}
    assert catalog.failed_experiments == {"always_fails"}
    assert (tmp_path / "passes" / "values.csv").exists()
    assert (tmp_path / "passes" / "metrics.csv").exists()
    assert str(tmp_path / "passes" / "values.csv") in reports[0].artifacts


def test_strict_run_raises(settings):
    catalog = ExperimentCatalog(settings)
    catalog.register(AlwaysFails)
    with pytest.raises(ExperimentFailure):
        catalog.run("always_fails", strict=True)


def test_quick_mode_budgets(settings):
    experiment = Passes(settings, quick=True)
    assert experiment.replicates(200) == 50
    assert experiment.replicates(40) == 30
    assert experiment.pde_dx() == pytest.approx(2 * settings.pde_dx)
    assert Passes(settings).replicates(200) == 200
    assert experiment.horizon(40.0) == 10.0
    assert experiment.horizon(15.0, minimum=10.0) == 10.0
    assert Passes(settings).horizon(40.0) == 40.0
