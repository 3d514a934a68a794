"""Shared fixtures: unit parameters for every model, small grids, settings."""

import pytest

from seedwave.config.settings import Settings
from seedwave.core.model import ModelParams, Variant
from seedwave.pde.grid import Grid1D


@pytest.fixture
def seedbank() -> ModelParams:
    return ModelParams.unit(Variant.SEED_BANK)


@pytest.fixture
def spore() -> ModelParams:
    return ModelParams.unit(Variant.SPORE)


@pytest.fixture
def classical() -> ModelParams:
    return ModelParams.unit(Variant.CLASSICAL)


@pytest.fixture(params=[Variant.CLASSICAL, Variant.SEED_BANK, Variant.SPORE], ids=lambda v: v.value)
def any_model(request) -> ModelParams:
    return ModelParams.unit(request.param)


@pytest.fixture
def small_grid() -> Grid1D:
    return Grid1D.from_bounds(-20.0, 30.0, 0.2)


@pytest.fixture
def settings(tmp_path) -> Settings:
    return Settings(output_dir=str(tmp_path / "out"), threads=1)
