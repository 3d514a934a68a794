import math

import numpy as np
import pytest

from seedwave.core.errors import DomainError
from seedwave.core.model import (
    ModelParams,
    OffspringLaw,
    Variant,
    effective_selection,
    load_params_file,
    selection_term,
)


def test_unit_binary_branching_has_selection_one(seedbank):
    assert seedbank.c == seedbank.c_prime == seedbank.kappa == 1.0
    assert seedbank.law.probs == (1.0,)
    assert effective_selection(seedbank) == 1.0


def test_effective_selection_uses_mean_extra_offspring():
    params = ModelParams(kappa=2.0, law=OffspringLaw(probs=(0.5, 0.5)))
    assert params.s == pytest.approx(2.0 * 1.5)


def test_offspring_law_must_be_normalized():
    with pytest.raises(ValueError):
        OffspringLaw(probs=(0.5, 0.4))


def test_offspring_probabilities_in_unit_interval():
    with pytest.raises(ValueError):
        OffspringLaw(probs=(1.5, -0.5))


def test_offspring_cdf_ends_at_one():
    law = OffspringLaw(probs=(0.2, 0.3, 0.5))
    np.testing.assert_allclose(law.cdf(), [0.2, 0.5, 1.0])
    assert law.max_extra == 3


def test_classical_rejects_switching_rates():
    with pytest.raises(ValueError):
        ModelParams(variant="classical", c=1.0, c_prime=0.0)


def test_negative_rates_rejected():
    with pytest.raises(ValueError):
        ModelParams(c=-1.0)


@pytest.mark.parametrize(
    "alias, expected",
    [("I", Variant.SEED_BANK), ("seed_bank", Variant.SEED_BANK), ("II", Variant.SPORE), ("fkpp", Variant.CLASSICAL)],
)
def test_variant_aliases(alias, expected):
    assert Variant.parse(alias) is expected


def test_unknown_variant():
    with pytest.raises(DomainError):
        Variant.parse("dormant")


def test_as_variant_drops_rates_for_classical(seedbank):
    classical = seedbank.as_variant("classical")
    assert classical.c == classical.c_prime == 0.0
    assert classical.s == seedbank.s


def test_with_selection_rescales_kappa():
    params = ModelParams(law=OffspringLaw(probs=(0.0, 1.0)))
    assert params.with_selection(3.0).kappa == pytest.approx(1.5)
    with pytest.raises(DomainError):
        params.with_selection(0.0)


def test_from_mapping_defaults_classical_rates():
    params = ModelParams.from_mapping({"variant": "classical", "kappa": 2.0, "offspring": [1.0]})
    assert params.variant is Variant.CLASSICAL
    assert params.c == 0.0 and params.s == 2.0


def test_load_params_file(tmp_path):
    path = tmp_path / "params.toml"
    path.write_text('variant = "spore"\nc = 0.5\nc_prime = 2.0\nkappa = 1.0\noffspring = [1.0]\nT = 12.0\n')
    values = load_params_file(path)
    params = ModelParams.from_mapping(values)
    assert params.variant is Variant.SPORE
    assert params.c_prime == 2.0
    assert values["T"] == 12.0


def test_selection_term_vanishes_at_endpoints(seedbank):
    np.testing.assert_allclose(selection_term(np.array([0.0, 1.0]), seedbank), [0.0, 0.0])


def test_selection_term_binary_matches_u_squared_minus_u(seedbank):
    u = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(selection_term(u, seedbank), u * u - u, atol=1e-15)
    assert np.all(selection_term(u, seedbank) <= 0.0)


def test_selection_term_derivative_at_one_is_s():
    params = ModelParams(kappa=1.3, law=OffspringLaw(probs=(0.25, 0.25, 0.5)))
    h = 1e-6
    slope = (selection_term(1.0, params) - selection_term(1.0 - h, params)) / h
    assert slope == pytest.approx(params.s, rel=1e-4)


def test_selection_term_outside_unit_interval(seedbank):
    with pytest.raises(DomainError):
        selection_term(np.array([1.2]), seedbank)


def test_describe_is_flat(spore):
    described = spore.describe()
    assert described["variant"] == "spore"
    assert described["s"] == 1.0
    assert not math.isnan(described["kappa"])
