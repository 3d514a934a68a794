"""Model parameters, offspring laws and the selection nonlinearity.

`ModelParams` is the single source of truth for every layer: the closed-form
speed functions, the finite-difference solver and the particle simulator all
read their rates from it. Instances are frozen pydantic models and can be
shared freely between threads.

Offspring convention: ``probs[k-1]`` is the probability ``p_k`` that a
branching event produces ``k + 1`` particles (the parent plus ``k`` copies).
"""

from __future__ import annotations

import tomllib
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Mapping, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .errors import DomainError

MAX_OFFSPRING_CLASSES = 64
NORMALIZATION_TOLERANCE = 1e-12

ArrayLike = Union[float, np.ndarray]


class Variant(str, Enum):
    """Which of the three reaction-diffusion models a parameter set describes."""

    CLASSICAL = "classical"
    SEED_BANK = "seedbank"
    SPORE = "spore"

    @classmethod
    def parse(cls, value: Union[str, "Variant"]) -> "Variant":
        """Parse a variant from its name, accepting a few common aliases."""
        if isinstance(value, Variant):
            return value
        aliases = {
            "classical": cls.CLASSICAL,
            "fkpp": cls.CLASSICAL,
            "seedbank": cls.SEED_BANK,
            "seed_bank": cls.SEED_BANK,
            "i": cls.SEED_BANK,
            "spore": cls.SPORE,
            "ii": cls.SPORE,
        }
        key = str(value).strip().lower()
        if key not in aliases:
            raise DomainError(
                f"Unknown variant: {value}. Supported variants: classical, seedbank, spore"
            )
        return aliases[key]


class OffspringLaw(BaseModel):
    """Truncated offspring law ``(p_k)_{k=1..K}``.

    Attributes:
        probs: ``probs[k-1] = p_k``, the probability of ``k + 1`` offspring.
    """

    model_config = ConfigDict(frozen=True)

    probs: Tuple[float, ...] = Field(
        ..., min_length=1, max_length=MAX_OFFSPRING_CLASSES, description="p_1..p_K"
    )

    @field_validator("probs")
    @classmethod
    def validate_probs(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        """Check entries lie in [0, 1] and sum to one.

        Raises:
            ValueError: If an entry is out of range or the law is not normalized.
        """
        for k, p in enumerate(value, start=1):
            if not (0.0 <= p <= 1.0):
                raise ValueError(f"p_{k}={p} is not a probability")
        total = float(np.sum(value))
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            raise ValueError(f"Offspring probabilities sum to {total!r}, expected 1")
        return tuple(float(p) for p in value)

    @classmethod
    def binary(cls) -> "OffspringLaw":
        """Binary branching: every event produces two particles."""
        return cls(probs=(1.0,))

    @property
    def max_extra(self) -> int:
        """Largest number of additional particles per event."""
        return len(self.probs)

    def mean_increment(self) -> float:
        """Expected number of additional particles per event, ``sum_k p_k k``."""
        ks = np.arange(1, len(self.probs) + 1)
        return float(np.dot(self.probs, ks))

    def cdf(self) -> np.ndarray:
        """Cumulative distribution over ``k = 1..K`` (last entry forced to 1)."""
        cdf = np.cumsum(self.probs)
        cdf[-1] = 1.0
        return cdf


class ModelParams(BaseModel):
    """Rates and offspring law of one model.

    Attributes:
        variant: Classical F-KPP, seed-bank model (variant I) or spore model
            (variant II).
        c: Switching rate active -> dormant. Unused for the classical model
            and must be 0 there.
        c_prime: Switching rate dormant -> active. Same rule as ``c``.
        kappa: Branching rate.
        law: Offspring law.
    """

    model_config = ConfigDict(frozen=True)

    variant: Variant = Variant.SEED_BANK
    c: float = Field(default=1.0, ge=0.0, description="active -> dormant rate")
    c_prime: float = Field(default=1.0, ge=0.0, description="dormant -> active rate")
    kappa: float = Field(default=1.0, gt=0.0, description="branching rate")
    law: OffspringLaw = Field(default_factory=OffspringLaw.binary)

    @field_validator("variant", mode="before")
    @classmethod
    def parse_variant(cls, value: Any) -> Variant:
        return Variant.parse(value)

    @model_validator(mode="after")
    def check_classical_rates(self) -> "ModelParams":
        if self.variant is Variant.CLASSICAL and (self.c != 0.0 or self.c_prime != 0.0):
            raise ValueError("Classical model takes no switching rates (c = c_prime = 0)")
        if effective_selection(self) <= 0.0:
            raise ValueError("Effective selection strength must be positive")
        return self

    @classmethod
    def unit(cls, variant: Union[str, Variant] = Variant.SEED_BANK) -> "ModelParams":
        """Unit parameters ``c = c' = kappa = 1`` with binary branching."""
        variant = Variant.parse(variant)
        if variant is Variant.CLASSICAL:
            return cls(variant=variant, c=0.0, c_prime=0.0)
        return cls(variant=variant)

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> "ModelParams":
        """Build parameters from a flat key/value mapping.

        Recognized keys: ``variant``, ``c``, ``c_prime``, ``kappa`` and
        ``offspring`` (list of ``p_k``). Unknown keys are ignored so one file
        can also carry numeric options.
        """
        fields: Dict[str, Any] = {
            key: data[key] for key in ("variant", "c", "c_prime", "kappa") if key in data
        }
        if "offspring" in data:
            fields["law"] = OffspringLaw(probs=tuple(data["offspring"]))
        if Variant.parse(fields.get("variant", Variant.SEED_BANK)) is Variant.CLASSICAL:
            fields.setdefault("c", 0.0)
            fields.setdefault("c_prime", 0.0)
        return cls(**fields)

    @property
    def s(self) -> float:
        """Effective selection strength (see `effective_selection`)."""
        return effective_selection(self)

    def as_variant(self, variant: Union[str, Variant]) -> "ModelParams":
        """Same branching mechanism and rates, another model variant.

        Switching rates are dropped when converting to the classical model.
        """
        variant = Variant.parse(variant)
        if variant is Variant.CLASSICAL:
            return self.model_copy(update={"variant": variant, "c": 0.0, "c_prime": 0.0})
        return self.model_copy(update={"variant": variant})

    def with_selection(self, s: float) -> "ModelParams":
        """Rescale ``kappa`` so that the effective selection equals ``s``."""
        if s <= 0.0:
            raise DomainError(f"Selection strength must be positive, got {s}")
        return self.model_copy(update={"kappa": s / self.law.mean_increment()})

    def with_rates(self, **rates: float) -> "ModelParams":
        """Copy with new switching rates, validated like a fresh instance."""
        return ModelParams(**{**self.model_dump(), **rates, "law": self.law})

    def describe(self) -> Dict[str, Any]:
        """Flat description used in report and CSV headers."""
        return {
            "variant": self.variant.value,
            "c": self.c,
            "c_prime": self.c_prime,
            "kappa": self.kappa,
            "offspring": list(self.law.probs),
            "s": self.s,
        }


def load_params_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a TOML key/value experiment file.

    Returns:
        The parsed mapping; pass it to `ModelParams.from_mapping`.
    """
    with open(path, "rb") as handle:
        return tomllib.load(handle)


def effective_selection(params: ModelParams) -> float:
    """Return ``s = kappa * sum_k p_k k``.

    This is the derivative at ``u = 1`` of the selection term
    ``kappa * sum_k p_k (u^{k+1} - u)``, i.e. the branching rate times the mean
    number of additional particles per event.
    """
    return params.kappa * params.law.mean_increment()


def _selection_coefficients(params: ModelParams) -> np.ndarray:
    coeffs = np.zeros(params.law.max_extra + 2)
    coeffs[2:] = params.law.probs
    coeffs[1] = -1.0
    return params.kappa * coeffs


def selection_term(u: ArrayLike, params: ModelParams) -> ArrayLike:
    """Evaluate ``kappa * sum_k p_k (u^{k+1} - u)``.

    Args:
        u: Frequency or array of frequencies in [0, 1].
        params: Model parameters.

    Returns:
        Same shape as ``u``; non-positive on [0, 1].

    Raises:
        DomainError: If any entry of ``u`` lies outside [0, 1].
    """
    values = np.asarray(u, dtype=float)
    if np.any(values < 0.0) or np.any(values > 1.0):
        raise DomainError("selection_term is defined on [0, 1] only")
    result = P.polyval(values, _selection_coefficients(params))
    if np.ndim(u) == 0:
        return float(result)
    return result
