"""On/off branching Brownian motion.

Exposes:
- `Particle`, `Population`, `Flag`: particle containers
- `simulate`, `BranchingSimulator`, `replicate_rng`: exact event-driven runs
- `rightmost`, `additive_martingale`, `population_counts`: functionals
- `rightmost_speed`, `empirical_rightmost_cdf`, `martingale_paths`:
  replicate statistics
- `onoff_occupation`, `onoff_bm_feynman_kac`: single-path estimators
"""

from .feynman_kac import expected_occupation, onoff_bm_feynman_kac, onoff_occupation
from .population import (
    Flag,
    Particle,
    Population,
    additive_martingale,
    population_counts,
    rightmost,
)
from .simulate import DEFAULT_CAP, BranchingSimulator, replicate_rng, simulate
from .stats import (
    CdfEstimate,
    RightmostStat,
    empirical_rightmost_cdf,
    founder_martingale,
    martingale_paths,
    martingale_weights,
    rightmost_speed,
    run_replicates,
)

__all__ = [
    "BranchingSimulator",
    "CdfEstimate",
    "DEFAULT_CAP",
    "Flag",
    "Particle",
    "Population",
    "RightmostStat",
    "additive_martingale",
    "empirical_rightmost_cdf",
    "expected_occupation",
    "founder_martingale",
    "martingale_paths",
    "martingale_weights",
    "onoff_bm_feynman_kac",
    "onoff_occupation",
    "population_counts",
    "replicate_rng",
    "rightmost",
    "rightmost_speed",
    "run_replicates",
    "simulate",
]
