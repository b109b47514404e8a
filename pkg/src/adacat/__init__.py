"""Adaptive Catalyst: accelerated proximal envelope over adaptive inner solvers."""

from .envelope import CatalystConfig, catalyst_run
from .numkit import Rng
from .oracle import Oracle, ProxOracle
from .problems import gen_quadratic, lf_estimate, load_bundled_subset, logistic_oracle, quadratic_oracle

__version__ = "0.1.0"

__all__ = [
    "CatalystConfig",
    "catalyst_run",
    "Rng",
    "Oracle",
    "ProxOracle",
    "gen_quadratic",
    "lf_estimate",
    "load_bundled_subset",
    "logistic_oracle",
    "quadratic_oracle",
]
