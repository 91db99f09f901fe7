"""Exact enumeration, adsorption bounds and sampling for lattice trees, animals and walks."""

from .enumeration import EnsembleSpec, count, enumerate_ensemble, span_stats, surface_profile
from .errors import InvalidConfiguration, ResourceLimitExceeded
from .lattice import Polymer, Walk

__all__ = [
    "EnsembleSpec",
    "InvalidConfiguration",
    "Polymer",
    "ResourceLimitExceeded",
    "Walk",
    "count",
    "enumerate_ensemble",
    "span_stats",
    "surface_profile",
]
