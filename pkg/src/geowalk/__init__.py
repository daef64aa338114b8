"""Random walks on groups acting on trees, the hyperbolic plane and lamplighter graphs.

Exact word-metric geometry, drift and boundary estimation, and tracking
diagnostics against finite-time pencils of geodesics.
"""
from .walks import FiniteMeasure, ResourceError, bilateral_walk, make_rng, trial_seed, walk
from .tree import FreeGroup, ReducedWord, parse_word, format_word
from .hplane import MoebiusGroup, MoebiusMap
from .lamplighter import LampConfig, LampState, LamplighterGroup
from .floyd import ScalingFunction, floyd_distance, karlsson_bound
from .tracking import drift_estimate, tracking_profile, tracking_trial

__version__ = "0.1.0"

__all__ = [
    "FiniteMeasure",
    "ResourceError",
    "bilateral_walk",
    "make_rng",
    "trial_seed",
    "walk",
    "FreeGroup",
    "ReducedWord",
    "parse_word",
    "format_word",
    "MoebiusGroup",
    "MoebiusMap",
    "LampConfig",
    "LampState",
    "LamplighterGroup",
    "ScalingFunction",
    "floyd_distance",
    "karlsson_bound",
    "drift_estimate",
    "tracking_profile",
    "tracking_trial",
]
