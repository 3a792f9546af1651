"""LATE estimation with one instrument that may violate exclusion and a second
that may violate monotonicity."""

import json as _json

from ._dualiv import (
    BoundsResult,
    ComplierMeans,
    DirectEffects,
    DualivError,
    InferenceResult,
    LateComponents,
    Metrics,
    SimReport,
    SubgroupProbs,
    __version__,
    complier_means,
    estimate_report,
    generate_sample,
    infer,
    influence,
    late_bounds,
    late_estimate,
    load_csv,
    run_monte_carlo,
    true_late,
)


def estimate(y, d, z, w, **kwargs):
    """Full estimation report as a dict (same schema as `dualiv estimate`)."""
    kwargs["format"] = "json"
    return _json.loads(estimate_report(y, d, z, w, **kwargs))


__all__ = [
    "BoundsResult",
    "ComplierMeans",
    "DirectEffects",
    "DualivError",
    "InferenceResult",
    "LateComponents",
    "Metrics",
    "SimReport",
    "SubgroupProbs",
    "__version__",
    "complier_means",
    "estimate",
    "estimate_report",
    "generate_sample",
    "infer",
    "influence",
    "late_bounds",
    "late_estimate",
    "load_csv",
    "run_monte_carlo",
    "true_late",
]
