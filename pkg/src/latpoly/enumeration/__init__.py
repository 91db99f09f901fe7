"""Exact enumeration of lattice trees, animals and self-avoiding walks."""

from .ensembles import (
    BRIDGE,
    CONTAINS_ORIGIN,
    HALF_SPACE,
    LEX_STAR,
    TRANSLATION_CLASSES,
    WALK,
    EnsembleSpec,
    SpanStats,
    SupermultReport,
    SurfaceProfile,
    class_summary,
    count,
    count_single_contact,
    enumerate_ensemble,
    log2_contacts,
    span_stats,
    span_threshold,
    supermultiplicativity_check,
    surface_profile,
    walk_summary,
)

__all__ = [
    "BRIDGE",
    "CONTAINS_ORIGIN",
    "HALF_SPACE",
    "LEX_STAR",
    "TRANSLATION_CLASSES",
    "WALK",
    "EnsembleSpec",
    "SpanStats",
    "SupermultReport",
    "SurfaceProfile",
    "class_summary",
    "count",
    "count_single_contact",
    "enumerate_ensemble",
    "log2_contacts",
    "span_stats",
    "span_threshold",
    "supermultiplicativity_check",
    "surface_profile",
    "walk_summary",
]
