"""Harmonic germs: smooth critical points, invariants, models and curve samplers."""

from .germ import (GermError, HarmonicGerm, RejectionReason, SmoothCriticalData,
                   SmoothCriticalRejection, complexify, germ_order, recenter1,
                   smooth_critical_test, to_analytic)
from .multiplicity import (InvariantReport, compute_mu, j_invariant, mu_general,
                           mu_order_sum, mu_relation_fastpath)
from .model import (ConstructionError, PrenormalForm, TopologicalModel, classify_model,
                    construct_germ, prenormalize, series_root_power)
from .curves import CurveResult, CurveSample, SamplerError, curvature_check, estimate_j, sample_curves

__all__ = [
    "GermError",
    "HarmonicGerm",
    "RejectionReason",
    "SmoothCriticalData",
    "SmoothCriticalRejection",
    "complexify",
    "germ_order",
    "recenter1",
    "smooth_critical_test",
    "to_analytic",
    "InvariantReport",
    "compute_mu",
    "j_invariant",
    "mu_general",
    "mu_order_sum",
    "mu_relation_fastpath",
    "ConstructionError",
    "PrenormalForm",
    "TopologicalModel",
    "classify_model",
    "construct_germ",
    "prenormalize",
    "series_root_power",
    "CurveResult",
    "CurveSample",
    "SamplerError",
    "curvature_check",
    "estimate_j",
    "sample_curves",
]
