"""Numerical checks of flatness and rigidity for real and complex Finsler metrics."""

from ._core import (
    DomainError,
    FinslerError,
    Metric,
    MetricKind,
    NumericsError,
    ParseError,
    UnknownMetric,
    UsageError,
    __version__,
    check,
    fundamental_tensors,
    geodesic,
    homogeneity_residual,
    jet,
    jet_discrepancy,
    metric,
    metric_from_expr,
    parse_eval,
    proof_chain,
    residual,
    rigidity_scan,
    scaled,
    spray,
    to_real,
    zoo,
)

__all__ = [
    "DomainError",
    "FinslerError",
    "Metric",
    "MetricKind",
    "NumericsError",
    "ParseError",
    "UnknownMetric",
    "UsageError",
    "__version__",
    "check",
    "fundamental_tensors",
    "geodesic",
    "homogeneity_residual",
    "jet",
    "jet_discrepancy",
    "metric",
    "metric_from_expr",
    "parse_eval",
    "proof_chain",
    "residual",
    "rigidity_scan",
    "scaled",
    "spray",
    "to_real",
    "zoo",
]
