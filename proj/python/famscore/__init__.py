"""Family-robust ancestry scores for samples mixing unrelated individuals and sibships."""

from ._core import (
    NumericalError,
    ValidationError,
    __version__,
    ancestry_scores,
    detect_families,
    individual_scree,
    instability,
    rse,
    run_cli,
    scale_genotypes,
    scatter_svg,
    simulate,
    swiss,
)

METHODS = ("naive", "sp", "pcair", "fw", "fw-geo", "ms", "cpw", "fa")

__all__ = [
    "METHODS",
    "NumericalError",
    "ValidationError",
    "__version__",
    "ancestry_scores",
    "detect_families",
    "individual_scree",
    "instability",
    "rse",
    "run_cli",
    "scale_genotypes",
    "scatter_svg",
    "simulate",
    "swiss",
]
