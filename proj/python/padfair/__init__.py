"""PAD error rates, group fairness metrics and FairSWAP augmentation."""

from ._core import (
    Error,
    abf,
    apcer,
    bpcer,
    eer,
    fairness_curve,
    fairswap,
    fdr,
    threshold_at_apcer,
)

__all__ = [
    "Error",
    "abf",
    "apcer",
    "bpcer",
    "eer",
    "fairness_curve",
    "fairswap",
    "fdr",
    "threshold_at_apcer",
]
