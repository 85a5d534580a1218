"""Concrete exponential families: pairwise binary, Curie-Weiss, Gaussian oscillator."""

from .curie_weiss import (
    CurieWeissModel,
    CwObservables,
    CwOrderGradients,
    cw_log_partition,
    cw_observables,
    cw_observables_fd,
    cw_order_gradients,
)
from .gaussian import GaussianClosedForms, GaussianOscillatorModel, gauss_closed_forms
from .pairwise import PairwiseBinaryModel, build_pairwise, frustrated_theta

__all__ = [
    "CurieWeissModel",
    "CwObservables",
    "CwOrderGradients",
    "GaussianClosedForms",
    "GaussianOscillatorModel",
    "PairwiseBinaryModel",
    "build_pairwise",
    "cw_log_partition",
    "cw_observables",
    "cw_observables_fd",
    "cw_order_gradients",
    "frustrated_theta",
    "gauss_closed_forms",
]
