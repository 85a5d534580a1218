"""Model-agnostic exponential-family quantities.

A model describes a family p(x | theta) = exp(theta . T(x) - psi(theta)).
Everything here is derived from the log partition function psi and the
per-variable marginals:

    mu(theta)  = grad psi          (mean of the sufficient statistics)
    G(theta)   = hess psi          (Fisher information = Cov[T])
    H(theta)   = psi - theta . mu  (joint entropy, nats)
    grad H     = -G theta
    h_i        = entropy of the marginal p(x_i)
    I          = sum_i h_i - H     (multi-information, >= 0)

The sum of marginal entropies acts as the conserved functional of the
constrained dynamics; its gradient is available analytically from the
models shipped here and by Richardson finite differences for any model.

All entropies are in nats.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass

import numpy as np

from .numdiff import DEFAULT_REL_STEP, central_gradient

# negatives of I in [-NEG_I_CLAMP, 0] are floating-point cancellation, not signal
NEG_I_CLAMP = 1e-10


class InvalidParamsError(ValueError):
    """Natural parameter vector has the wrong shape or non-finite entries."""


class InvalidStateError(ValueError):
    """Parameters describe an invalid distribution (e.g. non-PD precision)."""


class DegenerateDirectionError(RuntimeError):
    """A requested directional derivative has no usable direction."""


@dataclass(frozen=True)
class EntropyReport:
    """Joint entropy, marginal entropies and their derived quantities at one point."""

    joint: float
    marginals: tuple[float, ...]
    multi_information: float
    constraint_value: float


class ExpFamModel(abc.ABC):
    """Interface every concrete exponential family implements.

    ``dim`` is the number of natural parameters, ``n_vars`` the number of
    underlying random variables.  Models are immutable after construction
    and all evaluation methods are pure functions of theta, so instances
    can be shared freely between threads.
    """

    dim: int
    n_vars: int

    @abc.abstractmethod
    def log_partition(self, theta: np.ndarray) -> float: ...

    @abc.abstractmethod
    def mean_parameters(self, theta: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def fisher_information(self, theta: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def third_cumulant_contraction(self, theta: np.ndarray, v: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def marginal_entropies(self, theta: np.ndarray) -> np.ndarray: ...

    def constraint_gradient(self, theta: np.ndarray) -> np.ndarray | None:
        """Analytic gradient of sum_i h_i, or None to use the FD fallback."""
        return None

    def constraint_hessian(self, theta: np.ndarray) -> np.ndarray | None:
        """Analytic Hessian of sum_i h_i, or None if not available."""
        return None

    def marginal_cardinality(self) -> int | None:
        """Support size of each variable for discrete models, else None."""
        return None


def as_natural_params(model: ExpFamModel, theta) -> np.ndarray:
    """Validate and return theta as a float64 vector of the model's dimension."""
    arr = np.asarray(theta, dtype=float)
    if arr.ndim != 1 or arr.size != model.dim:
        raise InvalidParamsError(
            f"expected a length-{model.dim} parameter vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParamsError("natural parameters must be finite")
    return arr


def log_partition(model: ExpFamModel, theta) -> float:
    return float(model.log_partition(as_natural_params(model, theta)))


def mean_parameters(model: ExpFamModel, theta) -> np.ndarray:
    return np.asarray(model.mean_parameters(as_natural_params(model, theta)), dtype=float)


def fisher_information(model: ExpFamModel, theta) -> np.ndarray:
    """Fisher information G = hess psi = Cov[T], symmetrised exactly."""
    G = np.asarray(model.fisher_information(as_natural_params(model, theta)), dtype=float)
    return 0.5 * (G + G.T)


def third_cumulant_contraction(model: ExpFamModel, theta, v) -> np.ndarray:
    """Matrix with entries sum_k (dG_ik / dtheta_j) v_k.

    The tensor grad G is the third cumulant of the sufficient statistics and
    is totally symmetric, so the contracted matrix is symmetric in (i, j);
    the output is symmetrised to remove rounding asymmetry.
    """
    theta = as_natural_params(model, theta)
    v = np.asarray(v, dtype=float)
    if v.shape != (model.dim,):
        raise InvalidParamsError(
            f"contraction vector must have length {model.dim}, got shape {v.shape}")
    C = np.asarray(model.third_cumulant_contraction(theta, v), dtype=float)
    return 0.5 * (C + C.T)


def joint_entropy(model: ExpFamModel, theta) -> float:
    theta = as_natural_params(model, theta)
    return float(model.log_partition(theta) - theta @ model.mean_parameters(theta))


def entropy_gradient(model: ExpFamModel, theta) -> np.ndarray:
    """grad H = -G(theta) theta."""
    theta = as_natural_params(model, theta)
    return -(fisher_information(model, theta) @ theta)


def marginal_entropies(model: ExpFamModel, theta) -> np.ndarray:
    hs = np.asarray(model.marginal_entropies(as_natural_params(model, theta)), dtype=float)
    if not np.all(np.isfinite(hs)):
        raise InvalidStateError("marginal entropies are not finite")
    return hs


def constraint_value(model: ExpFamModel, theta) -> float:
    """sum_i h_i via compensated summation."""
    return math.fsum(marginal_entropies(model, theta))


def constraint_gradient(model: ExpFamModel, theta, *, force_fd: bool = False,
                        richardson: bool = True) -> np.ndarray:
    """Gradient of sum_i h_i with respect to theta.

    Uses the model's analytic form when available; otherwise Richardson
    central differences with per-coordinate steps 6e-6 * max(1, |theta_j|).
    Set force_fd=True to take the finite-difference route regardless, e.g.
    to cross-check an analytic implementation.
    """
    theta = as_natural_params(model, theta)
    if not force_fd:
        a = model.constraint_gradient(theta)
        if a is not None:
            a = np.asarray(a, dtype=float)
            if not np.all(np.isfinite(a)):
                raise InvalidStateError("constraint gradient is not finite")
            return a

    def c_of(t):
        return math.fsum(model.marginal_entropies(t))

    a = central_gradient(c_of, theta, rel_step=DEFAULT_REL_STEP, richardson=richardson)
    if not np.all(np.isfinite(a)):
        raise InvalidStateError("finite-difference constraint gradient is not finite")
    return a


def multi_information(model: ExpFamModel, theta) -> float:
    """I = sum_i h_i - H, clamped for tiny negative cancellation residue."""
    theta = as_natural_params(model, theta)
    hs = marginal_entropies(model, theta)
    H = joint_entropy(model, theta)
    I = math.fsum([*hs, -H])
    if -NEG_I_CLAMP <= I < 0.0:
        return 0.0
    return I


def entropy_report(model: ExpFamModel, theta) -> EntropyReport:
    """All entropy-level quantities at theta in one pass."""
    theta = as_natural_params(model, theta)
    hs = marginal_entropies(model, theta)
    H = joint_entropy(model, theta)
    c = math.fsum(hs)
    I = math.fsum([*hs, -H])
    if -NEG_I_CLAMP <= I < 0.0:
        I = 0.0
    return EntropyReport(joint=H, marginals=tuple(float(h) for h in hs),
                         multi_information=I, constraint_value=c)


def binary_entropy(q: float) -> float:
    """Entropy in nats of a two-point distribution with weights (q, 1-q)."""
    h = 0.0
    for z in (q, 1.0 - q):
        if z > 0.0:
            h -= z * math.log(z)
    return h
