"""Bivariate Gaussian oscillator in precision coordinates, all in closed form.

State variables (x, p) carry a zero-mean Gaussian with precision matrix

    K = [[theta_xx, theta_xp],
         [theta_xp, theta_pp]],      Sigma = K^{-1},

which as an exponential family means sufficient statistics
T = (-x^2/2, -p^2/2, -xp) and natural parameters
theta = (theta_xx, theta_pp, theta_xp).  Writing D = det K:

    psi  = log(2 pi) - (1/2) log D
    H    = log(2 pi e) - (1/2) log D
    h_x  = (1/2) log(2 pi e Sigma_11),   Sigma_11 = theta_pp / D
    h_p  = (1/2) log(2 pi e Sigma_22),   Sigma_22 = theta_xx / D

The Fisher information, its derivative tensor (third cumulants of the
quadratic statistics) and the gradient/Hessian of h_x + h_p are rational
functions of theta; they are spelled out entry by entry below and verified
against finite differences in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import ExpFamModel, InvalidParamsError, InvalidStateError

LOG_2PI = math.log(2.0 * math.pi)
LOG_2PIE = LOG_2PI + 1.0


def _split(theta: np.ndarray) -> tuple[float, float, float, float]:
    """Unpack (u, v, w) = (theta_xx, theta_pp, theta_xp) and det K, PD-checked."""
    u, v, w = float(theta[0]), float(theta[1]), float(theta[2])
    D = u * v - w * w
    if u <= 0.0 or v <= 0.0 or D <= 0.0:
        raise InvalidStateError(
            f"precision matrix not positive definite: "
            f"theta_xx={u}, theta_pp={v}, theta_xp={w}, det={D}")
    return u, v, w, D


class GaussianOscillatorModel(ExpFamModel):
    """Two jointly Gaussian variables parametrised by their precision matrix."""

    dim = 3
    n_vars = 2

    def __init__(self, theta=None):
        self.theta_base: np.ndarray | None = None
        if theta is not None:
            arr = np.asarray(theta, dtype=float)
            if arr.shape != (3,):
                raise InvalidParamsError(
                    f"theta must be (theta_xx, theta_pp, theta_xp), got shape {arr.shape}")
            _split(arr)
            self.theta_base = arr

    def __repr__(self):
        return f"GaussianOscillatorModel(theta_base={self.theta_base})"

    def covariance(self, theta: np.ndarray) -> np.ndarray:
        u, v, w, D = _split(theta)
        return np.array([[v, -w], [-w, u]]) / D

    def log_partition(self, theta: np.ndarray) -> float:
        _, _, _, D = _split(theta)
        return LOG_2PI - 0.5 * math.log(D)

    def mean_parameters(self, theta: np.ndarray) -> np.ndarray:
        # E[T] = (-Sigma_11/2, -Sigma_22/2, -Sigma_12)
        S = self.covariance(theta)
        return np.array([-0.5 * S[0, 0], -0.5 * S[1, 1], -S[0, 1]])

    def fisher_information(self, theta: np.ndarray) -> np.ndarray:
        u, v, w, D = _split(theta)
        D2 = D * D
        return np.array([
            [v * v / (2 * D2), w * w / (2 * D2), -v * w / D2],
            [w * w / (2 * D2), u * u / (2 * D2), -u * w / D2],
            [-v * w / D2, -u * w / D2, (D + 2 * w * w) / D2],
        ])

    def third_derivative_tensor(self, theta: np.ndarray) -> np.ndarray:
        """Totally symmetric tensor psi_abc of third partials of psi."""
        u, v, w, D = _split(theta)
        D3 = D ** 3
        t = np.zeros((3, 3, 3))

        def fill(i, j, k, val):
            for idx in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                t[idx] = val

        fill(0, 0, 0, -v ** 3 / D3)
        fill(0, 0, 1, -v * w * w / D3)
        fill(0, 0, 2, 2 * v * v * w / D3)
        fill(0, 1, 1, -u * w * w / D3)
        fill(0, 1, 2, w * (u * v + w * w) / D3)
        fill(0, 2, 2, -v * (D + 4 * w * w) / D3)
        fill(1, 1, 1, -u ** 3 / D3)
        fill(1, 1, 2, 2 * u * u * w / D3)
        fill(1, 2, 2, -u * (D + 4 * w * w) / D3)
        fill(2, 2, 2, 2 * w * (3 * D + 4 * w * w) / D3)
        return t

    def third_cumulant_contraction(self, theta: np.ndarray, v: np.ndarray) -> np.ndarray:
        return self.third_derivative_tensor(theta) @ np.asarray(v, dtype=float)

    def marginal_entropies(self, theta: np.ndarray) -> np.ndarray:
        u, v, w, D = _split(theta)
        return np.array([0.5 * (LOG_2PIE + math.log(v / D)),
                         0.5 * (LOG_2PIE + math.log(u / D))])

    def constraint_gradient(self, theta: np.ndarray) -> np.ndarray:
        # grad of h_x + h_p = log(2 pi e) + (1/2)(log u + log v - 2 log D)
        u, v, w, D = _split(theta)
        return np.array([0.5 / u - v / D, 0.5 / v - u / D, 2.0 * w / D])

    def constraint_hessian(self, theta: np.ndarray) -> np.ndarray:
        u, v, w, D = _split(theta)
        D2 = D * D
        return np.array([
            [-0.5 / (u * u) + v * v / D2, w * w / D2, -2 * v * w / D2],
            [w * w / D2, -0.5 / (v * v) + u * u / D2, -2 * u * w / D2],
            [-2 * v * w / D2, -2 * u * w / D2, 2.0 / D + 4 * w * w / D2],
        ])


@dataclass(frozen=True)
class GaussianClosedForms:
    psi: float
    fisher: np.ndarray
    joint_entropy: float
    h_x: float
    h_p: float
    constraint_gradient: np.ndarray


def gauss_closed_forms(model: GaussianOscillatorModel, theta=None) -> GaussianClosedForms:
    """Evaluate every closed form at theta (default: the model's base point)."""
    if theta is None:
        if model.theta_base is None:
            raise InvalidParamsError("no theta given and the model has no base point")
        theta = model.theta_base
    theta = np.asarray(theta, dtype=float)
    _, _, _, D = _split(theta)
    hx, hp = model.marginal_entropies(theta)
    return GaussianClosedForms(
        psi=model.log_partition(theta),
        fisher=model.fisher_information(theta),
        joint_entropy=LOG_2PIE - 0.5 * math.log(D),
        h_x=float(hx),
        h_p=float(hp),
        constraint_gradient=model.constraint_gradient(theta),
    )
