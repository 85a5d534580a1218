"""Curie-Weiss mean-field ferromagnet with an O(n) magnetization sum.

n spins x_i in {-1,+1} interact through the fully connected energy

    E(x) = -(J / 2n) (sum_i x_i)^2 - h sum_i x_i

so everything depends on x only through the total magnetization
M = sum_i x_i in {-n, -n+2, ..., n}.  Grouping the 2^n configurations by M
with multiplicity Omega(M) = binom(n, (n+M)/2) collapses the partition sum
to 2n+1 terms:

    psi = log sum_M Omega(M) exp(-beta E(M)),   E(M) = -J M^2 / (2n) - h M.

As an exponential family this is two-dimensional: sufficient statistics
T(x) = (M, M^2 / (2n)) with natural parameters theta = (beta h, beta J).
All moments are exact sums over the magnetization distribution; log-domain
binomials (lgamma) keep every intermediate bounded.

The model has a second-order phase transition at critical coldness
beta_c = 1/J: |m| ~ 0 for beta < beta_c, |m| > 0 beyond it.

Order-parameter gradients (d/dm of the entropies) are computed from exact
moment identities rather than nested finite differences: the intensive
quantity dI/dm is an O(1) difference of two O(n) gradients, and stacked
FD noise swamps it long before n reaches interesting sizes.  A literal
FD-in-h path is kept alongside for cross-checks at small n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import (
    DegenerateDirectionError,
    ExpFamModel,
    InvalidParamsError,
    binary_entropy,
)

OBSERVABLE_FD_STEP = 1e-6


class CurieWeissModel(ExpFamModel):
    """Mean-field Ising model on n spins with coupling J, field h, coldness beta."""

    def __init__(self, n: int, coupling: float = 1.0, field: float = 0.0,
                 beta: float = 1.0):
        if n < 1:
            raise InvalidParamsError("n must be >= 1")
        if not (coupling > 0.0 and math.isfinite(coupling)):
            raise InvalidParamsError("coupling J must be positive and finite")
        if not (beta > 0.0 and math.isfinite(beta)):
            raise InvalidParamsError("beta must be positive and finite")
        if not math.isfinite(field):
            raise InvalidParamsError("field h must be finite")
        self.n_vars = n
        self.dim = 2
        self.coupling = coupling
        self.field = field
        self.beta = beta
        k = np.arange(n + 1)
        self._levels = -n + 2.0 * k                       # magnetization levels
        self._log_omega = (math.lgamma(n + 1)
                           - np.array([math.lgamma(i + 1) + math.lgamma(n - i + 1)
                                       for i in k]))
        # sufficient statistics per level: (M, M^2/(2n))
        self._T = np.stack([self._levels, self._levels**2 / (2.0 * n)], axis=1)

    def __repr__(self):
        return (f"CurieWeissModel(n={self.n_vars}, coupling={self.coupling}, "
                f"field={self.field}, beta={self.beta})")

    @property
    def beta_critical(self) -> float:
        return 1.0 / self.coupling

    def theta(self) -> np.ndarray:
        """Natural parameters (beta h, beta J) of this model's own state."""
        return np.array([self.beta * self.field, self.beta * self.coupling])

    def with_params(self, *, coupling=None, field=None, beta=None) -> "CurieWeissModel":
        return CurieWeissModel(
            self.n_vars,
            self.coupling if coupling is None else coupling,
            self.field if field is None else field,
            self.beta if beta is None else beta,
        )

    def marginal_cardinality(self) -> int:
        return 2

    # -- magnetization distribution ----------------------------------------

    def _distribution(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        ell = self._log_omega + self._T @ theta
        m = ell.max()
        w = np.exp(ell - m)
        z = w.sum()
        return float(m + np.log(z)), w / z

    # -- ExpFamModel interface ----------------------------------------------

    def log_partition(self, theta: np.ndarray) -> float:
        return self._distribution(theta)[0]

    def mean_parameters(self, theta: np.ndarray) -> np.ndarray:
        _, p = self._distribution(theta)
        return p @ self._T

    def fisher_information(self, theta: np.ndarray) -> np.ndarray:
        _, p = self._distribution(theta)
        mu = p @ self._T
        Tc = self._T - mu
        return Tc.T @ (p[:, None] * Tc)

    def third_cumulant_contraction(self, theta: np.ndarray, v: np.ndarray) -> np.ndarray:
        _, p = self._distribution(theta)
        mu = p @ self._T
        Tc = self._T - mu
        w = Tc @ v
        return Tc.T @ ((p * w)[:, None] * Tc)

    def magnetization(self, theta: np.ndarray) -> float:
        """Intensive magnetization m = <M>/n."""
        return float(self.mean_parameters(theta)[0] / self.n_vars)

    def marginal_entropies(self, theta: np.ndarray) -> np.ndarray:
        # exchangeable: every spin has the same +/- marginal (1 +- m)/2
        q = (1.0 + self.magnetization(theta)) / 2.0
        return np.full(self.n_vars, binary_entropy(q))

    def constraint_gradient(self, theta: np.ndarray) -> np.ndarray:
        # d(sum h)/dtheta_j = (1/2) log((1-q)/q) Cov(M, T_j); Cov(M, .) is row 0 of G
        G = self.fisher_information(theta)
        q = (1.0 + self.magnetization(theta)) / 2.0
        if q <= 0.0 or q >= 1.0:
            return np.zeros(2)
        return 0.5 * math.log((1.0 - q) / q) * G[0, :]


@dataclass(frozen=True)
class CwObservables:
    m_intensive: float
    mean_energy: float
    joint_entropy: float
    sum_marginals: float
    multi_information: float


@dataclass(frozen=True)
class CwOrderGradients:
    dI_dm: float
    dH_dm: float
    dSum_dm: float


def cw_log_partition(model: CurieWeissModel) -> float:
    """psi at the model's own (J, h, beta) via the magnetization sum."""
    return model.log_partition(model.theta())


def cw_observables(model: CurieWeissModel) -> CwObservables:
    """Magnetization, mean energy and the entropy ledger, from exact moments.

    <E> = -J <M^2>/(2n) - h <M> and H = psi + beta <E>; the per-spin marginal
    entropy is the binary entropy of (1+m)/2 and enters n-fold.
    """
    theta = model.theta()
    psi, p = model._distribution(theta)
    mu = p @ model._T
    m = float(mu[0] / model.n_vars)
    mean_energy = float(-(model.coupling * mu[1] + model.field * mu[0]))
    joint = psi + model.beta * mean_energy
    sum_h = model.n_vars * binary_entropy((1.0 + m) / 2.0)
    return CwObservables(m_intensive=m, mean_energy=mean_energy, joint_entropy=joint,
                         sum_marginals=sum_h, multi_information=sum_h - joint)


def cw_observables_fd(model: CurieWeissModel) -> CwObservables:
    """Observables via central differences of psi in h and beta.

    Cross-check path: m = (1/(beta n)) dpsi/dh with step 1e-6 max(1, |h|),
    <E> = -dpsi/dbeta likewise.  Accurate at moderate (n, beta); the exact
    route above should be preferred everywhere else.
    """
    dh = OBSERVABLE_FD_STEP * max(1.0, abs(model.field))
    db = OBSERVABLE_FD_STEP * max(1.0, model.beta)
    psi_hp = cw_log_partition(model.with_params(field=model.field + dh))
    psi_hm = cw_log_partition(model.with_params(field=model.field - dh))
    m = (psi_hp - psi_hm) / (2.0 * dh) / (model.beta * model.n_vars)
    psi_bp = cw_log_partition(model.with_params(beta=model.beta + db))
    psi_bm = cw_log_partition(model.with_params(beta=model.beta - db))
    mean_energy = -(psi_bp - psi_bm) / (2.0 * db)
    if not (math.isfinite(m) and math.isfinite(mean_energy)):
        raise InvalidParamsError("finite-difference observables are not finite")
    joint = cw_log_partition(model) + model.beta * mean_energy
    sum_h = model.n_vars * binary_entropy((1.0 + m) / 2.0)
    return CwObservables(m_intensive=m, mean_energy=mean_energy, joint_entropy=joint,
                         sum_marginals=sum_h, multi_information=sum_h - joint)


def cw_order_gradients(model: CurieWeissModel) -> CwOrderGradients:
    """Gradients of I, H and sum_i h_i along the magnetization direction.

    Each is (dQ/dh) / (dm/dh) at fixed beta, with the h-derivatives taken
    exactly through the natural-parameter chain rule (d/dh = beta d/dtheta_1):

        dm/dh      = beta Var(M) / n
        dH/dh      = -beta (G theta)_1
        d(sum h)/dh = (beta/2) log((1-q)/q) Var(M)

    dI/dm is their O(1) difference; for beta well past critical it decays
    towards zero once the minority magnetization well stops contributing.
    """
    theta = model.theta()
    G = model.fisher_information(theta)
    m = model.magnetization(theta)
    q = (1.0 + m) / 2.0
    dm_dh = model.beta * G[0, 0] / model.n_vars
    if abs(dm_dh) < 1e-14:
        raise DegenerateDirectionError(
            "magnetization does not respond to the field here (dm/dh ~ 0); "
            "no order-parameter direction to differentiate along")
    dH_dh = -model.beta * float(G[0, :] @ theta)
    dSum_dh = 0.5 * math.log((1.0 - q) / q) * model.beta * G[0, 0]
    dI_dh = dSum_dh - dH_dh
    return CwOrderGradients(dI_dm=dI_dh / dm_dh, dH_dm=dH_dh / dm_dh,
                            dSum_dm=dSum_dh / dm_dh)
