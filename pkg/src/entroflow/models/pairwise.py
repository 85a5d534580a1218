"""Pairwise binary exponential family, evaluated by exact enumeration.

The density over n binary variables is

    p(x | theta) = exp( sum_i theta_i x_i + sum_{i<j} theta_ij x_i x_j - psi )

with parameter layout: n bias slots first, then the n(n-1)/2 pair slots in
lexicographic order (1,2), (1,3), ..., (n-1,n).  Spins take values in
{-1,+1} ("ising") or {0,1} ("binary01"); the two conventions are related by
an affine reparametrisation but give different constraint geometry at the
same theta, so both are first-class.

Everything is computed from the full 2^n state table: log-domain weights
(shift-by-max), exact moments, exact marginalisation.  Memory and time are
O(2^n d), which is why construction is capped (default n <= 20, and oracle
tests stay at n <= 12).
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from ..core import ExpFamModel, InvalidParamsError

CONVENTIONS = ("ising", "binary01")

HARD_N_LIMIT = 20


def pair_slots(n: int) -> list[tuple[int, int]]:
    """Lexicographic (i, j) pairs, 0-based, i < j."""
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


class PairwiseBinaryModel(ExpFamModel):
    """n binary variables with biases and pairwise couplings, enumerated exactly."""

    def __init__(self, n: int, convention: str = "ising", max_n: int = HARD_N_LIMIT):
        if convention not in CONVENTIONS:
            raise InvalidParamsError(f"unknown spin convention {convention!r}; "
                                     f"expected one of {CONVENTIONS}")
        if max_n > HARD_N_LIMIT:
            raise InvalidParamsError(f"max_n cannot exceed the hard limit {HARD_N_LIMIT}")
        if not 2 <= n <= max_n:
            raise InvalidParamsError(
                f"n={n} outside the enumerable range [2, {max_n}] (2^n state table)")
        self.n_vars = n
        self.convention = convention
        self.pairs = pair_slots(n)
        self.dim = n + len(self.pairs)
        lo, hi = (-1.0, 1.0) if convention == "ising" else (0.0, 1.0)
        self._hi = hi
        states = np.array(list(itertools.product((lo, hi), repeat=n)), dtype=float)
        cols = [states] + [states[:, [i]] * states[:, [j]] for i, j in self.pairs]
        self.states = states                      # (2^n, n)
        self.suff_stats = np.concatenate(cols, axis=1)  # (2^n, d)
        self.theta_base: np.ndarray | None = None

    def __repr__(self):
        return f"PairwiseBinaryModel(n={self.n_vars}, convention={self.convention!r})"

    def parameter_labels(self) -> list[str]:
        names = [f"theta_{i + 1}" for i in range(self.n_vars)]
        names += [f"theta_{i + 1}{j + 1}" for i, j in self.pairs]
        return names

    def marginal_cardinality(self) -> int:
        return 2

    # -- distribution machinery -------------------------------------------

    def _log_weights(self, theta: np.ndarray) -> np.ndarray:
        return self.suff_stats @ theta

    def _distribution(self, theta: np.ndarray) -> tuple[float, np.ndarray]:
        """(psi, state probabilities) with shift-by-max normalisation."""
        ell = self._log_weights(theta)
        m = ell.max()
        w = np.exp(ell - m)
        z = w.sum()
        return float(m + np.log(z)), w / z

    # -- ExpFamModel interface --------------------------------------------

    def log_partition(self, theta: np.ndarray) -> float:
        return self._distribution(theta)[0]

    def mean_parameters(self, theta: np.ndarray) -> np.ndarray:
        _, p = self._distribution(theta)
        return p @ self.suff_stats

    def fisher_information(self, theta: np.ndarray) -> np.ndarray:
        _, p = self._distribution(theta)
        mu = p @ self.suff_stats
        Tc = self.suff_stats - mu
        return Tc.T @ (p[:, None] * Tc)

    def third_cumulant_contraction(self, theta: np.ndarray, v: np.ndarray) -> np.ndarray:
        # third cumulants equal third central moments
        _, p = self._distribution(theta)
        mu = p @ self.suff_stats
        Tc = self.suff_stats - mu
        w = Tc @ v
        return Tc.T @ ((p * w)[:, None] * Tc)

    def marginal_probabilities(self, theta: np.ndarray) -> np.ndarray:
        """q_i = P(x_i takes its upper value)."""
        _, p = self._distribution(theta)
        ind = (self.states == self._hi).astype(float)
        return p @ ind

    def marginal_entropies(self, theta: np.ndarray) -> np.ndarray:
        q = self.marginal_probabilities(theta)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms_q = np.where(q > 0.0, q * np.log(q), 0.0)
            terms_r = np.where(q < 1.0, (1.0 - q) * np.log(1.0 - q), 0.0)
        return -(terms_q + terms_r)

    def constraint_gradient(self, theta: np.ndarray) -> np.ndarray:
        # d h_i / d theta_j = log((1-q_i)/q_i) * Cov(1{x_i = hi}, T_j)
        _, p = self._distribution(theta)
        mu = p @ self.suff_stats
        Tc = self.suff_stats - mu
        a = np.zeros(self.dim)
        for i in range(self.n_vars):
            ind = (self.states[:, i] == self._hi).astype(float)
            q = float(p @ ind)
            if q <= 0.0 or q >= 1.0:
                continue  # saturated marginal: entropy gradient pinned at zero
            cov = (p * ind) @ Tc
            a += math.log((1.0 - q) / q) * cov
        return a


def build_pairwise(n: int, convention: str = "ising", theta=None,
                   max_n: int = HARD_N_LIMIT) -> PairwiseBinaryModel:
    """Construct a pairwise binary model, optionally pinning a base parameter point.

    theta, when given, must follow the bias-then-pairs layout and is stored
    on the model as ``theta_base`` for experiments that scale or start from
    a fixed point.
    """
    model = PairwiseBinaryModel(n, convention, max_n=max_n)
    if theta is not None:
        arr = np.asarray(theta, dtype=float)
        if arr.shape != (model.dim,):
            raise InvalidParamsError(
                f"theta must have length {model.dim} "
                f"(n biases then n(n-1)/2 pair couplings), got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InvalidParamsError("theta must be finite")
        model.theta_base = arr
    return model


def frustrated_theta() -> np.ndarray:
    """The unit-norm frustrated 3-variable point: zero biases and pair
    couplings (c, -c, c) with c = 1/sqrt(3), so equal-strength couplings
    that cannot all be satisfied at once."""
    c = 1.0 / math.sqrt(3.0)
    return np.array([0.0, 0.0, 0.0, c, -c, c])
