"""Local structure of the constrained flow: Jacobian split and bracket tests.

At a point theta the Jacobian M of the constrained field splits algebraically
into M = S + A with S = (M + M^T)/2 symmetric and A = (M - M^T)/2
antisymmetric.  S carries the dissipative character of the local dynamics, A
the conservative rotations induced by the interplay of the constraint
gradient a and the multiplier gradient grad nu; the Frobenius norm ratio
|A|/|S| measures which dominates.

The Jacobian itself is either assembled in closed form,

    M = -G - (grad G)[theta] + nu hess C + a (grad nu)^T,
    grad nu = (G a + (grad G)[theta] a + hess C . G theta - 2 nu hess C . a) / |a|^2,

for models exposing an analytic constraint Hessian (the Gaussian oscillator),
or taken column by column as Richardson central differences of the field.

The bracket {f, g} = grad f . A grad g is probed for the Jacobi identity on
coordinate triplets:

    J_ijk = sum_l ( A_il d_l A_jk + A_jl d_l A_ki + A_kl d_l A_ij ),

with d_l A obtained by Richardson differences of the A-field.  Triplets with
a repeated index vanish identically (exact antisymmetry of each evaluated A),
so the usable noise floor is measured by recomputing the whole tensor at half
the differencing step and taking the largest shift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    ExpFamModel,
    as_natural_params,
    constraint_gradient,
    entropy_gradient,
    fisher_information,
    third_cumulant_contraction,
)
from .dynamics import flow_field
from .numdiff import coordinate_steps, richardson_pair

JACOBIAN_GUARD = 1e-8        # |a| below this: constrained Jacobian undefined
JACOBIAN_FD_STEP = 6e-6
RATIO_S_FLOOR = 1e-14        # |S| below this: ratio reported as undefined
RESIDUAL_EPS = 1e-300
JACOBI_STEP_FD = 5e-3        # outer step when A comes from an FD Jacobian
JACOBI_STEP_ANALYTIC = 1e-3


class FlatConstraintError(RuntimeError):
    """Jacobian undefined at a constraint-flat point (|a| within the guard)."""


@dataclass(frozen=True)
class GenericDecomposition:
    """Symmetric/antisymmetric split of a flow Jacobian at one point."""

    M: np.ndarray
    S: np.ndarray
    A: np.ndarray
    norm_S: float
    norm_A: float
    ratio: float | None             # None when norm_S is numerically zero
    residual_Sa: float | None = None
    residual_AgradH: float | None = None
    nu: float | None = None


@dataclass(frozen=True)
class JacobiReport:
    """Cyclic bracket sums over all ordered coordinate triplets."""

    violations: dict[tuple[int, int, int], float]
    max_abs: float
    normalized_max: float           # max_abs / |A|_F^2 (0 when A vanishes)
    nonzero_triplets: int           # distinct-index triplets above 10x the floor
    noise_floor: float
    norm_A: float


def flow_jacobian(model: ExpFamModel, theta, method: str = "fd",
                  rel_step: float = JACOBIAN_FD_STEP) -> np.ndarray:
    """Jacobian of the constrained flow at theta.

    method "fd": Richardson central differences of the field, column by
    column.  method "analytic": closed-form assembly; requires the model to
    provide an analytic constraint Hessian.
    """
    theta = as_natural_params(model, theta)
    a = constraint_gradient(model, theta)
    if float(np.linalg.norm(a)) < JACOBIAN_GUARD:
        raise FlatConstraintError(
            "constraint gradient vanishes here (flat constraint); the constrained "
            "flow is not differentiable and the Jacobian is undefined")
    if method == "analytic":
        return _analytic_jacobian(model, theta, a)
    if method != "fd":
        raise ValueError(f"method must be 'fd' or 'analytic', got {method!r}")

    steps = coordinate_steps(theta, rel_step)
    d = model.dim
    M = np.empty((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = steps[j]
        d1 = (flow_field(model, theta + e, "constrained")
              - flow_field(model, theta - e, "constrained")) / (2.0 * steps[j])
        d2 = (flow_field(model, theta + 0.5 * e, "constrained")
              - flow_field(model, theta - 0.5 * e, "constrained")) / steps[j]
        M[:, j] = richardson_pair(d1, d2)
    return M


def _analytic_jacobian(model: ExpFamModel, theta: np.ndarray, a: np.ndarray) -> np.ndarray:
    hess_c = model.constraint_hessian(theta)
    if hess_c is None:
        raise ValueError(
            f"{type(model).__name__} provides no analytic constraint Hessian; "
            "use method='fd'")
    G = fisher_information(model, theta)
    T3 = third_cumulant_contraction(model, theta, theta)   # (grad G)[theta]
    g_theta = G @ theta
    norm_a2 = float(a @ a)
    nu = float(a @ g_theta) / norm_a2
    grad_nu = (G @ a + T3 @ a + hess_c @ g_theta - 2.0 * nu * (hess_c @ a)) / norm_a2
    return -G - T3 + nu * hess_c + np.outer(a, grad_nu)


def sa_decompose(M: np.ndarray, model: ExpFamModel | None = None,
                 theta=None) -> GenericDecomposition:
    """Split M into S + A with Frobenius norms and their ratio.

    Passing the model context (model, theta) additionally fills the
    degeneracy residuals and the Lagrange multiplier at that point.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"M must be square, got shape {M.shape}")
    S = 0.5 * (M + M.T)
    A = 0.5 * (M - M.T)
    norm_S = float(np.linalg.norm(S))
    norm_A = float(np.linalg.norm(A))
    ratio = None if norm_S < RATIO_S_FLOOR else norm_A / norm_S
    res_sa = res_ah = nu = None
    if model is not None:
        if theta is None:
            raise ValueError("theta is required when model context is given")
        from .dynamics import lagrange_multiplier
        theta = as_natural_params(model, theta)
        res_sa, res_ah = degeneracy_residuals(model, theta, S, A)
        nu = lagrange_multiplier(model, theta)
    return GenericDecomposition(M=M, S=S, A=A, norm_S=norm_S, norm_A=norm_A,
                                ratio=ratio, residual_Sa=res_sa,
                                residual_AgradH=res_ah, nu=nu)


def degeneracy_residuals(model: ExpFamModel, theta, S: np.ndarray,
                         A: np.ndarray) -> tuple[float, float]:
    """Normalised sizes of S a and A grad H.

    residual_Sa    = |S a|      / (|S|_F |a|      + eps)
    residual_AgradH = |A grad H| / (|A|_F |grad H| + eps)

    Both would vanish if the dissipative part annihilated the constraint
    gradient and the conservative part annihilated the entropy gradient.
    """
    theta = as_natural_params(model, theta)
    a = constraint_gradient(model, theta)
    grad_h = entropy_gradient(model, theta)
    res_sa = float(np.linalg.norm(S @ a)
                   / (np.linalg.norm(S) * np.linalg.norm(a) + RESIDUAL_EPS))
    res_ah = float(np.linalg.norm(A @ grad_h)
                   / (np.linalg.norm(A) * np.linalg.norm(grad_h) + RESIDUAL_EPS))
    return res_sa, res_ah


def _antisymmetric_field(model: ExpFamModel, theta: np.ndarray, method: str) -> np.ndarray:
    M = flow_jacobian(model, theta, method=method)
    return 0.5 * (M - M.T)


def _bracket_tensor(model: ExpFamModel, theta: np.ndarray, method: str,
                    step: float) -> tuple[np.ndarray, np.ndarray]:
    """(A, J) with J_ijk the cyclic sums at differencing scale ``step``."""
    d = model.dim
    A0 = _antisymmetric_field(model, theta, method)
    dA = np.empty((d, d, d))      # dA[l] = dA/dtheta_l
    steps = coordinate_steps(theta, step)
    for l in range(d):
        e = np.zeros(d)
        e[l] = steps[l]
        d1 = (_antisymmetric_field(model, theta + e, method)
              - _antisymmetric_field(model, theta - e, method)) / (2.0 * steps[l])
        d2 = (_antisymmetric_field(model, theta + 0.5 * e, method)
              - _antisymmetric_field(model, theta - 0.5 * e, method)) / steps[l]
        dA[l] = richardson_pair(d1, d2)
    J = (np.einsum("il,ljk->ijk", A0, dA)
         + np.einsum("jl,lki->ijk", A0, dA)
         + np.einsum("kl,lij->ijk", A0, dA))
    return A0, J


def jacobi_violation(model: ExpFamModel, theta, method: str | None = None,
                     step: float | None = None) -> JacobiReport:
    """Evaluate the Jacobi sums for the bracket induced by A at theta.

    The full tensor is computed twice, at the base differencing step and at
    half of it; the largest entry-wise shift between the two is the reported
    noise floor, and distinct-index triplets whose base-step value exceeds
    ten times that floor count as genuine violations.
    """
    theta = as_natural_params(model, theta)
    if method is None:
        method = "analytic" if model.constraint_hessian(theta) is not None else "fd"
    if step is None:
        step = JACOBI_STEP_ANALYTIC if method == "analytic" else JACOBI_STEP_FD

    A0, J = _bracket_tensor(model, theta, method, step)
    _, J_half = _bracket_tensor(model, theta, method, 0.5 * step)

    d = model.dim
    distinct = [(i, j, k) for i in range(d) for j in range(d) for k in range(d)
                if len({i, j, k}) == 3]
    noise_floor = max((abs(J[t] - J_half[t]) for t in distinct), default=0.0)
    violations = {(i, j, k): float(J[i, j, k])
                  for i in range(d) for j in range(d) for k in range(d)}
    max_abs = float(np.abs(J).max()) if J.size else 0.0
    norm_A = float(np.linalg.norm(A0))
    normalized = max_abs / norm_A**2 if norm_A > 0.0 else 0.0
    threshold = 10.0 * noise_floor
    nonzero = sum(1 for t in distinct if abs(J[t]) > threshold)
    return JacobiReport(violations=violations, max_abs=max_abs,
                        normalized_max=normalized, nonzero_triplets=nonzero,
                        noise_floor=float(noise_floor), norm_A=norm_A)


@dataclass(frozen=True)
class SweepPoint:
    beta: float
    norm_S: float
    norm_A: float
    ratio: float | None


@dataclass(frozen=True)
class SweepResult:
    points: list[SweepPoint]
    failures: dict[float, str]      # beta -> reason, for points that errored
    peak_beta: float | None
    peak_ratio: float | None

    def interior_local_maxima(self) -> list[SweepPoint]:
        """Points strictly inside the grid that are >= both neighbours."""
        pts = [p for p in self.points if p.ratio is not None]
        out = []
        for prev, cur, nxt in zip(pts, pts[1:], pts[2:]):
            if cur.ratio >= prev.ratio and cur.ratio >= nxt.ratio:
                out.append(cur)
        return out


def coldness_sweep(model: ExpFamModel, theta_base, betas,
                   method: str = "fd", threads: int = 1) -> SweepResult:
    """Decompose the flow Jacobian at theta = beta * theta_base over a beta grid.

    Failed points are skipped (recorded with their reason) and the sweep
    continues.  Results are assembled in grid order, so the output does not
    depend on the number of worker threads.
    """
    theta_base = as_natural_params(model, theta_base)
    betas = [float(b) for b in betas]
    if any(b <= 0.0 for b in betas):
        raise ValueError("all beta values must be positive")
    if sorted(betas) != betas:
        raise ValueError("beta grid must be sorted ascending")

    def eval_point(beta: float):
        M = flow_jacobian(model, beta * theta_base, method=method)
        dec = sa_decompose(M)
        return SweepPoint(beta=beta, norm_S=dec.norm_S, norm_A=dec.norm_A,
                          ratio=dec.ratio)

    results: list[SweepPoint | None] = [None] * len(betas)
    failures: dict[float, str] = {}
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {i: pool.submit(eval_point, b) for i, b in enumerate(betas)}
        for i, fut in futures.items():
            try:
                results[i] = fut.result()
            except Exception as exc:   # noqa: BLE001 - per-point isolation
                failures[betas[i]] = str(exc)
    else:
        for i, b in enumerate(betas):
            try:
                results[i] = eval_point(b)
            except Exception as exc:   # noqa: BLE001 - per-point isolation
                failures[b] = str(exc)

    points = [p for p in results if p is not None]
    peak_beta = peak_ratio = None
    with_ratio = [p for p in points if p.ratio is not None and math.isfinite(p.ratio)]
    if with_ratio:
        best = max(with_ratio, key=lambda p: p.ratio)
        peak_beta, peak_ratio = best.beta, best.ratio
    return SweepResult(points=points, failures=failures,
                       peak_beta=peak_beta, peak_ratio=peak_ratio)
