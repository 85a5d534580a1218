"""Constrained maximum-entropy-production flow on the natural-parameter manifold.

The state theta relaxes by gradient ascent on the joint entropy,
grad H = -G theta, while the total marginal entropy sum_i h_i is held at its
initial value C.  Tangency is enforced by a Lagrange multiplier

    nu = a . (G theta) / |a|^2,        a = grad sum_i h_i,

so the constrained field is F = -G theta + nu a, equal to the Euclidean
tangent projection -(I - a a^T/|a|^2) G theta.  Where |a| falls below the
guard the constraint surface is locally flat in every useful direction and
the field reverts to plain -G theta with nu = 0.

Integration is classical fixed-step RK4.  The field is tangent to the
constraint surface by construction, so drift only enters at integrator
truncation order; a safeguarded one-dimensional Newton projection along a
repairs it whenever it exceeds a tight trigger, and the step is halved (at
most a few times) if the repair cannot hold the surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import (
    ExpFamModel,
    as_natural_params,
    constraint_gradient,
    constraint_value,
    fisher_information,
    joint_entropy,
    multi_information,
)

MODES = ("constrained", "unconstrained")

NU_GUARD = 1e-10            # |a| below this: constraint force dropped
FLOW_TOL = 1e-8             # ||F|| below this: converged
DRIFT_REPAIR_TRIGGER = 1e-9  # post-step drift that triggers projection
DRIFT_ACCEPT = 1e-8          # post-repair drift that forces step halving
MAX_HALVINGS = 10
PROJECTION_TOL = 1e-10
PROJECTION_MAX_ITER = 20


class InvalidFlowError(RuntimeError):
    """Flow evaluation produced a non-finite value."""


class ProjectionError(RuntimeError):
    """Newton repair along the constraint gradient failed to converge."""


class IntegrationError(RuntimeError):
    """The integrator aborted; carries the trajectory accumulated so far."""

    def __init__(self, message: str, trajectory: "Trajectory | None" = None):
        super().__init__(message)
        self.trajectory = trajectory


@dataclass(frozen=True)
class TrajectoryRecord:
    tau: float
    theta: np.ndarray
    joint_entropy: float
    sum_marginals: float
    multi_information: float
    nu: float


@dataclass
class Trajectory:
    """Time-ordered records of one integration run."""

    mode: str
    records: list[TrajectoryRecord] = field(default_factory=list)
    termination: str = "max_steps"   # "converged" | "max_steps"
    c_target: float | None = None

    @property
    def final(self) -> TrajectoryRecord:
        return self.records[-1]

    def thetas(self) -> np.ndarray:
        return np.stack([r.theta for r in self.records])

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    def max_drift(self) -> float:
        if self.c_target is None:
            return 0.0
        return max(abs(r.sum_marginals - self.c_target) for r in self.records)


def lagrange_multiplier(model: ExpFamModel, theta) -> float:
    """nu = a.(G theta)/|a|^2, or 0 inside the flat-constraint guard."""
    theta = as_natural_params(model, theta)
    a = constraint_gradient(model, theta)
    norm_a = float(np.linalg.norm(a))
    if norm_a < NU_GUARD:
        return 0.0
    G = fisher_information(model, theta)
    nu = float(a @ (G @ theta)) / (norm_a * norm_a)
    if not math.isfinite(nu):
        raise InvalidFlowError(f"Lagrange multiplier is not finite at theta={theta}")
    return nu


def flow_field(model: ExpFamModel, theta, mode: str = "constrained") -> np.ndarray:
    """Relaxation field: -G theta, plus nu a in constrained mode."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    theta = as_natural_params(model, theta)
    G = fisher_information(model, theta)
    f = -(G @ theta)
    if mode == "constrained":
        a = constraint_gradient(model, theta)
        norm_a = float(np.linalg.norm(a))
        if norm_a >= NU_GUARD:
            nu = float(a @ (G @ theta)) / (norm_a * norm_a)
            f = f + nu * a
    if not np.all(np.isfinite(f)):
        raise InvalidFlowError(f"flow field is not finite at theta={theta}")
    return f


def project_to_constraint(model: ExpFamModel, theta, c_target: float,
                          tol: float = PROJECTION_TOL,
                          max_iter: int = PROJECTION_MAX_ITER) -> np.ndarray:
    """Return theta shifted along a/|a| so that sum_i h_i = c_target.

    Safeguarded scalar Newton on g(s) = C(theta + s a_hat) - c_target: each
    Newton step is kept inside the current bracket once one is found, and
    falls back to bisection when the slope degenerates.
    """
    theta = as_natural_params(model, theta)
    g0 = constraint_value(model, theta) - c_target
    if abs(g0) <= tol:
        return theta
    a = constraint_gradient(model, theta)
    norm_a = float(np.linalg.norm(a))
    if norm_a < NU_GUARD:
        raise ProjectionError("constraint gradient vanishes; no repair direction")
    a_hat = a / norm_a

    def g(s: float) -> float:
        return constraint_value(model, theta + s * a_hat) - c_target

    s = 0.0
    gs = g0
    lo = hi = None   # bracket endpoints (s_lo with g<0, s_hi with g>0)
    for _ in range(max_iter):
        slope = float(constraint_gradient(model, theta + s * a_hat) @ a_hat)
        if abs(slope) > 1e-14:
            s_new = s - gs / slope
        else:
            s_new = math.nan
        if lo is not None and hi is not None:
            if not (min(lo, hi) < s_new < max(lo, hi)) or math.isnan(s_new):
                s_new = 0.5 * (lo + hi)
        elif math.isnan(s_new):
            raise ProjectionError("degenerate slope before a bracket was found")
        gs_new = g(s_new)
        if abs(gs_new) <= tol:
            return theta + s_new * a_hat
        if gs_new < 0.0:
            lo = s_new
        else:
            hi = s_new
        if gs < 0.0 and lo is None:
            lo = s
        elif gs > 0.0 and hi is None:
            hi = s
        s, gs = s_new, gs_new
    raise ProjectionError(
        f"constraint repair did not reach |residual| <= {tol} in {max_iter} iterations "
        f"(residual {gs:.3e})")


def _record(model, tau, theta, nu) -> TrajectoryRecord:
    return TrajectoryRecord(
        tau=tau,
        theta=theta.copy(),
        joint_entropy=joint_entropy(model, theta),
        sum_marginals=constraint_value(model, theta),
        multi_information=multi_information(model, theta),
        nu=nu,
    )


def integrate(model: ExpFamModel, theta0, dt: float = 1e-2, max_steps: int = 100_000,
              mode: str = "constrained", record_every: int = 1,
              flow_tol: float = FLOW_TOL) -> Trajectory:
    """Integrate the relaxation flow from theta0 with fixed-step RK4.

    In constrained mode the target C is pinned to sum_i h_i at theta0 and the
    post-step drift is repaired whenever it exceeds the trigger; persistent
    drift halves dt (at most MAX_HALVINGS times).  Terminates when the field
    norm drops below flow_tol ("converged") or after max_steps.  Records are
    kept every ``record_every`` accepted steps plus the first and last.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    theta = as_natural_params(model, theta0).copy()
    constrained = mode == "constrained"
    c_target = constraint_value(model, theta) if constrained else None

    traj = Trajectory(mode=mode, c_target=c_target)
    nu0 = lagrange_multiplier(model, theta) if constrained else 0.0
    traj.records.append(_record(model, 0.0, theta, nu0))

    tau = 0.0
    halvings = 0
    step = 0
    while step < max_steps:
        f1 = flow_field(model, theta, mode)
        if float(np.linalg.norm(f1)) < flow_tol:
            traj.termination = "converged"
            break
        try:
            f2 = flow_field(model, theta + 0.5 * dt * f1, mode)
            f3 = flow_field(model, theta + 0.5 * dt * f2, mode)
            f4 = flow_field(model, theta + dt * f3, mode)
        except InvalidFlowError as exc:
            raise IntegrationError(f"aborted at tau={tau:.6g}: {exc}", traj) from exc
        theta_new = theta + (dt / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
        if not np.all(np.isfinite(theta_new)):
            raise IntegrationError(
                f"aborted at tau={tau:.6g}: step produced non-finite parameters", traj)

        if constrained:
            drift = abs(constraint_value(model, theta_new) - c_target)
            if drift > DRIFT_REPAIR_TRIGGER:
                try:
                    theta_new = project_to_constraint(model, theta_new, c_target)
                except ProjectionError as exc:
                    raise IntegrationError(
                        f"aborted at tau={tau:.6g}: drift repair failed ({exc})", traj
                    ) from exc
                drift = abs(constraint_value(model, theta_new) - c_target)
                if drift > DRIFT_ACCEPT:
                    if halvings >= MAX_HALVINGS:
                        raise IntegrationError(
                            f"aborted at tau={tau:.6g}: drift {drift:.3e} persists after "
                            f"{MAX_HALVINGS} step halvings", traj)
                    dt *= 0.5
                    halvings += 1
                    continue   # retry the step from the same theta

        tau += dt
        theta = theta_new
        step += 1
        if step % record_every == 0:
            nu = lagrange_multiplier(model, theta) if constrained else 0.0
            traj.records.append(_record(model, tau, theta, nu))

    if step % record_every != 0:
        nu = lagrange_multiplier(model, theta) if constrained else 0.0
        traj.records.append(_record(model, tau, theta, nu))
    return traj
