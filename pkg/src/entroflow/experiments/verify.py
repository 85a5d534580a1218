"""Machine-checkable invariant suite spanning every module.

Each item evaluates one documented invariant at fixed seeds and grids and
reports pass/fail together with the measured quantity, so a regression
shows up as a number, not just a flag.  Items listed in KNOWN_FAILURES
encode published claims that the mathematics does not support; they are
asserted literally, reported with their measured values, and marked
"known-fail" so they do not flip the exit status.  Anything else failing
is a real defect.

The suite doubles as the `verify` CLI subcommand and backs the acceptance
tests; the expensive full relaxation runs are cached per process so both
consumers share one integration.
"""

from __future__ import annotations

import datetime
import json
import math
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .. import __version__
from ..analysis import (
    flow_jacobian,
    jacobi_violation,
    sa_decompose,
)
from ..core import (
    as_natural_params,
    constraint_gradient,
    constraint_value,
    entropy_gradient,
    fisher_information,
    joint_entropy,
    log_partition,
    mean_parameters,
    multi_information,
    third_cumulant_contraction,
)
from ..dynamics import (
    ProjectionError,
    Trajectory,
    flow_field,
    integrate,
    project_to_constraint,
)
from ..models import (
    CurieWeissModel,
    GaussianOscillatorModel,
    build_pairwise,
    cw_log_partition,
    cw_observables,
    frustrated_theta,
)
from ..numdiff import central_gradient, central_hessian, central_jacobian

KNOWN_FAILURES: dict[str, str] = {
    "dynamics.endpoint-entropy-cross-agreement":
        "The constrained endpoint pins H at the conserved marginal-entropy sum C "
        "while the unconstrained endpoint reaches the global maximum; their gap "
        "equals the initial multi-information (~0.041 for the frustrated start), "
        "so the two final joint entropies cannot agree whenever the start point "
        "has non-uniform marginals. Asserted literally; fails by construction.",
    "analysis.degeneracy-residual-bounds":
        "S a and A grad H do not vanish at generic points: the exact identity "
        "M^T a = -(hess C) F ties them to the local flow and constraint curvature, "
        "making the normalized residuals O(0.1), not O(1e-5). They vanish only "
        "where the flow itself does. Asserted at the published tolerances; fails.",
    "analysis.tangent-quadratic-form":
        "Near stable flow the symmetric part restricted to the constraint tangent "
        "space is negative semidefinite (that is why trajectories converge), so "
        "q^T S q < 0 for generic tangent q at finite magnitude. The nonnegativity "
        "bound fails; entropy production is instead the exact pointwise statement "
        "grad H . F = |P grad H|^2 >= 0, which is checked and passes.",
}


@dataclass(frozen=True)
class ItemResult:
    name: str
    status: str          # "pass" | "fail" | "known-fail"
    measured: str
    note: str = ""


@dataclass
class VerifyReport:
    items: list[ItemResult] = field(default_factory=list)
    noise_floors: dict[str, float] = field(default_factory=dict)

    def ok(self) -> bool:
        return not any(i.status == "fail" for i in self.items)

    def counts(self) -> tuple[int, int, int]:
        p = sum(1 for i in self.items if i.status == "pass")
        f = sum(1 for i in self.items if i.status == "fail")
        k = sum(1 for i in self.items if i.status == "known-fail")
        return p, f, k

    def by_name(self) -> dict[str, ItemResult]:
        return {i.name: i for i in self.items}

    def render_text(self) -> str:
        lines = []
        for item in self.items:
            lines.append(f"[{item.status.upper():>10}] {item.name}: {item.measured}")
        p, f, k = self.counts()
        lines.append(f"-- {p} passed, {f} failed, {k} known-fail "
                     f"(documented irreproducible claims)")
        for key, val in sorted(self.noise_floors.items()):
            lines.append(f"   noise floor {key}: {val:.3e}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "tool_version": __version__,
            "timestamp": datetime.datetime.now(datetime.timezone.utc)
                         .isoformat(timespec="seconds"),
            "items": [{"name": i.name, "status": i.status,
                       "measured": i.measured, "note": i.note}
                      for i in self.items],
            "noise_floors": self.noise_floors,
            "ok": self.ok(),
        }

    def write(self, out_dir) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / "verify-report.json"
        path.write_text(json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n")
        (out_dir / "verify-report.txt").write_text(self.render_text() + "\n")
        return path


def _item(report: VerifyReport, name: str, ok: bool, measured: str):
    if ok:
        report.items.append(ItemResult(name, "pass", measured))
    elif name in KNOWN_FAILURES:
        report.items.append(ItemResult(name, "known-fail", measured, KNOWN_FAILURES[name]))
    else:
        report.items.append(ItemResult(name, "fail", measured))


# ---------------------------------------------------------------------------
# shared fixtures


def _test_models():
    rng = np.random.default_rng(20240117)
    p_ising = build_pairwise(3, "ising")
    p_01 = build_pairwise(3, "binary01")
    cw = CurieWeissModel(48, coupling=1.2, field=0.15, beta=0.7)
    gauss = GaussianOscillatorModel()
    points = [
        (p_ising, 0.4 * rng.standard_normal(p_ising.dim)),
        (p_01, 0.4 * rng.standard_normal(p_01.dim)),
        (cw, np.array([0.12, 0.85])),
        (gauss, np.array([1.0, 0.7, 0.2])),
    ]
    return points


@lru_cache(maxsize=2)
def full_n3_relaxation(convention: str = "binary01") -> tuple[Trajectory, Trajectory]:
    """Constrained and unconstrained runs from the frustrated start, to convergence.

    Cached per process; the trajectories are shared read-only between the
    verify items and the acceptance tests.
    """
    model = build_pairwise(3, convention, frustrated_theta())
    constrained = integrate(model, model.theta_base, dt=1e-2, max_steps=150_000,
                            mode="constrained", record_every=1)
    unconstrained = integrate(model, model.theta_base, dt=1e-2, max_steps=150_000,
                              mode="unconstrained", record_every=1)
    return constrained, unconstrained


def cw_psi_oracle_max_error(n_values=range(2, 13),
                            couplings=(0.5, 1.0, 2.0),
                            fields=(-0.3, 0.0, 0.4),
                            betas=(0.3, 1.0, 2.5)) -> float:
    """Max |psi from the magnetization sum - psi from 2^n enumeration|.

    The pairwise embedding uses theta_i = beta h and theta_ij = beta J / n;
    since x_i^2 = 1 the diagonal terms contribute the constant beta J / 2
    that the enumeration route must add back.
    """
    worst = 0.0
    for n in n_values:
        pair = build_pairwise(n, "ising")
        n_pairs = pair.dim - n
        for J in couplings:
            for h in fields:
                for beta in betas:
                    theta_pair = np.concatenate([
                        np.full(n, beta * h), np.full(n_pairs, beta * J / n)])
                    psi_enum = log_partition(pair, theta_pair) + beta * J / 2.0
                    psi_cw = cw_log_partition(CurieWeissModel(n, J, h, beta))
                    worst = max(worst, abs(psi_cw - psi_enum))
    return worst


# ---------------------------------------------------------------------------
# item groups


def _check_core(report: VerifyReport):
    points = _test_models()

    worst_sym, worst_eig = 0.0, 0.0
    for model, theta in points:
        G = fisher_information(model, theta)
        worst_sym = max(worst_sym, float(np.abs(G - G.T).max()))
        eigs = np.linalg.eigvalsh(G)
        worst_eig = max(worst_eig, float(-eigs.min() / max(np.linalg.norm(G), 1e-300)))
    _item(report, "core.fisher-symmetric-psd",
          worst_sym <= 1e-12 and worst_eig <= 1e-10,
          f"max asymmetry {worst_sym:.2e}, worst -lambda_min/|G| {worst_eig:.2e}")

    rng = np.random.default_rng(7)
    worst = 0.0
    for n in range(2, 13):
        model = build_pairwise(n, "ising" if n % 2 else "binary01")
        theta = 0.8 / math.sqrt(model.dim) * rng.standard_normal(model.dim)
        _, p = model._distribution(theta)
        T = model.suff_stats
        mu = p @ T
        G_oracle = T.T @ (p[:, None] * T) - np.outer(mu, mu)   # non-centered route
        worst = max(worst, float(np.abs(fisher_information(model, theta) - G_oracle).max()))
    _item(report, "core.fisher-equals-covariance", worst <= 1e-10,
          f"max |G - Cov[T]| over n=2..12: {worst:.2e}")

    worst_mu = worst_g = worst_gh = 0.0
    for model, theta in points:
        psi = lambda t: model.log_partition(t)
        mu = mean_parameters(model, theta)
        scale = 1.0 + float(np.abs(mu).max())
        worst_mu = max(worst_mu,
                       float(np.abs(central_gradient(psi, theta) - mu).max()) / scale)
        G = fisher_information(model, theta)
        gscale = 1.0 + float(np.abs(G).max())
        worst_g = max(worst_g,
                      float(np.abs(central_hessian(psi, theta) - G).max()) / gscale)
        grad_h = entropy_gradient(model, theta)
        h_of = lambda t: float(model.log_partition(t) - t @ model.mean_parameters(t))
        hscale = 1.0 + float(np.abs(grad_h).max())
        worst_gh = max(worst_gh,
                       float(np.abs(central_gradient(h_of, theta) - grad_h).max()) / hscale)
    _item(report, "core.derivatives-match-fd",
          worst_mu <= 1e-6 and worst_g <= 1e-6 and worst_gh <= 1e-6,
          f"rel err: mu {worst_mu:.2e}, G {worst_g:.2e}, grad H {worst_gh:.2e}")

    rng = np.random.default_rng(11)
    min_i = math.inf
    for model, theta in points:
        for _ in range(5):
            t = theta + 0.3 * rng.standard_normal(model.dim)
            if isinstance(model, GaussianOscillatorModel):
                t = np.abs(t) + 0.1
                t[2] = 0.5 * math.sqrt(t[0] * t[1]) * math.tanh(t[2])
            min_i = min(min_i, multi_information(model, t))
    p01 = build_pairwise(3, "binary01")
    i_indep = multi_information(p01, np.array([0.4, -0.2, 0.7, 0.0, 0.0, 0.0]))
    gauss = GaussianOscillatorModel()
    i_gauss = multi_information(gauss, np.array([1.4, 0.6, 0.0]))
    _item(report, "core.multi-information-nonnegative",
          min_i >= 0.0 and i_indep <= 1e-10 and abs(i_gauss) <= 1e-12,
          f"min I sampled {min_i:.2e}; I at independence {i_indep:.2e} / {i_gauss:.2e}")

    model = build_pairwise(3, "binary01")
    rng = np.random.default_rng(13)
    theta = 0.4 * rng.standard_normal(model.dim)
    v = rng.standard_normal(model.dim)
    C = third_cumulant_contraction(model, theta, v)
    _, p = model._distribution(theta)
    Tc = model.suff_stats - p @ model.suff_stats
    tensor = np.einsum("x,xi,xj,xk->ijk", p, Tc, Tc, Tc)
    C_oracle = tensor @ v
    err = float(np.abs(C - C_oracle).max())
    sym = float(np.abs(C - C.T).max())
    zero = float(np.abs(third_cumulant_contraction(model, theta, np.zeros(6))).max())
    _item(report, "core.third-cumulant-oracle",
          err <= 1e-8 and sym <= 1e-12 and zero == 0.0,
          f"vs enumerated third central moment {err:.2e}; asymmetry {sym:.2e}")


def _check_models(report: VerifyReport):
    err = cw_psi_oracle_max_error()
    _item(report, "models.cw-psi-oracle", err <= 1e-9,
          f"max |psi_magnetization_sum - psi_enumeration| = {err:.2e}")

    m_low = abs(cw_observables(CurieWeissModel(400, 1.0, 0.01, 0.5)).m_intensive)
    m_high = abs(cw_observables(CurieWeissModel(400, 1.0, 0.01, 2.0)).m_intensive)
    _item(report, "models.cw-phase-transition", m_low < 0.1 and m_high > 0.5,
          f"|m|(0.5 beta_c) = {m_low:.4f}, |m|(2 beta_c) = {m_high:.4f}")

    gauss = GaussianOscillatorModel()
    worst = 0.0
    for theta in (np.array([1.0, 0.7, 0.2]), np.array([1.3, 0.6, -0.25]),
                  np.array([0.8, 1.9, 0.55])):
        psi = lambda t: gauss.log_partition(t)
        worst = max(worst, float(np.abs(
            central_gradient(psi, theta) - gauss.mean_parameters(theta)).max()))
        worst = max(worst, float(np.abs(
            central_jacobian(gauss.mean_parameters, theta)
            - gauss.fisher_information(theta)).max()))
        csum = lambda t: float(np.sum(gauss.marginal_entropies(t)))
        worst = max(worst, float(np.abs(
            central_gradient(csum, theta) - gauss.constraint_gradient(theta)).max()))
        worst = max(worst, float(np.abs(
            central_jacobian(gauss.constraint_gradient, theta)
            - gauss.constraint_hessian(theta)).max()))
        t3 = gauss.third_derivative_tensor(theta)
        fd_t3 = central_jacobian(
            lambda t: gauss.fisher_information(t).ravel(), theta).reshape(3, 3, 3)
        worst = max(worst, float(np.abs(t3 - fd_t3).max()))
    _item(report, "models.gaussian-closed-forms", worst <= 1e-7,
          f"max |closed form - FD| over psi/G/a/hessC/third tensor: {worst:.2e}")

    rng = np.random.default_rng(23)
    ok = True
    notes = []
    for conv in ("ising", "binary01"):
        model = build_pairwise(4, conv)
        theta = 0.3 * rng.standard_normal(model.dim)
        G = fisher_information(model, theta)
        lam = float(np.linalg.eigvalsh(G).min())
        i_val = multi_information(model, theta)
        mu_err = float(np.abs(central_gradient(
            lambda t: model.log_partition(t), theta)
            - mean_parameters(model, theta)).max())
        ok = ok and lam >= -1e-10 and i_val >= 0.0 and mu_err <= 1e-6
        notes.append(f"{conv}: lambda_min {lam:.1e}, I {i_val:.3f}, mu FD err {mu_err:.1e}")
    _item(report, "models.pairwise-conventions", ok, "; ".join(notes))


def _check_dynamics(report: VerifyReport):
    points = _test_models()

    worst_tan = 0.0
    for model, theta in points:
        a = constraint_gradient(model, theta)
        if np.linalg.norm(a) < 1e-8:
            continue
        f = flow_field(model, theta, "constrained")
        denom = max(float(np.linalg.norm(a) * np.linalg.norm(f)), 1e-300)
        worst_tan = max(worst_tan, abs(float(a @ f)) / denom)
    _item(report, "dynamics.flow-tangency", worst_tan <= 1e-12,
          f"max |a.F| / (|a||F|) = {worst_tan:.2e}")

    worst_prod = math.inf
    for model, theta in points:
        for mode in ("constrained", "unconstrained"):
            prod = float(entropy_gradient(model, theta) @ flow_field(model, theta, mode))
            worst_prod = min(worst_prod, prod)
    _item(report, "dynamics.entropy-production-pointwise", worst_prod >= -1e-10,
          f"min grad H . F over sampled points/modes = {worst_prod:.3e}")

    con, unc = full_n3_relaxation("binary01")
    cw = CurieWeissModel(64, coupling=1.0, field=0.1, beta=0.7)
    cw_traj = integrate(cw, cw.theta(), dt=1e-2, max_steps=400, mode="constrained")
    gauss = GaussianOscillatorModel()
    g_traj = integrate(gauss, np.array([1.0, 0.7, 0.2]), dt=1e-2, max_steps=400,
                       mode="constrained")
    drift = max(con.max_drift(), cw_traj.max_drift(), g_traj.max_drift())
    _item(report, "dynamics.constraint-drift", drift <= 1e-6,
          f"max |sum h - C| over constrained runs (3 models) = {drift:.2e}")

    worst_dec = 0.0
    for traj in (con, unc, cw_traj, g_traj):
        h = traj.column("joint_entropy")
        if len(h) > 1:
            worst_dec = max(worst_dec, float(np.max(np.diff(h) * -1.0)))
    _item(report, "dynamics.entropy-monotone", worst_dec <= 1e-10,
          f"max per-step entropy decrease = {worst_dec:.2e}")

    int_con = float(np.linalg.norm(con.final.theta[3:]))
    norm_unc = float(np.linalg.norm(unc.final.theta))
    _item(report, "dynamics.same-interaction-endpoint",
          int_con <= 1e-4 and norm_unc <= 1e-4
          and con.termination == "converged" and unc.termination == "converged",
          f"|couplings| constrained {int_con:.2e}; |theta| unconstrained {norm_unc:.2e}")

    model01 = build_pairwise(3, "binary01")
    h_max = joint_entropy(model01, np.zeros(6))
    gap_c = abs(con.final.joint_entropy - con.c_target)
    gap_u = abs(unc.final.joint_entropy - h_max)
    _item(report, "dynamics.endpoint-entropy-targets",
          gap_c <= 1e-6 and gap_u <= 1e-6,
          f"|H_final - C| = {gap_c:.2e} (constrained); "
          f"|H_final - H_max| = {gap_u:.2e} (unconstrained)")

    cross = abs(con.final.joint_entropy - unc.final.joint_entropy)
    _item(report, "dynamics.endpoint-entropy-cross-agreement", cross <= 1e-6,
          f"|H_constrained - H_unconstrained| = {cross:.4f} "
          f"(= multi-information of the start point)")

    errs = []
    ref = integrate(model01, frustrated_theta(), dt=0.0025, max_steps=400,
                    mode="unconstrained", record_every=400)
    for dt in (0.04, 0.02, 0.01):
        tr = integrate(model01, frustrated_theta(), dt=dt, max_steps=int(round(1.0 / dt)),
                       mode="unconstrained", record_every=10**6)
        errs.append(float(np.linalg.norm(tr.final.theta - ref.final.theta)))
    r1, r2 = errs[0] / errs[1], errs[1] / errs[2]
    _item(report, "dynamics.rk4-order", 9.0 <= r1 <= 30.0 and 9.0 <= r2 <= 30.0,
          f"halving error ratios {r1:.1f}, {r2:.1f} (16 = fourth order)")

    theta0 = frustrated_theta()
    c0 = constraint_value(model01, theta0)
    a0 = constraint_gradient(model01, theta0)
    off = theta0 + 1e-4 * a0 / np.linalg.norm(a0)
    repaired = project_to_constraint(model01, off, c0)
    resid = abs(constraint_value(model01, repaired) - c0)
    unchanged = np.array_equal(project_to_constraint(model01, theta0, c0), theta0)
    try:
        project_to_constraint(build_pairwise(3, "ising"), theta0,
                              constraint_value(build_pairwise(3, "ising"), theta0) + 1e-3)
        guard_ok = False
    except ProjectionError:
        guard_ok = True
    _item(report, "dynamics.projection-repair",
          resid <= 1e-10 and unchanged and guard_ok,
          f"post-repair residual {resid:.2e}; on-manifold no-op {unchanged}; "
          f"flat-gradient guard {guard_ok}")


def _check_analysis(report: VerifyReport, floors: dict):
    model01 = build_pairwise(3, "binary01")
    theta0 = frustrated_theta()
    gauss = GaussianOscillatorModel()

    rng = np.random.default_rng(31)
    M_rand = rng.standard_normal((5, 5))
    M_real = flow_jacobian(model01, theta0)
    ok = True
    worst_rec = 0.0
    for M in (M_rand, M_real):
        dec = sa_decompose(M)
        worst_rec = max(worst_rec, float(np.abs(dec.S + dec.A - M).max()))
        ok = ok and np.array_equal(dec.S, dec.S.T) and np.array_equal(dec.A, -dec.A.T)
    spin = sa_decompose(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    ok = ok and spin.ratio is None and spin.norm_S == 0.0
    sym = sa_decompose(np.array([[2.0, 1.0], [1.0, -1.0]]))
    ok = ok and sym.ratio == 0.0 and sym.norm_A == 0.0
    _item(report, "analysis.sa-reconstruction",
          ok and worst_rec <= 1e-14 * max(1.0, float(np.abs(M_real).max())),
          f"max |S + A - M| = {worst_rec:.2e}; exact (anti)symmetry {ok}")

    worst = 0.0
    for theta in (np.array([1.0, 0.7, 0.2]), np.array([1.3, 0.6, -0.25]),
                  np.array([0.8, 1.9, 0.55])):
        Ma = flow_jacobian(gauss, theta, method="analytic")
        Mf = flow_jacobian(gauss, theta, method="fd")
        worst = max(worst, float(np.abs(Ma - Mf).max()))
    floors["flow-jacobian-fd"] = worst
    rng = np.random.default_rng(37)
    v = rng.standard_normal(6)
    v /= np.linalg.norm(v)
    h = 1e-5
    dir_fd = (flow_field(model01, theta0 + h * v, "constrained")
              - flow_field(model01, theta0 - h * v, "constrained")) / (2 * h)
    Mv = flow_jacobian(model01, theta0) @ v
    dir_err = float(np.linalg.norm(Mv - dir_fd) / max(np.linalg.norm(dir_fd), 1e-300))
    _item(report, "analysis.fd-analytic-jacobian-agreement",
          worst <= 1e-6 and dir_err <= 1e-5,
          f"max |M_fd - M_analytic| = {worst:.2e}; directional consistency {dir_err:.2e}")

    a_fd = constraint_gradient(model01, theta0, force_fd=True)
    a_an = constraint_gradient(model01, theta0)
    floors["constraint-gradient-fd"] = float(np.abs(a_fd - a_an).max())

    worst_id = 0.0
    for model, theta in ((model01, theta0), (gauss, np.array([1.0, 0.7, 0.2]))):
        M = flow_jacobian(model, theta)
        a = constraint_gradient(model, theta)
        f = flow_field(model, theta, "constrained")
        hess_c = model.constraint_hessian(theta)
        if hess_c is None:
            hess_c = central_jacobian(
                lambda t: constraint_gradient(model, t), theta, rel_step=1e-4)
            hess_c = 0.5 * (hess_c + hess_c.T)
        lhs = M.T @ a
        rhs = -hess_c @ f
        worst_id = max(worst_id, float(
            np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), 1e-300)))
    _item(report, "analysis.jacobian-constraint-identity", worst_id <= 1e-5,
          f"rel err of M^T a = -(hess C) F: {worst_id:.2e}")

    rng = np.random.default_rng(41)
    worst_an = 0.0
    for _ in range(20):
        u, v_ = np.exp(rng.uniform(-0.7, 0.7, size=2))
        w = math.sqrt(u * v_) * rng.uniform(-0.8, 0.8)
        theta = np.array([u, v_, w])
        dec = sa_decompose(flow_jacobian(gauss, theta, method="analytic"), gauss, theta)
        worst_an = max(worst_an, dec.residual_Sa, dec.residual_AgradH)
    dec_fd = sa_decompose(flow_jacobian(model01, theta0), model01, theta0)
    worst_fd = max(dec_fd.residual_Sa, dec_fd.residual_AgradH)
    _item(report, "analysis.degeneracy-residual-bounds",
          worst_an <= 1e-8 and worst_fd <= 1e-5,
          f"max normalized residual: analytic {worst_an:.3f} (bound 1e-8), "
          f"fd {worst_fd:.3f} (bound 1e-5)")

    rng = np.random.default_rng(43)
    min_q = math.inf
    min_prod = math.inf
    for model, theta in ((model01, theta0), (gauss, np.array([1.0, 0.7, 0.2]))):
        a = constraint_gradient(model, theta)
        dec = sa_decompose(flow_jacobian(model, theta))
        for _ in range(10):
            q = rng.standard_normal(model.dim)
            q -= (q @ a) / (a @ a) * a
            q *= 1e-3 / np.linalg.norm(q)
            min_q = min(min_q, float(q @ dec.S @ q) / dec.norm_S)
            tp = theta + q
            min_prod = min(min_prod, float(
                entropy_gradient(model, tp) @ flow_field(model, tp, "constrained")))
    _item(report, "analysis.tangent-quadratic-form", min_q >= -1e-8,
          f"min q.S q / |S| = {min_q:.2e} at |q| = 1e-3 (bound -1e-8); "
          f"pointwise production min = {min_prod:.2e} >= -1e-10: {min_prod >= -1e-10}")

    rep_iso = jacobi_violation(gauss, np.array([1.0, 1.0, 0.0]))
    rep_aniso = jacobi_violation(gauss, np.array([1.0, 0.95, 0.2]))
    floors["jacobi-gaussian"] = rep_aniso.noise_floor
    sym_theta = np.array([0.2, 0.2, 0.2, 0.3, 0.3, 0.3])
    asym_theta = np.array([0.2, -0.1, 0.35, 0.3, -0.25, 0.15])
    rep_sym = jacobi_violation(model01, sym_theta)
    rep_asym = jacobi_violation(model01, asym_theta)
    floors["jacobi-n3-fd"] = max(rep_sym.noise_floor, rep_asym.noise_floor)

    def repeated_max(rep):
        return max((abs(v) for (i, j, k), v in rep.violations.items()
                    if len({i, j, k}) < 3), default=0.0)

    rep_max = max(repeated_max(rep_aniso), repeated_max(rep_asym))
    thr = 10.0 * max(rep_aniso.noise_floor, rep_asym.noise_floor)
    _item(report, "analysis.jacobi-repeated-index", rep_max <= max(thr, 1e-12),
          f"max repeated-index |J| = {rep_max:.2e} (identically zero by exact "
          f"antisymmetry); 10x floor = {thr:.2e}")

    ratio_n3 = (rep_asym.normalized_max
                / max(rep_sym.normalized_max, 1e-300))
    _item(report, "analysis.jacobi-symmetry-pattern",
          rep_iso.max_abs <= 1e-8 and rep_aniso.nonzero_triplets == 6
          and ratio_n3 >= 10.0,
          f"isotropic max |J| = {rep_iso.max_abs:.1e}; anisotropic distinct triplets "
          f"above threshold = {rep_aniso.nonzero_triplets}; "
          f"n3 asym/sym normalized ratio = {ratio_n3:.1f}")


def _check_experiments(report: VerifyReport):
    from .config import parse_config
    from .runner import run_experiment
    from .tables import SCHEMAS

    cfg_text = "experiment = n3-decomposition\noutput.plot = false\n"
    with tempfile.TemporaryDirectory() as tmp:
        d1, d2 = Path(tmp) / "a", Path(tmp) / "b"
        cfg = parse_config(cfg_text)
        s1 = run_experiment(cfg, d1, "csv", verbose=False)
        s2 = run_experiment(cfg, d2, "csv", verbose=False)
        csv1 = (d1 / "n3-decomposition.csv").read_bytes()
        csv2 = (d2 / "n3-decomposition.csv").read_bytes()
        m1 = json.loads((d1 / "n3-decomposition.meta.json").read_text())
        m2 = json.loads((d2 / "n3-decomposition.meta.json").read_text())
        m1.pop("timestamp"), m2.pop("timestamp")
        same = csv1 == csv2 and m1 == m2 and s1 == s2 == 0
    _item(report, "experiments.deterministic-output", same,
          "identical CSV bytes and metadata (up to timestamp) across reruns")

    quick = {
        "n3-sweep": ("experiment = n3-sweep\nsweep.points = 5\noutput.plot = false\n",
                     "n3-sweep"),
        "cw-magnetization": ("experiment = cw-magnetization\nmodel.n = 50\n"
                             "sweep.points = 5\noutput.plot = false\n",
                             "cw-magnetization"),
        "cw-scaling": ("experiment = cw-scaling\nsweep.n_values = 25, 50\n"
                       "sweep.beta_factors = 0.5\noutput.plot = false\n",
                       "cw-scaling"),
        "oscillator-jacobi": ("experiment = oscillator-jacobi\n"
                              "model.points = 1.0, 0.95, 0.2\noutput.plot = false\n",
                              "oscillator-jacobi"),
        "n3-trajectories": ("experiment = n3-trajectories\n"
                            "integrator.max_steps = 50\noutput.plot = false\n",
                            "n3-trajectories"),
    }
    ok = True
    notes = []
    with tempfile.TemporaryDirectory() as tmp:
        for name, (text, stem) in quick.items():
            out = Path(tmp) / name
            status = run_experiment(parse_config(text), out, "csv", verbose=False)
            header = (out / f"{stem}.csv").read_text().splitlines()[0]
            match = tuple(header.split(",")) == SCHEMAS[stem]
            ok = ok and match and status == 0
            notes.append(f"{name}: schema {'ok' if match else 'MISMATCH'}")
    _item(report, "experiments.schema-match", ok, "; ".join(notes))


def run_verify() -> VerifyReport:
    """Execute every invariant item and return the collected report."""
    report = VerifyReport()
    floors: dict[str, float] = {}
    _check_core(report)
    _check_models(report)
    _check_dynamics(report)
    _check_analysis(report, floors)
    _check_experiments(report)
    report.noise_floors = floors
    return report
