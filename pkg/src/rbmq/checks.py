"""Cross-module invariant suite behind the `check` CLI verb.

Each check exercises an identity that ties at least two independently
implemented code paths together; residuals are relative and the
tolerances are fixed here, not configurable, so a green run means the
same thing everywhere.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from . import kernel, transform, uniformization
from .model import ModelParams, derived_scalars
from .oracle import diagonal_closed_forms

__all__ = ["CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tol: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"{status}  {self.name}: residual {self.residual:.3e} vs tol {self.tol:.1e}{extra}"


def _result(name, residual, tol, detail="") -> CheckResult:
    return CheckResult(name, bool(residual <= tol), float(residual), tol, detail)


def _sample_curve_points(p: ModelParams, n: int, rng) -> np.ndarray:
    """Points on the boundary curve via its real parametrization."""
    sc = derived_scalars(p)
    t = np.concatenate(
        [np.linspace(1e-4, 3.0, n // 2), np.geomspace(3.0, 100.0, n - n // 2)]
    )
    return np.asarray(kernel.theta2_branch(p, sc.theta1_minus - t, "plus"))


def _sample_native_kernel_points(b, n: int, rng):
    """Kernel zeros with both coordinates in the left half-plane."""
    t1_out, t2_out = [], []
    for _ in range(200):
        if len(t1_out) >= n:
            break
        s = rng.uniform(0.05, 20.0, 4 * n) * np.exp(1j * rng.uniform(-np.pi, np.pi, 4 * n))
        th1, th2 = uniformization.theta_of_s(b, s)
        keep = (th1.real < -1e-3) & (th2.real < -1e-3) & (np.abs(th1) > 1e-6) & (
            np.abs(th2) > 1e-6
        )
        t1_out.extend(th1[keep])
        t2_out.extend(th2[keep])
    if len(t1_out) < n:
        raise RuntimeError("could not sample enough kernel zeros in the left half-plane")
    return np.array(t1_out[:n]), np.array(t2_out[:n])


def run_checks(p: ModelParams, seed: int = 0) -> list[CheckResult]:
    """Run the full invariant suite for one model."""
    rng = np.random.default_rng(seed)
    sc = derived_scalars(p)
    out: list[CheckResult] = []

    # kernel roots: gamma vanishes on both branches at random complex points
    pts = rng.uniform(-4, 4, 10_000) + 1j * rng.uniform(-4, 4, 10_000)
    worst = 0.0
    for sign in ("plus", "minus"):
        th2 = kernel.theta2_branch(p, pts, sign)
        res = np.abs(kernel.gamma(p, pts, th2)) / (
            (1.0 + np.abs(pts) ** 2 + np.abs(th2) ** 2) * p.scale
        )
        th1 = kernel.theta1_branch(p, pts, sign)
        res1 = np.abs(kernel.gamma(p, th1, pts)) / (
            (1.0 + np.abs(pts) ** 2 + np.abs(th1) ** 2) * p.scale
        )
        worst = max(worst, float(res.max()), float(res1.max()))
    out.append(_result("kernel_branch_roots", worst, 1e-10))

    # conjugacy and curve membership left of the first branch point
    t1 = sc.theta1_minus - np.concatenate(
        [np.linspace(1e-3, 5.0, 100), np.geomspace(5.0, 100.0, 100)]
    )
    plus = np.asarray(kernel.theta2_branch(p, t1, "plus"))
    minus = np.asarray(kernel.theta2_branch(p, t1, "minus"))
    conj_res = float(np.max(np.abs(plus - np.conj(minus)) / (1.0 + np.abs(plus))))
    hyp = kernel.hyperbola(p)
    curve_res = float(max(hyp.residual(z) for z in plus))
    out.append(_result("branch_conjugacy_on_curve", max(conj_res, curve_res), 1e-10))

    # Vieta: sum and product of the branches against the coefficient ratios
    coeffs = kernel.KernelCoeffs(p)
    vieta_sum = np.abs(plus + minus + coeffs.b(t1) / 0.5 / p.s22) / (1.0 + np.abs(plus))
    vieta_prod = np.abs(plus * minus - coeffs.c(t1) / (0.5 * p.s22)) / (
        1.0 + np.abs(plus) ** 2
    )
    out.append(
        _result("vieta", float(max(vieta_sum.max(), vieta_prod.max())), 1e-10)
    )

    if not p.identity_reflection:
        out.append(
            CheckResult(
                "transform_suite",
                True,
                0.0,
                1.0,
                "skipped: non-identity reflection has no explicit transform",
            )
        )
        return out

    b = transform.make_bundle(p)

    # gluing and boundary condition on the curve
    curve = _sample_curve_points(p, 200, rng)
    w_up = np.asarray(transform.w_eval(b, curve))
    w_dn = np.asarray(transform.w_eval(b, np.conj(curve)))
    glue = float(np.max(np.abs(w_up - w_dn) / (1.0 + np.abs(w_up))))
    out.append(_result("gluing_symmetry", glue, 1e-10))
    ps_up = np.asarray(transform.psi1_eval(b, curve))
    ps_dn = np.asarray(transform.psi1_eval(b, np.conj(curve)))
    bc = float(np.max(np.abs(ps_up - ps_dn) / np.maximum(np.abs(ps_up), 1e-300)))
    out.append(_result("boundary_condition", bc, 1e-9))

    # cross-transform identity on the curve parametrization and at
    # sphere-sampled kernel zeros in the native domain
    t1c = sc.theta1_minus - np.geomspace(1e-3, 50.0, 100)
    worst = 0.0
    for sign in ("plus", "minus"):
        th2 = np.asarray(kernel.theta2_branch(p, t1c, sign))
        s1 = np.asarray(transform.psi1_eval(b, th2))
        s2 = np.asarray(transform.psi2_eval(b, t1c))
        worst = max(
            worst,
            float(np.max(np.abs(s1 + s2) / np.maximum(np.abs(s1), np.abs(s2)))),
        )
    k1, k2 = _sample_native_kernel_points(b, 200, rng)
    s1 = np.asarray(transform.psi1_eval(b, k2))
    s2 = np.asarray(transform.psi2_eval(b, k1))
    worst = max(
        worst, float(np.max(np.abs(s1 + s2) / np.maximum(np.abs(s1), np.abs(s2))))
    )
    out.append(_result("cross_transform_identity", worst, 1e-9))

    # uniformization kills the kernel
    s = rng.uniform(0.05, 20.0, 10_000) * np.exp(1j * rng.uniform(-np.pi, np.pi, 10_000))
    th1, th2 = uniformization.theta_of_s(b, s)
    res = np.abs(kernel.gamma(p, th1, th2)) / (
        (1.0 + np.abs(th1) ** 2 + np.abs(th2) ** 2) * p.scale
    )
    out.append(_result("uniformization_zero_set", float(res.max()), 1e-10))

    # two-sheet identities
    z1, _ = uniformization.theta_of_s(b, 1.0 / s)
    _, z2 = uniformization.theta_of_s(b, cmath.exp(2j * sc.beta) / s)
    sheet = max(
        float(np.max(np.abs(z1 - th1) / (1.0 + np.abs(th1)))),
        float(np.max(np.abs(z2 - th2) / (1.0 + np.abs(th2)))),
    )
    out.append(_result("two_sheet_identities", sheet, 1e-10))

    # lifted gluing map: each boundary reflection identity on its own
    # ray (principal logs wrap off the rays), and agreement with w on
    # the open cone between them
    neg = -np.geomspace(1e-2, 100.0, 100)
    w_neg = np.asarray(uniformization.W_of_s(b, neg))
    w_inv = np.asarray(uniformization.W_of_s(b, 1.0 / neg))
    refl = float(np.max(np.abs(w_neg - w_inv) / (1.0 + np.abs(w_neg))))
    ray = -cmath.exp(1j * sc.beta) * np.geomspace(1e-2, 100.0, 100)
    w_ray = np.asarray(uniformization.W_of_s(b, ray))
    w_eta = np.asarray(uniformization.W_of_s(b, cmath.exp(2j * sc.beta) / ray))
    refl = max(refl, float(np.max(np.abs(w_ray - w_eta) / (1.0 + np.abs(w_ray)))))
    rho = np.exp(rng.uniform(-2, 2, 200))
    ang = np.pi + rng.uniform(1e-3, sc.beta - 1e-3, 200)
    cone = rho * np.exp(1j * ang)
    w_cone = np.asarray(uniformization.W_of_s(b, cone))
    _, th2c = uniformization.theta_of_s(b, cone)
    w_down = np.asarray(transform.w_eval(b, th2c))
    lift = float(np.max(np.abs(w_down - w_cone) / (1.0 + np.abs(w_cone))))
    out.append(_result("lifted_gluing", max(refl, lift), 1e-9))

    # boundary masses via extrapolation of the raw ratio to 0
    ts = 1e-3 * 0.5 ** np.arange(4)
    lim1 = np.polyfit(ts, np.real(transform.phi1_eval(b, ts + 0j)), 3)[-1]
    lim2 = np.polyfit(ts, np.real(transform.phi2_eval(b, ts + 0j)), 3)[-1]
    mass = max(abs(lim1 + p.m1) / abs(p.m1), abs(lim2 + p.m2) / abs(p.m2))
    out.append(_result("boundary_masses", float(mass), 1e-10))

    # injectivity witness: distinct domain points never share a w-value
    def domain_sample(k):
        rho_ = np.exp(rng.uniform(-2.0, 1.5, k))
        ang_ = np.pi + rng.uniform(1e-3, sc.beta - 1e-3, k)
        return uniformization.theta_of_s(b, rho_ * np.exp(1j * ang_))[1]

    za, zb = domain_sample(1000), domain_sample(1000)
    distinct_args = np.abs(za - zb) > 1e-8
    wa = np.asarray(transform.w_eval(b, za))
    wb = np.asarray(transform.w_eval(b, zb))
    collisions = int(np.sum((np.abs(wa - wb) == 0.0) & distinct_args))
    out.append(
        CheckResult(
            "gluing_injectivity",
            collisions == 0,
            float(collisions),
            0.5,
            "no w-collisions over 1000 random domain pairs",
        )
    )

    # total mass of the bivariate transform at the origin
    phi00 = transform.phi_eval(b, 0.0, 0.0, direction=(1.0, 1.0))
    out.append(_result("total_mass", abs(phi00 - 1.0), 1e-12))

    # diagonal covariance: pipeline equals the closed product form
    if p.s12 == 0.0:
        forms = diagonal_closed_forms(p)
        grid = -np.linspace(0.1, 3.0, 10)
        worst = 0.0
        for a in grid:
            for c in grid:
                lhs = transform.phi_eval(b, a, c)
                rhs = forms.one_dim_phi(a, p.m1, p.s11) * forms.one_dim_phi(
                    c, p.m2, p.s22
                )
                worst = max(worst, abs(lhs - rhs) / abs(rhs))
        out.append(_result("diagonal_product_form", worst, 1e-12))

    return out
