"""Rational parametrization of the kernel zero set by the Riemann sphere.

theta1(s) and theta2(s) below parametrize the zero set; the branch
points sit at s = +/-1 and +/- e^{i beta}, the real zeros form the unit
circle, and the pair (0, 0) lifts to a unit-circle point s0 on the
lower arc.  The lifted gluing map W and the two involutions generating
the symmetry group of the surface live here, together with the
finite-order detection that decides algebraicity of the transforms.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .chebyshev import classify_nature
from .errors import AtZeroOrInfinityError, OnLogCutError
from .rational import detect_rational
from .transform import TransformBundle

__all__ = [
    "SpherePoint",
    "GroupReport",
    "theta_of_s",
    "s0",
    "W_of_s",
    "group_elements",
    "group_order",
    "classify_solution_nature",
]


@dataclass(frozen=True)
class SpherePoint:
    """A point of the parametrizing sphere (s = 0 and infinity both map
    to the point at infinity of the zero set)."""

    s: complex


@dataclass(frozen=True)
class GroupReport:
    """Finiteness certificate for the symmetry group <zeta, eta>.

    finite=True comes with the rational detection (p, q) of pi/beta in
    lowest terms and the group order; finite=False only ever means "no
    rational with denominator <= qmax", recorded in `note`.
    generator_residual is the largest pointwise defect of the two
    invariance identities theta1(zeta(s)) = theta1(s) and
    theta2(eta(s)) = theta2(s) on a random sample.
    """

    finite: bool
    order: Optional[int]
    p: Optional[int]
    q: Optional[int]
    residual: float
    qmax: int
    note: str
    generator_residual: float


def _check_s(s) -> np.ndarray:
    arr = np.asarray(s, dtype=complex)
    if np.any(arr == 0) or not np.all(np.isfinite(arr)):
        raise AtZeroOrInfinityError("s = 0 and s = infinity map to the point at infinity")
    return arr


def theta_of_s(b: TransformBundle, s):
    """Coordinates (theta1(s), theta2(s)) of the sphere point s."""
    sc = b.scalars
    arr = _check_s(s)
    scalar = arr.ndim == 0
    e = cmath.exp(1j * sc.beta)
    th1 = (sc.theta1_plus + sc.theta1_minus) / 2.0 + (
        sc.theta1_plus - sc.theta1_minus
    ) / 4.0 * (arr + 1.0 / arr)
    th2 = (sc.theta2_plus + sc.theta2_minus) / 2.0 + (
        sc.theta2_plus - sc.theta2_minus
    ) / 4.0 * (arr / e + e / arr)
    if scalar:
        return complex(th1), complex(th2)
    return th1, th2


def s0(b: TransformBundle) -> SpherePoint:
    """The unit-circle point over (0, 0).

    Both candidates solving theta1(s) = 0 lie on the unit circle; only
    one also kills theta2, and it always sits on the lower arc (the
    lift of the interior domain is the cone between the rays through -1
    and -e^{i beta}).
    """
    sc = b.scalars
    # s + 1/s = q with |q| < 2 since theta1_minus < 0 < theta1_plus
    q = -2.0 * (sc.theta1_plus + sc.theta1_minus) / (sc.theta1_plus - sc.theta1_minus)
    root = cmath.sqrt(complex(q * q - 4.0))
    cands = ((q + root) / 2.0, (q - root) / 2.0)
    point = min(cands, key=lambda c: abs(theta_of_s(b, c)[1]))
    resid = abs(theta_of_s(b, point)[0]) + abs(theta_of_s(b, point)[1])
    if resid > 1e-10 * (1.0 + b.params.scale):
        raise AssertionError(f"s0 candidate fails to kill both coordinates: {resid}")
    return SpherePoint(complex(point))


def W_of_s(b: TransformBundle, s):
    """Lifted gluing map -((-s)^a + (-s)^-a)/2 with a = pi/beta.

    Principal logarithm of -s; refuses s on [0, inf) where the log cut
    makes the power ambiguous.
    """
    raw = np.asarray(s)
    if np.iscomplexobj(raw):
        on_cut = (raw.imag == 0) & (raw.real >= 0)
    else:
        on_cut = raw >= 0
    if np.any(on_cut):
        raise OnLogCutError("s in [0, inf) lies on the logarithm cut of (-s)^a")
    arr = _check_s(s)
    scalar = arr.ndim == 0
    a = b.scalars.pi_over_beta
    lg = np.log(-arr)
    out = -0.5 * (np.exp(a * lg) + np.exp(-a * lg))
    return complex(out) if scalar else out


def group_elements(b: TransformBundle, s):
    """The two involutions at s: zeta(s) = 1/s fixes theta1, and
    eta(s) = e^{2 i beta}/s fixes theta2."""
    arr = _check_s(s)
    scalar = arr.ndim == 0
    zeta = 1.0 / arr
    eta = cmath.exp(2j * b.scalars.beta) / arr
    if scalar:
        return complex(zeta), complex(eta)
    return zeta, eta


def _generator_residual(b: TransformBundle, n: int = 100, seed: int = 7) -> float:
    rng = np.random.default_rng(seed)
    s = rng.uniform(0.2, 5.0, n) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    th1, th2 = theta_of_s(b, s)
    zeta, eta = group_elements(b, s)
    th1z, _ = theta_of_s(b, zeta)
    _, th2e = theta_of_s(b, eta)
    scale = 1.0 + np.abs(th1) + np.abs(th2)
    return float(
        max(np.max(np.abs(th1z - th1) / scale), np.max(np.abs(th2e - th2) / scale))
    )


def group_order(b: TransformBundle, qmax: int = 10**6) -> GroupReport:
    """Finiteness detection for <zeta, eta> via rationality of pi/beta.

    The composition zeta(eta(.)) rotates s by -2 beta; with pi/beta =
    p/q in lowest terms the smallest n with n*beta in pi*Z is n = p
    (computed on exact integers), and the dihedral group order is 2n.
    """
    a = b.scalars.pi_over_beta
    gen_res = _generator_residual(b)
    hit = detect_rational(a, qmax=qmax)
    if hit is None:
        return GroupReport(
            finite=False,
            order=None,
            p=None,
            q=None,
            residual=float("nan"),
            qmax=qmax,
            note=f"infinite within bound {qmax}",
            generator_residual=gen_res,
        )
    p, q, residual = hit
    frac = Fraction(p, q)
    p, q = frac.numerator, frac.denominator
    # smallest n >= 1 with n*beta in pi*Z, i.e. n*q/p integral; found by
    # exact iteration for small p, with the gcd(p, q) = 1 shortcut n = p
    # taking over where iterating would be wasteful
    if p <= 10_000:
        n = 1
        while (n * q) % p != 0:
            n += 1
    else:
        n = p
    assert Fraction(n * q, p).denominator == 1
    return GroupReport(
        finite=True,
        order=2 * n,
        p=p,
        q=q,
        residual=residual,
        qmax=qmax,
        note=f"pi/beta = {p}/{q} (residual {residual:.2e})",
        generator_residual=gen_res,
    )


def classify_solution_nature(b: TransformBundle, qmax: int = 10**6) -> str:
    """Nature of the boundary transform: rational / algebraic / D-finite.

    Finite group (rational pi/beta) gives an algebraic transform,
    integer pi/beta a rational one; otherwise the transform is
    transcendental but still satisfies a linear ODE.
    """
    report = group_order(b, qmax=qmax)
    if not report.finite:
        return "transcendental_D_finite"
    return classify_nature(Fraction(report.p, report.q))
