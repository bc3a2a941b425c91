"""Explicit Laplace transforms of the stationary and boundary measures.

For orthogonal reflection the transform of the first boundary measure is

    phi1(theta2) = -mu1 w'(0) theta2 / (w(theta2) - w(0)),

where w composes the generalized Chebyshev function of order pi/beta
with the affine map sending [theta2_minus, theta2_plus] onto [1, -1].
phi2 is produced by index swap, and the bivariate transform phi follows
from the kernel identity

    -gamma(theta) phi(theta) = theta1 phi1(theta2) + theta2 phi2(theta1).

phi1 is meromorphic on the plane cut along (theta2_plus, inf); the
origin is a removable point with value -mu1 (the total boundary mass).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernel
from .chebyshev import cheb_T, cheb_T_deriv
from .errors import (
    AtPoleError,
    AtZeroError,
    BranchAmbiguityError,
    NonIdentityReflectionError,
    OnCutError,
    OnKernelCurveError,
    OutsideDomainError,
)
from .model import DerivedScalars, ModelParams, derived_scalars

__all__ = [
    "TransformBundle",
    "make_bundle",
    "w_eval",
    "w_deriv",
    "phi1_eval",
    "phi1_deriv",
    "phi2_eval",
    "phi_eval",
    "psi1_eval",
    "psi2_eval",
    "continuation_check",
]

# below this radius the removable origin is evaluated by its closed limit
_ORIGIN_RADIUS = 1e-8
# pole report thresholds: w-difference collapse at a not-small argument
_POLE_REL = 1e-12
_POLE_MIN_ABS = 1e-6


@dataclass(frozen=True)
class TransformBundle:
    """Evaluator state for one model: scalars and gluing-map constants.

    w1_prime0 / w1_at_0 belong to the theta2-side gluing map, the
    2-suffixed fields to the index-swapped one.  phi1_at_0 = -mu1 and
    phi2_at_0 = -mu2 are the boundary masses.  Immutable; evaluators
    are pure functions of (bundle, point).
    """

    params: ModelParams
    scalars: DerivedScalars
    w1_prime0: float
    w2_prime0: float
    w1_at_0: float
    w2_at_0: float
    phi1_at_0: float
    phi2_at_0: float

    @cached_property
    def swapped(self) -> "TransformBundle":
        return make_bundle(self.params.swapped)


def _glue_constants(sc: DerivedScalars) -> tuple[float, float]:
    """w(0) and w'(0) from the trig form; x(0) is inside (-1, 1)."""
    a = sc.pi_over_beta
    x0 = (sc.theta2_plus + sc.theta2_minus) / (sc.theta2_plus - sc.theta2_minus)
    t = np.arccos(x0)
    w0 = float(np.cos(a * t))
    xp = -2.0 / (sc.theta2_plus - sc.theta2_minus)
    wp = float(xp * a * np.sin(a * t) / np.sqrt(1.0 - x0 * x0))
    return w0, wp


def make_bundle(p: ModelParams) -> TransformBundle:
    """Build the evaluator bundle; requires orthogonal reflection."""
    if not p.identity_reflection:
        raise NonIdentityReflectionError(
            "explicit transforms require the identity reflection matrix"
        )
    sc = derived_scalars(p)
    w1_at_0, w1_prime0 = _glue_constants(sc)
    sc2 = derived_scalars(p.swapped)
    w2_at_0, w2_prime0 = _glue_constants(sc2)
    return TransformBundle(
        params=p,
        scalars=sc,
        w1_prime0=w1_prime0,
        w2_prime0=w2_prime0,
        w1_at_0=w1_at_0,
        w2_at_0=w2_at_0,
        phi1_at_0=-p.m1,
        phi2_at_0=-p.m2,
    )


def _prep(x):
    arr = np.array(x, dtype=complex)
    return arr, arr.ndim == 0


def _affine(sc: DerivedScalars, theta2):
    """Map [theta2_minus, theta2_plus] onto [1, -1].

    Real and imaginary parts are transformed separately: complex
    multiplication mixes in +0.0 terms that would erase the signed zero
    a caller uses to pick a side of the cut (the map has negative
    slope, so the side flips, which real-float products get right).
    """
    spread = sc.theta2_plus - sc.theta2_minus
    arr = np.asarray(theta2, dtype=complex)
    out = np.empty_like(arr)
    out.real = -(2.0 * arr.real - (sc.theta2_plus + sc.theta2_minus)) / spread
    out.imag = (-2.0 / spread) * arr.imag
    return out


def _raise_if_on_cut(raw, cut_start: float, name: str):
    """Real-typed input strictly beyond the branch point is on the cut."""
    raw = np.asarray(raw)
    if not np.iscomplexobj(raw) and np.any(raw > cut_start):
        raise OnCutError(
            f"real {name} > {cut_start} lies on the cut; "
            f"pass {name} +/- 0j to pick a side"
        )


def w_eval(b: TransformBundle, theta2):
    """Conformal gluing map at theta2 (cut plane, cut on (theta2_plus, inf))."""
    sc = b.scalars
    _raise_if_on_cut(theta2, sc.theta2_plus, "theta2")
    arr, scalar = _prep(theta2)
    out = cheb_T(sc.pi_over_beta, _affine(sc, arr))
    return out if not scalar else complex(out)


def w_deriv(b: TransformBundle, theta2):
    """Derivative of the gluing map (chain rule through the affine map)."""
    sc = b.scalars
    arr, scalar = _prep(theta2)
    xp = -2.0 / (sc.theta2_plus - sc.theta2_minus)
    out = xp * cheb_T_deriv(sc.pi_over_beta, _affine(sc, arr))
    return out if not scalar else complex(out)


def phi1_eval(b: TransformBundle, theta2):
    """Transform of the first boundary measure, continued to the cut plane.

    The removable origin returns its limit -mu1.  A genuine pole
    (w(theta2) = w(0) away from 0) raises AtPoleError carrying the
    location; order is always 1 by injectivity of the gluing map.
    """
    wv_raw = w_eval(b, theta2)  # cut check happens on the raw input
    arr, scalar = _prep(theta2)
    vals = np.atleast_1d(arr)
    wv = np.atleast_1d(np.asarray(wv_raw, dtype=complex))
    den = wv - b.w1_at_0
    small = np.abs(vals) < _ORIGIN_RADIUS
    pole = (np.abs(den) < _POLE_REL * np.abs(b.w1_prime0 * vals)) & (
        np.abs(vals) > _POLE_MIN_ABS
    )
    if np.any(pole):
        raise AtPoleError(location=complex(vals[pole][0]), order=1)
    out = np.empty_like(vals)
    out[small] = b.phi1_at_0
    ok = ~small
    out[ok] = -b.params.m1 * b.w1_prime0 * vals[ok] / den[ok]
    out = out.reshape(arr.shape)
    return complex(out[()]) if scalar else out


def phi1_deriv(b: TransformBundle, theta2):
    """d(phi1)/d(theta2); valid away from the removable origin."""
    arr, scalar = _prep(theta2)
    if np.any(np.abs(np.atleast_1d(arr)) < _ORIGIN_RADIUS):
        raise AtZeroError("derivative formula is not stable this close to 0")
    wv = np.asarray(w_eval(b, arr))
    wp = np.asarray(w_deriv(b, arr))
    den = wv - b.w1_at_0
    out = -b.params.m1 * b.w1_prime0 * (den - arr * wp) / (den * den)
    return complex(np.asarray(out)[()]) if scalar else out


def phi2_eval(b: TransformBundle, theta1):
    """Transform of the second boundary measure (index-swapped route)."""
    return phi1_eval(b.swapped, theta1)


def phi2_deriv(b: TransformBundle, theta1):
    return phi1_deriv(b.swapped, theta1)


def psi1_eval(b: TransformBundle, theta2):
    """phi1(theta2)/theta2: simple pole at 0 with residue -mu1."""
    arr, scalar = _prep(theta2)
    if np.any(np.atleast_1d(arr) == 0):
        raise AtZeroError("psi1 has its pole at 0")
    out = phi1_eval(b, theta2) / arr
    return complex(np.asarray(out)[()]) if scalar else out


def psi2_eval(b: TransformBundle, theta1):
    """phi2(theta1)/theta1: simple pole at 0 with residue -mu2."""
    arr, scalar = _prep(theta1)
    if np.any(np.atleast_1d(arr) == 0):
        raise AtZeroError("psi2 has its pole at 0")
    out = phi2_eval(b, theta1) / arr
    return complex(np.asarray(out)[()]) if scalar else out


def phi_eval(b: TransformBundle, theta1, theta2, *, direction=None):
    """Bivariate transform via the kernel identity.

    Off the kernel zero set:
        phi = -(theta1 phi1(theta2) + theta2 phi2(theta1)) / gamma.
    On it the expression is 0/0; evaluation is refused unless the caller
    supplies a direction vector, in which case the directional limit is
    taken analytically (both gradients are available in closed form).
    The origin is the direction-independent limit 1 (total mass).
    """
    p = b.params
    _raise_if_on_cut(theta2, b.scalars.theta2_plus, "theta2")
    _raise_if_on_cut(theta1, b.scalars.theta1_plus, "theta1")
    t1, s1 = _prep(theta1)
    t2, s2 = _prep(theta2)
    scalar = s1 and s2
    if scalar and abs(complex(t1[()])) < 1e-12 and abs(complex(t2[()])) < 1e-12:
        return 1.0 + 0.0j
    g = np.asarray(kernel.gamma(p, t1, t2), dtype=complex)
    tol = 1e-12 * (1.0 + np.abs(t1) ** 2 + np.abs(t2) ** 2) * p.scale
    on_kernel = np.atleast_1d(np.abs(g) <= tol)
    if np.any(on_kernel):
        if direction is None or not scalar:
            raise OnKernelCurveError(
                "gamma vanishes here; pass direction=(u1, u2) for the limit"
            )
        return _phi_limit(b, complex(t1[()]), complex(t2[()]), direction)
    num = t1 * phi1_eval(b, t2) + t2 * phi2_eval(b, t1)
    out = -num / g
    return complex(np.asarray(out)[()]) if scalar else out


def _phi_limit(b: TransformBundle, t1: complex, t2: complex, direction) -> complex:
    """Directional limit of phi at a kernel zero (l'Hopital)."""
    p = b.params
    u1, u2 = complex(direction[0]), complex(direction[1])
    if u1 == 0 and u2 == 0:
        raise ValueError("direction must be non-zero")
    # gradient of the numerator theta1 phi1 + theta2 phi2
    dn1 = phi1_eval(b, t2) + t2 * phi2_deriv(b, t1)
    dn2 = t1 * phi1_deriv(b, t2) + phi2_eval(b, t1)
    dg1 = p.s11 * t1 + p.s12 * t2 + p.m1
    dg2 = p.s12 * t1 + p.s22 * t2 + p.m2
    den = u1 * dg1 + u2 * dg2
    if den == 0:
        raise OnKernelCurveError("direction is tangent to the kernel curve here")
    return complex(-(u1 * dn1 + u2 * dn2) / den)


def continuation_check(b: TransformBundle, theta2) -> float:
    """Relative defect of the meromorphic-continuation identity.

    Checks phi1(theta2) = -(theta2/Theta1_minus) phi2(Theta1_minus) at
    theta2, where Theta1_minus is the principal minus-branch preimage.
    Valid on {Re theta2 <= 0 or Re Theta1_minus(theta2) < 0}; refused
    near the branch points of the preimage where the label is ambiguous.

    Note the sign: substituting the kernel zero into the functional
    equation gives theta1 phi1 + theta2 phi2 = 0, so the ratio carries
    a minus sign.
    """
    t2 = complex(theta2)
    p = b.params
    if t2 == 0:
        return 0.0  # both sides take the limit value -mu1
    dt = kernel.disc_d_tilde(p, t2)
    if abs(dt) < 1e-12 * p.scale**2:
        raise BranchAmbiguityError(f"discriminant nearly vanishes at theta2={t2}")
    th1 = kernel.theta1_branch(p, t2, "minus")
    if t2.real > 0 and th1.real >= 0:
        raise OutsideDomainError(
            f"theta2={t2} outside the continuation domain "
            f"(Re theta2 > 0 and Re Theta1_minus = {th1.real} >= 0)"
        )
    lhs = phi1_eval(b, t2)
    rhs = -(t2 / th1) * phi2_eval(b, th1)
    return float(abs(lhs - rhs) / max(abs(lhs), 1e-300))
