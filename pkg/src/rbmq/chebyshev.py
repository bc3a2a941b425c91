"""Generalized Chebyshev function T_a on the cut plane.

For integer a this is the classical polynomial, evaluated by the
three-term recurrence and valid on all of C.  For non-integer a the
function is cos(a arccos x) on [-1, 1], continued analytically to
C \\ (-inf, -1) as the symmetric power mean of the two Joukowski
preimages of x.

Branch conventions
------------------
sqrt(x^2 - 1) is computed as sqrt(x - 1) * sqrt(x + 1) with principal
factors, which is analytic off [-1, 1]; then v = x + sqrt(x^2 - 1) is
the Joukowski preimage with |v| >= 1 and T_a = (v^a + v^-a)/2 uses the
principal logarithm of v (never of the small root 1/v).  The only
resulting discontinuity is across the real ray x < -1, matching the
intended cut.  A caller who wants a one-sided value on the cut passes a
complex x with a signed zero imaginary part (x +/- 0j).
"""
from __future__ import annotations

import logging
from fractions import Fraction

import mpmath
import numpy as np

from .errors import AtBranchPointError, OnCutError
from .rational import detect_rational

__all__ = [
    "ChebyshevOrder",
    "cheb_T",
    "cheb_T_deriv",
    "expansion_at_minus_one",
    "classify_nature",
    "cheb_T_hyp2f1",
    "is_integer_order",
]

logger = logging.getLogger(__name__)

_INT_SNAP = 1e-12


def is_integer_order(a) -> bool:
    """Whether the order is (to be treated as) a non-negative integer.

    Exact for int/Fraction input; floats within 1e-12 of an integer are
    snapped with a logged note, since silent snapping of a generically
    irrational exponent would corrupt classification.
    """
    if isinstance(a, Fraction):
        return a.denominator == 1
    if isinstance(a, (int, np.integer)):
        return True
    af = float(a)
    near = round(af)
    if af != near and abs(af - near) < _INT_SNAP:
        logger.info("order %r within 1e-12 of integer %d; treating as integer", a, near)
        return True
    return af == near


def _check_order(a) -> float:
    af = float(a)
    if not np.isfinite(af) or af < 0:
        raise ValueError(f"order must be a finite non-negative real, got {a!r}")
    return af


def _prep(x):
    arr = np.array(x, dtype=complex)
    return arr, arr.ndim == 0


def _raise_on_cut(x, a):
    """Real-typed input strictly below -1 is refused for non-integer order."""
    raw = np.asarray(x)
    if not np.iscomplexobj(raw) and np.any(raw < -1.0):
        raise OnCutError(
            f"order {a} is not an integer and x < -1 lies on the cut; "
            "pass x +/- 0j to pick a side"
        )


def _cheb_poly(n: int, x: np.ndarray) -> np.ndarray:
    """Classical polynomial by the three-term recurrence, all of C."""
    if n == 0:
        return np.ones_like(x)
    t_prev = np.ones_like(x)
    t = x.copy()
    for _ in range(n - 1):
        t_prev, t = t, 2.0 * x * t - t_prev
    return t


def _cheb_poly_deriv(n: int, x: np.ndarray) -> np.ndarray:
    if n == 0:
        return np.zeros_like(x)
    t_prev = np.ones_like(x)
    t = x.copy()
    d_prev = np.zeros_like(x)
    d = np.ones_like(x)
    for _ in range(n - 1):
        t_prev, t, d_prev, d = t, 2.0 * x * t - t_prev, d, 2.0 * t + 2.0 * x * d - d_prev
    return d


def _large_root(z: np.ndarray) -> np.ndarray:
    """Joukowski preimage with modulus >= 1."""
    return z + np.sqrt(z - 1.0) * np.sqrt(z + 1.0)


def cheb_T(a, x):
    """Evaluate T_a at x (scalar or array, real or complex).

    Equals cos(a arccos x) on [-1, 1]; elsewhere the analytic
    continuation on the cut plane (see module docstring).  Integer
    orders take the polynomial path, valid everywhere.
    """
    af = _check_order(a)
    arr, scalar = _prep(x)
    if is_integer_order(a):
        out = _cheb_poly(int(round(af)), arr)
        return complex(out[()]) if scalar else out
    _raise_on_cut(x, a)
    out = np.empty_like(arr)
    on_interval = (arr.imag == 0) & (np.abs(arr.real) <= 1.0)
    if np.any(on_interval):
        out[on_interval] = np.cos(af * np.arccos(arr[on_interval].real))
    rest = ~on_interval
    if np.any(rest):
        lv = np.log(_large_root(arr[rest]))
        out[rest] = 0.5 * (np.exp(af * lv) + np.exp(-af * lv))
    return complex(out[()]) if scalar else out


def cheb_T_deriv(a, x):
    """Derivative of T_a; refuses x = +/-1 for non-integer order.

    On (-1, 1) it is a sin(a arccos x)/sqrt(1 - x^2); elsewhere
    a (v^a - v^-a) / (2 sqrt(x^2 - 1)) with the module's branch.
    """
    af = _check_order(a)
    arr, scalar = _prep(x)
    if is_integer_order(a):
        out = _cheb_poly_deriv(int(round(af)), arr)
        return complex(out[()]) if scalar else out
    _raise_on_cut(x, a)
    if np.any((arr.imag == 0) & (np.abs(arr.real) == 1.0)):
        raise AtBranchPointError(f"derivative of T_{a} is singular at x = +/-1")
    out = np.empty_like(arr)
    interior = (arr.imag == 0) & (np.abs(arr.real) < 1.0)
    if np.any(interior):
        t = arr[interior].real
        out[interior] = af * np.sin(af * np.arccos(t)) / np.sqrt(1.0 - t * t)
    rest = ~interior
    if np.any(rest):
        z = arr[rest]
        s = np.sqrt(z - 1.0) * np.sqrt(z + 1.0)
        lv = np.log(z + s)
        out[rest] = 0.5 * af * (np.exp(af * lv) - np.exp(-af * lv)) / s
    return complex(out[()]) if scalar else out


def expansion_at_minus_one(a) -> tuple[float, float]:
    """Leading coefficients of T_a(-1 + e) = c0 + c1 sqrt(e) + O(e).

    c0 = cos(a pi), c1 = a sqrt(2) sin(a pi).  For integer order the
    square-root term degenerates and c1 = 0.
    """
    af = _check_order(a)
    if is_integer_order(a):
        n = int(round(af))
        return float((-1.0) ** n), 0.0
    return float(np.cos(af * np.pi)), float(af * np.sqrt(2.0) * np.sin(af * np.pi))


def _nature_from_fraction(frac: Fraction) -> str:
    return "rational_polynomial" if frac.denominator == 1 else "algebraic_nonpolynomial"


def classify_nature(a, *, qmax: int = 10**6) -> str:
    """Algebraic nature of T_a: polynomial / algebraic / D-finite.

    Exact for int or Fraction input.  A float order goes through
    continued-fraction rational detection with denominator bound qmax;
    when nothing qualifies the order is treated as irrational within
    the bound and the function is classified as transcendental (it
    still satisfies a linear ODE, being a Gauss hypergeometric).
    """
    if isinstance(a, Fraction):
        if a < 0:
            raise ValueError("order must be non-negative")
        return _nature_from_fraction(a)
    if isinstance(a, (int, np.integer)):
        if a < 0:
            raise ValueError("order must be non-negative")
        return "rational_polynomial"
    af = _check_order(a)
    hit = detect_rational(af, qmax=qmax)
    if hit is None:
        return "transcendental_D_finite"
    p, q, _ = hit
    return _nature_from_fraction(Fraction(p, q))


def cheb_T_hyp2f1(a, x) -> complex:
    """Cross-check route: T_a(x) = 2F1(-a, a; 1/2; (1 - x)/2).

    Independent of the power-mean evaluation path; intended for spot
    checks only (mpmath, slow).
    """
    z = mpmath.mpmathify(complex(x))
    return complex(mpmath.hyp2f1(-a, a, mpmath.mpf(1) / 2, (1 - z) / 2))


class ChebyshevOrder:
    """Order a >= 0 with an optional exact rationality certificate.

    Carries the value together with how much is known about its
    arithmetic nature, so classification stays consistent between the
    evaluation and group-order code paths.
    """

    def __init__(self, a, rational: Fraction | None = None, qmax: int = 10**6):
        self.value = _check_order(a)
        if rational is not None and abs(float(rational) - self.value) > 1e-9:
            raise ValueError(f"certificate {rational} does not match value {self.value}")
        self.rational = rational
        self.qmax = qmax

    @property
    def nature(self) -> str:
        if self.rational is not None:
            return _nature_from_fraction(self.rational)
        return classify_nature(self.value, qmax=self.qmax)

    def __repr__(self):
        cert = f", rational={self.rational}" if self.rational is not None else ""
        return f"ChebyshevOrder({self.value}{cert})"
