"""Continued-fraction rational detection for floating-point inputs."""
from __future__ import annotations

import math
from typing import Optional


def detect_rational(
    x: float, qmax: int = 10**6, tol_coeff: float = 1e-12
) -> Optional[tuple[int, int, float]]:
    """Best rational approximation p/q of x with q <= qmax, if convincing.

    Walks the continued-fraction convergents of x and returns the first
    (p, q, |x - p/q|) whose residual is below tol_coeff / q**2.  Returns
    None when no convergent with denominator <= qmax qualifies; callers
    must read that as "irrational within bound qmax", never as a proof
    of irrationality (a float cannot certify one).
    """
    if not math.isfinite(x):
        raise ValueError(f"non-finite input {x!r}")
    # convergents h_k / k_k of the continued fraction of x
    h_prev, h = 1, int(math.floor(x))
    k_prev, k = 0, 1
    frac = x - math.floor(x)
    for _ in range(64):
        if k <= qmax:
            residual = abs(x - h / k)
            if residual < tol_coeff / (k * k):
                g = math.gcd(abs(h), k)
                return h // g, k // g, residual
        else:
            break
        if frac == 0.0:
            break
        a = math.floor(1.0 / frac)
        frac = 1.0 / frac - a
        h_prev, h = h, int(a) * h + h_prev
        k_prev, k = k, int(a) * k + k_prev
    return None
