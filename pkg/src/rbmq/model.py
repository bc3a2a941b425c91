"""Model ingestion: parameter validation and derived scalar quantities.

The model is the triple (sigma, mu, r): a 2x2 covariance matrix, a drift
vector with negative components, and a reflection matrix whose columns
give the push directions on the two axes.  The explicit-transform
pipeline requires r to be the identity (orthogonal reflection); the
kernel and simulation modules accept a general ergodic r.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    NonSymmetricCovarianceError,
    NotErgodicError,
    SingularCovarianceError,
    ValidationError,
)

__all__ = [
    "ModelParams",
    "DerivedScalars",
    "validate_parameters",
    "derived_scalars",
    "params_from_dict",
    "params_to_dict",
    "load_config",
]


@dataclass(frozen=True)
class ModelParams:
    """Validated (sigma, mu, r) triple.

    Attributes
    ----------
    sigma : ndarray, shape (2, 2)
        Symmetric positive-definite covariance (variance per unit time).
    mu : ndarray, shape (2,)
        Drift (distance per unit time); both components negative when
        the reflection is orthogonal.
    r : ndarray, shape (2, 2)
        Reflection matrix; columns are the push directions.

    Instances are immutable and safe to share across threads.
    """

    sigma: np.ndarray
    mu: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        for name in ("sigma", "mu", "r"):
            getattr(self, name).setflags(write=False)

    # scalar accessors used throughout the kernel algebra
    @property
    def s11(self) -> float:
        return float(self.sigma[0, 0])

    @property
    def s12(self) -> float:
        return float(self.sigma[0, 1])

    @property
    def s22(self) -> float:
        return float(self.sigma[1, 1])

    @property
    def m1(self) -> float:
        return float(self.mu[0])

    @property
    def m2(self) -> float:
        return float(self.mu[1])

    @property
    def det_sigma(self) -> float:
        return self.s11 * self.s22 - self.s12 * self.s12

    @property
    def identity_reflection(self) -> bool:
        """True iff r is exactly the identity (explicit pipeline available)."""
        return bool(np.array_equal(self.r, np.eye(2)))

    @property
    def scale(self) -> float:
        """Magnitude used to normalise residual tolerances."""
        return max(float(np.abs(self.sigma).max()), float(np.abs(self.mu).max()))

    @cached_property
    def swapped(self) -> "ModelParams":
        """The index-swapped model (coordinates 1 and 2 exchanged)."""
        return ModelParams(
            np.array(self.sigma[::-1, ::-1]),
            np.array(self.mu[::-1]),
            np.array(self.r[::-1, ::-1]),
        )


@dataclass(frozen=True)
class DerivedScalars:
    """Correlation angle and the four branch points of the kernel.

    beta is arccos(-s12 / sqrt(s11 s22)), strictly inside (0, pi).
    theta1_minus < 0 < theta1_plus are the roots of the discriminant in
    the first variable, theta2_minus < 0 < theta2_plus of the one in the
    second.
    """

    beta: float
    theta1_minus: float
    theta1_plus: float
    theta2_minus: float
    theta2_plus: float

    @property
    def pi_over_beta(self) -> float:
        return np.pi / self.beta


def validate_parameters(sigma, mu, r=None) -> ModelParams:
    """Validate raw input and return immutable ModelParams.

    Strict inequalities are tested exactly against zero: the admissible
    set is open, and softening the comparisons would silently change
    the model class.  Callers wanting a margin should pre-scale inputs.

    Raises
    ------
    NonSymmetricCovarianceError, SingularCovarianceError, NotErgodicError
    """
    sigma = np.asarray(sigma, dtype=float)
    mu = np.asarray(mu, dtype=float)
    r = np.eye(2) if r is None else np.asarray(r, dtype=float)

    if sigma.shape != (2, 2):
        raise ValidationError(f"sigma must be 2x2, got shape {sigma.shape}")
    if mu.shape != (2,):
        raise ValidationError(f"mu must be a 2-vector, got shape {mu.shape}")
    if r.shape != (2, 2):
        raise ValidationError(f"r must be 2x2, got shape {r.shape}")
    if not (np.isfinite(sigma).all() and np.isfinite(mu).all() and np.isfinite(r).all()):
        raise ValidationError("parameters must be finite")

    if sigma[0, 1] != sigma[1, 0]:
        raise NonSymmetricCovarianceError(
            f"sigma[0,1]={sigma[0,1]!r} != sigma[1,0]={sigma[1,0]!r}"
        )
    s11, s22 = sigma[0, 0], sigma[1, 1]
    det = s11 * s22 - sigma[0, 1] ** 2
    if s11 <= 0 or s22 <= 0 or det <= 0:
        raise SingularCovarianceError(
            f"need s11 > 0, s22 > 0, det > 0; got s11={s11}, s22={s22}, det={det}"
        )

    r11, r12, r21, r22 = r[0, 0], r[0, 1], r[1, 0], r[1, 1]
    m1, m2 = mu
    failed = []
    if not r11 > 0:
        failed.append(f"r11 > 0 fails (r11={r11})")
    if not r22 > 0:
        failed.append(f"r22 > 0 fails (r22={r22})")
    if not r11 * r22 - r12 * r21 > 0:
        failed.append(f"r11*r22 - r12*r21 > 0 fails ({r11 * r22 - r12 * r21})")
    if not r22 * m1 - r12 * m2 < 0:
        failed.append(f"r22*mu1 - r12*mu2 < 0 fails ({r22 * m1 - r12 * m2})")
    if not r11 * m2 - r21 * m1 < 0:
        failed.append(f"r11*mu2 - r21*mu1 < 0 fails ({r11 * m2 - r21 * m1})")
    if failed:
        raise NotErgodicError(failed)

    return ModelParams(sigma.copy(), mu.copy(), r.copy())


def derived_scalars(p: ModelParams) -> DerivedScalars:
    """Correlation angle beta and branch points from their closed forms."""
    det = p.det_sigma
    beta = float(np.arccos(-p.s12 / np.sqrt(p.s11 * p.s22)))

    b2 = p.m1 * p.s12 - p.m2 * p.s11
    root2 = np.sqrt(b2 * b2 + p.m1 * p.m1 * det)
    theta2_minus = (b2 - root2) / det
    theta2_plus = (b2 + root2) / det

    b1 = p.m2 * p.s12 - p.m1 * p.s22
    root1 = np.sqrt(b1 * b1 + p.m2 * p.m2 * det)
    theta1_minus = (b1 - root1) / det
    theta1_plus = (b1 + root1) / det

    return DerivedScalars(
        beta=beta,
        theta1_minus=float(theta1_minus),
        theta1_plus=float(theta1_plus),
        theta2_minus=float(theta2_minus),
        theta2_plus=float(theta2_plus),
    )


def params_from_dict(d: dict) -> ModelParams:
    """Build ModelParams from the JSON config mapping.

    Schema: {"sigma": [[s11, s12], [s12, s22]], "mu": [m1, m2],
    "r": [[1, 0], [0, 1]]}; "r" is optional and defaults to identity.
    """
    try:
        sigma = d["sigma"]
        mu = d["mu"]
    except KeyError as exc:
        raise ValidationError(f"config missing required field {exc}") from None
    return validate_parameters(sigma, mu, d.get("r"))


def params_to_dict(p: ModelParams) -> dict:
    return {
        "sigma": [[p.s11, p.s12], [p.s12, p.s22]],
        "mu": [p.m1, p.m2],
        "r": p.r.tolist(),
    }


def load_config(path) -> ModelParams:
    """Read a JSON model config file and validate it."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"invalid JSON in {path}: {exc}") from None
    return params_from_dict(d)
