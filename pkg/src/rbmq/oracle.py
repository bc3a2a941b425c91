"""Independent verification routes: reflected-diffusion simulation,
numerical Laplace inversion, and the diagonal-covariance closed forms.

Simulation
----------
Euler scheme with componentwise projection: Y = Z + mu h + sqrt(h) A xi
with A the Cholesky factor of sigma, then Z' = max(Y, 0) and the local
time increments read off as the clipped negatives.  With orthogonal
reflection each coordinate satisfies a one-dimensional Lindley
recursion, so a whole chunk of the path is computed vectorised from
cumulative sums and running minima; the result is the same chain as the
stepwise scheme.  Batches are independent replicas, each with its own
burn-in and its own RNG stream spawned from one seed, merged by batch
index, so output is deterministic for a fixed seed regardless of how
many worker threads run.

Inversion
---------
Fixed-contour Talbot quadrature, applied after shifting the transform
by its dominant singularity so that the slowly varying factor of the
density is inverted at full relative accuracy; Gaver-Stehfest (Salzer
weights, real nodes only) serves as an independent cross-check.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from . import asymptotics
from .errors import (
    ContourCollisionError,
    MethodDisagreementError,
    NonIdentityReflectionError,
    NotDiagonalError,
    StepSizeWarning,
)
from .model import ModelParams
from .transform import TransformBundle, phi1_eval

__all__ = [
    "SimConfig",
    "SimResult",
    "DensityTable",
    "DiagonalClosedForms",
    "simulate",
    "invert_transform",
    "talbot_invert",
    "gaver_stehfest_invert",
    "diagonal_closed_forms",
    "density_table_to_csv",
    "sim_result_to_csv",
    "DEFAULT_THETA_GRID",
]

DEFAULT_THETA_GRID = tuple(
    (a, c) for a in (-1.0, -0.5, -0.1) for c in (-1.0, -0.5, -0.1)
)

_CHUNK = 1 << 21  # steps per vectorised chunk (~100 MB of scratch)


@dataclass(frozen=True)
class SimConfig:
    """Simulation controls.

    step is the Euler step h; horizon is the total time budget, of
    which (horizon - burn_in) is split evenly across `batches`
    independent replicas (each replica additionally burns in for
    burn_in time units).  Observables are accumulated every thin_time
    units of simulated time, which is statistically free because the
    integrands decorrelate on O(1) timescales.
    """

    step: float = 2e-5
    horizon: float = 1e4
    burn_in: float = 100.0
    seed: int = 0
    batches: int = 50
    thin_time: float = 0.01
    bins: int = 60

    def __post_init__(self):
        if self.step <= 0 or self.horizon <= 0 or self.burn_in < 0:
            raise ValueError("step and horizon must be positive, burn_in non-negative")
        if self.burn_in >= self.horizon:
            raise ValueError("burn_in must be smaller than horizon")
        if self.batches < 2:
            raise ValueError("batch-means errors need at least 2 batches")
        if self.bins < 2:
            raise ValueError("need at least 2 histogram bins")


@dataclass(frozen=True)
class SimResult:
    """Empirical summaries of one simulation run.

    laplace_estimates maps each theta grid pair to (mean, stderr);
    local_time_rates holds ((rate1, se1), (rate2, se2)); histograms map
    name -> (bin_edges, density).  Stderr are batch-means estimates
    over the independent replicas.
    """

    laplace_estimates: dict
    local_time_rates: tuple
    marginal_histograms: dict
    boundary_histograms: dict
    measured_time: float
    config: SimConfig
    theta_grid: tuple = field(default=DEFAULT_THETA_GRID)


@dataclass(frozen=True)
class DensityTable:
    """Density values on a positive grid, tagged with how they were made."""

    grid: np.ndarray
    values: np.ndarray
    method: str

    def __post_init__(self):
        self.grid.setflags(write=False)
        self.values.setflags(write=False)


def _lindley_chunk(z0: float, incr: np.ndarray):
    """Exact vectorised projection recursion for one coordinate.

    z_n = max(z0 + T_n, T_n - min_{0<=j<=n} T_j) with T the running sum
    of increments; returns the path and the per-step local-time
    increments dl = z - (z_prev + incr).
    """
    t = np.cumsum(incr)
    m = np.minimum.accumulate(np.minimum(t, 0.0))
    z = np.maximum(z0 + t, t - m)
    y = np.empty_like(z)
    y[0] = z0 + incr[0]
    y[1:] = z[:-1] + incr[1:]
    return z, z - y


def _uniform_hist(vals, inv_width: float, nbins: int, weights=None):
    """Histogram on uniform [0, nbins/inv_width) bins via bincount."""
    idx = (vals * inv_width).astype(np.int64)
    ok = (idx >= 0) & (idx < nbins)
    if weights is None:
        return np.bincount(idx[ok], minlength=nbins)[:nbins].astype(float)
    return np.bincount(idx[ok], weights=weights[ok], minlength=nbins)[:nbins]


def _run_batch(p, cfg, theta_grid, edges1, edges2, n_burn, n_meas, thin, seed_seq):
    """One replica: burn-in, then accumulate thinned observables."""
    rng = np.random.default_rng(seed_seq)
    chol = np.linalg.cholesky(p.sigma)
    drift = p.mu * cfg.step
    rt = math.sqrt(cfg.step)
    a11, a21, a22 = chol[0, 0] * rt, chol[1, 0] * rt, chol[1, 1] * rt

    m = len(theta_grid)
    th1 = np.array([t[0] for t in theta_grid])
    th2 = np.array([t[1] for t in theta_grid])
    acc = np.zeros(m)
    n_acc = 0
    l1 = l2 = 0.0
    nb = cfg.bins
    inv_w1 = nb / edges1[-1]
    inv_w2 = nb / edges2[-1]
    mhist1 = np.zeros(nb)
    mhist2 = np.zeros(nb)
    bhist1 = np.zeros(nb)
    bhist2 = np.zeros(nb)

    z1 = z2 = 0.0
    done = 0
    total = n_burn + n_meas
    while done < total:
        n = min(_CHUNK, total - done)
        xi1 = rng.standard_normal(n)
        xi2 = rng.standard_normal(n)
        incr2 = a21 * xi1 + a22 * xi2 + drift[1]
        xi1 *= a11
        xi1 += drift[0]
        p1, dl1 = _lindley_chunk(z1, xi1)
        p2, dl2 = _lindley_chunk(z2, incr2)
        z1 = float(p1[-1])
        z2 = float(p2[-1])

        lo = max(n_burn - done, 0)  # first measured index within this chunk
        if lo < n:
            l1 += float(dl1[lo:].sum())
            l2 += float(dl2[lo:].sum())
            # thinned sampling times, phase-locked to the measured segment
            meas_start = done + lo - n_burn
            first = (-meas_start) % thin
            idx = np.arange(lo + first, n, thin)
            if idx.size:
                s1 = p1[idx]
                s2 = p2[idx]
                acc += np.exp(np.outer(th1, s1) + np.outer(th2, s2)).sum(axis=1)
                n_acc += idx.size
                mhist1 += _uniform_hist(s1, inv_w1, nb)
                mhist2 += _uniform_hist(s2, inv_w2, nb)
            hit1 = np.flatnonzero(dl1[lo:] > 0) + lo
            if hit1.size:
                bhist1 += _uniform_hist(p2[hit1], inv_w2, nb, weights=dl1[hit1])
            hit2 = np.flatnonzero(dl2[lo:] > 0) + lo
            if hit2.size:
                bhist2 += _uniform_hist(p1[hit2], inv_w1, nb, weights=dl2[hit2])
        done += n

    t_meas = n_meas * cfg.step
    return (
        acc / max(n_acc, 1),
        l1 / t_meas,
        l2 / t_meas,
        mhist1,
        mhist2,
        bhist1,
        bhist2,
        n_acc,
    )


def simulate(p: ModelParams, cfg: Optional[SimConfig] = None, theta_grid=None) -> SimResult:
    """Simulate the reflected diffusion and summarise its stationary law.

    Requires the identity reflection matrix (the projection step is the
    exact discrete Skorokhod map only for orthogonal pushes).  Thread
    count is capped by the RBMQ_THREADS environment variable; results
    do not depend on it.
    """
    if not p.identity_reflection:
        raise NonIdentityReflectionError(
            "componentwise projection is only valid for orthogonal reflection"
        )
    cfg = cfg or SimConfig()
    mu_max = float(np.abs(p.mu).max())
    if cfg.step * mu_max > 0.01:
        warnings.warn(
            f"step {cfg.step} is large relative to 1/|mu| = {1 / mu_max:.3g}; "
            "discretisation bias may dominate",
            StepSizeWarning,
            stacklevel=2,
        )
    grid = tuple(tuple(map(float, t)) for t in (theta_grid or DEFAULT_THETA_GRID))
    if any(a > 0 or c > 0 for a, c in grid):
        raise ValueError("theta grid must have non-positive real components")

    # deterministic histogram ranges: ~8 means of the per-axis exponential scale
    cap1 = 4.0 * p.s11 / abs(p.m1)
    cap2 = 4.0 * p.s22 / abs(p.m2)
    edges1 = np.linspace(0.0, cap1, cfg.bins + 1)
    edges2 = np.linspace(0.0, cap2, cfg.bins + 1)

    n_burn = int(round(cfg.burn_in / cfg.step))
    t_batch = (cfg.horizon - cfg.burn_in) / cfg.batches
    n_meas = int(round(t_batch / cfg.step))
    thin = max(1, int(round(cfg.thin_time / cfg.step)))
    seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.batches)

    threads = int(os.environ.get("RBMQ_THREADS", "1") or "1")

    def run(batch_index):
        return _run_batch(
            p, cfg, grid, edges1, edges2, n_burn, n_meas, thin, seeds[batch_index]
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, range(cfg.batches)))
    else:
        results = [run(b) for b in range(cfg.batches)]

    lap = np.stack([r[0] for r in results])
    r1 = np.array([r[1] for r in results])
    r2 = np.array([r[2] for r in results])
    nb = cfg.batches
    lap_mean = lap.mean(axis=0)
    lap_se = lap.std(axis=0, ddof=1) / math.sqrt(nb)
    laplace = {
        grid[i]: (float(lap_mean[i]), float(lap_se[i])) for i in range(len(grid))
    }
    rates = (
        (float(r1.mean()), float(r1.std(ddof=1) / math.sqrt(nb))),
        (float(r2.mean()), float(r2.std(ddof=1) / math.sqrt(nb))),
    )
    n_acc_total = sum(r[7] for r in results)
    t_meas_total = nb * n_meas * cfg.step
    mh1 = sum(r[3] for r in results) / (n_acc_total * (edges1[1] - edges1[0]))
    mh2 = sum(r[4] for r in results) / (n_acc_total * (edges2[1] - edges2[0]))
    bh1 = sum(r[5] for r in results) / (t_meas_total * (edges2[1] - edges2[0]))
    bh2 = sum(r[6] for r in results) / (t_meas_total * (edges1[1] - edges1[0]))

    return SimResult(
        laplace_estimates=laplace,
        local_time_rates=rates,
        marginal_histograms={"z1": (edges1, mh1), "z2": (edges2, mh2)},
        boundary_histograms={"nu1": (edges2, bh1), "nu2": (edges1, bh2)},
        measured_time=t_meas_total,
        config=cfg,
        theta_grid=grid,
    )


# ---------------------------------------------------------------------------
# Laplace inversion
# ---------------------------------------------------------------------------


def talbot_invert(transform: Callable, x, nodes: int = 32) -> np.ndarray:
    """Fixed-contour Talbot inversion of a standard Laplace transform.

    The contour winds around the negative real axis, so singularities
    must satisfy Re <= 0; node count beyond ~35 buys nothing in double
    precision because the e^{2M/5} weight growth amplifies roundoff.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("inversion abscissae must be positive")
    mm = nodes
    theta = np.arange(mm) * np.pi / mm
    cot = np.zeros(mm)
    cot[1:] = 1.0 / np.tan(theta[1:])
    r = 2.0 * mm / 5.0
    out = np.empty(xs.size)
    for i, t in enumerate(xs):
        s = r / t * theta * (cot + 1j)
        s[0] = r / t
        fp = np.asarray(transform(s), dtype=complex)
        gam = np.empty(mm, dtype=complex)
        gam[0] = 0.5 * np.exp(r)
        gam[1:] = np.exp(t * s[1:]) * (
            1.0 + 1j * theta[1:] * (1.0 + cot[1:] ** 2) - 1j * cot[1:]
        )
        out[i] = (2.0 / (5.0 * t)) * np.dot(gam, fp).real
    return out


def _stehfest_weights(order: int) -> np.ndarray:
    """Salzer summation weights, accumulated exactly before rounding."""
    if order % 2 or order <= 0:
        raise ValueError("Gaver-Stehfest order must be a positive even integer")
    half = order // 2
    v = np.empty(order)
    for k in range(1, order + 1):
        total = Fraction(0)
        for j in range((k + 1) // 2, min(k, half) + 1):
            total += Fraction(
                j**half * math.factorial(2 * j),
                math.factorial(half - j)
                * math.factorial(j)
                * math.factorial(j - 1)
                * math.factorial(k - j)
                * math.factorial(2 * j - k),
            )
        v[k - 1] = float((-1) ** (k + half) * total)
    return v


def gaver_stehfest_invert(transform: Callable, x, order: int = 14) -> np.ndarray:
    """Gaver-Stehfest inversion (real nodes, Salzer summation weights).

    Alternating weights grow like 10^(0.8 order); order 14 is about the
    double-precision limit and is used here as a cross-check only.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("inversion abscissae must be positive")
    v = _stehfest_weights(order)
    k = np.arange(1, order + 1)
    ln2 = math.log(2.0)
    out = np.empty(xs.size)
    for i, t in enumerate(xs):
        s = k * ln2 / t
        fp = np.asarray(transform(s), dtype=float)
        out[i] = ln2 / t * float(np.dot(v, fp))
    return out


def invert_transform(
    b: TransformBundle,
    side: str,
    grid,
    *,
    nodes: int = 32,
    stehfest_order: int = 14,
    cross_check: bool = True,
    cross_check_rtol: float = 0.01,
) -> DensityTable:
    """Numerically invert one boundary transform to its density.

    The transform in standard Laplace orientation is F(s) = phi(-s);
    its singularities all sit on [s*, -inf) with s* = -(dominant
    singularity), so the integrand is shifted by the dominant
    singularity (known from the asymptotics module) before Talbot
    quadrature: the inverted factor then varies slowly and keeps full
    relative accuracy even deep in the tail.
    """
    if side not in ("nu1", "nu2"):
        raise ValueError("side must be 'nu1' or 'nu2'")
    xs = np.atleast_1d(np.asarray(grid, dtype=float))
    if np.any(xs <= 0):
        raise ValueError("density grid must be strictly positive")
    side_bundle = b if side == "nu1" else b.swapped
    report = asymptotics.classify_regime(side_bundle)
    shift = report.decay_rate  # abscissa of the dominant singularity
    if not shift > 0:
        raise ContourCollisionError(
            f"dominant singularity at {shift} is not separated from the contour"
        )

    def shifted(s):
        return phi1_eval(side_bundle, shift - np.asarray(s, dtype=complex))

    slow = talbot_invert(shifted, xs, nodes=nodes)
    values = np.exp(-shift * xs) * slow
    if cross_check:
        probe = xs[np.unique([0, xs.size // 2, xs.size - 1])]
        gs = gaver_stehfest_invert(
            lambda s: np.real(shifted(s)), probe, order=stehfest_order
        )
        tal = slow[np.unique([0, xs.size // 2, xs.size - 1])]
        rel = np.abs(gs - tal) / np.maximum(np.abs(tal), 1e-300)
        if np.any(rel > cross_check_rtol):
            raise MethodDisagreementError(
                f"Talbot and Gaver-Stehfest disagree by {rel.max():.2%} "
                f"(tolerance {cross_check_rtol:.0%})"
            )
    return DensityTable(grid=xs.copy(), values=values, method="talbot")


# ---------------------------------------------------------------------------
# Diagonal-covariance closed forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiagonalClosedForms:
    """Exact stationary densities for diagonal covariance.

    Both marginals are exponentials and the interior density is their
    normalised product; the skew-symmetry of the diagonal case is what
    makes the product form exact.
    """

    params: ModelParams

    def nu1(self, x2):
        p = self.params
        return (2.0 * p.m1 * p.m2 / p.s22) * np.exp(2.0 * p.m2 / p.s22 * np.asarray(x2))

    def nu2(self, x1):
        p = self.params
        return (2.0 * p.m1 * p.m2 / p.s11) * np.exp(2.0 * p.m1 / p.s11 * np.asarray(x1))

    def pi(self, x1, x2):
        p = self.params
        return (4.0 * p.m1 * p.m2 / (p.s11 * p.s22)) * np.exp(
            2.0 * p.m1 / p.s11 * np.asarray(x1) + 2.0 * p.m2 / p.s22 * np.asarray(x2)
        )

    @staticmethod
    def one_dim_phi(theta, mu: float, sigma: float):
        """Transform of one-dimensional reflected Brownian motion."""
        rate = 2.0 * mu / sigma
        return rate / (np.asarray(theta) + rate)


def diagonal_closed_forms(p: ModelParams) -> DiagonalClosedForms:
    """Exact density evaluators; requires s12 = 0 and identity reflection."""
    if p.s12 != 0.0:
        raise NotDiagonalError(f"s12 = {p.s12} != 0")
    if not p.identity_reflection:
        raise NonIdentityReflectionError("closed forms assume orthogonal reflection")
    return DiagonalClosedForms(p)


# ---------------------------------------------------------------------------
# CSV output (locale-independent decimal points throughout)
# ---------------------------------------------------------------------------


def _num(x) -> str:
    return repr(float(x))


def density_table_to_csv(table: DensityTable, fh) -> None:
    fh.write("x,density,method\n")
    for x, v in zip(table.grid, table.values):
        fh.write(f"{_num(x)},{_num(v)},{table.method}\n")


def sim_result_to_csv(result: SimResult, fh) -> None:
    """Long-format CSV: kind,coord1,coord2,value,stderr."""
    fh.write("kind,coord1,coord2,value,stderr\n")
    for (a, c), (mean, se) in result.laplace_estimates.items():
        fh.write(f"laplace,{_num(a)},{_num(c)},{_num(mean)},{_num(se)}\n")
    (rate1, se1), (rate2, se2) = result.local_time_rates
    fh.write(f"local_time_rate,1,,{_num(rate1)},{_num(se1)}\n")
    fh.write(f"local_time_rate,2,,{_num(rate2)},{_num(se2)}\n")
    for name, (edges, dens) in result.marginal_histograms.items():
        centers = 0.5 * (edges[:-1] + edges[1:])
        for x, v in zip(centers, dens):
            fh.write(f"marginal_{name},{_num(x)},,{_num(v)},\n")
    for name, (edges, dens) in result.boundary_histograms.items():
        centers = 0.5 * (edges[:-1] + edges[1:])
        for x, v in zip(centers, dens):
            fh.write(f"boundary_{name},{_num(x)},,{_num(v)},\n")
