"""Monte Carlo samplers for Levy increments, empirical Wasserstein
estimators, exact total-variation oracles and bound certification.

Sampling is reproducible: a counter-based Philox generator seeded from the
batch seed, with a fixed draw order (one uniform stream for the Gaussian
base, then the jump draws).  The base Gaussian is produced as Phi^{-1}(U)
from uniforms so that two batches built from the same seed share their
uniform stream; when both samplers are monotone transforms of that stream
(the spectral path below, or a pure Gaussian) the quantile-coupled W_1
estimator then has relative rather than absolute Monte Carlo error.

For measures with infinite small-jump activity, jumps below ``sim_eps`` are
replaced by a Gaussian with the matching variance; the certified W_1 cost of
that substitution is attached to the batch as ``error_budget``.  When the
expected big-jump count per sample is large the substituted law is sampled by
inverse CDF, with the CDF recovered from the law's characteristic function on
an FFT grid (normalization and tail mass checked); this is the same law as
summing the jumps one by one, at a cost independent of the jump count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np
from scipy.special import ive, ndtr, ndtri

from . import bounds as _bounds
from . import fourier as _fourier
from .measures import FiniteDiscrete, LevyTriplet, truncate

BOOTSTRAP_RESAMPLES = 400
DEFAULT_SAMPLES = 10**5
# above this expected total number of explicit jump draws per batch, switch
# to the spectral sampler (whose cost is independent of the jump intensity)
_MAX_DIRECT_DRAWS = 2.0e7

ESTIMATOR_TAGS = ("QuantileWp", "CdfW1", "TvDensityGrid", "TvExactGaussian", "TvSkellam")


class ExactSimulationUnavailableError(ValueError):
    """sim_eps = 0 was requested for an infinite-activity measure."""


@dataclass(frozen=True)
class SampleBatch:
    values: np.ndarray
    n: int
    seed: int
    t: float
    triplet: LevyTriplet
    sim_eps: float
    error_budget: float
    method: str = "direct"

    def scaled(self, factor: float) -> "SampleBatch":
        """Batch of values/err multiplied by factor (W_1 scales linearly)."""
        return SampleBatch(
            values=self.values * factor,
            n=self.n,
            seed=self.seed,
            t=self.t,
            triplet=self.triplet,
            sim_eps=self.sim_eps,
            error_budget=self.error_budget * abs(factor),
            method=self.method,
        )

    def save(self, stem: Path) -> None:
        """Write values as little-endian float64 plus a JSON sidecar."""
        stem = Path(stem)
        self.values.astype("<f8").tofile(stem.with_suffix(".bin"))
        meta = {
            "n": self.n,
            "seed": self.seed,
            "t": self.t,
            "sim_eps": self.sim_eps,
            "error_budget": self.error_budget,
            "method": self.method,
            "dtype": "<f8",
        }
        stem.with_suffix(".json").write_text(json.dumps(meta, indent=2))


@dataclass(frozen=True)
class EmpiricalEstimate:
    point: float
    ci_low: float
    ci_high: float
    estimator: str
    flags: tuple = ()

    def __post_init__(self):
        if self.estimator not in ESTIMATOR_TAGS:
            raise ValueError(f"unknown estimator tag {self.estimator!r}")
        if not (self.ci_low <= self.point <= self.ci_high):
            raise ValueError("confidence interval must contain the point estimate")


# ---------------------------------------------------------------------------
# Spectral (characteristic-function) inversion
# ---------------------------------------------------------------------------


def _cf_inversion_ppf(
    cf: Callable, mean: float, std: float, mass_tol: float = 1e-6,
    ringing_tol: float = 1e-3,
) -> Callable:
    """Quantile function of the law with characteristic function cf.

    The density is recovered on an FFT grid covering mean +- 14 std with the
    frequency ceiling chosen so the CF modulus is below 1e-16 there.  The
    recovered density carries small oscillatory noise; the CDF is built from
    the signed density and monotonized, after checking that the signed total
    is 1 (to mass_tol) and the negative ringing mass is below ringing_tol.
    """
    if std <= 0:
        raise ValueError("need a positive std scale for the inversion grid")
    width = 14.0 * std
    u_max = math.sqrt(90.0) / std * 1.5
    while abs(cf(np.array([u_max]))[0]) > 1e-16:
        u_max *= 2.0
    n_grid = 2 ** int(math.ceil(math.log2(max(2.0 * width * u_max / math.pi, 4096))))
    n_grid = min(n_grid, 2**22)
    dx = 2.0 * width / n_grid
    u = 2.0 * math.pi * np.fft.fftfreq(n_grid, d=dx)
    phase = cf(u + 0.0) * np.exp(1j * u * (width - mean))
    du = math.pi / width
    dens = np.real(np.fft.fft(phase)) * du / (2.0 * math.pi)
    xs = mean - width + dx * np.arange(n_grid)
    total = float(dens.sum() * dx)
    if abs(total - 1.0) > mass_tol:
        raise RuntimeError(
            f"spectral inversion mass check failed (signed total {total!r})"
        )
    ringing = -float(dens[dens < 0.0].sum() * dx)
    if ringing > ringing_tol:
        raise RuntimeError(
            f"spectral inversion ringing too large ({ringing:.2e})"
        )
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * dx)])
    cdf = np.maximum.accumulate(cdf / cdf[-1])
    keep = np.concatenate([[True], np.diff(cdf) > 0])
    cdf_k, xs_k = cdf[keep], xs[keep]
    return lambda q: np.interp(np.asarray(q, dtype=float), cdf_k, xs_k)


def _substituted_cf(triplet: LevyTriplet, t: float, sim_eps: float) -> tuple:
    """CF, mean and std of the law: Gaussian(t b(sim_eps), t(sigma^2 +
    sigma_bar^2(sim_eps))) convolved with the big-jump compound Poisson."""
    nu = triplet.nu
    gauss_var = t * (triplet.sigma**2 + nu.sigma_bar_sq(sim_eps))
    drift = t * (triplet.b - nu.mean_between(sim_eps, 1.0))
    band_mean = nu.mean_between(sim_eps, math.inf)
    band_var = nu.abs_moment_outside(2.0, sim_eps)

    def cf(u):
        u = np.asarray(u, dtype=float)
        # uncompensated big jumps: int_{|x|>eps}(e^{iux}-1) nu(dx)
        band = nu.char_integral_between(u, sim_eps, math.inf) + 1j * u * band_mean
        return np.exp(1j * u * drift - gauss_var * u**2 / 2.0 + t * band)

    mean = drift + t * band_mean
    std = math.sqrt(gauss_var + t * band_var)
    return cf, mean, std, gauss_var


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------


def sample_increment(
    triplet: LevyTriplet,
    t: float,
    n: int = DEFAULT_SAMPLES,
    seed: int = 0,
    sim_eps: float = 0.0,
    method: str = "auto",
) -> SampleBatch:
    """n i.i.d. samples of the time-t marginal of the process.

    sim_eps = 0 requires finite jump activity (exact simulation); otherwise
    jumps below sim_eps are Gaussian-substituted and the batch carries the
    certified W_1 budget of that substitution.  method is "auto", "direct"
    (explicit Poisson jump sums) or "cf" (spectral inversion of the
    substituted law).
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if n < 1:
        raise ValueError("n must be positive")
    if sim_eps < 0 or sim_eps > 1:
        raise ValueError("sim_eps must lie in [0, 1]")
    nu = triplet.nu
    if sim_eps == 0.0 and not nu.has_finite_activity():
        raise ExactSimulationUnavailableError(
            "exact simulation needs finite activity; choose sim_eps > 0"
        )
    rng = np.random.Generator(np.random.Philox(seed))

    gauss_var = t * (triplet.sigma**2 + (nu.sigma_bar_sq(sim_eps) if sim_eps > 0 else 0.0))
    drift = t * (triplet.b - nu.mean_between(sim_eps, 1.0))
    try:
        lam = nu.mass_outside(sim_eps) if not nu.is_zero() else 0.0
    except Exception as exc:
        raise ExactSimulationUnavailableError(
            "jump intensity not computable at this sim_eps; choose sim_eps > 0"
        ) from exc

    if method == "auto":
        use_cf = (
            not isinstance(nu, FiniteDiscrete)
            and not nu.is_zero()
            and t * lam * n > _MAX_DIRECT_DRAWS
            and gauss_var > 0.0
        )
        method = "cf" if use_cf else "direct"

    uniforms = rng.random(n)  # always drawn first, shared across same-seed batches

    if method == "cf":
        cf, mean, std, gv = _substituted_cf(triplet, t, sim_eps)
        if gv <= 0.0:
            raise ValueError("spectral sampling needs a Gaussian component")
        values = _cf_inversion_ppf(cf, mean, std)(uniforms)
    elif method == "direct":
        values = drift + math.sqrt(gauss_var) * ndtri(uniforms)
        if lam > 0.0:
            if isinstance(nu, FiniteDiscrete):
                # one Poisson counter per atom, in sorted atom order
                outside = np.abs(nu.xs) > sim_eps
                for x, r in zip(nu.xs[outside], nu.rs[outside]):
                    values = values + x * rng.poisson(t * r, n)
            else:
                counts = rng.poisson(t * lam, n)
                total = int(counts.sum())
                if total > 0:
                    law = nu.jump_law(sim_eps)
                    draws = law.ppf(rng.random(total))
                    idx = np.repeat(np.arange(n), counts)
                    values = values + np.bincount(idx, weights=draws, minlength=n)
    else:
        raise ValueError(f"unknown sampling method {method!r}")

    budget = 0.0
    if sim_eps > 0.0 and nu.sigma_bar_sq(sim_eps) > 0.0:
        budget = _bounds.small_jump_gauss_w(
            1.0, t, nu, sim_eps, _bounds.ConstantPolicy()
        ).value
    return SampleBatch(
        values=np.asarray(values, dtype=float),
        n=n,
        seed=seed,
        t=t,
        triplet=triplet,
        sim_eps=sim_eps,
        error_budget=budget,
        method=method,
    )


# ---------------------------------------------------------------------------
# Wasserstein estimators
# ---------------------------------------------------------------------------


def _aligned_sorted(a: SampleBatch, b: SampleBatch) -> tuple:
    av, bv = np.sort(a.values), np.sort(b.values)
    m = min(len(av), len(bv))
    if len(av) != len(bv):
        # evenly spaced order statistics of the larger batch
        def thin(v):
            if len(v) == m:
                return v
            idx = np.minimum(
                (np.floor((np.arange(m) + 0.5) * len(v) / m)).astype(int), len(v) - 1
            )
            return v[idx]

        av, bv = thin(av), thin(bv)
    return av, bv


def _bootstrap_ci(diffs_p: np.ndarray, p: float, seeds: tuple) -> tuple:
    """Percentile bootstrap (paired resampling) of ((1/n) sum d_i)^{1/p}."""
    n = len(diffs_p)
    rng = np.random.Generator(
        np.random.Philox(np.random.SeedSequence(list(seeds) + [0xB007]))
    )
    stats = np.empty(BOOTSTRAP_RESAMPLES)
    chunk = max(1, int(5e6 // max(n, 1)))
    done = 0
    while done < BOOTSTRAP_RESAMPLES:
        b = min(chunk, BOOTSTRAP_RESAMPLES - done)
        idx = rng.integers(0, n, size=(b, n))
        stats[done : done + b] = diffs_p[idx].mean(axis=1) ** (1.0 / p)
        done += b
    lo, hi = np.percentile(stats, [2.5, 97.5])
    return float(lo), float(hi)


def empirical_wp(a: SampleBatch, b: SampleBatch, p: float = 1.0) -> EmpiricalEstimate:
    """W_p between the empirical laws of two batches by quantile coupling:
    ((1/n) sum |a_(i) - b_(i)|^p)^{1/p} with a percentile-bootstrap CI."""
    if not (1.0 <= p <= 2.0):
        raise ValueError("p must lie in [1, 2]")
    flags = []
    if min(a.n, b.n) < 100:
        flags.append("low-sample")
    if a.n != b.n:
        flags.append("resampled-to-min")
    av, bv = _aligned_sorted(a, b)
    diffs_p = np.abs(av - bv) ** p
    point = float(diffs_p.mean() ** (1.0 / p))
    lo, hi = _bootstrap_ci(diffs_p, p, (a.seed, b.seed))
    return EmpiricalEstimate(
        point=point,
        ci_low=min(lo, point),
        ci_high=max(hi, point),
        estimator="QuantileWp",
        flags=tuple(flags),
    )


def empirical_w1_cdf(a: SampleBatch, b: SampleBatch) -> EmpiricalEstimate:
    """W_1 between the empirical laws as the area between the empirical CDFs
    on the merged sample grid.  Agrees with empirical_wp(p=1) to rounding."""
    flags = []
    if min(a.n, b.n) < 100:
        flags.append("low-sample")
    av, bv = _aligned_sorted(a, b)
    m = len(av)
    pooled = np.concatenate([av, bv])
    # +1/m when passing an a-sample, -1/m when passing a b-sample
    steps = np.concatenate([np.full(m, 1.0 / m), np.full(m, -1.0 / m)])
    order = np.argsort(pooled, kind="mergesort")
    xs = pooled[order]
    gap = np.cumsum(steps[order])[:-1]
    point = float(np.sum(np.abs(gap) * np.diff(xs)))
    lo, hi = _bootstrap_ci(np.abs(av - bv), 1.0, (a.seed, b.seed))
    return EmpiricalEstimate(
        point=point,
        ci_low=min(lo, point),
        ci_high=max(hi, point),
        estimator="CdfW1",
        flags=tuple(flags),
    )


# ---------------------------------------------------------------------------
# Exact and numeric TV oracles
# ---------------------------------------------------------------------------


def skellam_pmf(k, mu1: float, mu2: float):
    """pmf of N1 - N2 at k, with N1 ~ Poisson(mu1), N2 ~ Poisson(mu2):
    e^{-(mu1+mu2)} (mu1/mu2)^{k/2} I_|k|(2 sqrt(mu1 mu2)), evaluated through
    the exponentially scaled Bessel function for stability."""
    if mu1 < 0 or mu2 < 0:
        raise ValueError("Poisson means must be nonnegative")
    k = np.asarray(k)
    scalar = k.ndim == 0
    k = np.atleast_1d(k).astype(int)
    if mu1 == 0.0 and mu2 == 0.0:
        out = np.where(k == 0, 1.0, 0.0)
    elif mu2 == 0.0:
        with np.errstate(divide="ignore"):
            logp = np.where(k >= 0, k * math.log(mu1) - _log_factorial(np.abs(k)) - mu1, -np.inf)
        out = np.where(k >= 0, np.exp(logp), 0.0)
    elif mu1 == 0.0:
        with np.errstate(divide="ignore"):
            logp = np.where(k <= 0, -k * math.log(mu2) - _log_factorial(np.abs(k)) - mu2, -np.inf)
        out = np.where(k <= 0, np.exp(logp), 0.0)
    else:
        x = 2.0 * math.sqrt(mu1 * mu2)
        out = (
            (mu1 / mu2) ** (k / 2.0)
            * ive(np.abs(k), x)
            * math.exp(x - mu1 - mu2)
        )
    return float(out[0]) if scalar else out


def _log_factorial(k):
    from scipy.special import gammaln

    return gammaln(np.asarray(k, dtype=float) + 1.0)


def skellam_support(mu1: float, mu2: float, tol: float = 1e-12) -> np.ndarray:
    """Integer range capturing all but at most tol of the Skellam mass."""
    mean = mu1 - mu2
    spread = 20.0 * math.sqrt(mu1 + mu2) + 20.0
    ks = np.arange(int(math.floor(mean - spread)), int(math.ceil(mean + spread)) + 1)
    if skellam_pmf(ks, mu1, mu2).sum() < 1.0 - tol:
        raise RuntimeError("Skellam truncation range too small")
    return ks


def tv_exact_gaussian(m1: float, s1: float, m2: float, s2: float) -> float:
    """Exact TV between N(m1, s1^2) and N(m2, s2^2): 2 Phi(|dm|/(2s)) - 1 in
    the equal-variance case, density-crossing integration otherwise."""
    if s1 <= 0 or s2 <= 0:
        raise ValueError("standard deviations must be positive")
    if s1 == s2:
        return float(2.0 * ndtr(abs(m1 - m2) / (2.0 * s1)) - 1.0)
    # crossings of the two densities: quadratic in x from equal log-densities
    a = 1.0 / (2.0 * s2**2) - 1.0 / (2.0 * s1**2)
    b = m1 / s1**2 - m2 / s2**2
    c = m2**2 / (2.0 * s2**2) - m1**2 / (2.0 * s1**2) + math.log(s2 / s1)
    disc = b**2 - 4.0 * a * c
    if disc <= 0:
        return 0.0
    r1 = (-b - math.sqrt(disc)) / (2.0 * a)
    r2 = (-b + math.sqrt(disc)) / (2.0 * a)
    x1, x2 = min(r1, r2), max(r1, r2)

    def gap(x):
        return ndtr((x - m1) / s1) - ndtr((x - m2) / s2)

    return float(abs(gap(x1)) + abs(gap(x2)))


def tv_numeric(
    density1: Callable,
    density2: Callable,
    lo: float,
    hi: float,
    abs_tol: float = 1e-8,
    tail_bound: float = 0.0,
) -> EmpiricalEstimate:
    """(1/2) int |f - g| on [lo, hi] by trapezoid refinement until the value
    moves by less than abs_tol; tail mass beyond the window must be certified
    by the caller and is reported as a flag when it exceeds the tolerance."""
    n_pts = 2**12 + 1
    prev = None
    for _ in range(10):
        xs = np.linspace(lo, hi, n_pts)
        val = 0.5 * float(np.trapezoid(np.abs(density1(xs) - density2(xs)), xs))
        if prev is not None and abs(val - prev) < abs_tol:
            break
        prev = val
        n_pts = 2 * (n_pts - 1) + 1
    flags = () if tail_bound <= abs_tol else ("uncertified-tails",)
    slack = abs_tol + tail_bound
    return EmpiricalEstimate(
        point=val,
        ci_low=max(val - slack, 0.0),
        ci_high=val + slack,
        estimator="TvDensityGrid",
        flags=flags,
    )


def tv_skellam(mu_a: tuple, mu_b: tuple) -> EmpiricalEstimate:
    """Exact TV between two Skellam laws via their pmfs on a certified range."""
    ks = skellam_support(max(mu_a[0], mu_b[0]) + 1.0, max(mu_a[1], mu_b[1]) + 1.0)
    pa = skellam_pmf(ks, *mu_a)
    pb = skellam_pmf(ks, *mu_b)
    val = float(0.5 * np.sum(np.abs(pa - pb)))
    return EmpiricalEstimate(
        point=val, ci_low=max(val - 1e-12, 0.0), ci_high=val + 1e-12,
        estimator="TvSkellam",
    )


def lattice_gaussian_mixture_density(
    spacing: float, mu1: float, mu2: float, gauss_var: float
) -> tuple:
    """Density of spacing * Skellam(mu1, mu2) + N(0, gauss_var) and the
    neglected tail mass of the lattice truncation."""
    if gauss_var <= 0:
        raise ValueError("need a positive Gaussian variance")
    ks = skellam_support(mu1, mu2)
    ws = skellam_pmf(ks, mu1, mu2)
    tail = max(0.0, 1.0 - float(ws.sum()))
    centers = spacing * ks
    inv = 1.0 / math.sqrt(2.0 * math.pi * gauss_var)

    def density(x):
        x = np.asarray(x, dtype=float)
        z = (x[..., None] - centers) ** 2 / (2.0 * gauss_var)
        return inv * np.sum(ws * np.exp(-z), axis=-1)

    return density, tail


# ---------------------------------------------------------------------------
# Certification
# ---------------------------------------------------------------------------


@dataclass
class CertificationRow:
    scenario_id: str
    params: dict
    theorem: str
    lower: float
    emp_point: float
    emp_ci_low: float
    emp_ci_high: float
    error_budget: float
    upper: float
    upper_rigorous: bool
    branch: str
    passed: bool


def certify(
    scenario,
    t: Optional[float] = None,
    eps: Optional[float] = None,
    normalize: float = 1.0,
) -> CertificationRow:
    """Run the lower-bound / empirical / upper-bound sandwich for one
    scenario cell and record pass/fail.

    The scenario provides: id, triplet1, triplet2, p, eps, t, samples, seed,
    sim_eps, slack.  t and eps arguments override the scenario values (sweep
    cells); normalize rescales both batches and all three numbers (used for
    pinning distances to a common scale across a sweep).
    """
    t = t if t is not None else scenario.t
    eps = eps if eps is not None else scenario.eps
    p = scenario.p
    policy = _bounds.ConstantPolicy()
    tr1, tr2 = scenario.triplet1, scenario.triplet2

    def batch(tr):
        se = 0.0 if tr.nu.has_finite_activity() else scenario.sim_eps
        return sample_increment(tr, t, scenario.samples, scenario.seed, se)

    a, b = batch(tr1), batch(tr2)
    if normalize != 1.0:
        a, b = a.scaled(normalize), b.scaled(normalize)
    emp = empirical_wp(a, b, p)
    budget = a.error_budget + b.error_budget

    upper = _bounds.marginal_wp_bound(p, t, tr1, tr2, eps, policy)
    upper_value = upper.value * abs(normalize)

    scale = min(eps, math.sqrt(t * max(
        tr1.gaussian_std_with_small_jumps(eps) ** 2,
        tr2.gaussian_std_with_small_jumps(eps) ** 2,
        1e-12,
    )))
    cfg = _fourier.SupSearchConfig(u_max=1e3 / scale)
    res = _fourier.toscani_distance(
        1.0,
        lambda u: _fourier.char_fn(tr1, t, u),
        lambda u: _fourier.char_fn(tr2, t, u),
        cfg,
    )
    lower = _bounds.wp_lower_from_t1(res.value).value * abs(normalize)

    slack = getattr(scenario, "slack", 0.0)
    passed = (lower <= emp.ci_high + budget) and (
        emp.ci_low - budget <= upper_value * (1.0 + slack)
    )
    return CertificationRow(
        scenario_id=scenario.id,
        params={"t": t, "eps": eps, "p": p, "n": scenario.samples,
                "seed": scenario.seed, "sim_eps": scenario.sim_eps},
        theorem=upper.theorem,
        lower=lower,
        emp_point=emp.point,
        emp_ci_low=emp.ci_low,
        emp_ci_high=emp.ci_high,
        error_budget=budget,
        upper=upper_value,
        upper_rigorous=upper.rigorous,
        branch=";".join(f"{k}={v}" for k, v in upper.branches.items()) or "-",
        passed=bool(passed),
    )
