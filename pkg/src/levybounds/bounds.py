"""Closed-form distance bounds between marginals of Levy processes.

Every bound evaluator is a pure function of triplet characteristics (through
the truncated moments of :mod:`levybounds.measures`).  Evaluators that
combine several mechanisms return a :class:`BoundReport` carrying the value,
the active min-branches and a rigor flag; simple formulas return plain
floats.  A report is flagged non-rigorous whenever a user-tunable constant
(see :class:`ConstantPolicy`) entered the value: explicit constants are only
available on the p = 1 paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .measures import (
    LevyMeasure,
    LevyTriplet,
    hellinger_sq,
    jump_law_tv,
    jump_law_wp,
    truncate,
)

SQRT_2PI = math.sqrt(2.0 * math.pi)

# Tags for every bound shipped by the package (17 of them).
BOUND_TAGS = (
    "SmallJumpW",
    "SmallJumpPair",
    "RandomSumW",
    "PoissonW",
    "MainW",
    "TensorW",
    "ConvTV",
    "CSTV",
    "NIntersectTV",
    "CTMRTV",
    "SmallJumpTV",
    "MainTV",
    "ToscaniTV",
    "LieseTV",
    "GaussW2",
    "GaussTV",
    "T1LowerW",
)

TV_TAGS = frozenset(
    {"ConvTV", "CSTV", "NIntersectTV", "CTMRTV", "SmallJumpTV", "MainTV",
     "ToscaniTV", "LieseTV", "GaussTV"}
)


class InsufficientInputError(ValueError):
    """A term of the bound needs a user-supplied quantity that is missing."""


class InapplicableError(ValueError):
    """The bound's preconditions are not met by the given inputs."""


@dataclass(frozen=True)
class ConstantPolicy:
    """User-tunable constants that the statements leave implicit.

    c_p: constant converting a Zolotarev-type bound back to W_p; equals 1 at
        p = 1 where the two distances coincide.
    rio_C: the p-dependent constant in the small-jump normal approximation
        for p in (1, 2]; default 3.0 is a working value, not a proved one.
    cs_C: the numerical constant of the three-term smoothed-TV bound.
    """

    c_p: float = 1.0
    rio_C: float = 3.0
    cs_C: float = 1.0
    rio_certified: bool = False
    cs_certified: bool = False

    def __post_init__(self):
        if min(self.c_p, self.rio_C, self.cs_C) <= 0:
            raise ValueError("policy constants must be positive")

    def c_p_for(self, p: float) -> float:
        return 1.0 if p == 1.0 else self.c_p


@dataclass
class BoundReport:
    value: float
    theorem: str
    constants_used: dict
    rigorous: bool
    is_lower: bool = False
    branches: dict = field(default_factory=dict)
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.value < 0 and not math.isnan(self.value):
            raise ValueError("bound values are nonnegative")
        if self.theorem not in BOUND_TAGS:
            raise ValueError(f"unknown theorem tag {self.theorem!r}")

    @property
    def presentation_value(self) -> float:
        """TV-type values capped at 1 for display; the raw value is kept."""
        if self.theorem in TV_TAGS:
            return min(self.value, 1.0)
        return self.value


def _check_p(p: float) -> None:
    if not (1.0 <= p <= 2.0):
        raise ValueError(f"p must lie in [1, 2], got {p}")


def _check_eps(eps: float) -> None:
    if not (0.0 < eps <= 1.0):
        raise ValueError(f"eps must lie in (0, 1], got {eps}")


# ---------------------------------------------------------------------------
# Gaussian building blocks
# ---------------------------------------------------------------------------


def gauss_w2(m1: float, s1: float, m2: float, s2: float) -> float:
    """W_2 between N(m1, s1^2) and N(m2, s2^2): sqrt(dm^2 + ds^2).  Exact."""
    if s1 < 0 or s2 < 0:
        raise ValueError("standard deviations must be nonnegative")
    return math.sqrt((m1 - m2) ** 2 + (s1 - s2) ** 2)


def gauss_tv_bound(m1: float, s1: float, m2: float, s2: float) -> float:
    """Upper bound on TV between N(m1,s1^2) and N(m2,s2^2):
    (|dm|/sqrt(2 pi) + sqrt(2)|ds|) / max(s1, s2)."""
    if s1 <= 0 or s2 <= 0:
        raise InapplicableError("gauss_tv_bound needs positive variances")
    return (abs(m1 - m2) / SQRT_2PI + math.sqrt(2.0) * abs(s1 - s2)) / max(s1, s2)


# ---------------------------------------------------------------------------
# Small jumps vs Gaussian
# ---------------------------------------------------------------------------


def small_jump_gauss_w(
    p: float, t: float, measure: LevyMeasure, eps: float, policy: ConstantPolicy
) -> BoundReport:
    """W_p between the small-jump martingale at time t and N(0, t sigma_bar^2).

    p = 1 carries explicit constants: min(2 sqrt(t sigma_bar^2),
    m3 / (2 sigma_bar^2)) with m3 the third absolute moment inside eps.
    For p in (1, 2] the constant rio_C multiplies
    min(sqrt(t) sigma_bar, (m_{p+2}/sigma_bar^2)^{1/p}).
    Both cases also report the coarser cap using eps in the second branch.
    """
    _check_p(p)
    _check_eps(eps)
    if t <= 0:
        raise ValueError("t must be positive")
    sb2 = measure.sigma_bar_sq(eps)
    if sb2 <= 0.0:
        raise InapplicableError("measure has no small jumps below eps")
    diffusive = 2.0 * math.sqrt(t * sb2) if p == 1.0 else math.sqrt(t * sb2)
    if p == 1.0:
        moment = measure.abs_moment_inside(3.0, eps) / (2.0 * sb2)
        cap_eps = eps / 2.0
        c_used = {"sqrt_branch": 2.0, "moment_branch": 0.5}
        rigorous = True
    else:
        m = measure.abs_moment_inside(p + 2.0, eps)
        moment = policy.rio_C * (m / sb2) ** (1.0 / p)
        diffusive = policy.rio_C * diffusive
        cap_eps = policy.rio_C * eps
        c_used = {"rio_C": policy.rio_C}
        rigorous = policy.rio_certified
    value = min(diffusive, moment)
    return BoundReport(
        value=value,
        theorem="SmallJumpW",
        constants_used=c_used,
        rigorous=rigorous,
        branches={
            "active": "diffusive" if diffusive <= moment else "moment",
            "coarse_cap": min(diffusive, cap_eps),
        },
        terms={"diffusive": diffusive, "moment": moment},
    )


def small_jump_pair_w(
    p: float,
    t: float,
    triplet1: LevyTriplet,
    triplet2: LevyTriplet,
    eps: float,
    policy: ConstantPolicy,
) -> BoundReport:
    """W_p between the two eps-restricted processes (small jumps plus their
    own Gaussian parts): sum of the single small-jump bounds plus the
    volatility-matching term t (sqrt(sb1 + s1^2) - sqrt(sb2 + s2^2))^2."""
    singles = [
        small_jump_gauss_w(p, t, tr.nu, eps, policy) for tr in (triplet1, triplet2)
    ]
    s_tot1 = math.sqrt(triplet1.nu.sigma_bar_sq(eps) + triplet1.sigma**2)
    s_tot2 = math.sqrt(triplet2.nu.sigma_bar_sq(eps) + triplet2.sigma**2)
    matching = t * (s_tot1 - s_tot2) ** 2
    return BoundReport(
        value=singles[0].value + singles[1].value + matching,
        theorem="SmallJumpPair",
        constants_used=singles[0].constants_used,
        rigorous=singles[0].rigorous and singles[1].rigorous,
        branches={
            "active_1": singles[0].branches["active"],
            "active_2": singles[1].branches["active"],
        },
        terms={
            "small_jumps_1": singles[0].value,
            "small_jumps_2": singles[1].value,
            "volatility_matching": matching,
        },
    )


# ---------------------------------------------------------------------------
# Poisson counters and random sums
# ---------------------------------------------------------------------------


def stirling2(p: int, i: int) -> int:
    """Stirling number of the second kind {p, i} by the alternating binomial
    sum; exact integer arithmetic.  Returns 0 for i > p (convention)."""
    if p < 0 or i < 0:
        raise ValueError("indices must be nonnegative")
    if i > p:
        return 0
    if i == 0:
        return 1 if p == 0 else 0
    total = sum((-1) ** (i - j) * math.comb(i, j) * j**p for j in range(i + 1))
    return total // math.factorial(i)


def poisson_moment(p: int, ell: float) -> float:
    """p-th raw moment of Poisson(ell): sum_i ell^i {p, i}."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    return float(sum(ell**i * stirling2(p, i) for i in range(1, p + 1)))


def _poisson_raw_moment(p: float, ell: float) -> float:
    """E[N^p] for N ~ Poisson(ell): exact for integer p, interpolated
    (E[N]^{2-p} E[N^2]^{p-1}) for fractional p in (1, 2)."""
    if p == 1.0:
        return ell
    if float(p).is_integer():
        return poisson_moment(int(p), ell)
    if ell == 0.0:
        return 0.0
    return poisson_moment(1, ell) ** (2.0 - p) * poisson_moment(2, ell) ** (p - 1.0)


def poisson_wp(p: float, lambda1: float, lambda2: float) -> float:
    """W_p between Poisson(lambda1) and Poisson(lambda2): |d| at p = 1,
    the exact moment m_{(p,|d|)}^{1/p} at integer p, and (|d| + |d|^p)^{1/p}
    for fractional p in (1, 2)."""
    _check_p(p)
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("Poisson means must be nonnegative")
    d = abs(lambda1 - lambda2)
    if p == 1.0:
        return d
    if float(p).is_integer():
        return poisson_moment(int(p), d) ** (1.0 / p)
    return (d + d**p) ** (1.0 / p)


def random_sum_wp(
    p: float,
    lambda1: float,
    lambda2: float,
    t: float,
    policy: ConstantPolicy,
    wp_jump: Optional[float] = None,
    zp_jump: Optional[float] = None,
    e_abs_y2_p: Optional[float] = None,
) -> BoundReport:
    """W_p between compound-Poisson sums sum_{i<=N} X_i and sum_{i<=N'} Y_i
    with N ~ Poisson(t lambda1), N' ~ Poisson(t lambda2):

        min((c_p E[N] Z_p)^{1/p}, E[N^p]^{1/p} W_p(X1, Y1))
            + W_p(N, N') E[|Y1|^p]^{1/p}.

    Supply at least one of wp_jump = W_p(X1, Y1) or zp_jump = Z_p(X1, Y1);
    e_abs_y2_p = E|Y1|^p is needed whenever lambda1 != lambda2.
    """
    _check_p(p)
    if t < 0 or lambda1 < 0 or lambda2 < 0:
        raise ValueError("t and intensities must be nonnegative")
    en = t * lambda1
    candidates = {}
    if zp_jump is not None:
        candidates["zolotarev"] = (policy.c_p_for(p) * en * zp_jump) ** (1.0 / p)
    if wp_jump is not None:
        candidates["moment"] = _poisson_raw_moment(p, en) ** (1.0 / p) * wp_jump
    if en > 0 and not candidates:
        raise InsufficientInputError("need W_p(X1, Y1) or Z_p(X1, Y1)")
    first = min(candidates.values()) if candidates else 0.0
    winner = min(candidates, key=candidates.get) if candidates else "none"

    wpn = poisson_wp(p, t * lambda1, t * lambda2)
    if wpn > 0:
        if e_abs_y2_p is None:
            raise InsufficientInputError("need E|Y1|^p when intensities differ")
        second = wpn * e_abs_y2_p ** (1.0 / p)
    else:
        second = 0.0
    rigorous = not (winner == "zolotarev" and p > 1.0)
    return BoundReport(
        value=first + second,
        theorem="RandomSumW",
        constants_used={"c_p": policy.c_p_for(p)} if winner == "zolotarev" else {},
        rigorous=rigorous,
        branches={"first_term": winner},
        terms={"matched_count": first, "count_mismatch": second},
    )


# ---------------------------------------------------------------------------
# Marginal and increment bounds
# ---------------------------------------------------------------------------


def _big_jump_term(
    p: float,
    t: float,
    view1,
    view2,
    jump_wp: Optional[float],
    e_abs_y2_p: Optional[float],
) -> tuple:
    """((t l1)^{1/p} + t l1) W_p(Y1, Y2) + (L^{1/p} + L) E|Y2|^p^{1/p} with
    L = t |l1 - l2|.  When only one side has jumps the labels are swapped so
    the paired term vanishes and the mismatch term uses the jumping side."""
    lam1, lam2 = view1.lambda_eps, view2.lambda_eps
    if lam1 == 0.0 and lam2 == 0.0:
        return 0.0, {}
    if lam1 > 0.0 and lam2 == 0.0:
        view1, view2 = view2, view1
        lam1, lam2 = lam2, lam1
    paired = 0.0
    if lam1 > 0.0:
        wp_j = jump_wp
        if wp_j is None:
            wp_j = jump_law_wp(view1.jump_law, view2.jump_law, p)
        if wp_j is None:
            raise InsufficientInputError(
                "W_p between the big-jump laws is not computable in closed "
                "form; pass jump_wp explicitly"
            )
        tl = t * lam1
        paired = (tl ** (1.0 / p) + tl) * wp_j
    mismatch = 0.0
    big_l = t * abs(lam1 - lam2)
    if big_l > 0.0:
        ey = e_abs_y2_p
        if ey is None and view2.jump_law is not None:
            ey = view2.jump_law.abs_moment(p)
        if ey is None:
            raise InsufficientInputError("need E|Y2|^p for the intensity mismatch")
        mismatch = (big_l ** (1.0 / p) + big_l) * ey ** (1.0 / p)
    return paired + mismatch, {"paired": paired, "intensity_mismatch": mismatch}


def marginal_wp_bound(
    p: float,
    t: float,
    triplet1: LevyTriplet,
    triplet2: LevyTriplet,
    eps: float,
    policy: ConstantPolicy,
    jump_wp: Optional[float] = None,
    e_abs_y2_p: Optional[float] = None,
) -> BoundReport:
    """W_p between the time-t marginals of two Levy processes, by splitting at
    jump size eps: Gaussian matching + small-jump normal approximation +
    compound-Poisson comparison."""
    _check_p(p)
    _check_eps(eps)
    if t <= 0:
        raise ValueError("t must be positive")
    view1 = truncate(triplet1.nu, triplet1.b, eps)
    view2 = truncate(triplet2.nu, triplet2.b, eps)
    sb1 = triplet1.nu.sigma_bar_sq(eps)
    sb2 = triplet2.nu.sigma_bar_sq(eps)

    # drift + volatility matching; sigma and sigma_bar enter as a plain sum
    # of standard deviations
    gauss = gauss_w2(
        t * view1.b_eps,
        math.sqrt(t) * (triplet1.sigma + math.sqrt(sb1)),
        t * view2.b_eps,
        math.sqrt(t) * (triplet2.sigma + math.sqrt(sb2)),
    )

    small = 0.0
    small_terms = {}
    rigorous = p == 1.0
    constants = {}
    for j, (tr, sb) in enumerate(((triplet1, sb1), (triplet2, sb2)), start=1):
        if sb > 0.0:
            rep = small_jump_gauss_w(p, t, tr.nu, eps, policy)
            small += rep.value
            small_terms[f"small_jumps_{j}"] = rep.value
            rigorous = rigorous and rep.rigorous
            constants.update(rep.constants_used)

    big, big_terms = _big_jump_term(p, t, view1, view2, jump_wp, e_abs_y2_p)
    return BoundReport(
        value=gauss + small + big,
        theorem="MainW",
        constants_used=constants,
        rigorous=rigorous,
        branches={},
        terms={"gaussian_matching": gauss, **small_terms, **big_terms},
    )


def increments_wp_bound(
    p: float,
    r: float,
    big_t: float,
    n: int,
    triplet1: LevyTriplet,
    triplet2: LevyTriplet,
    eps: float,
    policy: ConstantPolicy,
    jump_wp: Optional[float] = None,
    e_abs_y2_p: Optional[float] = None,
) -> BoundReport:
    """W_p between the n-vectors of increments over [0, T] in the l^r metric:
    n^{1/r} times the marginal bound at the increment horizon T/n (the
    identical-marginal product coupling).  At n = 1 this is the marginal
    bound at t = T, identically."""
    if r < 1:
        raise ValueError("r must be >= 1")
    if n < 1:
        raise ValueError("n must be a positive integer")
    marg = marginal_wp_bound(
        p, big_t / n, triplet1, triplet2, eps, policy, jump_wp, e_abs_y2_p
    )
    factor = float(n) ** (1.0 / r)
    return BoundReport(
        value=factor * marg.value,
        theorem="TensorW",
        constants_used=marg.constants_used,
        rigorous=marg.rigorous,
        branches=dict(marg.branches),
        terms={k: factor * v for k, v in marg.terms.items()},
    )


# ---------------------------------------------------------------------------
# Smoothed total-variation bounds
# ---------------------------------------------------------------------------


def gauss_bv_norm(sigma: float) -> float:
    """Total-variation norm of the N(0, sigma^2) density: sqrt(2/(sigma^2 pi))."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return math.sqrt(2.0 / (sigma**2 * math.pi))


def conv_tv_from_w1(w1: float, bv_norm_g: float) -> float:
    """TV between mu*G and nu*G is at most (||g||_BV / 2) W_1(mu, nu)."""
    if w1 < 0 or bv_norm_g < 0:
        raise ValueError("inputs must be nonnegative")
    return 0.5 * bv_norm_g * w1


def gauss_deriv_l2(j: int, sigma: float) -> float:
    """L2 norm of the j-th derivative of the N(0, sigma^2) density, j in {1, 2}."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if j == 1:
        return math.sqrt(1.0 / (4.0 * math.sqrt(math.pi) * sigma**3))
    if j == 2:
        return math.sqrt(1.0 / (4.0 * math.sqrt(math.pi) * sigma**5))
    raise ValueError("closed forms shipped for j in {1, 2} only")


def gauss_fourier_l1(sigma: float) -> float:
    """int |Fg| for the N(0, sigma^2) density: sqrt(2 pi)/sigma."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    return SQRT_2PI / sigma


def ctmr_tv(j: int, t_j: float, g_deriv_l2: float, c_j: float) -> float:
    """Smoothed TV from the order-j Fourier distance:
    C_j^{1/(2j+1)} (T_j ||g^(j)||_2)^{2j/(2j+1)} with
    C_j = max of the j-th absolute moments of the smoothed laws."""
    if j < 1:
        raise ValueError("j must be a positive integer")
    if min(t_j, g_deriv_l2, c_j) < 0:
        raise ValueError("inputs must be nonnegative")
    return c_j ** (1.0 / (2 * j + 1)) * (t_j * g_deriv_l2) ** (2 * j / (2 * j + 1))


def cs_tv(
    t_k: float,
    t_r: float,
    deriv_sup_j: float,
    g_norms: dict,
    policy: ConstantPolicy,
) -> float:
    """Three-term smoothed TV bound:
    C (T_k ||g^(k)||_2 + sqrt2 T_r ||(xg)^(r)||_2 + sqrt2 sup ||g^(j)||_2);
    the numerical constant C comes from the policy (non-rigorous default)."""
    for key in ("g_k_l2", "xg_r_l2", "g_j_l2"):
        if key not in g_norms:
            raise InsufficientInputError(f"g_norms must provide {key!r}")
    return policy.cs_C * (
        t_k * g_norms["g_k_l2"]
        + math.sqrt(2.0) * t_r * g_norms["xg_r_l2"]
        + math.sqrt(2.0) * deriv_sup_j * g_norms["g_j_l2"]
    )


def n_intersect_tv(n_crossings: int, t1: float, fourier_l1_g: float) -> float:
    """Smoothed TV when the convolved densities cross at most n_crossings
    times: (n/(2 pi)) T_1 int|Fg|.  Validity of the crossing count is the
    caller's assertion."""
    if n_crossings < 0:
        raise ValueError("n_crossings must be nonnegative")
    return n_crossings / (2.0 * math.pi) * t1 * fourier_l1_g


def cpp_tv(lambda1: float, lambda2: float, jump_tv: float) -> float:
    """TV between two compound-Poisson laws:
    (l1 ^ l2) ||F1 - F2||_TV + 1 - exp(-|l1 - l2|)."""
    if lambda1 < 0 or lambda2 < 0:
        raise ValueError("intensities must be nonnegative")
    if not (0.0 <= jump_tv <= 1.0):
        raise ValueError("jump_tv must be in [0, 1]")
    return min(lambda1, lambda2) * jump_tv + 1.0 - math.exp(-abs(lambda1 - lambda2))


def small_jump_tv(t: float, sigma_smooth: float, measure: LevyMeasure, eps: float) -> float:
    """TV between the Gaussian-smoothed small-jump law and its normal
    substitute: sqrt(2/(pi t Sigma^2)) min(2 sqrt(t sigma_bar^2), eps/2)."""
    _check_eps(eps)
    if sigma_smooth <= 0:
        raise InapplicableError("smoothing requires a Gaussian component")
    if t <= 0:
        raise ValueError("t must be positive")
    sb2 = measure.sigma_bar_sq(eps)
    return math.sqrt(2.0 / (math.pi * t * sigma_smooth**2)) * min(
        2.0 * math.sqrt(t * sb2), eps / 2.0
    )


def _numeric_jump_tv(view1, view2) -> Optional[float]:
    """0.5 int |f1 - f2| for density-backed jump laws on a fine grid."""
    d1 = getattr(view1.parent, "density", None)
    d2 = getattr(view2.parent, "density", None)
    if d1 is None or d2 is None:
        return None
    eps = max(view1.epsilon, view2.epsilon)
    hi = max(getattr(view1.parent, "cutoff", 1.0), getattr(view2.parent, "cutoff", 1.0))
    if math.isinf(hi):
        hi = 1e4
    total = 0.0
    for sgn in (-1.0, 1.0):
        xs = sgn * np.linspace(eps, hi, 200001)
        diff = np.abs(d1(xs) / view1.lambda_eps - d2(xs) / view2.lambda_eps)
        total += np.trapezoid(diff, xs) * sgn
    return float(0.5 * total)


def main_tv_bound(
    t: float,
    triplet1: LevyTriplet,
    triplet2: LevyTriplet,
    eps: float,
    jump_tv: Optional[float] = None,
) -> BoundReport:
    """TV between the time-t marginals (both processes need a Gaussian
    component): Gaussian matching + two small-jump smoothing terms +
    intensity mismatch + jump-law mismatch."""
    _check_eps(eps)
    if t <= 0:
        raise ValueError("t must be positive")
    if triplet1.sigma <= 0 or triplet2.sigma <= 0:
        raise InapplicableError("the TV bound needs sigma_j > 0 on both sides")
    view1 = truncate(triplet1.nu, triplet1.b, eps)
    view2 = truncate(triplet2.nu, triplet2.b, eps)
    s_tot1 = triplet1.gaussian_std_with_small_jumps(eps)
    s_tot2 = triplet2.gaussian_std_with_small_jumps(eps)
    gauss = gauss_tv_bound(
        t * view1.b_eps, math.sqrt(t) * s_tot1, t * view2.b_eps, math.sqrt(t) * s_tot2
    )
    smooth = sum(
        small_jump_tv(t, tr.sigma, tr.nu, eps) for tr in (triplet1, triplet2)
    )
    lam1, lam2 = view1.lambda_eps, view2.lambda_eps
    intensity = t * abs(lam1 - lam2)
    lmin = min(lam1, lam2)
    law_term = 0.0
    if lmin > 0.0:
        tv_j = jump_tv
        if tv_j is None:
            tv_j = jump_law_tv(view1.jump_law, view2.jump_law)
        if tv_j is None:
            tv_j = _numeric_jump_tv(view1, view2)
        if tv_j is None:
            raise InsufficientInputError(
                "TV between the big-jump laws is not computable; pass jump_tv"
            )
        law_term = t * lmin * tv_j
    return BoundReport(
        value=gauss + smooth + intensity + law_term,
        theorem="MainTV",
        constants_used={},
        rigorous=True,
        terms={
            "gaussian_matching": gauss,
            "small_jump_smoothing": smooth,
            "intensity_mismatch": intensity,
            "jump_law_mismatch": law_term,
        },
    )


def tv_from_t1(t1: float, moment_max: float, sigma_smooth: float, t: float) -> float:
    """TV bound from a first-order Fourier distance of the reduced processes:
    moment_max^{1/3} t1^{2/3} / ((16 pi)^{1/6} Sigma sqrt(t))."""
    if min(t1, moment_max) < 0 or sigma_smooth <= 0 or t <= 0:
        raise ValueError("invalid inputs")
    return (
        moment_max ** (1.0 / 3.0)
        * t1 ** (2.0 / 3.0)
        / ((16.0 * math.pi) ** (1.0 / 6.0) * sigma_smooth * math.sqrt(t))
    )


def tv_toscani(
    t: float,
    triplet1: LevyTriplet,
    triplet2: LevyTriplet,
    sigma_smooth: float,
    t1_tilde: float,
    moment_max: float,
) -> float:
    """TV between time-t marginals through the Fourier distance of the
    Sigma-reduced processes; requires 0 < Sigma < min(sigma1, sigma2)."""
    if not (0.0 < sigma_smooth < min(triplet1.sigma, triplet2.sigma)):
        raise InapplicableError("need 0 < Sigma < min(sigma1, sigma2)")
    return tv_from_t1(t1_tilde, moment_max, sigma_smooth, t)


def _hellinger_sq_gauss(m1: float, v1: float, m2: float, v2: float) -> float:
    """Squared Hellinger distance between N(m1, v1) and N(m2, v2)."""
    if v1 == 0.0 and v2 == 0.0:
        return 0.0 if m1 == m2 else 2.0
    if v1 == 0.0 or v2 == 0.0:
        return 2.0  # a point mass is singular w.r.t. any nondegenerate Gaussian
    bc = math.sqrt(2.0 * math.sqrt(v1 * v2) / (v1 + v2)) * math.exp(
        -((m1 - m2) ** 2) / (4.0 * (v1 + v2))
    )
    return 2.0 * (1.0 - bc)


def liese_tv(
    t: float,
    triplet1: LevyTriplet,
    triplet2: LevyTriplet,
    hellinger_sq_nu: Optional[float] = None,
) -> float:
    """Hellinger-based TV bound between infinitely divisible marginals:
    2 sqrt(1 - (1 - H_gauss^2/2)^2 exp(-t H^2(nu1, nu2))), with drifts
    centered by the full compensator int_{|x|<=1} x nu(dx)."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    h2nu = hellinger_sq_nu
    if h2nu is None:
        h2nu = hellinger_sq(triplet1.nu, triplet2.nu)
    b1c = triplet1.b - triplet1.nu.mean_between(0.0, 1.0)
    b2c = triplet2.b - triplet2.nu.mean_between(0.0, 1.0)
    h2g = _hellinger_sq_gauss(
        b1c * t, triplet1.sigma**2 * t, b2c * t, triplet2.sigma**2 * t
    )
    inner = 1.0 - (1.0 - 0.5 * h2g) ** 2 * math.exp(-t * h2nu)
    return 2.0 * math.sqrt(max(inner, 0.0))


def wp_lower_from_t1(t1: float) -> BoundReport:
    """Lower bound: W_p >= T_1 / sqrt(2) for every p >= 1."""
    if t1 < 0:
        raise ValueError("t1 must be nonnegative")
    return BoundReport(
        value=t1 / math.sqrt(2.0),
        theorem="T1LowerW",
        constants_used={},
        rigorous=True,
        is_lower=True,
    )


# ---------------------------------------------------------------------------
# Catalog for the command-line front end
# ---------------------------------------------------------------------------

THEOREM_INFO = {
    "SmallJumpW": {
        "formula": "min(2 sqrt(t sb2), m3/(2 sb2)) at p=1; rio_C min(sqrt(t) sb, (m_{p+2}/sb2)^{1/p}) at p>1",
        "requires": "sigma_bar^2(eps) > 0",
        "constants": "explicit at p=1 / rio_C at p>1",
        "rigorous": "p=1 only (unless rio_C certified)",
    },
    "SmallJumpPair": {
        "formula": "sum of single small-jump bounds + t (sqrt(sb1+s1^2)-sqrt(sb2+s2^2))^2",
        "requires": "sigma_bar_j^2(eps) > 0 for j=1,2",
        "constants": "as SmallJumpW",
        "rigorous": "p=1 only",
    },
    "RandomSumW": {
        "formula": "min((c_p E N Z_p)^{1/p}, E[N^p]^{1/p} W_p) + W_p(N,N') E|Y|^p^{1/p}",
        "requires": "W_p or Z_p of the jump laws",
        "constants": "c_p (=1 at p=1)",
        "rigorous": "unless the Z_p branch is taken with p>1",
    },
    "PoissonW": {
        "formula": "|dl| at p=1; m_{(p,|dl|)}^{1/p} integer p; (|dl|+|dl|^p)^{1/p} else",
        "requires": "none",
        "constants": "none",
        "rigorous": "yes",
    },
    "MainW": {
        "formula": "Gaussian matching + small-jump terms + big-jump compound-Poisson terms",
        "requires": "eps in (0,1]",
        "constants": "explicit at p=1",
        "rigorous": "p=1 with computable jump W_p",
    },
    "TensorW": {
        "formula": "n^{1/r} x marginal bound at horizon T/n",
        "requires": "as MainW",
        "constants": "as MainW",
        "rigorous": "as MainW",
    },
    "ConvTV": {
        "formula": "(||g||_BV / 2) W_1",
        "requires": "smoothing density of bounded variation",
        "constants": "none",
        "rigorous": "yes",
    },
    "CSTV": {
        "formula": "C (T_k ||g^(k)||_2 + sqrt2 T_r ||(xg)^(r)||_2 + sqrt2 sup ||g^(j)||_2)",
        "requires": "differentiable characteristic functions",
        "constants": "cs_C (default 1.0, non-rigorous)",
        "rigorous": "no (numerical constant unspecified)",
    },
    "NIntersectTV": {
        "formula": "(N/(2 pi)) T_1 int|Fg|",
        "requires": "caller-asserted crossing count N",
        "constants": "none",
        "rigorous": "conditional on the crossing count",
    },
    "CTMRTV": {
        "formula": "C_j^{1/(2j+1)} (T_j ||g^(j)||_2)^{2j/(2j+1)}",
        "requires": "j-times weakly differentiable smoothing density",
        "constants": "none (C_j is a moment, computed)",
        "rigorous": "yes",
    },
    "SmallJumpTV": {
        "formula": "sqrt(2/(pi t Sigma^2)) min(2 sqrt(t sb2), eps/2)",
        "requires": "Sigma > 0",
        "constants": "explicit",
        "rigorous": "yes",
    },
    "MainTV": {
        "formula": "Gaussian matching + smoothing terms + t|dl| + t (l1^l2) ||F1-F2||_TV",
        "requires": "sigma_j > 0 for j=1,2",
        "constants": "explicit",
        "rigorous": "yes",
    },
    "ToscaniTV": {
        "formula": "moment_max^{1/3} T1~^{2/3} / ((16 pi)^{1/6} Sigma sqrt(t))",
        "requires": "0 < Sigma < min(sigma1, sigma2)",
        "constants": "explicit",
        "rigorous": "yes (given a certified T1~)",
    },
    "LieseTV": {
        "formula": "2 sqrt(1 - (1 - H_gauss^2/2)^2 exp(-t H^2(nu1,nu2)))",
        "requires": "finite H^2(nu1, nu2)",
        "constants": "explicit",
        "rigorous": "yes",
    },
    "GaussW2": {
        "formula": "sqrt(dm^2 + ds^2)",
        "requires": "none",
        "constants": "none",
        "rigorous": "yes (exact value)",
    },
    "GaussTV": {
        "formula": "(|dm|/sqrt(2 pi) + sqrt2 |ds|)/max(s1, s2)",
        "requires": "s1, s2 > 0",
        "constants": "explicit",
        "rigorous": "yes",
    },
    "T1LowerW": {
        "formula": "W_p >= T_1/sqrt(2)",
        "requires": "none",
        "constants": "explicit",
        "rigorous": "yes (lower bound)",
    },
}
