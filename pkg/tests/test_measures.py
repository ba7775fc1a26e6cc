"""Truncated-moment closed forms, quadrature cross-checks and jump laws."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from levybounds.measures import (
    DensityBased,
    FiniteDiscrete,
    IntegrabilityError,
    LevyTriplet,
    PowerTailJumpLaw,
    StablePower,
    TwoPoint,
    ZeroMeasure,
    _cos_m1,
    _CosIntegralTable,
    _sin_my,
    hellinger_sq,
    jump_law_tv,
    jump_law_wp,
    truncate,
)

REL = 1e-8


def density_twin(measure: StablePower) -> DensityBased:
    """Quadrature-backed copy of a finite-cutoff power measure."""
    c, a, cut = measure.c, measure.alpha, measure.cutoff
    if measure.side == "positive":
        return DensityBased(
            lambda x: np.where(x > 0, c * np.abs(x) ** (-1.0 - a), 0.0), cut
        )
    return DensityBased(lambda x: c * np.abs(x) ** (-1.0 - a), cut)


# ---------------------------------------------------------------------------
# TwoPoint closed forms
# ---------------------------------------------------------------------------


def test_twopoint_canonical_moments():
    nu = TwoPoint(0.1)
    assert nu.sigma_bar_sq(0.1) == pytest.approx(1.0, rel=1e-15)
    assert nu.abs_moment_inside(3.0, 0.1) == pytest.approx(0.1, rel=1e-15)
    assert nu.mass_outside(0.1) == 0.0
    assert nu.mass_outside(0.05) == pytest.approx(1.0 / 0.01, rel=1e-15)
    assert nu.mean_between(0.0, 1.0) == 0.0


def test_twopoint_char_integral_matches_generic_atoms():
    nu = TwoPoint(0.1, scale=0.5)
    generic = FiniteDiscrete([(-0.1, 25.0), (0.1, 25.0)])
    u = np.linspace(-40.0, 40.0, 401)
    got = nu.char_integral_between(u, 0.0, 1.0)
    ref = generic.char_integral_between(u, 0.0, 1.0)
    assert np.max(np.abs(got - ref)) < 1e-12


def test_twopoint_jump_law_is_symmetric_pair():
    law = TwoPoint(0.2).jump_law(0.1)
    assert law.mean() == 0.0
    assert law.abs_moment(2.0) == pytest.approx(0.04, rel=1e-15)
    q = np.array([0.1, 0.4, 0.6, 0.9])
    assert np.allclose(law.ppf(q), [-0.2, -0.2, 0.2, 0.2])


# ---------------------------------------------------------------------------
# StablePower vs quadrature
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("side", ["symmetric", "positive"])
def test_stable_moments_match_quadrature(alpha, side):
    nu = StablePower(0.3, alpha, cutoff=1.0, side=side)
    twin = density_twin(nu)
    for eps in (0.05, 0.3, 1.0):
        assert nu.sigma_bar_sq(eps) == pytest.approx(
            twin.sigma_bar_sq(eps), rel=REL
        )
        assert nu.mass_outside(eps) == pytest.approx(
            twin.mass_outside(eps), rel=REL, abs=1e-14
        )
        assert nu.abs_moment_inside(3.0, eps) == pytest.approx(
            twin.abs_moment_inside(3.0, eps), rel=REL
        )
        if eps < 1.0:
            assert nu.abs_moment_outside(1.0, eps) == pytest.approx(
                twin.abs_moment_outside(1.0, eps), rel=REL
            )


def test_stable_mass_outside_known_values():
    assert StablePower(1.0, 1.0, cutoff=1.0).mass_outside(0.5) == pytest.approx(2.0)
    assert StablePower(1.0, 1.0, cutoff=math.inf).mass_outside(0.5) == pytest.approx(4.0)


def test_stable_one_sided_mean_between():
    nu = StablePower(0.3, 0.5, cutoff=1.0, side="positive")
    ref = quad(lambda x: x * 0.3 * x**-1.5, 0.1, 0.7)[0]
    assert nu.mean_between(0.1, 0.7) == pytest.approx(ref, rel=REL)
    # integrable down to zero only for alpha < 1
    assert nu.mean_between(0.0, 1.0) == pytest.approx(
        quad(lambda x: 0.3 * x**-0.5, 0.0, 1.0)[0], rel=REL
    )
    with pytest.raises(IntegrabilityError):
        StablePower(0.3, 1.5, cutoff=1.0, side="positive").mean_between(0.0, 1.0)


def test_stable_symmetric_mean_between_is_zero():
    assert StablePower(0.3, 0.5).mean_between(0.0, 1.0) == 0.0


def test_one_sided_needs_finite_cutoff():
    with pytest.raises(IntegrabilityError):
        StablePower(1.0, 0.5, cutoff=math.inf, side="positive")


# ---------------------------------------------------------------------------
# Characteristic integrals
# ---------------------------------------------------------------------------


def piecewise_ref(alpha, kernel, series, z):
    """Series below z0, adaptive quadrature panels above."""
    z0 = 1e-6
    if z <= z0:
        return series(z)
    pieces = np.unique(
        np.concatenate(
            [np.geomspace(z0, min(z, 1.0), 30), np.arange(1.0, z, math.pi), [z]]
        )
    )
    pieces = pieces[(pieces >= z0) & (pieces <= z)]
    total = series(z0)
    for a, b in zip(pieces[:-1], pieces[1:]):
        total += quad(
            lambda y: float(kernel(np.array(y))) * y ** (-1.0 - alpha),
            a, b, limit=200,
        )[0]
    return total


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 1.9])
def test_cos_integral_table_accuracy(alpha):
    tab = _CosIntegralTable(alpha)

    def ser_g(z):
        return -(z ** (2 - alpha)) / (2 * (2 - alpha)) + (z ** (4 - alpha)) / (
            24 * (4 - alpha)
        )

    def ser_h(z):
        return -(z ** (3 - alpha)) / (6 * (3 - alpha)) + (z ** (5 - alpha)) / (
            120 * (5 - alpha)
        )

    for z in (1e-9, 1e-4, 0.7, 3.3, 47.0, 912.0):
        ref_g = piecewise_ref(alpha, _cos_m1, ser_g, z)
        ref_h = piecewise_ref(alpha, _sin_my, ser_h, z)
        assert float(tab(z)) == pytest.approx(ref_g, rel=1e-10)
        assert float(tab.sin_part(z)) == pytest.approx(ref_h, rel=1e-10)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5])
@pytest.mark.parametrize("side", ["symmetric", "positive"])
def test_stable_char_integral_matches_quadrature(alpha, side):
    nu = StablePower(0.2, alpha, cutoff=0.5, side=side)
    u = np.array([-20.0, 0.7, 5.0, 60.0])
    got = nu.char_integral_between(u, 0.0, math.inf)
    for ui, gi in zip(u, got):
        re = quad(
            lambda x: (math.cos(ui * x) - 1.0) * 0.2 * x ** (-1.0 - alpha),
            1e-12, 0.5, limit=400,
        )[0] * (2.0 if side == "symmetric" else 1.0)
        im = 0.0
        if side == "positive":
            im = quad(
                lambda x: (math.sin(ui * x) - ui * x) * 0.2 * x ** (-1.0 - alpha),
                1e-12, 0.5, limit=400,
            )[0]
        assert abs(gi - complex(re, im)) < 1e-6 * max(abs(complex(re, im)), 1e-3)


def test_stable_infinite_cutoff_char_integral_closed_form():
    # full symmetric tail: c |u|^alpha integral over (0, inf)
    alpha, c = 0.7, 0.4
    nu = StablePower(c, alpha, cutoff=math.inf)
    u = np.array([3.0])
    got = complex(nu.char_integral_between(u, 0.0, math.inf)[0])

    def ser_g(z):
        return -(z ** (2 - alpha)) / (2 * (2 - alpha)) + (z ** (4 - alpha)) / (
            24 * (4 - alpha)
        )

    big = 1e4  # remainder beyond: -Z^-a/a plus oscillation O(Z^{-1-a})
    g_inf = piecewise_ref(alpha, _cos_m1, ser_g, big) - big ** (-alpha) / alpha
    assert got == pytest.approx(2.0 * c * 3.0**alpha * g_inf, rel=1e-5)


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------

MEASURES = [
    TwoPoint(0.1),
    FiniteDiscrete([(-0.3, 1.0), (0.2, 2.0), (0.8, 0.5)]),
    StablePower(0.3, 0.5),
    StablePower(0.3, 1.5),
    StablePower(0.3, 0.5, cutoff=0.25, side="positive"),
]


@pytest.mark.parametrize("nu", MEASURES, ids=repr)
def test_truncated_moment_monotonicity(nu):
    grid = [0.01, 0.05, 0.2, 0.6, 1.0]
    sb = [nu.sigma_bar_sq(e) for e in grid]
    lam = [nu.mass_outside(e) for e in grid]
    assert all(a <= b + 1e-15 for a, b in zip(sb, sb[1:]))
    assert all(a >= b - 1e-15 for a, b in zip(lam, lam[1:]))


@pytest.mark.parametrize("nu", MEASURES, ids=repr)
def test_second_moment_split_consistency(nu):
    assert nu.abs_moment_inside(2.0, 1.0) == pytest.approx(
        nu.sigma_bar_sq(1.0), rel=1e-12
    )


@pytest.mark.parametrize("nu", MEASURES, ids=repr)
@pytest.mark.parametrize("p", [1.0, 1.5, 2.0])
def test_holder_moment_bound(nu, p):
    # |x|^{p+2} <= eps^p x^2 inside |x| <= eps
    for eps in (0.05, 0.2, 1.0):
        assert nu.abs_moment_inside(p + 2.0, eps) <= eps**p * nu.sigma_bar_sq(
            eps
        ) * (1.0 + 1e-12)


def test_triplet_validation():
    with pytest.raises(ValueError):
        LevyTriplet(0.0, -1.0, ZeroMeasure())
    tr = LevyTriplet(0.5, 1.0, FiniteDiscrete([(0.5, 2.0)]))
    assert tr.b_eps(1.0) == 0.5
    assert tr.b_eps(0.25) == pytest.approx(0.5 - 0.5 * 2.0)
    assert tr.gaussian_std_with_small_jumps(0.25) == 1.0


def test_truncate_view():
    view = truncate(FiniteDiscrete([(-0.5, 1.0), (0.05, 3.0)]), b=0.0, eps=0.1)
    assert view.lambda_eps == 1.0
    assert view.b_eps == pytest.approx(0.5)
    assert view.has_jumps
    assert view.jump_law.mean() == -0.5


# ---------------------------------------------------------------------------
# Jump laws and distances
# ---------------------------------------------------------------------------


def test_power_tail_jump_law_one_sided():
    law = PowerTailJumpLaw(0.1, 1.0, 0.5, one_sided=True)
    q = np.linspace(0.001, 0.999, 999)
    xs = law.ppf(q)
    assert np.all(xs > 0.0)
    assert np.all(np.diff(xs) > 0.0)
    assert law.mean() == pytest.approx(law.abs_moment(1.0), rel=1e-15)
    # moment against direct quadrature of the normalized density
    mass = (0.1**-0.5 - 1.0) / 0.5
    ref = quad(lambda x: x * x**-1.5 / mass, 0.1, 1.0)[0]
    assert law.abs_moment(1.0) == pytest.approx(ref, rel=1e-10)


def test_power_tail_jump_law_symmetric_ppf_is_antisymmetric():
    law = PowerTailJumpLaw(0.1, 1.0, 1.0)
    q = np.linspace(0.01, 0.49, 25)
    assert np.allclose(law.ppf(q), -law.ppf(1.0 - q))
    assert law.mean() == 0.0


def test_jump_law_wp_and_tv_discrete():
    law1 = TwoPoint(0.1).jump_law(0.05)
    law2 = TwoPoint(0.2).jump_law(0.05)
    # quantile coupling pairs -0.1 with -0.2 and 0.1 with 0.2
    assert jump_law_wp(law1, law2, 1.0) == pytest.approx(0.1, rel=1e-12)
    assert jump_law_wp(law1, law2, 2.0) == pytest.approx(0.1, rel=1e-12)
    assert jump_law_tv(law1, law2) == pytest.approx(1.0)
    assert jump_law_tv(law1, law1) == 0.0
    assert jump_law_tv(None, None) == 0.0
    assert jump_law_tv(law1, None) == 1.0


def test_hellinger_sq_discrete_exact():
    nu1 = FiniteDiscrete([(1.0, 4.0)])
    nu2 = FiniteDiscrete([(1.0, 1.0)])
    assert hellinger_sq(nu1, nu2) == pytest.approx((2.0 - 1.0) ** 2)
    assert hellinger_sq(nu1, ZeroMeasure()) == pytest.approx(4.0)
    assert hellinger_sq(ZeroMeasure(), ZeroMeasure()) == 0.0


@settings(max_examples=50, deadline=None)
@given(
    eps=st.floats(0.01, 1.0),
    x=st.floats(0.01, 2.0),
    r=st.floats(0.1, 5.0),
)
def test_finite_discrete_mass_split(eps, x, r):
    nu = FiniteDiscrete([(x, r), (-2.0 * x, 0.5 * r)])
    total = nu.mass_outside(0.0)
    assert nu.mass_outside(eps) + (total - nu.mass_outside(eps)) == pytest.approx(
        total
    )
    assert nu.sigma_bar_sq(eps) + nu.abs_moment_outside(2.0, eps) == pytest.approx(
        nu.abs_moment_inside(2.0, 10.0 * x), rel=1e-12
    )
