import math

import numpy as np
import pytest

from needlecomp import (CurvatureDimension, CurvatureError, DensityProfile,
                        DomainError, JacobianParams, Needle, ParameterError,
                        check_cd_density, density_ratio_check, jacobian,
                        laplacian_regular_part, needle_mass,
                        one_sided_log_derivative, sturm_bound_check)


def sin_profile(grid_size=1024):
    return DensityProfile(0.0, math.pi, math.sin, grid_size=grid_size)


# ------------------------------------------------------------ construction

def test_profile_requires_ordered_interval():
    with pytest.raises(ParameterError):
        DensityProfile(1.0, 0.0, lambda r: 1.0)


def test_profile_requires_positive_interior():
    with pytest.raises(ParameterError):
        DensityProfile(-1.0, 1.0, lambda r: r)  # negative on half the interval


def test_profile_samples_are_cached_evaluations():
    p = sin_profile(grid_size=64)
    grid = p.grid()
    assert len(p.samples) == 64
    for r, s in zip(grid, p.samples):
        assert s == math.sin(float(r))
    assert not p.samples.flags.writeable


def test_profile_power_chains_derivative():
    p = DensityProfile(0.0, 2.0, lambda r: (1.0 + r) ** 3,
                       deriv=lambda r: 3.0 * (1.0 + r) ** 2)
    q = p.power(1.0 / 3.0)
    assert q.fn(1.0) == pytest.approx(2.0, rel=1e-14)
    assert q.deriv(1.0) == pytest.approx(1.0, rel=1e-12)


def test_needle_requires_base_in_interval():
    with pytest.raises(ParameterError):
        Needle(DensityProfile(1.0, 2.0, lambda r: 1.0), weight=1.0)
    with pytest.raises(ParameterError):
        Needle(DensityProfile(-1.0, 1.0, lambda r: 1.0), weight=-2.0)


# ------------------------------------------------- one-sided log derivative

def test_log_derivative_of_sine_at_midpoint():
    p = sin_profile()
    assert one_sided_log_derivative(p, math.pi / 2, "plus") == pytest.approx(0.0, abs=1e-9)
    assert one_sided_log_derivative(p, math.pi / 3, "plus") == \
        pytest.approx(1.0 / math.tan(math.pi / 3), rel=1e-8)


def test_log_derivative_detects_kink():
    p = DensityProfile(-1.0, 1.0, lambda r: math.exp(abs(r)))
    assert one_sided_log_derivative(p, 0.0, "plus") == pytest.approx(1.0, abs=1e-8)
    assert one_sided_log_derivative(p, 0.0, "minus") == pytest.approx(-1.0, abs=1e-8)


def test_log_derivative_of_distortion_profile_is_mean_curvature():
    # d/dr log J at 0 equals H: the base has value 1 and slope H/(N-1) there
    for H, K, N in [(1.0, 1.0, 2.0), (-0.5, 0.0, 3.0), (2.0, -1.0, 4.5)]:
        params = JacobianParams(H, CurvatureDimension(K, N))
        p = DensityProfile(-0.2, 0.2, lambda r: jacobian(params, r))
        assert one_sided_log_derivative(p, 0.0, "plus") == pytest.approx(H, abs=1e-6)


def test_log_derivative_prefers_registered_derivative():
    p = DensityProfile(0.0, 1.0, lambda r: 1.0 + r, deriv=lambda r: 1.0)
    assert one_sided_log_derivative(p, 0.5, "plus") == 1.0 / 1.5
    assert one_sided_log_derivative(p, 0.5, "minus") == 1.0 / 1.5


def test_log_derivative_domain_errors():
    p = sin_profile()
    with pytest.raises(DomainError):
        one_sided_log_derivative(p, math.pi, "plus")
    with pytest.raises(DomainError):
        one_sided_log_derivative(p, 0.0, "minus")
    with pytest.raises(ParameterError):
        one_sided_log_derivative(p, 0.5, "up")


def test_log_derivative_diverges_at_vanishing_endpoint():
    p = sin_profile()
    assert one_sided_log_derivative(p, 0.0, "plus") == math.inf
    q = DensityProfile(0.0, 1.0, lambda r: 1.0 - r)  # exact zero at the right end
    assert one_sided_log_derivative(q, 1.0, "minus") == -math.inf


def test_one_sided_derivatives_ordered_at_concave_kink():
    p = DensityProfile(-1.0, 1.0, lambda r: math.exp(-abs(r)))
    d_plus = one_sided_log_derivative(p, 0.0, "plus")
    d_minus = one_sided_log_derivative(p, 0.0, "minus")
    assert d_plus <= d_minus
    assert d_plus == pytest.approx(-1.0, abs=1e-8)
    assert d_minus == pytest.approx(1.0, abs=1e-8)


# --------------------------------------------------------- density checks

def test_cd_density_equality_case():
    for N in (2.0, 3.0, 4.5):
        p = DensityProfile(0.0, math.pi, lambda r: max(math.sin(r), 0.0) ** (N - 1.0))
        report = check_cd_density(p, CurvatureDimension(N - 1.0, N), grid_size=16)
        assert report.passed
        assert abs(report.worst_violation) < 1e-9


def test_cd_density_constant_flat_passes():
    p = DensityProfile(0.0, 1.0, lambda r: 1.0)
    assert check_cd_density(p, CurvatureDimension(0.0, 2.0), grid_size=12).passed


def test_cd_density_constant_positive_curvature_fails():
    p = DensityProfile(0.0, math.pi / 2, lambda r: 1.0)
    report = check_cd_density(p, CurvatureDimension(1.0, 2.0), grid_size=12)
    assert not report.passed
    assert report.worst_violation > 1e-3
    r0, r1, t = report.witness
    assert 0.0 < r0 < r1 < math.pi / 2 and 0.0 < t < 1.0


def test_cd_density_rejects_tiny_grid():
    p = sin_profile()
    with pytest.raises(ParameterError):
        check_cd_density(p, CurvatureDimension(1.0, 2.0), grid_size=2)


def test_sturm_bound_sine_is_tight():
    report = sturm_bound_check(sin_profile(), 1.0, math.pi / 4, grid_size=30)
    assert report.passed
    assert abs(report.max_excess) < 1e-8


def test_sturm_bound_affine_is_tight():
    p = DensityProfile(0.0, 1.0, lambda r: 1.0 - r / 2.0, deriv=lambda r: -0.5)
    report = sturm_bound_check(p, 0.0, 0.25, grid_size=20)
    assert report.passed
    assert abs(report.max_excess) < 1e-12

    q = DensityProfile(-0.5, 3.0, lambda r: 1.0 + r, deriv=lambda r: 1.0)
    report = sturm_bound_check(q, 0.0, 0.0 + 1e-9, grid_size=20)
    assert report.passed


def test_sturm_bound_domain_error():
    with pytest.raises(DomainError):
        sturm_bound_check(sin_profile(), 1.0, -0.5)


# ------------------------------------------------------ density ratio bound

def test_ratio_bound_spherical_needle_is_equality():
    r0 = math.pi / 3
    p = DensityProfile(-r0, math.pi - r0, lambda r: math.sin(r0 + r),
                       deriv=lambda r: math.cos(r0 + r))
    report = density_ratio_check(Needle(p, 1.0), CurvatureDimension(1.0, 2.0))
    assert report.passed
    assert abs(report.max_excess) < 1e-8
    assert report.H_used == pytest.approx(1.0 / math.tan(r0), rel=1e-12)


def test_ratio_bound_constant_needle():
    p = DensityProfile(-1.0, 1.0, lambda r: 1.0, deriv=lambda r: 0.0)
    report = density_ratio_check(Needle(p, 1.0), CurvatureDimension(0.0, 3.0))
    assert report.passed
    assert abs(report.max_excess) < 1e-12


def test_ratio_bound_flat_power_needle_is_equality():
    # (1 + r)^2 about base 1 equals J_{2,0,3} exactly
    p = DensityProfile(-1.0, 1.5, lambda r: (1.0 + r) ** 2,
                       deriv=lambda r: 2.0 * (1.0 + r))
    report = density_ratio_check(Needle(p, 1.0), CurvatureDimension(0.0, 3.0))
    assert report.passed
    assert abs(report.max_excess) < 1e-10
    assert report.H_used == pytest.approx(2.0, rel=1e-12)


def test_ratio_bound_infinite_base_curvature_raises():
    p = DensityProfile(-0.5, 0.5,
                       lambda r: 1.0 - 0.9 * math.sqrt(max(r, 0.0)),
                       deriv=lambda r: -math.inf if r == 0.0
                       else (-0.45 / math.sqrt(r) if r > 0.0 else 0.0))
    with pytest.raises(CurvatureError):
        density_ratio_check(Needle(p, 1.0), CurvatureDimension(0.0, 2.0))


def test_ratio_bound_needs_interior_base():
    p = DensityProfile(0.0, 1.0, lambda r: 1.0)
    with pytest.raises(DomainError):
        density_ratio_check(Needle(p, 1.0), CurvatureDimension(0.0, 2.0))


# ------------------------------------------------------- masses, laplacian

def test_needle_mass_closed_forms():
    p = sin_profile()
    assert needle_mass(Needle(p, 1.0)) == pytest.approx(2.0, rel=1e-10)
    q = DensityProfile(0.0, 1.0, lambda r: 1.0)
    assert needle_mass(Needle(q, 3.0)) == pytest.approx(3.0, rel=1e-12)
    m = DensityProfile(0.0, 1.0, lambda r: r * r)
    assert needle_mass(Needle(m, 1.0)) == pytest.approx(1.0 / 3.0, rel=1e-10)


def test_needle_mass_invariant_under_grid_refinement():
    coarse = Needle(sin_profile(grid_size=128), 1.0)
    fine = Needle(sin_profile(grid_size=4096), 1.0)
    assert needle_mass(coarse) == pytest.approx(needle_mass(fine), rel=1e-12)


def test_laplacian_regular_part_radial_flat():
    n, rho = 4, 0.7
    p = DensityProfile(-rho, 1.0, lambda r: (rho + r) ** (n - 1),
                       deriv=lambda r: (n - 1) * (rho + r) ** (n - 2))
    needle = Needle(p, 1.0)
    for r in np.linspace(-0.5, 0.9, 8):
        assert laplacian_regular_part(needle, float(r)) == \
            pytest.approx(-(n - 1) / (rho + float(r)), rel=1e-12)


def test_laplacian_regular_part_examples():
    const = Needle(DensityProfile(-1.0, 1.0, lambda r: 1.0, deriv=lambda r: 0.0), 1.0)
    assert laplacian_regular_part(const, 0.3) == 0.0

    r0 = 1.1
    p = DensityProfile(-r0, math.pi - r0, lambda r: math.sin(r0 + r),
                       deriv=lambda r: math.cos(r0 + r))
    assert laplacian_regular_part(Needle(p, 1.0), 0.0) == \
        pytest.approx(-1.0 / math.tan(r0), rel=1e-12)
    with pytest.raises(DomainError):
        laplacian_regular_part(Needle(p, 1.0), math.pi)
