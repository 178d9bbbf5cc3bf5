"""Calculus on single needle densities.

A needle carries a positive one-dimensional density on an interval with the
surface crossing at parameter 0.  This module provides one-sided logarithmic
derivatives, the curvature-dimension density check, the mollified comparison
bound, the density-ratio bound against the distortion profile, masses and the
regular part of the signed-distance Laplacian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import CurvatureError, DomainError, ParameterError
from .model1d import CurvatureDimension, JacobianParams, cos_kappa, jacobian, sigma_kappa, sin_kappa
from .numerics import INEQ_SLACK, integrate, one_sided_derivative

# Finite-difference defaults for one-sided derivatives.
FD_BASE_STEP_FRACTION = 1e-3
FD_LEVELS = 8
FD_DIVERGE_THRESHOLD = 1e8

_TINY = 1e-300


@dataclass(frozen=True)
class DensityProfile:
    """Positive density on [a, b], as a callable plus a cached uniform grid.

    fn must be positive on the open interval and extend continuously to the
    closed one (the endpoint values may vanish).  deriv, when given, is the
    closed-form derivative of fn and is preferred over finite differences.
    """

    a: float
    b: float
    fn: Callable[[float], float]
    deriv: Optional[Callable[[float], float]] = None
    grid_size: int = 1024
    samples: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise ParameterError(f"invalid interval [{self.a}, {self.b}]")
        if self.grid_size < 2:
            raise ParameterError(f"grid_size must be >= 2, got {self.grid_size}")
        grid = np.linspace(self.a, self.b, self.grid_size)
        samples = np.array([self.fn(float(r)) for r in grid])
        interior = samples[1:-1]
        if not (np.isfinite(samples).all() and (interior > 0.0).all()
                and samples[0] >= 0.0 and samples[-1] >= 0.0):
            raise ParameterError("density must be positive on the open interval "
                                 "and finite, non-negative at the endpoints")
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def __call__(self, r: float) -> float:
        return self.fn(r)

    def grid(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.grid_size)

    def power(self, exponent: float) -> "DensityProfile":
        """The profile raised pointwise to a positive power, derivative chained."""
        fn = self.fn
        deriv = self.deriv
        new_deriv = None
        if deriv is not None:
            new_deriv = lambda r: exponent * fn(r) ** (exponent - 1.0) * deriv(r)
        return DensityProfile(self.a, self.b, lambda r: fn(r) ** exponent,
                              deriv=new_deriv, grid_size=self.grid_size)


@dataclass(frozen=True)
class Needle:
    """A density profile with base point 0 plus the quotient weight it carries."""

    profile: DensityProfile
    weight: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.weight) and self.weight >= 0.0):
            raise ParameterError(f"needle weight must be finite and >= 0, got {self.weight}")
        if not self.profile.a <= 0.0 <= self.profile.b:
            raise ParameterError(
                f"needle base 0 must lie in [{self.profile.a}, {self.profile.b}]")


@dataclass(frozen=True)
class CdDensityReport:
    passed: bool
    worst_violation: float
    witness: Optional[tuple[float, float, float]]


@dataclass(frozen=True)
class SturmReport:
    passed: bool
    max_excess: float


@dataclass(frozen=True)
class RatioReport:
    passed: bool
    H_used: float
    max_excess: float


def one_sided_log_derivative(profile: DensityProfile, r: float, side: str) -> float:
    """d^+/dr or d^-/dr of log(profile) at r.

    Uses the registered closed-form derivative when available, otherwise
    one-sided difference quotients with Richardson extrapolation.  Returns
    +-inf when the quotients diverge (vanishing density at the base point).
    """
    if side not in ("plus", "minus"):
        raise ParameterError(f"side must be 'plus' or 'minus', got {side!r}")
    a, b = profile.a, profile.b
    if side == "plus" and not a <= r < b:
        raise DomainError(f"r={r} outside [{a}, {b}) for a right derivative")
    if side == "minus" and not a < r <= b:
        raise DomainError(f"r={r} outside ({a}, {b}] for a left derivative")

    if profile.deriv is not None:
        value = profile.fn(r)
        slope = profile.deriv(r)
        if value > 0.0 and math.isfinite(slope):
            return slope / value
        if value == 0.0 or math.isinf(slope):
            sign_src = slope if slope != 0.0 else (1.0 if side == "plus" else -1.0)
            return math.copysign(math.inf, sign_src)

    room = (b - r) if side == "plus" else (r - a)
    base_step = min(FD_BASE_STEP_FRACTION * (b - a), 0.5 * room)
    log_fn = lambda x: math.log(profile.fn(x)) if profile.fn(x) > 0.0 else -math.inf
    return one_sided_derivative(log_fn, r, side, base_step,
                                levels=FD_LEVELS, diverge_threshold=FD_DIVERGE_THRESHOLD)


def check_cd_density(profile: DensityProfile, cd: CurvatureDimension,
                     grid_size: int = 24) -> CdDensityReport:
    """Brute-force check that profile^{1/(N-1)} satisfies the curvature-dimension
    concavity inequality at level K/(N-1) over all grid triples (r0, r1, t).

    Violations are measured relative to the left side; the check passes when
    the worst one does not exceed the inequality slack.
    """
    if grid_size < 3:
        raise ParameterError(f"grid_size must be >= 3, got {grid_size}")
    if cd.N <= 1.0:
        raise ParameterError(f"density check requires N > 1, got N={cd.N}")
    kap = cd.K / (cd.N - 1.0)
    expo = 1.0 / (cd.N - 1.0)
    a, b = profile.a, profile.b
    rs = [a + (b - a) * (i + 1.0) / (grid_size + 1.0) for i in range(grid_size)]
    ts = [(j + 1.0) / (grid_size + 1.0) for j in range(grid_size)]

    u = lambda r: profile.fn(r) ** expo
    worst = -math.inf
    witness = None
    for i in range(len(rs)):
        r0 = rs[i]
        u0 = u(r0)
        for j in range(i + 1, len(rs)):
            r1 = rs[j]
            u1 = u(r1)
            theta = r1 - r0
            for t in ts:
                s_lo = sigma_kappa(kap, 1.0 - t, theta)
                s_hi = sigma_kappa(kap, t, theta)
                lhs = u(r0 + t * theta)
                if math.isinf(s_lo) or math.isinf(s_hi):
                    rhs = math.inf
                else:
                    rhs = s_lo * u0 + s_hi * u1
                violation = (rhs - lhs) / max(abs(lhs), _TINY)
                if violation > worst:
                    worst = violation
                    witness = (r0, r1, t)
    return CdDensityReport(passed=worst <= INEQ_SLACK, worst_violation=worst,
                           witness=witness)


def sturm_bound_check(u: DensityProfile, kappa: float, r0: float,
                      grid_size: int = 40) -> SturmReport:
    """Verify the comparison bound
    u(r) <= u(r0) cos_kappa(r - r0) + d^+u(r0) sin_kappa(r - r0) on (r0, b),
    together with positivity of the right-hand side there.
    """
    if not u.a < r0 < u.b:
        raise DomainError(f"base point r0={r0} outside ({u.a}, {u.b})")
    u0 = u.fn(r0)
    du0 = u0 * one_sided_log_derivative(u, r0, "plus")
    max_excess = -math.inf
    passed = True
    for i in range(grid_size):
        r = r0 + (u.b - r0) * (i + 1.0) / (grid_size + 1.0)
        bound = u0 * cos_kappa(kappa, r - r0) + du0 * sin_kappa(kappa, r - r0)
        if bound <= 0.0:
            passed = False
        excess = (u.fn(r) - bound) / max(abs(bound), _TINY)
        max_excess = max(max_excess, excess)
    if max_excess > INEQ_SLACK:
        passed = False
    return SturmReport(passed=passed, max_excess=max_excess)


def density_ratio_check(needle: Needle, cd: CurvatureDimension,
                        grid_size: int = 60) -> RatioReport:
    """Verify h(r)/h(0) <= J_{H,K,N}(r) with H = d^+ log h(0) on (0, b), and the
    orientation-reversed bound with H = -d^- log h(0) on (a, 0)."""
    profile = needle.profile
    if not profile.a < 0.0 < profile.b:
        raise DomainError("needle base must lie in the open interval")
    h0 = profile.fn(0.0)
    max_excess = -math.inf

    def side_excess(h_side: Callable[[float], float], extent: float, H: float) -> float:
        if math.isinf(H):
            raise CurvatureError("one-sided log derivative at the base is infinite")
        params = JacobianParams(H, cd)
        worst = -math.inf
        for i in range(grid_size):
            r = extent * (i + 1.0) / (grid_size + 1.0)
            ratio = h_side(r) / h0
            bound = jacobian(params, r)
            if bound <= 0.0:
                worst = max(worst, math.inf if ratio > INEQ_SLACK else 0.0)
            else:
                worst = max(worst, (ratio - bound) / bound)
        return worst

    H_plus = one_sided_log_derivative(profile, 0.0, "plus")
    max_excess = max(max_excess, side_excess(profile.fn, profile.b, H_plus))
    H_reflected = -one_sided_log_derivative(profile, 0.0, "minus")
    max_excess = max(max_excess,
                     side_excess(lambda r: profile.fn(-r), -profile.a, H_reflected))
    return RatioReport(passed=max_excess <= INEQ_SLACK, H_used=H_plus,
                       max_excess=max_excess)


def needle_mass(needle: Needle) -> float:
    """weight times the integral of the density over its interval."""
    return needle.weight * integrate(needle.profile.fn, needle.profile.a, needle.profile.b)


def laplacian_regular_part(needle: Needle, r: float, side: str = "plus") -> float:
    """-(log h)'(r): density of the regular part of the signed-distance
    Laplacian along this needle.  Uses the right derivative by default."""
    profile = needle.profile
    if not profile.a < r < profile.b:
        raise DomainError(f"r={r} outside ({profile.a}, {profile.b})")
    return -one_sided_log_derivative(profile, r, side)
