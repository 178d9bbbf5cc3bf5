"""Model-space special functions.

Generalized trigonometric functions, distortion coefficients, the volume
distortion profile J_{H,K,N} with its support, and the model isoperimetric
profile of the positively curved one-dimensional model space.

Conventions: K is the Ricci curvature lower bound, N the dimension upper
bound, H the (outer) mean curvature at the surface crossing.  Infinite values
are represented by math.inf; the convention 0 * inf = 0 is applied where the
coefficient definitions require it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ParameterError
from .numerics import bisect_increasing, integrate


@dataclass(frozen=True)
class CurvatureDimension:
    """Curvature bound K (units 1/length^2) and dimension bound N (>= 1)."""

    K: float
    N: float

    def __post_init__(self):
        if not math.isfinite(self.K):
            raise ParameterError(f"curvature bound K must be finite, got {self.K}")
        if not (math.isfinite(self.N) and self.N >= 1.0):
            raise ParameterError(f"dimension bound N must be finite and >= 1, got {self.N}")


@dataclass(frozen=True)
class JacobianParams:
    """Mean curvature H together with the ambient (K, N)."""

    H: float
    cd: CurvatureDimension

    def __post_init__(self):
        if not math.isfinite(self.H):
            raise ParameterError(f"mean curvature H must be finite, got {self.H}")

    @property
    def K(self) -> float:
        return self.cd.K

    @property
    def N(self) -> float:
        return self.cd.N


def trig_kappa(kappa: float, r: float) -> tuple[float, float]:
    """(sin_kappa(r), cos_kappa(r)): the v(0)=0, v'(0)=1 and v(0)=1, v'(0)=0
    solutions of v'' + kappa v = 0, as closed forms on all of R.

    They satisfy cos_kappa^2 + kappa * sin_kappa^2 = 1.
    """
    if kappa > 0.0:
        rt = math.sqrt(kappa)
        return math.sin(rt * r) / rt, math.cos(rt * r)
    if kappa < 0.0:
        rt = math.sqrt(-kappa)
        return math.sinh(rt * r) / rt, math.cosh(rt * r)
    return r, 1.0


def sin_kappa(kappa: float, r: float) -> float:
    return trig_kappa(kappa, r)[0]


def cos_kappa(kappa: float, r: float) -> float:
    return trig_kappa(kappa, r)[1]


def pi_kappa(kappa: float) -> float:
    """Diameter of the simply connected space form of curvature kappa."""
    if kappa <= 0.0:
        return math.inf
    return math.pi / math.sqrt(kappa)


def sigma_kappa(kappa: float, t: float, theta: float) -> float:
    """Distortion coefficient at curvature level kappa:
    sin_kappa(t * theta) / sin_kappa(theta) for theta in [0, pi_kappa), else inf.

    sigma(t, 0) = t by the limit convention; for kappa = 0 the ratio is t exactly.
    """
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"interpolation parameter t must lie in [0, 1], got {t}")
    if theta < 0.0:
        raise ParameterError(f"separation theta must be >= 0, got {theta}")
    if theta == 0.0 or kappa == 0.0:
        return t
    if theta >= pi_kappa(kappa):
        return math.inf
    return sin_kappa(kappa, t * theta) / sin_kappa(kappa, theta)


def sigma(cd: CurvatureDimension, t: float, theta: float) -> float:
    """Distortion coefficient sigma_{K,N}^{(t)}(theta), curvature level K/N."""
    return sigma_kappa(cd.K / cd.N, t, theta)


def tau(cd: CurvatureDimension, t: float, theta: float) -> float:
    """Modified distortion coefficient tau_{K,N}^{(t)}(theta).

    Equals theta * inf when K > 0 and N = 1 (with 0 * inf = 0), and
    t^{1/N} * sigma_{K,N-1}^{(t)}(theta)^{1 - 1/N} otherwise.
    """
    if not 0.0 <= t <= 1.0:
        raise ParameterError(f"interpolation parameter t must lie in [0, 1], got {t}")
    if theta < 0.0:
        raise ParameterError(f"separation theta must be >= 0, got {theta}")
    K, N = cd.K, cd.N
    if N == 1.0:
        if K > 0.0:
            return 0.0 if theta == 0.0 else math.inf
        return t  # the sigma factor carries exponent 0
    if theta == 0.0 or K == 0.0:
        return t
    s = sigma_kappa(K / (N - 1.0), t, theta)
    if math.isinf(s):
        return 0.0 if t == 0.0 else math.inf
    return t ** (1.0 / N) * s ** (1.0 - 1.0 / N)


def _radial_kappa(p: JacobianParams) -> float:
    if p.N <= 1.0:
        raise ParameterError(f"the distortion profile requires N > 1, got N={p.N}")
    return p.K / (p.N - 1.0)


def _jacobian_base(p: JacobianParams, r: float) -> float:
    """cos_{K/(N-1)}(r) + H/(N-1) * sin_{K/(N-1)}(r), the (N-1)-th root of J."""
    sn, cs = trig_kappa(_radial_kappa(p), r)
    return cs + p.H / (p.N - 1.0) * sn


def jacobian(p: JacobianParams, r: float) -> float:
    """Volume distortion profile J_{H,K,N}(r), the positive part of the base
    raised to the power N-1.  J(0) = 1; J is non-negative everywhere.
    """
    base = _jacobian_base(p, r)
    if base <= 0.0:
        return 0.0
    return base ** (p.N - 1.0)


def jacobian_support(p: JacobianParams) -> tuple[float, float]:
    """Maximal interval around 0 on which the base of J_{H,K,N} is positive."""
    kap = _radial_kappa(p)
    lam = p.H / (p.N - 1.0)
    if kap > 0.0:
        rt = math.sqrt(kap)
        phase = math.atan2(lam / rt, 1.0)
        return (phase - 0.5 * math.pi) / rt, (phase + 0.5 * math.pi) / rt
    if kap == 0.0:
        if lam == 0.0:
            return -math.inf, math.inf
        zero = -1.0 / lam
        return (zero, math.inf) if lam > 0.0 else (-math.inf, zero)
    rt = math.sqrt(-kap)
    c = lam / rt
    if abs(c) <= 1.0:
        return -math.inf, math.inf
    zero = math.atanh(-1.0 / c) / rt
    return (zero, math.inf) if c > 0.0 else (-math.inf, zero)


def kappa_eff(p: JacobianParams) -> float:
    """K/(N-1) + (H/(N-1))^2, the conserved energy of the base of J."""
    lam = p.H / (p.cd.N - 1.0)
    return p.cd.K / (p.cd.N - 1.0) + lam * lam


def _require_positive_curvature(cd: CurvatureDimension) -> float:
    if cd.K <= 0.0:
        raise ParameterError(f"positive curvature bound required, got K={cd.K}")
    if cd.N <= 1.0:
        raise ParameterError(f"dimension bound N > 1 required, got N={cd.N}")
    return cd.K / (cd.N - 1.0)


def model_density_normalizer(cd: CurvatureDimension) -> float:
    """Total mass of sin_{K/(N-1)}^{N-1} over [0, pi_{K/(N-1)}] (K > 0)."""
    kap = _require_positive_curvature(cd)
    top = pi_kappa(kap)
    expo = cd.N - 1.0
    return integrate(lambda r: max(sin_kappa(kap, r), 0.0) ** expo, 0.0, top)


def model_profile(cd: CurvatureDimension, v: float) -> float:
    """Isoperimetric profile of the 1D model space with density
    sin_{K/(N-1)}^{N-1} on [0, pi_{K/(N-1)}], evaluated at volume fraction v.

    Computed as f' composed with f^{-1} where f is the normalized cumulative
    mass; f^{-1} is found by bisection (f' vanishes at the endpoints, so
    derivative-based root finding is avoided).  Concave in v, symmetric about
    v = 1/2 and zero at v in {0, 1}.
    """
    kap = _require_positive_curvature(cd)
    if not 0.0 <= v <= 1.0:
        raise ParameterError(f"volume fraction v must lie in [0, 1], got {v}")
    if v == 0.0 or v == 1.0:
        return 0.0
    top = pi_kappa(kap)
    expo = cd.N - 1.0
    density = lambda r: max(sin_kappa(kap, r), 0.0) ** expo
    c = integrate(density, 0.0, top)
    cumulative = lambda t: integrate(density, 0.0, t) / c
    t = bisect_increasing(cumulative, 0.0, top, v, bracket_width=1e-12)
    return density(t) / c


def model_rhs_constant_H(p: JacobianParams) -> float:
    """kappa_eff^{(N-1)/2} times the model density normalizer (K > 0).

    Equals the integral of J_{H,K,N} over its full support: the base solves
    the same oscillator as sqrt(kappa_eff) * sin_{K/(N-1)} up to translation.
    """
    _require_positive_curvature(p.cd)
    kap_eff = kappa_eff(p)
    return kap_eff ** (0.5 * (p.cd.N - 1.0)) * model_density_normalizer(p.cd)


def unit_sphere_volume(dim: int) -> float:
    """Riemannian volume of the round unit sphere of the given dimension."""
    if dim < 0:
        raise ParameterError(f"sphere dimension must be >= 0, got {dim}")
    return 2.0 * math.pi ** (0.5 * (dim + 1)) / math.gamma(0.5 * (dim + 1))
