"""Marginal laws of symmetric VG and NIG returns and their change-of-numeraire tilts.

Five laws are provided, all with the same surface (``pdf``, ``cdf``, ``sf``,
``char_fn``, ``moments``, ``sample``, ``at_time``, ``affine``):

======================  ==============================================
``Normal``              ``N(mu, sigma2)``
``SymmetricBessel``     symmetric VG marginal, shape ``lam``
``AsymmetricBessel``    ``|z|^m exp(-a z / b) K_m(|z| / b)`` shifted
``SymmetricNIG``        ``NIG(alpha, 0, delta, mu)``
``AsymmetricNIG``       ``NIG(alpha, beta, delta, mu)``
======================  ==============================================

Densities are evaluated in log space.  CDFs come from adaptive quadrature of
the density in standardised coordinates, split at the location point where
the Bessel laws may have an integrable singularity (``lam < 1/2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .errors import ParameterError
from .levy_core import BesselGenerator, GaussianGenerator, NIGGenerator, SymmetricFamily
from .numerics import DEFAULT_QUADRATURE, QuadratureSettings, integrate, log_bessel_k, norm_cdf

__all__ = [
    "Normal",
    "SymmetricBessel",
    "AsymmetricBessel",
    "SymmetricNIG",
    "AsymmetricNIG",
    "DistributionSpec",
    "pdf",
    "cdf",
    "sf",
    "char_fn",
    "moments",
    "sample",
]

_LOG_SQRT_PI = 0.5 * math.log(math.pi)
# beyond this many standard deviations from the location, integrate the tail instead
_TAIL_SWITCH = 1.0


def _vectorize(method):
    def wrapper(self, y):
        if np.ndim(y) == 0:
            return method(self, float(y))
        arr = np.asarray(y, dtype=float)
        return np.array([method(self, float(v)) for v in arr.ravel()]).reshape(arr.shape)

    wrapper.__name__ = method.__name__
    wrapper.__doc__ = method.__doc__
    return wrapper


class _Law:
    """Shared quadrature CDF machinery.

    Subclasses provide ``logpdf``, ``_loc`` (the split point), ``_flatten``
    (power ``k`` of the substitution ``z = d s**k`` used next to the split
    point) and ``_symmetric``.
    """

    _flatten = 1.0
    _symmetric = False
    settings: QuadratureSettings

    # -- to be provided by subclasses
    def _logpdf_offset(self, x: float) -> float:
        """Log density at ``loc + x``; kept separate so tiny offsets are not rounded away."""
        raise NotImplementedError

    def logpdf_scalar(self, y: float) -> float:
        return self._logpdf_offset(y - self._loc)

    @property
    def _loc(self) -> float:
        raise NotImplementedError

    def moments(self) -> tuple[float, float, float, float]:
        raise NotImplementedError

    # -- generic surface
    @property
    def mean(self) -> float:
        return self.moments()[0]

    @property
    def variance(self) -> float:
        return self.moments()[1]

    @cached_property
    def _scale(self) -> float:
        return math.sqrt(self.variance)

    @_vectorize
    def logpdf(self, y):
        return self.logpdf_scalar(y)

    @_vectorize
    def pdf(self, y):
        lp = self.logpdf_scalar(y)
        return math.exp(lp) if lp < 709.0 else math.inf

    def _zlogdensity(self, z: float) -> float:
        return self._logpdf_offset(self._scale * z) + math.log(self._scale)

    def _zdensity(self, z: float) -> float:
        lp = self._zlogdensity(z)
        return math.exp(lp) if lp < 709.0 else math.inf

    def _inner(self, d: float) -> float:
        # int_0^d of the standardised density; z = d s**k makes the integrand
        # vanish like sqrt(s) at the singular point
        if d == 0.0:
            return 0.0
        k = self._flatten
        if k == 1.0:
            return integrate(self._zdensity, 0.0, d, self.settings)
        log_scale = math.log(k * abs(d))
        sign = 1.0 if d > 0 else -1.0

        def g(s):
            z = d * s**k
            if s <= 0.0 or z == 0.0:
                return 0.0
            return sign * math.exp(self._zlogdensity(z) + log_scale + (k - 1.0) * math.log(s))

        return integrate(g, 0.0, 1.0, self.settings)

    def _upper_tail(self, z: float) -> float:
        return integrate(self._zdensity, z, math.inf, self.settings)

    def _lower_tail(self, z: float) -> float:
        return integrate(self._zdensity, -math.inf, z, self.settings)

    @cached_property
    def _left_mass(self) -> float:
        if self._symmetric:
            return 0.5
        return self._lower_tail(-_TAIL_SWITCH) - self._inner(-_TAIL_SWITCH)

    @cached_property
    def _right_mass(self) -> float:
        if self._symmetric:
            return 0.5
        return self._upper_tail(_TAIL_SWITCH) + self._inner(_TAIL_SWITCH)

    @_vectorize
    def cdf(self, y):
        """``P(Y <= y)``."""
        z = (y - self._loc) / self._scale
        if z == -math.inf:
            return 0.0
        if z == math.inf:
            return 1.0
        if z <= -_TAIL_SWITCH:
            return self._lower_tail(z)
        if z <= 0.0:
            return self._left_mass + self._inner(z)
        if z < _TAIL_SWITCH:
            if self._symmetric:
                return 0.5 + self._inner(z)
            return 1.0 - (self._right_mass - self._inner(z))
        return 1.0 - self._upper_tail(z)

    @_vectorize
    def sf(self, y):
        """``P(Y > y)``, accurate in the far right tail."""
        z = (y - self._loc) / self._scale
        if z == -math.inf:
            return 1.0
        if z == math.inf:
            return 0.0
        if z >= _TAIL_SWITCH:
            return self._upper_tail(z)
        if z >= 0.0:
            return self._right_mass - self._inner(z)
        if z > -_TAIL_SWITCH:
            if self._symmetric:
                return 0.5 - self._inner(z)
            return 1.0 - (self._left_mass + self._inner(z))
        return 1.0 - self._lower_tail(z)

    def total_mass(self) -> float:
        """Quadrature of the density over its full support (1 up to tolerance)."""
        return self._lower_tail(-_TAIL_SWITCH) - self._inner(-_TAIL_SWITCH) + self._inner(
            _TAIL_SWITCH
        ) + self._upper_tail(_TAIL_SWITCH)

    def standardized(self):
        """Law of ``(Y - mean) / sd``."""
        m, v = self.moments()[:2]
        sd = math.sqrt(v)
        return self.affine(-m / sd, 1.0 / sd)

    def sample(self, rng_seed: int, n: int) -> np.ndarray:
        """``n`` i.i.d. draws, reproducible for a given seed."""
        if n < 1:
            raise ParameterError("n must be at least 1")
        return self.draw(np.random.default_rng(rng_seed), n)

    def draw(self, rng: np.random.Generator, n: int, antithetic: bool = False) -> np.ndarray:
        raise NotImplementedError


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Normal(_Law):
    mu: float = 0.0
    sigma2: float = 1.0
    settings: QuadratureSettings = field(default=DEFAULT_QUADRATURE, compare=False, repr=False)

    _symmetric = True

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ParameterError(f"sigma2 must be positive, got {self.sigma2}")

    @property
    def _loc(self):
        return self.mu

    def _logpdf_offset(self, x):
        return -0.5 * x * x / self.sigma2 - 0.5 * math.log(2 * math.pi * self.sigma2)

    @_vectorize
    def cdf(self, y):
        return float(norm_cdf((y - self.mu) / math.sqrt(self.sigma2)))

    @_vectorize
    def sf(self, y):
        return float(norm_cdf((self.mu - y) / math.sqrt(self.sigma2)))

    def char_fn(self, u):
        return np.exp(1j * u * self.mu - 0.5 * self.sigma2 * np.square(u))

    def moments(self):
        return (self.mu, self.sigma2, 0.0, 3.0)

    def family(self) -> SymmetricFamily:
        return SymmetricFamily(self.mu, self.sigma2, GaussianGenerator())

    def at_time(self, t: float) -> "Normal":
        return Normal(self.mu * t, self.sigma2 * t, self.settings)

    def affine(self, loc: float, scale: float) -> "Normal":
        return Normal(loc + scale * self.mu, scale * scale * self.sigma2, self.settings)

    def draw(self, rng, n, antithetic=False):
        w = _normals(rng, n, antithetic)
        return self.mu + math.sqrt(self.sigma2) * w


@dataclass(frozen=True)
class SymmetricBessel(_Law):
    """Symmetric Bessel law ``Bessel(mu, sigma2, lam)`` (marginal of a symmetric VG).

    Mean ``mu``, variance ``sigma2``, excess kurtosis ``3 / lam``; ``lam = 1``
    is the Laplace law.  For ``lam <= 1/2`` the density is infinite at ``mu``
    (``pdf`` returns ``inf`` there); the singularity is integrable.
    """

    mu: float
    sigma2: float
    lam: float
    settings: QuadratureSettings = field(default=DEFAULT_QUADRATURE, compare=False, repr=False)

    _symmetric = True

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ParameterError(f"sigma2 must be positive, got {self.sigma2}")
        if not self.lam > 0:
            raise ParameterError(f"lam must be positive, got {self.lam}")

    @property
    def _loc(self):
        return self.mu

    @property
    def _flatten(self):
        return max(2.0, 0.75 / self.lam)

    @cached_property
    def _b(self) -> float:
        return math.sqrt(self.sigma2 / (2.0 * self.lam))

    def _logpdf_offset(self, x):
        order = self.lam - 0.5
        b = self._b
        norm = math.log(b) + _LOG_SQRT_PI + math.lgamma(self.lam)
        z = abs(x) / b
        if z == 0.0:
            if order > 0:
                return math.lgamma(order) - math.log(2.0) - norm
            return math.inf
        return order * math.log(0.5 * z) + log_bessel_k(order, z) - norm

    def char_fn(self, u):
        u = np.asarray(u, dtype=float)
        out = np.exp(1j * u * self.mu) * np.exp(-self.lam * np.log1p(u * u * self.sigma2 / (2.0 * self.lam)))
        return out[()] if out.ndim == 0 else out

    def moments(self):
        return (self.mu, self.sigma2, 0.0, 3.0 + 3.0 / self.lam)

    @property
    def variance(self):
        return self.sigma2

    def family(self) -> SymmetricFamily:
        return SymmetricFamily(self.mu, self.sigma2, BesselGenerator(self.lam))

    def at_time(self, t: float) -> "SymmetricBessel":
        return SymmetricBessel(self.mu * t, self.sigma2 * t, self.lam * t, self.settings)

    def affine(self, loc: float, scale: float) -> "SymmetricBessel":
        if scale <= 0:
            raise ParameterError("scale must be positive")
        return SymmetricBessel(loc + scale * self.mu, scale * scale * self.sigma2, self.lam, self.settings)

    def draw(self, rng, n, antithetic=False):
        g = _gammas(rng, n, self.lam, 1.0 / self.lam, antithetic)
        w = _normals(rng, n, antithetic)
        return self.mu + math.sqrt(self.sigma2) * np.sqrt(g) * w


@dataclass(frozen=True)
class AsymmetricBessel(_Law):
    """Asymmetric Bessel function law, shifted by ``shift``.

    ``Z = Y - shift`` has density
    ``|1-a^2|^(m+1/2) |z|^m exp(-a z / b) K_m(|z| / b) / (sqrt(pi) 2^m b^(m+1) Gamma(m+1/2))``
    for ``|a| < 1``, ``b > 0`` and ``m > -1/2``.  It is a variance-gamma law:
    ``Z = -(a/b) G + sqrt(G) W`` with ``G ~ Gamma(m + 1/2, scale=2 b^2 / (1 - a^2))``.
    """

    a: float
    b: float
    m: float
    shift: float = 0.0
    settings: QuadratureSettings = field(default=DEFAULT_QUADRATURE, compare=False, repr=False)

    def __post_init__(self):
        if not abs(self.a) < 1:
            raise ParameterError(f"|a| must be < 1, got {self.a}")
        if not self.b > 0:
            raise ParameterError(f"b must be positive, got {self.b}")
        if not self.m > -0.5:
            raise ParameterError(f"m must exceed -1/2, got {self.m}")

    @property
    def _loc(self):
        return self.shift

    @property
    def _shape(self) -> float:
        return self.m + 0.5

    @property
    def _flatten(self):
        return max(2.0, 1.5 / (2.0 * self.m + 1.0))

    @cached_property
    def _norm(self) -> float:
        b = self.b
        return (
            self._shape * math.log1p(-self.a * self.a)
            - math.log(b)
            - _LOG_SQRT_PI
            - math.lgamma(self._shape)
        )

    def _logpdf_offset(self, z):
        x = abs(z) / self.b
        tilt = -self.a * z / self.b
        if x == 0.0:
            if self.m > 0:
                return self._norm + math.lgamma(self.m) - math.log(2.0)
            return math.inf
        return self._norm + self.m * math.log(0.5 * x) + log_bessel_k(self.m, x) + tilt

    def char_fn(self, u):
        u = np.asarray(u, dtype=float)
        a, b = self.a, self.b
        one = 1.0 - a * a
        log_base = -np.log1p((2j * a * b * u + b * b * u * u) / one)
        out = np.exp(1j * u * self.shift + self._shape * log_base)
        return out[()] if out.ndim == 0 else out

    def moments(self):
        a, b, k = self.a, self.b, 2.0 * self.m + 1.0
        a2 = a * a
        mean = k * b * a / (a2 - 1.0) + self.shift
        var = k * b * b * (a2 + 1.0) / (a2 - 1.0) ** 2
        # sign fixed so that a < 0 (right tilt) gives positive skew
        skew = -2.0 * a * (a2 + 3.0) * k**-0.5 * (a2 + 1.0) ** -1.5
        kurt = 3.0 + 6.0 * (a2 * a2 + 6.0 * a2 + 1.0) / (k * (a2 + 1.0) ** 2)
        return (mean, var, skew, kurt)

    def at_time(self, t: float) -> "AsymmetricBessel":
        return AsymmetricBessel(self.a, self.b, self._shape * t - 0.5, self.shift * t, self.settings)

    def affine(self, loc: float, scale: float) -> "AsymmetricBessel":
        if scale <= 0:
            raise ParameterError("scale must be positive")
        return AsymmetricBessel(self.a, self.b * scale, self.m, loc + scale * self.shift, self.settings)

    def draw(self, rng, n, antithetic=False):
        a, b = self.a, self.b
        g = _gammas(rng, n, self._shape, 2.0 * b * b / (1.0 - a * a), antithetic)
        w = _normals(rng, n, antithetic)
        return self.shift - (a / b) * g + np.sqrt(g) * w


@dataclass(frozen=True)
class AsymmetricNIG(_Law):
    """Normal inverse Gaussian law ``NIG(alpha, beta, delta, mu)``, ``|beta| < alpha``."""

    alpha: float
    beta: float
    delta: float
    mu: float = 0.0
    settings: QuadratureSettings = field(default=DEFAULT_QUADRATURE, compare=False, repr=False)

    def __post_init__(self):
        if not self.alpha > 0:
            raise ParameterError(f"alpha must be positive, got {self.alpha}")
        if not abs(self.beta) < self.alpha:
            raise ParameterError(f"need |beta| < alpha, got beta={self.beta}, alpha={self.alpha}")
        if not self.delta > 0:
            raise ParameterError(f"delta must be positive, got {self.delta}")

    @property
    def _gamma(self) -> float:
        return math.sqrt(self.alpha**2 - self.beta**2)

    @property
    def _loc(self):
        return self.mu

    def _logpdf_offset(self, x):
        s = math.hypot(1.0, x / self.delta)
        return (
            math.log(self.alpha / math.pi)
            + self.delta * self._gamma
            + self.beta * x
            + log_bessel_k(1.0, self.alpha * self.delta * s)
            - math.log(s)
        )

    def char_fn(self, u):
        u = np.asarray(u, dtype=float)
        root = np.sqrt(self.alpha**2 - (self.beta + 1j * u) ** 2)
        out = np.exp(1j * u * self.mu + self.delta * (self._gamma - root))
        return out[()] if out.ndim == 0 else out

    def moments(self):
        a, b, d, g = self.alpha, self.beta, self.delta, self._gamma
        mean = self.mu + b * d / g
        var = d * a * a / g**3
        skew = 3.0 * b / (a * math.sqrt(d * g))
        kurt = 3.0 * (1.0 + (a * a + 4.0 * b * b) / (d * a * a * g))
        return (mean, var, skew, kurt)

    def at_time(self, t: float) -> "AsymmetricNIG":
        return AsymmetricNIG(self.alpha, self.beta, self.delta * t, self.mu * t, self.settings)

    def affine(self, loc: float, scale: float) -> "AsymmetricNIG":
        if scale <= 0:
            raise ParameterError("scale must be positive")
        return AsymmetricNIG(
            self.alpha / scale, self.beta / scale, self.delta * scale, loc + scale * self.mu, self.settings
        )

    def draw(self, rng, n, antithetic=False):
        v = _inverse_gaussians(rng, n, self.delta / self._gamma, self.delta**2, antithetic)
        w = _normals(rng, n, antithetic)
        return self.mu + self.beta * v + np.sqrt(v) * w


@dataclass(frozen=True)
class SymmetricNIG(AsymmetricNIG):
    """Symmetric NIG ``SNIG(alpha, 0, delta, mu)``: variance ``delta / alpha``, shape ``zeta = alpha delta``."""

    alpha: float
    delta: float
    mu: float = 0.0
    beta: float = field(default=0.0, init=False)
    settings: QuadratureSettings = field(default=DEFAULT_QUADRATURE, compare=False, repr=False)

    _symmetric = True

    @classmethod
    def from_moments(cls, mu: float, sigma2: float, zeta: float, **kw) -> "SymmetricNIG":
        """SNIG with variance ``sigma2`` and shape ``zeta`` (excess kurtosis ``3 / zeta``)."""
        if not (sigma2 > 0 and zeta > 0):
            raise ParameterError("sigma2 and zeta must be positive")
        return cls(math.sqrt(zeta / sigma2), math.sqrt(zeta * sigma2), mu, **kw)

    @property
    def zeta(self) -> float:
        return self.alpha * self.delta

    @property
    def variance(self):
        return self.delta / self.alpha

    def family(self) -> SymmetricFamily:
        return SymmetricFamily(self.mu, self.delta / self.alpha, NIGGenerator(self.zeta))

    def at_time(self, t: float) -> "SymmetricNIG":
        return SymmetricNIG(self.alpha, self.delta * t, self.mu * t, settings=self.settings)

    def affine(self, loc: float, scale: float) -> "SymmetricNIG":
        if scale <= 0:
            raise ParameterError("scale must be positive")
        return SymmetricNIG(self.alpha / scale, self.delta * scale, loc + scale * self.mu, settings=self.settings)


DistributionSpec = Union[Normal, SymmetricBessel, AsymmetricBessel, SymmetricNIG, AsymmetricNIG]


# --------------------------------------------------------------------------
# mixing-variable draws


def _normals(rng, n, antithetic):
    if not antithetic:
        return rng.standard_normal(n)
    half = rng.standard_normal((n + 1) // 2)
    return np.concatenate([half, -half])[:n]


def _gammas(rng, n, shape, scale, antithetic):
    if not antithetic:
        return rng.gamma(shape, scale, n)
    half = rng.gamma(shape, scale, (n + 1) // 2)
    return np.concatenate([half, half])[:n]


def _inverse_gaussians(rng, n, mean, shape, antithetic):
    if not antithetic:
        return rng.wald(mean, shape, n)
    half = rng.wald(mean, shape, (n + 1) // 2)
    return np.concatenate([half, half])[:n]


# --------------------------------------------------------------------------
# functional surface


def pdf(dist: DistributionSpec, y):
    return dist.pdf(y)


def cdf(dist: DistributionSpec, y):
    return dist.cdf(y)


def sf(dist: DistributionSpec, y):
    return dist.sf(y)


def char_fn(dist: DistributionSpec, u):
    return dist.char_fn(u)


def moments(dist: DistributionSpec) -> tuple[float, float, float, float]:
    """``(mean, variance, skewness, kurtosis)``; kurtosis is not excess."""
    return dist.moments()


def sample(dist: DistributionSpec, rng_seed: int, n: int) -> np.ndarray:
    return dist.sample(rng_seed, n)
