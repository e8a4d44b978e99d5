"""Characteristic triplets and characteristic generators of symmetric Levy laws.

A symmetric Levy process ``Y`` is described in two equivalent ways:

* by its characteristic triplet ``(mu, c, nu)``, where ``nu`` is a symmetric
  jump measure, stored here through its density on ``(0, inf)``;
* by the symmetric family ``S(mu, sigma2, psi)`` of ``Y_1``, whose
  characteristic function is ``exp(i u mu) * psi(sigma2 u^2 / 2)`` with the
  generator normalised so that ``psi'(0) = -1``.

This module converts between the two, evaluates the characteristic exponent,
and transforms triplets under Levy-preserving changes of measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, IntegrationError, MeasureChangeError, ParameterError
from .numerics import DEFAULT_QUADRATURE, QuadratureSettings, bessel_k, integrate

__all__ = [
    "Generator",
    "GaussianGenerator",
    "BesselGenerator",
    "NIGGenerator",
    "PoweredGenerator",
    "TripletGenerator",
    "SymmetricFamily",
    "CharacteristicTriplet",
    "MeasureChange",
    "marginal_at_t",
    "char_exponent",
    "family_from_triplet",
    "apply_change",
    "scale_jumps",
    "scaling_change",
    "natural_change",
    "vg_triplet",
    "nig_triplet",
]


# --------------------------------------------------------------------------
# characteristic generators


class Generator:
    """Characteristic generator ``psi`` of a symmetric family.

    Subclasses implement :meth:`log`; ``psi(v)`` is defined for ``v`` above
    :attr:`lower_bound` (negative arguments correspond to exponential
    moments, ``E[exp(Y)] = exp(mu) * psi(-sigma2 / 2)``).
    """

    lower_bound: float = -math.inf

    def log(self, v: float) -> float:
        raise NotImplementedError

    def __call__(self, v: float) -> float:
        return math.exp(self.log(v))

    def at_time(self, t: float) -> "Generator":
        """Generator of the ``t``-marginal, ``psi_t(v) = psi(v / t) ** t``."""
        return PoweredGenerator(self, t)

    def _check(self, v: float) -> None:
        if not v > self.lower_bound:
            raise DomainError(
                f"{type(self).__name__} is finite only for v > {self.lower_bound}, got v={v}"
            )


@dataclass(frozen=True)
class GaussianGenerator(Generator):
    def log(self, v: float) -> float:
        return -float(v)

    def at_time(self, t: float) -> "GaussianGenerator":
        return self


@dataclass(frozen=True)
class BesselGenerator(Generator):
    """``psi(v) = (1 + v / lam) ** -lam`` of the symmetric Bessel (VG) family."""

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError(f"lambda must be positive, got {self.lam}")

    @property
    def lower_bound(self) -> float:
        return -self.lam

    def log(self, v: float) -> float:
        self._check(v)
        return -self.lam * math.log1p(v / self.lam)

    def at_time(self, t: float) -> "BesselGenerator":
        return BesselGenerator(self.lam * t)


@dataclass(frozen=True)
class NIGGenerator(Generator):
    """``psi(v) = exp(zeta * (1 - sqrt(1 + 2 v / zeta)))`` of the symmetric NIG family."""

    zeta: float

    def __post_init__(self):
        if not self.zeta > 0:
            raise ParameterError(f"zeta must be positive, got {self.zeta}")

    @property
    def lower_bound(self) -> float:
        return -0.5 * self.zeta

    def _check(self, v: float) -> None:
        if v < self.lower_bound:
            raise DomainError(f"NIGGenerator is finite only for v >= {self.lower_bound}, got v={v}")

    def log(self, v: float) -> float:
        self._check(v)
        # zeta * (1 - sqrt(1 + x)) rewritten to avoid cancellation for large zeta
        return -2.0 * v / (1.0 + math.sqrt(max(0.0, 1.0 + 2.0 * v / self.zeta)))

    def at_time(self, t: float) -> "NIGGenerator":
        return NIGGenerator(self.zeta * t)


@dataclass(frozen=True)
class PoweredGenerator(Generator):
    base: Generator
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ParameterError(f"t must be positive, got {self.t}")

    @property
    def lower_bound(self) -> float:
        return self.t * self.base.lower_bound

    def log(self, v: float) -> float:
        return self.t * self.base.log(v / self.t)


# --------------------------------------------------------------------------
# triplets


@dataclass(frozen=True)
class CharacteristicTriplet:
    """Levy triplet ``(mu, c, nu)`` of a symmetric Levy process.

    ``nu_density`` is the jump density on ``(0, inf)``; the full measure is its
    even extension to ``R \\ {0}``, so every integral over ``R`` becomes twice
    the integral over ``(0, inf)``.  ``scale`` is a typical jump size used to
    place quadrature breakpoints (defaults to 1).
    """

    mu: float
    c: float
    nu_density: Optional[Callable[[float], float]] = None
    scale: float = 1.0
    settings: QuadratureSettings = field(default=DEFAULT_QUADRATURE, compare=False)

    def __post_init__(self):
        if not self.c >= 0:
            raise ParameterError(f"Brownian coefficient c must be >= 0, got {self.c}")
        if not self.scale > 0:
            raise ParameterError("scale must be positive")

    @property
    def has_jumps(self) -> bool:
        return self.nu_density is not None

    def jump_integral(self, g: Callable[[float], float]) -> float:
        """``int_0^inf g(y) nu(y) dy`` for ``g >= 0``, split at a few multiples of ``scale``.

        Quadpack can return a finite, even negative, value for a divergent
        power-law end piece (the analytic continuation of the integral).  With
        a nonnegative integrand the end pieces must dominate their own
        sub-pieces, and a failure of that raises :class:`IntegrationError`.
        """
        if self.nu_density is None:
            return 0.0
        nu = self.nu_density
        s = self.scale
        st = self.settings

        def integrand(y):
            if y <= 0.0:
                return 0.0
            w = nu(y)
            return g(y) * w if w > 0.0 else 0.0

        def piece(a, b):
            v = integrate(integrand, a, b, st)
            if v < -st.abs_tol:
                raise IntegrationError(f"negative estimate {v!r} on [{a}, {b}]: integral diverges", v)
            return v

        def dominated(whole, part, where):
            if part > whole + max(st.abs_tol, 1e-8 * abs(whole)):
                raise IntegrationError(f"integral diverges near {where}", whole)

        edges = [0.0, 0.1 * s, s, 5.0 * s, 25.0 * s, 100.0 * s]
        parts = [piece(a, b) for a, b in zip(edges[:-1], edges[1:])]
        tail = piece(edges[-1], math.inf)
        dominated(parts[0], piece(1e-4 * s, 0.1 * s), "0")
        dominated(tail, piece(100.0 * s, 1e4 * s), "infinity")
        return math.fsum(parts) + tail

    def second_moment(self) -> float:
        """``int_R y^2 nu(dy)`` (twice the half-line integral)."""
        try:
            m2 = 2.0 * self.jump_integral(lambda y: y * y)
        except IntegrationError as exc:
            raise ParameterError(f"jump measure has no finite second moment: {exc}") from exc
        if not math.isfinite(m2):
            raise ParameterError("jump measure has no finite second moment")
        return m2

    def variance(self) -> float:
        return self.c**2 + self.second_moment()

    def validate(self) -> None:
        """Check ``int min(1, y^2) nu < inf`` and the finite-variance assumption."""
        try:
            small = self.jump_integral(lambda y: min(1.0, y * y))
        except IntegrationError as exc:
            raise ParameterError(f"nu is not a Levy measure: {exc}") from exc
        if not math.isfinite(small):
            raise ParameterError("nu is not a Levy measure")
        self.second_moment()


def char_exponent(triplet: CharacteristicTriplet, u: float) -> complex:
    """``Lambda(u) = i mu u - c^2 u^2 / 2 - 2 int_0^inf (1 - cos(u y)) nu(dy)``."""
    u = float(u)
    if u == 0.0:
        return 0j
    jump = triplet.jump_integral(lambda y: 2.0 * math.sin(0.5 * u * y) ** 2)
    return complex(-0.5 * triplet.c**2 * u * u - 2.0 * jump, triplet.mu * u)


@dataclass(frozen=True)
class TripletGenerator(Generator):
    """Generator of ``Y_1`` computed from a triplet by quadrature.

    For ``v >= 0`` this is ``exp(-c^2 v / sigma2 - 2 int (1 - cos(y w)) nu)``
    with ``w = sqrt(2 v / sigma2)``; negative ``v`` uses ``cosh`` in place of
    ``cos`` and is finite only while the corresponding exponential moment is.
    """

    triplet: CharacteristicTriplet
    sigma2: float

    def log(self, v: float) -> float:
        v = float(v)
        if v == 0.0:
            return 0.0
        tr = self.triplet
        w = math.sqrt(2.0 * abs(v) / self.sigma2)
        brownian = -tr.c**2 * v / self.sigma2
        if v > 0:
            jump = -2.0 * tr.jump_integral(lambda y: 2.0 * math.sin(0.5 * w * y) ** 2)
        else:
            try:
                jump = 2.0 * tr.jump_integral(lambda y: 2.0 * math.sinh(0.5 * w * y) ** 2)
            except (IntegrationError, OverflowError) as exc:
                raise DomainError(f"exponential moment psi({v}) is infinite") from exc
        return brownian + jump


@dataclass(frozen=True)
class SymmetricFamily:
    """Law ``S(mu, sigma2, psi)``: location, variance and generator."""

    mu: float
    sigma2: float
    psi: Generator

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ParameterError(f"sigma2 must be positive, got {self.sigma2}")

    def char_fn(self, u: float) -> complex:
        return complex(np.exp(1j * u * self.mu)) * self.psi(0.5 * self.sigma2 * u * u)

    def log_mgf_at_one(self) -> float:
        """``ln E[exp(Y)] = mu + ln psi(-sigma2 / 2)``."""
        return self.mu + self.psi.log(-0.5 * self.sigma2)


def marginal_at_t(family: SymmetricFamily, t: float) -> SymmetricFamily:
    """Family of ``Y_t``: ``S(mu t, sigma2 t, psi_t)`` with ``psi_t(v) = psi(v/t)^t``."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    if t == 1:
        return family
    return SymmetricFamily(family.mu * t, family.sigma2 * t, family.psi.at_time(t))


def family_from_triplet(triplet: CharacteristicTriplet) -> SymmetricFamily:
    """Symmetric family ``S(mu, sigma2, psi)`` of ``Y_1`` for a symmetric triplet."""
    sigma2 = triplet.variance()
    if not sigma2 > 0:
        raise ParameterError("degenerate triplet: zero variance")
    if not triplet.has_jumps:
        return SymmetricFamily(triplet.mu, sigma2, GaussianGenerator())
    return SymmetricFamily(triplet.mu, sigma2, TripletGenerator(triplet, sigma2))


# --------------------------------------------------------------------------
# measure changes


@dataclass(frozen=True)
class MeasureChange:
    """Levy-preserving change of measure: Girsanov drift ``eta``, jump tilt ``phi``.

    ``phi`` is given on ``y > 0`` and extended evenly, so the transformed jump
    measure ``exp(phi) nu`` stays symmetric.
    """

    eta: float = 0.0
    phi: Optional[Callable[[float], float]] = None


def apply_change(triplet: CharacteristicTriplet, change: MeasureChange) -> CharacteristicTriplet:
    """Triplet ``(mu + c^2 eta, c, exp(phi) nu)`` of ``Y`` under the new measure.

    The compensator correction ``int_{-1}^{1} y (nu~ - nu)(dy)`` vanishes because
    both measures are symmetric.
    """
    mu_new = triplet.mu + triplet.c**2 * change.eta
    if change.phi is None or not triplet.has_jumps:
        return CharacteristicTriplet(mu_new, triplet.c, triplet.nu_density, triplet.scale, triplet.settings)
    phi = change.phi
    try:
        hellinger = 2.0 * triplet.jump_integral(lambda y: math.expm1(0.5 * phi(y)) ** 2)
    except (IntegrationError, OverflowError) as exc:
        raise MeasureChangeError(
            f"integral of (exp(phi/2) - 1)^2 against nu diverges: {exc}"
        ) from exc
    if not math.isfinite(hellinger):
        raise MeasureChangeError("integral of (exp(phi/2) - 1)^2 against nu diverges")
    nu = triplet.nu_density

    def tilted(y):
        w = nu(y)
        return math.exp(phi(y)) * w if w > 0.0 else 0.0

    return CharacteristicTriplet(mu_new, triplet.c, tilted, triplet.scale, triplet.settings)


def scale_jumps(triplet: CharacteristicTriplet, beta: float) -> CharacteristicTriplet:
    """Triplet with jump measure ``nu_beta(A) = nu(A / beta)`` (every jump scaled by ``beta``).

    The pushforward density ``nu(y / beta) / beta`` is used directly.
    """
    if not beta > 0:
        raise ParameterError(f"beta must be positive, got {beta}")
    if not triplet.has_jumps:
        return triplet
    nu = triplet.nu_density

    def pushed(y):
        return nu(y / beta) / beta

    return CharacteristicTriplet(triplet.mu, triplet.c, pushed, triplet.scale * beta, triplet.settings)


def scaling_change(triplet: CharacteristicTriplet, beta: float) -> MeasureChange:
    """The tilt ``phi = ln(d nu_beta / d nu)`` realising :func:`scale_jumps` as a measure change."""
    nu = triplet.nu_density
    if nu is None:
        raise ParameterError("scaling change needs a jump measure")

    def phi(y):
        pushed = nu(y / beta) / beta
        if pushed <= 0.0:
            return -math.inf
        return math.log(pushed) - math.log(nu(y))

    return MeasureChange(0.0, phi)


def natural_change(
    triplet: CharacteristicTriplet, *, eta: float = 0.0, beta: float = 1.0
) -> CharacteristicTriplet:
    """Natural (generator-preserving) change of measure.

    With a Brownian component only the drift moves (``mu + c^2 eta``); without
    one, the jumps are rescaled by ``beta`` and ``sigma`` becomes ``beta sigma``.
    """
    if triplet.c != 0.0:
        return apply_change(triplet, MeasureChange(eta=eta))
    return scale_jumps(triplet, beta)


# --------------------------------------------------------------------------
# reference triplets


def vg_triplet(mu: float, sigma2: float, lam: float, c: float = 0.0) -> CharacteristicTriplet:
    """Symmetric VG: ``nu(y) = (lam / y) exp(-sqrt(2 lam / sigma2) y)`` on ``y > 0``.

    With ``c > 0`` a Brownian part is added on top, so the total variance is
    ``c^2 + sigma2``.
    """
    if not (sigma2 > 0 and lam > 0):
        raise ParameterError("vg_triplet needs sigma2 > 0 and lam > 0")
    rate = math.sqrt(2.0 * lam / sigma2)

    def nu(y):
        return lam * math.exp(-rate * y) / y

    return CharacteristicTriplet(mu, c, nu, scale=1.0 / rate)


def nig_triplet(mu: float, alpha: float, delta: float, c: float = 0.0) -> CharacteristicTriplet:
    """Symmetric NIG: ``nu(y) = (alpha delta / pi) K_1(alpha y) / y`` on ``y > 0``."""
    if not (alpha > 0 and delta > 0):
        raise ParameterError("nig_triplet needs alpha > 0 and delta > 0")
    coef = alpha * delta / math.pi

    def nu(y):
        return coef * bessel_k(1.0, alpha * y) / y

    return CharacteristicTriplet(mu, c, nu, scale=1.0 / alpha)
