"""Special functions, adaptive quadrature and bracketed root finding.

Everything here is a pure function of its arguments.  The modified Bessel
function of the second kind is evaluated in log space so that densities with
large shape parameters (``lambda * t`` in the hundreds or more) neither
overflow nor underflow on the way to a moderate result.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _integrate
from scipy import optimize as _optimize
from scipy import special as _special

from .errors import DomainError, IntegrationError, RootFindingError

__all__ = [
    "QuadratureSettings",
    "DEFAULT_QUADRATURE",
    "bessel_k",
    "log_bessel_k",
    "norm_cdf",
    "norm_sf",
    "integrate",
    "find_root",
]


@dataclass(frozen=True)
class QuadratureSettings:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if not self.abs_tol >= 0:
            raise ValueError("abs_tol must be non-negative")
        if int(self.max_subdivisions) < 1:
            raise ValueError("max_subdivisions must be at least 1")


DEFAULT_QUADRATURE = QuadratureSettings()

# Coefficients of the Debye polynomials u_1..u_4 in t, lowest power first.
_DEBYE = (
    (0.0, 3.0, 0.0, -5.0),
    (0.0, 0.0, 81.0, 0.0, -462.0, 0.0, 385.0),
    (0.0, 0.0, 0.0, 30375.0, 0.0, -369603.0, 0.0, 765765.0, 0.0, -425425.0),
    (0.0, 0.0, 0.0, 0.0, 4465125.0, 0.0, -94121676.0, 0.0, 349922430.0, 0.0,
     -446185740.0, 0.0, 185910725.0),
)
_DEBYE_DEN = (24.0, 1152.0, 414720.0, 39813120.0)


def _log_k_debye(order: float, x: float) -> float:
    # Uniform asymptotic expansion in the order; relative error O(order**-5).
    z = x / order
    s = math.sqrt(1.0 + z * z)
    t = 1.0 / s
    eta = s + math.log(z / (1.0 + s))
    series = 1.0
    sign = -1.0
    for k, (coef, den) in enumerate(zip(_DEBYE, _DEBYE_DEN), start=1):
        u = np.polynomial.polynomial.polyval(t, coef) / den
        series += sign * u / order**k
        sign = -sign
    return (0.5 * math.log(math.pi / (2.0 * order)) - order * eta
            - 0.5 * math.log(s) + math.log(series))


def log_bessel_k(order: float, x: float) -> float:
    """Natural log of ``K_order(x)`` for real order and ``x > 0``."""
    order = float(order)
    x = float(x)
    if not (math.isfinite(order) and math.isfinite(x)):
        raise DomainError(f"bessel_k needs finite arguments, got order={order}, x={x}")
    if x <= 0.0:
        raise DomainError(f"bessel_k needs x > 0, got {x}")
    order = abs(order)  # K_{-v} = K_v
    scaled = _special.kve(order, x)
    if math.isfinite(scaled) and scaled > 0.0:
        return math.log(scaled) - x
    if order <= 30.0:
        # overflow only happens for tiny x here; leading small-argument term
        return math.lgamma(order) + (order - 1.0) * math.log(2.0) - order * math.log(x)
    return _log_k_debye(order, x)


def bessel_k(order: float, x: float) -> float:
    """Modified Bessel function of the second kind ``K_order(x)``.

    Returns 0.0 once the value underflows the double range and ``inf`` on
    overflow (only reachable for extremely small ``x`` or huge orders).

    >>> round(bessel_k(1.0, 1.0), 10)
    0.6019072302
    """
    order = float(order)
    x = float(x)
    if not (math.isfinite(order) and math.isfinite(x)):
        raise DomainError(f"bessel_k needs finite arguments, got order={order}, x={x}")
    if x <= 0.0:
        raise DomainError(f"bessel_k needs x > 0, got {x}")
    direct = _special.kv(abs(order), x)
    if math.isfinite(direct) and direct > 0.0:
        return float(direct)
    with np.errstate(over="ignore", under="ignore"):
        return float(np.exp(log_bessel_k(order, x)))


def norm_cdf(x):
    return _special.ndtr(x)


def norm_sf(x):
    return _special.ndtr(np.negative(x))


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    settings: QuadratureSettings = DEFAULT_QUADRATURE,
    points=None,
) -> float:
    """Adaptive Gauss-Kronrod estimate of ``int_a^b f``.

    Infinite limits are mapped onto a finite interval by quadpack's monotone
    substitution.  A round-off report from quadpack is tolerated when the
    error estimate stays within 1000x the requested bound; anything else that
    misses the tolerance raises :class:`IntegrationError` carrying the partial
    estimate.
    """
    if a == b:
        return 0.0
    if a > b:
        return -integrate(f, b, a, settings, points)
    kwargs = dict(
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=int(settings.max_subdivisions),
        full_output=1,
    )
    if points is not None and math.isfinite(a) and math.isfinite(b):
        pts = [p for p in points if a < p < b]
        if pts:
            kwargs["points"] = pts
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = _integrate.quad(f, a, b, **kwargs)
    value, err = float(out[0]), float(out[1])
    message = str(out[3]) if len(out) >= 4 else ""
    bound = max(settings.abs_tol, settings.rel_tol * abs(value))
    if not math.isfinite(value):
        raise IntegrationError(f"non-finite quadrature result on [{a}, {b}]", value, err)
    if not message or err <= bound:
        return value
    if "roundoff" in message.lower() and err <= 1e3 * bound:
        return value
    raise IntegrationError(
        f"quadrature on [{a}, {b}] did not converge: estimate {value!r}, "
        f"error {err:.3g} > bound {bound:.3g}: {message.splitlines()[0]}",
        value,
        err,
    )


def find_root(
    g: Callable[[float], float],
    bracket: tuple[float, float],
    tol: float = 1e-12,
) -> float:
    """Root of ``g`` inside ``bracket`` by Brent's method.

    Endpoints where ``g`` is not finite (e.g. a pole of ``ln psi``) are
    pulled inward by bisection until a finite sign change is found.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise RootFindingError(f"bracket must satisfy lo < hi, got ({lo}, {hi})")
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if math.isnan(glo) or math.isnan(ghi) or glo * ghi > 0:
        raise RootFindingError(
            f"g has the same sign at both ends of ({lo}, {hi}): g(lo)={glo}, g(hi)={ghi}"
        )
    # shrink away from infinite endpoint values, keeping the sign change
    for _ in range(200):
        if math.isfinite(glo) and math.isfinite(ghi):
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if math.isnan(gm):
            raise RootFindingError(f"g({mid}) is NaN")
        if (gm < 0) == (glo < 0):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    else:
        raise RootFindingError("could not find finite function values inside the bracket")
    try:
        return float(_optimize.brentq(g, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))
    except (RuntimeError, ValueError) as exc:
        raise RootFindingError(str(exc)) from exc
