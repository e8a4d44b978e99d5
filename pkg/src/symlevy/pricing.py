"""European call prices under natural martingale measures.

Every analytic price is assembled from the change-of-numeraire identity

    C_0 = S_0 Q1(S_T > K) - exp(-r T) K Q(S_T > K),

with the two exercise probabilities taken from the ``Q`` and ``Q1`` laws of
:mod:`symlevy.emm`.  The "modified Black-Scholes" approximations replace
both probabilities by normal ones with matched mean and variance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

from .distributions import DistributionSpec, Normal, SymmetricBessel, SymmetricNIG
from .emm import (
    EmmSolution,
    Model,
    ModelParams,
    NigConvention,
    solve_brownian_case,
    solve_discrete,
    solve_purejump_case,
)
from .errors import DomainError, NoNaturalEmmError, ParameterError
from .levy_core import (
    BesselGenerator,
    GaussianGenerator,
    Generator,
    NIGGenerator,
    SymmetricFamily,
)
from .numerics import norm_cdf

__all__ = [
    "Method",
    "OptionContract",
    "PricingResult",
    "price_black_scholes",
    "price_brownian_component",
    "price_vg_exact",
    "price_vg_discrete",
    "price_nig_exact",
    "price_nig_discrete",
    "approx_vg_c",
    "approx_vg_d",
    "approx_nig_c",
    "approx_nig_d",
    "percentage_difference",
    "standardized_marginal",
    "bessel_standard_cdf",
    "nig_standard_cdf",
    "standardized_cdf",
    "PRICERS",
    "price",
]


class Method(str, enum.Enum):
    EXACT = "exact"
    APPROX = "approx"
    BLACK_SCHOLES = "black-scholes"
    MONTE_CARLO = "monte-carlo"


@dataclass(frozen=True)
class OptionContract:
    """European call.  ``horizon`` is ``T`` in model time units, or the number
    of periods ``N`` for the discrete-time formulas (any positive real)."""

    s0: float
    strike: float
    horizon: float

    def __post_init__(self):
        for name in ("s0", "strike", "horizon"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be finite and positive, got {value}")

    @property
    def log_moneyness(self) -> float:
        """``ln(S_0 / K)``."""
        return math.log(self.s0 / self.strike)


@dataclass(frozen=True)
class PricingResult:
    price: float
    prob_q1: float
    prob_q: float
    emm: EmmSolution | None
    method: Method
    formula: str
    contract: OptionContract
    r: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def discount(self) -> float:
        return math.exp(-self.r * self.contract.horizon)


def _result(contract, r, prob_q1, prob_q, emm, method, formula, **diagnostics) -> PricingResult:
    prob_q1 = float(prob_q1)
    prob_q = float(prob_q)
    value = contract.s0 * prob_q1 - math.exp(-r * contract.horizon) * contract.strike * prob_q
    return PricingResult(value, prob_q1, prob_q, emm, method, formula, contract, r, diagnostics)


def _require(params: ModelParams, model: Model):
    if params.model is not model:
        raise ParameterError(f"this formula needs the {model.value} model, got {params.model.value}")


# -- standardized CDFs -------------------------------------------------------


def bessel_standard_cdf(shape: float, y):
    """CDF of the symmetric Bessel law with mean 0, variance 1 and shape ``shape``."""
    return SymmetricBessel(0.0, 1.0, shape).cdf(y)


def nig_standard_cdf(zeta: float, y):
    """CDF of the symmetric NIG law with mean 0, variance 1 and ``alpha delta = zeta``."""
    return SymmetricNIG.from_moments(0.0, 1.0, zeta).cdf(y)


def standardized_cdf(law: DistributionSpec, y):
    """CDF of ``(Y - E Y) / sd(Y)`` for any law, e.g. a ``Q1`` law."""
    return law.standardized().cdf(y)


def standardized_marginal(psi: Generator, t: float) -> DistributionSpec:
    """Mean-0, variance-1 law whose generator is ``psi_t``."""
    if isinstance(psi, GaussianGenerator):
        return Normal(0.0, 1.0)
    if isinstance(psi, BesselGenerator):
        return SymmetricBessel(0.0, 1.0, psi.lam * t)
    if isinstance(psi, NIGGenerator):
        return SymmetricNIG.from_moments(0.0, 1.0, psi.zeta * t)
    raise ParameterError(
        f"no closed-form marginal for {type(psi).__name__}; pass marginal_cdf explicitly"
    )


# -- Black-Scholes and the Brownian-component formula ------------------------


def price_black_scholes(contract: OptionContract, r: float, sigma2: float) -> PricingResult:
    if not sigma2 > 0:
        raise ParameterError(f"sigma2 must be positive, got {sigma2}")
    t = contract.horizon
    vol = math.sqrt(sigma2 * t)
    d1 = (contract.log_moneyness + (r + 0.5 * sigma2) * t) / vol
    d2 = d1 - vol
    emm = solve_brownian_case(ModelParams(Model.GAUSSIAN, r - 0.5 * sigma2, sigma2, None, r))
    return _result(contract, r, norm_cdf(d1), norm_cdf(d2), emm, Method.BLACK_SCHOLES, "bs")


def _model_of(psi: Generator):
    if isinstance(psi, GaussianGenerator):
        return Model.GAUSSIAN, None
    if isinstance(psi, BesselGenerator):
        return Model.VG, psi.lam
    if isinstance(psi, NIGGenerator):
        return Model.NIG, psi.zeta
    return None, None


def price_brownian_component(
    contract: OptionContract,
    family: SymmetricFamily,
    r: float,
    marginal_cdf: Callable[[float], float] | None = None,
) -> PricingResult:
    """Price when the return process has a Brownian part, so ``Q`` and ``Q1``
    only shift the location.  ``marginal_cdf`` is ``F_T``, the CDF of the
    standardized time-``T`` marginal; by default it is derived from the
    family's generator.
    """
    t = contract.horizon
    psi = family.psi
    if marginal_cdf is None:
        marginal_cdf = standardized_marginal(psi, t).cdf
    lp = psi.log(-0.5 * family.sigma2)
    vol = math.sqrt(family.sigma2 * t)
    d_plus = (contract.log_moneyness + (r + lp) * t) / vol
    d_minus = (contract.log_moneyness + (r - lp) * t) / vol
    model, shape = _model_of(psi)
    if model is not None:
        emm = solve_brownian_case(ModelParams(model, family.mu, family.sigma2, shape, r))
    else:
        emm = None
    return _result(
        contract, r, marginal_cdf(d_plus), marginal_cdf(d_minus), emm, Method.EXACT,
        "brownian-component", d_plus=d_plus, d_minus=d_minus,
    )


# -- exact formulas ------------------------------------------------------------


def _by_quadrature(contract, emm: EmmSolution, formula: str) -> PricingResult:
    t = contract.horizon
    x = -contract.log_moneyness  # S_T > K  <=>  Y_T > ln(K / S_0)
    prob_q = emm.q_law_at(t).sf(x)
    prob_q1 = emm.q1_law_at(t).sf(x)
    return _result(contract, emm.params.r, prob_q1, prob_q, emm, Method.EXACT, formula)


def price_vg_exact(contract: OptionContract, params: ModelParams) -> PricingResult:
    """Continuous-time VG price; needs ``mu < r``."""
    _require(params, Model.VG)
    return _by_quadrature(contract, solve_purejump_case(params), "vg-exact")


def price_nig_exact(
    contract: OptionContract,
    params: ModelParams,
    nig_convention: NigConvention | str = NigConvention.KEEP_ZETA,
) -> PricingResult:
    """Continuous-time NIG price; needs ``mu < r`` and ``alpha > 1``."""
    _require(params, Model.NIG)
    if not params.alpha > 1.0:
        raise ParameterError(
            f"NIG pricing needs alpha^2 = zeta / sigma2 > 1, got {params.alpha ** 2:.6g}"
        )
    return _by_quadrature(contract, solve_purejump_case(params, nig_convention), "nig-exact")


def price_vg_discrete(contract: OptionContract, params: ModelParams) -> PricingResult:
    """Discrete-time VG price over ``N = contract.horizon`` periods; exists for any ``mu``."""
    _require(params, Model.VG)
    return _by_quadrature(contract, solve_discrete(params), "vg-discrete")


def price_nig_discrete(contract: OptionContract, params: ModelParams) -> PricingResult:
    """Discrete-time NIG price over ``N = contract.horizon`` periods."""
    _require(params, Model.NIG)
    if not params.alpha > 1.0:
        raise ParameterError(
            f"NIG pricing needs alpha^2 = zeta / sigma2 > 1, got {params.alpha ** 2:.6g}"
        )
    return _by_quadrature(contract, solve_discrete(params), "nig-discrete")


# -- modified Black-Scholes approximations -------------------------------------


def _two_normals(contract, r, d1, d2, emm, formula) -> PricingResult:
    return _result(contract, r, norm_cdf(d1), norm_cdf(d2), emm, Method.APPROX, formula, d1=d1, d2=d2)


def _gap(params: ModelParams) -> float:
    gap = params.r - params.mu
    if not gap > 0:
        raise NoNaturalEmmError(
            f"continuous-time approximation needs mu < r (mu={params.mu}, r={params.r})"
        )
    return gap


def approx_vg_c(contract: OptionContract, params: ModelParams) -> PricingResult:
    _require(params, Model.VG)
    gap = _gap(params)
    g = params.gamma
    t = contract.horizon
    growth = math.expm1(gap * g / 3.0)
    mu1 = (6.0 / g) * growth
    s2_1 = mu1 * (2.0 * growth + 1.0)
    s2 = -(6.0 / g) * math.expm1(-gap * g / 3.0)
    base = contract.log_moneyness + params.mu * t
    d1 = (base + mu1 * t) / math.sqrt(s2_1 * t)
    d2 = base / math.sqrt(s2 * t)
    return _two_normals(contract, params.r, d1, d2, solve_purejump_case(params), "vg-c")


def approx_vg_d(contract: OptionContract, params: ModelParams) -> PricingResult:
    _require(params, Model.VG)
    g = params.gamma
    s2 = params.sigma2
    if not g * s2 < 6.0:
        raise DomainError(
            f"VG-D needs gamma sigma^2 < 6 (ln argument 1 - gamma sigma^2 / 6 = {1 - g * s2 / 6:.6g} <= 0)"
        )
    n = contract.horizon
    ln_term = (3.0 / g) * math.log1p(-g * s2 / 6.0)
    vol = math.sqrt(s2 * n)
    d1 = (contract.log_moneyness + (params.r - ln_term) * n) / vol
    d2 = (contract.log_moneyness + (params.r + ln_term) * n) / vol
    return _two_normals(contract, params.r, d1, d2, solve_discrete(params), "vg-d")


def _nig_gamma_check(params: ModelParams):
    g = params.gamma
    if not g * params.sigma2 < 3.0:
        raise DomainError(f"NIG formulas need gamma sigma^2 < 3, got {g * params.sigma2:.6g}")
    return g


def approx_nig_c(contract: OptionContract, params: ModelParams) -> PricingResult:
    _require(params, Model.NIG)
    g = _nig_gamma_check(params)
    gap = _gap(params)
    t = contract.horizon
    s2 = 2.0 * gap - (g / 3.0) * gap * gap
    if not s2 > 0:
        raise DomainError(f"NIG-C needs r - mu < 6 / gamma, got r - mu = {gap}")
    factor = 3.0 / (3.0 - g * params.sigma2)
    mu1 = params.mu + math.sqrt(factor) * s2
    s2_1 = factor**1.5 * s2
    d1 = (contract.log_moneyness + mu1 * t) / math.sqrt(s2_1 * t)
    d2 = (contract.log_moneyness + params.mu * t) / math.sqrt(s2 * t)
    # the printed factor uses the real-world alpha, i.e. the keep-alpha measure
    emm = solve_purejump_case(params, NigConvention.KEEP_ALPHA)
    return _two_normals(contract, params.r, d1, d2, emm, "nig-c")


def approx_nig_d(contract: OptionContract, params: ModelParams) -> PricingResult:
    _require(params, Model.NIG)
    g = _nig_gamma_check(params)
    s2 = params.sigma2
    n = contract.horizon
    # (3/g)(1 - sqrt(1 - g s2 / 3)) without cancellation
    ln_term = s2 / (1.0 + math.sqrt(1.0 - g * s2 / 3.0))
    vol = math.sqrt(s2 * n)
    d1 = (contract.log_moneyness + (params.r + ln_term) * n) / vol
    d2 = (contract.log_moneyness + (params.r - ln_term) * n) / vol
    return _two_normals(contract, params.r, d1, d2, solve_discrete(params), "nig-d")


def percentage_difference(approx: PricingResult, baseline: PricingResult) -> float:
    if not baseline.price > 0:
        raise ParameterError(f"baseline price must be positive, got {baseline.price}")
    return 100.0 * (approx.price - baseline.price) / baseline.price


# -- dispatch ------------------------------------------------------------------


def _bs(contract, params):
    return price_black_scholes(contract, params.r, params.sigma2)


PRICERS: dict[str, tuple[Callable, tuple[Model, ...], bool]] = {
    # name: (function(contract, params), models, discrete horizon)
    "bs": (_bs, (Model.GAUSSIAN, Model.VG, Model.NIG), False),
    "vg-exact": (price_vg_exact, (Model.VG,), False),
    "vg-discrete": (price_vg_discrete, (Model.VG,), True),
    "vg-c": (approx_vg_c, (Model.VG,), False),
    "vg-d": (approx_vg_d, (Model.VG,), True),
    "nig-exact": (price_nig_exact, (Model.NIG,), False),
    "nig-discrete": (price_nig_discrete, (Model.NIG,), True),
    "nig-c": (approx_nig_c, (Model.NIG,), False),
    "nig-d": (approx_nig_d, (Model.NIG,), True),
}


def price(contract: OptionContract, params: ModelParams, method: str) -> PricingResult:
    """Price with a named method from :data:`PRICERS`."""
    try:
        fn, models, _ = PRICERS[method]
    except KeyError:
        raise ParameterError(f"unknown method {method!r}; choose from {sorted(PRICERS)}") from None
    if params.model not in models:
        raise ParameterError(f"method {method!r} is not available for the {params.model.value} model")
    return fn(contract, params)
