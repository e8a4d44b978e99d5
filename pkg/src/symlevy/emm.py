"""Natural equivalent martingale measures for log-symmetric Levy models.

Under a natural measure ``Q`` the return ``Y_1`` stays in its symmetric
family ``S(., ., psi)`` and the discounted price ``exp(-r t) S_t`` is a
martingale, i.e. ``mu~ + ln psi(-sigma2~ / 2) = r``.  Which parameter moves
depends on the model:

* Brownian component present, or discrete time: the location moves,
  ``mu~ = r - ln psi(-sigma2 / 2)``, and ``Q1`` (the stock-numeraire measure)
  uses ``mu~_1 = r + ln psi(-sigma2 / 2)``;
* pure-jump continuous time: the scale moves, ``sigma2~`` solves
  ``ln psi(-sigma2~ / 2) = r - mu``, which is only possible for ``mu < r``.
  ``Q1`` is then the exponential tilt ``exp(y - r t) f_Q(y)``, an asymmetric
  Bessel law (VG) or an asymmetric NIG law.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .distributions import (
    AsymmetricBessel,
    AsymmetricNIG,
    DistributionSpec,
    Normal,
    SymmetricBessel,
    SymmetricNIG,
)
from .errors import DomainError, NoNaturalEmmError, ParameterError
from .levy_core import BesselGenerator, GaussianGenerator, Generator, NIGGenerator
from .numerics import find_root

__all__ = [
    "Model",
    "EmmCase",
    "NigConvention",
    "ModelParams",
    "EmmSolution",
    "martingale_residual",
    "solve_brownian_case",
    "solve_purejump_case",
    "solve_discrete",
    "purejump_variance_by_root",
]


class Model(str, enum.Enum):
    GAUSSIAN = "gaussian"
    VG = "vg"
    NIG = "nig"


class EmmCase(str, enum.Enum):
    BROWNIAN_SHIFT = "brownian-shift"
    PURE_JUMP_SCALE = "pure-jump-scale"
    DISCRETE_SHIFT = "discrete-shift"


class NigConvention(str, enum.Enum):
    """Which NIG parameter the pure-jump measure change holds fixed.

    ``KEEP_ZETA`` keeps the generator ``psi`` (shape ``zeta = alpha delta``) so
    the martingale relation holds exactly.  ``KEEP_ALPHA`` keeps ``alpha`` and
    sets ``delta~ = alpha sigma2~``; that law has a slightly different
    generator and misses the martingale relation by a small amount.
    """

    KEEP_ZETA = "keep-zeta"
    KEEP_ALPHA = "keep-alpha"


@dataclass(frozen=True)
class ModelParams:
    """Per-unit-time model parameters.

    ``shape`` is ``lam`` for VG and ``zeta = alpha delta`` for NIG (both equal
    ``3 / gamma`` for excess kurtosis ``gamma``) and is ignored for the
    Gaussian model.
    """

    model: Model
    mu: float
    sigma2: float
    shape: float | None = None
    r: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if not self.sigma2 > 0:
            raise ParameterError(f"sigma2 must be positive, got {self.sigma2}")
        if self.model is not Model.GAUSSIAN and not (self.shape is not None and self.shape > 0):
            raise ParameterError(f"{self.model.value} model needs a positive shape, got {self.shape}")

    @classmethod
    def from_kurtosis(cls, model, mu: float, sigma: float, gamma: float, r: float) -> "ModelParams":
        """Build from volatility ``sigma`` and excess kurtosis ``gamma`` (shape = 3 / gamma)."""
        model = Model(model)
        if model is Model.GAUSSIAN:
            return cls(model, mu, sigma * sigma, None, r)
        if not gamma > 0:
            raise ParameterError(f"excess kurtosis gamma must be positive, got {gamma}")
        return cls(model, mu, sigma * sigma, 3.0 / gamma, r)

    @property
    def gamma(self) -> float:
        """Excess kurtosis of ``Y_1``."""
        return 0.0 if self.model is Model.GAUSSIAN else 3.0 / self.shape

    @property
    def alpha(self) -> float:
        """Real-world NIG ``alpha = sqrt(zeta / sigma2)``."""
        self._need(Model.NIG)
        return math.sqrt(self.shape / self.sigma2)

    @property
    def delta(self) -> float:
        self._need(Model.NIG)
        return math.sqrt(self.shape * self.sigma2)

    def _need(self, model):
        if self.model is not model:
            raise ParameterError(f"only defined for the {model.value} model")

    def generator(self) -> Generator:
        if self.model is Model.GAUSSIAN:
            return GaussianGenerator()
        if self.model is Model.VG:
            return BesselGenerator(self.shape)
        return NIGGenerator(self.shape)

    def law(self, mu: float | None = None, sigma2: float | None = None) -> DistributionSpec:
        """Law of ``Y_1`` in this model's family (real-world values by default)."""
        mu = self.mu if mu is None else mu
        sigma2 = self.sigma2 if sigma2 is None else sigma2
        if self.model is Model.GAUSSIAN:
            return Normal(mu, sigma2)
        if self.model is Model.VG:
            return SymmetricBessel(mu, sigma2, self.shape)
        return SymmetricNIG.from_moments(mu, sigma2, self.shape)

    def with_(self, **changes) -> "ModelParams":
        values = dict(model=self.model, mu=self.mu, sigma2=self.sigma2, shape=self.shape, r=self.r)
        values.update(changes)
        return ModelParams(**values)


@dataclass(frozen=True)
class EmmSolution:
    """Laws of ``Y_1`` under ``Q`` and ``Q1`` plus the parameters that define them.

    ``mu1`` and ``sigma2_1`` are the mean and variance of ``Y_1`` under ``Q1``.
    """

    q_law: DistributionSpec
    q1_law: DistributionSpec
    mu_tilde: float
    sigma2_tilde: float
    mu1: float
    sigma2_1: float
    case: EmmCase
    params: ModelParams
    generator: Generator
    diagnostics: dict = field(default_factory=dict, compare=False)

    def residual(self) -> float:
        return martingale_residual(self.mu_tilde, self.sigma2_tilde, self.generator, self.params.r)

    def q_law_at(self, t: float) -> DistributionSpec:
        return self.q_law.at_time(t)

    def q1_law_at(self, t: float) -> DistributionSpec:
        return self.q1_law.at_time(t)

    def as_dict(self) -> dict:
        return {
            "mu_tilde": self.mu_tilde,
            "sigma2_tilde": self.sigma2_tilde,
            "mu1": self.mu1,
            "sigma2_1": self.sigma2_1,
        }


def martingale_residual(mu_t: float, sigma2_t: float, psi: Generator, r: float) -> float:
    """``mu~ + ln psi(-sigma2~ / 2) - r``; zero exactly for a martingale measure."""
    return mu_t + psi.log(-0.5 * sigma2_t) - r


def _log_psi_half(params: ModelParams) -> float:
    psi = params.generator()
    try:
        return psi.log(-0.5 * params.sigma2)
    except DomainError:
        if params.model is Model.VG:
            raise DomainError(
                f"VG exponential moment is infinite: need sigma2 < 2 lam "
                f"(ln argument 1 - sigma2/(2 lam) = {1 - params.sigma2 / (2 * params.shape):.6g} <= 0)"
            ) from None
        raise DomainError(
            f"NIG exponential moment is infinite: need sigma2 <= zeta "
            f"(sigma2={params.sigma2}, zeta={params.shape})"
        ) from None


def _location_shift(params: ModelParams, case: EmmCase) -> EmmSolution:
    lp = _log_psi_half(params)
    mu_q = params.r - lp
    mu_q1 = params.r + lp
    return EmmSolution(
        q_law=params.law(mu_q),
        q1_law=params.law(mu_q1),
        mu_tilde=mu_q,
        sigma2_tilde=params.sigma2,
        mu1=mu_q1,
        sigma2_1=params.sigma2,
        case=case,
        params=params,
        generator=params.generator(),
        diagnostics={"log_psi": lp},
    )


def solve_brownian_case(params: ModelParams) -> EmmSolution:
    """Natural EMM when a Brownian component is present: shift the location only."""
    return _location_shift(params, EmmCase.BROWNIAN_SHIFT)


def solve_discrete(params: ModelParams) -> EmmSolution:
    """Per-period natural EMM in discrete time; exists for any ``mu``."""
    return _location_shift(params, EmmCase.DISCRETE_SHIFT)


def purejump_variance_by_root(params: ModelParams, tol: float = 1e-14) -> float:
    """Solve ``ln psi(-s / 2) = r - mu`` for ``s`` numerically."""
    gap = params.r - params.mu
    psi = params.generator()
    if params.model is Model.VG:
        upper = 2.0 * params.shape
    elif params.model is Model.NIG:
        upper = params.shape
    else:
        raise ParameterError("pure-jump measure change needs a VG or NIG model")

    def g(s):
        try:
            return psi.log(-0.5 * s) - gap
        except (DomainError, ValueError):
            return math.inf

    return find_root(g, (0.0, upper), tol)


def solve_purejump_case(
    params: ModelParams,
    nig_convention: NigConvention | str = NigConvention.KEEP_ZETA,
) -> EmmSolution:
    """Natural EMM for a pure-jump model in continuous time: rescale the jumps.

    Raises :class:`NoNaturalEmmError` unless ``mu < r``.
    """
    nig_convention = NigConvention(nig_convention)
    if params.model is Model.GAUSSIAN:
        raise ParameterError("the Gaussian model has a Brownian component; use solve_brownian_case")
    gap = params.r - params.mu
    if gap < 0:
        raise NoNaturalEmmError(
            f"no natural EMM without a Brownian component when mu >= r (mu={params.mu}, r={params.r}): "
            "a natural measure keeps the location mu and E_Q[exp(Y_1)] >= exp(mu) > exp(r)"
        )
    if gap == 0:
        raise NoNaturalEmmError(
            f"mu == r gives sigma2~ = 0, a degenerate law (mu={params.mu}, r={params.r})"
        )
    mu = params.mu
    diagnostics = {}
    generator = params.generator()
    if params.model is Model.VG:
        lam = params.shape
        growth = math.expm1(gap / lam)  # exp((r - mu)/lam) - 1
        s2 = -2.0 * lam * math.expm1(-gap / lam)
        b = math.sqrt(s2 / (2.0 * lam))
        q_law = SymmetricBessel(mu, s2, lam)
        q1_law = AsymmetricBessel(-b, b, lam - 0.5, mu)
        mu1 = mu + 2.0 * lam * growth
        s2_1 = 2.0 * lam * growth * (2.0 * growth + 1.0)
    else:
        zeta = params.shape
        if gap >= zeta:
            raise DomainError(
                f"NIG natural EMM needs r - mu < zeta (r - mu = {gap}, zeta = {zeta}); "
                "the generator equation has no admissible root"
            )
        s2 = 2.0 * gap - gap * gap / zeta
        if nig_convention is NigConvention.KEEP_ZETA:
            alpha = math.sqrt(zeta / s2)
        else:
            alpha = params.alpha
            if not alpha > 1.0:
                raise DomainError(f"NIG Q1 law needs alpha > 1, got alpha = {alpha}")
        delta = alpha * s2
        q_law = SymmetricNIG(alpha, delta, mu)
        q1_law = AsymmetricNIG(alpha, 1.0, delta, mu)
        ratio = alpha * alpha / (alpha * alpha - 1.0)
        mu1 = mu + math.sqrt(ratio) * s2
        s2_1 = ratio**1.5 * s2
        generator = NIGGenerator(alpha * delta)
    root = purejump_variance_by_root(params)
    diagnostics["sigma2_tilde_root"] = root
    diagnostics["root_gap"] = root - s2
    return EmmSolution(
        q_law=q_law,
        q1_law=q1_law,
        mu_tilde=mu,
        sigma2_tilde=s2,
        mu1=mu1,
        sigma2_1=s2_1,
        case=EmmCase.PURE_JUMP_SCALE,
        params=params,
        generator=generator,
        diagnostics=diagnostics,
    )
