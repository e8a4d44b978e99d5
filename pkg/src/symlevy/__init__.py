"""Option pricing for log-symmetric Levy models under natural martingale measures.

The return process ``Y`` is a symmetric Levy process (variance gamma or
normal inverse Gaussian) and ``S_t = S_0 exp(Y_t)``.  A *natural* equivalent
martingale measure keeps ``Y`` Levy and its marginals in the same symmetric
family; this package builds those measures, prices European calls with
them, and ships the special functions, distributions and Monte Carlo oracle
needed to check every step.
"""

__version__ = "0.1.0"

from .distributions import (  # noqa: E402
    AsymmetricBessel,
    AsymmetricNIG,
    Normal,
    SymmetricBessel,
    SymmetricNIG,
)
from .emm import (  # noqa: E402
    EmmCase,
    EmmSolution,
    Model,
    ModelParams,
    NigConvention,
    martingale_residual,
    solve_brownian_case,
    solve_discrete,
    solve_purejump_case,
)
from .errors import (  # noqa: E402
    DomainError,
    IntegrationError,
    MeasureChangeError,
    NoNaturalEmmError,
    ParameterError,
    RootFindingError,
    SymLevyError,
)
from .montecarlo import McConfig, McEstimate, mc_price  # noqa: E402
from .pricing import (  # noqa: E402
    OptionContract,
    PricingResult,
    approx_nig_c,
    approx_nig_d,
    approx_vg_c,
    approx_vg_d,
    percentage_difference,
    price_black_scholes,
    price_brownian_component,
    price_nig_discrete,
    price_nig_exact,
    price_vg_discrete,
    price_vg_exact,
)

__all__ = [
    "__version__",
    "AsymmetricBessel", "AsymmetricNIG", "Normal", "SymmetricBessel", "SymmetricNIG",
    "EmmCase", "EmmSolution", "Model", "ModelParams", "NigConvention",
    "martingale_residual", "solve_brownian_case", "solve_discrete", "solve_purejump_case",
    "DomainError", "IntegrationError", "MeasureChangeError", "NoNaturalEmmError",
    "ParameterError", "RootFindingError", "SymLevyError",
    "McConfig", "McEstimate", "mc_price",
    "OptionContract", "PricingResult", "approx_nig_c", "approx_nig_d", "approx_vg_c", "approx_vg_d",
    "percentage_difference", "price_black_scholes", "price_brownian_component",
    "price_nig_discrete", "price_nig_exact", "price_vg_discrete", "price_vg_exact",
]
