"""Monte Carlo oracle built on subordinated Brownian motion.

Terminal returns are drawn as ``location + sqrt(G) W`` (plus a drift in ``G``
for the asymmetric ``Q1`` laws) with a Gamma subordinator for VG and an
inverse-Gaussian one for NIG.  None of this touches the density or CDF code,
so it is an independent check on the quadrature prices.

Paths are generated in chunks.  Chunk ``i`` draws from its own Philox stream
keyed by ``(seed, i)``, and the per-chunk moments are merged in chunk order,
so results are bit-identical whatever the number of workers.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .distributions import DistributionSpec
from .emm import EmmSolution, Model, ModelParams, solve_brownian_case, solve_discrete, solve_purejump_case
from .errors import ParameterError
from .pricing import OptionContract

__all__ = [
    "Law",
    "McConfig",
    "McEstimate",
    "chunk_rng",
    "default_emm",
    "terminal_law",
    "simulate_terminal",
    "simulate_vg_terminal",
    "simulate_nig_terminal",
    "mc_expectations",
    "mc_expectation",
    "mc_price",
    "mc_exercise_probabilities",
    "martingale_check",
]


class Law(str, enum.Enum):
    P = "P"
    Q = "Q"
    Q1 = "Q1"


@dataclass(frozen=True)
class McConfig:
    """Simulation settings.  With ``antithetic`` each chunk is split into
    mirrored halves, so ``n_paths`` and ``chunk_size`` must be even."""

    n_paths: int = 1_000_000
    seed: int = 0
    antithetic: bool = False
    chunk_size: int = 262_144
    workers: int = 1

    def __post_init__(self):
        if int(self.n_paths) < 1:
            raise ParameterError(f"n_paths must be at least 1, got {self.n_paths}")
        if int(self.chunk_size) < 2:
            raise ParameterError(f"chunk_size must be at least 2, got {self.chunk_size}")
        if int(self.workers) < 1:
            raise ParameterError(f"workers must be at least 1, got {self.workers}")
        if not 0 <= int(self.seed) < 2**64:
            raise ParameterError(f"seed must fit in 64 bits, got {self.seed}")
        if self.antithetic and (self.n_paths % 2 or self.chunk_size % 2):
            raise ParameterError("antithetic sampling needs even n_paths and chunk_size")

    def chunks(self) -> list[tuple[int, int]]:
        """``(index, size)`` for every chunk."""
        full, rest = divmod(int(self.n_paths), int(self.chunk_size))
        out = [(i, int(self.chunk_size)) for i in range(full)]
        if rest:
            out.append((full, rest))
        return out


@dataclass(frozen=True)
class McEstimate:
    """Sample mean with its standard error.

    Under antithetic sampling the error is computed from the pair averages,
    which are the independent units.
    """

    value: float
    std_error: float
    n_paths: int

    def z_score(self, target: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if self.value == target else math.inf
        return (self.value - target) / self.std_error

    def within(self, target: float, n_se: float = 3.0) -> bool:
        return abs(self.value - target) <= n_se * self.std_error


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    """Independent counter-based stream for chunk ``index``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


def default_emm(params: ModelParams, time: str = "continuous") -> EmmSolution:
    """Natural EMM used for simulation: pure-jump scaling in continuous time
    (location shift for the Gaussian model), location shift in discrete time."""
    if time == "discrete":
        return solve_discrete(params)
    if time != "continuous":
        raise ParameterError(f"time must be 'continuous' or 'discrete', got {time!r}")
    if params.model is Model.GAUSSIAN:
        return solve_brownian_case(params)
    return solve_purejump_case(params)


def terminal_law(params: ModelParams, law: Law | str, t: float, emm: EmmSolution | None = None) -> DistributionSpec:
    """Law of ``Y_t`` under ``P``, ``Q`` or ``Q1``."""
    if not t > 0:
        raise ParameterError(f"t must be positive, got {t}")
    law = Law(law)
    if law is Law.P:
        return params.law().at_time(t)
    emm = default_emm(params) if emm is None else emm
    return emm.q_law_at(t) if law is Law.Q else emm.q1_law_at(t)


def _map_chunks(fn: Callable[[np.random.Generator, int], object], config: McConfig) -> list:
    chunks = config.chunks()
    run = lambda spec: fn(chunk_rng(config.seed, spec[0]), spec[1])  # noqa: E731
    if config.workers == 1 or len(chunks) == 1:
        return [run(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=int(config.workers)) as pool:
        return list(pool.map(run, chunks))  # map keeps chunk order


def simulate_terminal(law: DistributionSpec, config: McConfig) -> np.ndarray:
    """``config.n_paths`` draws of ``law``."""
    parts = _map_chunks(lambda rng, n: law.draw(rng, n, config.antithetic), config)
    return np.concatenate(parts)


def _check_model(params: ModelParams, model: Model):
    if params.model is not model:
        raise ParameterError(f"expected the {model.value} model, got {params.model.value}")


def simulate_vg_terminal(
    params: ModelParams, law: Law | str, t: float, config: McConfig, emm: EmmSolution | None = None
) -> np.ndarray:
    _check_model(params, Model.VG)
    return simulate_terminal(terminal_law(params, law, t, emm), config)


def simulate_nig_terminal(
    params: ModelParams, law: Law | str, t: float, config: McConfig, emm: EmmSolution | None = None
) -> np.ndarray:
    _check_model(params, Model.NIG)
    return simulate_terminal(terminal_law(params, law, t, emm), config)


def _merge(parts):
    # Chan et al. pairwise update of (count, mean, M2), applied in chunk order
    n, mean, m2 = parts[0]
    for nb, mb, m2b in parts[1:]:
        total = n + nb
        delta = mb - mean
        mean = mean + delta * nb / total
        m2 = m2 + m2b + delta * delta * n * nb / total
        n = total
    return n, mean, m2


def mc_expectations(
    law: DistributionSpec,
    statistics: Mapping[str, Callable[[np.ndarray], np.ndarray]],
    config: McConfig,
) -> dict[str, McEstimate]:
    """``E[f(Y)]`` for each named ``f``, estimated from one shared sample of ``law``."""
    names = list(statistics)

    def chunk(rng, n):
        y = law.draw(rng, n, config.antithetic)
        out = []
        for name in names:
            v = np.asarray(statistics[name](y), dtype=float)
            if config.antithetic:
                h = n // 2
                v = 0.5 * (v[:h] + v[h:])
            m = float(np.mean(v))
            out.append((v.size, m, float(np.sum((v - m) ** 2))))
        return out

    per_chunk = _map_chunks(chunk, config)
    result = {}
    for k, name in enumerate(names):
        units, mean, m2 = _merge([c[k] for c in per_chunk])
        var = m2 / (units - 1) if units > 1 else 0.0
        result[name] = McEstimate(mean, math.sqrt(var / units), int(config.n_paths))
    return result


def mc_expectation(law: DistributionSpec, statistic: Callable[[np.ndarray], np.ndarray], config: McConfig) -> McEstimate:
    return mc_expectations(law, {"value": statistic}, config)["value"]


def mc_price(
    contract: OptionContract,
    params: ModelParams,
    config: McConfig = McConfig(),
    emm: EmmSolution | None = None,
) -> McEstimate:
    """Discounted payoff ``exp(-r T) E_Q[(S_T - K)^+]`` under the ``Q``-law sampler."""
    t = contract.horizon
    law = terminal_law(params, Law.Q, t, emm)
    disc = math.exp(-params.r * t)
    s0, k = contract.s0, contract.strike
    return mc_expectation(law, lambda y: disc * np.maximum(s0 * np.exp(y) - k, 0.0), config)


def mc_exercise_probabilities(
    contract: OptionContract,
    params: ModelParams,
    config: McConfig = McConfig(),
    emm: EmmSolution | None = None,
) -> dict[str, McEstimate]:
    """``Q(S_T > K)`` and ``Q1(S_T > K)``, the latter by weights ``exp(Y - r T)``
    on ``Q`` draws; ``weight`` is the mean weight (1 for a martingale measure)."""
    t = contract.horizon
    law = terminal_law(params, Law.Q, t, emm)
    x = -contract.log_moneyness
    rt = params.r * t
    return mc_expectations(
        law,
        {
            "prob_q": lambda y: (y > x).astype(float),
            "prob_q1": lambda y: np.where(y > x, np.exp(y - rt), 0.0),
            "weight": lambda y: np.exp(y - rt),
        },
        config,
    )


def martingale_check(
    params: ModelParams, t: float, config: McConfig = McConfig(), emm: EmmSolution | None = None
) -> McEstimate:
    """Estimate of ``exp(-r t) E_Q[S_t] / S_0``; equals 1 under a martingale measure."""
    law = terminal_law(params, Law.Q, t, emm)
    rt = params.r * t
    return mc_expectation(law, lambda y: np.exp(y - rt), config)
