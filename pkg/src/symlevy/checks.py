"""Self-verification suite behind ``symlevy verify``.

Each check returns a :class:`CheckResult` with the measured quantity and the
threshold it was held to, so a report shows how close every check came.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .emm import Model, ModelParams, solve_purejump_case
from .levy_core import (
    BesselGenerator,
    NIGGenerator,
    TripletGenerator,
    natural_change,
    nig_triplet,
    vg_triplet,
)
from .montecarlo import McConfig, martingale_check
from .numerics import integrate
from .pricing import (
    OptionContract,
    approx_nig_c,
    approx_nig_d,
    approx_vg_c,
    approx_vg_d,
    price_black_scholes,
)
from .tables import PUBLISHED, TABLE_WEEKS, table_rows

__all__ = ["CheckResult", "random_params", "CHECKS", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status}  {self.name}: measured {self.measured:.3g} (threshold {self.threshold:.3g})"
        return f"{text}  {self.detail}" if self.detail else text


def random_params(model: Model | str, rng: np.random.Generator) -> ModelParams:
    """Random valid pure-jump parameter set with ``mu < r``."""
    model = Model(model)
    r = rng.uniform(0.0, 0.12)
    mu = r - rng.uniform(0.005, 0.1)
    sigma = rng.uniform(0.08, 0.45)
    gamma = rng.uniform(0.2, 6.0)
    if model is Model.NIG:
        gamma = min(gamma, 2.5 / sigma**2)  # keep alpha > 1
    return ModelParams.from_kurtosis(model, mu, sigma, gamma, r)


def check_martingale_residual(seed: int = 0, n_sets: int = 20) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for model in (Model.VG, Model.NIG):
        for _ in range(n_sets):
            worst = max(worst, abs(solve_purejump_case(random_params(model, rng)).residual()))
    return CheckResult("martingale residual (VG, NIG; random sets)", worst < 1e-10, worst, 1e-10,
                       f"{n_sets} sets per model")


def check_mc_martingale(seed: int = 0, n_paths: int = 1_000_000) -> list[CheckResult]:
    out = []
    for model in (Model.VG, Model.NIG):
        params = ModelParams.from_kurtosis(model, 0.03, 0.19, 4.0, 0.06)
        for t in (0.25, 1.0, 2.0):
            est = martingale_check(params, t, McConfig(n_paths=n_paths, seed=seed))
            dev = abs(est.value - 1.0)
            out.append(CheckResult(
                f"MC martingale {model.value} T={t:g}: |mean(exp(-rT) S_T)/S_0 - 1|",
                dev <= 3.0 * est.std_error, dev, 3.0 * est.std_error, f"SE {est.std_error:.3g}",
            ))
    return out


def _sup_gap(a: Callable[[float], float], b: Callable[[float], float], grid) -> float:
    return max(abs(a(v) - b(v)) for v in grid)


def check_generator_invariance() -> list[CheckResult]:
    grid = np.linspace(0.0, 10.0, 41)
    fixtures = [
        ("VG", vg_triplet(0.03, 0.0361, 0.75), BesselGenerator(0.75)),
        ("NIG", nig_triplet(0.03, math.sqrt(0.75 / 0.0361), math.sqrt(0.75 * 0.0361)), NIGGenerator(0.75)),
    ]
    out = []
    for name, triplet, psi in fixtures:
        sigma2 = triplet.variance()
        for beta in (0.5, 0.9, 1.3):
            changed = natural_change(triplet, beta=beta)
            s2 = changed.variance()
            psi_new = TripletGenerator(changed, s2)
            gap = _sup_gap(psi_new, psi, grid)
            sigma_gap = abs(math.sqrt(s2) - beta * math.sqrt(sigma2))
            ok = gap < 1e-6 and sigma_gap < 1e-7
            out.append(CheckResult(
                f"generator invariance {name} beta={beta}: sup|psi~ - psi| on [0, 10]",
                ok, gap, 1e-6, f"|sigma~ - beta sigma| = {sigma_gap:.2g}",
            ))
    return out


def check_q1_density() -> list[CheckResult]:
    out = []
    for model in (Model.VG, Model.NIG):
        params = ModelParams.from_kurtosis(model, 0.03, 0.19, 4.0, 0.06)
        emm = solve_purejump_case(params)
        for t in (0.25, 1.0):
            q, q1 = emm.q_law_at(t), emm.q1_law_at(t)
            rt = params.r * t
            loc = params.mu * t
            sd = math.sqrt(q.variance)

            def tilted(y, q=q, rt=rt):
                lp = q.logpdf_scalar(y)
                return math.exp(y - rt + lp) if lp > -math.inf else 0.0

            edges = [-math.inf, loc - sd, loc, loc + sd, math.inf]
            mass = sum(integrate(tilted, a, b) for a, b in zip(edges[:-1], edges[1:]))
            grid = loc + sd * np.linspace(-4.0, 4.0, 50)
            grid = grid[np.abs(grid - loc) > 1e-9]  # the Bessel density may be infinite at loc
            point = max(abs(tilted(y) - q1.pdf(y)) for y in grid)
            out.append(CheckResult(
                f"Q1 density {model.value} T={t:g}: |int exp(y - rT) f_Q - 1|",
                abs(mass - 1.0) < 1e-7 and point < 1e-7, abs(mass - 1.0), 1e-7,
                f"pointwise gap {point:.2g}",
            ))
    return out


def check_black_scholes_limit(gamma: float = 1e-6) -> CheckResult:
    sigma, r = 0.19, 0.06
    mu = r - 0.5 * sigma**2
    worst = 0.0
    for t in (2 / 52, 0.5, 1.0):
        c = OptionContract(10.0, 10.0, t)
        bs = price_black_scholes(c, r, sigma**2).price
        vg = ModelParams.from_kurtosis("vg", mu, sigma, gamma, r)
        nig = ModelParams.from_kurtosis("nig", mu, sigma, gamma, r)
        for fn, p in ((approx_vg_c, vg), (approx_vg_d, vg), (approx_nig_c, nig), (approx_nig_d, nig)):
            worst = max(worst, abs(fn(c, p).price - bs))
    return CheckResult(f"Black-Scholes limit at gamma={gamma:g}", worst < 1e-4, worst, 1e-4)


def check_tables() -> list[CheckResult]:
    out = []
    for table_id in (1, 2):
        rows = table_rows(table_id, TABLE_WEEKS)
        price_gap = pct_gap = 0.0
        for col, ref in PUBLISHED[table_id].items():
            gap = max(abs(row[col] - v) for row, v in zip(rows, ref))
            if col.endswith("pct_diff"):
                pct_gap = max(pct_gap, gap)
            else:
                price_gap = max(price_gap, gap)
        out.append(CheckResult(f"table {table_id} prices vs published", price_gap <= 0.005, price_gap, 0.005))
        out.append(CheckResult(f"table {table_id} % differences vs published", pct_gap <= 0.3, pct_gap, 0.3))
    return out


CHECKS = {
    "residual": lambda cfg: [check_martingale_residual(cfg["seed"])],
    "mc-martingale": lambda cfg: check_mc_martingale(cfg["seed"], cfg["paths"]),
    "generator": lambda cfg: check_generator_invariance(),
    "q1-density": lambda cfg: check_q1_density(),
    "bs-limit": lambda cfg: [check_black_scholes_limit()],
    "tables": lambda cfg: check_tables(),
}


def run_checks(names=None, seed: int = 0, paths: int = 1_000_000) -> list[CheckResult]:
    names = list(CHECKS) if names is None else list(names)
    cfg = {"seed": seed, "paths": paths}
    results = []
    for name in names:
        results.extend(CHECKS[name](cfg))
    return results
