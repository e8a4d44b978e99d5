"""Command-line front end.

Subcommands: ``price``, ``table``, ``figure``, ``emm``, ``dist`` and
``verify``.  Options may also come from a JSON file given with ``--config``;
flags on the command line override values from the file.  Relative output
paths are resolved against ``$SYMLEVY_OUTPUT_DIR`` when it is set.

Exit codes: 0 success, 1 numerical failure, 2 invalid configuration or no
natural martingale measure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

from . import __version__
from .checks import CHECKS, run_checks
from .distributions import AsymmetricBessel, AsymmetricNIG, Normal, SymmetricBessel, SymmetricNIG
from .emm import Model, ModelParams, NigConvention, solve_brownian_case, solve_discrete, solve_purejump_case
from .errors import IntegrationError, NoNaturalEmmError, ParameterError, RootFindingError, SymLevyError
from .montecarlo import McConfig, mc_price
from .pricing import PRICERS, OptionContract, price, price_nig_exact
from .tables import COLUMNS, TableSetup, figure_rows, rounded, table_rows

OUTPUT_DIR_ENV = "SYMLEVY_OUTPUT_DIR"

DEFAULTS = {
    "model": "vg",
    "method": None,
    "s0": 10.0,
    "strike": 10.0,
    "r": 0.06,
    "mu": 0.03,
    "sigma": 0.19,
    "gamma": 4.0,
    "shape": None,
    "t": [1.0],
    "time_unit": "years",
    "discrete_unit": "years",
    "paths": 1_000_000,
    "seed": 0,
    "antithetic": False,
    "nig_convention": NigConvention.KEEP_ZETA.value,
    "output": None,
    "output_path": None,
    "table": 1,
    "max_weeks": 52,
    "time": "continuous",
    "law": "bessel",
    "at": [0.0],
    "checks": None,
}

_DEFAULT_METHODS = {"gaussian": ["bs"], "vg": ["bs", "vg-exact", "vg-c", "vg-d"], "nig": ["bs", "nig-exact", "nig-c", "nig-d"]}


class ConfigError(SymLevyError, ValueError):
    """Invalid command-line or file configuration."""


# -- configuration -------------------------------------------------------------


def _csv_list(kind):
    def parse(text):
        try:
            return [kind(x) for x in str(text).replace(",", " ").split()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return parse


def _add_common(p: argparse.ArgumentParser, fmt_default: str):
    p.add_argument("--config", type=Path, help="JSON file with option values; flags override it")
    p.add_argument("--output", choices=["human", "json", "csv"], help=f"output format (default {fmt_default})")
    p.add_argument("--output-path", dest="output_path", help="write output to this file instead of stdout")
    p.add_argument("--seed", type=int, help="seed for every stochastic step (default 0)")
    p.set_defaults(output_default=fmt_default)


def _add_model(p: argparse.ArgumentParser):
    p.add_argument("--model", choices=[m.value for m in Model])
    p.add_argument("--r", type=float, help="risk-free rate per unit time")
    p.add_argument("--mu", type=float, help="location of Y_1 per unit time")
    p.add_argument("--sigma", type=float, help="volatility, sqrt of the variance of Y_1")
    p.add_argument("--gamma", type=float, help="excess kurtosis; shape = 3 / gamma")
    p.add_argument("--lam", "--zeta", "--shape", dest="shape", type=float,
                   help="shape lambda (VG) or zeta (NIG) directly; overrides --gamma")
    p.add_argument("--nig-convention", dest="nig_convention", choices=[c.value for c in NigConvention])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="symlevy", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("price", help="price European calls")
    _add_common(p, "human")
    _add_model(p)
    p.add_argument("--method", type=_csv_list(str), help=f"comma list of {sorted(PRICERS) + ['mc']}")
    p.add_argument("--s0", type=float)
    p.add_argument("--strike", type=float)
    p.add_argument("--t", type=_csv_list(float), help="maturities, comma separated")
    p.add_argument("--time-unit", dest="time_unit", choices=["years", "weeks"],
                   help="unit of --t; weeks are converted with 52 per year")
    p.add_argument("--discrete-unit", dest="discrete_unit", choices=["years", "weeks"],
                   help="period of the discrete-time formulas (default years: N = T)")
    p.add_argument("--paths", type=int, help="Monte Carlo paths for method mc")
    p.add_argument("--antithetic", action="store_const", const=True)

    for name, help_text in (("table", "reproduce a price table"), ("figure", "weekly series behind a figure")):
        p = sub.add_parser(name, help=help_text)
        _add_common(p, "csv")
        p.add_argument("--table", type=int, choices=[1, 2])
        p.add_argument("--discrete-unit", dest="discrete_unit", choices=["years", "weeks"])
        if name == "figure":
            p.add_argument("--max-weeks", dest="max_weeks", type=int)

    p = sub.add_parser("emm", help="solve for the natural martingale measures")
    _add_common(p, "human")
    _add_model(p)
    p.add_argument("--time", choices=["continuous", "discrete", "brownian"])

    p = sub.add_parser("dist", help="evaluate a distribution")
    _add_common(p, "human")
    p.add_argument("--law", choices=["normal", "bessel", "abessel", "snig", "nig"])
    for flag in ("mu", "sigma2", "lam", "a", "b", "m", "shift", "alpha", "beta", "delta"):
        p.add_argument(f"--{flag}", dest=f"d_{flag}", type=float)
    p.add_argument("--at", type=_csv_list(float), help="points for pdf / cdf / sf")
    p.add_argument("--sample", type=int, default=0, help="also report moments of this many draws")

    p = sub.add_parser("verify", help="run the self-check suite")
    _add_common(p, "human")
    p.add_argument("--checks", type=_csv_list(str), help=f"subset of {list(CHECKS)}")
    p.add_argument("--paths", type=int)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Defaults, then the ``--config`` file, then explicit flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        for key in ("t", "at", "method", "checks"):
            if key in data and not isinstance(data[key], list) and data[key] is not None:
                data[key] = [data[key]]
        cfg.update(data)
    for key, value in vars(args).items():
        if value is not None and key not in ("config", "output_default"):
            cfg[key] = value
    if cfg["output"] is None:
        cfg["output"] = args.output_default
    return cfg


def model_params(cfg: dict) -> ModelParams:
    try:
        model = Model(cfg["model"])
        sigma = float(cfg["sigma"])
        if not sigma > 0:
            raise ConfigError(f"--sigma must be positive, got {sigma}")
        if model is Model.GAUSSIAN:
            return ModelParams(model, float(cfg["mu"]), sigma * sigma, None, float(cfg["r"]))
        if cfg["shape"] is not None:
            return ModelParams(model, float(cfg["mu"]), sigma * sigma, float(cfg["shape"]), float(cfg["r"]))
        return ModelParams.from_kurtosis(model, float(cfg["mu"]), sigma, float(cfg["gamma"]), float(cfg["r"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SymLevyError):
            raise
        raise ConfigError(f"invalid model parameters: {exc}") from None


# -- rendering -------------------------------------------------------------------


def _flatten(row: dict) -> dict:
    flat = {}
    for k, v in row.items():
        if isinstance(v, dict):
            for k2, v2 in v.items():
                flat[f"{k}_{k2}"] = v2
        else:
            flat[k] = v
    return flat


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)  # locale-independent, round-trips
    return "" if v is None else str(v)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2) + "\n"
    flat = [_flatten(r) for r in rows]
    fields = []
    for r in flat:
        fields.extend(k for k in r if k not in fields)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(fields)
        for r in flat:
            writer.writerow([_fmt(r.get(k)) for k in fields])
        return buf.getvalue()
    cells = [[(f"{r[k]:.6g}" if isinstance(r.get(k), float) else _fmt(r.get(k))) for k in fields] for r in flat]
    widths = [max(len(f), *(len(c[i]) for c in cells)) if cells else len(f) for i, f in enumerate(fields)]
    lines = ["  ".join(f.rjust(w) for f, w in zip(fields, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(cell, widths)) for cell in cells]
    return "\n".join(lines) + "\n"


def emit(text: str, cfg: dict) -> None:
    path = cfg.get("output_path")
    if not path:
        sys.stdout.write(text)
        return
    path = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


# -- commands --------------------------------------------------------------------


def _maturities(cfg: dict) -> list[float]:
    per_year = 52.0 if cfg["time_unit"] == "weeks" else 1.0
    out = [float(t) / per_year for t in cfg["t"]]
    if any(not t > 0 for t in out):
        raise ConfigError("maturities must be positive")
    return out


def cmd_price(cfg: dict) -> list[dict]:
    params = model_params(cfg)
    methods = cfg["method"] or _DEFAULT_METHODS[params.model.value]
    for m in methods:
        if m != "mc" and m not in PRICERS:
            raise ConfigError(f"unknown method {m!r}; choose from {sorted(PRICERS) + ['mc']}")
        if m != "mc" and params.model not in PRICERS[m][1]:
            raise ConfigError(f"method {m!r} is not available for model {params.model.value!r}")
    weekly = params.with_(mu=params.mu / 52, sigma2=params.sigma2 / 52, r=params.r / 52)
    rows = []
    for t in _maturities(cfg):
        for m in methods:
            contract = OptionContract(float(cfg["s0"]), float(cfg["strike"]), t)
            row = {"model": params.model.value, "method": m, "maturity": t}
            if m == "mc":
                est = mc_price(contract, params, McConfig(
                    n_paths=int(cfg["paths"]), seed=int(cfg["seed"]), antithetic=bool(cfg["antithetic"])))
                row.update(price=est.value, std_error=est.std_error, n_paths=est.n_paths)
                rows.append(row)
                continue
            if PRICERS[m][2] and cfg["discrete_unit"] == "weeks":
                contract = OptionContract(contract.s0, contract.strike, t * 52.0)
                res = price(contract, weekly, m)
            elif m == "nig-exact":
                res = price_nig_exact(contract, params, cfg["nig_convention"])
            else:
                res = price(contract, params, m)
            row.update(price=res.price, prob_q1=res.prob_q1, prob_q=res.prob_q,
                       emm=res.emm.as_dict() if res.emm is not None else None)
            rows.append(row)
    return rows


def _table_setup(cfg: dict) -> TableSetup:
    return TableSetup(discrete_unit=cfg["discrete_unit"])


def _table_output(rows: list[dict]) -> list[dict]:
    out = []
    for row in rows:
        r = rounded(row)
        r["weeks"] = int(row["weeks"])
        for k in COLUMNS[1:]:
            r[f"{k}_full"] = row[k]
        out.append(r)
    return out


def cmd_table(cfg: dict) -> list[dict]:
    return _table_output(table_rows(int(cfg["table"]), setup=_table_setup(cfg)))


def cmd_figure(cfg: dict) -> list[dict]:
    return _table_output(figure_rows(int(cfg["table"]), _table_setup(cfg), int(cfg["max_weeks"])))


def cmd_emm(cfg: dict) -> list[dict]:
    params = model_params(cfg)
    if cfg["time"] == "discrete":
        sol = solve_discrete(params)
    elif cfg["time"] == "brownian" or params.model is Model.GAUSSIAN:
        sol = solve_brownian_case(params)
    else:
        sol = solve_purejump_case(params, cfg["nig_convention"])
    row = {"model": params.model.value, "case": sol.case.value}
    row.update(sol.as_dict())
    row.update(residual=sol.residual(), q_law=repr(sol.q_law), q1_law=repr(sol.q1_law))
    return [row]


_LAWS = {
    "normal": (Normal, ("mu", "sigma2")),
    "bessel": (SymmetricBessel, ("mu", "sigma2", "lam")),
    "abessel": (AsymmetricBessel, ("a", "b", "m", "shift")),
    "snig": (SymmetricNIG, ("alpha", "delta", "mu")),
    "nig": (AsymmetricNIG, ("alpha", "beta", "delta", "mu")),
}
_DIST_DEFAULTS = {"mu": 0.0, "shift": 0.0}


def cmd_dist(cfg: dict) -> list[dict]:
    cls, names = _LAWS[cfg["law"]]
    kwargs = {}
    for name in names:
        value = cfg.get(f"d_{name}")
        if value is None:
            value = _DIST_DEFAULTS.get(name)
        if value is None:
            raise ConfigError(f"law {cfg['law']!r} needs --{name}")
        kwargs[name] = value
    law = cls(**kwargs)
    mean, var, skew, kurt = law.moments()
    rows = [{"y": float(y), "pdf": float(law.pdf(y)), "cdf": float(law.cdf(y)), "sf": float(law.sf(y))}
            for y in cfg["at"]]
    summary = {"y": None, "mean": mean, "variance": var, "skewness": skew, "kurtosis": kurt}
    n = int(cfg.get("sample") or 0)
    if n > 1:
        x = law.sample(int(cfg["seed"]), n)
        m = float(x.mean())
        summary.update(sample_mean=m, sample_variance=float(x.var(ddof=1)))
    return rows + [summary]


def cmd_verify(cfg: dict):
    names = cfg["checks"] or list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
    results = run_checks(names, seed=int(cfg["seed"]), paths=int(cfg["paths"]))
    return results


COMMANDS = {
    "price": cmd_price,
    "table": cmd_table,
    "figure": cmd_figure,
    "emm": cmd_emm,
    "dist": cmd_dist,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        result = COMMANDS[args.command](cfg)
        if args.command == "verify":
            if cfg["output"] == "human":
                text = "\n".join(r.line() for r in result) + "\n"
            else:
                text = render([{"name": r.name, "passed": r.passed, "measured": r.measured,
                                "threshold": r.threshold, "detail": r.detail} for r in result], cfg["output"])
            emit(text, cfg)
            return 0 if all(r.passed for r in result) else 1
        emit(render(result, cfg["output"]), cfg)
        return 0
    except NoNaturalEmmError as exc:
        print(f"error: no natural martingale measure: {exc}", file=sys.stderr)
        print("hint: pure-jump models in continuous time need mu < r; "
              "discrete-time methods (vg-d, nig-d, *-discrete) always have one", file=sys.stderr)
        return 2
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (IntegrationError, RootFindingError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
