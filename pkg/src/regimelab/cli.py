"""Command-line front end.

Six subcommands map onto the solver modules:

    continuation   fixed-policy thresholds (closed form or iterated dominance)
    signaling      threshold bundle of one signalling equilibrium
    welfare-sweep  region / attack / welfare over a theta grid
    compare        welfare under two intervention levels, with verdicts
    simulate       finite-agent Monte Carlo at given fundamentals
    verify         cross-checking suite over a parameter grid

Outputs are CSV (default) or JSON, to stdout or --out. Numbers are written
with 9 significant digits; CSV uses a header row, UTF-8, LF line endings.
Theta grids are written lo:hi:step with both endpoints included and the
count snapped to whole steps, or as a single number. A flat key=value file
passed via --config supplies defaults; explicit flags win. Exit codes:
0 success, 1 verification failures, 2 usage or domain errors.

REGIME_LAB_THREADS (optional) caps the worker threads used to fan out
sweep and simulation rows; output order never depends on it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

from .continuation import (
    SolverConfig,
    attack_mass,
    closed_form_thresholds,
    solve_iterated_dominance,
)
from .errors import DomainError, RegimeLabError
from .model import ModelParams, cost, validate_params
from .signaling import (
    aggregate_attack_no_intervention,
    classify_region,
    ex_post_welfare,
    solve_signaling,
)
from .simulate import SimConfig, simulate_continuation, simulate_signaling
from .statics import compare_welfare
from .verify import DEFAULT_RBAR_GRID, DEFAULT_SIGMA_GRID, run_verify

_COLUMNS = {
    "continuation": ("sigma", "r", "x_cutoff", "theta_cutoff"),
    "signaling": (
        "sigma",
        "rbar",
        "rprime",
        "r_tilde",
        "theta_lower",
        "theta_upper",
        "x_prime",
        "theta_no_attack",
    ),
    "welfare-sweep": ("sigma", "rbar", "rprime", "theta", "region", "attack", "welfare"),
    "compare": (
        "sigma",
        "rbar",
        "rprime",
        "theta",
        "region",
        "attack",
        "welfare",
        "rprime_hi",
        "welfare_hi",
        "verdict",
    ),
    "simulate": (
        "sigma",
        "rbar",
        "mode",
        "r",
        "x_cutoff",
        "theta",
        "n_agents",
        "n_reps",
        "seed",
        "alpha_mean",
        "alpha_hw",
        "fall_freq",
        "welfare_mean",
    ),
    "verify": ("name", "passed", "points", "max_error", "tolerance"),
}


def continuation_welfare(params: ModelParams, r: float, theta: float) -> float:
    """Policymaker welfare when r is exogenous and public.

    The regime is abandoned at or below the fall threshold (paying only the
    policy cost); above it the policymaker nets theta minus the equilibrium
    attack minus the cost. Used as the no-signalling benchmark in sweeps.
    """
    eq = closed_form_thresholds(params, r)
    c = cost(params, r)
    if theta <= eq.theta_cutoff:
        return -c
    return theta - attack_mass(params, eq.x_cutoff, theta) - c


# ---------------------------------------------------------------------------
# parsing helpers


def _parse_float(text: str, label: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise DomainError(f"{label} must be a number, got {text!r}")


def _parse_int(text: str, label: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise DomainError(f"{label} must be an integer, got {text!r}")


def _parse_float_list(text: str, label: str) -> list[float]:
    if text.strip() == "":
        return []
    return [_parse_float(part, label) for part in text.split(",")]


def _parse_theta_spec(text: str) -> list[float]:
    """Parse 'lo:hi:step' (endpoints inclusive, count snapped) or one number."""
    if ":" not in text:
        return [_parse_float(text, "theta")]
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"theta grid must be lo:hi:step, got {text!r}")
    lo = _parse_float(parts[0], "theta grid lo")
    hi = _parse_float(parts[1], "theta grid hi")
    step = _parse_float(parts[2], "theta grid step")
    if step <= 0:
        raise DomainError("theta grid step must be positive")
    if hi < lo:
        raise DomainError("theta grid must have lo <= hi")
    count = int(round((hi - lo) / step))
    return [lo + k * step for k in range(count + 1)]


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                stripped = line.strip()
                if not stripped or stripped.startswith("#"):
                    continue
                if "=" not in stripped:
                    raise DomainError(
                        f"{path}:{lineno}: expected key=value, got {stripped!r}"
                    )
                key, _, value = stripped.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc}")
    return values


class _Options:
    """Flag values merged over config-file values merged over defaults."""

    def __init__(self, ns: argparse.Namespace):
        self._flags = vars(ns)
        config_path = self._flags.get("config")
        self._config = _load_config_file(config_path) if config_path else {}

    def get(self, name: str, default: str | None = None) -> str | None:
        flag = self._flags.get(name)
        if flag is not None:
            return flag
        if name in self._config:
            return self._config[name]
        return default

    def require(self, name: str) -> str:
        value = self.get(name)
        if value is None:
            raise DomainError(f"missing required option --{name.replace('_', '-')}")
        return value


# ---------------------------------------------------------------------------
# output


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _json_value(value):
    if isinstance(value, float):
        return float(f"{value:.9g}")
    return value


def _emit_rows(command: str, rows: list[tuple], fmt: str, out: str | None) -> None:
    columns = _COLUMNS[command]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    else:
        payload = [
            {col: _json_value(v) for col, v in zip(columns, row)} for row in rows
        ]
        if command in ("continuation", "signaling") and len(payload) == 1:
            text = json.dumps(payload[0], indent=2) + "\n"
        else:
            text = json.dumps(payload, indent=2) + "\n"
    _write_text(text, out)


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _thread_cap() -> int:
    raw = os.environ.get("REGIME_LAB_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise DomainError("REGIME_LAB_THREADS must be a positive integer")
    if n < 1:
        raise DomainError("REGIME_LAB_THREADS must be a positive integer")
    return n


def _ordered_map(fn: Callable, items: Sequence) -> list:
    """Map preserving input order, optionally fanning out to worker threads."""
    items = list(items)
    workers = _thread_cap()
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# subcommands


def _params_from(opts: _Options, default_rbar: str | None = None) -> ModelParams:
    sigma = _parse_float(opts.require("sigma"), "sigma")
    raw_rbar = opts.get("rbar", default_rbar)
    if raw_rbar is None:
        raise DomainError("missing required option --rbar")
    return validate_params(sigma, _parse_float(raw_rbar, "rbar"))


def _format_from(opts: _Options, default: str = "csv") -> str:
    fmt = opts.get("format", default)
    if fmt not in ("csv", "json"):
        raise DomainError(f"format must be csv or json, got {fmt!r}")
    return fmt


def _cmd_continuation(opts: _Options) -> int:
    params = _params_from(opts, default_rbar="0.2")
    r = _parse_float(opts.require("r"), "r")
    solver = opts.get("solver", "closed-form")
    if solver == "closed-form":
        eq = closed_form_thresholds(params, r)
    elif solver == "iterated":
        config = SolverConfig(
            tol=_parse_float(opts.get("tol", "1e-9"), "tol"),
            max_iter=_parse_int(opts.get("max_iter", "10000"), "max-iter"),
        )
        eq, _ = solve_iterated_dominance(params, r, config)
    else:
        raise DomainError(f"unknown solver {solver!r}")
    fmt = _format_from(opts)
    out = opts.get("out")
    row = (params.sigma, r, eq.x_cutoff, eq.theta_cutoff)
    if fmt == "json":
        payload = {
            "sigma": _json_value(params.sigma),
            "r": _json_value(r),
            "x_cutoff": _json_value(eq.x_cutoff),
            "theta_cutoff": _json_value(eq.theta_cutoff),
            "solver": solver,
        }
        _write_text(json.dumps(payload, indent=2) + "\n", out)
    else:
        _emit_rows("continuation", [row], "csv", out)
    return 0


def _cmd_signaling(opts: _Options) -> int:
    params = _params_from(opts)
    r_prime = _parse_float(opts.require("rprime"), "rprime")
    eq = solve_signaling(params, r_prime)
    row = (
        params.sigma,
        params.r_lower,
        eq.r_prime,
        eq.r_tilde,
        eq.theta_lower,
        eq.theta_upper,
        eq.x_prime,
        eq.theta_no_attack,
    )
    _emit_rows("signaling", [row], _format_from(opts), opts.get("out"))
    return 0


def _cmd_welfare_sweep(opts: _Options) -> int:
    params = _params_from(opts)
    r_primes = _parse_float_list(opts.require("rprime"), "rprime")
    thetas = _parse_theta_spec(opts.require("theta"))

    def block(r_prime: float) -> list[tuple]:
        eq = solve_signaling(params, r_prime)
        return [
            (
                params.sigma,
                params.r_lower,
                r_prime,
                theta,
                classify_region(eq, theta).value,
                aggregate_attack_no_intervention(params, eq, theta),
                ex_post_welfare(params, eq, theta),
            )
            for theta in thetas
        ]

    rows = [row for rows_block in _ordered_map(block, r_primes) for row in rows_block]
    _emit_rows("welfare-sweep", rows, _format_from(opts), opts.get("out"))
    return 0


def _cmd_compare(opts: _Options) -> int:
    params = _params_from(opts)
    r_low = _parse_float(opts.require("rprime"), "rprime")
    r_high = _parse_float(opts.require("rprime_hi"), "rprime-hi")
    thetas = _parse_theta_spec(opts.require("theta"))
    tol = _parse_float(opts.get("tol", "1e-9"), "tol")
    comparison = compare_welfare(params, r_low, r_high, thetas, tol)
    eq_low = solve_signaling(params, r_low)
    rows = [
        (
            params.sigma,
            params.r_lower,
            r_low,
            theta,
            region.value,
            aggregate_attack_no_intervention(params, eq_low, theta),
            u_low,
            r_high,
            u_high,
            verdict.value,
        )
        for theta, u_low, u_high, region, verdict in zip(
            comparison.theta_grid,
            comparison.u_low,
            comparison.u_high,
            comparison.region_low,
            comparison.verdicts,
        )
    ]
    _emit_rows("compare", rows, _format_from(opts), opts.get("out"))
    return 0


def _cmd_simulate(opts: _Options) -> int:
    params = _params_from(opts)
    thetas = _parse_theta_spec(opts.require("theta"))
    config = SimConfig(
        n_agents=_parse_int(opts.get("agents", "10000"), "agents"),
        n_reps=_parse_int(opts.get("reps", "20"), "reps"),
        master_seed=_parse_int(opts.get("seed", "42"), "seed"),
    )
    raw_rprime = opts.get("rprime")
    raw_r = opts.get("r")
    if raw_rprime is not None and raw_r is not None:
        raise DomainError("pass either --r (continuation) or --rprime (signaling)")

    if raw_rprime is not None:
        mode = "signaling"
        eq = solve_signaling(params, _parse_float(raw_rprime, "rprime"))
        policy, cutoff = eq.r_prime, eq.x_prime
        runner = lambda theta: simulate_signaling(params, eq, theta, config)
    elif raw_r is not None:
        mode = "continuation"
        policy = _parse_float(raw_r, "r")
        raw_cutoff = opts.get("x_cutoff")
        if raw_cutoff is not None:
            cutoff = _parse_float(raw_cutoff, "x-cutoff")
        else:
            cutoff = closed_form_thresholds(params, policy).x_cutoff
        runner = lambda theta: simulate_continuation(params, policy, theta, cutoff, config)
    else:
        raise DomainError("pass either --r (continuation) or --rprime (signaling)")

    outcomes = _ordered_map(runner, thetas)
    rows = [
        (
            params.sigma,
            params.r_lower,
            mode,
            policy,
            cutoff,
            theta,
            config.n_agents,
            config.n_reps,
            config.master_seed,
            outcome.alpha_mean,
            outcome.alpha_halfwidth,
            outcome.fall_frequency,
            outcome.welfare_mean,
        )
        for theta, outcome in zip(thetas, outcomes)
    ]
    _emit_rows("simulate", rows, _format_from(opts), opts.get("out"))
    return 0


def _cmd_verify(opts: _Options) -> int:
    sigmas = _parse_float_list(
        opts.get("sigma", ",".join(str(s) for s in DEFAULT_SIGMA_GRID)), "sigma"
    )
    rbars = _parse_float_list(
        opts.get("rbar", ",".join(str(r) for r in DEFAULT_RBAR_GRID)), "rbar"
    )
    grid = [validate_params(s, rb) for s in sigmas for rb in rbars]
    report = run_verify(grid)
    fmt = _format_from(opts, default="json")
    out = opts.get("out")
    if fmt == "csv":
        rows = [
            (res.name, res.passed, res.points, res.max_error, res.tolerance)
            for res in report.results
        ]
        _emit_rows("verify", rows, "csv", out)
    else:
        _write_text(json.dumps(report.to_dict(), indent=2) + "\n", out)
    if report.n_checks == 0:
        print("verify: 0 checks", file=sys.stderr)
        return 2
    if report.n_failed:
        names = ", ".join(report.failed_names)
        print(
            f"verify: {report.n_failed} of {report.n_checks} checks failed: {names}",
            file=sys.stderr,
        )
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument wiring


def _add_common(parser: argparse.ArgumentParser, *names: str) -> None:
    spec = {
        "sigma": dict(help="signal noise half-width"),
        "rbar": dict(help="baseline policy level in (0,1)"),
        "r": dict(help="policy level of the fixed-policy game"),
        "rprime": dict(help="intervention level(s), comma separated where allowed"),
        "rprime-hi": dict(dest="rprime_hi", help="higher intervention level"),
        "theta": dict(help="fundamental grid, lo:hi:step or a single value"),
        "x-cutoff": dict(dest="x_cutoff", help="override the attack cutoff"),
        "solver": dict(choices=["closed-form", "iterated"], help="threshold solver"),
        "tol": dict(help="tolerance"),
        "max-iter": dict(dest="max_iter", help="iteration budget"),
        "agents": dict(help="agents per replication"),
        "reps": dict(help="number of replications"),
        "seed": dict(help="64-bit master seed"),
        "format": dict(choices=["csv", "json"], help="output format"),
        "out": dict(help="output file (stdout if omitted)"),
        "config": dict(help="flat key=value defaults file; flags win"),
    }
    for name in names:
        parser.add_argument(f"--{name}", **spec[name])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="regimelab",
        description="Equilibrium laboratory for the regime-change signalling game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("continuation", help="fixed-policy equilibrium thresholds")
    _add_common(p, "sigma", "rbar", "r", "solver", "tol", "max-iter", "format", "out", "config")
    p.set_defaults(handler=_cmd_continuation)

    p = sub.add_parser("signaling", help="signalling-equilibrium threshold bundle")
    _add_common(p, "sigma", "rbar", "rprime", "format", "out", "config")
    p.set_defaults(handler=_cmd_signaling)

    p = sub.add_parser("welfare-sweep", help="region/attack/welfare over a theta grid")
    _add_common(p, "sigma", "rbar", "rprime", "theta", "format", "out", "config")
    p.set_defaults(handler=_cmd_welfare_sweep)

    p = sub.add_parser("compare", help="welfare under two intervention levels")
    _add_common(
        p, "sigma", "rbar", "rprime", "rprime-hi", "theta", "tol", "format", "out", "config"
    )
    p.set_defaults(handler=_cmd_compare)

    p = sub.add_parser("simulate", help="finite-agent Monte Carlo")
    _add_common(
        p,
        "sigma",
        "rbar",
        "r",
        "rprime",
        "x-cutoff",
        "theta",
        "agents",
        "reps",
        "seed",
        "format",
        "out",
        "config",
    )
    p.set_defaults(handler=_cmd_simulate)

    p = sub.add_parser("verify", help="run the cross-checking suite")
    _add_common(p, "sigma", "rbar", "format", "out", "config")
    p.set_defaults(handler=_cmd_verify)

    return parser


def run(argv: list[str]) -> int:
    """Parse argv, dispatch, and return the process exit code."""
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return ns.handler(_Options(ns))
    except RegimeLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
