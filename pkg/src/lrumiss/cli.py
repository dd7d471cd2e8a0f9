"""Command-line entry point: ``lrumiss <command> [options]``.

Every command writes a CSV table (header row, LF endings, 6 significant
digits) to ``--output`` or stdout; one-line summaries go to stderr.
Exit status is 0 on success, 2 for a bad configuration and 3 when a model
evaluation leaves its numeric domain.
"""
from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import asymptotics, model, ratio
from .sim import analysis, trace as tracemod
from .specfun import DomainError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

COMMANDS = ("predict", "simulate", "compare", "ratio", "ratio-max", "slope")
DEFAULT_STEP = 0.01
DEFAULT_RATIO_GRID = "0.01:0.99:0.01"
DEFAULT_SEED = 2024
DEFAULT_A_GRID = tuple(round(0.1 * k, 1) for k in range(1, 31)) + (5.0, 10.0, 100.0)


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    a: Optional[float] = None
    exponents: list = field(default_factory=list)
    N: Optional[int] = None
    trace_length: Optional[int] = None
    seed: int = DEFAULT_SEED
    cache_sizes: list = field(default_factory=list)
    ratio_grid: Optional[np.ndarray] = None
    output_path: Optional[str] = None
    binning: float = analysis.DEFAULT_BINNING
    trace_in: Optional[str] = None
    trace_out: Optional[str] = None
    window: bool = False
    warmup: int = 0

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.a is not None and not (self.a >= 0 or math.isinf(self.a)):
            raise ConfigError(f"exponent must be >= 0, got {self.a}")
        for name in ("N", "trace_length"):
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ConfigError(f"{name} must be positive, got {value}")
        if any(d < 1 for d in self.cache_sizes):
            raise ConfigError("cache sizes must be positive")
        if not self.binning > 0:
            raise ConfigError(f"binning must be positive, got {self.binning}")
        if self.warmup < 0:
            raise ConfigError(f"warmup must be >= 0, got {self.warmup}")
        return self


# --- argument parsing ------------------------------------------------------

def parse_ratio_grid(text: str) -> np.ndarray:
    """``lo:hi:step`` to an inclusive grid strictly inside (0, 1)."""
    try:
        lo, hi, step = (float(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError(f"ratio grid must look like lo:hi:step, got {text!r}") from None
    if not (step > 0 and 0 < lo <= hi < 1):
        raise ConfigError(f"ratio grid must satisfy 0 < lo <= hi < 1 and step > 0, got {text!r}")
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(n), 12)


def _exponent(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrumiss", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, exponent=True, repeat_a=False, alphabet=True):
        if exponent:
            if repeat_a:
                p.add_argument("-a", "--exponent", type=_exponent, action="append",
                               dest="exponents", help="power-law exponent (repeatable)")
            else:
                p.add_argument("-a", "--exponent", type=_exponent, dest="a",
                               help="power-law exponent ('inf' allowed for ratio)")
        if alphabet:
            p.add_argument("-N", "--addresses", type=int, dest="N", help="alphabet size")
        p.add_argument("-o", "--output", dest="output_path", help="CSV path (default stdout)")

    def trace_opts(p):
        p.add_argument("-L", "--trace-length", type=int, dest="trace_length")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--trace-in", dest="trace_in", help="read the trace from this file")
        p.add_argument("--trace-out", dest="trace_out", help="save the generated trace")
        p.add_argument("--warmup", type=int, default=0,
                       help="accesses simulated but not counted in miss rates")

    p = sub.add_parser("predict", help="analytic WS, P_reref, LRU and static miss rates")
    common(p)
    p.add_argument("--cache-size", type=int, action="append", dest="cache_sizes", default=[])
    p.add_argument("--ratio-grid", dest="ratio_grid")

    p = sub.add_parser("simulate", help="measured curves of an IRM trace")
    common(p)
    trace_opts(p)
    p.add_argument("--cache-size", type=int, action="append", dest="cache_sizes", default=[])
    p.add_argument("--window", action="store_true", help="add the sliding-window working set")
    p.add_argument("--binning", type=float, default=analysis.DEFAULT_BINNING)

    p = sub.add_parser("compare", help="analytic vs simulated miss rates over cache ratios")
    common(p)
    trace_opts(p)
    p.add_argument("--ratio-grid", dest="ratio_grid", default=DEFAULT_RATIO_GRID)

    p = sub.add_parser("ratio", help="F_a over a cache-ratio grid")
    common(p, alphabet=False)
    p.add_argument("--ratio-grid", dest="ratio_grid", default=DEFAULT_RATIO_GRID)

    p = sub.add_parser("ratio-max", help="maximum of F_a for each exponent")
    common(p, repeat_a=True, alphabet=False)

    p = sub.add_parser("slope", help="log-log working-set slope at the origin")
    common(p)
    return parser


def config_from_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = vars(ns)
    grid = values.pop("ratio_grid", None)
    cfg = RunConfig(**{k: v for k, v in values.items() if v is not None})
    cfg.ratio_grid = parse_ratio_grid(grid) if grid else None
    cfg.exponents = list(cfg.exponents or [])
    return cfg.validate()


# --- output ----------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.6g}"


def write_csv(out, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def _note(message: str) -> None:
    print(message, file=sys.stderr)


# --- commands --------------------------------------------------------------

def _require(cfg: RunConfig, *names: str) -> None:
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigError(f"{cfg.command} needs {', '.join(missing)}")


def _law(cfg: RunConfig) -> model.PowerLaw:
    _require(cfg, "a", "N")
    if math.isinf(cfg.a):
        raise ConfigError("an infinite exponent is only meaningful for the ratio command")
    return model.PowerLaw(cfg.a, cfg.N)


def _log_sizes(N: int, step: float = DEFAULT_STEP) -> np.ndarray:
    x = np.arange(0.0, math.log10(N), step)
    return 10.0 ** x


def cmd_predict(cfg: RunConfig, out) -> None:
    law = _law(cfg)
    if cfg.cache_sizes:
        sizes = np.asarray(cfg.cache_sizes, dtype=float)
    elif cfg.ratio_grid is not None:
        sizes = cfg.ratio_grid * law.N
    else:
        sizes = _log_sizes(law.N)
    rows = []
    for D in sizes:
        r = model.predict(law, D)
        rows.append((math.log10(D), r.ws, r.preref, r.mr_lru, r.mr_static, r.ratio))
    write_csv(out, ("log10_D", "ws", "preref", "mr_lru", "mr_static", "ratio"), rows)


def _load_trace(cfg: RunConfig) -> tracemod.Trace:
    if cfg.trace_in:
        tr = tracemod.read_trace(cfg.trace_in)
    else:
        law = _law(cfg)
        _require(cfg, "trace_length")
        if cfg.trace_length < law.N:
            raise ConfigError(f"trace length {cfg.trace_length} is shorter than N={law.N}")
        tr = tracemod.generate_irm_trace(law, cfg.trace_length, cfg.seed)
    if cfg.trace_out:
        tracemod.write_trace(cfg.trace_out, tr)
    if cfg.warmup >= tr.length:
        raise ConfigError(f"warmup {cfg.warmup} must be below the trace length {tr.length}")
    return tr


def cmd_simulate(cfg: RunConfig, out) -> None:
    tr = _load_trace(cfg)
    if cfg.cache_sizes:
        sizes = np.asarray(sorted(set(cfg.cache_sizes)), dtype=np.int64)
    else:
        sizes = np.unique(np.rint(_log_sizes(tr.alphabet)).astype(np.int64))
    reref = analysis.reref_ccdf(tr, cfg.warmup)
    stack = analysis.stack_ccdf(tr, cfg.warmup)
    ws = analysis.ws_steady_state(reref, int(sizes.max()))
    header = ["D", "preref", "mr_lru", "ws_steady"]
    cols = [sizes, reref(sizes), stack(sizes), ws.at(sizes)]
    if cfg.window:
        fit = sizes[sizes <= tr.length]
        win = analysis.ws_sliding_window(tr, cfg.binning, fit)
        cols.append(np.concatenate((win.y, np.full(len(sizes) - len(fit), np.nan))))
        header.append("ws_window")
    write_csv(out, header, zip(*cols))
    _note(f"simulate: L={tr.length} N={tr.alphabet} distinct={np.unique(tr.accesses).size} "
          f"cold={stack.cold}")


def cmd_compare(cfg: RunConfig, out) -> None:
    tr = _load_trace(cfg)
    law = _law(cfg)
    grid = cfg.ratio_grid if cfg.ratio_grid is not None else parse_ratio_grid(DEFAULT_RATIO_GRID)
    sizes = np.maximum(np.rint(grid * law.N).astype(np.int64), 1)
    stack = analysis.stack_ccdf(tr, cfg.warmup)
    sim = stack(sizes)
    rows, worst = [], 0.0
    for delta, D, mr_sim in zip(grid, sizes, sim):
        lru = model.lru_mr(law, D) if D < law.N else 0.0
        static = model.static_mr(law, D)
        worst = max(worst, abs(lru - mr_sim))
        ratio_an = lru / static if static > 0 else math.nan
        ratio_sim = mr_sim / static if static > 0 else math.nan
        rows.append((delta, D, lru, static, mr_sim, ratio_an, ratio_sim))
    write_csv(out, ("delta", "D", "mr_lru", "mr_static", "mr_sim", "ratio", "ratio_sim"), rows)
    sim_ratios = np.array([r[6] for r in rows])
    best = int(np.nanargmax(sim_ratios))
    _note(f"compare: max |analytic - simulated| = {worst:.6g}; simulated ratio peaks at "
          f"delta={grid[best]:.6g} value={sim_ratios[best]:.6g}")


def cmd_ratio(cfg: RunConfig, out) -> None:
    _require(cfg, "a")
    grid = cfg.ratio_grid if cfg.ratio_grid is not None else parse_ratio_grid(DEFAULT_RATIO_GRID)
    rows = []
    for delta in grid:
        y = ratio.y_of_delta(cfg.a, delta)
        rows.append((delta, y, ratio.ratio_value(cfg.a, y)))
    write_csv(out, ("delta", "y", "ratio"), rows)


def cmd_ratio_max(cfg: RunConfig, out) -> None:
    exponents = cfg.exponents or list(DEFAULT_A_GRID)
    rows = []
    for a in exponents:
        m = ratio.find_max(a)
        residual = ratio.stationarity_residual(a, m.y_approx) if math.isfinite(a) else None
        rows.append((a, m.y_star, m.delta_star, m.f_max, m.y_approx, m.jelenkovic, residual))
    write_csv(out, ("a", "y_star", "delta_star", "f_max", "y_approx", "jelenkovic",
                    "residual_at_approx"), rows)


def cmd_slope(cfg: RunConfig, out) -> None:
    law = _law(cfg)
    D = np.geomspace(asymptotics.SLOPE_FIT_LO, law.N / 2, 121)
    rows = []
    for d in D:
        ws = model.ws_analytic(law, d)
        rows.append((math.log10(d), math.log10(ws), asymptotics.ws_loglog_slope_local(law, d)))
    write_csv(out, ("log10_D", "log10_ws", "local_slope"), rows)
    fitted = asymptotics.ws_loglog_slope_fit(law)
    _note(f"slope: a={law.a:g} fitted={fitted:.6g} "
          f"analytic={asymptotics.ws_loglog_slope_origin(law.a):.6g}")


HANDLERS = {
    "predict": cmd_predict,
    "simulate": cmd_simulate,
    "compare": cmd_compare,
    "ratio": cmd_ratio,
    "ratio-max": cmd_ratio_max,
    "slope": cmd_slope,
}


def run(cfg: RunConfig, out=None) -> None:
    if out is not None:
        HANDLERS[cfg.command](cfg, out)
    elif cfg.output_path:
        with open(cfg.output_path, "w", newline="") as fh:
            HANDLERS[cfg.command](cfg, fh)
    else:
        HANDLERS[cfg.command](cfg, sys.stdout)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = config_from_args(argv)
        run(cfg)
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except (ConfigError, tracemod.TraceFormatError, OSError) as exc:
        _note(f"lrumiss: error: {exc}")
        return EXIT_CONFIG
    except (DomainError, ArithmeticError) as exc:
        _note(f"lrumiss: domain error: {exc}")
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
