"""Command-line front end.

Each subcommand reads a JSON scenario config, runs one pipeline and writes a
JSON report. Exit status: 0 success, 2 usage/config error, 3 numerical failure.

Example config for ``varlp norm --config cfg.json --out report.json``::

    {
      "space": {"kind": "interval", "dim": 1, "points": 4},
      "function": 3,
      "exponent": 2,
      "params": {"tol": 1e-12}
    }

Function and exponent expressions are limited to a whitelist:

* a number, ``[re, im]`` or ``"inf"``;
* ``{"const": c}``;
* ``{"sin": k, "amp": a, "axis": 0}`` / ``{"cos": ...}`` for ``a*sin(2 pi k x)``;
* ``{"sum": [expr, ...]}``;
* ``{"piecewise": [v0, ..., v_{2^d - 1}], "axis": 0}`` on dyadic intervals;
* ``{"values": [...]}`` with one entry per atom.
"""
import argparse
import dataclasses
import sys
import time
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import __version__, _backend, textio
from .approx import bap_demo, operator_norm_estimate, partition_operator
from .errors import DomainMismatchError, NumericalError, PreconditionError
from .exponents import VariableExponent, reciprocal
from .measure import GridFunction, GridMeasureSpace, dyadic_chain
from .norms import DEFAULT_TOL, holder_check, luxemburg_norm, modular
from .nuclear import kernel_trace, rep_kernel, rep_trace
from .torus import (FrequencyBox, TorusGrid, bessel_symbol, lidskii_report,
                    multiplier_compose, partial_sum_difference, quantize,
                    shell_decay_ratio, spectrum, summability_predicate,
                    symbol_nuclear_decomposition, symbol_summability, symbol_trace)

COMMANDS = ("norm", "modular", "holder-check", "bap-demo", "trace", "spectrum",
            "lidskii", "summability")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3


class ConfigError(ValueError):
    """Malformed scenario config; ``path`` locates the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass
class ScenarioConfig:
    command: str
    space: dict | None = None
    function: object = None
    function_g: object = None
    exponent: object = None
    exponent_q: object = None
    exponent_s: object = None
    symbol: dict | None = None
    representation: object = None
    params: dict = field(default_factory=dict)
    threads: int = 1
    output: str | None = None
    timing: bool = False

    @classmethod
    def from_dict(cls, doc, command=None):
        if not isinstance(doc, dict):
            raise ConfigError("$", "config must be a JSON object")
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(doc) - names)
        if unknown:
            raise ConfigError(f"$.{unknown[0]}", "unknown field")
        doc = dict(doc)
        if command is not None:
            if doc.get("command", command) != command:
                raise ConfigError("$.command",
                                  f"config is for {doc['command']!r}, not {command!r}")
            doc["command"] = command
        if doc.get("command") not in COMMANDS:
            raise ConfigError("$.command", f"must be one of {', '.join(COMMANDS)}")
        if not isinstance(doc.get("params", {}), dict):
            raise ConfigError("$.params", "must be an object")
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    def to_dict(self):
        return {k: v for k, v in dataclasses.asdict(self).items()
                if v is not None and not (k == "timing" and v is False)}

    def validate(self):
        required = {
            "norm": ("space", "function", "exponent"),
            "modular": ("space", "function", "exponent"),
            "holder-check": ("space", "function", "function_g", "exponent", "exponent_q"),
            "bap-demo": ("space", "function", "exponent"),
        }.get(self.command, ())
        for name in required:
            if getattr(self, name) is None:
                raise ConfigError(f"$.{name}", f"required for {self.command}")
        if self.command in ("lidskii", "spectrum") and self.symbol is None \
                and not (self.command == "spectrum" and self.representation is not None):
            raise ConfigError("$.symbol", f"required for {self.command}")
        if self.command == "trace" and self.symbol is None and self.representation is None:
            raise ConfigError("$.symbol", "trace needs a symbol or a representation")
        tol = self.params.get("tol", DEFAULT_TOL)
        if not isinstance(tol, (int, float)) or isinstance(tol, bool) or not tol > 0:
            raise ConfigError("$.params.tol", "must be a positive number")
        if self.command == "bap-demo" and "seed" not in self.params:
            raise ConfigError("$.params.seed", "an explicit seed is required")
        if "seed" in self.params:
            seed = self.params["seed"]
            if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
                raise ConfigError("$.params.seed", "must be a non-negative integer")
        if self.command in ("lidskii", "summability") and "r" not in self.params:
            raise ConfigError("$.params.r", f"required for {self.command}")
        if self.command == "summability" and "tau" not in self.params:
            raise ConfigError("$.params.tau", "required for summability")
        if not isinstance(self.threads, int) or self.threads < 1:
            raise ConfigError("$.threads", "must be a positive integer")


# -- expressions ------------------------------------------------------------

def _number(value, path):
    try:
        return textio.from_pair(value)
    except (ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from None


def evaluate_expression(expr, space, path):
    """Evaluate a whitelisted expression at the atoms of ``space``."""
    x = space.points
    if isinstance(expr, (int, float, str, list)) and not isinstance(expr, bool):
        return np.full(space.size, _number(expr, path))
    if not isinstance(expr, dict) or len(expr) == 0:
        raise ConfigError(path, "unsupported expression")
    axis = expr.get("axis", 0)
    if not isinstance(axis, int) or not 0 <= axis < space.dim:
        raise ConfigError(f"{path}.axis", f"must be an axis index below {space.dim}")
    if "const" in expr:
        return np.full(space.size, _number(expr["const"], f"{path}.const"))
    for name, fn in (("sin", np.sin), ("cos", np.cos)):
        if name in expr:
            k = expr[name]
            if not isinstance(k, int) or isinstance(k, bool):
                raise ConfigError(f"{path}.{name}", "frequency must be an integer")
            amp = _number(expr.get("amp", 1.0), f"{path}.amp")
            return amp * fn(2 * np.pi * k * x[:, axis])
    if "sum" in expr:
        terms = expr["sum"]
        if not isinstance(terms, list) or not terms:
            raise ConfigError(f"{path}.sum", "must be a nonempty list")
        total = np.zeros(space.size, dtype=complex)
        for i, term in enumerate(terms):
            total = total + evaluate_expression(term, space, f"{path}.sum[{i}]")
        return total
    if "piecewise" in expr:
        pieces = expr["piecewise"]
        n = len(pieces) if isinstance(pieces, list) else 0
        if n == 0 or n & (n - 1):
            raise ConfigError(f"{path}.piecewise", "needs 2^d values for dyadic intervals")
        values = np.array([_number(v, f"{path}.piecewise[{i}]") for i, v in enumerate(pieces)])
        cell = np.minimum(np.floor(np.mod(x[:, axis], 1.0) * n).astype(int), n - 1)
        return values[cell]
    if "values" in expr:
        values = expr["values"]
        if not isinstance(values, list) or len(values) != space.size:
            raise ConfigError(f"{path}.values", f"needs exactly {space.size} entries")
        return np.array([_number(v, f"{path}.values[{i}]") for i, v in enumerate(values)])
    raise ConfigError(path, f"unsupported expression keys {sorted(expr)}")


def build_space(spec, path="$.space"):
    if not isinstance(spec, dict):
        raise ConfigError(path, "must be an object")
    kind = spec.get("kind", "interval")
    dim, points = spec.get("dim", 1), spec.get("points")
    if not isinstance(dim, int) or dim < 1:
        raise ConfigError(f"{path}.dim", "must be a positive integer")
    if not isinstance(points, int) or points < 1:
        raise ConfigError(f"{path}.points", "must be a positive integer")
    if kind == "interval":
        return GridMeasureSpace.uniform_interval(points, dim)
    if kind == "torus":
        return TorusGrid(dim, points)
    raise ConfigError(f"{path}.kind", "must be 'interval' or 'torus'")


def build_function(expr, space, path):
    return GridFunction(space, evaluate_expression(expr, space, path))


def build_exponent(expr, space, path):
    values = evaluate_expression(expr, space, path)
    if np.any(values.imag != 0):
        raise ConfigError(path, "exponents must be real")
    try:
        return VariableExponent(space, values.real)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from None


def build_symbol(spec, space, path="$.symbol"):
    if not isinstance(spec, dict):
        raise ConfigError(path, "must be an object")
    kind = spec.get("kind")
    if kind == "table":
        if "path" not in spec:
            raise ConfigError(f"{path}.path", "required for a table symbol")
        try:
            return textio.symbol_from_doc(textio.load(spec["path"]))
        except (OSError, KeyError, ValueError) as exc:
            raise ConfigError(f"{path}.path", f"cannot read symbol table: {exc}") from None
    if not isinstance(space, TorusGrid):
        raise ConfigError("$.space.kind", "symbols need a torus space")
    radius = spec.get("radius")
    if not isinstance(radius, int) or radius < 0:
        raise ConfigError(f"{path}.radius", "must be a non-negative integer")
    box = FrequencyBox(space.dim, radius)
    if kind == "bessel":
        tau = spec.get("tau")
        if not isinstance(tau, (int, float)) or isinstance(tau, bool) or not tau > 0:
            raise ConfigError(f"{path}.tau", "must be a positive number")
        return bessel_symbol(float(tau), space, box)
    if kind == "multiplier":
        base = build_symbol(dict(spec.get("base", {}), radius=radius), space, f"{path}.base")
        alpha = build_function(spec.get("alpha", 1.0), space, f"{path}.alpha")
        return multiplier_compose(alpha, base)
    raise ConfigError(f"{path}.kind", "must be 'bessel', 'multiplier' or 'table'")


def _representation(cfg):
    rep = cfg.representation
    try:
        if isinstance(rep, str):
            rep = textio.load(rep)
        return textio.representation_from_doc(rep)
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError("$.representation", f"cannot read representation: {exc}") from None


# -- commands ---------------------------------------------------------------

def _norm_record(result):
    return dataclasses.asdict(result)


def _cmd_norm(cfg, tol):
    space = build_space(cfg.space)
    f = build_function(cfg.function, space, "$.function")
    p = build_exponent(cfg.exponent, space, "$.exponent")
    res = luxemburg_norm(f, p, tol, cfg.params.get("max_iter", 200))
    return _norm_record(res), [f"norm = {res.value!r} ({res.iterations} iterations)"]


def _cmd_modular(cfg, tol):
    space = build_space(cfg.space)
    f = build_function(cfg.function, space, "$.function")
    p = build_exponent(cfg.exponent, space, "$.exponent")
    value = modular(f, p)
    return {"value": value}, [f"modular = {value!r}"]


def _cmd_holder(cfg, tol):
    space = build_space(cfg.space)
    f = build_function(cfg.function, space, "$.function")
    g = build_function(cfg.function_g, space, "$.function_g")
    p = build_exponent(cfg.exponent, space, "$.exponent")
    q = build_exponent(cfg.exponent_q, space, "$.exponent_q")
    if cfg.exponent_s is None:
        inv = reciprocal(p) + reciprocal(q)
        if np.any(inv > 1 + 1e-12):
            raise ConfigError("$.exponent_q", "1/p + 1/q exceeds 1, so s < 1")
        with np.errstate(divide="ignore"):
            s = VariableExponent(space, np.where(inv > 0, 1.0 / np.maximum(inv, 1e-300), np.inf))
    else:
        s = build_exponent(cfg.exponent_s, space, "$.exponent_s")
    res = holder_check(f, g, p, q, s, cfg.params.get("check_tol", 1e-10), tol)
    return dataclasses.asdict(res), [
        f"lhs = {res.lhs!r}, rhs = {res.rhs!r}, holds = {res.holds}"]


def _cmd_bap(cfg, tol, seed, threads):
    space = build_space(cfg.space)
    f = build_function(cfg.function, space, "$.function")
    p = build_exponent(cfg.exponent, space, "$.exponent")
    depth = cfg.params.get("depth", 4)
    trials = cfg.params.get("trials", 100)
    if not isinstance(depth, int) or depth < 0:
        raise ConfigError("$.params.depth", "must be a non-negative integer")
    if not isinstance(trials, int) or trials < 1:
        raise ConfigError("$.params.trials", "must be a positive integer")
    chain = dyadic_chain(space, depth)
    steps = bap_demo(f, p, chain, tol)
    rows, lines = [], []
    for step, part in zip(steps, chain):
        est = operator_norm_estimate(partition_operator(part), p, trials, seed,
                                     tol=tol, threads=threads)
        rows.append({"partition_index": step.partition_index, "cells": step.cells,
                     "error": step.error, "norm_estimate": est.lower_bound})
        lines.append(f"partition {step.partition_index}: cells = {step.cells}, "
                     f"error = {step.error!r}, norm >= {est.lower_bound!r}")
    return {"rows": rows}, lines


def _cmd_trace(cfg, tol):
    if cfg.representation is not None:
        rep = _representation(cfg)
        tr, kt = rep_trace(rep), kernel_trace(rep_kernel(rep))
        return ({"terms": len(rep), "rep_trace": tr, "kernel_trace": kt,
                 "discrepancy": abs(tr - kt)},
                [f"rep trace = {tr!r}", f"kernel diagonal trace = {kt!r}"])
    space = build_space(cfg.space) if cfg.space is not None else None
    symbol = build_symbol(cfg.symbol, space)
    st = symbol_trace(symbol)
    mt = complex(np.trace(quantize(symbol)))
    dt = rep_trace(symbol_nuclear_decomposition(symbol))
    return ({"symbol_trace": st, "matrix_trace": mt, "decomposition_trace": dt},
            [f"symbol trace = {st!r}", f"matrix trace = {mt!r}",
             f"decomposition trace = {dt!r}"])


def _cmd_spectrum(cfg, tol):
    top_k = cfg.params.get("top_k", 16)
    if cfg.symbol is not None:
        space = build_space(cfg.space) if cfg.space is not None else None
        matrix = quantize(build_symbol(cfg.symbol, space))
    else:
        matrix = rep_kernel(_representation(cfg)).operator_matrix()
    values = spectrum(matrix)
    total = complex(np.add.accumulate(values)[-1])
    return ({"eigenvalue_count": int(values.size),
             "top_eigenvalues": [textio.to_pair(v) for v in values[:top_k]],
             "eigen_sum": total},
            [f"{values.size} eigenvalues, sum = {total!r}",
             f"largest = {complex(values[0])!r}"])


def _cmd_lidskii(cfg, tol):
    space = build_space(cfg.space) if cfg.space is not None else None
    symbol = build_symbol(cfg.symbol, space)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        report = lidskii_report(symbol, cfg.params["r"])
    doc = textio.report_to_doc(report, cfg.params.get("top_k", 16))
    return doc, [f"eigen sum = {report.eigen_sum!r}",
                 f"matrix trace = {report.matrix_trace!r}",
                 f"symbol trace = {report.symbol_trace!r}",
                 f"max discrepancy = {report.max_discrepancy()!r}"]


def _cmd_summability(cfg, tol):
    r, tau = cfg.params["r"], cfg.params["tau"]
    n = cfg.params.get("n", cfg.space.get("dim", 1) if cfg.space else 1)
    small = cfg.params.get("radius_small", 500)
    large = cfg.params.get("radius_large", 1000)
    threshold = cfg.params.get("threshold", 1e-4)
    predicate = summability_predicate(r, tau, n)
    diff = partial_sum_difference(r, tau, n, small, large)
    result = {
        "predicate": predicate, "n": n,
        "partial_sum_difference": diff,
        "empirically_convergent": diff < threshold,
        "shell_decay_ratio": shell_decay_ratio(r, tau, n),
    }
    lines = [f"r*tau > n: {predicate}", f"partial sum difference = {diff!r}"]
    if cfg.symbol is not None and cfg.exponent is not None:
        space = build_space(cfg.space)
        symbol = build_symbol(cfg.symbol, space)
        p_conj = build_exponent(cfg.exponent, space, "$.exponent")
        res = symbol_summability(symbol, r, p_conj, tol)
        result["symbol_sum"] = res.sum
        result["last_shell"] = res.last_shell
        lines.append(f"symbol sum = {res.sum!r} (last shell {res.last_shell!r})")
    return result, lines


def run(config):
    """Execute one scenario; returns ``(report_dict, summary_lines)``."""
    tol = config.params.get("tol", DEFAULT_TOL)
    start = time.perf_counter()
    if config.command == "bap-demo":
        results, lines = _cmd_bap(config, tol, config.params["seed"], config.threads)
    else:
        handler = {
            "norm": _cmd_norm, "modular": _cmd_modular, "holder-check": _cmd_holder,
            "trace": _cmd_trace, "spectrum": _cmd_spectrum, "lidskii": _cmd_lidskii,
            "summability": _cmd_summability,
        }[config.command]
        results, lines = handler(config, tol)
    provenance = {"version": __version__, "backend": _backend.NAME}
    if config.timing:
        provenance["elapsed_seconds"] = time.perf_counter() - start
    report = {"config": config.to_dict(), "results": results, "provenance": provenance}
    return textio.clean(report), lines


def _parser():
    parser = argparse.ArgumentParser(prog="varlp", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="JSON scenario config")
        cmd.add_argument("--out", help="report path (overrides config 'output')")
        cmd.add_argument("--seed", type=int, help="RNG seed (overrides params.seed)")
        cmd.add_argument("--threads", type=int, help="worker threads (default 1)")
    return parser


def main(argv=None):
    args = _parser().parse_args(argv)
    try:
        doc = textio.load(args.config)
    except (OSError, ValueError) as exc:
        print(f"varlp: error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if isinstance(doc, dict):
            doc = dict(doc)
            if args.seed is not None:
                if args.seed < 0 or args.seed >= 2 ** 64:
                    raise ConfigError("--seed", "must be an unsigned 64-bit integer")
                doc["params"] = dict(doc.get("params", {}), seed=args.seed)
            if args.threads is not None:
                doc["threads"] = args.threads
            if args.out is not None:
                doc["output"] = args.out
        cfg = ScenarioConfig.from_dict(doc, args.command)
        report, lines = run(cfg)
        if cfg.output:
            textio.write_atomic(cfg.output, textio.dumps(report))
    except (ConfigError, PreconditionError, DomainMismatchError) as exc:
        print(f"varlp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"varlp: numerical error: {exc} {exc.diagnostics}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError, KeyError) as exc:
        print(f"varlp: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for line in lines:
        print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
