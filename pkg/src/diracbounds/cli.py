"""``diracbounds`` command line: ``report``, ``sweep`` and ``verify`` on a manifold config.

Config files are line oriented::

    # comment
    manifold M4
    kahler true
    factor einstein dim=2 scalar=2.0
    factor torus_rev rho=1.0
    grid 8192
    sweep 2.rho 1.05 10 100

Exit codes: 0 success, 1 config error, 2 numerical failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import math
import re
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import COR43, THM42, BoundInputs, best_bound, cor43_printed
from .clifford import build_rep
from .curvature import (
    DEFAULT_RESOLUTION,
    MIN_RESOLUTION,
    Einstein,
    GridConfig,
    ProductSpec,
    TorusRev,
    invariants,
    jet_at,
    sampled_jets,
)
from .endomorphism import PointJet
from .identities import CheckResult, run_suite

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

CSV_HEADER = (
    "param", "R_min", "R_max", "kappa", "ricSqMin", "tracelessSqMax", "epsilon",
    "bound_friedrich", "bound_thm42", "t_opt", "vanishing_25",
)

# plain decimal literals only: no nan/inf, no underscores, no hex
_FLOAT_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")
_INT_RE = re.compile(r"[+-]?\d+")
_SWEEP_PATH_RE = re.compile(r"(\d+)\.([a-z_]+)")
_VERIFY_SAMPLES = 32


class ConfigError(Exception):
    def __init__(self, line: Optional[int], message: str):
        super().__init__(message)
        self.line = line
        self.message = message


@dataclass(frozen=True)
class SweepSpec:
    factor: int  # 0-based
    field: str
    start: float
    stop: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class RunConfig:
    manifold: ProductSpec
    grid_resolution: int = DEFAULT_RESOLUTION
    sweep: Optional[SweepSpec] = None
    output_format: str = "text"
    seed: int = 0

    @property
    def grid(self) -> GridConfig:
        return GridConfig(self.grid_resolution)


def _float(tok: str, lineno: int, what: str) -> float:
    if not _FLOAT_RE.fullmatch(tok):
        raise ConfigError(lineno, f"bad numeric literal for {what}: {tok!r}")
    val = float(tok)
    if not math.isfinite(val):
        raise ConfigError(lineno, f"{what} out of range: {tok!r}")
    return val


def _int(tok: str, lineno: int, what: str) -> int:
    if not _INT_RE.fullmatch(tok):
        raise ConfigError(lineno, f"bad integer literal for {what}: {tok!r}")
    return int(tok)


def _keyvals(tokens, lineno, allowed):
    out = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep or not val:
            raise ConfigError(lineno, f"expected key=value, got {tok!r}")
        if key not in allowed:
            raise ConfigError(lineno, f"unknown key {key!r}")
        if key in out:
            raise ConfigError(lineno, f"duplicate key {key!r}")
        out[key] = val
    missing = [k for k in allowed if k not in out]
    if missing:
        raise ConfigError(lineno, f"missing key(s): {', '.join(missing)}")
    return out


def _factor(tokens, lineno):
    if not tokens:
        raise ConfigError(lineno, "factor needs a kind: einstein or torus_rev")
    kind, rest = tokens[0], tokens[1:]
    try:
        if kind == "einstein":
            kv = _keyvals(rest, lineno, ("dim", "scalar"))
            return Einstein(_int(kv["dim"], lineno, "dim"), _float(kv["scalar"], lineno, "scalar"))
        if kind == "torus_rev":
            kv = _keyvals(rest, lineno, ("rho",))
            return TorusRev(_float(kv["rho"], lineno, "rho"))
    except ValueError as exc:
        raise ConfigError(lineno, str(exc)) from None
    raise ConfigError(lineno, f"unknown factor kind {kind!r}")


def parse_config(text: str, seed: int = 0) -> RunConfig:
    name = None
    kahler = None
    factors = []
    factor_lines = []
    grid = None
    sweep_line = None
    last = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last = lineno
        head, *tokens = line.split()
        if name is None and head != "manifold":
            raise ConfigError(lineno, "first entry must be 'manifold <name>'")
        if head == "manifold":
            if name is not None:
                raise ConfigError(lineno, "duplicate manifold line")
            if len(tokens) != 1:
                raise ConfigError(lineno, "expected 'manifold <name>'")
            name = tokens[0]
        elif head == "kahler":
            if kahler is not None:
                raise ConfigError(lineno, "duplicate kahler line")
            if tokens not in (["true"], ["false"]):
                raise ConfigError(lineno, "expected 'kahler true' or 'kahler false'")
            kahler = tokens[0] == "true"
        elif head == "factor":
            factors.append(_factor(tokens, lineno))
            factor_lines.append(lineno)
        elif head == "grid":
            if grid is not None:
                raise ConfigError(lineno, "duplicate grid line")
            if len(tokens) != 1:
                raise ConfigError(lineno, "expected 'grid <int>'")
            grid = _int(tokens[0], lineno, "grid")
            if grid < MIN_RESOLUTION:
                raise ConfigError(lineno, f"grid must be >= {MIN_RESOLUTION}")
        elif head == "sweep":
            if sweep_line is not None:
                raise ConfigError(lineno, "duplicate sweep line")
            sweep_line = (lineno, tokens)
        else:
            raise ConfigError(lineno, f"unknown key {head!r}")
    if name is None:
        raise ConfigError(None, "empty config: missing 'manifold <name>'")
    if not factors:
        raise ConfigError(last, "no factor lines")
    try:
        spec = ProductSpec(name, factors, bool(kahler))
    except ValueError as exc:
        raise ConfigError(factor_lines[-1], str(exc)) from None
    if spec.kahler and spec.n % 2:
        raise ConfigError(factor_lines[-1], "kahler requires even total dimension")
    sweep = _parse_sweep(spec, *sweep_line) if sweep_line else None
    return RunConfig(spec, grid or DEFAULT_RESOLUTION, sweep, "csv" if sweep else "text", seed)


def _parse_sweep(spec: ProductSpec, lineno: int, tokens) -> SweepSpec:
    if len(tokens) != 4:
        raise ConfigError(lineno, "expected 'sweep <factor-index>.<field> <from> <to> <steps>'")
    m = _SWEEP_PATH_RE.fullmatch(tokens[0])
    if not m:
        raise ConfigError(lineno, f"bad parameter path {tokens[0]!r}")
    idx = int(m.group(1)) - 1
    if not 0 <= idx < len(spec.factors):
        raise ConfigError(lineno, f"factor index {idx + 1} out of range 1..{len(spec.factors)}")
    fld = m.group(2)
    numeric = {"scalar"} if isinstance(spec.factors[idx], Einstein) else {"rho"}
    if fld not in numeric:
        raise ConfigError(lineno, f"factor {idx + 1} has no real-valued field {fld!r}")
    start = _float(tokens[1], lineno, "sweep start")
    stop = _float(tokens[2], lineno, "sweep end")
    steps = _int(tokens[3], lineno, "sweep steps")
    if steps < 2:
        raise ConfigError(lineno, "sweep needs at least 2 steps")
    if not start < stop:
        raise ConfigError(lineno, "sweep start must be below its end")
    sw = SweepSpec(idx, fld, start, stop, steps)
    for v in (start, stop):
        try:
            _with_param(spec, sw, v)
        except ValueError as exc:
            raise ConfigError(lineno, f"sweep value {v!r} invalid: {exc}") from None
    return sw


def _with_param(spec: ProductSpec, sw: SweepSpec, value: float) -> ProductSpec:
    factors = list(spec.factors)
    factors[sw.factor] = dataclasses.replace(factors[sw.factor], **{sw.field: float(value)})
    return ProductSpec(spec.name, factors, spec.kahler)


def load_config(path: str, seed: int = 0) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(None, f"cannot read config: {exc}") from None
    return parse_config(text, seed)


def fmt(x: Optional[float]) -> str:
    """Full-precision, locale-free number formatting; ``NA`` for missing."""
    if x is None:
        return "NA"
    return format(float(x) + 0.0, ".12g")


def _describe(f) -> str:
    if isinstance(f, Einstein):
        return f"einstein dim={f.dim} scalar={fmt(f.scalar)}"
    return f"torus_rev rho={fmt(f.rho)}"


def report_text(cfg: RunConfig) -> str:
    spec = cfg.manifold
    inv = invariants(spec, cfg.grid, crosscheck=True)
    inp = BoundInputs.from_invariants(inv, kahler=spec.kahler)
    rep = best_bound(inp)
    out = io.StringIO()
    w = lambda s="": out.write(s + "\n")  # noqa: E731
    w(f"manifold {spec.name}")
    w(f"dimension {spec.n}")
    for i, f in enumerate(spec.factors, start=1):
        w(f"factor {i}: {_describe(f)}")
    w(f"kahler {'true (asserted, not verified)' if spec.kahler else 'false'}")
    w(f"grid {inv.resolution}")
    w()
    w("invariants")
    for label, val in (
        ("R_min", inv.r_min), ("R_max", inv.r_max), ("kappa", inv.kappa),
        ("ricSqMin", inv.ric_sq_min), ("tracelessSqMax", inv.traceless_sq_max),
        ("epsilon", inv.epsilon), ("tau", inv.tau),
    ):
        w(f"  {label:<16}{fmt(val)}")
    w()
    w("flags")
    w(f"  {'theta_vanishes':<22}{str(inv.theta_vanishes).lower()}")
    w(f"  {'commuting_derivatives':<22}{str(inv.commuting_derivs).lower()}")
    w(f"  {'divergence_free':<22}{str(inv.divergence_free).lower()}")
    w()
    w("bounds on lambda^2")
    for tag, r in rep.results.items():
        if r.applicable:
            w(f"  {tag:<10}{fmt(r.value):<20}t_opt={fmt(r.t_opt)}" + (f"  ({r.reason})" if r.reason else ""))
        else:
            w(f"  {tag:<10}{'not applicable':<20}{r.reason}")
    w()
    w("vanishing")
    for key, v in rep.vanishing.items():
        sides = f"  lhs={fmt(v.lhs)} rhs={fmt(v.rhs)}" if v.lhs is not None else ""
        w(f"  {key:<24}{v.status}{sides}")
    w()
    w("improvement over the scalar-curvature bound")
    for key, v in rep.improvement.items():
        if key == "improvement" and len(rep.improvement) > 1:
            continue
        sides = f"  lhs={fmt(v.lhs)} rhs={fmt(v.rhs)}" if v.lhs is not None else ""
        w(f"  {key:<24}{v.status}{sides}")
    notes = list(rep.notes)
    c43, t42 = rep.results[COR43], rep.results[THM42]
    if c43.applicable and t42.applicable:
        rel = abs(c43.value - t42.value) / t42.value
        notes.append(f"Cor43 closed form agrees with Thm42 (relative difference {rel:.1e})")
        notes.append(
            "closed form with sqrt(a^2 + ab + c) would give "
            f"{fmt(cor43_printed(inp))}, above the maximum of beta/alpha; not reported as a bound"
        )
    if notes:
        w()
        w("notes")
        for note in notes:
            w(f"  {note}")
    w()
    if rep.best is None:
        w("summary: no positive lower bound on lambda^2")
    else:
        w(f"summary: lambda^2 >= {rep.best.value:.3f} ({rep.best.theorem})")
    return out.getvalue()


def sweep_rows(cfg: RunConfig):
    if cfg.sweep is None:
        raise ConfigError(None, "config has no sweep line")
    for value in cfg.sweep.values():
        spec = _with_param(cfg.manifold, cfg.sweep, value)
        inv = invariants(spec, cfg.grid, crosscheck=False)
        rep = best_bound(BoundInputs.from_invariants(inv, kahler=spec.kahler))
        fr, t42 = rep.results["Friedrich"], rep.results[THM42]
        yield (
            fmt(value), fmt(inv.r_min), fmt(inv.r_max), fmt(inv.kappa), fmt(inv.ric_sq_min),
            fmt(inv.traceless_sq_max), fmt(inv.epsilon), fmt(fr.value), fmt(t42.value),
            fmt(t42.t_opt), rep.vanishing["curvature_kernel"].status,
        )


def write_sweep(cfg: RunConfig, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in sweep_rows(cfg):
        writer.writerow(row)


def verify_results(cfg: RunConfig) -> list[tuple[str, CheckResult]]:
    spec = cfg.manifold
    rep = build_rep(spec.n)
    rng = np.random.default_rng(cfg.seed)
    if spec.tori:
        ric, grad = sampled_jets(spec, cfg.grid, _VERIFY_SAMPLES)
        jets = [PointJet(r, g) for r, g in zip(ric, grad)]
    else:
        jets = [jet_at(spec, ())]

    def crosscheck():
        # invariants() raises if the spectral and scalar routes disagree
        try:
            invariants(spec, cfg.grid, crosscheck=True)
        except ArithmeticError:
            return CheckResult("spectral_crosscheck", math.inf, 1)
        return CheckResult("spectral_crosscheck", 0.0, 1)

    return run_suite(rep, jets, rng, extra=[crosscheck])


def verify_text(results) -> tuple[str, bool]:
    out = io.StringIO()
    ok = True
    for group, r in results:
        ok &= r.passed
        out.write(f"{'PASS' if r.passed else 'FAIL'}  {group:<9}{r.name:<30}max_residual={r.residual:.3e}  samples={r.samples}\n")
    out.write(f"summary: {'all identities pass' if ok else 'identity check failed'}\n")
    return out.getvalue(), ok


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diracbounds", description="Dirac eigenvalue lower bounds on product manifolds.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("report", "print invariants, bounds and verdicts"),
        ("sweep", "CSV of bounds along the config's sweep line"),
        ("verify", "run the identity suite"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("config")
        if name == "verify":
            sp.add_argument("--seed", type=int, default=0, help="seed for the random jets (default 0)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, getattr(args, "seed", 0))
        if args.command == "report":
            if cfg.manifold.kahler:
                print("warning: Kaehler bound applied on the config's assertion that the metric is Kaehler", file=sys.stderr)
            sys.stdout.write(report_text(cfg))
        elif args.command == "sweep":
            if cfg.sweep is None:
                raise ConfigError(None, "sweep command needs a 'sweep' line in the config")
            write_sweep(cfg, sys.stdout)
        else:
            text, ok = verify_text(verify_results(cfg))
            sys.stdout.write(text)
            if not ok:
                return EXIT_VERIFY
    except ConfigError as exc:
        where = f"{args.config}:{exc.line}: " if exc.line is not None else f"{args.config}: "
        print(f"config error: {where}{exc.message}", file=sys.stderr)
        return EXIT_CONFIG
    except (np.linalg.LinAlgError, ArithmeticError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
