"""Command-line runner: ``weylkit <subcommand> ...``.

Subcommands
-----------
run         execute named suites from a flat ``key = value`` config and/or flags
symbol-gen  write a symbol table CSV
quantize    symbol CSV -> operator CSV
moyal       two symbol CSVs -> symbol CSV of the Moyal product
modnorm     symbol CSV -> JSON norm report
wiener      invert ``Op(a0)`` for a symbol CSV, direct and contour
landau      Landau spectrum CSV for a constant field
orbit       isotropy, jump set and predual for a Lie algebra and functional

Exit status is 0 when every check passes, 1 when a check fails and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import ast
import csv
import inspect
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import NotInvertibleError, UnitalSymbol, _json_default, wiener_check, wiener_invert_direct
from .magnetic import SampledLineGrid, VectorPotential, landau_demo
from .modspace import ExponentError, norm_report, parse_exponent, sym_mod_norm
from .phase_space import FinitePhaseSpace, SymbolGrid, read_table_csv, write_table_csv
from .suites import ACCEPTANCE, SUITES, _load_algebra, run_suite
from .weyl_core import Window, WeylSystem, write_operator_csv

MODELS = ("finite", "magnetic", "kirillov")
SYMBOL_KINDS = ("unit", "plane_wave", "wigner_of_window", "gaussian_bump", "random_complex", "random_hermitian")


class UsageError(ValueError):
    """Invalid configuration; the message names the offending field."""


# ---------------------------------------------------------------------------
# configuration


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"config line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if not key:
            raise UsageError(f"config line {lineno}: empty key")
        out[key] = value
    return out


def _int(cfg, key, default=None):
    if key not in cfg or cfg[key] in (None, ""):
        if default is None:
            raise UsageError(f"missing required field '{key}'")
        return default
    try:
        v = float(cfg[key])
    except (TypeError, ValueError):
        raise UsageError(f"field '{key}' must be an integer, got {cfg[key]!r}") from None
    if v != int(v):
        raise UsageError(f"field '{key}' must be an integer, got {cfg[key]!r}")
    return int(v)


def _float(cfg, key, default=None):
    if key not in cfg or cfg[key] in (None, ""):
        if default is None:
            raise UsageError(f"missing required field '{key}'")
        return default
    try:
        return float(cfg[key])
    except (TypeError, ValueError):
        raise UsageError(f"field '{key}' must be a number, got {cfg[key]!r}") from None


def _floats(text, key) -> list:
    try:
        return [float(t) for t in str(text).replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"field '{key}' must be a comma-separated list of numbers") from None


def _literal(text):
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def parse_polynomial_map(text: str, key: str) -> dict:
    """``"y:-0.5, x*x:0.1"`` -> ``{"y": -0.5, "x*x": 0.1}``."""
    out = {}
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" not in part:
            raise UsageError(f"field '{key}': expected 'monomial:coefficient', got {part!r}")
        mono, coef = part.rsplit(":", 1)
        try:
            out[mono.strip()] = out.get(mono.strip(), 0.0) + float(coef)
        except ValueError:
            raise UsageError(f"field '{key}': bad coefficient {coef!r}") from None
    return out


def _potential(cfg, d: int):
    keys = [f"A_{v}" for v in ("x", "y")[:d]]
    if not any(k in cfg for k in keys):
        return None
    maps = [parse_polynomial_map(cfg.get(k, ""), k) for k in keys]
    try:
        return VectorPotential.from_mappings(d, maps, "config")
    except ValueError as exc:
        raise UsageError(f"field 'A': {exc}") from None


def suite_params(name: str, cfg: dict) -> dict:
    """Translate config fields into keyword arguments of one suite."""
    suite = SUITES[name]
    sig = inspect.signature(suite.func).parameters
    params = {}
    model = suite.model
    if model == "finite":
        if "N" in cfg:
            N = _int(cfg, "N")
            if N < 3 or N % 2 == 0:
                raise UsageError(f"field 'N' must be odd and >= 3 for the finite model, got {N}")
            if "Ns" in sig:
                params["Ns"] = (N,)
            if "N" in sig:
                params["N"] = N
        if "d" in cfg and "d" in sig:
            params["d"] = _int(cfg, "d")
    elif model == "magnetic":
        for key in ("B", "L"):
            if key in cfg and key in sig:
                params[key] = _float(cfg, key)
        for key in ("n", "d"):
            if key in cfg and key in sig:
                params[key] = _int(cfg, key)
        if "nodes" in cfg and "nodes" in sig:
            params["nodes"] = _int(cfg, "nodes")
        if "gauge" in cfg and "gauge" in sig:
            params["gauge"] = cfg["gauge"]
        if "potential" in sig:
            pot = _potential(cfg, params.get("d", 2))
            if pot is not None:
                params["potential"] = pot
    elif model == "kirillov":
        if "algebra" in cfg and "algebra" in sig:
            params["algebra"] = cfg["algebra"]
        if "xi0" in cfg and "xi0" in sig:
            params["xi0"] = tuple(_floats(cfg["xi0"], "xi0"))
    if "trials" in cfg and "trials" in sig:
        params["trials"] = _int(cfg, "trials")
    if "tol" in cfg and "tol" in sig:
        params["tol"] = _float(cfg, "tol")
    for key, value in cfg.items():
        scope, dot, pname = key.partition(".")
        if dot and scope == name:
            if pname not in sig:
                raise UsageError(f"field '{key}': suite {name!r} has no parameter {pname!r}")
            params[pname] = _literal(value)
    return params


def resolve_suites(cfg: dict) -> list[str]:
    model = cfg.get("model")
    if model not in MODELS:
        raise UsageError(f"field 'model' must be one of {MODELS}, got {model!r}")
    requested = [s.strip() for s in str(cfg.get("suite", "all")).split(",") if s.strip()]
    names = []
    for s in requested:
        if s == "all":
            names += [n for n in ACCEPTANCE if SUITES[n].model == model]
        elif s == "acceptance":
            names += list(ACCEPTANCE)
        elif s in SUITES:
            names.append(s)
        else:
            raise UsageError(f"field 'suite': unknown suite {s!r}; choose from {sorted(SUITES)} or 'all'")
    for n in names:
        if cfg.get("suite") != "acceptance" and SUITES[n].model != model:
            raise UsageError(f"field 'suite': {n!r} belongs to model {SUITES[n].model!r}, not {model!r}")
    return list(dict.fromkeys(names))


def _write_summary(path: Path, reports) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["suite", "checks", "failed", "min_slack", "pass"])
        for r in reports:
            row = r.summary_row()
            w.writerow([row["suite"], row["checks"], row["failed"], repr(row["min_slack"]), "true" if row["pass"] else "false"])


def _write_spectrum(path: Path, report) -> None:
    with open(path, "w", newline="") as fh:
        _write_spectrum_buf(fh, report)


def _write_histogram(path: Path, hist: dict) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["N", "bin_lo", "bin_hi", "count"])
        for N, h in hist.items():
            for lo, hi, c in zip(h["edges"][:-1], h["edges"][1:], h["counts"]):
                w.writerow([N, repr(lo), repr(hi), c])


def run(cfg: dict, out_dir: Path | None, stream=sys.stdout) -> int:
    if "seed" not in cfg or cfg["seed"] in ("", None):
        raise UsageError("missing required field 'seed'")
    seed = _int(cfg, "seed")
    if not 0 <= seed < 2**64:
        raise UsageError("field 'seed' must be a 64-bit unsigned integer")
    names = resolve_suites(cfg)
    plans = [(n, suite_params(n, cfg)) for n in names]
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    reports = []
    for name, params in plans:
        rep = run_suite(name, seed, **params)
        reports.append(rep)
        print(rep.line(), file=stream)
        for c in rep.failures:
            print("  failed: " + c.to_json(), file=stream)
        if out_dir is not None:
            (out_dir / f"{name}.jsonl").write_text(rep.jsonl())
            if "spectrum" in rep.extra:
                _write_spectrum(out_dir / f"{name}_spectrum.csv", rep.extra["spectrum"])
            if "slack_histogram" in rep.extra:
                _write_histogram(out_dir / f"{name}_slack_histogram.csv", rep.extra["slack_histogram"])
            if "orbit" in rep.extra:
                (out_dir / f"{name}_orbit.json").write_text(json.dumps(rep.extra["orbit"], sort_keys=True) + "\n")
    if out_dir is not None:
        _write_summary(out_dir / "summary.csv", reports)
        timing = {r.suite: r.wall_time for r in reports}
        (out_dir / "timing.json").write_text(json.dumps({"config": cfg, "wall_time": timing}, indent=1) + "\n")
    return 0 if all(r.passed for r in reports) else 1


# ---------------------------------------------------------------------------
# symbol files


def read_symbol(path) -> SymbolGrid:
    """Read a symbol CSV, inferring ``N`` and ``d`` from its shape."""
    text = Path(path).read_text()
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise UsageError(f"{path}: empty file")
    d = sum(1 for h in rows[0] if h.startswith("x_"))
    count = len(rows) - 1
    if d < 1 or count < 1:
        raise UsageError(f"{path}: not a symbol table")
    N = int(round(count ** (1.0 / (2 * d))))
    if N ** (2 * d) != count:
        raise UsageError(f"{path}: {count} rows is not N^(2d) for d={d}")
    space = FinitePhaseSpace(N, d)
    return SymbolGrid(space, read_table_csv(io.StringIO(text), space))


def symbol_gen(kind: str, space: FinitePhaseSpace, seed: int | None = None, x0=None, scale: float = 1.0) -> SymbolGrid:
    """Test-input factory.

    ``unit``               the constant 1
    ``plane_wave``         ``exp(2 pi i sigma(P, X0) / N)`` (quantizes to ``pi(-X0)``)
    ``wigner_of_window``   ``W(phi, phi)`` for the discrete Gaussian window
    ``gaussian_bump``      ``exp(-pi (|x|^2 + |xi|^2) / N)`` on centred representatives
    ``random_complex``     independent standard complex normals times ``scale``
    ``random_hermitian``   real standard normals times ``scale`` (``Op`` is hermitian)
    """
    ws = WeylSystem(space)
    if kind == "unit":
        return ws.unit()
    if kind == "plane_wave":
        if x0 is None:
            raise UsageError("plane_wave needs 'x0'")
        x0 = list(x0)
        if len(x0) != 2 * space.d:
            raise UsageError(f"field 'x0' needs {2 * space.d} integers")
        X0 = space.point(x0[: space.d], x0[space.d :])
        return SymbolGrid(space, np.exp(2j * np.pi * space.tables.sigma[:, X0.index] / space.N))
    if kind == "wigner_of_window":
        phi = Window.gaussian(space)
        return ws.wigner(phi, phi)
    if kind == "gaussian_bump":
        t = space.tables
        r = np.mod(t.coords + space.N // 2, space.N) - space.N // 2
        rr = np.sum(r**2, axis=1)
        return SymbolGrid(space, np.exp(-np.pi * (rr[t.phase_x] + rr[t.phase_xi]) / space.N))
    if kind in ("random_complex", "random_hermitian"):
        if seed is None:
            raise UsageError("random symbols need 'seed'")
        rng = np.random.default_rng(seed)
        if kind == "random_complex":
            return SymbolGrid.random(space, rng, scale=scale)
        return SymbolGrid(space, scale * rng.standard_normal(space.size))
    raise UsageError(f"unknown symbol kind {kind!r}; choose from {SYMBOL_KINDS}")


def _emit(text: str | None, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument parsing


RUN_FLAGS = ("model", "N", "d", "B", "L", "n", "algebra", "xi0", "suite", "seed", "trials", "nodes", "gauge")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weylkit", description="Finite localized Weyl calculus toolkit.")
    p.add_argument("--version", action="version", version=f"weylkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run verification suites")
    r.add_argument("--config", help="flat key = value config file")
    r.add_argument("--model", choices=MODELS)
    r.add_argument("--N", type=int)
    r.add_argument("--d", type=int)
    r.add_argument("--B", type=float)
    r.add_argument("--L", type=float)
    r.add_argument("--n", type=int)
    r.add_argument("--algebra")
    r.add_argument("--xi0")
    r.add_argument("--suite", help="comma-separated suite names, 'all' or 'acceptance'")
    r.add_argument("--seed", type=int)
    r.add_argument("--trials", type=int)
    r.add_argument("--nodes", type=int)
    r.add_argument("--gauge", choices=("symmetric", "landau"))
    r.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="extra config override")
    r.add_argument("--out", default="weylkit-out", help="output directory")
    r.add_argument("--list", action="store_true", help="list suites and exit")

    g = sub.add_parser("symbol-gen", help="write a symbol table CSV")
    g.add_argument("kind", choices=SYMBOL_KINDS)
    g.add_argument("--N", type=int, required=True)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--seed", type=int)
    g.add_argument("--x0", help="x and xi coordinates of X0, comma-separated")
    g.add_argument("--scale", type=float, default=1.0)
    g.add_argument("--out")

    q = sub.add_parser("quantize", help="symbol CSV -> operator CSV")
    q.add_argument("symbol")
    q.add_argument("--out")

    m = sub.add_parser("moyal", help="Moyal product of two symbol CSVs")
    m.add_argument("a")
    m.add_argument("b")
    m.add_argument("--out")

    n = sub.add_parser("modnorm", help="symbol modulation norm as JSON")
    n.add_argument("symbol")
    n.add_argument("--p", default="inf")
    n.add_argument("--q", default="1")

    w = sub.add_parser("wiener", help="invert Op(a0) directly and by contour integration")
    w.add_argument("symbol")
    w.add_argument("--nodes", type=int, default=256)
    w.add_argument("--out", help="CSV for the inverse symbol")

    la = sub.add_parser("landau", help="Landau spectrum CSV")
    la.add_argument("--B", type=float, default=1.0)
    la.add_argument("--L", type=float, default=8.0)
    la.add_argument("--n", type=int, default=64)
    la.add_argument("--gauge", choices=("symmetric", "landau"), default="symmetric")
    la.add_argument("--out")

    o = sub.add_parser("orbit", help="orbit data as JSON")
    o.add_argument("--algebra", required=True, help="bundled name or JSON path")
    o.add_argument("--xi0", required=True, help="comma-separated coefficients")
    return p


def _cmd_run(args) -> int:
    if args.list:
        for s in SUITES.values():
            crit = f"criterion {s.criterion}" if s.criterion else "extra"
            print(f"{s.name:18s} {s.model:9s} {crit:13s} {s.doc}")
        return 0
    cfg = parse_config_text(Path(args.config).read_text()) if args.config else {}
    for key in RUN_FLAGS:
        v = getattr(args, key)
        if v is not None:
            cfg[key] = str(v)
    for item in args.set:
        if "=" not in item:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        cfg[k.strip()] = v.strip()
    if cfg.get("model") is None and cfg.get("suite") == "acceptance":
        cfg["model"] = "finite"
    return run(cfg, Path(cfg.get("out", args.out)))


def _cmd_symbol_gen(args) -> int:
    space = FinitePhaseSpace(args.N, args.d)
    x0 = [int(v) for v in _floats(args.x0, "x0")] if args.x0 else None
    a = symbol_gen(args.kind, space, args.seed, x0, args.scale)
    _emit(write_table_csv(space, a.values), args.out)
    return 0


def _cmd_quantize(args) -> int:
    a = read_symbol(args.symbol)
    _emit(write_operator_csv(WeylSystem(a.space).quantize(a)), args.out)
    return 0


def _cmd_moyal(args) -> int:
    a, b = read_symbol(args.a), read_symbol(args.b)
    c = WeylSystem(a.space).moyal(a, b)
    _emit(write_table_csv(c.space, c.values), args.out)
    return 0


def _cmd_modnorm(args) -> int:
    a = read_symbol(args.symbol)
    p, q = parse_exponent(args.p), parse_exponent(args.q)
    phi = Window.gaussian(a.space)
    value = sym_mod_norm(a, phi, p, q)
    print(norm_report("symbol", p, q, value, phi))
    return 0


def _cmd_wiener(args) -> int:
    a = read_symbol(args.symbol)
    ws = WeylSystem(a.space)
    phi = Window.gaussian(a.space)
    a0 = UnitalSymbol.from_symbol(a)
    checks = wiener_check(a0, phi, ws, nodes=args.nodes)
    for c in checks:
        print(c.to_json())
    if args.out:
        b0 = wiener_invert_direct(a0, phi, ws).b0
        Path(args.out).write_text(write_table_csv(a.space, b0.total()))
    return 0 if all(c.passed for c in checks) else 1


def _cmd_landau(args) -> int:
    rep = landau_demo(args.B, SampledLineGrid(2, args.L, args.n), gauge=args.gauge)
    buf = io.StringIO()
    _write_spectrum_buf(buf, rep)
    _emit(buf.getvalue(), args.out)
    print(json.dumps(rep.record(), default=_json_default), file=sys.stderr)
    return 0 if rep.passed() else 1


def _write_spectrum_buf(buf, rep) -> None:
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "eigenvalue", "expected", "degeneracy"])
    for k, lev in enumerate(rep.levels):
        w.writerow([k, repr(float(lev)), repr(float(rep.expected[k])), rep.degeneracies[k]])


def _cmd_orbit(args) -> int:
    from .kirillov import predual

    alg = _load_algebra(args.algebra)
    xi0 = _floats(args.xi0, "xi0")
    data = predual(alg, xi0)
    rec = data.record()
    print(json.dumps({"algebra": alg.name, "xi0": xi0, **rec}, sort_keys=True))
    return 0 if all(data.invariants().values()) else 1


COMMANDS = {
    "run": _cmd_run,
    "symbol-gen": _cmd_symbol_gen,
    "quantize": _cmd_quantize,
    "moyal": _cmd_moyal,
    "modnorm": _cmd_modnorm,
    "wiener": _cmd_wiener,
    "landau": _cmd_landau,
    "orbit": _cmd_orbit,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except NotInvertibleError as exc:
        print(f"weylkit {args.command}: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ExponentError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"weylkit {args.command}: error: {msg}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"weylkit {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
