"""Command-line front end.

Subcommands:

* ``gamma``     -- tabulate a spectral function to CSV or JSON;
* ``verify``    -- run one of the independent oracle checks and write a report;
* ``classify``  -- oscillation analysis of a table or builtin calibration;
* ``selftest``  -- run the full acceptance battery.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence
(partial tables are still written, with per-row flags), 4 verification
failure.

Output files are deterministic: identical configuration produces
byte-identical bytes.  Every file embeds the library version and the
configuration that produced it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .classify import (
    DEFAULT_THRESHOLD,
    GridFunction,
    OscillationMetric,
    builtin_calibration,
    oscillation_modulus,
)
from .errors import ConfigError, DomainError, InsufficientSamplingError
from .oracle import (
    CoherentState,
    FormComparison,
    WavePacket,
    hyperbolic_form_direct,
    hyperbolic_form_spectral,
    normalization_probe,
    parabolic_form_direct,
    parabolic_form_spectral,
    resolution_apply_check,
    toeplitz_matrix_disk,
    unitarity_check_parabolic,
)
from .spectra import (
    compactness_estimate,
    gamma_elliptic,
    gamma_hyperbolic,
    gamma_parabolic,
    sup_norm,
)
from .symbols import Geometry, format_symbol, parse_symbol

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFY = 4

VERIFY_CASES = ("elliptic-diag", "parabolic-form", "hyperbolic-form",
                "unitarity", "kernel", "normalization")


def _fmt(x) -> str:
    return f"{float(x):.15g}"


def _threads() -> int:
    raw = os.environ.get("TOEPLITZ_SPECTRA_THREADS", "")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        raise ConfigError(f"not an integer: {raw!r}", field="TOEPLITZ_SPECTRA_THREADS")


def parse_grid(spec: str, geometry: Geometry) -> np.ndarray:
    """Grid syntax.

    elliptic: ``a:b`` or ``a:b:step`` -- inclusive integer range.
    parabolic/hyperbolic: ``a:b:n`` (n linearly spaced points, inclusive),
    ``log:a:b:n`` (geometric), or ``list:v1,v2,...``.
    """
    spec = spec.strip()
    try:
        if geometry is Geometry.ELLIPTIC:
            parts = [int(p) for p in spec.split(":")]
            if len(parts) == 2:
                lo, hi, step = parts[0], parts[1], 1
            elif len(parts) == 3:
                lo, hi, step = parts
            else:
                raise ValueError("expected a:b or a:b:step")
            if lo < 0 or hi < lo or step < 1:
                raise ValueError("need 0 <= a <= b and step >= 1")
            return np.arange(lo, hi + 1, step)
        if spec.startswith("list:"):
            return np.array([float(v) for v in spec[5:].split(",") if v.strip()])
        if spec.startswith("log:"):
            a, b, n = spec[4:].split(":")
            a, b, n = float(a), float(b), int(n)
            if a <= 0 or b <= a or n < 1:
                raise ValueError("log grid needs 0 < a < b and n >= 1")
            return np.geomspace(a, b, n)
        a, b, n = spec.split(":")
        a, b, n = float(a), float(b), int(n)
        if b <= a or n < 1:
            raise ValueError("linear grid needs a < b and n >= 1")
        return np.linspace(a, b, n)
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"bad grid {spec!r}: {exc}", field="grid")


def _load_config_file(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(str(exc), field="config")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}", field="config")
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path}: expected a JSON object", field="config")
    return cfg


_CONFIG_ALIASES = {"lam": ("lambda",), "input": ("in",), "size": ("N", "n")}


def _merge(args, key, cfg, default=None):
    val = getattr(args, key, None)
    if val is not None:
        return val
    for name in (key,) + _CONFIG_ALIASES.get(key, ()):
        if name in cfg:
            return cfg[name]
    return default


def _compute_spectral(geometry, symbol, lam, grid, tol):
    fn = {
        Geometry.ELLIPTIC: gamma_elliptic,
        Geometry.PARABOLIC: gamma_parabolic,
        Geometry.HYPERBOLIC: gamma_hyperbolic,
    }[geometry]
    workers = _threads()
    if workers <= 1 or len(grid) < 2 * workers:
        return fn(symbol, lam, grid, tol=tol)
    chunks = np.array_split(np.asarray(grid), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda g: fn(symbol, lam, g, tol=tol), chunks))
    first = parts[0]
    first.grid = np.concatenate([p.grid for p in parts])
    first.values = np.concatenate([p.values for p in parts])
    first.flags = np.concatenate([p.flags for p in parts])
    return first


def _write_table(path, fmt, header_items, config_line, grid, values, flags):
    rows = list(zip(grid, values, flags))
    if fmt == "csv":
        lines = [
            "# toeplitz-spectra v" + __version__ + " " + header_items,
            "# config " + config_line,
            "grid_point,re,im,flag",
        ]
        for t, v, ok in rows:
            lines.append(f"{_fmt(t)},{_fmt(v.real)},{_fmt(v.imag)},{0 if ok else 1}")
        payload = "\n".join(lines) + "\n"
    else:
        doc = {
            "library": "toeplitz-spectra",
            "version": __version__,
            "header": header_items,
            "config": config_line,
            "rows": [
                {"grid_point": float(t), "re": float(v.real), "im": float(v.imag),
                 "flag": 0 if ok else 1}
                for t, v, ok in rows
            ],
        }
        payload = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(payload)


def cmd_gamma(args) -> int:
    cfg = _load_config_file(args.config) if args.config else {}
    geometry = Geometry.parse(_require_opt(_merge(args, "geometry", cfg), "geometry"))
    lam = float(_require_opt(_merge(args, "lam", cfg), "lambda"))
    symbol_text = _require_opt(_merge(args, "symbol", cfg), "symbol")
    grid_spec = _require_opt(_merge(args, "grid", cfg), "grid")
    tol = float(_merge(args, "tol", cfg, 1e-9))
    out = _merge(args, "out", cfg, "gamma.csv")
    fmt = _merge(args, "format", cfg, None) or ("json" if str(out).endswith(".json") else "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown output format {fmt!r}", field="format")

    symbol = parse_symbol(symbol_text, geometry)
    grid = parse_grid(grid_spec, geometry)
    if geometry is Geometry.PARABOLIC and np.any(grid <= 0):
        raise ConfigError("parabolic grids must be positive", field="grid")

    sf = _compute_spectral(geometry, symbol, lam, grid, tol)

    header = f"geometry={geometry.value} lambda={_fmt(lam)} symbol={format_symbol(symbol)}"
    config_line = f"grid={grid_spec} tol={_fmt(tol)} format={fmt}"
    _write_table(out, fmt, header, config_line, sf.grid, sf.values, sf.flags)

    report = compactness_estimate(sf)
    print(f"wrote {out} ({len(sf.grid)} rows)")
    print(f"sup_norm (grid lower bound): {_fmt(sup_norm(sf))}")
    print(f"compactness: {report.verdict} (tail_max={_fmt(report.tail_max)}, head_max={_fmt(report.head_max)})")
    if not np.all(sf.flags):
        print(f"warning: {int(np.sum(~sf.flags))} grid points did not meet the tolerance", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def _require_opt(value, name):
    if value is None:
        raise ConfigError("required option missing", field=name)
    return value


def _comparison_record(name, comp: FormComparison, tolerance):
    return {
        "name": name,
        "direct": [comp.direct.real, comp.direct.imag],
        "spectral": [comp.spectral.real, comp.spectral.imag],
        "abs_err": comp.abs_err,
        "rel_err": comp.rel_err,
        "tolerance": tolerance,
        "pass": bool(comp.rel_err <= tolerance),
        "settings": {k: (str(v) if not isinstance(v, (int, float, bool)) else v)
                     for k, v in comp.settings.items()},
    }


def cmd_verify(args) -> int:
    cfg = _load_config_file(args.config) if args.config else {}
    case = args.case
    lam = float(_merge(args, "lam", cfg, 0.0))
    out = _merge(args, "out", cfg, "verify.json")
    report = {"library": "toeplitz-spectra", "version": __version__, "case": case,
              "lambda": lam, "comparisons": []}
    failures = 0

    if case == "elliptic-diag":
        size = int(_merge(args, "size", cfg, 16))
        symbol_text = _merge(args, "symbol", cfg, "constant:1")
        symbol = parse_symbol(symbol_text, Geometry.ELLIPTIC)
        tm = toeplitz_matrix_disk(symbol, lam, size)
        sf = gamma_elliptic(symbol, lam, np.arange(size))
        diag = np.diag(tm.entries)
        denom = np.maximum(np.abs(sf.values), 1e-300)
        diag_rel = float(np.max(np.abs(diag - sf.values) / denom))
        off = tm.offdiag_max()
        ok = off < 1e-8 and diag_rel <= 1e-6
        failures += 0 if ok else 1
        report["matrix"] = {
            "symbol": format_symbol(symbol),
            "size": size,
            "entries_re": tm.entries.real.tolist(),
            "entries_im": tm.entries.imag.tolist(),
            "offdiag_max": off,
            "diag_rel_err": diag_rel,
            "gamma": sf.values.real.tolist(),
            "pass": ok,
            "tolerances": {"offdiag": 1e-8, "diag_rel": 1e-6},
        }
    elif case == "parabolic-form":
        symbol_text = _merge(args, "symbol", cfg, "constant:1")
        mu = float(_merge(args, "mu", cfg, 1.0))
        nu = float(_merge(args, "nu", cfg, 1.0))
        symbol = parse_symbol(symbol_text, Geometry.PARABOLIC)
        direct, settings = parabolic_form_direct(symbol, lam, mu, nu, tol=1e-8)
        sf = gamma_parabolic(symbol, lam, [1.0])
        spectral = parabolic_form_spectral(sf, lam, mu, nu)
        comp = FormComparison.of(direct, spectral, settings)
        rec = _comparison_record(f"<T_a f_{mu}, f_{nu}>", comp, 1e-5)
        report["comparisons"].append(rec)
        failures += 0 if rec["pass"] else 1
    elif case == "hyperbolic-form":
        symbol_text = _merge(args, "symbol", cfg, "constant:1")
        eta0 = float(_merge(args, "eta0", cfg, 0.0))
        sigma = float(_merge(args, "sigma", cfg, 1.0))
        symbol = parse_symbol(symbol_text, Geometry.HYPERBOLIC)
        packet = WavePacket(eta0, sigma)
        direct, settings = hyperbolic_form_direct(symbol, lam, packet, tol=1e-7)
        sf = gamma_hyperbolic(symbol, lam, [0.0])
        spectral = hyperbolic_form_spectral(sf, packet)
        comp = FormComparison.of(direct, spectral, settings)
        rec = _comparison_record(f"<T_a f, f> packet({eta0},{sigma})", comp, 1e-4)
        report["comparisons"].append(rec)
        failures += 0 if rec["pass"] else 1
    elif case == "unitarity":
        mu = float(_merge(args, "mu", cfg, 1.0))
        nu = float(_merge(args, "nu", cfg, 1.0))
        comp = unitarity_check_parabolic(lam, mu, nu)
        rec = _comparison_record(f"<f_{mu}, f_{nu}> vs closed form", comp, 1e-6)
        report["comparisons"].append(rec)
        failures += 0 if rec["pass"] else 1
    elif case == "kernel":
        eta_cut = float(_merge(args, "eta", cfg, 2.0))
        mu = float(_merge(args, "mu", cfg, 1.0))
        z = complex(_merge(args, "z", cfg, "1j").replace(" ", ""))
        comp = resolution_apply_check(lam, eta_cut, mu, z, tol=1e-7)
        rec = _comparison_record(f"E({eta_cut}) f_{mu} at z={z}", comp, 1e-5)
        report["comparisons"].append(rec)
        failures += 0 if rec["pass"] else 1
    elif case == "normalization":
        probe = normalization_probe(lam)
        for name, comp in probe.comparisons.items():
            report["comparisons"].append(_comparison_record(name, comp, 1e-4))
        report["winner"] = probe.winner
        ok = probe.winner == "1/Gamma(lam+1)"
        failures += 0 if ok else 1
    else:
        raise ConfigError(f"unknown case {case!r}; known: {', '.join(VERIFY_CASES)}", field="case")

    report["pass"] = failures == 0
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(report, indent=1, sort_keys=True) + "\n")
    print(f"wrote {out}: {'pass' if failures == 0 else 'FAIL'}")
    return EXIT_OK if failures == 0 else EXIT_VERIFY


def _read_table_csv(path):
    grid, values = [], []
    label = path
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                if line.startswith("# toeplitz-spectra"):
                    label = line[2:]
                continue
            if line.startswith("grid_point"):
                continue
            cells = line.split(",")
            grid.append(float(cells[0]))
            values.append(complex(float(cells[1]), float(cells[2])))
    return GridFunction(label, np.array(grid), np.array(values))


def cmd_classify(args) -> int:
    cfg = _load_config_file(args.config) if args.config else {}
    metric = OscillationMetric.parse(_require_opt(_merge(args, "metric", cfg), "metric"))
    threshold = float(_merge(args, "threshold", cfg, DEFAULT_THRESHOLD))
    out = _merge(args, "out", cfg, "classify.json")
    builtin_name = _merge(args, "builtin", cfg)
    table = _merge(args, "input", cfg)
    if (builtin_name is None) == (table is None):
        raise ConfigError("provide exactly one of --builtin or --in", field="input")
    phi = builtin_calibration(builtin_name) if builtin_name else _read_table_csv(table)
    report = oscillation_modulus(phi, metric, threshold=threshold)
    doc = {
        "library": "toeplitz-spectra",
        "version": __version__,
        "label": report.label,
        "metric": metric.value,
        "threshold": report.threshold,
        "delta_grid": list(report.delta_grid),
        "modulus": [None if math.isnan(m) else m for m in report.modulus],
        "verdict": report.verdict,
        "witness": list(report.witness) if report.witness else None,
    }
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    print(f"wrote {out}: {report.verdict}")
    return EXIT_OK


def cmd_selftest(_args) -> int:
    from .acceptance import run_all

    results = run_all(verbose=True)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="toeplitz-spectra",
        description="Spectral functions of invariant Toeplitz-operator symbols and their verification.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gamma", help="tabulate a spectral function")
    g.add_argument("--geometry", choices=[x.value for x in Geometry])
    g.add_argument("--lambda", dest="lam", type=float, help="weight parameter (> -1)")
    g.add_argument("--symbol", help="symbol text, e.g. constant:1 or sum(indicator:0,0.5; delta:loc=0.25)")
    g.add_argument("--grid", help="a:b (elliptic) | a:b:n | log:a:b:n | list:v1,v2,...")
    g.add_argument("--tol", type=float, help="per-point quadrature tolerance (default 1e-9)")
    g.add_argument("--out", help="output path (default gamma.csv)")
    g.add_argument("--format", choices=["csv", "json"])
    g.add_argument("--config", help="JSON config file; command-line flags override it")
    g.set_defaults(func=cmd_gamma)

    v = sub.add_parser("verify", help="run an independent oracle check")
    v.add_argument("case", choices=VERIFY_CASES)
    v.add_argument("--lambda", dest="lam", type=float)
    v.add_argument("--symbol")
    v.add_argument("--N", dest="size", type=int, help="matrix truncation size (elliptic-diag)")
    v.add_argument("--mu", type=float)
    v.add_argument("--nu", type=float)
    v.add_argument("--eta0", type=float)
    v.add_argument("--sigma", type=float)
    v.add_argument("--eta", type=float, help="spectral cutoff (kernel case)")
    v.add_argument("--z", help="evaluation point, e.g. 1+1j (kernel case)")
    v.add_argument("--out")
    v.add_argument("--config")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("classify", help="oscillation analysis")
    c.add_argument("--in", dest="input", help="CSV table produced by the gamma command")
    c.add_argument("--builtin", choices=["reflection", "hmv", "hyp_delta"])
    c.add_argument("--metric", choices=[m.value for m in OscillationMetric])
    c.add_argument("--threshold", type=float)
    c.add_argument("--out")
    c.add_argument("--config")
    c.set_defaults(func=cmd_classify)

    s = sub.add_parser("selftest", help="run the acceptance battery")
    s.set_defaults(func=cmd_selftest)
    return p


def _preprocess(argv):
    # let values like "-10:10:401" follow --grid / --z without argparse
    # mistaking them for option names
    out = []
    join_next = None
    for arg in argv:
        if join_next is not None:
            out.append(f"{join_next}={arg}")
            join_next = None
        elif arg in ("--grid", "--z") :
            join_next = arg
        else:
            out.append(arg)
    if join_next is not None:
        out.append(join_next)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_preprocess(list(argv)))
    except SystemExit as exc:
        # argparse already printed a usage message; usage errors are config
        # errors, --help/--version exits are passed through
        return EXIT_CONFIG if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ConfigError, InsufficientSamplingError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
