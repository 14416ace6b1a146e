"""Command-line front end.

Subcommands: index, diagram, spectrum, wave, resonances, validate.
Options come from an optional JSON config file plus flags; flags win.
Sweeps run on a worker pool capped by MODWAVE_THREADS, with results
gathered in input order so outputs stay byte-stable.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

from . import hill, indices, output, pencil, validation
from .config import RunConfig, load_config, merge_overrides
from .dispersion import DispersionSymbol, parse_symbol, symbol_from_config
from .errors import ConfigError, ModwaveError
from .indices import Verdict
from .stokes import EquationKind, newton_wave


def _worker_count() -> int:
    env = os.environ.get("MODWAVE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError("MODWAVE_THREADS", f"not an integer: {env!r}") from None
    return min(8, os.cpu_count() or 1)


def _parallel_map(fn, items):
    items = list(items)
    workers = min(_worker_count(), max(1, len(items)))
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _resolve_symbol(cfg: RunConfig, args) -> DispersionSymbol:
    if getattr(args, "expr", None):
        params = dict(p.split("=", 1) for p in (getattr(args, "param", None) or []))
        sym = parse_symbol(args.expr, {k: float(v) for k, v in params.items()})
    elif getattr(args, "symbol", None):
        spec: dict = {"builtin": args.symbol}
        if getattr(args, "alpha", None) is not None:
            spec["params"] = {"alpha": args.alpha}
        sym = symbol_from_config(spec)
    elif cfg.symbol:
        sym = symbol_from_config(cfg.symbol)
    else:
        raise ConfigError("symbol", "need --symbol, --expr, or a config entry")
    for warning in sym.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return sym


def _emit_csv(cfg: RunConfig, header, rows, preamble=()) -> None:
    if cfg.output:
        output.write_csv(cfg.output, header, rows, preamble)
    else:
        for line in preamble:
            print(f"# {line}")
        sys.stdout.write(output.csv_text(header, rows))


def _warn_regime(cfg: RunConfig) -> None:
    for message in cfg.warnings():
        print(f"warning: {message}", file=sys.stderr)


def cmd_index(cfg: RunConfig, args) -> int:
    sym = _resolve_symbol(cfg, args)
    kind = cfg.equation_kind()
    ks = cfg.k_values()

    def one(k: float):
        report = indices.ind(kind, sym, k)
        verdict = report.verdict
        if verdict is Verdict.INCONCLUSIVE and kind is EquationKind.BOUSSINESQ:
            refined = pencil.pencil_verdict(kind, sym, k)
            verdict = {
                pencil.PencilVerdict.STABLE: Verdict.STABLE_NEAR_ORIGIN,
                pencil.PencilVerdict.UNSTABLE: Verdict.MODULATIONALLY_UNSTABLE,
                pencil.PencilVerdict.DEGENERATE: Verdict.DEGENERATE,
            }[refined]
        return (
            report.k, report.i1, report.i2m, report.i2p, report.i3m, report.i3p,
            report.i_eq, report.ind, verdict.value,
            "|".join(sorted(report.resonance_flags)),
        )

    rows = _parallel_map(one, ks)
    header = ["k", "i1", "i2m", "i2p", "i3m", "i3p", "i_eq", "ind", "verdict", "resonances"]
    _emit_csv(cfg, header, rows)
    return 0


def cmd_diagram(cfg: RunConfig, args) -> int:
    from .dispersion import fractional_symbol

    lo, hi = cfg.alpha_range
    if not (lo < hi) or cfg.alpha_steps < 2:
        raise ConfigError("alpha_range", "need lo < hi and alpha_steps >= 2")
    alphas = [lo + i * (hi - lo) / (cfg.alpha_steps - 1) for i in range(cfg.alpha_steps)]
    if cfg.k_range is None:
        cfg.k_range = (0.05, 3.0)
    ks = cfg.k_values()

    def sign(x: float) -> int:
        if abs(x) <= 1e-12:
            return 0
        return 1 if x > 0 else -1

    def one(alpha: float):
        sym = fractional_symbol(alpha)
        grid_rows = []
        for k in ks:
            s_kdv = sign(indices.ind(EquationKind.KDV, sym, k).ind)
            s_bbm = sign(indices.ind(EquationKind.BBM, sym, k).ind)
            s_bq = sign(indices.ind(EquationKind.BOUSSINESQ, sym, k).ind)
            grid_rows.append((alpha, k, s_kdv, s_bbm, s_bq))
        k_bbm = indices.critical_wavenumber(EquationKind.BBM, sym, (ks[0], ks[-1]))
        k_bq = indices.critical_wavenumber(EquationKind.BOUSSINESQ, sym, (ks[0], ks[-1]))
        k_bbm = None if k_bbm is None else float(k_bbm)
        k_bq = None if k_bq is None else float(k_bq)
        return grid_rows, (alpha, k_bbm, k_bq)

    results = _parallel_map(one, alphas)
    rows = [row for grid_rows, _ in results for row in grid_rows]
    header = ["alpha", "k", "sign_ind_kdv", "sign_ind_bbm", "sign_ind_bnesq"]
    curve_rows = [c for _, c in results]
    preamble = [
        "critical wave numbers per alpha (bbm, bnesq): "
        + "; ".join(f"{a:g}:{kb!r},{kq!r}" for a, kb, kq in curve_rows)
    ]
    _emit_csv(cfg, header, rows, preamble)
    if cfg.svg:
        curves = [
            ("ind_bbm = 0", [(a, kb) for a, kb, _ in curve_rows if kb is not None]),
            ("ind_bnesq = 0", [(a, kq) for a, _, kq in curve_rows if kq is not None]),
        ]
        output.write_svg(cfg.svg, output.svg_level_curves(curves, "alpha", "k"))
    return 0


def cmd_spectrum(cfg: RunConfig, args) -> int:
    sym = _resolve_symbol(cfg, args)
    kind = cfg.equation_kind()
    _warn_regime(cfg)
    ks = cfg.k_values()
    if len(ks) != 1:
        raise ConfigError("k", "spectrum needs a single --k")
    k = ks[0]
    xis = cfg.xi_values()
    wave = newton_wave(kind, sym, k, cfg.a, cfg.n_modes)

    def one(xi: float):
        op = hill.assemble(kind, sym, wave, xi, cfg.n_modes)
        return hill.spectrum(op, sym)

    slices = _parallel_map(one, xis)
    rows = []
    for sl in slices:
        for val in sl.eigenvalues:
            rows.append((sl.xi, float(val.real), float(val.imag)))
    preamble = [
        f"equation={kind.value} symbol={sym.name} k={k!r} a={cfg.a!r} "
        f"n_modes={cfg.n_modes} c={wave.c!r} residual={wave.residual!r}"
    ]
    _emit_csv(cfg, ["xi", "re", "im"], rows, preamble)
    if cfg.summary:
        payload = {
            "equation": kind.value,
            "symbol": sym.name,
            "k": k,
            "a": cfg.a,
            "n_modes": cfg.n_modes,
            "max_re": {repr(sl.xi): sl.max_re for sl in slices},
        }
        output.write_json(cfg.summary, payload)
    return 0


def cmd_wave(cfg: RunConfig, args) -> int:
    sym = _resolve_symbol(cfg, args)
    kind = cfg.equation_kind()
    _warn_regime(cfg)
    ks = cfg.k_values()
    if len(ks) != 1:
        raise ConfigError("k", "wave needs a single --k")
    sol = newton_wave(kind, sym, ks[0], cfg.a, cfg.n_modes, tol=cfg.tol)
    preamble = [
        f"equation={kind.value} symbol={sym.name}",
        f"k={sol.k!r} a={sol.a!r} c={sol.c!r} residual={sol.residual!r}",
    ]
    if sol.q_hat is not None:
        header = ["n", "u_hat", "q_hat"]
        rows = [(n, float(sol.u_hat[n]), float(sol.q_hat[n])) for n in range(sol.n_modes + 1)]
    else:
        header = ["n", "u_hat"]
        rows = [(n, float(sol.u_hat[n])) for n in range(sol.n_modes + 1)]
    _emit_csv(cfg, header, rows, preamble)
    return 0


def cmd_resonances(cfg: RunConfig, args) -> int:
    from .dispersion import check_assumptions

    sym = _resolve_symbol(cfg, args)
    kind = cfg.equation_kind()
    if cfg.k_range is None:
        raise ConfigError("k_range", "resonances needs --k-range")
    scan = indices.find_resonances(sym, kind, cfg.k_range)
    rows = [(p.k, p.kind) for p in scan.points]
    preamble = []
    if scan.degenerate_everywhere:
        preamble.append(
            "identically degenerate on this range: "
            + ",".join(sorted(scan.degenerate_everywhere))
        )
    grid = [cfg.k_range[0] + i * (cfg.k_range[1] - cfg.k_range[0]) / 199 for i in range(200)]
    report = check_assumptions(sym, grid, cfg.n_max)
    for k_hit, n in report.m4_violations:
        if n > 2:  # n = 2 is already reported as R3
            preamble.append(f"harmonic resonance m(k)=m({n}k) near k={k_hit!r}")
    _emit_csv(cfg, ["k", "type"], rows, preamble)
    return 0


def cmd_validate(cfg: RunConfig, args) -> int:
    results = validation.run_checks(only=cfg.only)
    if not results:
        print(f"no checks match --only {cfg.only!r}")
        return 2
    for res in results:
        print(res.line())
        print(f"       ({res.runtime:.2f} s)")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modwave",
        description=(
            "Modulational stability of small periodic traveling waves for "
            "nonlocal dispersive equations: closed-form indices, reduced "
            "spectral pencils, and Floquet-Bloch spectra."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_symbol=True):
        p.add_argument("--config", help="JSON config file; flags override it")
        if with_symbol:
            p.add_argument("--equation", choices=["kdv", "bbm", "boussinesq"])
            p.add_argument("--symbol", help="builtin symbol name")
            p.add_argument("--alpha", type=float, help="parameter of the fractional family")
            p.add_argument("--expr", help="symbol expression in k, e.g. '1/(1+k^2)'")
            p.add_argument("--param", action="append", help="name=value for --expr")
        p.add_argument("-o", "--output", help="output CSV path (default: stdout)")

    p_index = sub.add_parser("index", help="instability index sweep")
    add_common(p_index)
    p_index.add_argument("--k", type=float)
    p_index.add_argument("--k-range", nargs=2, type=float, metavar=("LO", "HI"))
    p_index.add_argument("--k-steps", type=int)
    p_index.set_defaults(fn=cmd_index)

    p_diag = sub.add_parser("diagram", help="stability diagram for the fractional family")
    add_common(p_diag, with_symbol=False)
    p_diag.add_argument("--alpha-range", nargs=2, type=float, metavar=("LO", "HI"))
    p_diag.add_argument("--alpha-steps", type=int)
    p_diag.add_argument("--k-range", nargs=2, type=float, metavar=("LO", "HI"))
    p_diag.add_argument("--k-steps", type=int)
    p_diag.add_argument("--svg", help="write level curves to this SVG file")
    p_diag.set_defaults(fn=cmd_diagram)

    p_spec = sub.add_parser("spectrum", help="Floquet-Bloch spectra of the linearization")
    add_common(p_spec)
    p_spec.add_argument("--k", type=float)
    p_spec.add_argument("--a", type=float)
    p_spec.add_argument("--xi", type=float)
    p_spec.add_argument("--xi-range", nargs=2, type=float, metavar=("LO", "HI"))
    p_spec.add_argument("--xi-steps", type=int)
    p_spec.add_argument("--n-modes", type=int)
    p_spec.add_argument("--summary", help="write a JSON summary (max Re per xi)")
    p_spec.set_defaults(fn=cmd_spectrum)

    p_wave = sub.add_parser("wave", help="Newton-Galerkin traveling wave")
    add_common(p_wave)
    p_wave.add_argument("--k", type=float)
    p_wave.add_argument("--a", type=float)
    p_wave.add_argument("--n-modes", type=int)
    p_wave.add_argument("--tol", type=float)
    p_wave.set_defaults(fn=cmd_wave)

    p_res = sub.add_parser("resonances", help="locate resonance wave numbers")
    add_common(p_res)
    p_res.add_argument("--k-range", nargs=2, type=float, metavar=("LO", "HI"))
    p_res.add_argument("--n-max", type=int,
                       help="scan harmonic resonances m(k)=m(nk) up to this n")
    p_res.set_defaults(fn=cmd_resonances)

    p_val = sub.add_parser("validate", help="run the acceptance checks")
    p_val.add_argument("--config", help="JSON config file; flags override it")
    p_val.add_argument("--only", help="run only checks whose name contains this")
    p_val.set_defaults(fn=cmd_validate)

    return parser


_OVERRIDE_KEYS = (
    "equation", "k", "k_range", "k_steps", "a", "xi", "xi_range", "xi_steps",
    "n_modes", "n_max", "tol", "alpha_range", "alpha_steps", "output",
    "summary", "svg", "only",
)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config) if getattr(args, "config", None) else RunConfig()
        overrides = {}
        for key in _OVERRIDE_KEYS:
            if hasattr(args, key):
                val = getattr(args, key)
                if val is not None and key in ("k_range", "xi_range", "alpha_range"):
                    val = tuple(val)
                overrides[key] = val
        cfg = merge_overrides(cfg, overrides)
        return args.fn(cfg, args)
    except ModwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
