"""Command line front end.

Model parameters come from flags, an optional key=value config file, or the
defaults, with precedence flags > file > defaults. All rates are in units of
gamma_perp; the cavity is specified by the ratio 2*kappa/gamma_perp.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ModelError
from .g2 import g2_bruteforce, g2_closed
from .model import (
    FrequencyGrid,
    ModelParams,
    commutator_spectrum,
    derive_populations,
    population_spectrum,
    validity_ratio,
)
from .montecarlo import MonteCarloConfig, run_monte_carlo
from .photon import mean_photon_closed, mean_photon_quadrature, photon_number_spectrum
from .sweep import (
    METHODS,
    SWEEPABLE,
    SweepSpec,
    parse_config,
    reproduce_figure,
    run_sweep,
    write_rows,
)
from .validation import run_validation

_PARAM_DEFAULTS = {
    "kappa_ratio": 1.0,
    "pump": 0.1,
    "n_th": 5.0,
    "gamma_par": 0.1,
    "n_emitters": 20.0,
    "f": 0.5,
}


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("model parameters (units of gamma_perp)")
    g.add_argument("--kappa-ratio", type=float, help="2*kappa/gamma_perp")
    g.add_argument("--pump", type=float, help="dimensionless pump P")
    g.add_argument("--n-th", type=float, help="threshold inversion N_th")
    g.add_argument("--gamma-par", type=float, help="population decay rate")
    g.add_argument("--n-emitters", type=float, help="total emitter count N_0")
    g.add_argument("--f", type=float, help="coupling structure factor")
    g.add_argument("--config", type=Path, help="key=value file with the same names")


def _resolve_params(args) -> ModelParams:
    values = dict(_PARAM_DEFAULTS)
    if args.config is not None:
        file_vals = parse_config(args.config)
        for key, val in file_vals.items():
            norm = key.replace("-", "_")
            if norm not in values:
                raise ModelError(f"unknown config key {key!r}")
            values[norm] = float(val)
    for key in values:
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    return ModelParams.from_ratio(
        values["kappa_ratio"],
        pump=values["pump"],
        n_threshold=values["n_th"],
        gamma_par=values["gamma_par"],
        n_emitters=values["n_emitters"],
        f_factor=values["f"],
    )


def _cmd_spectrum(args) -> int:
    params = _resolve_params(args)
    pops = derive_populations(params)
    if args.grid_omega_max is not None and args.grid_points is not None:
        grid = FrequencyGrid(omega_max=args.grid_omega_max, n_points=args.grid_points)
    else:
        grid = FrequencyGrid.for_model(params, pops, n_points=args.grid_points or 8193)
    w = grid.omegas()
    lines = ["# omega in units of gamma_perp",
             "omega,commutator,population,photon"]
    c = commutator_spectrum(params, pops, w)
    pop = population_spectrum(pops, w)
    phot = photon_number_spectrum(params, pops, w)
    for i in range(grid.n_points):
        lines.append(",".join(repr(float(v)) for v in (w[i], c[i], pop[i], phot[i])))
    _emit(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_mean_photon(args) -> int:
    params = _resolve_params(args)
    pops = derive_populations(params)
    results = []
    if args.method in ("closed", "both"):
        results.append(mean_photon_closed(params, pops))
    if args.method in ("quadrature", "both"):
        results.append(mean_photon_quadrature(params, pops, mode=args.mode))
    for res in results:
        print(f"n0 = {res.n0:.8g}  delta_n = {res.delta_n:.8g}  "
              f"n = {res.n_total:.8g}  [{res.method}]")
    print(f"validity_ratio = {validity_ratio(params):.6g}")
    return 0


def _cmd_g2(args) -> int:
    params = _resolve_params(args)
    pops = derive_populations(params)
    if args.method in ("closed", "both"):
        res = g2_closed(params, pops)
        print(f"g2 = {res.g2:.8g}  [{res.method}]")
    if args.method in ("cumulant", "both"):
        res = g2_bruteforce(params, pops, mode=args.mode)
        print(f"g2 = {res.g2:.8g}  cumulant = {res.cumulant:.8g}  "
              f"error ~ {res.error:.2g}  [{res.method}]")
    print(f"validity_ratio = {validity_ratio(params):.6g}")
    return 0


def _cmd_mc(args) -> int:
    params = _resolve_params(args)
    pops = derive_populations(params)
    config = MonteCarloConfig.for_model(params, pops, n_records=args.records, seed=args.seed)
    est = run_monte_carlo(params, pops, config)
    print(f"records = {est.n_records}  samples/record = {config.n_samples}  "
          f"duration = {config.duration:.4g}")
    print(f"n  = {est.n:.6g} +- {est.n_se:.2g}")
    print(f"g2 = {est.g2:.6g} +- {est.g2_se:.2g}")
    return 0


def _cmd_sweep(args) -> int:
    params = _resolve_params(args)
    spec = SweepSpec(
        base=params,
        variable=args.var.replace("-", "_"),
        start=args.start, stop=args.stop, steps=args.steps, scale=args.scale,
        methods=tuple(args.methods.split(",")),
        seed=args.seed, records=args.records,
    )
    rows = run_sweep(spec)
    if args.out is None:
        raise ModelError("sweep needs --out PATH")
    write_rows(rows, spec, args.out, fmt=args.format)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_figure(which: str, args) -> int:
    paths = reproduce_figure(which, n_emitters=args.n_emitters,
                             out_dir=args.out_dir, steps=args.steps)
    for p in paths:
        print(f"wrote {p}")
    return 0


def _cmd_validate(args) -> int:
    results = run_validation(skip_montecarlo=args.skip_montecarlo,
                             seed=args.seed, records=args.records)
    failed = 0
    for res in results:
        print(res.line())
        failed += not res.passed
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 1 if failed else 0


def _emit(out: Path | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srled",
        description="Below-threshold photon statistics of a small superradiant LED",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="emit photon, commutator and population spectra")
    _add_param_flags(p)
    p.add_argument("--grid-omega-max", type=float)
    p.add_argument("--grid-points", type=int)
    p.add_argument("--out", type=Path)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("mean-photon", help="mean photon number")
    _add_param_flags(p)
    p.add_argument("--method", choices=("closed", "quadrature", "both"), default="both")
    p.add_argument("--mode", choices=("delta", "exact"), default="delta")
    p.set_defaults(func=_cmd_mean_photon)

    p = sub.add_parser("g2", help="second-order autocorrelation")
    _add_param_flags(p)
    p.add_argument("--method", choices=("closed", "cumulant", "both"), default="both")
    p.add_argument("--mode", choices=("delta", "full"), default="delta")
    p.set_defaults(func=_cmd_g2)

    p = sub.add_parser("mc", help="Monte Carlo moment estimates")
    _add_param_flags(p)
    p.add_argument("--records", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("sweep", help="parameter sweep to CSV or JSON records")
    _add_param_flags(p)
    p.add_argument("--var", required=True,
                   choices=[v.replace("_", "-") for v in SWEEPABLE] + list(SWEEPABLE))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--methods", default="closed",
                   help=f"comma list from {','.join(METHODS)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--records", type=int, default=500)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--format", choices=("csv", "records"), default="csv")
    p.set_defaults(func=_cmd_sweep)

    for which in ("fig3", "fig4", "fig5"):
        p = sub.add_parser(f"reproduce-{which}",
                           help=f"emit the {which} dataset and plot script")
        p.add_argument("--n-emitters", type=float, required=True,
                       help="emitter count N_0 (not stated by the source figures)")
        p.add_argument("--out-dir", type=Path, default=Path(f"{which}_data"))
        p.add_argument("--steps", type=int, default=50)
        p.set_defaults(func=lambda args, w=which: _cmd_figure(w, args))

    p = sub.add_parser("validate", help="run the acceptance suite")
    p.add_argument("--skip-montecarlo", action="store_true")
    p.add_argument("--seed", type=int, default=505)
    p.add_argument("--records", type=int, default=500)
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
