"""Parameter sweeps, figure datasets, and flat-file output.

Sweeps vary exactly one model field over a linear or log range and compute
the requested method columns per point. Rows never abort the sweep: model
errors (for example crossing threshold mid-range) land in the row's flag
column. Output is CSV (a units comment line plus a header row) or
line-delimited JSON records; identical spec and seed give byte-identical
files, so no timestamps or environment data are written.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidParamsError, ModelError
from .g2 import g2_bruteforce, g2_closed
from .model import ModelParams, derive_populations, validity_ratio
from .montecarlo import MonteCarloConfig, run_monte_carlo
from .photon import mean_photon_closed, mean_photon_quadrature

SWEEPABLE = ("kappa_ratio", "pump", "n_th", "gamma_par", "n_emitters")
METHODS = ("closed", "quadrature", "cumulant", "montecarlo")

_VALIDITY_WARN = 0.1


@dataclass(frozen=True)
class SweepSpec:
    """One-variable sweep description."""

    base: ModelParams
    variable: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"
    methods: tuple[str, ...] = ("closed",)
    seed: int = 0
    records: int = 500

    def __post_init__(self):
        if self.variable not in SWEEPABLE:
            raise InvalidParamsError(f"swept variable must be one of {SWEEPABLE}")
        if self.steps < 2:
            raise InvalidParamsError("steps must be >= 2")
        if self.scale not in ("linear", "log"):
            raise InvalidParamsError("scale must be 'linear' or 'log'")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise InvalidParamsError(f"unknown methods {sorted(unknown)}")
        if self.scale == "log" and (self.start <= 0.0 or self.stop <= 0.0):
            raise InvalidParamsError("log scale needs positive endpoints")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(np.log10(self.start), np.log10(self.stop), self.steps)
        return np.linspace(self.start, self.stop, self.steps)

    def params_at(self, value: float) -> ModelParams:
        b = self.base
        if self.variable == "kappa_ratio":
            return dataclasses.replace(b, kappa=0.5 * value * b.gamma_perp)
        if self.variable == "pump":
            return dataclasses.replace(b, pump=value)
        if self.variable == "n_th":
            return dataclasses.replace(b, n_threshold=value)
        if self.variable == "gamma_par":
            return dataclasses.replace(b, gamma_par=value)
        return dataclasses.replace(b, n_emitters=value)


@dataclass
class SweepRow:
    value: float
    n0: float | None = None
    delta_n: float | None = None
    n_closed: float | None = None
    g2_closed: float | None = None
    n_quad: float | None = None
    g2_cumulant: float | None = None
    g2_mc: float | None = None
    g2_mc_se: float | None = None
    validity_ratio: float | None = None
    flags: str = ""


def _columns(methods) -> list[str]:
    cols = ["n0", "delta_n", "n_closed", "g2_closed"]
    if "quadrature" in methods:
        cols.append("n_quad")
    if "cumulant" in methods:
        cols.append("g2_cumulant")
    if "montecarlo" in methods:
        cols += ["g2_mc", "g2_mc_se"]
    return cols


def compute_row(spec: SweepSpec, value: float) -> SweepRow:
    row = SweepRow(value=float(value))
    flags = []
    try:
        params = spec.params_at(value)
        row.validity_ratio = validity_ratio(params)
        if row.validity_ratio > _VALIDITY_WARN:
            flags.append("validity_ratio_above_0.1")
        pops = derive_populations(params)
        mp = mean_photon_closed(params, pops)
        row.n0, row.delta_n, row.n_closed = mp.n0, mp.delta_n, mp.n_total
        row.g2_closed = g2_closed(params, pops).g2
        if "quadrature" in spec.methods:
            row.n_quad = mean_photon_quadrature(params, pops, mode="delta").n_total
        if "cumulant" in spec.methods:
            row.g2_cumulant = g2_bruteforce(params, pops, mode="delta").g2
        if "montecarlo" in spec.methods:
            config = MonteCarloConfig.for_model(params, pops,
                                                n_records=spec.records, seed=spec.seed)
            est = run_monte_carlo(params, pops, config)
            row.g2_mc, row.g2_mc_se = est.g2, est.g2_se
    except ModelError as exc:
        flags.append(type(exc).__name__.removesuffix("Error"))
    row.flags = ";".join(flags)
    return row


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per grid point; row errors are flagged, never raised."""
    return [compute_row(spec, v) for v in spec.grid()]


# ---------------------------------------------------------------------------
# Flat-file output
# ---------------------------------------------------------------------------

_UNITS_COMMENT = "# rates and frequencies in units of gamma_perp; n, delta_n, g2 dimensionless"


def _format(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def write_rows(rows: list[SweepRow], spec: SweepSpec, path: Path, fmt: str = "csv") -> None:
    """Write sweep rows as CSV or line-delimited JSON records."""
    path = Path(path)
    cols = _columns(spec.methods)
    if fmt == "csv":
        lines = [_UNITS_COMMENT,
                 ",".join(["swept_var", "value"] + cols + ["validity_ratio", "flags"])]
        for row in rows:
            cells = [spec.variable, _format(row.value)]
            cells += [_format(getattr(row, c)) for c in cols]
            cells += [_format(row.validity_ratio), row.flags]
            lines.append(",".join(cells))
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "records":
        with path.open("w") as fh:
            for row in rows:
                rec = {"swept_var": spec.variable, "value": row.value}
                rec.update({c: getattr(row, c) for c in cols})
                rec["validity_ratio"] = row.validity_ratio
                rec["flags"] = row.flags
                fh.write(json.dumps(rec) + "\n")
    else:
        raise InvalidParamsError(f"unknown format {fmt!r}")


def read_rows(path: Path) -> list[dict]:
    """Parse a file written by write_rows back into dicts (exact floats)."""
    path = Path(path)
    text = path.read_text().splitlines()
    if text and text[0].startswith("{"):
        return [json.loads(line) for line in text if line.strip()]
    rows = []
    header = None
    for line in text:
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = line.split(",")
            continue
        cells = line.split(",")
        rec = {}
        for key, cell in zip(header, cells):
            if key in ("swept_var", "flags"):
                rec[key] = cell
            else:
                rec[key] = float(cell) if cell else None
        rows.append(rec)
    return rows


# ---------------------------------------------------------------------------
# Figure datasets
# ---------------------------------------------------------------------------

_FIG_PUMP = 0.1
_FIG_GAMMA_PAR = 0.1

_PLOT_TEMPLATE = '''"""Plot {figure} from the emitted datasets (run: python {script})."""
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).parent
SERIES = {series!r}
XCOL, YCOL = {xcol!r}, {ycol!r}

fig, ax = plt.subplots(figsize=(6, 4))
for fname, label in SERIES:
    xs, ys = [], []
    with open(HERE / fname) as fh:
        reader = csv.DictReader(row for row in fh if not row.startswith("#"))
        for rec in reader:
            if rec[YCOL]:
                xs.append(float(rec[XCOL]))
                ys.append(float(rec[YCOL]))
    ax.plot(xs, ys, label=label)
ax.set_xscale({xscale!r})
ax.set_xlabel({xlabel!r})
ax.set_ylabel({ylabel!r})
ax.legend()
fig.tight_layout()
fig.savefig(HERE / "{figure}.png", dpi=160)
print("wrote", HERE / "{figure}.png")
'''


def reproduce_figure(which: str, n_emitters: float, out_dir: Path,
                     steps: int = 50, base: ModelParams | None = None) -> list[Path]:
    """Emit per-curve sweep datasets plus a plotting script.

    fig3: Delta_n vs 2 kappa/gamma_perp for N_th in {15, 10, 5}
    fig4: g2 vs 2 kappa/gamma_perp for N_th in {15, 10, 5}
    fig5: g2 vs pump for (2 kappa/gamma_perp, N_th) in {6, 2, 0.2} x {5, 10}

    The emitter count never appears in the source figures, so it is an
    explicit input here.
    """
    if which not in ("fig3", "fig4", "fig5"):
        raise InvalidParamsError("figure must be fig3, fig4 or fig5")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    series: list[tuple[str, str]] = []

    if which in ("fig3", "fig4"):
        ycol = "delta_n" if which == "fig3" else "g2_closed"
        for n_th in (15.0, 10.0, 5.0):
            base_params = ModelParams(kappa=0.5, gamma_par=_FIG_GAMMA_PAR, pump=_FIG_PUMP,
                                      n_threshold=n_th, n_emitters=n_emitters)
            spec = SweepSpec(base=base_params, variable="kappa_ratio",
                             start=0.1, stop=10.0, steps=steps, scale="log")
            fname = f"{which}_nth{int(n_th)}.csv"
            write_rows(run_sweep(spec), spec, out_dir / fname)
            written.append(out_dir / fname)
            series.append((fname, f"N_th = {int(n_th)}"))
        xcol, xscale = "value", "log"
        xlabel = "2*kappa/gamma_perp"
        ylabel = "Delta_n" if which == "fig3" else "g2"
    else:
        ycol, xcol, xscale = "g2_closed", "value", "linear"
        xlabel, ylabel = "pump P", "g2"
        for ratio in (6.0, 2.0, 0.2):
            for n_th in (5.0, 10.0):
                base_params = ModelParams.from_ratio(ratio, gamma_par=_FIG_GAMMA_PAR,
                                                     pump=_FIG_PUMP, n_threshold=n_th,
                                                     n_emitters=n_emitters)
                spec = SweepSpec(base=base_params, variable="pump",
                                 start=0.01, stop=1.0, steps=steps)
                style = "solid" if n_th == 5.0 else "dashed"
                fname = f"fig5_ratio{ratio:g}_nth{int(n_th)}.csv"
                write_rows(run_sweep(spec), spec, out_dir / fname)
                written.append(out_dir / fname)
                series.append((fname, f"2k/g = {ratio:g}, N_th = {int(n_th)} ({style})"))

    script = out_dir / f"plot_{which}.py"
    script.write_text(_PLOT_TEMPLATE.format(
        figure=which, script=script.name, series=series,
        xcol=xcol, ycol=ycol, xscale=xscale, xlabel=xlabel, ylabel=ylabel,
    ))
    written.append(script)
    return written


# ---------------------------------------------------------------------------
# key=value config files
# ---------------------------------------------------------------------------

def parse_config(path: Path) -> dict[str, str]:
    """Plain key=value lines; '#' starts a comment."""
    out: dict[str, str] = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParamsError(f"bad config line {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out
