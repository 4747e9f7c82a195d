"""Figure datasets as CSV.

Each driver returns ``(header, rows)``; :func:`run_figure` writes them.
Rows are computed per sweep point (optionally on a thread pool) and always
emitted in index order, so output is byte-identical across runs.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .bath import CODATA, hbar_omega_over_kt, mean_occupation, temperature_from_log_ratio
from .coherence import ergotropy, model_coherence
from .config import ConfigError, RunConfig
from .hilbert import relabeled_hamiltonian
from .interferometer import closed_form_state, interference_pattern, stationary_state
from .thermo import clausius_function, clausius_infinity

FIGURES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5")
W_SCALE = 1e31

_DEFAULT_RATIOS = {
    "fig3a": (9.52, 11.0, 12.0, 13.0, 23.0),
    "fig4": (9.52, 10.5, 11.5, 12.5, 23.0),
}
_DEFAULT_C2 = {"fig4": 0.6}


def _map(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _format(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.16e" % float(value)


def write_dataset(header, rows, path):
    """UTF-8 CSV, 17 significant digits, LF line endings."""
    path = Path(path)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    width = len(header)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != width:
                raise ValueError(f"row has {len(row)} fields, header has {width}")
            writer.writerow([_format(v) for v in row])
    return path


def _ratios(cfg, fig_id):
    if cfg.log10_ratios:
        return tuple(cfg.log10_ratios)
    return _DEFAULT_RATIOS[fig_id]


def _momenta(cfg):
    half = cfg.p_range * math.sqrt(cfg.omega)
    return np.linspace(-half, half, cfg.p_points)


def _pattern_rows(cfg, times, c2_default=0.5):
    icfg = cfg.interferometer(default=c2_default)
    bath = cfg.bath()
    p = _momenta(cfg)

    def block(t):
        pr = interference_pattern(icfg, bath, t, p)
        return [(t, pi, v) for pi, v in zip(p, pr)]

    return [row for rows in _map(block, times, cfg.threads) for row in rows]


def fig2a(cfg: RunConfig):
    """Pr(P) at several times; the fringes fade as the arms decohere."""
    times = cfg.time_grid(1e-9, 1e-7, 3)
    return ("t", "P", "Pr"), _pattern_rows(cfg, times)


def fig2b(cfg: RunConfig):
    """Pr(P) at t = 0 and t -> inf; set log10_omega_over_t high for the low-temperature panel."""
    if cfg.t_min is None and cfg.t_max is None and cfg.t_n is None:
        times = [0.0, math.inf]
    else:
        times = list(cfg.time_grid(1e-9, 1e-7, 3)) + [math.inf]
    return ("t", "P", "Pr"), _pattern_rows(cfg, times)


def fig3a(cfg: RunConfig):
    """F(t) per temperature, with a final t = inf row."""
    cfg.require_open_c2()
    icfg = cfg.interferometer()
    times = list(cfg.time_grid(1e-12, 1e-3, 200)) + [math.inf]

    def block(ratio):
        bath = cfg.bath_at_log_ratio(ratio)
        out = []
        for t in times:
            rec = clausius_function(icfg, bath, t)
            out.append((t, ratio, rec.F, rec.violation))
        return out

    rows = [r for rows in _map(block, _ratios(cfg, "fig3a"), cfg.threads) for r in rows]
    return ("t", "log10_ratio", "F", "violation"), rows


def fig3b(cfg: RunConfig):
    """F(t -> inf) over (log10 Omega/T, |C2|^2); the endpoints |C2|^2 = 0, 1 are excluded."""
    n = cfg.grid_n
    ratios = np.linspace(8.0, 24.0, n)
    c2s = np.linspace(0.0, 1.0, n + 2)[1:-1]

    def block(ratio):
        x = hbar_omega_over_kt(cfg.omega, temperature_from_log_ratio(cfg.omega, ratio))
        return [(ratio, c2, clausius_infinity(cfg.interferometer(c2_sq=c2), x)) for c2 in c2s]

    rows = [r for rows in _map(block, ratios, cfg.threads) for r in rows]
    return ("log10_ratio", "c2_sq", "F_infinity"), rows


def fig4(cfg: RunConfig):
    """Distillable coherence C_d(t) for several temperatures on one time grid."""
    cfg.require_open_c2(_DEFAULT_C2["fig4"])
    icfg = cfg.interferometer(default=_DEFAULT_C2["fig4"])
    times = cfg.time_grid(1e-10, 1e-3, 200)

    def block(ratio):
        bath = cfg.bath_at_log_ratio(ratio)
        return [(t, ratio, model_coherence(closed_form_state(icfg, bath, t))) for t in times]

    rows = [r for rows in _map(block, _ratios(cfg, "fig4"), cfg.threads) for r in rows]
    return ("t", "log10_ratio", "C_d"), rows


def fig5(cfg: RunConfig, const=CODATA):
    """Long-time ergotropy (joules) against bath temperature, T = 0 included."""
    cfg.require_open_c2()
    icfg = cfg.interferometer()
    h = relabeled_hamiltonian(1.0)  # ergotropy in units of hbar Omega
    temps = np.linspace(cfg.temp_min, cfg.temp_max, cfg.temp_n)

    def row(temp):
        nbar = mean_occupation(cfg.omega, temp, const)
        w = const.hbar * cfg.omega * ergotropy(stationary_state(icfg, nbar), h)
        return temp, w, -math.log(w * W_SCALE)

    return ("T", "W", "neg_log_scaled_W"), _map(row, temps, cfg.threads)


DRIVERS = {name: globals()[name] for name in FIGURES}


def run_figure(fig_id, cfg: RunConfig, out=None):
    if fig_id not in DRIVERS:
        raise ConfigError("figure", f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    header, rows = DRIVERS[fig_id](cfg)
    path = out or cfg.out or f"{fig_id}.csv"
    return write_dataset(header, rows, path)
