"""Command line: ``figure``, ``verify`` and ``evolve``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or
configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .bath import asymptotic_rates
from .config import FIELDS, ConfigError, load_config
from .dynamics import LindbladGenerator, evolve, tabulated_coefficients
from .errors import ClausiusError
from .figures import FIGURES, run_figure, write_dataset
from .interferometer import initial_state
from .verify import run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _add_config_flags(parser, skip=()):
    parser.add_argument("--config", metavar="PATH", help="flat key = value file")
    for key in FIELDS:
        if key not in skip:
            parser.add_argument(f"--{key}", dest=f"set_{key}", metavar="VALUE", default=None)


def build_parser():
    parser = argparse.ArgumentParser(prog="clausius", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fig = sub.add_parser("figure", help="write a figure dataset as CSV")
    fig.add_argument("figure_id", choices=FIGURES)
    _add_config_flags(fig)

    ver = sub.add_parser("verify", help="run the cross-check suite")
    _add_config_flags(ver)

    evo = sub.add_parser("evolve", help="free evolution of the oscillator under the master equation")
    _add_config_flags(evo)
    evo.add_argument("--mode", choices=("markovian", "secular"), default="markovian")
    return parser


def _config(args):
    overrides = {k[4:]: v for k, v in vars(args).items() if k.startswith("set_") and v is not None}
    return load_config(args.config, overrides)


def _evolve(cfg, mode, stream):
    """Evolve the relabeled interferometer state (embedded in ``dim`` levels)."""
    spec = cfg.bath()
    rates = asymptotic_rates(spec)
    rate = rates.decoherence_rate
    if cfg.t_spacing == "log":
        times = np.concatenate([[0.0], cfg.time_grid(1e-3 / rate, 10 / rate, 100)])
    else:
        times = cfg.time_grid(0.0, 10 / rate, 101)
        if times[0] != 0:
            times = np.concatenate([[0.0], times])
    psi = np.zeros(cfg.dim, dtype=complex)
    head = initial_state(cfg.interferometer())
    psi[: min(3, cfg.dim)] = head[: cfg.dim]
    psi /= np.linalg.norm(psi)
    if mode == "markovian":
        gen = LindbladGenerator.markovian(cfg.dim, rates)
    else:
        gen = LindbladGenerator.secular(cfg.dim, tabulated_coefficients(spec, times[-1]), rates=rates)
    traj = evolve(np.outer(psi, psi.conj()), gen, times)
    header = ["t", "trace_drift", "min_eigenvalue"] + [f"p{n}" for n in range(cfg.dim)] + ["abs_rho01"]
    rows = [
        (t, d, m, *np.diag(rho).real, abs(rho[0, 1]))
        for t, rho, d, m in zip(traj.times, traj.states, traj.trace_drift, traj.min_eigenvalue)
    ]
    if cfg.out:
        write_dataset(header, rows, cfg.out)
    else:
        stream.write(",".join(header) + "\n")
        for row in rows:
            stream.write(",".join("%.16e" % v for v in row) + "\n")


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
        if args.command == "figure":
            path = run_figure(args.figure_id, cfg)
            stdout.write(f"{path}\n")
            return EXIT_OK
        if args.command == "verify":
            code, _ = run_verify(cfg, stream=stdout)
            return code
        _evolve(cfg, args.mode, stdout)
        return EXIT_OK
    except ConfigError as exc:
        stderr.write(f"config error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        stderr.write(f"I/O error: {exc}\n")
        return EXIT_FAIL
    except ClausiusError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
