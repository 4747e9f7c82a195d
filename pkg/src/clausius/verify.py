"""Cross-check runner behind ``clausius verify``.

Every check yields ``(name, status, metric)`` with status ``pass``, ``fail``
or ``info``. Info items document known gaps between alternative routes to
the same quantity and never fail the run.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import bath as bath_mod
from . import coherence, dynamics, hilbert, interferometer, thermo
from .config import RunConfig

PASS, FAIL, INFO = "pass", "fail", "info"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    metric: float
    note: str = ""

    def line(self):
        tail = f"\t{self.note}" if self.note else ""
        return f"{self.name}\t{self.status}\t{self.metric:.6e}{tail}"


def _bound(name, value, limit, note=""):
    ok = bool(np.isfinite(value) and value <= limit)
    return Check(name, PASS if ok else FAIL, float(value), note or f"<= {limit:g}")


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def check_hilbert(cfg):
    a, ad = hilbert.ladder_operators(8)
    comm = a @ ad - ad @ a
    yield _bound("hilbert.commutator", np.abs(comm[:-1, :-1] - np.eye(7)).max(), 1e-14)
    x2, p2, h = hilbert.quadrature_operators(6, cfg.omega)
    resid = np.abs((cfg.omega**2 * x2 + p2) / 2 - h)[:4, :4].max() / cfg.omega
    yield _bound("hilbert.quadrature_identity", resid, 1e-12)
    p = np.linspace(-12, 12, 4001) * math.sqrt(cfg.omega)
    psi = np.array([hilbert.momentum_wavefunction(n, cfg.omega, p) for n in range(3)])
    gram = (psi * np.gradient(p)) @ psi.T
    yield _bound("hilbert.hermite_orthonormality", np.abs(gram - np.eye(3)).max(), 1e-8)


def check_bath(cfg):
    spec = cfg.bath()
    lam = spec.cutoff
    taus = np.array([0.1, 1.0, 5.0]) / lam
    err = max(
        _rel(bath_mod.dissipation_kernel_quadrature(spec, t), bath_mod.dissipation_kernel(spec, t)) for t in taus
    )
    yield _bound("bath.dissipation_kernel_quadrature", err, 1e-6)
    # truncated quadrature against the closed-form vacuum plus thermal split
    tau = 1.0 / lam
    split = bath_mod.noise_kernel(spec, tau)
    direct = bath_mod.truncated_noise_kernel(spec, tau, spec.temperature, tail=True)
    yield _bound("bath.noise_kernel_dual_route", _rel(direct, split), 1e-8)
    rates = bath_mod.asymptotic_rates(spec)
    d, g = bath_mod.time_dependent_coefficients(spec, 20 / lam)
    yield _bound("bath.delta_asymptote_20_over_cutoff", _rel(d, rates.Delta), 0.02)
    yield _bound("bath.gamma_asymptote_20_over_cutoff", _rel(g, rates.gamma), 0.02)
    grid = np.geomspace(1e-3 / lam, 20 / lam, 12)
    coeffs = np.array([bath_mod.time_dependent_coefficients(spec, t) for t in grid])
    margin = np.min(np.minimum(coeffs[:, 0] - np.abs(coeffs[:, 1]), coeffs[:, 0] + coeffs[:, 1]))
    yield Check("bath.delta_pm_gamma_positive", PASS if margin > 0 else FAIL, float(margin / rates.Delta), "> 0")


def check_dynamics(cfg):
    rates = bath_mod.asymptotic_rates(cfg.bath())
    rate = rates.decoherence_rate
    gen = dynamics.LindbladGenerator.markovian(2, rates)
    rho0 = np.full((2, 2), 0.5, dtype=complex)
    t_obs = 1.0 / rate
    traj = dynamics.evolve(rho0, gen, [0.0, t_obs])
    coh = traj.states[-1][0, 1].real
    yield _bound("dynamics.coherence_decay", _rel(coh, 0.5 * math.exp(-rate * t_obs)), 1e-6)
    long = dynamics.evolve(rho0, gen, np.linspace(0, 20 / rate, 5))
    target = rates.nbar / (2 * rates.nbar + 1)
    yield _bound("dynamics.steady_state_population", _rel(long.states[-1][1, 1].real, target), 1e-6)
    yield _bound("dynamics.trace_drift", float(np.max(long.trace_drift)), 1e-8)
    coarse = dynamics.evolve(rho0, gen, [0.0, t_obs], max_step=t_obs / 50)
    fine = dynamics.evolve(rho0, gen, [0.0, t_obs], max_step=t_obs / 100)
    yield _bound("dynamics.step_halving", np.abs(coarse.states[-1] - fine.states[-1]).max(), 1e-8)


def check_interferometer(cfg):
    icfg = cfg.interferometer()
    spec = cfg.bath()
    rates = bath_mod.asymptotic_rates(spec)
    probes = [icfg, interferometer.InterferometerConfig(0.6 * np.exp(0.4j), 0.8 * np.exp(-1.1j), phi=0.7)]
    gap = 0.0
    for c in probes:
        start = interferometer.closed_form_state(c, spec, 0.0)
        gap = max(gap, np.abs(start - interferometer.apply_bs3(interferometer.initial_density(c))).max())
    yield _bound("interferometer.t0_endpoint", gap, 1e-12)
    late = interferometer.closed_form_state(icfg, spec, math.inf)
    yield _bound(
        "interferometer.tinf_endpoint", np.abs(late - interferometer.stationary_state(icfg, rates.nbar)).max(), 1e-12
    )
    worst = 0.0
    for c2 in np.linspace(0.1, 0.9, 9):
        c = interferometer.InterferometerConfig.from_c2_sq(c2)
        for nbar in (0.0, 0.1, 1.0, 10.0, 100.0):
            s = hilbert.von_neumann_entropy(interferometer.density_matrix(c, nbar, 0.0))
            worst = max(worst, abs(s - thermo.entropy_infinity(c, nbar)))
    yield _bound("interferometer.entropy_infinity_grid", worst, 1e-10)
    amp = interferometer.fringe_coefficients(icfg, rates.nbar, interferometer.decoherence_factor(spec, 1e-7))
    yield _bound("interferometer.fringe_decay_1e-7s", amp.decaying_amplitude, 1e-3)
    low = cfg.bath_at_log_ratio(23.0)
    nbar_low = bath_mod.asymptotic_rates(low).nbar
    res = interferometer.fringe_coefficients(icfg, nbar_low, 0.0).residual_amplitude
    yield _bound("interferometer.residual_fringe", abs(res - icfg.c2_sq / (2 * nbar_low + 1)), 1e-10)
    mid = min(
        interferometer.positivity_defect(interferometer.density_matrix(icfg, 0.0, eta))
        for eta in np.linspace(0, 1, 101)
    )
    yield Check("interferometer.psd_defect_n0", INFO, mid, "min eigenvalue of the closed form at nbar = 0")


def check_thermo(cfg):
    icfg = cfg.interferometer()
    room = cfg.bath_at_log_ratio(9.52)
    ts = [0.0, *np.geomspace(1e-12, 1e-3, 60), math.inf]
    f_min = min(thermo.clausius_function(icfg, room, t).F for t in ts)
    yield Check("thermo.no_violation_room_temperature", PASS if f_min >= 0 else FAIL, f_min, ">= 0")
    cold = cfg.bath_at_log_ratio(23.0)
    f_inf = thermo.clausius_function(icfg, cold, math.inf).F
    yield Check("thermo.violation_log_ratio_23", PASS if f_inf < -1e10 else FAIL, f_inf, "< -1e10")
    x_star = thermo.violation_crossover(icfg)
    yield _bound("thermo.crossover_vs_8ln2", _rel(x_star, 8 * math.log(2)), 0.05)
    grid = np.concatenate([[0.0], np.geomspace(1e-12, 1e-5, 80)])
    q_num = thermo.heat_from_quadratures(icfg, room, grid)[-1]
    q_cf = thermo.heat_closed_form(icfg, room, grid[-1])
    yield _bound("thermo.heat_quadrature_vs_closed_form", _rel(q_num, q_cf), 1e-8)
    q_tr = thermo.heat_from_state_trace(icfg, room, grid[-1])
    yield Check("thermo.heat_trace_path_gap", INFO, _rel(q_tr, q_cf), "Tr[rho H] route vs closed form")
    rho = interferometer.closed_form_state(icfg, room, 0.0)
    x2, _ = thermo.quadratures_from_state(rho, room.omega)
    x2_cf, _ = thermo.quadratures_closed_form(icfg, room, 0.0)
    yield Check("thermo.quadrature_dual_path_gap", INFO, _rel(x2, x2_cf), "Tr[rho X^2] vs closed-form <X^2>")


def check_coherence(cfg):
    try:
        report = coherence.coherence_postulate_suite(samples=200, seed=cfg.seed)
        yield Check("coherence.postulates", PASS, min(report.margins.values()), "margin >= -1e-10")
    except coherence.PostulateViolation as exc:  # pragma: no cover - exercised by mutation tests
        yield Check("coherence.postulates", FAIL, exc.margin, exc.postulate)
    h = hilbert.relabeled_hamiltonian(1.0)
    worst = 0.0
    for c2 in np.linspace(0.1, 0.9, 9):
        c = interferometer.InterferometerConfig.from_c2_sq(c2)
        for nbar in (0.0, 0.1, 1.0, 10.0, 100.0):
            if not coherence.in_ordering_regime(c, nbar):
                continue
            w = coherence.ergotropy(interferometer.stationary_state(c, nbar), h)
            worst = max(worst, _rel(w, coherence.ergotropy_closed_form(c, nbar, omega=1.0)))
    yield _bound("coherence.ergotropy_closed_form", worst, 1e-12)
    rng = np.random.default_rng(cfg.seed)
    gap = max(
        abs(coherence.ergotropy(r, h) - coherence.ergotropy_by_permutation(r, h))
        for r in (coherence.random_density_matrix(3, rng) for _ in range(500))
    )
    yield _bound("coherence.ergotropy_permutation_oracle", gap, 1e-12)
    spec = cfg.bath()
    ts = np.geomspace(1e-10, 1e-3, 200)
    cd = [coherence.model_coherence(interferometer.closed_form_state(cfg.interferometer(default=0.6), spec, t)) for t in ts]
    yield _bound("coherence.monotone_decay", float(max(0.0, np.max(np.diff(cd)))), 1e-12)


SECTIONS = (check_hilbert, check_bath, check_dynamics, check_interferometer, check_thermo, check_coherence)


def run_checks(cfg: RunConfig | None = None):
    cfg = cfg or RunConfig()
    checks = []
    for section in SECTIONS:
        try:
            checks.extend(section(cfg))
        except Exception as exc:  # a crash is a failed check, not a crashed run
            checks.append(Check(f"{section.__name__[6:]}.error", FAIL, math.nan, f"{type(exc).__name__}: {exc}"))
    return checks


def run_verify(cfg=None, stream=None):
    """Print one line per check; return exit code 0 if nothing failed, else 1."""
    t0 = time.perf_counter()
    checks = run_checks(cfg)
    failed = sum(c.status == FAIL for c in checks)
    lines = [c.line() for c in checks]
    lines.append(f"summary\t{'pass' if not failed else 'fail'}\t{failed:d} failed of {len(checks)}")
    lines.append(f"elapsed\tinfo\t{time.perf_counter() - t0:.3f}s")
    if stream is not None:
        stream.write("\n".join(lines) + "\n")
    return (1 if failed else 0), checks
