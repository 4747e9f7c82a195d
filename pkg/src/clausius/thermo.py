"""Thermodynamic audit of the interferometer state.

Energies are in hbar = 1 units (s^-1) unless a name says ``_joules``.
No work is done (the Hamiltonian is time independent), so every change of
internal energy is heat. The Clausius functional is

    F(t) = S_t - Q(t) / (k_B T)

with S in nats; F < 0 flags a violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.optimize import brentq
from scipy.special import xlogy

from .bath import CODATA, BathSpec, occupation_from_x
from .errors import InvalidParameterError, InvalidStateError, NoCrossoverError, NumericalFailure
from .hilbert import entropy_of_spectrum, eig_hermitian, quadrature_operators
from .interferometer import closed_form_state, decoherence_factor, physical_state, rates_of


@dataclass(frozen=True)
class ThermoRecord:
    t: float
    U: float
    U_joules: float
    Q: float
    Q_joules: float
    S: float
    F: float
    violation: bool
    min_eigenvalue: float


def internal_energy(rho, hamiltonian):
    rho = np.asarray(rho)
    h = np.asarray(hamiltonian)
    if rho.shape != h.shape:
        raise InvalidParameterError(f"state {rho.shape} and Hamiltonian {h.shape} differ in shape")
    return float(np.real(np.trace(rho @ h)))


def quadratures_closed_form(cfg, bath, t, omega=None):
    """Closed-form ``(<X^2>, <P^2>)`` of the interferometer state."""
    omega = _omega(bath, omega)
    eta = decoherence_factor(bath, t)
    base = 1 + cfg.c2_sq / 2 * (3 - eta * math.cos(cfg.phi))
    cross = math.sqrt(2) * cfg.Z * math.sqrt(eta) * (math.sin(cfg.theta) - math.sin(cfg.phi - cfg.theta))
    return (base + cross) / (2 * omega), omega / 2 * (base - cross)


def _quadrature_rates(cfg, bath, ts, omega):
    # analytic d/dt of quadratures_closed_form, vectorized over ts
    rate = rates_of(bath).decoherence_rate
    eta = np.exp(-rate * np.asarray(ts, dtype=float))
    dbase = cfg.c2_sq / 2 * math.cos(cfg.phi) * rate * eta
    dcross = -0.5 * rate * math.sqrt(2) * cfg.Z * np.sqrt(eta) * (
        math.sin(cfg.theta) - math.sin(cfg.phi - cfg.theta)
    )
    return (dbase + dcross) / (2 * omega), omega / 2 * (dbase - dcross)


def quadratures_from_state(rho, omega):
    """``(Tr[rho X^2], Tr[rho P^2])`` with the 3x3 state on Fock levels 0, 1, 2."""
    rho = np.asarray(rho)
    if rho.shape != (3, 3):
        raise InvalidParameterError(f"expected a 3x3 state, got {rho.shape}")
    x2, p2, _ = quadrature_operators(3, omega)
    return float(np.real(np.trace(rho @ x2))), float(np.real(np.trace(rho @ p2)))


def heat_closed_form(cfg, bath, t, omega=None):
    """Q(t) = (Omega cos(phi) / 4) |C2|^2 (1 - eta)."""
    omega = _omega(bath, omega)
    eta = decoherence_factor(bath, t)
    return omega * math.cos(cfg.phi) / 4 * cfg.c2_sq * (1 - eta)


def heat_from_quadratures(cfg, bath, t_grid, omega=None, rtol=1e-10, max_refine=16):
    """Integrate ``dQ = (Omega^2/2 d<X^2> + 1/2 d<P^2>)`` along ``t_grid``.

    The analytic time derivative of the closed-form quadratures is integrated
    with the trapezoid rule; every grid interval is subdivided and the
    subdivision doubled until the final value moves by less than ``rtol``
    (relative, with an absolute floor of ``rtol * Omega``).
    """
    omega = _omega(bath, omega)
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size < 2 or np.any(np.diff(t_grid) <= 0):
        raise InvalidParameterError("t_grid must be a strictly increasing 1-D grid")

    def power(ts):
        dx2, dp2 = _quadrature_rates(cfg, bath, ts, omega)
        return omega**2 / 2 * dx2 + dp2 / 2

    prev = None
    sub = 4
    for _ in range(max_refine):
        frac = np.linspace(0, 1, sub + 1)[:-1]
        fine = np.concatenate([(t_grid[:-1, None] + np.diff(t_grid)[:, None] * frac).ravel(), t_grid[-1:]])
        q_fine = cumulative_trapezoid(power(fine), fine, initial=0.0)
        q = q_fine[::sub]
        if prev is not None and abs(q[-1] - prev[-1]) <= rtol * max(abs(q[-1]), omega):
            return q
        prev = q
        sub *= 2
    raise NumericalFailure(
        f"heat integral not converged after {max_refine} refinements "
        f"(last change {abs(q[-1] - prev[-1]) if prev is not None else float('nan'):.3e})"
    )


def heat_from_state_trace(cfg, bath, t, omega=None):
    """U(t) - U(0) with U = Tr[rho H] on the relabeled levels (consistency audit)."""
    omega = _omega(bath, omega)
    _, _, h = quadrature_operators(3, omega)
    return internal_energy(closed_form_state(cfg, bath, t), h) - internal_energy(closed_form_state(cfg, bath, 0.0), h)


def entropy_infinity(cfg, bath):
    """Long-time entropy (nats) of the interferometer state.

    ``bath`` may be a BathSpec, a RateSet or a bare occupation number.
    """
    nbar = float(bath) if isinstance(bath, (int, float)) else rates_of(bath).nbar
    c1sq, c2sq = cfg.c1_sq, cfg.c2_sq
    if not (0 < c2sq < 1):
        raise InvalidParameterError(f"|C2|^2 must lie strictly between 0 and 1, got {c2sq!r}")
    k = 2 * nbar + 1
    lo, hi = nbar / k, (nbar + 1) / k
    return float(
        -c2sq * (xlogy(lo, lo) + xlogy(hi, hi)) - xlogy(c1sq, c1sq) - xlogy(c2sq, c2sq)
    )


def model_entropy(rho):
    """von Neumann entropy of a model state, via its nearest density matrix if needed.

    Returns ``(S, min_eigenvalue_of_rho)``.
    """
    state, lo = physical_state(rho)
    if abs(np.trace(state).real - 1) > 1e-10:
        raise InvalidStateError("model state does not have unit trace")
    return entropy_of_spectrum(eig_hermitian(state).eigenvalues), lo


def clausius_function(cfg, bath, t, const=CODATA):
    """Evaluate U, Q, S and F(t) at one time; ``bath`` must be a :class:`BathSpec`."""
    if not isinstance(bath, BathSpec):
        raise InvalidParameterError("clausius_function needs a BathSpec (temperature required)")
    if not bath.temperature > 0:
        raise InvalidParameterError("Clausius functional needs T > 0")
    rho = closed_form_state(cfg, bath, t)
    s, lo = model_entropy(rho)
    _, _, h = quadrature_operators(3, bath.omega)
    u = internal_energy(rho, h)
    q = heat_closed_form(cfg, bath, t)
    f = s - const.hbar * q / (const.k_boltzmann * bath.temperature)
    return ThermoRecord(
        t=t, U=u, U_joules=const.hbar * u, Q=q, Q_joules=const.hbar * q,
        S=s, F=f, violation=bool(f < 0), min_eigenvalue=lo,
    )


def clausius_infinity(cfg, x):
    """F(t -> inf) as a function of ``x = hbar Omega / (k_B T)`` alone."""
    return entropy_infinity(cfg, occupation_from_x(x)) - x * math.cos(cfg.phi) * cfg.c2_sq / 4


def violation_crossover(cfg, xtol=1e-6, x_min=1e-8, x_max=1e6):
    """Root ``x*`` of F(inf)(x); above it the Clausius inequality fails.

    Omega cancels in ``x = hbar Omega / k_B T``, so only the configuration
    enters. Raises :class:`NoCrossoverError` when F(inf) keeps one sign.
    """
    if math.cos(cfg.phi) <= 0:
        raise NoCrossoverError("heat is never positive for cos(phi) <= 0; F(inf) >= 0 for all T")
    f = lambda x: clausius_infinity(cfg, x)  # noqa: E731
    if f(x_min) <= 0:
        raise NoCrossoverError(f"F(inf) already <= 0 at x={x_min}")
    hi = 1.0
    while f(hi) > 0:
        hi *= 2
        if hi > x_max:
            raise NoCrossoverError(f"F(inf) stays positive up to x={x_max}")
    return brentq(f, x_min, hi, xtol=xtol, rtol=4 * np.finfo(float).eps)


def _omega(bath, omega):
    if omega is not None:
        return omega
    if isinstance(bath, BathSpec):
        return bath.omega
    raise InvalidParameterError("omega is required when passing a RateSet")
