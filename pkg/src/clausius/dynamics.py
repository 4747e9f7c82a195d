"""Lindblad generators for the damped oscillator and a fixed-step RK4 integrator.

Both generators share the double-commutator form::

    drho/dt = -A [n rho - 2 a rho a^dag + rho n] - B [m rho - 2 a^dag rho a + rho m]

with ``n = a^dag a`` and ``m = a a^dag``. The Markovian equation uses
``A = Gamma (nbar + 1)``, ``B = Gamma nbar``; the secular equation uses
``A = (Delta(t) + gamma(t)) / 2``, ``B = (Delta(t) - gamma(t)) / 2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .bath import RateSet, time_dependent_coefficients
from .errors import IntegrationFailure, InvalidDimensionError, InvalidParameterError
from .hilbert import ladder_operators

TRACE_BUDGET = 1e-8
POSITIVITY_BUDGET = 1e-6


class LindbladGenerator:
    """Right-hand side of the oscillator master equation on ``dim`` Fock levels.

    Use :meth:`markovian` or :meth:`secular` rather than the constructor.
    """

    def __init__(self, dim, mode, rates=None, coefficients=None, rate_bound=None):
        if mode not in ("markovian", "secular"):
            raise InvalidParameterError(f"unknown mode {mode!r}")
        self.a, self.ad = ladder_operators(dim)
        self.dim = self.a.shape[0]
        self.mode = mode
        self.rates = rates
        self.coefficients = coefficients
        self.n_op = self.ad @ self.a
        self.m_op = self.a @ self.ad
        if rate_bound is None:
            if rates is None:
                raise InvalidParameterError("secular generator needs rate_bound or asymptotic rates")
            rate_bound = rates.Gamma * (2 * rates.nbar + 1)
        self.rate_bound = float(rate_bound)

    @classmethod
    def markovian(cls, dim, rates):
        return cls(dim, "markovian", rates=rates)

    @classmethod
    def secular(cls, dim, coefficients, rates=None, rate_bound=None):
        """``coefficients(t) -> (Delta, gamma)``; ``rates`` (asymptotic) set the step bound."""
        return cls(dim, "secular", rates=rates, coefficients=coefficients, rate_bound=rate_bound)

    def prefactors(self, t=None):
        if self.mode == "markovian":
            r = self.rates
            return r.Gamma * (r.nbar + 1), r.Gamma * r.nbar
        delta, gamma = self.coefficients(t)
        return (delta + gamma) / 2, (delta - gamma) / 2

    def _apply(self, rho, down, up):
        a, ad, n, m = self.a, self.ad, self.n_op, self.m_op
        out = np.zeros_like(rho)
        if down:
            out -= down * (n @ rho - 2 * a @ rho @ ad + rho @ n)
        if up:
            out -= up * (m @ rho - 2 * ad @ rho @ a + rho @ m)
        return out

    def __call__(self, t, rho):
        rho = np.asarray(rho)
        if rho.shape != (self.dim, self.dim):
            raise InvalidDimensionError(f"state shape {rho.shape} does not match generator dim {self.dim}")
        return self._apply(rho, *self.prefactors(t))

    def default_step(self):
        """Step bound ``0.01 / (rate (dim - 1))``; ``inf`` for a null generator."""
        if self.rate_bound <= 0:
            return math.inf
        return 0.01 / (self.rate_bound * max(1, self.dim - 1))


def markovian_rhs(gen, rho):
    if gen.mode != "markovian":
        raise InvalidParameterError("markovian_rhs needs a Markovian generator")
    return gen(None, rho)


def secular_rhs(gen, rho, t):
    if gen.mode != "secular":
        raise InvalidParameterError("secular_rhs needs a secular generator")
    return gen(t, rho)


def tabulated_coefficients(spec, t_max, n=64):
    """Spline through ``(Delta(t), gamma(t))`` on a grid, for use inside an integrator.

    The nested quadrature is far too slow to call at every RK4 stage. The
    grid is log-spaced after ``t = 0`` so the fast initial rise is resolved;
    beyond ``t_max`` the last tabulated values are held.
    """
    ts = np.concatenate([[0.0], np.geomspace(t_max * 1e-4, t_max, n - 1)])
    vals = np.array([time_dependent_coefficients(spec, t) for t in ts])
    spline = CubicSpline(ts, vals, axis=0)
    last = vals[-1]

    def coefficients(t):
        if t >= t_max:
            return float(last[0]), float(last[1])
        d, g = spline(t)
        return float(d), float(g)

    return coefficients


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    trace_drift: np.ndarray = field(repr=False)
    min_eigenvalue: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.times)

    def __iter__(self):
        return iter(zip(self.times, self.states))


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def evolve(rho0, gen, t_grid, max_step=None):
    """Integrate ``drho/dt = gen(t, rho)`` with fixed-step RK4.

    Each grid interval is split into equal sub-steps no longer than
    ``max_step`` (default :meth:`LindbladGenerator.default_step`). States are
    Hermitized after every step. At output points a trace drift below
    ``TRACE_BUDGET`` is renormalized away; anything larger, or an eigenvalue
    below ``-POSITIVITY_BUDGET``, raises :class:`IntegrationFailure`.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise InvalidParameterError("t_grid must be a non-empty 1-D sequence")
    if t_grid[0] != 0 or np.any(np.diff(t_grid) <= 0):
        raise InvalidParameterError("t_grid must start at 0 and increase strictly")
    rho = np.array(rho0, dtype=complex)
    if rho.shape != (gen.dim, gen.dim):
        raise InvalidDimensionError(f"state shape {rho.shape} does not match generator dim {gen.dim}")
    h_max = gen.default_step() if max_step is None else float(max_step)

    states = [rho.copy()]
    drifts = [abs(np.trace(rho).real - 1)]
    mins = [float(np.linalg.eigvalsh(rho)[0])]
    step = 0
    for t0, t1 in zip(t_grid[:-1], t_grid[1:]):
        n_sub = 1 if math.isinf(h_max) else max(1, math.ceil((t1 - t0) / h_max - 1e-9))
        h = (t1 - t0) / n_sub
        for k in range(n_sub):
            rho = _rk4_step(gen, t0 + k * h, rho, h)
            rho = (rho + rho.conj().T) / 2
            step += 1
        tr = np.trace(rho).real
        drift = abs(tr - 1)
        if drift >= TRACE_BUDGET:
            raise IntegrationFailure(
                f"trace drift {drift:.3e} at t={t1:.6e} (step {step})", step=step, t=t1, trace_drift=drift
            )
        rho = rho / tr
        lo = float(np.linalg.eigvalsh(rho)[0])
        if lo < -POSITIVITY_BUDGET:
            raise IntegrationFailure(
                f"min eigenvalue {lo:.3e} at t={t1:.6e} (step {step})", step=step, t=t1, min_eigenvalue=lo
            )
        states.append(rho.copy())
        drifts.append(drift)
        mins.append(lo)
    return Trajectory(t_grid.copy(), np.array(states), np.array(drifts), np.array(mins))


def null_rates():
    return RateSet(Delta=0.0, gamma=0.0, Gamma=0.0, nbar=0.0)
