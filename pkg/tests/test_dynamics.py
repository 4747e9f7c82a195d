import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clausius.bath import BathSpec, RateSet, asymptotic_rates, temperature_from_log_ratio, time_dependent_coefficients
from clausius.dynamics import (
    LindbladGenerator,
    evolve,
    markovian_rhs,
    null_rates,
    secular_rhs,
    tabulated_coefficients,
)
from clausius.errors import IntegrationFailure, InvalidDimensionError, InvalidParameterError

from .strategies import density_matrices

RATES = RateSet(Delta=1.0 * (2 * 0.7 + 1), gamma=1.0, Gamma=1.0, nbar=0.7)


def _plus():
    return np.full((2, 2), 0.5, dtype=complex)


def test_two_level_steady_state():
    gen = LindbladGenerator.markovian(2, RATES)
    traj = evolve(_plus(), gen, np.linspace(0, 12, 7))
    target = RATES.nbar / (2 * RATES.nbar + 1)
    assert traj.states[-1][1, 1].real == pytest.approx(target, rel=1e-6)
    assert np.max(traj.trace_drift) < 1e-8


@pytest.mark.parametrize("t", [0.1, 0.5, 2.0])
def test_two_level_coherence_decay(t):
    gen = LindbladGenerator.markovian(2, RATES)
    traj = evolve(_plus(), gen, [0.0, t])
    expected = 0.5 * math.exp(-RATES.decoherence_rate * t)
    assert traj.states[-1][0, 1].real == pytest.approx(expected, rel=1e-6)


def test_room_temperature_two_level():
    spec = BathSpec.from_ratio(1.5e-3, 10, 1e12, temperature_from_log_ratio(1e12, 9.52))
    rates = asymptotic_rates(spec)
    gen = LindbladGenerator.markovian(2, rates)
    t = 2 / rates.decoherence_rate
    traj = evolve(_plus(), gen, [0.0, t])
    assert traj.states[-1][0, 1].real == pytest.approx(0.5 * math.exp(-2.0), rel=1e-6)


def test_step_halving_converges():
    gen = LindbladGenerator.markovian(2, RATES)
    a = evolve(_plus(), gen, [0.0, 1.0], max_step=1 / 50)
    b = evolve(_plus(), gen, [0.0, 1.0], max_step=1 / 100)
    assert np.abs(a.states[-1] - b.states[-1]).max() < 1e-8


def test_truncated_thermal_state_is_stationary():
    dim, nbar = 6, 0.4
    rates = RateSet(Delta=2 * nbar + 1, gamma=1.0, Gamma=1.0, nbar=nbar)
    q = nbar / (nbar + 1)
    rho = np.diag(q ** np.arange(dim)).astype(complex)
    rho /= np.trace(rho)
    gen = LindbladGenerator.markovian(dim, rates)
    assert np.abs(markovian_rhs(gen, rho)).max() < 1e-14


def test_mean_occupation_relaxes_exponentially():
    dim, nbar = 30, 0.5
    rates = RateSet(Delta=2 * nbar + 1, gamma=1.0, Gamma=1.0, nbar=nbar)
    rho0 = np.zeros((dim, dim), dtype=complex)
    rho0[1, 1] = 1
    ts = np.linspace(0, 1.5, 4)
    traj = evolve(rho0, LindbladGenerator.markovian(dim, rates), ts)
    n_op = np.arange(dim)
    for t, rho in traj:
        assert np.diag(rho).real @ n_op == pytest.approx(nbar + (1 - nbar) * math.exp(-2 * t), rel=1e-6)


def test_secular_with_constant_coefficients_matches_markovian():
    sec = LindbladGenerator.secular(4, lambda t: (RATES.Delta, RATES.gamma), rates=RATES)
    mk = LindbladGenerator.markovian(4, RATES)
    rho = np.eye(4, dtype=complex) / 4
    rho[0, 3] = rho[3, 0] = 0.1
    assert np.allclose(secular_rhs(sec, rho, 0.3), markovian_rhs(mk, rho), atol=1e-15)


def test_null_generator_is_identity():
    gen = LindbladGenerator.markovian(3, null_rates())
    assert gen.default_step() == math.inf
    rho = np.diag([0.2, 0.3, 0.5]).astype(complex)
    traj = evolve(rho, gen, [0.0, 1.0, 5.0])
    assert np.allclose(traj.states[-1], rho)


@given(density_matrices(3), st.floats(0.0, 3.0))
def test_trace_and_hermiticity_preserved(rho, nbar):
    rates = RateSet(Delta=2 * nbar + 1, gamma=1.0, Gamma=1.0, nbar=nbar)
    traj = evolve(rho, LindbladGenerator.markovian(3, rates), [0.0, 0.05, 0.3])
    for state in traj.states:
        assert np.trace(state).real == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(state, state.conj().T)
    assert np.max(traj.trace_drift) < 1e-8


def test_errors():
    gen = LindbladGenerator.markovian(2, RATES)
    with pytest.raises(InvalidDimensionError):
        evolve(np.eye(3) / 3, gen, [0.0, 1.0])
    with pytest.raises(InvalidParameterError):
        evolve(_plus(), gen, [0.5, 1.0])
    with pytest.raises(InvalidParameterError):
        LindbladGenerator(2, "bogus", rates=RATES)
    with pytest.raises(InvalidParameterError):
        LindbladGenerator.secular(2, lambda t: (1.0, 1.0))
    with pytest.raises(InvalidParameterError):
        secular_rhs(gen, _plus(), 0.0)


def test_oversized_step_is_reported():
    gen = LindbladGenerator.markovian(6, RATES)
    rho0 = np.zeros((6, 6), dtype=complex)
    rho0[5, 5] = 1
    with pytest.raises(IntegrationFailure) as info:
        evolve(rho0, gen, [0.0, 5.0], max_step=5.0)
    assert info.value.step == 1


def test_tabulated_coefficients_interpolate():
    spec = BathSpec.from_ratio(1.5e-3, 10, 1e12, temperature_from_log_ratio(1e12, 9.52))
    t_max = 20 / spec.cutoff
    coeffs = tabulated_coefficients(spec, t_max, n=24)
    for t in (0.37 * t_max, 0.81 * t_max):
        d, g = coeffs(t)
        d0, g0 = time_dependent_coefficients(spec, t)
        assert d == pytest.approx(d0, rel=1e-3)
        assert g == pytest.approx(g0, rel=1e-3)
    assert coeffs(10 * t_max) == coeffs(t_max)
