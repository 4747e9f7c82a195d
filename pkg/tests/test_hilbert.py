import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clausius.errors import HermiticityError, InvalidDimensionError, InvalidParameterError, InvalidStateError
from clausius.hilbert import (
    eig_hermitian,
    entropy_of_spectrum,
    ladder_operators,
    momentum_wavefunction,
    nearest_density_matrix,
    number_operator,
    purity,
    quadrature_operators,
    relabeled_hamiltonian,
    validate_density,
    von_neumann_entropy,
)

from .strategies import density_matrices


def test_ladder_action():
    a, ad = ladder_operators(5)
    for n in range(1, 5):
        e = np.zeros(5)
        e[n] = 1
        assert np.allclose(a @ e, math.sqrt(n) * np.eye(5)[n - 1])
    assert np.allclose(ad @ a, number_operator(5))


def test_commutator_away_from_truncation_edge():
    a, ad = ladder_operators(7)
    c = a @ ad - ad @ a
    assert np.allclose(c[:-1, :-1], np.eye(6))
    assert c[-1, -1] == pytest.approx(-6)


@pytest.mark.parametrize("dim", [0, 1, 2.5, -3])
def test_bad_dimension(dim):
    with pytest.raises(InvalidDimensionError):
        ladder_operators(dim)


@pytest.mark.parametrize("omega", [1.0, 1e12])
def test_quadratures_sum_to_hamiltonian(omega):
    x2, p2, h = quadrature_operators(6, omega)
    assert np.allclose((omega**2 * x2 + p2) / 2, h, rtol=0, atol=1e-14 * omega)


def test_quadratures_match_ladder_products_in_the_interior():
    omega = 2.5
    a, ad = ladder_operators(8)
    x = (a + ad) / math.sqrt(2 * omega)
    p = 1j * (ad - a) * math.sqrt(omega / 2)
    x2, p2, _ = quadrature_operators(8, omega)
    assert np.allclose((x @ x)[:6, :6], x2[:6, :6])
    assert np.allclose((p @ p)[:6, :6], p2[:6, :6])


def test_relabeled_hamiltonian():
    assert np.allclose(np.diag(relabeled_hamiltonian(2.0)).real, [1.0, 3.0, 5.0])


def test_quadrature_rejects_nonpositive_omega():
    with pytest.raises(InvalidParameterError):
        quadrature_operators(3, 0.0)


def test_entropy_reference_values():
    assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(math.log(3), abs=1e-14)
    psi = np.array([1, 1j, 0]) / math.sqrt(2)
    assert von_neumann_entropy(np.outer(psi, psi.conj())) == pytest.approx(0.0, abs=1e-14)
    assert entropy_of_spectrum([0.5, 0.5, 0.0]) == pytest.approx(math.log(2))


def test_entropy_clipping():
    assert entropy_of_spectrum([1.0 + 5e-13, -5e-13]) == pytest.approx(0.0, abs=1e-11)
    with pytest.raises(InvalidStateError):
        entropy_of_spectrum([1.1, -0.1])


@given(density_matrices(4))
def test_entropy_bounds_and_unitary_invariance(rho):
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= math.log(4) + 1e-12
    q, _ = np.linalg.qr(np.random.default_rng(0).normal(size=(4, 4)) + 1j)
    assert von_neumann_entropy(q @ rho @ q.conj().T) == pytest.approx(s, abs=1e-10)
    assert purity(rho) <= 1 + 1e-12


def test_validate_density_errors():
    with pytest.raises(InvalidStateError):
        validate_density(np.ones((2, 3)))
    with pytest.raises(InvalidStateError):
        validate_density(np.array([[0.5, 1], [0, 0.5]]))
    with pytest.raises(InvalidStateError):
        validate_density(np.eye(2))


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(HermiticityError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


@given(density_matrices(3))
def test_nearest_density_matrix_fixes_valid_states(rho):
    out, lo = nearest_density_matrix(rho)
    assert np.allclose(out, rho, atol=1e-12)
    assert lo >= -1e-12


@given(st.floats(-0.3, 0.3), st.floats(-0.3, 0.3))
def test_nearest_density_matrix_is_a_state(a, b):
    m = np.diag([0.7 + a, 0.4 + b, -0.1 - a - b]).astype(complex)
    m[0, 2] = m[2, 0] = 0.2
    out, _ = nearest_density_matrix(m)
    assert np.trace(out).real == pytest.approx(1.0)
    assert np.linalg.eigvalsh(out)[0] >= -1e-14


@pytest.mark.parametrize("omega", [1.0, 1e12])
def test_momentum_wavefunctions_orthonormal(omega):
    p = np.linspace(-14, 14, 8001) * math.sqrt(omega)
    psi = np.array([momentum_wavefunction(n, omega, p) for n in range(5)])
    gram = np.trapezoid(psi[:, None, :] * psi[None, :, :], p, axis=-1)
    assert np.allclose(gram, np.eye(5), atol=1e-10)


def test_momentum_wavefunction_parity_and_ground_state():
    p = np.linspace(-3, 3, 13)
    for n in range(4):
        assert np.allclose(momentum_wavefunction(n, 1.0, -p), (-1) ** n * momentum_wavefunction(n, 1.0, p))
    assert momentum_wavefunction(0, 1.0, 0.0) == pytest.approx(math.pi**-0.25)
    assert momentum_wavefunction(2, 1.0, 0.0) == pytest.approx(-(math.pi**-0.25) / math.sqrt(2))
