"""Truncated Fock-space linear algebra.

Operators and density matrices are plain complex ``numpy`` arrays; the
helpers here build and validate them. Units follow hbar = 1, so energies are
angular frequencies (s^-1).

Quadrature convention::

    X = (a + a^dag) / sqrt(2 Omega),   P = i (a^dag - a) sqrt(Omega / 2)

X^2 and P^2 are the truncations of the infinite-dimensional operators, not
products of truncated ladders; otherwise the top Fock level would lose half
its energy.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.special import xlogy

from .errors import HermiticityError, InvalidDimensionError, InvalidParameterError, InvalidStateError

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
CLIP_TOL = 1e-12


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _check_dim(dim):
    if int(dim) != dim or dim < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {dim!r}")
    return int(dim)


def ladder_operators(dim):
    """Return the truncated annihilation and creation operators."""
    dim = _check_dim(dim)
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(complex)
    return a, a.conj().T


def number_operator(dim):
    return np.diag(np.arange(_check_dim(dim), dtype=float)).astype(complex)


def quadrature_operators(dim, omega):
    """Return ``(X2, P2, H)`` on a ``dim``-level Fock space.

    ``H = P2/2 + omega**2 X2/2 = omega (n + 1/2)`` holds exactly on every
    retained level.
    """
    dim = _check_dim(dim)
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega!r}")
    n = np.arange(dim, dtype=float)
    diag = 2 * n + 1
    off = np.sqrt((n[:-2] + 1) * (n[:-2] + 2))
    x2 = (np.diag(diag) + np.diag(off, 2) + np.diag(off, -2)) / (2 * omega)
    p2 = (np.diag(diag) - np.diag(off, 2) - np.diag(off, -2)) * (omega / 2)
    h = np.diag(omega * (n + 0.5))
    return x2.astype(complex), p2.astype(complex), h.astype(complex)


def relabeled_hamiltonian(omega, dim=3):
    """Oscillator Hamiltonian on the first ``dim`` levels, ``omega * diag(1/2, 3/2, ...)``."""
    return quadrature_operators(dim, omega)[2]


def is_hermitian(a, tol=HERMITIAN_TOL):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.max(np.abs(a - a.conj().T), initial=0.0) <= tol


def eig_hermitian(a, tol=HERMITIAN_TOL):
    """Eigen-decomposition of a Hermitian matrix, eigenvalues ascending."""
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a, tol):
        raise HermiticityError("matrix is not Hermitian within %g" % tol)
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return Spectrum(w, v)


def validate_density(rho, trace_tol=TRACE_TOL, hermitian_tol=HERMITIAN_TOL):
    """Check shape, Hermiticity and unit trace; return ``rho`` as a complex array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidStateError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho, hermitian_tol):
        raise InvalidStateError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1) > trace_tol:
        raise InvalidStateError(f"density matrix trace is {tr.real:.12g}, expected 1")
    return rho


def entropy_of_spectrum(p, clip_tol=CLIP_TOL):
    """Shannon entropy (nats) of a probability vector, with ``0 ln 0 = 0``."""
    p = np.asarray(p, dtype=float)
    if p.size and p.min() < -clip_tol:
        raise InvalidStateError(f"negative eigenvalue {p.min():.3e} below -{clip_tol:g}")
    p = np.clip(p, 0.0, None)
    # a pure state can come out at -1e-16 through rounding; entropy is never negative
    return max(0.0, float(-np.sum(xlogy(p, p))))


def von_neumann_entropy(rho, clip_tol=CLIP_TOL):
    """S(rho) = -Tr[rho ln rho] in nats."""
    rho = validate_density(rho)
    return entropy_of_spectrum(eig_hermitian(rho).eigenvalues, clip_tol)


def purity(rho):
    rho = np.asarray(rho)
    return float(np.real(np.trace(rho @ rho)))


def nearest_density_matrix(rho):
    """Closest unit-trace PSD matrix in Frobenius norm.

    The eigenvalues are projected onto the probability simplex while the
    eigenvectors are kept. Returns ``(state, min_eigenvalue_of_input)``.
    """
    spec = eig_hermitian(rho)
    w = spec.eigenvalues
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, u.size + 1)
    last = np.nonzero(u - css / k > 0)[0][-1]
    shift = css[last] / (last + 1)
    p = np.clip(w - shift, 0.0, None)
    v = spec.eigenvectors
    return (v * p) @ v.conj().T, float(w[0])


def momentum_wavefunction(n, omega, p):
    """Oscillator eigenfunction ``psi_n(P)`` in the momentum representation.

    Uses the normalized Hermite-function recurrence in ``y = P / sqrt(omega)``::

        psi_{k+1} = sqrt(2/(k+1)) y psi_k - sqrt(k/(k+1)) psi_{k-1}

    so no factorials or raw Hermite polynomials appear.
    """
    if n < 0 or int(n) != n:
        raise InvalidParameterError(f"level must be a non-negative integer, got {n!r}")
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega!r}")
    y = np.asarray(p, dtype=float) / np.sqrt(omega)
    prev = np.zeros_like(y)
    cur = np.pi ** -0.25 * np.exp(-y * y / 2)
    for k in range(int(n)):
        prev, cur = cur, np.sqrt(2.0 / (k + 1)) * y * cur - np.sqrt(k / (k + 1.0)) * prev
    out = cur * omega ** -0.25
    return float(out) if np.ndim(out) == 0 else out
