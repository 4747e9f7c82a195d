"""Coherence and work extraction.

Distillable coherence ``C_d(rho) = S(dephase(rho)) - S(rho)`` is measured in
the computational basis, which is the energy eigenbasis of the relabeled
oscillator. Ergotropy pairs the eigenvalues of ``rho`` (descending) with the
energy levels (ascending).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError, PostulateViolation
from .hilbert import eig_hermitian, entropy_of_spectrum, validate_density, von_neumann_entropy
from .bath import BathSpec
from .interferometer import physical_state, rates_of


def dephase(rho):
    rho = np.asarray(rho, dtype=complex)
    return np.diag(np.diag(rho))


def distillable_coherence(rho):
    rho = validate_density(rho)
    return entropy_of_spectrum(np.diag(rho).real) - von_neumann_entropy(rho)


def model_coherence(rho):
    """C_d of a closed-form model state, through its nearest density matrix if not PSD."""
    return distillable_coherence(physical_state(rho)[0])


def relative_entropy(rho, sigma):
    """S(rho || sigma) = Tr[rho (ln rho - ln sigma)]; ``sigma`` must be full rank on rho's support."""
    wr, vr = np.linalg.eigh(rho)
    ws, vs = np.linalg.eigh(sigma)
    wr = np.clip(wr, 0, None)
    log_r = (vr * np.log(np.where(wr > 0, wr, 1.0))) @ vr.conj().T
    with np.errstate(divide="ignore"):
        log_s = (vs * np.log(np.clip(ws, 0, None))) @ vs.conj().T
    return float(np.real(np.trace(rho @ (log_r - log_s))))


# -- random states -----------------------------------------------------------

def random_density_matrix(dim, rng, rank=None):
    """Hilbert-Schmidt (Ginibre) random state."""
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_state(dim, rng):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


# -- postulates ----------------------------------------------------------------

@dataclass
class PostulateReport:
    samples: int
    margins: dict = field(default_factory=dict)
    untested: tuple = ("monotonicity under general incoherent operations", "strong monotonicity")

    @property
    def passed(self):
        return all(m >= -1e-10 for m in self.margins.values())

    def lines(self):
        for name, m in self.margins.items():
            yield f"{name}: {'pass' if m >= -1e-10 else 'FAIL'} (worst margin {m:.3e})"


def coherence_postulate_suite(measure=distillable_coherence, samples=200, seed=0, dim=3, tol=1e-10):
    """Check the coherence-measure postulates on seeded random states.

    Tested: nonnegativity, dephasing monotonicity, convexity, uniqueness on
    pure states and additivity on ``dim x dim`` tensor products. A margin
    below ``-tol`` raises :class:`PostulateViolation` carrying the offending
    sample; otherwise the worst margin of each postulate is reported.
    """
    rng = np.random.default_rng(seed)
    worst = {}

    def record(name, margin, example):
        if margin < -tol:
            raise PostulateViolation(name, margin, example)
        worst[name] = min(worst.get(name, math.inf), margin)

    for _ in range(samples):
        rho = random_density_matrix(dim, rng)
        sigma = random_density_matrix(dim, rng)
        c_rho = measure(rho)
        record("nonnegativity", c_rho, rho)
        record("dephasing monotonicity", c_rho - measure(dephase(rho)), rho)
        lam = rng.uniform()
        mix = lam * rho + (1 - lam) * sigma
        record("convexity", lam * c_rho + (1 - lam) * measure(sigma) - measure(mix), (rho, sigma, lam))
        psi = random_pure_state(dim, rng)
        pure = np.outer(psi, psi.conj())
        record("uniqueness", -abs(measure(pure) - entropy_of_spectrum(np.abs(psi) ** 2)), psi)
        record(
            "additivity",
            -abs(measure(np.kron(rho, sigma)) - c_rho - measure(sigma)),
            (rho, sigma),
        )
    return PostulateReport(samples=samples, margins=worst)


# -- passive states and ergotropy ---------------------------------------------

@dataclass(frozen=True)
class PassiveDecomposition:
    passive: np.ndarray
    populations: np.ndarray
    energies: np.ndarray
    ergotropy: float


def _energy_levels(hamiltonian):
    h = np.asarray(hamiltonian, dtype=complex)
    if np.max(np.abs(h - np.diag(np.diag(h))), initial=0.0) > 1e-12 * max(1.0, np.max(np.abs(h))):
        raise InvalidParameterError("Hamiltonian must be diagonal in the computational basis")
    eps = np.diag(h).real
    if np.any(np.diff(eps) < 0):
        raise InvalidParameterError("Hamiltonian levels must be nondecreasing")
    return eps


def passive_state(rho, hamiltonian):
    """Passive state: eigenvalues of ``rho`` sorted descending onto ascending levels.

    Ties are broken by original index order (stable sort).
    """
    rho = validate_density(rho)
    eps = _energy_levels(hamiltonian)
    if rho.shape[0] != eps.size:
        raise InvalidParameterError("state and Hamiltonian dimensions differ")
    r = eig_hermitian(rho).eigenvalues
    order = np.argsort(-r, kind="stable")
    pops = r[order]
    passive = np.diag(pops).astype(complex)
    w = float(np.real(np.trace(rho @ np.diag(eps)))) - float(pops @ eps)
    return PassiveDecomposition(passive=passive, populations=pops, energies=eps, ergotropy=w)


def ergotropy(rho, hamiltonian):
    return passive_state(rho, hamiltonian).ergotropy


def ergotropy_by_permutation(rho, hamiltonian):
    """Exhaustive oracle: minimize the final energy over every eigenvalue-to-level assignment."""
    rho = validate_density(rho)
    eps = _energy_levels(hamiltonian)
    r = np.linalg.eigvalsh(rho)
    energy = float(np.real(np.trace(rho @ np.diag(eps))))
    return energy - min(float(np.dot(p, eps)) for p in itertools.permutations(r))


def ergotropy_closed_form(cfg, bath, omega=None):
    """Long-time ergotropy ``|C2|^2 omega / (2 (2 nbar + 1))`` in hbar = 1 units.

    ``bath`` is a BathSpec, or a RateSet / bare ``nbar`` together with
    ``omega``. Valid while ``|C1|^2`` remains the largest population of the
    passive state; see :func:`in_ordering_regime`.
    """
    if isinstance(bath, BathSpec):
        omega = bath.omega if omega is None else omega
    elif omega is None:
        raise InvalidParameterError("omega is required unless bath is a BathSpec")
    nbar = float(bath) if isinstance(bath, (int, float)) else rates_of(bath).nbar
    return cfg.c2_sq * omega / (2 * (2 * nbar + 1))


def in_ordering_regime(cfg, nbar):
    """True when ``|C1|^2 >= |C2|^2/2 + |C2|^2/(2(2 nbar + 1))``."""
    return cfg.c1_sq >= cfg.c2_sq / 2 + cfg.c2_sq / (2 * (2 * nbar + 1))
