"""Three-branch interferometer with two bath-coupled arms.

After the gates, the branch states ``|1>_a|0>_b|0>_c``, ``|0>_a|2>_b|0>_c``
and ``|0>_a|0>_b|3>_c`` are relabeled as levels ``|0>, |1>, |2>`` of a
single ladder; every 3x3 matrix here lives in that basis.

The time-dependent state is the closed form with decoherence factor
``eta = exp(-Gamma t (2 nbar + 1))``. At low temperature (nbar below about
0.45) and intermediate eta that matrix is not positive semidefinite;
:func:`positivity_defect` reports by how much and :func:`physical_state`
maps it to the nearest density matrix for entropy-based quantities.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .bath import BathSpec, RateSet, asymptotic_rates
from .errors import InvalidParameterError, ModelInconsistencyError
from .hilbert import eig_hermitian, nearest_density_matrix

PSD_TOL = 1e-10
NORM_TOL = 1e-12


@dataclass(frozen=True)
class InterferometerConfig:
    """Beamsplitter amplitudes, gate phase and dimensionless path difference.

    ``delta = d * sqrt(Omega)``, so fringes read ``cos(P d) = cos(delta P / sqrt(Omega))``.
    """

    c1: complex
    c2: complex
    phi: float = 0.0
    delta: float = 6.0

    def __post_init__(self):
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1) > NORM_TOL:
            raise InvalidParameterError(f"|C1|^2 + |C2|^2 = {norm!r}, expected 1")

    @classmethod
    def from_c2_sq(cls, c2_sq, phi=0.0, delta=6.0):
        """Real, non-negative amplitudes with ``|C2|^2 = c2_sq``."""
        if not 0 <= c2_sq <= 1:
            raise InvalidParameterError(f"c2_sq must lie in [0, 1], got {c2_sq!r}")
        return cls(complex(math.sqrt(1 - c2_sq)), complex(math.sqrt(c2_sq)), phi, delta)

    @classmethod
    def balanced(cls, phi=0.0, delta=6.0):
        return cls.from_c2_sq(0.5, phi, delta)

    @property
    def c1_sq(self):
        return abs(self.c1) ** 2

    @property
    def c2_sq(self):
        return abs(self.c2) ** 2

    @property
    def Z(self):
        return abs(self.c1 * self.c2.conjugate())

    @property
    def theta(self):
        prod = self.c1 * self.c2.conjugate()
        return cmath.phase(prod) if prod != 0 else 0.0


def rates_of(bath):
    """Accept a :class:`BathSpec` or a ready :class:`RateSet`."""
    if isinstance(bath, RateSet):
        return bath
    if isinstance(bath, BathSpec):
        return asymptotic_rates(bath)
    raise TypeError(f"expected BathSpec or RateSet, got {type(bath).__name__}")


def decoherence_factor(bath, t):
    """eta(t) = exp(-Gamma t (2 nbar + 1)); ``t = inf`` gives 0."""
    if t < 0:
        raise InvalidParameterError(f"t must be >= 0, got {t!r}")
    rates = rates_of(bath)
    if math.isinf(t):
        return 0.0
    return math.exp(-rates.decoherence_rate * t)


def gates_u1_u2():
    """The two 4x4 permutation gates: U1 swaps levels 1<->2, U2 swaps 1<->3."""
    u1 = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
    u2 = np.eye(4, dtype=complex)[[0, 3, 2, 1]]
    return u1, u2


def initial_state(cfg):
    """Relabeled state vector ``(C1, C2 e^{i phi}/sqrt2, i C2/sqrt2)``."""
    s = math.sqrt(2)
    return np.array([cfg.c1, cfg.c2 * cmath.exp(1j * cfg.phi) / s, 1j * cfg.c2 / s], dtype=complex)


def initial_density(cfg):
    psi = initial_state(cfg)
    return np.outer(psi, psi.conj())


def bs3_unitary():
    """Identity on branch a, 50:50 splitter ``[[1, i], [i, 1]]/sqrt2`` on b, c."""
    v = np.eye(3, dtype=complex)
    v[1:, 1:] = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    return v


def apply_bs3(rho):
    v = bs3_unitary()
    return v @ np.asarray(rho, dtype=complex) @ v.conj().T


def density_matrix(cfg, nbar, eta):
    """The closed-form state as a function of ``nbar`` and the decoherence factor."""
    if not 0 <= eta <= 1:
        raise InvalidParameterError(f"eta must lie in [0, 1], got {eta!r}")
    c1, c2, phi = cfg.c1, cfg.c2, cfg.phi
    c2sq = cfg.c2_sq
    s = math.sqrt(eta)
    k = 2 * nbar + 1
    em = cmath.exp(-1j * phi)
    cc = c1 * c2.conjugate()
    rho = np.empty((3, 3), dtype=complex)
    rho[0, 0] = cfg.c1_sq
    rho[0, 1] = cc / 2 * s * (em - 1)
    rho[0, 2] = -1j * cc / 2 * s * (em + 1)
    rho[1, 0] = cc.conjugate() / 2 * s * (em.conjugate() - 1)
    rho[1, 1] = c2sq / 2 * (1 - eta * math.cos(phi))
    rho[1, 2] = 1j * c2sq * (eta**2 - 1) / (2 * k) + c2sq / 2 * eta * math.sin(phi)
    rho[2, 0] = 1j * cc.conjugate() / 2 * s * (em.conjugate() + 1)
    rho[2, 1] = -1j * c2sq * (eta**2 - 1) / (2 * k) + c2sq / 2 * eta * math.sin(phi)
    rho[2, 2] = c2sq / 2 * (1 + eta * math.cos(phi))
    return rho


def positivity_defect(rho):
    """Smallest eigenvalue of a Hermitian matrix (negative means not PSD)."""
    return float(eig_hermitian(rho).eigenvalues[0])


def closed_form_state(cfg, bath, t, strict=False):
    """rho_s(t) from the closed-form solution.

    With ``strict=True`` a smallest eigenvalue below ``-PSD_TOL`` raises
    :class:`ModelInconsistencyError`; otherwise the raw matrix is returned
    and callers consult :func:`positivity_defect`.
    """
    rates = rates_of(bath)
    rho = density_matrix(cfg, rates.nbar, decoherence_factor(rates, t))
    if strict:
        lo = positivity_defect(rho)
        if lo < -PSD_TOL:
            raise ModelInconsistencyError(
                f"closed-form state is not PSD at t={t!r}, nbar={rates.nbar:.4g}: min eigenvalue {lo:.3e}",
                min_eigenvalue=lo,
            )
    return rho


def stationary_state(cfg, nbar):
    """The t -> infinity non-passive state, written out independently."""
    c2sq = cfg.c2_sq
    off = c2sq / (2 * (2 * nbar + 1))
    return np.array(
        [
            [cfg.c1_sq, 0, 0],
            [0, c2sq / 2, -1j * off],
            [0, 1j * off, c2sq / 2],
        ],
        dtype=complex,
    )


def physical_state(rho):
    """Return ``(state, min_eigenvalue)``; ``state`` is ``rho`` itself when PSD."""
    lo = positivity_defect(rho)
    if lo >= 0:
        return np.asarray(rho, dtype=complex), lo
    state, _ = nearest_density_matrix(rho)
    return state, lo


@dataclass(frozen=True)
class FringeCoefficients:
    """Pr(P) = envelope * (1 + cos_half cos(Pd/2) + sin_half sin(Pd/2) + cos_full cos(Pd) + sin_full sin(Pd))."""

    cos_half: float
    sin_half: float
    cos_full: float
    sin_full: float

    @property
    def decaying_amplitude(self):
        """Upper bound on the eta-dependent fringe modulation (the Z and sin(phi) terms)."""
        return math.hypot(self.cos_half, self.sin_half) + abs(self.cos_full)

    @property
    def residual_amplitude(self):
        return abs(self.sin_full)


def fringe_coefficients(cfg, nbar, eta):
    z, th, phi = cfg.Z, cfg.theta, cfg.phi
    s = math.sqrt(eta)
    k = 2 * nbar + 1
    return FringeCoefficients(
        cos_half=z * s * (math.sin(th) - math.cos(th) + math.cos(phi - th) - math.sin(phi - th)),
        sin_half=z * s * (math.sin(th) - math.cos(th) + math.sin(phi - th) - math.cos(phi - th)),
        cos_full=cfg.c2_sq * eta * math.sin(phi),
        sin_full=cfg.c2_sq * (eta**2 - 1) / k,
    )


def envelope(omega, p):
    p = np.asarray(p, dtype=float)
    return np.sqrt(1 / (omega * np.pi)) * np.exp(-p * p / omega)


def interference_pattern(cfg, bath, t, p, omega=None):
    """Pr(P) at time ``t``. ``omega`` defaults to the bath's system frequency."""
    rates = rates_of(bath)
    if omega is None:
        if not isinstance(bath, BathSpec):
            raise InvalidParameterError("omega is required when passing a RateSet")
        omega = bath.omega
    eta = decoherence_factor(rates, t)
    c = fringe_coefficients(cfg, rates.nbar, eta)
    p = np.asarray(p, dtype=float)
    pd = p * cfg.delta / math.sqrt(omega)
    fringes = (
        c.cos_half * np.cos(pd / 2)
        + c.sin_half * np.sin(pd / 2)
        + c.cos_full * np.cos(pd)
        + c.sin_full * np.sin(pd)
    )
    out = envelope(omega, p) * (1 + fringes)
    return float(out) if out.ndim == 0 else out


def pattern_norm(cfg, nbar, eta):
    """Exact integral of Pr(P) over P (Gaussian moments of each fringe term)."""
    c = fringe_coefficients(cfg, nbar, eta)
    d2 = cfg.delta**2
    return 1 + c.cos_half * math.exp(-d2 / 16) + c.cos_full * math.exp(-d2 / 4)
