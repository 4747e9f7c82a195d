"""Ohmic bath with Lorentz-Drude cutoff.

Frequencies are angular (s^-1), temperatures in kelvin. The only place
hbar and k_B meet is the dimensionless group ``x = hbar*omega / (k_B*T)``.

Kernel integrals:

    J(w)      = (2 g0 w / pi) * L^2 / (L^2 + w^2)
    kappa(s)  = int_0^inf J(w) coth(hbar w / 2kT) cos(w s) dw      (noise)
    mu(s)     = int_0^inf J(w) sin(w s) dw = g0 L^2 exp(-L s)       (dissipation)

The GKSL coefficients are second order in the coupling, so the kernel
integrals carry one more factor of ``gamma0``:

    Delta(t) = g0 int_0^t kappa(s) cos(Omega s) ds
    gamma(t) = g0 int_0^t mu(s)    sin(Omega s) ds

which tends to ``gamma = g0^2 Omega r^2 / (1 + r^2)`` and
``Delta = gamma coth(x / 2)``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import constants
from scipy.integrate import IntegrationWarning, quad
from scipy.special import exp1, expi

from .errors import InvalidParameterError, NumericalFailure

# exp(x) overflows beyond this; treat the bath as empty.
_EXP_CUTOFF = 700.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = constants.hbar
    k_boltzmann: float = constants.k


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class BathSpec:
    """Immutable bath description; ``cutoff`` is Lambda, ``omega`` the system frequency."""

    gamma0: float
    cutoff: float
    omega: float
    temperature: float

    def __post_init__(self):
        if not self.gamma0 > 0:
            raise InvalidParameterError(f"gamma0 must be positive, got {self.gamma0!r}")
        if not self.cutoff > 0:
            raise InvalidParameterError(f"cutoff must be positive, got {self.cutoff!r}")
        if not self.omega > 0:
            raise InvalidParameterError(f"omega must be positive, got {self.omega!r}")
        if not self.temperature >= 0:
            raise InvalidParameterError(f"temperature must be >= 0, got {self.temperature!r}")
        if self.gamma0 > 0.1:
            warnings.warn(
                f"gamma0={self.gamma0} is outside the weak-coupling regime (> 0.1)",
                RuntimeWarning,
                stacklevel=3,
            )

    @classmethod
    def from_ratio(cls, gamma0, cutoff_ratio, omega, temperature):
        return cls(gamma0, cutoff_ratio * omega, omega, temperature)

    @property
    def r(self):
        return self.cutoff / self.omega

    @property
    def x(self):
        """hbar*Omega / (k_B*T); ``inf`` at T = 0."""
        return hbar_omega_over_kt(self.omega, self.temperature)

    @property
    def zero_temperature(self):
        return self.temperature == 0


@dataclass(frozen=True)
class RateSet:
    Delta: float
    gamma: float
    Gamma: float
    nbar: float

    @property
    def decoherence_rate(self):
        """Gamma (2 nbar + 1), the exponent rate of the decoherence factor."""
        return self.Gamma * (2 * self.nbar + 1)


def hbar_omega_over_kt(omega, temperature, const=CODATA):
    if temperature == 0:
        return math.inf
    return const.hbar * omega / (const.k_boltzmann * temperature)


def temperature_from_x(omega, x, const=CODATA):
    """Temperature at which ``hbar*omega / (k_B*T) == x``."""
    if not x > 0:
        raise InvalidParameterError(f"x must be positive, got {x!r}")
    return const.hbar * omega / (const.k_boltzmann * x)


def temperature_from_log_ratio(omega, log10_ratio):
    """Invert the figure-axis variable ``log10(Omega / T)``."""
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega!r}")
    return omega / 10.0 ** log10_ratio


def occupation_from_x(x):
    """Bose-Einstein occupation 1/(e^x - 1); exactly 0 for x = inf."""
    if x <= 0:
        raise InvalidParameterError(f"x must be positive, got {x!r}")
    if x > _EXP_CUTOFF:
        return 0.0
    return 1.0 / math.expm1(x)


def mean_occupation(omega, temperature, const=CODATA):
    if not omega > 0:
        raise InvalidParameterError(f"omega must be positive, got {omega!r}")
    if temperature < 0:
        raise InvalidParameterError(f"temperature must be >= 0, got {temperature!r}")
    if temperature == 0:
        return 0.0
    return occupation_from_x(hbar_omega_over_kt(omega, temperature, const))


def _coth_half(x):
    # coth(x/2) for x in (0, inf]
    if x == math.inf or x > 2 * _EXP_CUTOFF:
        return 1.0
    return 1.0 / math.tanh(x / 2)


def spectral_density(spec, w):
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise InvalidParameterError("spectral density is defined for w >= 0")
    lam2 = spec.cutoff ** 2
    out = (2 * spec.gamma0 * w / np.pi) * lam2 / (lam2 + w * w)
    return float(out) if out.ndim == 0 else out


def dissipation_kernel(spec, tau):
    """mu(tau) = gamma0 * Lambda^2 * exp(-Lambda tau), tau > 0."""
    if not tau > 0:
        raise InvalidParameterError(f"dissipation kernel needs tau > 0, got {tau!r}")
    return spec.gamma0 * spec.cutoff ** 2 * math.exp(-spec.cutoff * tau)


def _quad(f, a, b, what, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, err = quad(f, a, b, **kw)
        except IntegrationWarning as exc:
            raise NumericalFailure(f"{what} on [{a:.3e}, {b:.3e}] did not converge: {exc}") from exc
    return val, err


def dissipation_kernel_quadrature(spec, tau, **kw):
    """mu(tau) by direct oscillatory quadrature of J(w) sin(w tau).

    Kept as a cross-check for the closed form. The slowly decaying 1/w tail
    of J is handled by QUADPACK's Fourier-integral routine on an infinite range.
    """
    if not tau > 0:
        raise InvalidParameterError(f"dissipation kernel needs tau > 0, got {tau!r}")
    lam = spec.cutoff

    def f(w):
        return spectral_density(spec, w)

    kw.setdefault("epsabs", 0.0)
    kw.setdefault("epsrel", 1e-10)
    split = max(20 * lam, 200 / tau)
    head, _ = _quad(f, 0.0, split, "mu head", weight="sin", wvar=tau, limit=2000, **kw)
    tail, _ = _quad(f, split, np.inf, "mu tail", weight="sin", wvar=tau, limlst=200, epsabs=1e-12 * spec.gamma0 * lam**2)
    return head + tail


def _thermal_integrand(spec, temperature, const):
    # J(w) (coth(hbar w / 2kT) - 1): finite at w = 0, decays like exp(-hbar w / kT)
    lam2 = spec.cutoff ** 2
    c1 = 2 * spec.gamma0 * lam2 / math.pi
    a = const.hbar / (2 * const.k_boltzmann * temperature)

    def f(w):
        aw = a * w
        if aw < 1e-8:
            return c1 * (1.0 / a - w) / (lam2 + w * w)
        if aw > _EXP_CUTOFF / 2:
            return 0.0
        return 2 * c1 * w / ((lam2 + w * w) * math.expm1(2 * aw))

    return f


def noise_cutoff(spec, temperature=None, const=CODATA):
    """Upper frequency limit for noise-kernel quadrature, 50 max(Lambda, kT/hbar)."""
    t = spec.temperature if temperature is None else temperature
    thermal = const.k_boltzmann * t / const.hbar
    return 50.0 * max(spec.cutoff, thermal)


def vacuum_noise_kernel(spec, tau):
    """int_0^inf J(w) cos(w tau) dw for tau > 0 (the T = 0 part of kappa).

    Closed form ``(g0 L^2/pi) [e^y E1(y) - e^-y Ei(y)]`` with ``y = L tau``;
    an asymptotic series takes over for large ``y`` where both terms overflow.
    Negative beyond ``y ~ 1`` with a ``-1/y^2`` tail; log-divergent at 0.
    """
    if not tau > 0:
        raise InvalidParameterError(f"vacuum noise kernel needs tau > 0, got {tau!r}")
    y = spec.cutoff * abs(tau)
    pref = spec.gamma0 * spec.cutoff ** 2 / math.pi
    if y < 60.0:
        return pref * (math.exp(y) * exp1(y) - math.exp(-y) * expi(y))
    # e^y E1(y) - e^-y Ei(y) ~ -2 sum_{n odd} n! / y^(n+1)
    total, term = 0.0, 1.0 / (y * y)
    for n in range(1, 22, 2):
        total += term
        term *= (n + 1) * (n + 2) / (y * y)
    return -2 * pref * total


def thermal_noise_kernel(spec, tau, temperature=None, const=CODATA):
    """int_0^inf J(w) (coth(hbar w/2kT) - 1) cos(w tau) dw, adaptive quadrature."""
    t = spec.temperature if temperature is None else temperature
    if not t > 0:
        raise InvalidParameterError(f"thermal noise kernel needs T > 0, got {t!r}")
    f = _thermal_integrand(spec, t, const)
    w_top = noise_cutoff(spec, t, const)
    scale = spec.gamma0 * spec.cutoff * max(spec.cutoff, 2 * const.k_boltzmann * t / const.hbar)
    opts = dict(epsabs=1e-12 * scale, epsrel=1e-10, limit=1000)
    tau = abs(float(tau))
    thermal = const.k_boltzmann * t / const.hbar
    edges = np.unique([0.0, min(spec.cutoff, thermal), max(spec.cutoff, thermal), w_top])
    if tau == 0:
        return sum(_quad(f, lo, hi, "kappa_th", **opts)[0] for lo, hi in zip(edges[:-1], edges[1:]))
    return sum(
        _quad(f, lo, hi, "kappa_th", weight="cos", wvar=tau, **opts)[0] for lo, hi in zip(edges[:-1], edges[1:])
    )


def noise_kernel(spec, tau, temperature=None, *, zero_temperature=False, omega_max=None, const=CODATA):
    """kappa(tau) = vacuum part + thermal part.

    ``temperature`` defaults to ``spec.temperature``; T = 0 is only accepted
    through ``zero_temperature=True`` (coth -> 1, thermal part dropped).

    The 1/w tail of J makes kappa diverge logarithmically at tau = 0, so
    tau = 0 (or an explicit ``omega_max``) evaluates the integral truncated at
    ``omega_max`` (default ``noise_cutoff``) by plain quadrature instead.
    """
    t = spec.temperature if temperature is None else temperature
    if not zero_temperature and not t > 0:
        raise InvalidParameterError(f"noise kernel needs T > 0 (or zero_temperature=True), got {t!r}")
    tau = abs(float(tau))
    if tau == 0 or omega_max is not None:
        return truncated_noise_kernel(spec, tau, 0.0 if zero_temperature else t, omega_max, const)
    out = vacuum_noise_kernel(spec, tau)
    if not zero_temperature:
        out += thermal_noise_kernel(spec, tau, t, const)
    return out


def truncated_noise_kernel(spec, tau, temperature, omega_max=None, const=CODATA, tail=False):
    """int_0^omega_max J(w) coth(hbar w/2kT) cos(w tau) dw by direct quadrature.

    Independent of the vacuum/thermal split; ``temperature = 0`` means coth = 1.
    With ``tail=True`` (and tau > 0) the remainder beyond ``omega_max`` is added
    by Fourier-integral quadrature, taking coth = 1 there, so the result
    approximates the untruncated kernel.
    """
    w_top = noise_cutoff(spec, temperature, const) if omega_max is None else float(omega_max)
    lam2 = spec.cutoff ** 2
    c1 = 2 * spec.gamma0 * lam2 / math.pi
    a = const.hbar / (2 * const.k_boltzmann * temperature) if temperature > 0 else math.inf

    def f(w):
        aw = a * w
        if aw < 1e-8:
            return c1 / (a * (lam2 + w * w))
        if aw > _EXP_CUTOFF:
            return c1 * w / (lam2 + w * w)
        return c1 * w / ((lam2 + w * w) * math.tanh(aw))

    thermal = 2 * const.k_boltzmann * temperature / const.hbar
    scale = spec.gamma0 * spec.cutoff * max(spec.cutoff, thermal)
    opts = dict(epsabs=1e-12 * scale, epsrel=1e-10, limit=2000)
    edges = np.geomspace(spec.cutoff * 1e-2, w_top, 16)
    edges = np.concatenate([[0.0], edges[edges < w_top], [w_top]])
    tau = abs(float(tau))
    if tau == 0:
        return sum(_quad(f, lo, hi, "kappa", **opts)[0] for lo, hi in zip(edges[:-1], edges[1:]))
    body = sum(_quad(f, lo, hi, "kappa", weight="cos", wvar=tau, **opts)[0] for lo, hi in zip(edges[:-1], edges[1:]))
    if not tail:
        return body
    rest, _ = _quad(
        lambda w: c1 * w / (lam2 + w * w), w_top, np.inf, "kappa tail", weight="cos", wvar=tau,
        limlst=200, epsabs=1e-12 * scale,
    )
    return body + rest


def _time_edges(t, first):
    if t <= first:
        return np.array([0.0, t])
    n = max(2, int(np.ceil(np.log10(t / first) * 3)) + 1)
    return np.concatenate([[0.0], np.geomspace(first, t, n)])


def gamma_t(spec, t):
    """gamma(t) = gamma0 int_0^t mu(s) sin(Omega s) ds."""
    if t < 0:
        raise InvalidParameterError(f"t must be >= 0, got {t!r}")
    if t == 0:
        return 0.0
    lam = spec.cutoff
    mu = lambda s: spec.gamma0 * lam**2 * math.exp(-lam * s)  # noqa: E731
    edges = np.unique(np.concatenate([[0.0], np.linspace(0, min(t, 40 / lam), 9)[1:], [t]]))
    opts = dict(epsabs=1e-12 * spec.gamma0**2 * spec.omega, epsrel=1e-10, limit=500)
    return spec.gamma0 * sum(
        _quad(mu, a, b, "gamma(t)", weight="sin", wvar=spec.omega, **opts)[0]
        for a, b in zip(edges[:-1], edges[1:])
    )


def delta_t(spec, t, const=CODATA):
    """Delta(t) = gamma0 int_0^t kappa(s) cos(Omega s) ds (nested quadrature)."""
    if t < 0:
        raise InvalidParameterError(f"t must be >= 0, got {t!r}")
    if t == 0:
        return 0.0
    zero = spec.zero_temperature
    kappa = lambda s: noise_kernel(spec, s, zero_temperature=zero, const=const)  # noqa: E731
    scale = spec.gamma0**2 * spec.omega * _coth_half(spec.x)
    opts = dict(epsabs=1e-11 * scale, epsrel=1e-9, limit=200)
    edges = _time_edges(t, 1e-3 / max(spec.cutoff, noise_cutoff(spec, None, const) / 50))
    # first panel holds the log singularity of kappa; cos(Omega s) ~ 1 there
    total = _quad(lambda s: kappa(s) * math.cos(spec.omega * s), 0.0, edges[1], "Delta(t)", **opts)[0]
    for lo, hi in zip(edges[1:-1], edges[2:]):
        total += _quad(kappa, lo, hi, "Delta(t)", weight="cos", wvar=spec.omega, **opts)[0]
    return spec.gamma0 * total


def time_dependent_coefficients(spec, t, const=CODATA):
    """Return ``(Delta(t), gamma(t))`` in s^-1."""
    return delta_t(spec, t, const), gamma_t(spec, t)


def asymptotic_rates(spec, const=CODATA):
    """Long-time coefficients to second order in the coupling."""
    gamma = spec.gamma0**2 * spec.omega * spec.r**2 / (1 + spec.r**2)
    x = hbar_omega_over_kt(spec.omega, spec.temperature, const)
    nbar = 0.0 if x == math.inf else occupation_from_x(x)
    return RateSet(Delta=gamma * _coth_half(x), gamma=gamma, Gamma=gamma, nbar=nbar)


def to_joules(energy, const=CODATA):
    """Convert an hbar = 1 energy (s^-1) to joules."""
    return energy * const.hbar
