"""Closed-form permittivity and permeability models.

Every ``*_eps``/``*_term`` function here is written directly on the
imaginary frequency axis (``omega = i xi``), where the responses are real.
The matching complex real-axis forms (``*_real_axis``) exist for the
Kramers-Kronig machinery and its self-tests.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """A model was evaluated where it is not defined (e.g. plasma at xi = 0)."""


def _check_xi(xi):
    xi = np.asarray(xi, dtype=float)
    if np.any(~np.isfinite(xi)) or np.any(xi < 0):
        raise DomainError("imaginary frequency must be finite and >= 0")
    return xi


@dataclass(frozen=True)
class DrudeParams:
    """Drude metal: plasma frequency and relaxation rate [rad/s].

    ``damping = 0`` is the dissipationless plasma model.
    """

    plasma_freq: float
    damping: float = 0.0

    def __post_init__(self):
        if not (self.plasma_freq >= 0 and self.damping >= 0):
            raise ValueError("Drude parameters must be non-negative")

    @property
    def is_plasma(self):
        return self.damping == 0.0


@dataclass(frozen=True)
class LorentzParams:
    """Single Lorentz resonance: strength, resonance frequency, damping [rad/s]."""

    strength: float
    resonance: float
    damping: float = 0.0

    def __post_init__(self):
        if not (self.strength >= 0 and self.resonance >= 0 and self.damping >= 0):
            raise ValueError("Lorentz parameters must be non-negative")


@dataclass(frozen=True)
class CompositeAxisParams:
    """Connected metallic metamaterial along one axis.

    The response is ``1 + (1 - f) * resonance + f * drude``.
    """

    filling_factor: float
    resonance: LorentzParams
    drude: DrudeParams

    def __post_init__(self):
        if not 0.0 <= self.filling_factor <= 1.0:
            raise ValueError("filling factor must lie in [0, 1]")


@dataclass(frozen=True)
class PolaritonicParams:
    """Polaritonic (phonon-resonant) dielectric.

    ``Omega_pol = omega_pol * sqrt(eps(0) / eps_inf)``.
    """

    eps_inf: float
    Omega_pol: float
    omega_pol: float
    gamma_pol: float = 0.0

    def __post_init__(self):
        if self.eps_inf < 1:
            raise ValueError("eps_inf must be >= 1")
        if self.Omega_pol < self.omega_pol or self.omega_pol <= 0:
            raise ValueError("need Omega_pol >= omega_pol > 0")
        if self.gamma_pol < 0:
            raise ValueError("gamma_pol must be >= 0")

    @property
    def eps_static(self):
        return self.eps_inf * (self.Omega_pol / self.omega_pol) ** 2


@dataclass(frozen=True)
class AtomParams:
    """Ground-state atom in a harmonic trap (SI units throughout).

    ``static_polarizability`` is the polarizability *volume*
    ``alpha_SI / (4 pi eps0)`` in m^3; use :meth:`from_cgs` to pass the
    customary cm^3 value.
    """

    static_polarizability: float
    transition_freq: float
    mass: float
    trap_freq: float

    def __post_init__(self):
        if min(self.static_polarizability, self.transition_freq,
               self.mass, self.trap_freq) <= 0:
            raise ValueError("atom parameters must all be positive")

    @classmethod
    def from_cgs(cls, alpha0_cm3, transition_freq, mass, trap_freq):
        return cls(alpha0_cm3 * 1e-6, transition_freq, mass, trap_freq)


# --------------------------------------------------------------------------
# imaginary-axis evaluations


def drude_term(p: DrudeParams, xi):
    """``Omega^2 / (xi^2 + gamma xi)``; diverges at ``xi = 0``."""
    xi = _check_xi(xi)
    if np.any(xi == 0) and p.plasma_freq > 0:
        raise DomainError("Drude/plasma response diverges at xi = 0; "
                          "use the zero-frequency reflection limits")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = p.plasma_freq ** 2 / (xi * (xi + p.damping))
    return np.where(xi == 0, 0.0, out) if p.plasma_freq == 0 else out


def drude_eps(p: DrudeParams, xi):
    """Drude permittivity at imaginary frequency, ``1 + Omega^2/(xi^2 + gamma xi)``."""
    return 1.0 + drude_term(p, xi)


def lorentz_term(p: LorentzParams, xi):
    """Resonant contribution ``Omega_r^2 / (xi^2 + omega_r^2 + gamma_r xi)``.

    The full response is ``1 + lorentz_term``.  With ``omega_r = 0`` the term
    behaves like a (magnetic) plasma and is undefined at ``xi = 0``.
    """
    xi = _check_xi(xi)
    den = xi * xi + p.resonance ** 2 + p.damping * xi
    if p.strength == 0:
        return np.zeros_like(den)
    if np.any(den == 0):
        raise DomainError("Lorentz term with zero resonance diverges at xi = 0")
    return p.strength ** 2 / den


def composite_axis_eps(p: CompositeAxisParams, xi):
    """Resonance plus Drude background weighted by the filling factor."""
    f = p.filling_factor
    out = 1.0 + (1.0 - f) * lorentz_term(p.resonance, xi)
    if f > 0:
        out = out + f * drude_term(p.drude, xi)
    return out


def multi_lorentz_eps(oscillators, xi):
    """``1 + sum`` of Lorentz terms, e.g. a Sellmeier-like glass model."""
    xi = _check_xi(xi)
    out = np.ones_like(xi)
    for osc in oscillators:
        out = out + lorentz_term(osc, xi)
    return out


def mg_metal_spheres_eps(f, eps_met, eps_d):
    """Maxwell Garnett permittivity of metal spheres in a dielectric host.

    Both constituent permittivities must already be evaluated at the same
    frequency.  ``eps_met = inf`` is allowed and gives the perfectly
    conducting inclusion limit.
    """
    if not 0.0 <= f <= 1.0:
        raise ValueError("filling factor must lie in [0, 1]")
    eps_met = np.asarray(eps_met, dtype=float)
    eps_d = np.asarray(eps_d, dtype=float)
    if f == 1.0:
        return eps_met + 0.0 * eps_d
    with np.errstate(invalid="ignore", divide="ignore"):
        num = (1 + 2 * f) * eps_met + 2 * (1 - f) * eps_d
        den = (1 - f) * eps_met + (2 + f) * eps_d
        if np.any(den == 0):
            raise ZeroDivisionError("vanishing Maxwell Garnett denominator")
        out = eps_d * num / den
        limit = eps_d * (1 + 2 * f) / (1 - f)
    return np.where(np.isinf(eps_met), limit, out)


def nc_metamaterial_response(f, metal: DrudeParams, host_oscillators,
                             electric: LorentzParams, magnetic: LorentzParams, xi):
    """Non-connected metallic metamaterial: Maxwell Garnett background plus
    ad hoc electric and magnetic resonances.

    Returns
    -------
    (eps, mu) : tuple of ndarray
    """
    xi = _check_xi(xi)
    eps_d = multi_lorentz_eps(host_oscillators, xi)
    with np.errstate(divide="ignore"):
        eps_met = np.where(xi > 0, 1.0 + metal.plasma_freq ** 2
                           / np.where(xi > 0, xi * (xi + metal.damping), 1.0), np.inf)
    if metal.plasma_freq == 0:
        eps_met = np.ones_like(xi)
    eps = mg_metal_spheres_eps(f, eps_met, eps_d) + lorentz_term(electric, xi)
    mu = 1.0 + lorentz_term(magnetic, xi)
    return eps, mu


def polaritonic_eps(p: PolaritonicParams, omega):
    """Polaritonic permittivity at a (complex) angular frequency.

    Passing ``omega = 1j * xi`` returns the real imaginary-axis value
    ``eps_inf * (1 + (Omega^2 - omega_pol^2) / (xi^2 + omega_pol^2 + gamma xi))``.
    """
    omega = np.asarray(omega)
    if np.iscomplexobj(omega) and np.all(omega.real == 0):
        xi = _check_xi(omega.imag)
        return p.eps_inf * (1.0 + (p.Omega_pol ** 2 - p.omega_pol ** 2)
                            / (xi * xi + p.omega_pol ** 2 + p.gamma_pol * xi))
    return p.eps_inf * (1.0 + (p.Omega_pol ** 2 - p.omega_pol ** 2)
                        / (p.omega_pol ** 2 - omega * omega - 1j * p.gamma_pol * omega))


def atomic_polarizability(p: AtomParams, xi):
    """Single-resonance polarizability volume ``alpha0 / (1 + xi^2/omega0^2)`` [m^3]."""
    xi = _check_xi(xi)
    return p.static_polarizability / (1.0 + (xi / p.transition_freq) ** 2)


# --------------------------------------------------------------------------
# real-axis forms (exp(-i omega t) convention, Im >= 0 for passive media)


def drude_real_axis(p: DrudeParams, omega):
    omega = np.asarray(omega, dtype=complex)
    return 1.0 - p.plasma_freq ** 2 / (omega * (omega + 1j * p.damping))


def lorentz_real_axis(p: LorentzParams, omega):
    """``1 - Omega^2 / (omega^2 - omega_r^2 + i gamma omega)``."""
    omega = np.asarray(omega, dtype=complex)
    return 1.0 - p.strength ** 2 / (omega * omega - p.resonance ** 2
                                    + 1j * p.damping * omega)


def composite_real_axis(p: CompositeAxisParams, omega):
    f = p.filling_factor
    res = lorentz_real_axis(p.resonance, omega) - 1.0
    out = 1.0 + (1.0 - f) * res
    if f > 0:
        out = out + f * (drude_real_axis(p.drude, omega) - 1.0)
    return out


def dielectric_static(oscillators):
    """Static value of a multi-oscillator dielectric."""
    return 1.0 + math.fsum(o.strength ** 2 / o.resonance ** 2 for o in oscillators)
