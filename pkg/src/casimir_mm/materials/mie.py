"""Dipole Mie coefficients and the extended Maxwell Garnett medium."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from ..constants import C
from . import models as m

# Below this |z| the closed trigonometric forms of j1 lose digits to
# cancellation; the truncated power series is exact to ~1e-16 there.
SERIES_THRESHOLD = 0.05


def _j1(z):
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < SERIES_THRESHOLD
    zs = np.where(small, 1.0, z)
    closed = np.sin(zs) / zs ** 2 - np.cos(zs) / zs
    z2 = z * z
    series = z / 3.0 * (1 - z2 / 10 * (1 - z2 / 28 * (1 - z2 / 54 * (1 - z2 / 88))))
    return np.where(small, series, closed)


def _dzj1(z):
    """``[z j1(z)]' = z j0(z) - j1(z)``."""
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < SERIES_THRESHOLD
    zs = np.where(small, 1.0, z)
    closed = np.sin(zs) - _j1(zs)
    z2 = z * z
    # d/dz of z^2/3 * (1 - z^2/10 + z^4/280 - z^6/15120 + z^8/1330560)
    series = (2 * z / 3) * (1 - 2 * z2 / 10 + 3 * z2 ** 2 / 280
                            - 4 * z2 ** 3 / 15120 + 5 * z2 ** 4 / 1330560)
    return np.where(small, series, closed)


def _h1(z):
    """Outgoing spherical Hankel function ``h1+ = j1 + i y1``."""
    z = np.asarray(z, dtype=complex)
    return np.exp(1j * z) * (-1.0 / z - 1j / z ** 2)


def _dzh1(z):
    """``[z h1+(z)]' = exp(iz) (-i + 1/z + i/z^2)``."""
    z = np.asarray(z, dtype=complex)
    return np.exp(1j * z) * (-1j + 1.0 / z + 1j / z ** 2)


def mie_dipole_coeffs(x, eps_in, eps_h=1.0):
    """Order-one electric and magnetic Mie coefficients of a sphere.

    Parameters
    ----------
    x : float or ndarray
        Size parameter ``sqrt(eps_h) * omega * R / c`` (real, > 0).
    eps_in, eps_h : complex
        Sphere and host permittivities at the same real frequency.

    Returns
    -------
    a1, b1 : complex ndarray
        Sign convention chosen so that
        ``a1 ~ (2i/3) x^3 (eps_in - eps_h) / (eps_in + 2 eps_h)`` for small x.
    """
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)) or np.any(~np.isfinite(x)):
        raise ValueError("size parameter must be finite and > 0")
    eps_in = np.asarray(eps_in, dtype=complex)
    eps_h = np.asarray(eps_h, dtype=complex)
    xp = np.sqrt(eps_in / eps_h) * x
    j_x, j_p = _j1(x), _j1(xp)
    dj_x, dj_p = _dzj1(x), _dzj1(xp)
    h_x, dh_x = _h1(x), _dzh1(x)
    a1 = ((j_p * dj_x * eps_in - j_x * dj_p * eps_h)
          / (h_x * dj_p * eps_h - j_p * dh_x * eps_in))
    b1 = (j_p * dj_x - j_x * dj_p) / (h_x * dj_p - j_p * dh_x)
    return a1, b1


@dataclass(frozen=True)
class SphereCompositeParams:
    """Cubic-like array of identical spheres in a homogeneous host."""

    filling_factor: float
    sphere_radius: float
    inclusion: Union[m.PolaritonicParams, m.DrudeParams]
    host_eps: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.filling_factor <= 1.0:
            raise ValueError("filling factor must lie in [0, 1]")
        if not self.sphere_radius > 0:
            raise ValueError("sphere radius must be > 0")
        if self.host_eps < 1:
            raise ValueError("host permittivity must be >= 1")

    def inclusion_eps(self, omega):
        if isinstance(self.inclusion, m.PolaritonicParams):
            return m.polaritonic_eps(self.inclusion, np.asarray(omega, dtype=float))
        return m.drude_real_axis(self.inclusion, omega)


@dataclass
class EmgResponse:
    """Extended Maxwell Garnett response on the real frequency axis."""

    eps: np.ndarray
    mu: np.ndarray
    x_max: float
    outside_validity: bool
    near_pole: bool


# |denominator| / x^3 below this marks a frequency as sitting on a pole.
POLE_GUARD = 1e-12


def emg_effective_response(p: SphereCompositeParams, omega) -> EmgResponse:
    """Effective eps and mu of a sphere array from its dipole Mie coefficients.

    Valid for ``x = omega R / c`` well below one; ``outside_validity`` is set
    when any sampled ``x`` exceeds 0.3.
    """
    omega = np.asarray(omega, dtype=float)
    x = np.sqrt(p.host_eps) * omega * p.sphere_radius / C
    a1, b1 = mie_dipole_coeffs(x, p.inclusion_eps(omega), p.host_eps)
    f = p.filling_factor
    x3 = x ** 3
    den_e = x3 + 1.5j * f * a1
    den_m = x3 + 1.5j * f * b1
    near = bool(np.any(np.abs(den_e) <= POLE_GUARD * x3)
                or np.any(np.abs(den_m) <= POLE_GUARD * x3))
    with np.errstate(divide="ignore", invalid="ignore"):
        eps = p.host_eps * (x3 - 3j * f * a1) / den_e
        mu = (x3 - 3j * f * b1) / den_m
    return EmgResponse(eps, mu, float(np.max(x)) if x.size else 0.0,
                       bool(np.any(x > 0.3)), near)
