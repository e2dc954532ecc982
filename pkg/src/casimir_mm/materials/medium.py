"""Per-axis response models and diagonal magnetodielectric media."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import models as m


@dataclass(frozen=True)
class DiagonalTensorResponse:
    """Diagonal eps and mu tensors at one (or an array of) imaginary frequencies."""

    eps_xx: np.ndarray
    eps_yy: np.ndarray
    eps_zz: np.ndarray
    mu_xx: np.ndarray
    mu_yy: np.ndarray
    mu_zz: np.ndarray

    def components(self):
        return (self.eps_xx, self.eps_yy, self.eps_zz,
                self.mu_xx, self.mu_yy, self.mu_zz)

    @classmethod
    def isotropic(cls, eps, mu=1.0):
        return cls(eps, eps, eps, mu, mu, mu)

    @classmethod
    def uniaxial(cls, eps_xx, eps_zz, mu_xx=1.0, mu_zz=1.0):
        return cls(eps_xx, eps_xx, eps_zz, mu_xx, mu_xx, mu_zz)


@dataclass(frozen=True)
class StaticLimit:
    """Zero-frequency behavior of one response component.

    ``value`` is the xi -> 0 limit (``inf`` for conductors) and
    ``plasma_sq`` is ``lim xi^2 * response`` in rad^2/s^2, non-zero only for
    dissipationless (plasma-like) divergences.
    """

    value: float
    plasma_sq: float = 0.0

    def __add__(self, other):
        return StaticLimit(self.value + other.value - 1.0,
                           self.plasma_sq + other.plasma_sq)


def _fmt(x):
    return repr(float(x))


class AxisModel:
    """One diagonal component of eps or mu as a function of ``xi``."""

    def __call__(self, xi):
        raise NotImplementedError

    def static_limit(self) -> StaticLimit:
        raise NotImplementedError

    def expr(self) -> str:
        """Config-file expression reproducing this model (frequencies in rad/s)."""
        raise NotImplementedError

    def scaled(self, **zeroed):
        """Copy with the named contributions switched off."""
        return self


@dataclass(frozen=True)
class Constant(AxisModel):
    value: float = 1.0

    def __call__(self, xi):
        return np.full(np.shape(xi), float(self.value))

    def static_limit(self):
        return StaticLimit(float(self.value))

    def expr(self):
        return f"constant(value={_fmt(self.value)})"


@dataclass(frozen=True)
class Drude(AxisModel):
    params: m.DrudeParams

    def __call__(self, xi):
        return m.drude_eps(self.params, xi)

    def static_limit(self):
        p = self.params
        if p.plasma_freq == 0:
            return StaticLimit(1.0)
        return StaticLimit(math.inf, p.plasma_freq ** 2 if p.is_plasma else 0.0)

    def expr(self):
        p = self.params
        return f"drude(plasma={_fmt(p.plasma_freq)}, damping={_fmt(p.damping)})"


def _lorentz_static(p: m.LorentzParams):
    if p.strength == 0:
        return StaticLimit(1.0)
    if p.resonance > 0:
        return StaticLimit(1.0 + (p.strength / p.resonance) ** 2)
    return StaticLimit(math.inf, p.strength ** 2 if p.damping == 0 else 0.0)


@dataclass(frozen=True)
class Lorentz(AxisModel):
    """``1 + lorentz_term``; a zero resonance frequency gives a plasma-like pole."""

    params: m.LorentzParams

    def __call__(self, xi):
        return 1.0 + m.lorentz_term(self.params, xi)

    def static_limit(self):
        return _lorentz_static(self.params)

    def expr(self):
        p = self.params
        return (f"lorentz(strength={_fmt(p.strength)}, resonance={_fmt(p.resonance)}, "
                f"damping={_fmt(p.damping)})")

    def scaled(self, **zeroed):
        if zeroed.get("lorentz"):
            return Lorentz(m.LorentzParams(0.0, self.params.resonance, self.params.damping))
        return self


@dataclass(frozen=True)
class Sum(AxisModel):
    """``1 + sum(term - 1)`` over the contained models."""

    terms: tuple

    def __call__(self, xi):
        out = np.ones(np.shape(xi))
        for t in self.terms:
            out = out + (t(xi) - 1.0)
        return out

    def static_limit(self):
        out = StaticLimit(1.0)
        for t in self.terms:
            out = out + t.static_limit()
        return out

    def expr(self):
        return " + ".join(t.expr() for t in self.terms)

    def scaled(self, **zeroed):
        return Sum(tuple(t.scaled(**zeroed) for t in self.terms))


@dataclass(frozen=True)
class Composite(AxisModel):
    params: m.CompositeAxisParams

    def __call__(self, xi):
        return m.composite_axis_eps(self.params, xi)

    def static_limit(self):
        p = self.params
        f = p.filling_factor
        res = _lorentz_static(p.resonance)
        out = StaticLimit(1.0 + (1 - f) * (res.value - 1.0), (1 - f) * res.plasma_sq)
        if f > 0 and p.drude.plasma_freq > 0:
            drude = Drude(p.drude).static_limit()
            out = StaticLimit(math.inf, out.plasma_sq + f * drude.plasma_sq)
        return out

    def expr(self):
        p = self.params
        return (f"composite(f={_fmt(p.filling_factor)}, "
                f"strength={_fmt(p.resonance.strength)}, "
                f"resonance={_fmt(p.resonance.resonance)}, "
                f"res_damping={_fmt(p.resonance.damping)}, "
                f"plasma={_fmt(p.drude.plasma_freq)}, damping={_fmt(p.drude.damping)})")

    def scaled(self, **zeroed):
        p = self.params
        if zeroed.get("electric"):
            res = m.LorentzParams(0.0, p.resonance.resonance, p.resonance.damping)
            return Composite(m.CompositeAxisParams(p.filling_factor, res, p.drude))
        return self


@dataclass(frozen=True)
class NonConnected(AxisModel):
    """Maxwell Garnett metal spheres in a dielectric host plus an ad hoc
    electric resonance."""

    filling_factor: float
    metal: m.DrudeParams
    host: tuple
    electric: m.LorentzParams

    def __call__(self, xi):
        eps, _ = m.nc_metamaterial_response(self.filling_factor, self.metal, self.host,
                                            self.electric, m.LorentzParams(0.0, 1.0), xi)
        return eps

    def static_limit(self):
        eps_d = m.dielectric_static(self.host)
        met = math.inf if self.metal.plasma_freq > 0 else 1.0
        bg = float(m.mg_metal_spheres_eps(self.filling_factor, met, eps_d))
        return StaticLimit(bg + _lorentz_static(self.electric).value - 1.0)

    def expr(self):
        host = ", ".join(
            f"lorentz(strength={_fmt(o.strength)}, resonance={_fmt(o.resonance)}, "
            f"damping={_fmt(o.damping)})" for o in self.host)
        e = self.electric
        return (f"nonconnected(f={_fmt(self.filling_factor)}, "
                f"metal=drude(plasma={_fmt(self.metal.plasma_freq)}, "
                f"damping={_fmt(self.metal.damping)}), host=[{host}], "
                f"electric=lorentz(strength={_fmt(e.strength)}, "
                f"resonance={_fmt(e.resonance)}, damping={_fmt(e.damping)}))")

    def scaled(self, **zeroed):
        if zeroed.get("electric"):
            e = self.electric
            return NonConnected(self.filling_factor, self.metal, self.host,
                                m.LorentzParams(0.0, e.resonance, e.damping))
        return self


@dataclass(frozen=True)
class Polaritonic(AxisModel):
    params: m.PolaritonicParams

    def __call__(self, xi):
        return m.polaritonic_eps(self.params, 1j * np.asarray(xi, dtype=float))

    def static_limit(self):
        return StaticLimit(self.params.eps_static)

    def expr(self):
        p = self.params
        return (f"polaritonic(eps_inf={_fmt(p.eps_inf)}, Omega={_fmt(p.Omega_pol)}, "
                f"omega={_fmt(p.omega_pol)}, gamma={_fmt(p.gamma_pol)})")


@dataclass(frozen=True, eq=False)
class Tabulated(AxisModel):
    """Response known on a grid of imaginary frequencies.

    Interpolates ``response - 1`` linearly in ``log xi``; above the grid the
    excess decays as ``xi^-2``.  ``values[0]`` is the static value at
    ``xi = 0`` when ``xi_grid[0] == 0``.
    """

    xi_grid: np.ndarray
    values: np.ndarray
    label: str = "table"
    source: str = field(default="", compare=False)

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        g = self.xi_grid
        v = self.values - 1.0
        pos = g > 0
        lg, lv = np.log(g[pos]), v[pos]
        out = np.empty(xi.shape)
        with np.errstate(divide="ignore"):
            lx = np.log(np.where(xi > 0, xi, g[pos][0]))
        out[...] = np.interp(lx, lg, lv)
        tail = xi > g[-1]
        out[tail] = v[-1] * (g[-1] / xi[tail]) ** 2
        if g[0] == 0:
            low = xi < g[pos][0]
            out[low] = v[0] + (lv[0] - v[0]) * xi[low] / g[pos][0]
        return 1.0 + out

    def static_limit(self):
        return StaticLimit(float(self.values[0]))

    def expr(self):
        if self.source:
            return self.source
        raise ValueError("tabulated model has no config expression")

    def __eq__(self, other):
        return (isinstance(other, Tabulated) and np.array_equal(self.xi_grid, other.xi_grid)
                and np.array_equal(self.values, other.values))

    def __hash__(self):
        return hash((self.label, self.values.tobytes()))


VACUUM = Constant(1.0)


@dataclass(frozen=True)
class Medium:
    """Magnetodielectric half-space with diagonal eps and mu tensors.

    The tensor axes are the medium's principal axes; ``z`` is the surface
    normal.
    """

    eps_x: AxisModel
    eps_y: AxisModel
    eps_z: AxisModel
    mu_x: AxisModel = VACUUM
    mu_y: AxisModel = VACUUM
    mu_z: AxisModel = VACUUM
    name: str = field(default="", compare=False)

    @classmethod
    def isotropic(cls, eps, mu=VACUUM, name=""):
        return cls(eps, eps, eps, mu, mu, mu, name)

    @classmethod
    def uniaxial(cls, eps_xx, eps_zz, mu_xx=VACUUM, mu_zz=VACUUM, name=""):
        return cls(eps_xx, eps_xx, eps_zz, mu_xx, mu_xx, mu_zz, name)

    @property
    def axes(self):
        return (self.eps_x, self.eps_y, self.eps_z, self.mu_x, self.mu_y, self.mu_z)

    @property
    def symmetry(self):
        if self.eps_x == self.eps_y and self.mu_x == self.mu_y:
            if self.eps_x == self.eps_z and self.mu_x == self.mu_z:
                return "isotropic"
            return "uniaxial"
        return "biaxial"

    @property
    def is_vacuum(self):
        return all(a == VACUUM for a in self.axes)

    def response(self, xi) -> DiagonalTensorResponse:
        cache = {}
        vals = []
        for a in self.axes:
            key = id(a)
            if key not in cache:
                cache[key] = a(xi)
            vals.append(cache[key])
        return DiagonalTensorResponse(*vals)

    def static_limits(self):
        return tuple(a.static_limit() for a in self.axes)

    def without(self, electric=False, magnetic=False):
        """Copy with the electric resonance and/or magnetic response switched off."""
        eps = [a.scaled(electric=electric) for a in self.axes[:3]]
        mu = [a.scaled(lorentz=magnetic) for a in self.axes[3:]]
        return Medium(*eps, *mu, name=self.name)

    def to_config(self):
        """Mapping of config keys to model expressions (frequencies in rad/s)."""
        keys = ("eps_x", "eps_y", "eps_z", "mu_x", "mu_y", "mu_z")
        return {k: a.expr() for k, a in zip(keys, self.axes)}
