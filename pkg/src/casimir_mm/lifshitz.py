"""Casimir-Lifshitz energies and pressures, Casimir-Polder potentials.

Integrals use ``s = 2 d xi / c`` and ``y = 2 K3 d`` (``K3`` the vacuum
decay constant).  The outer ``s`` integral is adaptive Gauss-Kronrod in
``log s``; the inner ``y`` integral over ``[s, inf)`` is Gauss-Laguerre in
``u = y - s`` with a lower-order companion rule supplying an error
estimate.  Positive pressure means attraction.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .constants import C, HBAR, KB
from .materials.medium import DiagonalTensorResponse, Medium
from .materials.models import AtomParams, atomic_polarizability
from .quadrature import QuadratureError, gauss_kronrod, gauss_laguerre, gauss_legendre
from .reflection import (LayerSpec, ReflectionMatrix, TransverseWave, UnsupportedModelError,
                         layer_reflection, perturbative_first_order, zero_mode_reflection)


@dataclass(frozen=True)
class QuadratureSpec:
    """Numerical settings shared by all integrals.

    ``cutoff_multiplier`` sets ``xi_max`` in units of ``c/d``;
    ``k_nodes`` is the Gauss-Laguerre order of the inner integral (a rule
    of two thirds that order gives the error estimate) and ``phi_nodes``
    the Gauss-Legendre order on ``[0, pi/2]`` for biaxial media.
    """

    rtol: float = 1e-6
    cutoff_multiplier: float = 25.0
    k_nodes: int = 48
    phi_nodes: int = 16
    matsubara_tol: float = 1e-8
    max_intervals: int = 400
    threads: int = 1

    def __post_init__(self):
        if not self.rtol > 0 or not self.matsubara_tol > 0:
            raise ValueError("tolerances must be > 0")
        if self.cutoff_multiplier < 20:
            raise ValueError("cutoff multiplier must be >= 20")
        if self.k_nodes < 8 or self.phi_nodes < 4:
            raise ValueError("node budgets too small")

    def doubled(self):
        """Same spec with the fixed node budgets doubled."""
        return replace(self, k_nodes=2 * self.k_nodes, phi_nodes=2 * self.phi_nodes,
                       rtol=self.rtol / 4)


@dataclass(frozen=True)
class Scenario:
    layer1: LayerSpec
    layer2: LayerSpec
    gap: float
    temperature: float = 0.0
    atom: Optional[AtomParams] = None
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    method: str = "exact"

    def __post_init__(self):
        if not self.gap > 0:
            raise ValueError("gap must be > 0")
        if not self.temperature >= 0:
            raise ValueError("temperature must be >= 0")
        if self.method not in ("exact", "perturbative"):
            raise ValueError("method must be 'exact' or 'perturbative'")

    def with_gap(self, d):
        return replace(self, gap=d)

    def swapped(self):
        return replace(self, layer1=self.layer2, layer2=self.layer1)


@dataclass
class ForceResult:
    """Pressure [Pa] with its normalization to ideal conductors at the same gap."""

    pressure: float
    normalized: float
    error: float
    n_eval: int
    n_intervals: int
    matsubara_terms: int = 0
    converged: bool = True
    gap: float = 0.0

    def as_dict(self):
        return dict(pressure=self.pressure, normalized=self.normalized, error=self.error,
                    n_eval=self.n_eval, n_intervals=self.n_intervals,
                    matsubara_terms=self.matsubara_terms, converged=self.converged)


@dataclass
class CasimirPolderResult:
    potential: float
    potential_error: float
    curvature: float
    curvature_error: float
    trap_shift: float
    n_eval: int
    scheme: str = "analytic second derivative under the integral"


def ideal_normalization(d):
    """Pressure between perfect conductors, ``hbar c pi^2 / (240 d^4)`` [Pa]."""
    return HBAR * C * math.pi ** 2 / (240.0 * np.asarray(d, dtype=float) ** 4)


def ideal_energy(d):
    """Energy per area between perfect conductors [J/m^2]."""
    return -HBAR * C * math.pi ** 2 / (720.0 * np.asarray(d, dtype=float) ** 3)


# --------------------------------------------------------------------------
# integrand kernels


def _expand(t: DiagonalTensorResponse, ndim):
    shape = (Ellipsis,) + (None,) * ndim
    return DiagonalTensorResponse(*(np.asarray(a)[shape] for a in t.components()))


def _product_invariants(R1: ReflectionMatrix, R2: ReflectionMatrix):
    """Trace and determinant of ``R1 @ R2``."""
    a = R1.r_te_te * R2.r_te_te + R1.r_te_tm * R2.r_tm_te
    d = R1.r_tm_te * R2.r_te_tm + R1.r_tm_tm * R2.r_tm_tm
    det = ((R1.r_te_te * R1.r_tm_tm - R1.r_te_tm * R1.r_tm_te)
           * (R2.r_te_te * R2.r_tm_tm - R2.r_te_tm * R2.r_tm_te))
    return a + d, det


def _kernel_pieces(tr, det, y):
    e = np.exp(-y)
    den = 1.0 - e * tr + e * e * det
    if np.any(den <= 0):
        raise ArithmeticError("det(1 - R1 R2 exp(-2 K3 d)) <= 0; non-passive input")
    return e, den


def force_kernel(tr, det, y):
    """``exp(y) Tr[X (1 - X)^-1]`` for ``X = R1 R2 exp(-y)``."""
    e, den = _kernel_pieces(tr, det, y)
    return (tr - 2.0 * e * det) / den


def energy_kernel(tr, det, y):
    """``log det(1 - X)``."""
    _, den = _kernel_pieces(tr, det, y)
    return np.log(den)


def _phi_rules(spec: QuadratureSpec, need_phi):
    if not need_phi:
        return [(np.zeros(1), np.array([2 * math.pi]))]
    rules = []
    for n in (spec.phi_nodes, spec.phi_nodes // 2):
        x, w = gauss_legendre(n, 0.0, math.pi / 2)
        rules.append((np.asarray(x), 4.0 * np.asarray(w)))
    return rules


def _needs_phi(s: Scenario):
    return (s.layer1.material.symmetry == "biaxial"
            or s.layer2.material.symmetry == "biaxial")


def _reflections(s: Scenario, xi, k, phi):
    """Reflection matrices on a grid ``(xi, k, phi)``; ``xi`` is 1-D."""
    w = TransverseWave(k, phi, xi[:, None, None])
    t1 = _expand(s.layer1.material.response(xi), 2)
    t2 = _expand(s.layer2.material.response(xi), 2)
    R1 = layer_reflection(s.layer1, t1, w, method=s.method)
    R2 = layer_reflection(s.layer2, t2, w, method=s.method)
    return R1, R2


def _inner(s: Scenario, s_vals, kind, spec: QuadratureSpec):
    """Inner ``y`` and ``phi`` integrals at outer nodes ``s_vals``.

    Returns an array ``(n, 3)``: main rule, lower Laguerre order, lower
    phi order (equal to main when the medium is phi independent).
    """
    d = s.gap
    s_vals = np.asarray(s_vals, dtype=float)
    xi = s_vals * C / (2.0 * d)
    need_phi = _needs_phi(s)
    phis = _phi_rules(spec, need_phi)
    out = []
    for n_lag, (phi_x, phi_w) in ((spec.k_nodes, phis[0]),
                                  (max(8, 2 * spec.k_nodes // 3), phis[0]),
                                  (spec.k_nodes, phis[-1])):
        u, wu = gauss_laguerre(n_lag)
        S = s_vals[:, None, None]
        U = np.asarray(u)[None, :, None]
        y = S + U
        k = np.sqrt(U * (2 * S + U)) / (2.0 * d)
        phi = np.asarray(phi_x)[None, None, :]
        R1, R2 = _reflections(s, xi, k, phi)
        tr, det = _product_invariants(R1, R2)
        if kind == "force":
            f = y * y * force_kernel(tr, det, y)
        else:
            # log det carries no explicit exp(-y); restore the Laguerre weight.
            f = y * energy_kernel(tr, det, y) * np.exp(U)
        val = np.einsum("nup,u,p->n", f, np.asarray(wu), phi_w)
        if kind == "force":
            val = val * np.exp(-s_vals)
        out.append(val)
    return np.stack(out, -1)


def _parallel(func, x, threads):
    """Evaluate ``func`` on contiguous chunks of ``x``; order-preserving."""
    threads = max(1, int(threads))
    if threads == 1 or x.size < 2 * threads:
        return func(x)
    chunks = np.array_split(x, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(func, chunks))
    return np.concatenate(parts, axis=0)


S_MIN = 1e-9


def _outer(s: Scenario, kind, spec: QuadratureSpec):
    s_max = 2.0 * spec.cutoff_multiplier

    def integrand(t):
        sv = np.exp(t)
        return _parallel(lambda v: _inner(s, v, kind, spec), sv, spec.threads) * sv[:, None]

    breaks = [math.log(x) for x in (1e-4, 1e-2, 0.1, 1.0, 4.0, 12.0) if x < s_max]
    res = gauss_kronrod(integrand, math.log(S_MIN), math.log(s_max), rtol=spec.rtol,
                        atol=0.0, breakpoints=breaks, max_intervals=spec.max_intervals,
                        reference="l1")
    main = res.value[0]
    err = res.error[0] + np.max(np.abs(res.value[1:] - main))
    return float(main), float(err), res


def casimir_energy_zero_T(s: Scenario):
    """Zero-temperature interaction energy per unit area [J/m^2].

    Returns
    -------
    (energy, error_estimate)
    """
    if s.layer1.material.is_vacuum or s.layer2.material.is_vacuum:
        return 0.0, 0.0
    val, err, res = _outer(s, "energy", s.quadrature)
    if not res.converged:
        raise QuadratureError(f"energy quadrature did not converge (error {err:.3g})")
    pref = HBAR * C / (64 * math.pi ** 3 * s.gap ** 3)
    return pref * val, pref * err


def casimir_force_zero_T(s: Scenario) -> ForceResult:
    """Zero-temperature pressure from the trace formula with full 2x2 algebra."""
    fc = float(ideal_normalization(s.gap))
    if s.layer1.material.is_vacuum or s.layer2.material.is_vacuum:
        return ForceResult(0.0, 0.0, 0.0, 0, 0, gap=s.gap)
    val, err, res = _outer(s, "force", s.quadrature)
    if not np.isfinite(val):
        raise ArithmeticError("non-finite integrand; check the material models")
    if not res.converged:
        raise QuadratureError(f"force quadrature did not converge (error {err:.3g})")
    pref = HBAR * C / (64 * math.pi ** 3 * s.gap ** 4)
    p = pref * val
    return ForceResult(p, p / fc, pref * err, res.n_eval, res.n_intervals,
                       converged=res.converged, gap=s.gap)


# --------------------------------------------------------------------------
# first order in the in-plane anisotropy


def _perturbative_inner(s: Scenario, s_vals, spec: QuadratureSpec):
    d = s.gap
    s_vals = np.asarray(s_vals, dtype=float)
    xi = s_vals * C / (2.0 * d)
    t1 = s.layer1.material.response(xi)
    t2 = s.layer2.material.response(xi)
    delta = ((t2.eps_yy - t2.eps_xx) / t2.eps_xx)[:, None]
    out = []
    for n_lag in (spec.k_nodes, max(8, 2 * spec.k_nodes // 3)):
        u, wu = gauss_laguerre(n_lag)
        S = s_vals[:, None]
        U = np.asarray(u)[None, :]
        y = S + U
        k = np.sqrt(U * (2 * S + U)) / (2.0 * d)
        # r21 is linear in cos^2 / sin^2 of phi; phi = pi/4 gives the average.
        w = TransverseWave(k, math.pi / 4, xi[:, None])
        R1 = layer_reflection(s.layer1, _expand(t1, 1), w)
        r_te, r_tm, r21_te, r21_tm = perturbative_first_order(_expand(t2, 1), w)
        e = np.exp(-y)
        total = 0.0
        for r1, r2, r21 in ((R1.r_te_te, r_te, r21_te), (R1.r_tm_tm, r_tm, r21_tm)):
            den = 1.0 - r1 * r2 * e
            # Both terms carry one factor exp(-y), absorbed by the Laguerre weight.
            i_uni = r1 * r2 / den
            corr = delta * r1 * r21 / den * (1.0 / den)
            total = total + i_uni + corr
        val = 2 * math.pi * np.einsum("nu,u->n", y * y * total, np.asarray(wu))
        out.append(val * np.exp(-s_vals))
    return np.stack(out, -1)


def casimir_force_perturbative(s: Scenario) -> ForceResult:
    """Pressure to first order in the in-plane anisotropy of ``layer2``.

    ``layer1`` must be isotropic or uniaxial; ``layer2`` provides the
    uniaxial baseline through its x components and ``delta`` through
    ``eps_yy``.
    """
    if s.layer1.material.symmetry == "biaxial":
        raise ValueError("perturbative pressure needs an in-plane isotropic layer1")
    spec = s.quadrature
    s_max = 2.0 * spec.cutoff_multiplier

    def integrand(t):
        sv = np.exp(t)
        return _parallel(lambda v: _perturbative_inner(s, v, spec), sv,
                         spec.threads) * sv[:, None]

    breaks = [math.log(x) for x in (1e-4, 1e-2, 0.1, 1.0, 4.0, 12.0) if x < s_max]
    res = gauss_kronrod(integrand, math.log(S_MIN), math.log(s_max), rtol=spec.rtol,
                        breakpoints=breaks, max_intervals=spec.max_intervals,
                        reference="l1")
    if not res.converged:
        raise QuadratureError("perturbative quadrature did not converge")
    pref = HBAR * C / (64 * math.pi ** 3 * s.gap ** 4)
    val = res.value[0]
    err = res.error[0] + abs(res.value[1] - val)
    p = pref * val
    fc = float(ideal_normalization(s.gap))
    return ForceResult(p, p / fc, pref * err, res.n_eval, res.n_intervals, gap=s.gap)


# --------------------------------------------------------------------------
# finite temperature


def _matsubara_terms(s: Scenario, n, spec: QuadratureSpec):
    """Per-term ``int dphi int_{s_n}^inf dy y^2 Tr`` for Matsubara indices
    ``n >= 1``; returns ``(n_terms, 2)`` (main, lower order)."""
    s1 = 4 * math.pi * s.gap * KB * s.temperature / (HBAR * C)
    return _inner(s, s1 * np.asarray(n, dtype=float), "force", spec)


def _zero_term(s: Scenario, spec: QuadratureSpec):
    out = []
    for n_lag in (spec.k_nodes, max(8, 2 * spec.k_nodes // 3)):
        y, wy = gauss_laguerre(n_lag)
        y = np.asarray(y)
        k = y / (2.0 * s.gap)
        Rs = []
        for layer in (s.layer1, s.layer2):
            if layer.thickness is not None:
                raise UnsupportedModelError("zero Matsubara mode of a slab is not implemented")
            Rs.append(zero_mode_reflection(layer.material, k))
        tr, det = _product_invariants(*Rs)
        f = y * y * force_kernel(tr, det, y)
        out.append(2 * math.pi * float(np.dot(f, wy)))
    return np.array(out)


def zero_mode_pressure(s: Scenario) -> float:
    """Pressure of the ``n = 0`` Matsubara term alone (half weight) [Pa]."""
    if not s.temperature > 0:
        raise ValueError("zero-mode pressure needs T > 0")
    val = _zero_term(s, s.quadrature)[0]
    return 0.5 * KB * s.temperature / (16 * math.pi ** 2 * s.gap ** 3) * val


MATSUBARA_BATCH = 32
MAX_MATSUBARA = 200000


def casimir_force_finite_T(s: Scenario) -> ForceResult:
    """Matsubara sum of the trace formula at temperature ``T > 0``.

    Terms are added in batches; the sum stops once three consecutive terms
    fall below ``matsubara_tol`` times the running sum of magnitudes.
    """
    if not s.temperature > 0:
        raise ValueError("finite-temperature force needs T > 0")
    spec = s.quadrature
    if _needs_phi(s):
        raise ValueError("finite-temperature sums are implemented for isotropic and "
                         "uniaxial media")
    zero = _zero_term(s, spec)
    terms = [0.5 * zero[0]]
    errs = [0.5 * abs(zero[1] - zero[0])]
    n_next = 1
    small = 0
    scale = abs(terms[0])
    done = False
    while not done:
        if n_next > MAX_MATSUBARA:
            raise QuadratureError("Matsubara sum did not converge")
        batch = np.arange(n_next, n_next + MATSUBARA_BATCH)
        vals = _parallel(lambda v: _matsubara_terms(s, v, spec), batch, spec.threads)
        for row in vals:
            terms.append(row[0])
            errs.append(max(abs(row[1] - row[0]), abs(row[2] - row[0])))
            scale += abs(row[0])
            small = small + 1 if abs(row[0]) <= spec.matsubara_tol * scale else 0
            if small >= 3:
                done = True
                break
        n_next += MATSUBARA_BATCH
    total = math.fsum(terms)
    pref = KB * s.temperature / (16 * math.pi ** 2 * s.gap ** 3)
    p = pref * total
    tail = abs(terms[-1])
    err = pref * (math.fsum(errs) + tail)
    fc = float(ideal_normalization(s.gap))
    n_terms = len(terms)
    return ForceResult(p, p / fc, err, n_terms * spec.k_nodes, 0,
                       matsubara_terms=n_terms, gap=s.gap)


def casimir_force(s: Scenario) -> ForceResult:
    """Dispatch on temperature and method."""
    if s.temperature > 0:
        return casimir_force_finite_T(s)
    if s.method == "perturbative":
        return casimir_force_perturbative(s)
    return casimir_force_zero_T(s)


# --------------------------------------------------------------------------
# atoms


def _cp_inner(atom: AtomParams, surface: LayerSpec, z, s_vals, spec, order):
    s_vals = np.asarray(s_vals, dtype=float)
    xi = s_vals * C / (2.0 * z)
    alpha = atomic_polarizability(atom, xi)
    t = surface.material.response(xi)
    out = []
    for n_lag in (spec.k_nodes, max(8, 2 * spec.k_nodes // 3)):
        u, wu = gauss_laguerre(n_lag)
        S = s_vals[:, None]
        U = np.asarray(u)[None, :]
        y = S + U
        k = np.sqrt(U * (2 * S + U)) / (2.0 * z)
        R = layer_reflection(surface, _expand(t, 1), TransverseWave(k, 0.0, xi[:, None]))
        br = S * S * R.r_te_te - (2 * y * y - S * S) * R.r_tm_tm
        if order == 2:
            br = br * y * y
        out.append(alpha * np.exp(-s_vals) * np.einsum("nu,u->n", br, np.asarray(wu)))
    return np.stack(out, -1)


def _cp_integral(atom, surface, z, spec, order):
    s_max = 2.0 * spec.cutoff_multiplier
    # The polarizability cuts off near s = 2 z omega0 / c; add it as a breakpoint.
    s0 = 2.0 * z * atom.transition_freq / C
    pts = [x for x in (1e-4, 1e-2, 0.1, 1.0, 4.0, 12.0, s0) if S_MIN < x < s_max]

    def integrand(t):
        sv = np.exp(t)
        return _cp_inner(atom, surface, z, sv, spec, order) * sv[:, None]

    res = gauss_kronrod(integrand, math.log(S_MIN), math.log(s_max), rtol=spec.rtol,
                        breakpoints=[math.log(x) for x in pts],
                        max_intervals=spec.max_intervals, reference="l1")
    if not res.converged:
        raise QuadratureError("Casimir-Polder quadrature did not converge")
    return res.value[0], res.error[0] + abs(res.value[1] - res.value[0]), res.n_eval


def casimir_polder_potential(atom: AtomParams, surface: LayerSpec, z,
                             spec: QuadratureSpec = QuadratureSpec()):
    """Zero-temperature atom-surface potential [J].

    Returns
    -------
    (U, error_estimate)
    """
    if not z > 0:
        raise ValueError("z must be > 0")
    val, err, _ = _cp_integral(atom, surface, z, spec, 0)
    pref = HBAR * C / (32 * math.pi * z ** 4)
    return pref * val, pref * err


def casimir_polder(atom: AtomParams, surface: LayerSpec, z,
                   spec: QuadratureSpec = QuadratureSpec()) -> CasimirPolderResult:
    """Potential, its second z-derivative and the trap-frequency shift.

    The second derivative is taken under the integral sign: each
    z-derivative of ``exp(-2 z K3)`` brings down ``-2 K3``.
    """
    u, u_err, n1 = _cp_integral(atom, surface, z, spec, 0)
    c2, c2_err, n2 = _cp_integral(atom, surface, z, spec, 2)
    pu = HBAR * C / (32 * math.pi * z ** 4)
    pc = HBAR * C / (32 * math.pi * z ** 6)
    curv = pc * c2
    return CasimirPolderResult(pu * u, pu * u_err, curv, pc * c2_err,
                               curv / (2 * atom.mass * atom.trap_freq ** 2), n1 + n2)


def trap_frequency_shift(atom: AtomParams, surface: LayerSpec, z,
                         spec: QuadratureSpec = QuadratureSpec()):
    """Relative shift of the trap frequency, ``U''(z) / (2 m omega_z^2)``."""
    return casimir_polder(atom, surface, z, spec).trap_shift


# --------------------------------------------------------------------------
# magnetic contrast


def _toggled(medium: Medium, toggle):
    if toggle == "magnetic":
        return medium.without(magnetic=True)
    if toggle == "electric":
        return medium.without(electric=True)
    raise ValueError("toggle must be 'magnetic' or 'electric'")


@dataclass
class ContrastResult:
    value: float
    error: float
    with_response: float
    without_response: float
    n_eval: int = 0


def magnetic_contrast(s: Scenario, toggle="magnetic", z=None) -> ContrastResult:
    """Difference between the scenario with the toggled term removed and as given.

    With ``z`` and an atom in the scenario, returns the trap-shift contrast
    ``gamma(toggled) - gamma(full)`` for ``layer2`` as the surface;
    otherwise the pressure contrast ``P(toggled) - P(full)``.
    """
    off = replace(s.layer2, material=_toggled(s.layer2.material, toggle))
    if z is not None:
        if s.atom is None:
            raise ValueError("trap-shift contrast needs an atom")
        a = casimir_polder(s.atom, s.layer2, z, s.quadrature)
        b = casimir_polder(s.atom, off, z, s.quadrature)
        scale = 1.0 / (2 * s.atom.mass * s.atom.trap_freq ** 2)
        return ContrastResult(b.trap_shift - a.trap_shift,
                              scale * (a.curvature_error + b.curvature_error),
                              a.trap_shift, b.trap_shift, a.n_eval + b.n_eval)
    p1 = casimir_force(s)
    p2 = casimir_force(replace(s, layer2=off))
    return ContrastResult(p2.pressure - p1.pressure, p1.error + p2.error,
                          p1.pressure, p2.pressure, p1.n_eval + p2.n_eval)


def default_threads():
    """Thread budget from ``CASIMIR_THREADS`` (1 when unset or invalid)."""
    try:
        return max(1, int(os.environ.get("CASIMIR_THREADS", "1")))
    except ValueError:
        return 1
