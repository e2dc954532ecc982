"""Reflection matrices of planar vacuum/medium interfaces on the imaginary axis.

All functions broadcast over array-valued ``xi``, ``k_par`` and ``phi``.
Matrices follow ``R[out, in]`` with TE first, so ``r_tm_te`` is the TM
amplitude reflected from an incident TE wave.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .constants import C
from .materials.medium import DiagonalTensorResponse, Medium, StaticLimit
from .materials.models import DrudeParams


class DegenerateRootsError(ArithmeticError):
    """Coincident propagation constants in a genuinely coupled biaxial medium."""


class UnsupportedModelError(ValueError):
    """A material whose zero-frequency limit is not classified."""


@dataclass(frozen=True)
class TransverseWave:
    """Transverse wavenumber ``k_par`` [1/m], azimuth ``phi`` [rad] measured
    from the medium's x axis, and imaginary frequency ``xi`` [rad/s]."""

    k_par: np.ndarray
    phi: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "k_par", np.asarray(self.k_par, dtype=float))
        object.__setattr__(self, "phi", np.asarray(self.phi, dtype=float))
        object.__setattr__(self, "xi", np.asarray(self.xi, dtype=float))
        if np.any(self.k_par < 0) or np.any(self.xi < 0):
            raise ValueError("k_par and xi must be >= 0")

    @property
    def K3(self):
        return np.sqrt(self.k_par ** 2 + (self.xi / C) ** 2)


@dataclass
class ReflectionMatrix:
    r_te_te: np.ndarray
    r_te_tm: np.ndarray
    r_tm_te: np.ndarray
    r_tm_tm: np.ndarray

    @classmethod
    def diagonal(cls, r_te, r_tm):
        r_te, r_tm = np.broadcast_arrays(np.asarray(r_te, float), np.asarray(r_tm, float))
        z = np.zeros_like(r_te)
        return cls(r_te, z, z.copy(), r_tm)

    def as_array(self):
        """Stack into shape ``(..., 2, 2)``."""
        a = np.broadcast_arrays(self.r_te_te, self.r_te_tm, self.r_tm_te, self.r_tm_tm)
        return np.stack([np.stack(a[:2], -1), np.stack(a[2:], -1)], -2)

    def entries(self):
        return (self.r_te_te, self.r_te_tm, self.r_tm_te, self.r_tm_tm)


def _ratio(a, b):
    """``(a - b) / (a + b)`` with the infinite-``a`` limit set to 1."""
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (a - b) / (a + b)
    return np.where(np.isinf(a), 1.0, out)


def fresnel_metal(eps1, w: TransverseWave) -> ReflectionMatrix:
    """Fresnel amplitudes of a non-magnetic isotropic half-space."""
    K3 = w.K3
    eps1 = np.asarray(eps1, dtype=float)
    K1 = np.sqrt(w.k_par ** 2 + eps1 * (w.xi / C) ** 2)
    return ReflectionMatrix.diagonal(-_ratio(K1, K3), _ratio(eps1 * K3, K1))


def fresnel_isotropic_mm(eps2, mu2, w: TransverseWave) -> ReflectionMatrix:
    """Fresnel-like amplitudes of an isotropic magnetodielectric half-space."""
    K3 = w.K3
    eps2 = np.asarray(eps2, dtype=float)
    mu2 = np.asarray(mu2, dtype=float)
    K2 = np.sqrt(w.k_par ** 2 + mu2 * eps2 * (w.xi / C) ** 2)
    return ReflectionMatrix.diagonal(_ratio(mu2 * K3, K2), _ratio(eps2 * K3, K2))


def uniaxial_wavenumbers(t: DiagonalTensorResponse, w: TransverseWave):
    """Normal decay constants of the TE and TM modes in a uniaxial medium."""
    k2 = w.k_par ** 2
    q2 = (w.xi / C) ** 2
    K_te = np.sqrt(t.mu_xx / t.mu_zz * k2 + t.mu_xx * t.eps_xx * q2)
    K_tm = np.sqrt(t.eps_xx / t.eps_zz * k2 + t.eps_xx * t.mu_xx * q2)
    return K_te, K_tm


def uniaxial_reflection(t: DiagonalTensorResponse, w: TransverseWave) -> ReflectionMatrix:
    """Amplitudes for a uniaxial medium with its optic axis along the normal."""
    K3 = w.K3
    K_te, K_tm = uniaxial_wavenumbers(t, w)
    return ReflectionMatrix.diagonal(_ratio(t.mu_xx * K3, K_te), _ratio(t.eps_xx * K3, K_tm))


# --------------------------------------------------------------------------
# biaxial orthorhombic media


@dataclass
class BiaxialSolveTrace:
    """Intermediate quantities of one exact biaxial solve (dimensionless,
    lengths in units of ``c/xi``)."""

    L: dict
    A: np.ndarray
    B: np.ndarray
    C1: np.ndarray
    C2: np.ndarray
    q1: np.ndarray
    q2: np.ndarray
    alpha: tuple
    beta: tuple
    gamma: tuple
    q_in: np.ndarray
    decoupled: np.ndarray
    M: Optional[np.ndarray] = None
    solution_te: Optional[np.ndarray] = None
    solution_tm: Optional[np.ndarray] = None

    @property
    def C(self):
        return self.C1 * self.C2

    def quartic_residual(self):
        """Relative residual of both roots in ``(Q^2 - A)(Q^2 - B) - C = 0``."""
        scale = np.maximum.reduce([np.abs(self.A), np.abs(self.B), np.abs(self.C),
                                   np.ones_like(np.abs(self.A))])
        res = [np.abs((q * q - self.A) * (q * q - self.B) - self.C) / scale
               for q in (self.q1, self.q2)]
        return np.maximum(res[0], res[1])

    def boundary_residual(self):
        """Continuity mismatch of the four tangential field components.

        Rebuilds the vacuum field (incident plus both reflected waves) and the
        transmitted field (sum of the two eigenmodes) from the solved
        amplitudes and compares (E_x, E_y, H_x, H_y) relative to the largest
        component.  Needs ``keep_system=True`` in the solve.
        """
        qi = self.q_in
        zero = np.zeros_like(qi)
        one = np.ones_like(qi)
        te_in = np.stack([zero, one, qi, zero], -1)
        tm_in = np.stack([-qi, zero, zero, one], -1)
        te_out = np.stack([zero, one, -qi, zero], -1)
        tm_out = np.stack([qi, zero, zero, one], -1)
        out = []
        for sol, inc in ((self.solution_te, te_in), (self.solution_tm, tm_in)):
            r_te, r_tm, a1, a2 = (sol[..., i] for i in range(4))
            vac = inc + r_te[..., None] * te_out + r_tm[..., None] * tm_out
            # The L-frame x axis points opposite to the vacuum-frame one.
            med = np.stack([-(a1 + a2),
                            self.alpha[0] * a1 + self.alpha[1] * a2,
                            -(self.beta[0] * a1 + self.beta[1] * a2),
                            self.gamma[0] * a1 + self.gamma[1] * a2], -1)
            scale = np.max(np.abs(vac), -1)
            out.append(np.max(np.abs(vac - med), -1) / scale)
        return np.maximum(out[0], out[1])


DECOUPLE_THRESHOLD = 1e-12
IMAG_TOLERANCE = 1e-10


def _rotate(t_x, t_y, c, s):
    return t_x * c * c + t_y * s * s, t_x * s * s + t_y * c * c, (t_x - t_y) * s * c


def biaxial_exact_reflection(t: DiagonalTensorResponse, w: TransverseWave,
                             keep_system=False):
    """Exact reflection matrix of an orthorhombic biaxial half-space.

    The in-plane tensors are rotated into the plane-of-incidence frame, the
    two transmitted modes are found from the biquadratic dispersion relation
    and the four boundary conditions are solved by Cramer's rule.  Points
    where the coupling terms vanish are routed to the decoupled closed forms.

    Returns
    -------
    (ReflectionMatrix, BiaxialSolveTrace)
    """
    xi, k, phi = np.broadcast_arrays(w.xi, w.k_par, w.phi)
    if np.any(xi <= 0):
        raise ValueError("exact biaxial solve needs xi > 0; use zero_mode_reflection")
    comps = np.broadcast_arrays(*t.components(), xi)[:6]
    exx, eyy, ezz, mxx, myy, mzz = (np.asarray(a, dtype=float) for a in comps)
    kap2 = (C * k / xi) ** 2
    c, s = np.cos(phi), np.sin(phi)
    e11, e22, e12 = _rotate(exx, eyy, c, s)
    m11, m22, m12 = _rotate(mxx, myy, c, s)

    # Non-zero entries of L for omega = i xi (n^2 k^2 = -kappa^2).
    L13 = -m12
    L14 = -kap2 / ezz - m22
    L23 = m11
    L24 = m12
    L31 = e12
    L32 = e22 + kap2 / mzz
    L41 = -e11
    L42 = -e12
    A = L13 * L31 + L14 * L41
    C1 = L13 * L32 + L14 * L42
    C2 = L23 * L31 + L24 * L41
    B = L23 * L32 + L24 * L42
    q_in = np.sqrt(1.0 + kap2)

    scale = np.maximum(np.maximum(np.abs(A), np.abs(B)), 1.0)
    decoupled = (np.abs(C1) < DECOUPLE_THRESHOLD * scale) & \
                (np.abs(C2) < DECOUPLE_THRESHOLD * scale) & \
                (np.abs(e12) + np.abs(m12) < DECOUPLE_THRESHOLD * scale)

    Ac, Bc = A.astype(complex), B.astype(complex)
    disc = np.sqrt(0.25 * (Ac - Bc) ** 2 + C1 * C2 + 0j)
    Q1sq = 0.5 * (Ac + Bc) + disc
    Q2sq = 0.5 * (Ac + Bc) - disc
    q1, q2 = np.sqrt(Q1sq), np.sqrt(Q2sq)
    coupled = ~decoupled
    if np.any(coupled & (np.abs(q1 - q2) < 1e-10 * np.abs(q1))
              & (np.abs(C1 * C2) > DECOUPLE_THRESHOLD * scale ** 2)):
        raise DegenerateRootsError("coincident transmitted modes with coupling present")

    alphas, betas, gammas = [], [], []
    for Q, Qsq in ((q1, Q1sq), (q2, Q2sq)):
        u = (C1 + 0j, Qsq - Ac)
        v = (Qsq - Bc, C2 + 0j)
        use_u = np.abs(u[0]) ** 2 + np.abs(u[1]) ** 2 >= np.abs(v[0]) ** 2 + np.abs(v[1]) ** 2
        ex = np.where(use_u, u[0], v[0])
        ey = np.where(use_u, u[1], v[1])
        # Guard the decoupled points; their values are replaced below.
        ex = np.where(np.abs(ex) > 0, ex, 1.0)
        hx = -(L31 * ex + L32 * ey) / Q
        hy = -(L41 * ex + L42 * ey) / Q
        with np.errstate(over="ignore", invalid="ignore"):
            alphas.append(ey / ex)
            betas.append(hx / ex)
            gammas.append(hy / ex)

    one = np.ones_like(q1)
    zero = np.zeros_like(q1)
    qc = q_in.astype(complex)
    M = np.stack([
        np.stack([-one, zero, alphas[0], alphas[1]], -1),
        np.stack([qc, zero, -betas[0], -betas[1]], -1),
        np.stack([zero, qc, one, one], -1),
        np.stack([zero, -one, gammas[0], gammas[1]], -1),
    ], -2)
    rhs_te = np.stack([one, qc, zero, zero], -1)
    rhs_tm = np.stack([zero, zero, qc, one], -1)
    # Decoupled points would make M singular; solve a harmless identity there.
    eye = np.broadcast_to(np.eye(4, dtype=complex), M.shape)
    Msafe = np.where(decoupled[..., None, None], eye, M)

    det = np.linalg.det(Msafe)
    sols = []
    for rhs in (rhs_te, rhs_tm):
        cols = []
        for j in range(4):
            Mj = Msafe.copy()
            Mj[..., :, j] = rhs
            cols.append(np.linalg.det(Mj) / det)
        sols.append(np.stack(cols, -1))
    sol_te, sol_tm = sols

    entries = [sol_te[..., 0], sol_tm[..., 0], sol_te[..., 1], sol_tm[..., 1]]
    mag = max(float(np.max(np.abs(e), initial=0.0)) for e in entries)
    imag = max(float(np.max(np.abs(np.where(decoupled, 0, e.imag)), initial=0.0))
               for e in entries)
    if imag > IMAG_TOLERANCE * max(1.0, mag):
        raise ArithmeticError(f"biaxial reflection has imaginary residue {imag:.3g}")
    r_te_te, r_te_tm, r_tm_te, r_tm_tm = (e.real for e in entries)

    if np.any(decoupled):
        K_te = np.sqrt(m11 / mzz * kap2 + m11 * e22)
        K_tm = np.sqrt(e11 / ezz * kap2 + e11 * m22)
        r_te_te = np.where(decoupled, _ratio(m11 * q_in, K_te), r_te_te)
        r_tm_tm = np.where(decoupled, _ratio(e11 * q_in, K_tm), r_tm_tm)
        r_te_tm = np.where(decoupled, 0.0, r_te_tm)
        r_tm_te = np.where(decoupled, 0.0, r_tm_te)

    trace = BiaxialSolveTrace(
        L=dict(L13=L13, L14=L14, L23=L23, L24=L24, L31=L31, L32=L32, L41=L41, L42=L42),
        A=A, B=B, C1=C1, C2=C2, q1=q1, q2=q2, alpha=tuple(alphas), beta=tuple(betas),
        gamma=tuple(gammas), q_in=q_in, decoupled=decoupled,
        M=M if keep_system else None,
        solution_te=sol_te if keep_system else None,
        solution_tm=sol_tm if keep_system else None)
    return ReflectionMatrix(r_te_te, r_te_tm, r_tm_te, r_tm_tm), trace


def perturbative_first_order(t: DiagonalTensorResponse, w: TransverseWave):
    """Uniaxial amplitudes and their first-order diagonal corrections.

    ``t`` supplies the uniaxial baseline (``eps_xx``, ``eps_zz``, ``mu_xx``;
    ``mu_zz`` is taken as 1).

    Returns
    -------
    (r_te, r_tm, r21_te, r21_tm)
    """
    eps, ezz, mu = (np.asarray(a, dtype=float) for a in (t.eps_xx, t.eps_zz, t.mu_xx))
    base = DiagonalTensorResponse(eps, eps, ezz, mu, mu, 1.0)
    r_uni = uniaxial_reflection(base, w)
    K3 = w.K3
    K_te, K_tm = uniaxial_wavenumbers(base, w)
    q2 = (w.xi / C) ** 2
    cos2, sin2 = np.cos(w.phi) ** 2, np.sin(w.phi) ** 2
    r21_te = -(q2 * eps * mu * cos2 / (2 * K_te * (K_te + mu * K3))) * (1 + r_uni.r_te_te)
    r21_tm = (0.5 * K3 * eps * sin2 / (K_tm + eps * K3)) * (1 - r_uni.r_tm_tm)
    return r_uni.r_te_te, r_uni.r_tm_tm, r21_te, r21_tm


def perturbative_cross_terms(t: DiagonalTensorResponse, w: TransverseWave):
    """First-order coefficients of ``delta`` in ``(r_te_tm, r_tm_te)``.

    The two are equal and opposite in this amplitude convention and both
    scale as ``sin(2 phi)``.
    """
    eps, ezz, mu = (np.asarray(a, dtype=float) for a in (t.eps_xx, t.eps_zz, t.mu_xx))
    base = DiagonalTensorResponse(eps, eps, ezz, mu, mu, 1.0)
    K3 = w.K3
    K_te, K_tm = uniaxial_wavenumbers(base, w)
    tm_te = -(eps * mu * np.sin(2 * w.phi) * K_tm * K3 * (w.xi / C)
              / ((K_tm + K_te) * (K_tm + eps * K3) * (K_te + mu * K3)))
    return -tm_te, tm_te


def biaxial_perturbative_reflection(t: DiagonalTensorResponse, delta,
                                    w: TransverseWave) -> ReflectionMatrix:
    """First-order expansion in the in-plane anisotropy ``delta``.

    ``t`` supplies the uniaxial baseline (``eps_xx``, ``eps_zz``, ``mu_xx``
    with ``mu_zz = 1``); the perturbed medium has ``eps_yy = eps_xx (1 + delta)``.
    Diagonal entries carry the first-order corrections, off-diagonal ones the
    leading ``delta sin(2 phi)`` mixing.
    """
    delta = np.asarray(delta, dtype=float)
    r_te, r_tm, r21_te, r21_tm = perturbative_first_order(t, w)
    te_tm, tm_te = perturbative_cross_terms(t, w)
    return ReflectionMatrix(r_te + delta * r21_te, delta * te_tm,
                            delta * tm_te, r_tm + delta * r21_tm)


# --------------------------------------------------------------------------
# slabs, thickness estimates, zero-frequency limits


def slab_reflection(r_halfspace, K_j, d_j):
    """Amplitude of a free-standing slab of thickness ``d_j``."""
    e = np.exp(-2.0 * np.asarray(K_j) * d_j)
    r = np.asarray(r_halfspace, dtype=float)
    return r * (1.0 - e) / (1.0 - r * r * e)


def min_halfspace_thickness(metal: DrudeParams, regime="high", xi=None):
    """Thickness beyond which a metal slab reflects like a half-space [m].

    Parameters
    ----------
    regime : {'high', 'low', 'general'}
        ``'high'``: plasma-wavelength scale ``c / Omega``.
        ``'low'``: skin-depth scale ``(c / Omega) sqrt(gamma / xi)``.
        ``'general'``: inverse normal-incidence decay constant at ``xi``,
        which interpolates between the two.
    """
    if metal.plasma_freq <= 0:
        raise ValueError("metal needs a positive plasma frequency")
    lp = C / metal.plasma_freq
    if regime == "high":
        return lp
    if xi is None or not xi > 0:
        raise ValueError(f"regime {regime!r} needs xi > 0")
    if regime == "low":
        return lp * math.sqrt(metal.damping / xi)
    if regime == "general":
        eps = 1.0 + metal.plasma_freq ** 2 / (xi * (xi + metal.damping))
        return C / (xi * math.sqrt(eps))
    raise ValueError(f"unknown regime {regime!r}")


def _static(medium: Medium):
    try:
        lims = medium.static_limits()
    except (NotImplementedError, AttributeError) as exc:
        raise UnsupportedModelError(
            f"zero-frequency limit of {medium.name or 'medium'} is not classified") from exc
    for lim in lims:
        if not isinstance(lim, StaticLimit) or math.isnan(lim.value):
            raise UnsupportedModelError("zero-frequency limit is not classified")
    return lims


def zero_mode_reflection(medium: Medium, k) -> ReflectionMatrix:
    """Exact ``xi -> 0`` reflection amplitudes at transverse wavenumber ``k``.

    Conductors (infinite static response) reflect TM (or TE for an infinite
    static permeability) perfectly; a dissipationless plasma contributes its
    ``xi^2 * response`` limit to the other polarization.
    """
    if medium.symmetry == "biaxial":
        raise UnsupportedModelError("zero mode is implemented for isotropic and "
                                    "uniaxial media only")
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise ValueError("k must be > 0")
    ex, _, ez, mx, _, mz = _static(medium)
    inv_c2 = 1.0 / C ** 2
    with np.errstate(invalid="ignore"):
        if math.isinf(mx.value):
            r_te = np.ones_like(k)
        else:
            ratio = 0.0 if math.isinf(mz.value) else mx.value / mz.value
            kt = np.sqrt(ratio * k * k + mx.value * ex.plasma_sq * inv_c2)
            r_te = (mx.value * k - kt) / (mx.value * k + kt)
        if math.isinf(ex.value):
            r_tm = np.ones_like(k)
        else:
            ratio = 0.0 if math.isinf(ez.value) else ex.value / ez.value
            kt = np.sqrt(ratio * k * k + ex.value * mx.plasma_sq * inv_c2)
            r_tm = (ex.value * k - kt) / (ex.value * k + kt)
    return ReflectionMatrix.diagonal(r_te, r_tm)


# --------------------------------------------------------------------------
# layers


@dataclass(frozen=True)
class LayerSpec:
    """A half-space (``thickness=None``) or free-standing slab of ``material``."""

    material: Medium
    thickness: Optional[float] = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.thickness is not None and not self.thickness > 0:
            raise ValueError("slab thickness must be > 0")
        if self.thickness is not None and self.material.symmetry == "biaxial":
            raise ValueError("slabs are supported for isotropic and uniaxial media only")


def layer_reflection(layer: LayerSpec, t: DiagonalTensorResponse, w: TransverseWave,
                     method="exact") -> ReflectionMatrix:
    """Reflection matrix of a layer given its response ``t`` at ``w.xi``.

    ``method='perturbative'`` uses the first-order expansion for biaxial
    media; otherwise the exact solver is used.
    """
    sym = layer.material.symmetry
    if sym == "biaxial":
        if method == "perturbative":
            delta = (t.eps_yy - t.eps_xx) / t.eps_xx
            return biaxial_perturbative_reflection(t, delta, w)
        return biaxial_exact_reflection(t, w)[0]
    R = uniaxial_reflection(t, w)
    if layer.thickness is not None:
        K_te, K_tm = uniaxial_wavenumbers(t, w)
        R = ReflectionMatrix.diagonal(slab_reflection(R.r_te_te, K_te, layer.thickness),
                                      slab_reflection(R.r_tm_tm, K_tm, layer.thickness))
    return R
