"""Brute-force 4x4 (Berreman-type) reflection oracle.

Independent of the package: the first-order system for the tangential
fields (Ex, Ey, Hx, Hy) is assembled numerically from Maxwell's curl
equations for arbitrary 3x3 eps and mu, evaluated at complex omega = i xi,
and the half-space problem is solved with numpy.linalg.solve.  Amplitudes:
TE is measured by E_y, TM by H_y (Gaussian-like units with c = 1).
"""
import numpy as np


def _delta(eps, mu, px):
    """Matrix D with psi' / (i omega) = D psi for psi = (Ex, Ey, Hx, Hy)."""
    D = np.zeros((4, 4), dtype=complex)
    for j in range(4):
        psi = np.zeros(4, dtype=complex)
        psi[j] = 1.0
        Ex, Ey, Hx, Hy = psi
        Hz = (px * Ey - mu[2, 0] * Hx - mu[2, 1] * Hy) / mu[2, 2]
        Ez = (-px * Hy - eps[2, 0] * Ex - eps[2, 1] * Ey) / eps[2, 2]
        E = np.array([Ex, Ey, Ez])
        H = np.array([Hx, Hy, Hz])
        dE = eps @ E
        dH = mu @ H
        D[0, j] = px * Ez + dH[1]
        D[1, j] = -dH[0]
        D[2, j] = px * Hz - dE[1]
        D[3, j] = dE[0]
    return D


def rotated(diag, phi):
    """Diagonal tensor of the medium expressed in the plane-of-incidence frame."""
    c, s = np.cos(phi), np.sin(phi)
    Rz = np.array([[c, s, 0], [-s, c, 0], [0, 0, 1.0]])
    return Rz @ np.diag(diag) @ Rz.T


def reflection(eps_diag, mu_diag, xi, k, phi, c=299792458.0):
    """2x2 matrix R[out, in] (TE first) for a half-space below vacuum."""
    omega = 1j * xi
    px = (k * c) / omega
    eps = rotated(np.asarray(eps_diag, dtype=complex), phi)
    mu = rotated(np.asarray(mu_diag, dtype=complex), phi)
    D = _delta(eps, mu, px)
    vals, vecs = np.linalg.eig(D)
    # Transmitted modes decay toward -z: q/omega real and negative here.
    order = np.argsort(vals.real)
    trans = vecs[:, order[:2]]
    Qin = np.sqrt(1.0 + (k * c / xi) ** 2)

    def te(p):
        return np.array([0, 1, -p, 0], dtype=complex)

    def tm(p):
        return np.array([p, 0, 0, 1], dtype=complex)

    R = np.zeros((2, 2))
    for col, inc in enumerate((te(-Qin), tm(-Qin))):
        A = np.column_stack([te(Qin), tm(Qin), -trans[:, 0], -trans[:, 1]])
        sol = np.linalg.solve(A, -inc)
        R[0, col] = sol[0].real
        R[1, col] = sol[1].real
    return R
