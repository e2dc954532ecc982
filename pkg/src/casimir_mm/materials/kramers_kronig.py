"""Kramers-Kronig continuation of real-axis responses to imaginary frequency.

``f(i xi) = 1 + (2/pi) int_0^inf y Im f(y) / (xi^2 + y^2) dy``

The integral is done in ``t = log y`` so that decades of frequency get
equal attention.  A dense log-spaced pre-scan of ``Im f`` locates the
peaks (used as breakpoints for the adaptive rule) and the truncation
points where the integrand has fallen below ``1e-12`` of its peak.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..quadrature import QuadratureError, gauss_kronrod
from . import medium, mie

TRUNCATION = 1e-12


@dataclass
class KKResult:
    values: np.ndarray
    error: np.ndarray
    y_low: float
    y_high: float
    n_eval: int


def _scan_window(im_sampler, scale, decades):
    t = np.linspace(np.log(scale) - decades * np.log(10),
                    np.log(scale) + decades * np.log(10), 4000 * decades // 8 + 1)
    y = np.exp(t)
    im = np.asarray(im_sampler(y), dtype=float)
    if np.any(im < -1e-12 * max(np.max(np.abs(im)), 1e-300)):
        raise ValueError("imaginary part must be non-negative (passive medium)")
    return t, y, np.maximum(im, 0.0)


def kk_to_imaginary_axis(im_sampler, xi, scale=None, rtol=1e-9, decades=16,
                         max_intervals=20000) -> KKResult:
    """Evaluate the imaginary-axis response from the real-axis ``Im`` part.

    Parameters
    ----------
    im_sampler : callable
        Vectorized ``y -> Im f(y)`` for real frequencies ``y > 0`` [rad/s].
    xi : float or ndarray
        Imaginary frequencies, ``>= 0``.
    scale : float, optional
        Characteristic frequency used to centre the pre-scan window; by
        default the largest positive ``xi``.
    decades : int
        Half-width of the pre-scan window in decades.

    Returns
    -------
    KKResult
        ``values`` has the shape of ``xi``; ``y_low``/``y_high`` record the
        truncation frequencies.
    """
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if np.any(xi < 0) or np.any(~np.isfinite(xi)):
        raise ValueError("xi must be finite and >= 0")
    if scale is None:
        scale = float(xi.max()) if xi.max() > 0 else 1.0
    t, y, im = _scan_window(im_sampler, scale, decades)
    if not np.any(im > 0):
        return KKResult(np.ones(xi.shape), np.zeros(xi.shape), 0.0, 0.0, t.size)

    xi_min = xi.min()
    # Integrand in t for the smallest xi bounds all others from above.
    h = y * y * im / (xi_min ** 2 + y * y)
    peak = h.max()
    live = np.nonzero(h > TRUNCATION * peak)[0]
    if live[0] == 0 or live[-1] == t.size - 1:
        raise QuadratureError("Kramers-Kronig integrand does not decay inside "
                              "the scan window; tail truncation impossible")
    t_lo, t_hi = t[live[0] - 1], t[live[-1] + 1]
    # Local maxima of y*Im as breakpoints.
    g = y * im
    inner = (g[1:-1] > g[:-2]) & (g[1:-1] >= g[2:]) & (g[1:-1] > TRUNCATION * g.max())
    peaks = t[1:-1][inner]
    dt = t[1] - t[0]
    breaks = sorted(set(np.concatenate([peaks - 3 * dt, peaks, peaks + 3 * dt]).tolist()))

    xi2 = xi ** 2

    def integrand(tt):
        yy = np.exp(tt)
        val = np.asarray(im_sampler(yy), dtype=float)
        return (yy * yy * val)[:, None] / (xi2[None, :] + (yy * yy)[:, None])

    res = gauss_kronrod(integrand, t_lo, t_hi, rtol=rtol, atol=1e-15,
                        breakpoints=breaks, initial_intervals=8,
                        max_intervals=max_intervals)
    if not res.converged:
        raise QuadratureError("Kramers-Kronig quadrature did not converge "
                              f"(error {np.max(res.error):.3g})")
    # Neglected tails are bounded by the truncation level times the window.
    tail = TRUNCATION * peak * (t_hi - t_lo)
    values = 1.0 + (2.0 / np.pi) * res.value
    err = (2.0 / np.pi) * (res.error + tail)
    return KKResult(values, err, float(np.exp(t_lo)), float(np.exp(t_hi)), res.n_eval)


def emg_imaginary_axis(p: "mie.SphereCompositeParams", xi_grid, scale=None,
                       rtol=1e-9):
    """Tabulated imaginary-axis eps and mu of an extended Maxwell Garnett medium.

    Returns
    -------
    (eps_axis, mu_axis) : pair of :class:`medium.Tabulated`
    """
    xi_grid = np.asarray(xi_grid, dtype=float)

    def im_eps(y):
        return np.imag(mie.emg_effective_response(p, y).eps)

    def im_mu(y):
        return np.imag(mie.emg_effective_response(p, y).mu)

    eps = kk_to_imaginary_axis(im_eps, xi_grid, scale=scale, rtol=rtol)
    mu = kk_to_imaginary_axis(im_mu, xi_grid, scale=scale, rtol=rtol)
    return (medium.Tabulated(xi_grid, eps.values, "emg_eps"),
            medium.Tabulated(xi_grid, mu.values, "emg_mu"))
