"""Independent nested-quad Lifshitz oracle for isotropic media at T = 0.

Integrates in the original variables ``xi`` and ``K3`` with
``scipy.integrate.quad`` and its own Fresnel formulas; nothing is shared
with the package.  Run as a module to regenerate the frozen crossover
distances used by the tests.
"""
import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

HBAR = 1.054571817e-34
C = 299792458.0
W = 1.37e16
LAM = 2 * math.pi * C / W


def gold_eps(xi):
    return 1 + (0.96 * W) ** 2 / (xi * xi + 0.004 * W * xi)


def mm_eps(xi, f):
    lor = (0.04 * W) ** 2 / (xi * xi + (0.1 * W) ** 2 + 0.005 * W * xi)
    dru = W ** 2 / (xi * xi + 0.006 * W * xi)
    return 1 + (1 - f) * lor + f * dru


def mm_mu(xi):
    return 1 + (0.1 * W) ** 2 / (xi * xi + (0.1 * W) ** 2 + 0.005 * W * xi)


def _r(eps, mu, K, xi):
    Km = math.sqrt(K * K + (eps * mu - 1) * xi * xi / C ** 2)
    return (mu * K - Km) / (mu * K + Km), (eps * K - Km) / (eps * K + Km)


def pressure(d, f, rel=1e-11):
    """Pressure [Pa] between gold and the connected metamaterial."""

    def inner(xi):
        e1, e2, m2 = gold_eps(xi), mm_eps(xi, f), mm_mu(xi)

        def g(K):
            a_te, a_tm = _r(e1, 1.0, K, xi)
            b_te, b_tm = _r(e2, m2, K, xi)
            e = math.exp(-2 * K * d)
            s = 0.0
            for p in (a_te * b_te, a_tm * b_tm):
                s += p * e / (1 - p * e)
            return K * K * s

        k0 = xi / C
        return quad(g, k0, k0 + 60.0 / d, epsabs=0, epsrel=rel, limit=200)[0]

    scale = C / d
    pieces = [0.0, 1e-6 * scale, 1e-3 * scale, 0.05 * scale, 0.5 * scale, 5 * scale, 40 * scale]
    total = 0.0
    for a, b in zip(pieces[:-1], pieces[1:]):
        total += quad(inner, a, b, epsabs=0, epsrel=rel, limit=200)[0]
    return HBAR / (2 * math.pi ** 2) * total


def ideal(d):
    return HBAR * C * math.pi ** 2 / (240 * d ** 4)


def crossover(f, lo, hi):
    """Gap (in units of Lambda) where the pressure changes sign."""
    return brentq(lambda x: pressure(x * LAM, f), lo, hi, xtol=1e-9, rtol=1e-9)


if __name__ == "__main__":
    print("F/FC(f=0, d=Lambda) =", repr(pressure(LAM, 0.0) / ideal(LAM)))
    print("f=0 crossover       =", repr(crossover(0.0, 0.15, 0.25)))
    print("f=1e-4 crossovers   =", repr(crossover(1e-4, 0.3, 0.5)),
          repr(crossover(1e-4, 6.0, 10.0)))
