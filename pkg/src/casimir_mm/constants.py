"""Physical constants in SI units."""
import math

from scipy.constants import Boltzmann as KB
from scipy.constants import c as C
from scipy.constants import hbar as HBAR

#: Frequency scale of the figure presets (silver plasma frequency) [rad/s].
OMEGA_BAR = 1.37e16

#: Wavelength matching :data:`OMEGA_BAR`, ``2 pi c / OMEGA_BAR`` [m].
LAMBDA_BAR = 2.0 * math.pi * C / OMEGA_BAR

__all__ = ["C", "HBAR", "KB", "OMEGA_BAR", "LAMBDA_BAR"]
