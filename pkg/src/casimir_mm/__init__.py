"""Casimir-Lifshitz and Casimir-Polder calculations for anisotropic
magnetodielectric metamaterials."""
from .lifshitz import (CasimirPolderResult, ForceResult, QuadratureSpec, Scenario,
                       casimir_energy_zero_T, casimir_force, casimir_force_finite_T,
                       casimir_force_perturbative, casimir_force_zero_T, casimir_polder,
                       casimir_polder_potential, ideal_normalization, magnetic_contrast,
                       trap_frequency_shift, zero_mode_pressure)
from .reflection import (LayerSpec, ReflectionMatrix, TransverseWave, biaxial_exact_reflection,
                         biaxial_perturbative_reflection, fresnel_isotropic_mm, fresnel_metal,
                         layer_reflection, min_halfspace_thickness, slab_reflection,
                         uniaxial_reflection, zero_mode_reflection)

__version__ = "0.1.0"
