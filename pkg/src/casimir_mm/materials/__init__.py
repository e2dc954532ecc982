"""Permittivity and permeability models on the imaginary frequency axis."""
from .kramers_kronig import KKResult, emg_imaginary_axis, kk_to_imaginary_axis
from .medium import (VACUUM, AxisModel, Composite, Constant, DiagonalTensorResponse, Drude,
                     Lorentz, Medium, NonConnected, Polaritonic, StaticLimit, Sum, Tabulated)
from .mie import EmgResponse, SphereCompositeParams, emg_effective_response, mie_dipole_coeffs
from .models import (AtomParams, CompositeAxisParams, DomainError, DrudeParams, LorentzParams,
                     PolaritonicParams, atomic_polarizability, composite_axis_eps, drude_eps,
                     lorentz_term, mg_metal_spheres_eps, nc_metamaterial_response,
                     polaritonic_eps)

__all__ = [
    "AtomParams", "AxisModel", "Composite", "CompositeAxisParams", "Constant",
    "DiagonalTensorResponse", "DomainError", "Drude", "DrudeParams", "EmgResponse", "KKResult",
    "Lorentz", "LorentzParams", "Medium", "NonConnected", "Polaritonic", "PolaritonicParams",
    "SphereCompositeParams", "StaticLimit", "Sum", "Tabulated", "VACUUM",
    "atomic_polarizability", "composite_axis_eps", "drude_eps", "emg_effective_response",
    "emg_imaginary_axis", "kk_to_imaginary_axis", "lorentz_term", "mg_metal_spheres_eps",
    "mie_dipole_coeffs", "nc_metamaterial_response", "polaritonic_eps",
]
