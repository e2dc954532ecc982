"""Figure presets as run-config text.

Each preset is an ordinary config document, so ``--dump-config`` followed
by ``--config`` reproduces a preset run exactly.  Dimensionless numbers are
multiples of ``omega_scale`` (frequencies) and of ``2 pi c / omega_scale``
(lengths, when ``length_unit = lambda``).
"""

GOLD = "drude(plasma=0.96, damping=0.004)"
MM_RESONANCE = "strength=0.04, resonance=0.1, res_damping=0.005, plasma=1.0, damping=0.006"
MM_MU = "lorentz(strength=0.1, resonance=0.1, damping=0.005)"
BK7 = ("[lorentz(strength=1.84, resonance=1.81, damping=0.0), "
       "lorentz(strength=0.47, resonance=0.28, damping=0.0), "
       "lorentz(strength=0.014, resonance=0.014, damping=0.0)]")

_SCALED = """\
[run]
kind = {kind}
omega_scale = 1.37e16
length_unit = lambda
"""

_D_SWEEP = """\
[sweep]
variable = gap
min = 0.05
max = 50.0
points = {points}
spacing = log
"""

_QUAD = """\
[quadrature]
rtol = 1e-6
"""

FIG4 = (_SCALED.format(kind="force") + f"""
[metal]
eps = {GOLD}

[metamaterial]
eps = composite(f=filling_factor, {MM_RESONANCE})
mu = {MM_MU}

[geometry]
temperature = 0.0

""" + _D_SWEEP.format(points=50) + """
[series]
filling_factor = 0.0, 0.001, 0.003, 0.01

""" + _QUAD)

FIG5 = (_SCALED.format(kind="force") + f"""
[metal]
eps = {GOLD}

[metamaterial]
eps_x = composite(f=f_x, {MM_RESONANCE})
eps_y = composite(f=f_x, {MM_RESONANCE})
eps_z = composite(f=f_z, {MM_RESONANCE})
mu = {MM_MU}

[geometry]
gap = 1.0
temperature = 0.0

[series]
mode = product
f_x = 0.0, 0.0001, 0.0003, 0.001, 0.003, 0.01
f_z = 0.0, 0.0001, 0.0003, 0.001, 0.003, 0.01

""" + _QUAD)

FIG6 = (_SCALED.format(kind="force") + f"""
method = perturbative

[metal]
eps = {GOLD}

[metamaterial]
eps_x = composite(f=f_x, {MM_RESONANCE})
eps_y = composite(f=f_x * fy_ratio, {MM_RESONANCE})
eps_z = lorentz(strength=0.04, resonance=0.1, damping=0.005) + drude(plasma=1.0, damping=0.006)
mu_x = {MM_MU}
mu_y = {MM_MU}
mu_z = constant(value=1.0)

[geometry]
temperature = 0.0

""" + _D_SWEEP.format(points=30) + """
[series]
mode = product
f_x = 0.0001, 0.001, 0.01
fy_ratio = 0.8, 1.0, 1.2

""" + _QUAD)

FIG7 = (_SCALED.format(kind="force") + f"""
[metal]
eps = {GOLD}

[metamaterial]
eps = composite(f=0.0001, strength=0.04, resonance=0.1, res_damping=0.04 * gamma_e_ratio, plasma=1.0, damping=0.006)
mu = lorentz(strength=0.1, resonance=0.1, damping=0.1 * gamma_m_ratio)

[geometry]
temperature = 0.0

""" + _D_SWEEP.format(points=30) + """
[series]
mode = zip
panel = main, main, main, a, a, a, b, b, b
gamma_e_ratio = 0.1, 0.5, 2.5, 0.1, 0.5, 2.5, 0.125, 0.125, 0.125
gamma_m_ratio = 0.1, 0.5, 2.5, 0.05, 0.05, 0.05, 0.1, 0.5, 2.5

""" + _QUAD)


def _fig8(metal_damping):
    return (_SCALED.format(kind="force") + f"""
[metal]
eps = drude(plasma=0.96, damping={metal_damping})

[metamaterial]
eps = composite(f=0.0, {MM_RESONANCE})
mu = {MM_MU}

""" + _D_SWEEP.format(points=40) + """
[series]
temperature = 0.0, 300.0, 600.0

""" + _QUAD)


FIG8A = _fig8("0.004")
FIG8B = _fig8("0.0")

FIG9 = (_SCALED.format(kind="force") + f"""
[metal]
eps = {GOLD}

[metamaterial]
eps = nonconnected(f=0.1, metal=drude(plasma=0.96, damping=0.004), host={BK7}, electric=lorentz(strength=0.34, resonance=0.2, damping=0.04))
mu = lorentz(strength=0.064, resonance=0.15, damping=0.02)

[geometry]
temperature = 0.0

""" + _D_SWEEP.format(points=40) + "\n" + _QUAD)

FIG10 = _SCALED.format(kind="emg") + """
[emg]
filling_factor = 0.37
radius = 0.05
host_eps = 1.0
inclusion = polaritonic(eps_inf=2.0, Omega=0.4, omega=0.15, gamma=0.001)
xi_min = 0.001
xi_max = 10.0
points = 61
"""

_SI_HOST = ("[lorentz(strength=2.52e16, resonance=2.48e16, damping=0.0), "
            "lorentz(strength=6.4e15, resonance=3.8e15, damping=0.0), "
            "lorentz(strength=1.9e14, resonance=1.9e14, damping=0.0)]")
_SI_MM = f"""
[metamaterial]
eps = nonconnected(f=0.1, metal=drude(plasma=1.32e16, damping=metal_damping), host={_SI_HOST}, electric=lorentz(strength=4.7e15, resonance=2.7e15, damping=5.5e14))
mu = lorentz(strength=8.7e14, resonance=2e15, damping=2.7e14)
"""

FIG11 = """\
[run]
kind = contrast
omega_scale = 1.0
length_unit = m

[metal]
eps = drude(plasma=1.32e16, damping=metal_damping)
""" + _SI_MM + """
[sweep]
variable = gap
min = 1e-7
max = 1.5e-6
points = 25
spacing = log

[series]
mode = product
temperature = 0.0, 300.0
metal_damping = 5.48e13, 0.0
toggle = electric, magnetic

""" + _QUAD

FIG12 = """\
[run]
kind = trap_contrast
omega_scale = 1.0
length_unit = m
toggle = magnetic
""" + _SI_MM + """
[atom]
alpha0_cm3 = 4.74e-23
transition_freq = 2.54e15
mass = 1.45e-25
trap_freq = 2 * pi * 229

[variables]
metal_damping = 5.48e13

[sweep]
variable = z
min = 5e-7
max = 8e-6
points = 31
spacing = log

""" + _QUAD

PRESETS = {
    "fig4": FIG4,
    "fig5": FIG5,
    "fig6": FIG6,
    "fig7": FIG7,
    "fig8a": FIG8A,
    "fig8b": FIG8B,
    "fig9": FIG9,
    "fig10": FIG10,
    "fig11": FIG11,
    "fig12": FIG12,
}


def preset_text(name):
    """Config text of a preset."""
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None
