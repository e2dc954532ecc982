"""Run configuration: INI sections, model expressions, validation and execution.

A config names two layers (``[metal]`` facing ``[metamaterial]``), the
geometry, an optional sweep and series, and quadrature settings.  Material
axes are written as expressions such as::

    eps = composite(f=filling_factor, strength=0.04, resonance=0.1,
                    res_damping=0.005, plasma=1.0, damping=0.006)
    mu = lorentz(strength=0.1, resonance=0.1, damping=0.005)

Frequencies inside expressions are multiples of ``[run] omega_scale``;
``a + b`` adds two response models.  Expressions are evaluated from their
syntax tree against a fixed whitelist, never with ``eval``.
"""
from __future__ import annotations

import ast
import configparser
import itertools
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .constants import C
from .lifshitz import (QuadratureSpec, Scenario, casimir_energy_zero_T, casimir_force,
                       ideal_energy, ideal_normalization, magnetic_contrast)
from .materials import medium as md
from .materials import models as m
from .materials.kramers_kronig import emg_imaginary_axis
from .materials.mie import SphereCompositeParams
from .reflection import LayerSpec, min_halfspace_thickness


class ConfigError(ValueError):
    """Config text that cannot be parsed or does not validate."""


KINDS = ("force", "energy", "contrast", "trap_contrast", "emg")
SWEEP_VARIABLES = ("gap", "temperature", "z", "filling_factor", "dissipation_scale")
GEOMETRY_VARIABLES = ("gap", "temperature", "z")
MATERIAL_KEYS = ("eps", "mu", "eps_x", "eps_y", "eps_z", "mu_x", "mu_y", "mu_z",
                 "thickness", "name")
SECTION_KEYS = {
    "run": ("kind", "omega_scale", "length_unit", "method", "toggle"),
    "metal": MATERIAL_KEYS,
    "metamaterial": MATERIAL_KEYS,
    "geometry": ("gap", "temperature", "z"),
    "sweep": ("variable", "min", "max", "points", "spacing"),
    "quadrature": ("rtol", "cutoff_multiplier", "k_nodes", "phi_nodes", "matsubara_tol",
                   "max_intervals"),
    "atom": ("alpha0_cm3", "transition_freq", "mass", "trap_freq"),
    "emg": ("filling_factor", "radius", "host_eps", "inclusion", "xi_min", "xi_max",
            "points"),
}
# [series] and [variables] take arbitrary names.
FREE_SECTIONS = ("series", "variables")
REQUIRED = {
    "force": ("run", "metal", "metamaterial"),
    "energy": ("run", "metal", "metamaterial"),
    "contrast": ("run", "metal", "metamaterial"),
    "trap_contrast": ("run", "metamaterial", "atom"),
    "emg": ("run", "emg"),
}

# --------------------------------------------------------------------------
# expressions

_FREQ_ARGS = {
    "drude": ("plasma", "damping"),
    "lorentz": ("strength", "resonance", "damping"),
    "constant": (),
    "composite": ("strength", "resonance", "res_damping", "plasma", "damping"),
    "nonconnected": (),
    "polaritonic": ("Omega", "omega", "gamma"),
}
_SIGNATURES = {
    "drude": ("plasma", "damping"),
    "lorentz": ("strength", "resonance", "damping"),
    "constant": ("value",),
    "composite": ("f", "strength", "resonance", "res_damping", "plasma", "damping"),
    "nonconnected": ("f", "metal", "host", "electric"),
    "polaritonic": ("eps_inf", "Omega", "omega", "gamma"),
}
_DEFAULTS = {
    "lorentz": {"damping": 0.0},
    "drude": {"damping": 0.0},
    "nonconnected": {"electric": None},
}
_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}


def _build(name, args, scale):
    try:
        if name == "drude":
            return md.Drude(m.DrudeParams(args["plasma"], args["damping"]))
        if name == "lorentz":
            return md.Lorentz(m.LorentzParams(args["strength"], args["resonance"],
                                              args["damping"]))
        if name == "constant":
            return md.Constant(args["value"])
        if name == "composite":
            res = m.LorentzParams(args["strength"], args["resonance"], args["res_damping"])
            return md.Composite(m.CompositeAxisParams(
                args["f"], res, m.DrudeParams(args["plasma"], args["damping"])))
        if name == "nonconnected":
            metal, host, electric = args["metal"], args["host"], args["electric"]
            if not isinstance(metal, md.Drude):
                raise ConfigError("nonconnected: metal must be drude(...)")
            if not isinstance(host, list) or not all(isinstance(h, md.Lorentz) for h in host):
                raise ConfigError("nonconnected: host must be a list of lorentz(...)")
            if electric is None:
                electric = md.Lorentz(m.LorentzParams(0.0, 1.0))
            if not isinstance(electric, md.Lorentz):
                raise ConfigError("nonconnected: electric must be lorentz(...)")
            return md.NonConnected(args["f"], metal.params, tuple(h.params for h in host),
                                   electric.params)
        if name == "polaritonic":
            return md.Polaritonic(m.PolaritonicParams(args["eps_inf"], args["Omega"],
                                                      args["omega"], args["gamma"]))
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{name}(...): {exc}") from None
    raise ConfigError(f"unknown model {name!r}")


def evaluate(expr: str, scale: float = 1.0, variables: Optional[Dict[str, float]] = None):
    """Evaluate a config expression to a number, a list or a response model."""
    variables = dict(variables or {})
    variables.setdefault("pi", math.pi)
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse {expr!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name):
            if node.id not in variables:
                raise ConfigError(f"unknown name {node.id!r} in {expr!r}")
            val = variables[node.id]
            if not isinstance(val, float):
                raise ConfigError(f"{node.id!r} is not numeric")
            return val
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            val = ev(node.operand)
            if not isinstance(val, float):
                raise ConfigError(f"unary sign on a model in {expr!r}")
            return -val if isinstance(node.op, ast.USub) else val
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            a, b = ev(node.left), ev(node.right)
            if isinstance(a, float) and isinstance(b, float):
                return _BINOPS[type(node.op)](a, b)
            if isinstance(node.op, ast.Add) and isinstance(a, md.AxisModel) \
                    and isinstance(b, md.AxisModel):
                ta = a.terms if isinstance(a, md.Sum) else (a,)
                tb = b.terms if isinstance(b, md.Sum) else (b,)
                return md.Sum(ta + tb)
            raise ConfigError(f"unsupported operands in {expr!r}")
        if isinstance(node, ast.List):
            return [ev(e) for e in node.elts]
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            name = node.func.id
            if name not in _SIGNATURES:
                raise ConfigError(f"unknown model {name!r}")
            sig = _SIGNATURES[name]
            if len(node.args) > len(sig):
                raise ConfigError(f"{name}: too many positional arguments")
            args = dict(_DEFAULTS.get(name, {}))
            for key, a in zip(sig, node.args):
                args[key] = ev(a)
            for kw in node.keywords:
                if kw.arg not in sig:
                    raise ConfigError(f"{name}: unknown argument {kw.arg!r}")
                args[kw.arg] = ev(kw.value)
            missing = [k for k in sig if k not in args]
            if missing:
                raise ConfigError(f"{name}: missing {', '.join(missing)}")
            for k in _FREQ_ARGS[name]:
                if not isinstance(args[k], float):
                    raise ConfigError(f"{name}: {k} must be a number")
                args[k] = args[k] * scale
            return _build(name, args, scale)
        raise ConfigError(f"unsupported syntax in {expr!r}")

    return ev(tree)


def _number(expr, variables=None):
    val = evaluate(expr, 1.0, variables)
    if not isinstance(val, float):
        raise ConfigError(f"expected a number, got {expr!r}")
    return val


# --------------------------------------------------------------------------
# config object


@dataclass
class RunConfig:
    """Parsed config; materials stay as text until variables are bound."""

    sections: Dict[str, Dict[str, str]]
    kind: str
    omega_scale: float
    length_unit: str
    method: str = "exact"
    toggle: str = "magnetic"
    variables: Dict[str, float] = field(default_factory=dict)
    sweep: Optional[dict] = None
    series: List[dict] = field(default_factory=lambda: [{}])
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)

    @property
    def length_scale(self):
        """Metres per config length unit."""
        return 2 * math.pi * C / self.omega_scale if self.length_unit == "lambda" else 1.0


def _parser():
    cp = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                   comment_prefixes=("#", ";"), inline_comment_prefixes=None)
    cp.optionxform = str
    return cp


def read_sections(text: str) -> Dict[str, Dict[str, str]]:
    cp = _parser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    return {s: dict(cp.items(s)) for s in cp.sections()}


def _split_list(text):
    return [t.strip() for t in text.split(",") if t.strip()]


def _series(sec: Dict[str, str], variables):
    sec = dict(sec)
    mode = sec.pop("mode", "product")
    if mode not in ("product", "zip"):
        raise ConfigError("series mode must be 'product' or 'zip'")
    names = list(sec)
    if not names:
        return [{}]
    values = []
    for n in names:
        vals = []
        for tok in _split_list(sec[n]):
            try:
                vals.append(_number(tok, variables))
            except ConfigError:
                if not tok.isidentifier():
                    raise
                vals.append(tok)
        values.append(vals)
    if mode == "zip":
        if len({len(v) for v in values}) != 1:
            raise ConfigError("zip series need equal-length value lists")
        combos = zip(*values)
    else:
        combos = itertools.product(*values)
    return [dict(zip(names, c)) for c in combos]


def parse_config(text: str) -> RunConfig:
    """Parse and validate config text; raises :class:`ConfigError` on errors."""
    problems = [d for d in validate(text) if d.level == "error"]
    if problems:
        raise ConfigError("; ".join(str(d) for d in problems))
    return _parse(read_sections(text))


def _parse(sections) -> RunConfig:
    run = sections.get("run", {})
    kind = run.get("kind", "force")
    scale = _number(run.get("omega_scale", "1.0"))
    variables = {k: _number(v) for k, v in sections.get("variables", {}).items()}
    cfg = RunConfig(sections, kind, scale, run.get("length_unit", "m"),
                    run.get("method", "exact"), run.get("toggle", "magnetic"), variables)
    if "sweep" in sections:
        s = sections["sweep"]
        cfg.sweep = dict(variable=s["variable"], min=_number(s["min"], variables),
                         max=_number(s["max"], variables), points=int(_number(s["points"])),
                         spacing=s.get("spacing", "linear"))
    if "series" in sections:
        cfg.series = _series(sections["series"], variables)
    q = {k: _number(v) for k, v in sections.get("quadrature", {}).items()}
    for k in ("k_nodes", "phi_nodes", "max_intervals"):
        if k in q:
            q[k] = int(q[k])
    cfg.quadrature = QuadratureSpec(**q)
    return cfg


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Diagnostic:
    level: str
    section: str
    key: str
    message: str

    def __str__(self):
        where = f"[{self.section}]" + (f" {self.key}" if self.key else "")
        return f"{self.level}: {where}: {self.message}"


def _material_axes(sec: Dict[str, str], scale, variables):
    """Six axis models from a material section."""
    axes = {}
    for base in ("eps", "mu"):
        default = sec.get(base)
        for ax in "xyz":
            key = f"{base}_{ax}"
            expr = sec.get(key, default)
            if expr is None:
                if base == "eps":
                    raise ConfigError(f"missing {key} (or {base})")
                axes[key] = md.VACUUM
                continue
            model = evaluate(expr, scale, variables)
            if not isinstance(model, md.AxisModel):
                raise ConfigError(f"{key} must be a response model")
            axes[key] = model
    return axes


def build_layer(cfg: RunConfig, name: str, variables) -> LayerSpec:
    sec = cfg.sections[name]
    axes = _material_axes(sec, cfg.omega_scale, variables)
    medium = md.Medium(axes["eps_x"], axes["eps_y"], axes["eps_z"],
                       axes["mu_x"], axes["mu_y"], axes["mu_z"], name=sec.get("name", name))
    thick = sec.get("thickness")
    thickness = None if thick is None else _number(thick, variables) * cfg.length_scale
    try:
        return LayerSpec(medium, thickness, label=name)
    except ValueError as exc:
        raise ConfigError(f"[{name}]: {exc}") from None


def _binding_candidates(sections):
    """Every variable value the config could bind, for validation."""
    out = [{}]
    variables = {}
    try:
        variables = {k: _number(v) for k, v in sections.get("variables", {}).items()}
        series = _series(sections.get("series", {}), variables) if "series" in sections else [{}]
    except ConfigError:
        series = [{}]
    for s in series:
        b = dict(variables)
        b.update({k: v for k, v in s.items() if isinstance(v, float)})
        out.append(b)
    sw = sections.get("sweep", {})
    if sw.get("variable") in ("filling_factor", "dissipation_scale"):
        try:
            lo = _number(sw.get("min", "0"), variables)
            for b in out:
                b.setdefault(sw["variable"], lo)
        except ConfigError:
            pass
    return out[1:] if len(out) > 1 else out


def validate(text: str) -> List[Diagnostic]:
    """Unknown keys, missing sections, unit violations and regime warnings."""
    diags: List[Diagnostic] = []

    def err(sec, key, msg):
        diags.append(Diagnostic("error", sec, key, msg))

    def warn(sec, key, msg):
        diags.append(Diagnostic("warning", sec, key, msg))

    try:
        sections = read_sections(text)
    except ConfigError as exc:
        return [Diagnostic("error", "", "", str(exc))]
    run = sections.get("run", {})
    kind = run.get("kind", "force")
    if not sections:
        err("run", "", "empty config; required sections: "
            + ", ".join(f"[{s}]" for s in REQUIRED["force"]))
        return diags
    if kind not in KINDS:
        err("run", "kind", f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        return diags
    for s in REQUIRED[kind]:
        if s not in sections:
            err(s, "", f"missing required section for kind {kind!r}")
    for s, keys in sections.items():
        if s in FREE_SECTIONS:
            continue
        if s not in SECTION_KEYS:
            err(s, "", "unknown section")
            continue
        for k in keys:
            if k not in SECTION_KEYS[s]:
                err(s, k, "unknown key")
    if any(d.level == "error" for d in diags):
        return diags

    try:
        scale = _number(run.get("omega_scale", "1.0"))
        if not scale > 0:
            err("run", "omega_scale", "must be > 0")
            return diags
    except ConfigError as exc:
        err("run", "omega_scale", str(exc))
        return diags
    unit = run.get("length_unit", "m")
    if unit not in ("m", "lambda"):
        err("run", "length_unit", "must be 'm' or 'lambda'")
    if run.get("method", "exact") not in ("exact", "perturbative"):
        err("run", "method", "must be 'exact' or 'perturbative'")
    if run.get("toggle", "magnetic") not in ("electric", "magnetic"):
        err("run", "toggle", "must be 'electric' or 'magnetic'")
    try:
        cfg = _parse(sections)
    except (ConfigError, ValueError, KeyError) as exc:
        err("", "", f"{exc}")
        return diags

    geo = sections.get("geometry", {})
    for k, v in geo.items():
        try:
            val = _number(v, cfg.variables)
        except ConfigError as exc:
            err("geometry", k, str(exc))
            continue
        if k in ("gap", "z") and not val > 0:
            err("geometry", k, "must be > 0")
        if k == "temperature" and val < 0:
            err("geometry", k, "must be >= 0 K")
        if k in ("gap", "z") and unit == "m" and val > 1e-2:
            warn("geometry", k, "lengths are in metres; value looks too large")
    if cfg.sweep:
        s = cfg.sweep
        if s["variable"] not in SWEEP_VARIABLES:
            err("sweep", "variable", f"must be one of {', '.join(SWEEP_VARIABLES)}")
        if not s["min"] < s["max"]:
            err("sweep", "min", "sweep range needs min < max")
        if s["spacing"] not in ("linear", "log"):
            err("sweep", "spacing", "must be 'linear' or 'log'")
        elif s["spacing"] == "log" and not s["min"] > 0:
            err("sweep", "min", "log spacing needs min > 0")
        if s["points"] < 1:
            err("sweep", "points", "must be >= 1")
    if kind in ("force", "energy", "contrast"):
        has_gap = "gap" in geo or (cfg.sweep and cfg.sweep["variable"] == "gap") or \
            any("gap" in b for b in cfg.series)
        if not has_gap:
            err("geometry", "gap", "no gap given (geometry, sweep or series)")
    if kind == "trap_contrast":
        has_z = "z" in geo or (cfg.sweep and cfg.sweep["variable"] == "z")
        if not has_z:
            err("geometry", "z", "no atom-surface distance given")

    for name in ("metal", "metamaterial"):
        if name not in sections:
            continue
        for b in _binding_candidates(sections):
            try:
                layer = build_layer(cfg, name, b)
            except ConfigError as exc:
                err(name, "", str(exc))
                break
            _layer_warnings(layer, name, scale, warn)
    if kind == "emg":
        _emg_checks(cfg, err, warn)
    if kind == "trap_contrast" and "atom" in sections:
        try:
            _atom(cfg)
        except (ConfigError, ValueError) as exc:
            err("atom", "", str(exc))
    # Dedupe repeated diagnostics from several bindings.
    seen, out = set(), []
    for d in diags:
        if d not in seen:
            seen.add(d)
            out.append(d)
    return out


def _layer_warnings(layer: LayerSpec, name, scale, warn):
    if scale == 1.0:
        for a in layer.material.axes:
            for p in _freqs(a):
                if 0 < p < 1e6:
                    warn(name, "", f"frequency {p!r} rad/s looks dimensionless; "
                         "set [run] omega_scale")
                    return
    if layer.thickness is None:
        return
    for a in layer.material.axes[:3]:
        for drude in _drudes(a):
            bound = min_halfspace_thickness(drude, "high")
            if layer.thickness < bound:
                warn(name, "thickness",
                     f"slab of {layer.thickness:.3g} m is thinner than the penetration "
                     f"depth c/Omega = {bound:.3g} m (for gold that is the 10-20 nm "
                     "range); it does not behave as a half-space")
                return


def _drudes(a):
    if isinstance(a, md.Drude):
        yield a.params
    elif isinstance(a, md.Composite) and a.params.filling_factor > 0:
        yield a.params.drude
    elif isinstance(a, md.Sum):
        for t in a.terms:
            yield from _drudes(t)


def _freqs(a):
    if isinstance(a, md.Drude):
        yield a.params.plasma_freq
    elif isinstance(a, md.Lorentz):
        yield a.params.strength
    elif isinstance(a, md.Composite):
        yield a.params.drude.plasma_freq
        yield a.params.resonance.strength
    elif isinstance(a, md.Sum):
        for t in a.terms:
            yield from _freqs(t)


def _emg_params(cfg: RunConfig):
    sec = cfg.sections["emg"]
    inc = evaluate(sec["inclusion"], cfg.omega_scale, cfg.variables)
    if isinstance(inc, md.Polaritonic):
        inclusion = inc.params
    elif isinstance(inc, md.Drude):
        inclusion = inc.params
    else:
        raise ConfigError("emg inclusion must be polaritonic(...) or drude(...)")
    return SphereCompositeParams(
        _number(sec["filling_factor"], cfg.variables),
        _number(sec["radius"], cfg.variables) * cfg.length_scale, inclusion,
        _number(sec.get("host_eps", "1.0"), cfg.variables))


def _emg_checks(cfg, err, warn):
    try:
        p = _emg_params(cfg)
    except (ConfigError, ValueError, KeyError) as exc:
        err("emg", "", f"{exc}")
        return
    inc = p.inclusion
    w = inc.Omega_pol if isinstance(inc, m.PolaritonicParams) else inc.plasma_freq
    x = math.sqrt(p.host_eps) * w * p.sphere_radius / C
    if x > 0.3:
        warn("emg", "radius", f"x = omega R / c = {x:.3g} > 0.3 at the inclusion "
             "resonance; extended Maxwell Garnett is outside its validity range")


def _atom(cfg: RunConfig):
    sec = cfg.sections["atom"]
    v = {k: _number(sec[k], cfg.variables) for k in SECTION_KEYS["atom"]}
    return m.AtomParams.from_cgs(v["alpha0_cm3"], v["transition_freq"], v["mass"],
                                 v["trap_freq"])


# --------------------------------------------------------------------------
# execution

_COLUMN = {"filling_factor": "f", "temperature": "T_K", "z": "z_m"}


@dataclass
class RunOutput:
    header: List[str]
    rows: List[list]
    n_eval: int = 0
    max_error: float = 0.0


def sweep_values(cfg: RunConfig):
    s = cfg.sweep
    if s is None:
        return [None]
    if s["points"] == 1:
        return [s["min"]]
    if s["spacing"] == "log":
        return list(np.geomspace(s["min"], s["max"], s["points"]))
    return list(np.linspace(s["min"], s["max"], s["points"]))


def _columns(cfg: RunConfig):
    cols = []
    if cfg.sweep:
        v = cfg.sweep["variable"]
        if v == "gap":
            cols.append("d_over_lambda" if cfg.length_unit == "lambda" else "d_m")
        elif v == "z":
            cols.append("z_over_lambda" if cfg.length_unit == "lambda" else "z_m")
        else:
            cols.append(_COLUMN.get(v, v))
    if cfg.series and cfg.series[0]:
        cols.extend(_COLUMN.get(k, k) for k in cfg.series[0])
    return cols


def bindings(cfg: RunConfig):
    """Yield ``(sweep_value, series_binding, geometry, variables)`` for every point."""
    geo_sec = cfg.sections.get("geometry", {})
    for series in cfg.series:
        for sv in sweep_values(cfg):
            variables = dict(cfg.variables)
            variables.update({k: v for k, v in series.items() if isinstance(v, float)})
            geo = {k: _number(v, variables) for k, v in geo_sec.items()}
            for k in GEOMETRY_VARIABLES:
                if k in series and isinstance(series[k], float):
                    geo[k] = series[k]
            if cfg.sweep:
                var = cfg.sweep["variable"]
                if var in GEOMETRY_VARIABLES:
                    geo[var] = sv
                else:
                    variables[var] = sv
            for k in ("gap", "z"):
                if k in geo:
                    geo[k] = geo[k] * cfg.length_scale
            yield sv, series, geo, variables


def _fmt(v):
    return v if isinstance(v, str) else repr(float(v))


def run_config(cfg: RunConfig, threads: int = 1, tolerance: Optional[float] = None) -> RunOutput:
    """Evaluate every sweep/series point of ``cfg``."""
    quad = cfg.quadrature
    if tolerance is not None:
        quad = QuadratureSpec(**{**quad.__dict__, "rtol": tolerance})
    quad = QuadratureSpec(**{**quad.__dict__, "threads": threads})
    if cfg.kind == "emg":
        return _run_emg(cfg, tolerance)
    cols = _columns(cfg)
    value_col = {"force": ["F_over_FC", "err"], "energy": ["E_over_EC", "err"],
                 "contrast": ["delta_P_Pa", "err"],
                 "trap_contrast": ["delta_gamma", "err"]}[cfg.kind]
    out = RunOutput(cols + value_col, [])
    cache = {}
    atom = _atom(cfg) if cfg.kind == "trap_contrast" else None

    def layer(name, variables):
        key = (name, tuple(sorted(variables.items())))
        if key not in cache:
            cache[key] = build_layer(cfg, name, variables)
        return cache[key]

    for sv, series, geo, variables in bindings(cfg):
        prefix = ([] if sv is None else [_fmt(sv)]) + [_fmt(v) for v in series.values()]
        toggle = series.get("toggle", cfg.toggle)
        if cfg.kind == "trap_contrast":
            surface = layer("metamaterial", variables)
            scen = Scenario(surface, surface, 1.0, atom=atom, quadrature=quad)
            r = magnetic_contrast(scen, toggle=toggle, z=geo["z"])
            out.rows.append(prefix + [_fmt(r.value), _fmt(r.error)])
            out.max_error = max(out.max_error, r.error)
            out.n_eval += r.n_eval
            continue
        scen = Scenario(layer("metal", variables), layer("metamaterial", variables),
                        geo["gap"], geo.get("temperature", 0.0), quadrature=quad,
                        method=cfg.method)
        if cfg.kind == "force":
            r = casimir_force(scen)
            fc = float(ideal_normalization(scen.gap))
            out.rows.append(prefix + [_fmt(r.normalized), _fmt(r.error / fc)])
            out.n_eval += r.n_eval
            out.max_error = max(out.max_error, r.error / fc)
        elif cfg.kind == "energy":
            e, ee = casimir_energy_zero_T(scen)
            ec = abs(float(ideal_energy(scen.gap)))
            out.rows.append(prefix + [_fmt(-e / ec), _fmt(ee / ec)])
            out.max_error = max(out.max_error, ee / ec)
        else:
            r = magnetic_contrast(scen, toggle=toggle)
            out.rows.append(prefix + [_fmt(r.value), _fmt(r.error)])
            out.max_error = max(out.max_error, r.error)
            out.n_eval += r.n_eval
    return out


def _run_emg(cfg: RunConfig, tolerance):
    sec = cfg.sections["emg"]
    p = _emg_params(cfg)
    lo = _number(sec.get("xi_min", "0.001"), cfg.variables)
    hi = _number(sec.get("xi_max", "10"), cfg.variables)
    n = int(_number(sec.get("points", "61")))
    grid = np.geomspace(lo, hi, n)
    rtol = 1e-9 if tolerance is None else tolerance
    eps, mu = emg_imaginary_axis(p, grid * cfg.omega_scale, scale=cfg.omega_scale, rtol=rtol)
    out = RunOutput(["xi_over_omega", "eps", "mu"], [])
    for g, e, u in zip(grid, eps.values, mu.values):
        out.rows.append([_fmt(g), _fmt(e), _fmt(u)])
    return out


def write_csv(path, out: RunOutput):
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(",".join(out.header) + "\n")
        for row in out.rows:
            fh.write(",".join(str(v) for v in row) + "\n")


def medium_config(medium: md.Medium, section="metamaterial") -> str:
    """Config text for a medium with frequencies in rad/s."""
    lines = [f"[{section}]"] + [f"{k} = {v}" for k, v in medium.to_config().items()]
    return "\n".join(lines) + "\n"
