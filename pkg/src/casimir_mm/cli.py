"""Command-line entry point.

Exit codes: 0 success, 2 config error, 3 quadrature failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from .config import (ConfigError, bindings, build_layer, parse_config, run_config, validate,
                     write_csv, RunOutput)
from .lifshitz import default_threads
from .presets import PRESETS, preset_text
from .quadrature import QuadratureError
from .reflection import TransverseWave, layer_reflection

EXIT_CONFIG, EXIT_QUADRATURE, EXIT_IO = 2, 3, 4


def _parser():
    p = argparse.ArgumentParser(
        prog="casimir-mm",
        description="Casimir-Lifshitz pressures and Casimir-Polder shifts for "
                    "magnetodielectric metamaterials.")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--preset", choices=sorted(PRESETS), help="run a figure preset")
    src.add_argument("--config", help="run config file (INI)")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--tolerance", type=float, help="relative quadrature tolerance")
    p.add_argument("--threads", type=int, help="worker threads (default: $CASIMIR_THREADS or 1)")
    p.add_argument("--dump-materials", metavar="CSV",
                   help="write eps/mu of a layer on a log xi grid")
    p.add_argument("--dump-reflectivity", metavar="CSV",
                   help="write the reflection matrix of a layer on a (xi, k) grid")
    p.add_argument("--layer", choices=("metal", "metamaterial"), default="metamaterial",
                   help="layer used by the dump options")
    p.add_argument("--dump-config", metavar="INI", help="write the run config text")
    p.add_argument("--validate", action="store_true",
                   help="print diagnostics and exit without computing")
    return p


def _xi_grid(cfg, n=200):
    w = cfg.omega_scale if cfg.omega_scale != 1.0 else 1e16
    return np.geomspace(1e-4 * w, 1e2 * w, n)


def _first_binding(cfg):
    return next(iter(bindings(cfg)))


def dump_materials(cfg, layer_name, path):
    _, _, _, variables = _first_binding(cfg)
    layer = build_layer(cfg, layer_name, variables)
    xi = _xi_grid(cfg)
    t = layer.material.response(xi)
    out = RunOutput(["xi_rad_s", "eps_xx", "eps_yy", "eps_zz", "mu_xx", "mu_yy", "mu_zz"], [])
    comps = [np.broadcast_to(c, xi.shape) for c in t.components()]
    for i, x in enumerate(xi):
        out.rows.append([repr(float(x))] + [repr(float(c[i])) for c in comps])
    write_csv(path, out)


def dump_reflectivity(cfg, layer_name, path):
    _, _, geo, variables = _first_binding(cfg)
    layer = build_layer(cfg, layer_name, variables)
    d = geo.get("gap", geo.get("z", 1e-6))
    xi = _xi_grid(cfg, 20)
    k = np.geomspace(1e-2 / d, 1e2 / d, 20)
    phis = [0.0, math.pi / 4] if layer.material.symmetry == "biaxial" else [0.0]
    out = RunOutput(["xi_rad_s", "k_par", "phi", "r_tete", "r_tetm", "r_tmte", "r_tmtm"], [])
    t = layer.material.response(xi)
    for phi in phis:
        w = TransverseWave(k[None, :], phi, xi[:, None])
        tt = type(t)(*(np.asarray(c)[:, None] for c in t.components()))
        R = layer_reflection(layer, tt, w, method=cfg.method)
        ents = [np.broadcast_to(e, (xi.size, k.size)) for e in R.entries()]
        for i in range(xi.size):
            for j in range(k.size):
                out.rows.append([repr(float(xi[i])), repr(float(k[j])), repr(phi)]
                                + [repr(float(e[i, j])) for e in ents])
    write_csv(path, out)


def main(argv=None):
    args = _parser().parse_args(argv)
    if not args.preset and not args.config:
        print("error: give --preset or --config", file=sys.stderr)
        return EXIT_CONFIG
    name = args.preset or args.config
    try:
        if args.preset:
            text = preset_text(args.preset)
        else:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    diags = validate(text)
    for d in diags:
        print(d, file=sys.stderr)
    if args.validate:
        return EXIT_CONFIG if any(d.level == "error" for d in diags) else 0
    threads = args.threads if args.threads is not None else default_threads()
    if threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    if args.tolerance is not None and not args.tolerance > 0:
        print("error: --tolerance must be > 0", file=sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = parse_config(text)
        if args.dump_config:
            with open(args.dump_config, "w", newline="\n", encoding="utf-8") as fh:
                fh.write(text)
        if args.dump_materials:
            dump_materials(cfg, args.layer, args.dump_materials)
        if args.dump_reflectivity:
            dump_reflectivity(cfg, args.layer, args.dump_reflectivity)
        dumping = args.dump_materials or args.dump_reflectivity or args.dump_config
        if dumping and not args.out:
            return 0
        out = run_config(cfg, threads=threads, tolerance=args.tolerance)
        if args.out:
            write_csv(args.out, out)
        else:
            sys.stdout.write(",".join(out.header) + "\n")
            for row in out.rows:
                sys.stdout.write(",".join(str(v) for v in row) + "\n")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"{name}: rows={len(out.rows)} evaluations={out.n_eval} "
          f"max_error={out.max_error:.3g}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
