"""Command-line front end.

Subcommands:
  solve1d         interval Schroedinger eigenvalues by shooting
  solve-domain    planar Dirichlet eigenvalues (disk/ellipse)
  solve-surface   hyperbolic-surface eigenvalues; writes the eigenvalue CSV
  length-spectrum Bolza primitive geodesic lengths; writes the spectrum file
  zeta            spectral zeta value from an eigenvalue CSV
  det             zeta-regularized determinant from an eigenvalue CSV
  verify-heat     R_N(t) curve and the completeness certificate
  verify-riesz    Riesz-mean defect curve F_test(t)

Every run writes a manifest JSON (inputs, package version, seed, wall
time) next to its outputs.  Config file values (JSON) are overridden by
command-line flags.  Exit codes: 0 success, 1 configuration error,
2 numerical failure; errors are emitted as JSON on stderr.
"""

import argparse
import csv
import json
import math
import sys
import time
from multiprocessing import Pool
from pathlib import Path

import numpy as np

__version__ = "0.1.0"


def _write_manifest(outdir, command, params, t0):
    manifest = {
        "command": command,
        "params": params,
        "version": __version__,
        "wall_time_s": round(time.time() - t0, 3),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    path = Path(outdir) / f"manifest_{command.replace('-', '_')}.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _write_curve_csv(path, xs, ys, header=("x", "y")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for x, y in zip(xs, ys):
            w.writerow([f"{x:.15g}", f"{y:.15g}"])


def _fail(code, message, **extra):
    sys.stderr.write(json.dumps({"error": message, **extra}) + "\n")
    return code


def _surface_from_args(args):
    from .geometry.surface import (assemble_surface, bolza_fenchel_nielsen,
                                   fenchel_nielsen_from_config)

    if args.surface in ("bolza", "bolza-mw"):
        fn = bolza_fenchel_nielsen("mw")
    elif args.surface == "bolza-symmetric":
        fn = bolza_fenchel_nielsen("symmetric")
    else:
        cfg = json.loads(Path(args.surface).read_text())
        fn = fenchel_nielsen_from_config(cfg)
    return assemble_surface(fn)


def _pool_map(threads):
    if threads <= 1:
        return None
    pool = Pool(threads)
    return pool.map


def cmd_solve1d(args):
    from .solver1d import Problem1D, eigenvalues_1d, potential_by_name

    coeffs = json.loads(args.coeffs) if args.coeffs else None
    problem = Problem1D(args.half_width, potential_by_name(args.potential, coeffs))
    evs = eigenvalues_1d(problem, args.lam_lo, args.lam_hi, args.step)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    _write_curve_csv(out / "eigenvalues_1d.csv", range(1, len(evs) + 1), evs,
                     header=("n", "lambda"))
    print(json.dumps({"eigenvalues": evs}, indent=2))
    return 0


def cmd_solve_domain(args):
    from .planar import disk_domain, ellipse_domain, planar_find_eigenvalues

    if args.domain == "disk":
        domain = disk_domain(args.radius)
    elif args.domain == "ellipse":
        domain = ellipse_domain(args.a, args.b)
    else:
        return _fail(1, f"unknown domain {args.domain!r}")
    records, curve = planar_find_eigenvalues(
        domain, args.lam_lo, args.lam_hi, args.step,
        n_dir=args.directions, seed=args.seed,
        pool_map=_pool_map(args.threads),
    )
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    _write_curve_csv(out / "sigma_curve.csv", curve.lambdas,
                     curve.sigmas[:, 0], header=("lambda", "sigma_1"))
    rows = [
        {
            "lambda": r.lam,
            "multiplicity": r.multiplicity,
            "sigma_min": r.sigma_min,
            "eps": r.eps,
            "fhm_relative_halfwidth": r.fhm_rel,
            "fhm_vacuous": r.fhm_vacuous,
        }
        for r in records
    ]
    (out / "domain_eigenvalues.json").write_text(json.dumps(rows, indent=2))
    print(json.dumps(rows, indent=2))
    return 0


def cmd_solve_surface(args):
    from . import surface_mps as smps

    dec = _surface_from_args(args)
    basis = smps.BasisSpec(args.modes)
    cfg = smps.SearchConfig(tol_lam=args.tol_lam, tau=args.tau,
                            density=args.density)
    records, curve = smps.find_eigenvalues(
        dec, basis, args.lam_lo, args.lam_hi, args.step, cfg,
        pool_map=_pool_map(args.threads),
    )
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    smps.write_eigenvalue_csv(out / args.csv_name, records)
    _write_curve_csv(out / "sigma_curve.csv", curve.lambdas,
                     curve.sigmas[:, 0], header=("lambda", "sigma_1"))
    for r in records:
        print(f"{r.lam:.12f}  mult {r.multiplicity}  sigma {r.sigma_min:.3e}")
    return 0


def cmd_length_spectrum(args):
    from .geometry.bolza import bolza_length_spectrum, write_length_spectrum

    spectrum = bolza_length_spectrum(args.l_max)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    write_length_spectrum(out / "bolza_lengths.txt", spectrum)
    for ell, mult in spectrum.entries:
        print(f"{ell:.12f} {mult}")
    return 0


def _spectral_input(args):
    from .geometry.bolza import read_length_spectrum
    from .selberg import SpectralInput
    from .surface_mps import read_eigenvalue_csv

    records = read_eigenvalue_csv(args.eigenvalues)
    lengths = read_length_spectrum(args.lengths)
    eigenvalues = tuple((r.lam, r.multiplicity) for r in records)
    if abs(eigenvalues[0][0]) > 1e-9:
        eigenvalues = ((0.0, 1),) + eigenvalues
    else:
        eigenvalues = ((0.0, eigenvalues[0][1]),) + tuple(eigenvalues[1:])
    return SpectralInput(volume=args.volume, eigenvalues=eigenvalues,
                         lengths=lengths)


def cmd_zeta(args):
    from .selberg import zeta

    si = _spectral_input(args)
    ev = zeta(args.s, si, eps=args.eps, n_heat=args.n_heat)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "zeta.json").write_text(ev.to_json() + "\n")
    print(ev.to_json())
    return 0


def cmd_det(args):
    from .selberg import log_det

    si = _spectral_input(args)
    det, zeta_prime_0, budget = log_det(si, eps=args.eps)
    result = {
        "det_zeta": det,
        "zeta_prime_0": zeta_prime_0,
        "budget": budget,
        "budget_total": sum(budget.values()),
        "params": {"eps": args.eps, "n_eigen": len(si.eigenvalues)},
    }
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "det.json").write_text(json.dumps(result, indent=2) + "\n")
    print(json.dumps(result, indent=2))
    return 0


def cmd_verify_heat(args):
    from .selberg import completeness_certificate, r_n_curve

    si = _spectral_input(args)
    t_grid = np.linspace(args.t_lo, args.t_hi, args.t_samples)
    vals, crossover = r_n_curve(si, t_grid)
    lam_max, details = completeness_certificate(si, args.t, args.T)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    _write_curve_csv(out / "r_n_curve.csv", t_grid, vals, header=("t", "R_N"))
    result = {"certificate": details, "crossover_t": float(t_grid[crossover])}
    if lam_max is None:
        result["certified"] = False
    else:
        result["certified"] = True
        result["lambda_max"] = lam_max
    (out / "heat_certificate.json").write_text(json.dumps(result, indent=2) + "\n")
    print(json.dumps(result, indent=2))
    return 0


def cmd_verify_riesz(args):
    from .selberg import riesz_test

    si = _spectral_input(args)
    t_grid = np.linspace(args.t_lo, args.t_hi, args.t_samples)
    vals = riesz_test(si, t_grid)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    _write_curve_csv(out / "riesz_curve.csv", t_grid, vals,
                     header=("t", "F_test"))
    result = {
        "max_abs_F_test": float(np.max(np.abs(vals))),
        "t_range": [args.t_lo, args.t_hi],
    }
    (out / "riesz.json").write_text(json.dumps(result, indent=2) + "\n")
    print(json.dumps(result, indent=2))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="hypspec", description=__doc__)
    p.add_argument("--config", help="JSON config file; flags override it")
    sub = p.add_subparsers(dest="command", required=True)

    s1 = sub.add_parser("solve1d")
    s1.add_argument("--potential", default="zero")
    s1.add_argument("--coeffs", default=None, help="JSON list for 'poly'")
    s1.add_argument("--half-width", dest="half_width", type=float, default=1.0)
    s1.add_argument("--range", dest="range", nargs=2, type=float,
                    default=[0.5, 50.0])
    s1.add_argument("--step", type=float, default=1.0)
    s1.set_defaults(func=cmd_solve1d)

    s2 = sub.add_parser("solve-domain")
    s2.add_argument("--domain", default="disk")
    s2.add_argument("--radius", type=float, default=1.0)
    s2.add_argument("--a", type=float, default=2.0)
    s2.add_argument("--b", type=float, default=1.0)
    s2.add_argument("--range", dest="range", nargs=2, type=float,
                    default=[3.0, 30.0])
    s2.add_argument("--step", type=float, default=0.25)
    s2.add_argument("--directions", type=int, default=24)
    s2.add_argument("--seed", type=int, default=0)
    s2.set_defaults(func=cmd_solve_domain)

    s3 = sub.add_parser("solve-surface")
    s3.add_argument("--surface", default="bolza")
    s3.add_argument("--range", dest="range", nargs=2, type=float,
                    default=[0.0, 40.0])
    s3.add_argument("--step", type=float, default=0.05)
    s3.add_argument("--modes", type=int, default=24)
    s3.add_argument("--tol-lam", dest="tol_lam", type=float, default=1e-8)
    s3.add_argument("--tau", type=float, default=1e-12)
    s3.add_argument("--density", type=float, default=0.0)
    s3.add_argument("--csv-name", dest="csv_name",
                    default="surface_eigenvalues.csv")
    s3.set_defaults(func=cmd_solve_surface)

    s4 = sub.add_parser("length-spectrum")
    s4.add_argument("--l-max", dest="l_max", type=float, default=8.0)
    s4.set_defaults(func=cmd_length_spectrum)

    def spectral_args(sp):
        sp.add_argument("--eigenvalues", required=True)
        sp.add_argument("--lengths", required=True)
        sp.add_argument("--volume", type=float, default=4.0 * math.pi)

    s5 = sub.add_parser("zeta")
    spectral_args(s5)
    s5.add_argument("--s", type=float, required=True)
    s5.add_argument("--eps", type=float, default=0.1)
    s5.add_argument("--n-heat", dest="n_heat", type=int, default=8)
    s5.set_defaults(func=cmd_zeta)

    s6 = sub.add_parser("det")
    spectral_args(s6)
    s6.add_argument("--eps", type=float, default=0.1)
    s6.set_defaults(func=cmd_det)

    s7 = sub.add_parser("verify-heat")
    spectral_args(s7)
    s7.add_argument("--t", type=float, default=0.095)
    s7.add_argument("--T", type=float, default=2.0)
    s7.add_argument("--t-range", dest="t_range", nargs=2, type=float,
                    default=[0.05, 0.3])
    s7.add_argument("--t-samples", dest="t_samples", type=int, default=26)
    s7.set_defaults(func=cmd_verify_heat)

    s8 = sub.add_parser("verify-riesz")
    spectral_args(s8)
    s8.add_argument("--t-range", dest="t_range", nargs=2, type=float,
                    default=[8.0, 14.0])
    s8.add_argument("--t-samples", dest="t_samples", type=int, default=121)
    s8.set_defaults(func=cmd_verify_riesz)

    for sp in (s1, s2, s3, s4, s5, s6, s7, s8):
        sp.add_argument("--outdir", default="hypspec_out")
        sp.add_argument("--threads", type=int, default=1)
    return p


_CONFIG_KEYS = {
    "potential", "coeffs", "half_width", "range", "step", "domain", "radius",
    "a", "b", "directions", "seed", "surface", "modes", "tol_lam", "tau",
    "density", "csv_name", "l_max", "eigenvalues", "lengths", "volume", "s",
    "eps", "n_heat", "t", "T", "t_range", "t_samples", "outdir", "threads",
}


def _apply_config(args, parser):
    if not args.config:
        return
    cfg = json.loads(Path(args.config).read_text())
    unknown = set(cfg) - _CONFIG_KEYS
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    # flags explicitly given on the command line win; detect via sentinel
    # re-parse: config supplies defaults only for untouched attributes
    for key, value in cfg.items():
        if hasattr(args, key):
            default = parser.get_default(key)
            if getattr(args, key) == default:
                setattr(args, key, value)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, parser)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        return _fail(1, f"config error: {exc}")
    # normalize range arguments
    if hasattr(args, "range") and args.range is not None:
        args.lam_lo, args.lam_hi = args.range
    if hasattr(args, "t_range") and args.t_range is not None:
        args.t_lo, args.t_hi = args.t_range
    t0 = time.time()
    try:
        code = args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        return _fail(1, f"configuration error: {exc}")
    except (RuntimeError, ZeroDivisionError, np.linalg.LinAlgError) as exc:
        return _fail(2, f"numerical failure: {exc}")
    if code == 0:
        out = Path(args.outdir)
        out.mkdir(parents=True, exist_ok=True)
        params = {
            k: v for k, v in vars(args).items()
            if k not in ("func", "config") and not callable(v)
        }
        _write_manifest(out, args.command, params, t0)
    return code


if __name__ == "__main__":
    sys.exit(main())
