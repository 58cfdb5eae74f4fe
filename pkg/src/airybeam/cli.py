"""Command-line front end.

Subcommands: total-current, density-profile, detector-image, atom-laser,
transition, validate.  Deterministic CSV/PGM outputs; every dimensioned
flag takes a strict unit suffix (``300ueV``, ``2.5kHz``, ``0.4um``,
``20ms``, ``423eV/m``) -- bare numbers are rejected so nobody ever guesses
a unit.  Flags may also be read from a JSON config file with identical key
names; an ``AIRYBEAM_OUTDIR`` environment variable sets the default output
directory.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys as _sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, RangeError, UnsupportedModelError
from .green import green_closed, green_oracle
from .output import ScanResult, write_csv, write_json, write_pgm
from .scaling import (HBAR, energy_from_ev, energy_from_frequency, make_system)
from .scenarios import (AtomLaserPreset, atom_laser_depletion,
                        current_transition_scan, detector_image, o_minus,
                        photodetachment_cross_section, rb_atom_laser, s_minus)
from .sources import (GaussianSource, current_density_gauss,
                      current_density_point, gaussian_scaled, sum_rule_check,
                      total_current_gauss, total_current_point)

_UNIT_RE = re.compile(r"^\s*([+-]?[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*([^\s0-9][^\s]*)\s*$")

_ENERGY = {"neV": 1e-9, "ueV": 1e-6, "meV": 1e-3, "eV": 1.0}
_LENGTH = {"nm": 1e-9, "um": 1e-6, "mm": 1e-3, "cm": 1e-2, "m": 1.0}
_TIME = {"ns": 1e-9, "us": 1e-6, "ms": 1e-3, "s": 1.0}
_FREQ = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6}


def _parse_with_units(text: str, kind: str) -> float:
    m = _UNIT_RE.match(text)
    if not m:
        raise argparse.ArgumentTypeError(
            f"{kind} value {text!r} needs a unit suffix (bare numbers are rejected)"
        )
    value = float(m.group(1))
    unit = m.group(2)
    if kind == "energy":
        if unit == "J":
            return value
        if unit in _ENERGY:
            return energy_from_ev(value * _ENERGY[unit])
        if unit in _FREQ:                     # E = 2*pi*hbar*nu
            return energy_from_frequency(value * _FREQ[unit])
    elif kind == "length" and unit in _LENGTH:
        return value * _LENGTH[unit]
    elif kind == "time" and unit in _TIME:
        return value * _TIME[unit]
    elif kind == "frequency" and unit in _FREQ:
        return value * _FREQ[unit]
    elif kind == "field" and unit in ("eV/m", "V/m"):
        return value                          # eV/m per unit charge; presets convert
    raise argparse.ArgumentTypeError(f"unknown {kind} unit {unit!r} in {text!r}")


def _energy(text):
    return _parse_with_units(text, "energy")


def _length(text):
    return _parse_with_units(text, "length")


def _time(text):
    return _parse_with_units(text, "time")


def _frequency(text):
    return _parse_with_units(text, "frequency")


def _field(text):
    return _parse_with_units(text, "field")


def _widths_list(text: str) -> list[float]:
    return [_length(part) for part in text.split(",") if part]


_PRESETS = {
    "s-minus": s_minus,
    "o-minus": o_minus,
    "rb-atom-laser": rb_atom_laser,
}


def _out_path(args, suffix: str = "") -> str:
    path = args.output
    if suffix:
        root, ext = os.path.splitext(path)
        path = f"{root}{suffix}{ext}"
    outdir = os.environ.get("AIRYBEAM_OUTDIR")
    if outdir and not os.path.isabs(path):
        path = os.path.join(outdir, path)
    return path


def _apply_preset_overrides(preset, args):
    import dataclasses
    changes = {}
    if isinstance(preset, AtomLaserPreset):
        if getattr(args, "width", None) is not None:
            changes["width"] = args.width
        if getattr(args, "omega", None) is not None:
            changes["coupling"] = 2.0 * math.pi * args.omega
        if getattr(args, "time", None) is not None:
            changes["operation_time"] = args.time
        if getattr(args, "n0", None) is not None:
            changes["atom_count"] = args.n0
        if getattr(args, "z", None) is not None:
            changes["profile_z"] = args.z
        if getattr(args, "nu", None) is not None:
            changes["profile_nu"] = args.nu
    else:
        if getattr(args, "field", None) is not None:
            changes["field_ev_per_m"] = args.field
        if getattr(args, "z", None) is not None:
            changes["detector_z"] = args.z
        if getattr(args, "energy", None) is not None:
            changes["energy"] = args.energy
        if getattr(args, "strength2", None) is not None:
            changes["strength2"] = args.strength2
    return dataclasses.replace(preset, **changes) if changes else preset


def _grid(lo: float, hi: float, n: int) -> np.ndarray:
    if n < 2:
        raise DomainError(f"grid needs at least 2 points, got {n}")
    if not lo < hi:
        raise DomainError(f"grid minimum {lo} must be below maximum {hi}")
    return np.linspace(lo, hi, n)


def _provenance(args) -> dict:
    """Resolved flag values, recorded so any output can be re-run exactly.

    Execution details that cannot change the numbers (thread cap, output
    location) stay out so reruns remain byte-identical.
    """
    skip = {"fn", "output", "config", "threads"}
    out = {"command": args.command}
    for key, val in vars(args).items():
        if key in skip or key == "command" or val is None:
            continue
        if isinstance(val, (list, tuple)):
            val = ",".join(format(v, ".17g") for v in val)
        out[f"arg_{key}"] = val
    return out


def _read_overlay(path) -> tuple[np.ndarray, np.ndarray]:
    """Two-column user CSV (abscissa,value), '#' comments ignored."""
    xs, ys = [], []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, b = line.split(",")[:2]
            xs.append(float(a))
            ys.append(float(b))
    order = np.argsort(xs)
    return np.asarray(xs)[order], np.asarray(ys)[order]


def _write_overlay_pair(args, model_fn) -> None:
    """Echo user-supplied points and the model sampled at their abscissa.

    No experimental data ships with the package; this simply lets users lay
    their own measurements alongside the prediction.
    """
    if getattr(args, "overlay", None) is None:
        return
    xs, ys = _read_overlay(args.overlay)
    meta = _provenance(args)
    _write_scan(ScanResult(xs, ys, "abscissa", "user_data", meta), args,
                suffix="_overlay_data")
    model = np.array([model_fn(x) for x in xs])
    _write_scan(ScanResult(xs, model, "abscissa", "model", meta), args,
                suffix="_overlay_model")


def _parallel_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))   # ordered regardless of schedule


# ----------------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------------

def _cmd_total_current(args) -> int:
    preset = _apply_preset_overrides(_PRESETS[args.preset](), args)
    summary = ""
    if isinstance(preset, AtomLaserPreset):
        nus = _grid(args.numin if args.numin is not None else preset.detuning_min,
                    args.numax if args.numax is not None else preset.detuning_max,
                    args.n)
        sys_ = preset.system
        src = preset.source
        model = lambda nu: total_current_gauss(sys_, src, energy_from_frequency(nu))
        j = _parallel_map(model, nus, args.threads)
        meta = dict(_provenance(args), preset=args.preset, width_m=preset.width,
                    coupling_rad_per_s=preset.coupling, beta=sys_.beta,
                    alpha=sys_.beta_f * preset.width)
        result = ScanResult(nus, np.array(j), "nu_Hz", "current_per_s", meta)
        lhs, rhs = sum_rule_check(
            sys_, src, (energy_from_frequency(nus[-1]),
                        energy_from_frequency(nus[0])))
        summary = f", sum-rule ratio {lhs / rhs:.6f}"
    else:
        emin = args.emin if args.emin is not None else preset.scan_min
        emax = args.emax if args.emax is not None else preset.scan_max
        energies = _grid(emin, emax, args.n)
        sys_ = preset.system
        src = preset.source
        model = lambda e: total_current_point(sys_, src, e)
        result = photodetachment_cross_section(preset, energies)
        result = ScanResult(result.abscissa, result.values, result.xlabel,
                            result.ylabel, dict(result.meta, **_provenance(args)))
    _write_scan(result, args)
    _write_overlay_pair(args, model)
    ipk = int(np.argmax(result.values))
    print(f"total-current: {len(result.values)} points, peak value "
          f"{result.values[ipk]:.6g} at {result.abscissa[ipk]:.6g} "
          f"{result.xlabel}{summary} -> {_out_path(args)}")
    return 0


def _cmd_density_profile(args) -> int:
    preset = _apply_preset_overrides(_PRESETS[args.preset](), args)
    half_width = args.half_width
    if half_width is None:
        from .scenarios import _classical_radius
        if isinstance(preset, AtomLaserPreset):
            e0 = energy_from_frequency(preset.profile_nu)
            z0 = preset.profile_z
        else:
            e0, z0 = preset.energy, preset.detector_z
        sys0 = preset.system
        half_width = 1.15 * _classical_radius(sys0, e0, z0) + 2.0 / sys0.beta_f
    xs = _grid(-half_width, half_width, args.n)
    if isinstance(preset, AtomLaserPreset):
        sys_ = preset.system
        src = preset.source
        energy = energy_from_frequency(preset.profile_nu)
        z = preset.profile_z
        fn = lambda x: current_density_gauss(sys_, src, (x, 0.0, z), energy)
        g = gaussian_scaled(sys_, src, energy)
        meta = dict(_provenance(args), preset=args.preset, width_m=preset.width,
                    z_m=z, nu_Hz=preset.profile_nu, beta=sys_.beta,
                    alpha=g.alpha, epsilon_tilde=g.epsilon_tilde,
                    half_width_m=half_width)
    else:
        sys_ = preset.system
        src = preset.source
        energy = preset.energy
        z = preset.detector_z
        fn = lambda x: current_density_point(sys_, src, (x, 0.0, z), energy)
        meta = dict(_provenance(args), preset=args.preset, energy_J=energy,
                    z_m=z, beta=sys_.beta,
                    epsilon=-2.0 * sys_.beta * energy,
                    zeta=sys_.beta_f * z, half_width_m=half_width)
    j = _parallel_map(fn, xs, args.threads)
    result = ScanResult(xs, np.array(j), "x_m", "j_z", meta)
    _write_scan(result, args)
    print(f"density-profile: peak j_z = {max(j):.6g} -> {_out_path(args)}")
    return 0


def _cmd_detector_image(args) -> int:
    preset = _apply_preset_overrides(_PRESETS[args.preset](), args)
    image = detector_image(preset, half_width=args.half_width, resolution=args.n)
    path = _out_path(args)
    if args.format == "json":
        doc = {"pixels": image.pixels.tolist(), "half_width_m": image.half_width,
               "meta": {k: image.meta[k] for k in sorted(image.meta)}}
        with open(path, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
            fh.write("\n")
    else:
        write_pgm(image, path)
    print(f"detector-image: {args.n}x{args.n} pixels, half-width "
          f"{image.half_width:.6g} m, peak {image.peak:.6g} -> {path}")
    return 0


def _cmd_atom_laser(args) -> int:
    preset = _apply_preset_overrides(_PRESETS[args.preset](), args)
    nus = _grid(args.numin if args.numin is not None else preset.detuning_min,
                args.numax if args.numax is not None else preset.detuning_max,
                args.n)
    curve = atom_laser_depletion(preset, nus)
    detunings = -curve.detunings[::-1] if args.flip_detuning else curve.detunings
    fractions = curve.fractions[::-1] if args.flip_detuning else curve.fractions
    counts = fractions * preset.atom_count
    meta = dict(curve.meta, **_provenance(args), preset=args.preset,
                beta=preset.system.beta,
                alpha=preset.system.beta_f * preset.width)
    result = ScanResult(detunings, counts, "nu_Hz", "atoms_remaining", meta)
    _write_scan(result, args)
    sys_ = preset.system
    src = preset.source

    def fraction_model(nu):
        j = total_current_gauss(sys_, src,
                                energy_from_frequency(-nu if args.flip_detuning
                                                      else nu))
        return math.exp(-j * preset.operation_time) * preset.atom_count

    _write_overlay_pair(args, fraction_model)
    # the detuning origin convention differs between setups: report where
    # the exact current peaks and where the slicing resonance (eps = 0) sits
    j_grid = [total_current_gauss(sys_, src, energy_from_frequency(nu))
              for nu in nus]
    nu_peak = nus[int(np.argmax(j_grid))]
    sign = -1.0 if args.flip_detuning else 1.0
    imin = int(np.argmin(counts))
    print(f"atom-laser: deepest depletion {counts[imin]:.6g} at "
          f"nu = {detunings[imin]:.6g} Hz; exact-current peak at "
          f"nu = {sign * nu_peak:.6g} Hz, slicing peak at nu = 0 Hz "
          f"-> {_out_path(args)}")
    return 0


def _cmd_transition(args) -> int:
    preset = _apply_preset_overrides(_PRESETS[args.preset](), args)
    nus = _grid(args.numin if args.numin is not None else preset.detuning_min,
                args.numax if args.numax is not None else preset.detuning_max,
                args.n)
    curves = current_transition_scan(preset, args.widths, nus)
    areas = []
    for c in curves:
        tag = f"_a{c.width*1e6:g}um"
        _write_scan(c.exact, args, suffix=f"{tag}_exact")
        _write_scan(c.slicing, args, suffix=f"{tag}_slicing")
        areas.append(c.area)
    rhs = 2.0 * math.pi * HBAR * preset.coupling**2
    spread = (max(areas) - min(areas)) / rhs
    print(f"transition: {len(curves)} widths, sum-rule area ratios = "
          + ", ".join(f"{a/rhs:.6f}" for a in areas)
          + f" (spread {spread:.2e}) -> {_out_path(args)}")
    return 0


def _cmd_validate(args) -> int:
    failures = 0
    if args.suite in ("all", "sum-rule"):
        preset = rb_atom_laser()
        sys_ = preset.system
        for a_um in (0.2, 0.5, 1.0, 2.8):
            src = GaussianSource(a_um * 1e-6, preset.coupling)
            lo = energy_from_frequency(preset.detuning_min)
            hi = energy_from_frequency(preset.detuning_max)
            lhs, rhs = sum_rule_check(sys_, src, (min(lo, hi), max(lo, hi)))
            ok = abs(lhs / rhs - 1.0) <= 5e-3
            failures += not ok
            print(f"[{'ok' if ok else 'FAIL'}] sum-rule a={a_um}um: "
                  f"ratio = {lhs/rhs:.8f}")
    if args.suite in ("all", "oracle"):
        sys_ = make_system(4.0, 1.0, 1.0)
        rng = np.random.default_rng(20240501)
        worst = 0.0
        n = 0
        while n < 20:
            rho = rng.uniform(0.1, 10.0)
            u = rng.uniform(-10.0, 10.0)
            costh = rng.uniform(-1.0, 1.0)
            phi = rng.uniform(0.0, 2.0 * math.pi)
            sth = math.sqrt(1.0 - costh**2)
            r = (rho * sth * math.cos(phi), rho * sth * math.sin(phi), rho * costh)
            energy = -(r[2] - u) / 2.0
            gc = green_closed(sys_, r, (0.0, 0.0, 0.0), energy)
            if abs(gc.scaled) < 1e-3:
                continue    # beneath the oracle's absolute-noise floor
            go = green_oracle(sys_, r, (0.0, 0.0, 0.0), energy, eta=0.05)
            worst = max(worst, abs(gc.scaled - go.scaled) / abs(gc.scaled))
            n += 1
        ok = worst <= 1e-6
        failures += not ok
        print(f"[{'ok' if ok else 'FAIL'}] oracle agreement: worst rel {worst:.3e}")
    if args.suite in ("all", "flux"):
        from scipy.integrate import quad
        o = o_minus()
        sys_ = o.system
        src = o.source
        energy = o.energy
        j_total = total_current_point(sys_, src, energy)
        eps = -2.0 * sys_.beta * energy
        for z in (0.35, 0.514):
            zeta = sys_.beta_f * z
            r_max = math.sqrt((12.0 - eps + zeta) ** 2 - zeta**2) / sys_.beta_f
            flux, _ = quad(
                lambda R: current_density_point(sys_, src, (R, 0.0, z), energy)
                * 2.0 * math.pi * R,
                0.0, r_max, limit=2000, epsrel=1e-10)
            ok = abs(flux / j_total - 1.0) <= 1e-3
            failures += not ok
            print(f"[{'ok' if ok else 'FAIL'}] flux conservation z={z} m: "
                  f"ratio = {flux/j_total:.8f}")
    print(f"validate: {'all checks passed' if failures == 0 else f'{failures} check(s) FAILED'}")
    return 0 if failures == 0 else 1


def _write_scan(result: ScanResult, args, suffix: str = "") -> None:
    path = _out_path(args, suffix)
    if getattr(args, "format", "csv") == "json":
        write_json(result, path)
    else:
        write_csv(result, path)


# ----------------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------------

def _add_common(p, fmt_choices=("csv", "json")):
    p.add_argument("-o", "--output", required=True, help="output file path")
    p.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])
    p.add_argument("--threads", type=int, default=1,
                   help="cap on parallel grid evaluation")
    p.add_argument("--config", type=str, default=None,
                   help="JSON file with flag values (identical key names)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="airybeam",
        description="Matter waves from quantum sources in a uniform force field",
    )
    ap.add_argument("--version", action="version", version=f"airybeam {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("total-current", help="total current J over an energy/detuning scan")
    _add_common(p)
    p.add_argument("--preset", choices=sorted(_PRESETS), default="s-minus")
    p.add_argument("--emin", type=_energy, default=None, help="e.g. -50ueV")
    p.add_argument("--emax", type=_energy, default=None, help="e.g. 300ueV")
    p.add_argument("--numin", type=_frequency, default=None, help="e.g. -15kHz")
    p.add_argument("--numax", type=_frequency, default=None, help="e.g. 15kHz")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--field", type=_field, default=None, help="e.g. 423eV/m")
    p.add_argument("--strength2", type=float, default=None, help="|C|^2 scale")
    p.add_argument("--width", type=_length, default=None, help="e.g. 2.8um")
    p.add_argument("--omega", type=_frequency, default=None,
                   help="coupling Omega/(2 pi), e.g. 105.585Hz")
    p.add_argument("--overlay", type=str, default=None,
                   help="user CSV of measured points to emit alongside the model")
    p.set_defaults(fn=_cmd_total_current)

    p = sub.add_parser("density-profile", help="lateral current-density profile")
    _add_common(p)
    p.add_argument("--preset", choices=sorted(_PRESETS), default="o-minus")
    p.add_argument("--energy", type=_energy, default=None, help="e.g. 100.5ueV")
    p.add_argument("--nu", type=_frequency, default=None, help="e.g. 2.5kHz")
    p.add_argument("--z", type=_length, default=None, help="e.g. 0.514m or 1mm")
    p.add_argument("--half-width", type=_length, default=None, help="e.g. 1.2mm")
    p.add_argument("--n", type=int, default=1201)
    p.add_argument("--field", type=_field, default=None)
    p.add_argument("--strength2", type=float, default=None)
    p.add_argument("--width", type=_length, default=None)
    p.add_argument("--omega", type=_frequency, default=None)
    p.set_defaults(fn=_cmd_density_profile)

    p = sub.add_parser("detector-image", help="square raster of j_z on the detector plane")
    _add_common(p, fmt_choices=("pgm", "json"))
    p.add_argument("--preset", choices=sorted(_PRESETS), default="o-minus")
    p.add_argument("--energy", type=_energy, default=None)
    p.add_argument("--nu", type=_frequency, default=None)
    p.add_argument("--z", type=_length, default=None)
    p.add_argument("--half-width", type=_length, default=None)
    p.add_argument("--n", type=int, default=512, help="resolution (pixels per side)")
    p.add_argument("--field", type=_field, default=None)
    p.add_argument("--strength2", type=float, default=None)
    p.add_argument("--width", type=_length, default=None)
    p.add_argument("--omega", type=_frequency, default=None)
    p.set_defaults(fn=_cmd_detector_image)

    p = sub.add_parser("atom-laser", help="remaining-atom depletion curve N(T)")
    _add_common(p)
    p.add_argument("--preset", choices=("rb-atom-laser",), default="rb-atom-laser")
    p.add_argument("--width", type=_length, default=None, help="e.g. 2.8um")
    p.add_argument("--omega", type=_frequency, default=None, help="e.g. 105.585Hz")
    p.add_argument("--time", type=_time, default=None, help="e.g. 20ms")
    p.add_argument("--numin", type=_frequency, default=None)
    p.add_argument("--numax", type=_frequency, default=None)
    p.add_argument("--n", type=int, default=601)
    p.add_argument("--n0", type=float, default=None, help="initial atom count")
    p.add_argument("--flip-detuning", action="store_true",
                   help="mirror the detuning axis (sign convention is not universal)")
    p.add_argument("--overlay", type=str, default=None,
                   help="user CSV of measured points to emit alongside the model")
    p.set_defaults(fn=_cmd_atom_laser)

    p = sub.add_parser("transition", help="exact vs slicing currents across source widths")
    _add_common(p)
    p.add_argument("--preset", choices=("rb-atom-laser",), default="rb-atom-laser")
    p.add_argument("--widths", type=_widths_list, default=[2e-7, 4e-7, 1e-6, 2.8e-6],
                   help="comma list, e.g. 0.2um,0.4um,1um,2.8um")
    p.add_argument("--omega", type=_frequency, default=100.0)
    p.add_argument("--numin", type=_frequency, default=None)
    p.add_argument("--numax", type=_frequency, default=None)
    p.add_argument("--n", type=int, default=801)
    p.set_defaults(fn=_cmd_transition)

    p = sub.add_parser("validate", help="run the numerical validation suites")
    p.add_argument("--suite", choices=("all", "sum-rule", "oracle", "flux"),
                   default="all")
    p.set_defaults(fn=_cmd_validate)

    # let negative unit-suffixed values ("-50ueV") pass as option arguments
    negative_value = re.compile(r"^-\d")
    ap._negative_number_matcher = negative_value
    for sp in sub.choices.values():
        sp._negative_number_matcher = negative_value
    return ap


def _merge_config(args, parser):
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        for key, val in cfg.items():
            attr = key.replace("-", "_")
            if not hasattr(args, attr):
                parser.error(f"config key {key!r} is not a flag of this subcommand")
            setattr(args, attr, val)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args = _merge_config(args, parser)
    try:
        return args.fn(args)
    except (ConvergenceError, RangeError) as exc:
        est = getattr(exc, "estimate", None)
        detail = f" (error estimate {est:.3e})" if est is not None else ""
        print(f"airybeam: numerical failure: {exc}{detail}", file=_sys.stderr)
        return 1
    except (DomainError, UnsupportedModelError, OSError) as exc:
        print(f"airybeam: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
