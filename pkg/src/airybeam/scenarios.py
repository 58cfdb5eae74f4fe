"""Physics presets and derived observables for the two applications.

* Photodetachment of negative ions in a static electric field: the point
  source model.  Presets carry the published field strengths (S^-:
  F = 2.205e4 eV/m; O^-: F = 423 eV/m with a detector 0.514 m downstream
  and E = 100.5 ueV).
* The gravity-driven atom laser: a Gaussian source of Rb-87 released at a
  detuning-controlled energy E = 2*pi*hbar*nu, observed either as the
  condensate depletion N(T)/N(0) = exp(-J T) or as beam profiles 1 mm
  below the source.

Absolute point-source currents carry the arbitrary |C|^2 normalization;
these presets default it to 1 and expose it as a plain scale factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DomainError
from .output import RasterImage, ScanResult
from .scaling import (ELECTRON_MASS, G_EARTH, RB87_MASS, PhysicalSystem,
                      energy_from_ev, energy_from_frequency, force_from_ev_per_m,
                      make_system)
from .sources import (GaussianSource, PointSource, current_density_gauss,
                      current_density_point, sum_rule_check, total_current_gauss,
                      total_current_point, total_current_slicing)

__all__ = [
    "PhotodetachmentPreset", "AtomLaserPreset", "DepletionCurve",
    "TransitionCurves", "s_minus", "o_minus", "rb_atom_laser",
    "photodetachment_cross_section", "detector_image", "atom_laser_depletion",
    "beam_profile_family", "current_transition_scan",
]


@dataclass(frozen=True)
class PhotodetachmentPreset:
    """A near-threshold photodetachment setup (point source in an E field)."""

    species: str
    field_ev_per_m: float
    detector_z: float              # m
    energy: float                  # J, default image/profile energy
    scan_min: float                # J
    scan_max: float                # J
    mass: float = ELECTRON_MASS
    strength2: float = 1.0         # |C|^2 overall scale

    def __post_init__(self):
        if not self.field_ev_per_m > 0.0:
            raise DomainError("PhotodetachmentPreset: field must be > 0")
        if not self.detector_z > 0.0:
            raise DomainError("PhotodetachmentPreset: detector distance must be > 0")

    @property
    def system(self) -> PhysicalSystem:
        return make_system(self.mass, force_from_ev_per_m(self.field_ev_per_m))

    @property
    def source(self) -> PointSource:
        return PointSource(math.sqrt(self.strength2))


@dataclass(frozen=True)
class AtomLaserPreset:
    """A continuously outcoupled Bose-Einstein condensate under gravity."""

    width: float                   # condensate width a (m)
    coupling: float                # Omega (rad/s)
    operation_time: float          # T (s)
    detuning_min: float            # Hz
    detuning_max: float            # Hz
    profile_z: float = 1.0e-3      # m below the source
    profile_nu: float = 2.5e3      # Hz, beam-profile detuning
    atom_count: float = 1.0        # N(0); fractions reported by default
    mass: float = RB87_MASS
    gravity: float = G_EARTH

    def __post_init__(self):
        for name in ("width", "coupling", "profile_z", "atom_count",
                     "mass", "gravity"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"AtomLaserPreset: {name} must be > 0")
        if self.operation_time < 0.0:
            raise DomainError("AtomLaserPreset: operation_time must be >= 0")

    @property
    def system(self) -> PhysicalSystem:
        return make_system(self.mass, self.mass * self.gravity)

    @property
    def source(self) -> GaussianSource:
        return GaussianSource(self.width, self.coupling)


@dataclass(frozen=True)
class DepletionCurve:
    """Remaining condensate fraction N(T)/N(0) = exp(-J T) per detuning."""

    detunings: np.ndarray          # Hz
    fractions: np.ndarray          # in (0, 1]
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TransitionCurves:
    """Exact and slicing total-current curves for one source width."""

    width: float
    exact: ScanResult
    slicing: ScanResult
    area: float                    # full energy integral of the exact curve


def s_minus() -> PhotodetachmentPreset:
    """S^- photodetachment at F = 2.205e4 eV/m (total-current staircase)."""
    return PhotodetachmentPreset(
        species="S-",
        field_ev_per_m=2.205e4,
        detector_z=0.514,
        energy=energy_from_ev(100e-6),
        scan_min=energy_from_ev(-50e-6),
        scan_max=energy_from_ev(300e-6),
    )


def o_minus() -> PhotodetachmentPreset:
    """O^- photodetachment at F = 423 eV/m (detector ring pattern)."""
    return PhotodetachmentPreset(
        species="O-",
        field_ev_per_m=423.0,
        detector_z=0.514,
        energy=energy_from_ev(100.5e-6),
        scan_min=energy_from_ev(-20e-6),
        scan_max=energy_from_ev(300e-6),
    )


def rb_atom_laser() -> AtomLaserPreset:
    """Rb-87 atom laser: a = 2.8 um, Omega = 2*pi*105.585 Hz, T = 20 ms."""
    return AtomLaserPreset(
        width=2.8e-6,
        coupling=2.0 * math.pi * 105.585,
        operation_time=20e-3,
        detuning_min=-15e3,
        detuning_max=15e3,
    )


def photodetachment_cross_section(
    preset: PhotodetachmentPreset, energies
) -> ScanResult:
    """Total current J(E) over an energy grid, |C|^2-scaled."""
    sys = preset.system
    src = preset.source
    energies = np.asarray(energies, dtype=float)
    j = np.array([total_current_point(sys, src, e) for e in energies])
    meta = {
        "species": preset.species,
        "field_eV_per_m": preset.field_ev_per_m,
        "mass_kg": preset.mass,
        "strength2": preset.strength2,
        "beta": sys.beta,
    }
    return ScanResult(energies, j, xlabel="energy_J", ylabel="current_per_s", meta=meta)


def _radial_density(preset, energy: float, z: float):
    """Returns j_z(R) callable for either preset flavour."""
    if isinstance(preset, AtomLaserPreset):
        sys = preset.system
        src = preset.source
        return sys, lambda R: current_density_gauss(sys, src, (R, 0.0, z), energy)
    sys = preset.system
    src = preset.source
    return sys, lambda R: current_density_point(sys, src, (R, 0.0, z), energy)


def detector_image(
    preset,
    energy: float | None = None,
    z: float | None = None,
    half_width: float | None = None,
    resolution: int = 512,
) -> RasterImage:
    """Square raster of j_z on the detector plane.

    Rotational symmetry about the field axis is exact, so the image is
    computed on a dense 1-D radial grid and revolved.  ``half_width``
    defaults to just beyond the outermost classically allowed radius.
    """
    if resolution <= 0:
        raise DomainError(f"detector_image: resolution must be positive, got {resolution}")
    if isinstance(preset, AtomLaserPreset):
        energy = energy_from_frequency(preset.profile_nu) if energy is None else energy
        z = preset.profile_z if z is None else z
    else:
        energy = preset.energy if energy is None else energy
        z = preset.detector_z if z is None else z
    if z <= 0.0:
        raise DomainError("detector_image: detector plane must be downstream (z > 0)")
    sys, j_of_r = _radial_density(preset, energy, z)
    if half_width is None:
        half_width = 1.15 * _classical_radius(sys, energy, z) + 2.0 / sys.beta_f
    n_rad = max(4 * resolution, 1024)
    r_grid = np.linspace(0.0, half_width * math.sqrt(2.0) * 1.0001, n_rad)
    j_rad = np.array([j_of_r(R) for R in r_grid])
    j_rad = np.clip(j_rad, 0.0, None)   # clip FP noise at ring nulls
    centers = (np.arange(resolution) - (resolution - 1) / 2.0) * (
        2.0 * half_width / resolution
    )
    RR = np.hypot(centers[:, None], centers[None, :])
    img = np.interp(RR, r_grid, j_rad)
    meta = {
        "energy_J": energy,
        "z_m": z,
        "half_width_m": half_width,
        "resolution": resolution,
        "beta": sys.beta,
    }
    return RasterImage(img, half_width, meta=meta)


def _classical_radius(sys: PhysicalSystem, energy: float, z: float) -> float:
    """Outer radius of classically allowed arrivals, 2 sqrt(E(E+Fz))/F."""
    reach = energy * (energy + sys.force * z)
    if reach <= 0.0:
        return 0.0
    return 2.0 * math.sqrt(reach) / sys.force


def atom_laser_depletion(preset: AtomLaserPreset, detunings) -> DepletionCurve:
    """Remaining fraction exp(-J(2 pi hbar nu) T) per detuning."""
    sys = preset.system
    src = preset.source
    detunings = np.asarray(detunings, dtype=float)
    frac = np.array([
        math.exp(-total_current_gauss(sys, src, energy_from_frequency(nu))
                 * preset.operation_time)
        for nu in detunings
    ])
    meta = {
        "width_m": preset.width,
        "coupling_rad_per_s": preset.coupling,
        "operation_time_s": preset.operation_time,
        "atom_count": preset.atom_count,
    }
    return DepletionCurve(detunings, frac, meta=meta)


def beam_profile_family(
    preset: AtomLaserPreset, widths, nu: float | None = None,
    z: float | None = None, half_width: float = 120e-6, n: int = 1201,
) -> list[ScanResult]:
    """Lateral j_z(x, 0, z) profiles for a family of source widths."""
    nu = preset.profile_nu if nu is None else nu
    z = preset.profile_z if z is None else z
    energy = energy_from_frequency(nu)
    xs = np.linspace(-half_width, half_width, n)
    out = []
    for a in widths:
        if not a > 0.0:
            raise DomainError(f"beam_profile_family: width must be > 0, got {a}")
        p = replace(preset, width=float(a))
        sys = p.system
        src = p.source
        prof = np.array([
            current_density_gauss(sys, src, (x, 0.0, z), energy) for x in xs
        ])
        out.append(ScanResult(
            xs, prof, xlabel="x_m", ylabel="j_z",
            meta={"width_m": float(a), "nu_Hz": nu, "z_m": z,
                  "coupling_rad_per_s": preset.coupling},
        ))
    return out


def current_transition_scan(
    preset: AtomLaserPreset, widths, detunings
) -> list[TransitionCurves]:
    """Exact vs slicing J(nu) per width, with the full-integral area of each.

    The areas realize the sum rule: they are width-independent (equal to
    2 pi hbar Omega^2) even where the curve shapes differ completely.
    """
    detunings = np.asarray(detunings, dtype=float)
    energies = np.array([energy_from_frequency(nu) for nu in detunings])
    out = []
    for a in widths:
        if not a > 0.0:
            raise DomainError(f"current_transition_scan: width must be > 0, got {a}")
        p = replace(preset, width=float(a))
        sys = p.system
        src = p.source
        j = np.array([total_current_gauss(sys, src, e) for e in energies])
        jsp = np.array([total_current_slicing(sys, src, e) for e in energies])
        area, _ = sum_rule_check(sys, src, (energies.min(), energies.max()))
        meta = {"width_m": float(a), "coupling_rad_per_s": preset.coupling}
        out.append(TransitionCurves(
            width=float(a),
            exact=ScanResult(detunings, j, "nu_Hz", "current_per_s", meta),
            slicing=ScanResult(detunings, jsp, "nu_Hz", "current_per_s",
                               dict(meta, model="slicing")),
            area=area,
        ))
    return out
