"""Physical constants, unit conversion, and the dimensionless parameter set.

All internal computation in this package runs in the dimensionless variables

    xi = beta*F*x,  nu_y = beta*F*y,  zeta = beta*F*z,
    epsilon = -2*beta*E,  tau = t/(2*hbar*beta),

with beta = (m / (4 hbar^2 F^2))^(1/3).  SI values appear only at the API
boundary; beta*F is the inverse length scale and 2*beta the inverse energy
scale.  Note the sign convention: epsilon < 0 corresponds to positive
physical energy E > 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "HBAR", "ELECTRON_MASS", "RB87_MASS", "ELEMENTARY_CHARGE", "G_EARTH",
    "PhysicalSystem", "ScaledPoint", "ScaledEnergy", "ScaledTime",
    "make_system", "scale_point", "scale_energy", "scale_time",
    "energy_from_ev", "energy_from_frequency", "force_from_ev_per_m",
]

# CODATA-2018 values; g rounded to the conventional 9.81 m/s^2
HBAR = 1.054571817e-34            # J s
ELECTRON_MASS = 9.1093837015e-31  # kg
ELEMENTARY_CHARGE = 1.602176634e-19  # C
RB87_MASS = 86.909180531 * 1.66053906660e-27  # kg
G_EARTH = 9.81                    # m/s^2


@dataclass(frozen=True)
class PhysicalSystem:
    """A particle of mass m in a uniform force of magnitude F along +z.

    Owns the scaling constant beta and every SI <-> dimensionless
    conversion.  Immutable; all methods are pure.
    """

    mass: float      # kg
    force: float     # N, magnitude along +z ("downstream" = increasing z)
    hbar: float      # J s

    @property
    def beta(self) -> float:
        return (self.mass / (4.0 * self.hbar**2 * self.force**2)) ** (1.0 / 3.0)

    @property
    def beta_f(self) -> float:
        """Inverse length scale beta*F (1/m)."""
        return self.beta * self.force

    def scale_length(self, x: float) -> float:
        return self.beta_f * x

    def unscale_length(self, xi: float) -> float:
        return xi / self.beta_f

    def scale_energy(self, energy: float) -> "ScaledEnergy":
        return ScaledEnergy(-2.0 * self.beta * energy)

    def unscale_energy(self, eps: "ScaledEnergy | float") -> float:
        e = eps.epsilon if isinstance(eps, ScaledEnergy) else eps
        return -e / (2.0 * self.beta)

    def scale_point(self, r) -> "ScaledPoint":
        x, y, z = (float(c) for c in r)
        bf = self.beta_f
        return ScaledPoint(bf * x, bf * y, bf * z)

    def unscale_point(self, p: "ScaledPoint") -> tuple[float, float, float]:
        bf = self.beta_f
        return (p.xi / bf, p.nu_y / bf, p.zeta / bf)

    def scale_time(self, t: float) -> "ScaledTime":
        return ScaledTime(t / (2.0 * self.hbar * self.beta))

    def unscale_time(self, tau: "ScaledTime | float") -> float:
        tv = tau.tau if isinstance(tau, ScaledTime) else tau
        return tv * 2.0 * self.hbar * self.beta


@dataclass(frozen=True)
class ScaledPoint:
    """Dimensionless coordinates (xi, nu_y, zeta); rho is the scaled radius."""

    xi: float
    nu_y: float
    zeta: float

    @property
    def rho(self) -> float:
        return math.sqrt(self.xi**2 + self.nu_y**2 + self.zeta**2)


@dataclass(frozen=True)
class ScaledEnergy:
    """epsilon = -2*beta*E; negative for positive physical energy."""

    epsilon: float


@dataclass(frozen=True)
class ScaledTime:
    """tau = t / (2*hbar*beta); forward propagation means tau >= 0."""

    tau: float


def make_system(mass: float, force: float, hbar: float = HBAR) -> PhysicalSystem:
    """Build a PhysicalSystem, validating strict positivity of every input."""
    for name, val in (("mass", mass), ("force", force), ("hbar", hbar)):
        if not (val > 0.0 and math.isfinite(val)):
            raise DomainError(f"make_system: {name} must be positive and finite, got {val}")
    return PhysicalSystem(mass=float(mass), force=float(force), hbar=float(hbar))


def scale_point(sys: PhysicalSystem, r) -> ScaledPoint:
    return sys.scale_point(r)


def scale_energy(sys: PhysicalSystem, energy: float) -> ScaledEnergy:
    return sys.scale_energy(energy)


def scale_time(sys: PhysicalSystem, t: float) -> ScaledTime:
    return sys.scale_time(t)


def energy_from_ev(value_ev: float) -> float:
    """Energy in J from a value in eV."""
    return value_ev * ELEMENTARY_CHARGE


def energy_from_frequency(nu_hz: float, hbar: float = HBAR) -> float:
    """Energy E = 2*pi*hbar*nu of a particle released at detuning nu."""
    return 2.0 * math.pi * hbar * nu_hz


def force_from_ev_per_m(field_ev_per_m: float) -> float:
    """Electric force magnitude (N) on a unit charge from a field in eV/m."""
    return field_ev_per_m * ELEMENTARY_CHARGE
