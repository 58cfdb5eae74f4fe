"""Point and Gaussian quantum sources in a uniform force field.

A source sigma(r) added to the stationary Schrodinger equation emits the
scattering wave psi(r) = integral G(r,r';E) sigma(r') d3r'.  This module
provides the emitted wavefunctions, the current density j_z, the total
currents J(E) (exact, saddle-point/slicing, and quadrature reference), and
the sum-rule validation integral.

Gaussian-source quantities use the shifted dimensionless parameters

    alpha = beta*F*a,   zeta~ = zeta + 2 alpha^4,
    eps~  = eps + 4 alpha^4,  rho~^2 = xi^2 + nu_y^2 + zeta~^2,

under which the far field is exactly a point source displaced upstream by
2 alpha^4 (scaled) carrying the weight

    Lambda(eps~) = hbar*Omega*(2 sqrt(pi) a)^(3/2) * exp(2 alpha^2 (eps~ - 4 alpha^4/3)).

Exponential weights are combined in log space throughout: for wide sources
Lambda overflows while every physical observable stays moderate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.integrate import quad

from .airy import airy_all, airy_bracket_log, airy_scaled
from .errors import ConvergenceError, DomainError, RangeError, UnsupportedModelError
from .green import _bracket_scaled, _g_time_scaled, green_closed
from .scaling import PhysicalSystem

__all__ = [
    "PointSource", "GaussianSource", "SourceModel", "GaussianScaled",
    "gaussian_scaled", "source_amplitude", "equivalent_point_strength",
    "psi_point", "current_density_point", "total_current_point",
    "psi_gauss_far", "psi_gauss_near", "psi_gauss_quadrature",
    "current_density_gauss", "total_current_gauss", "total_current_slicing",
    "sum_rule_check", "virtual_source_shift",
]

_FAR_FIELD_HARD = 3.0   # rho~ < 3 alpha: far-field formulas invalid
_FAR_FIELD_SOFT = 5.0   # 3..5 alpha: usable with a warning


@dataclass(frozen=True)
class PointSource:
    """Idealized delta-function source sigma(r) = C * delta(r)."""

    strength: complex = 1.0   # C; |C|^2 acts as an overall fit parameter


@dataclass(frozen=True)
class GaussianSource:
    """Isotropic Gaussian source sigma(r) = hbar*Omega*N0*exp(-r^2/(2 a^2)).

    N0 = a^(-3/2) pi^(-3/4) normalizes the underlying bound state to one,
    so the squared source integrates to (hbar*Omega)^2.
    """

    width: float      # a (m)
    coupling: float   # Omega (rad/s)

    def __post_init__(self):
        if not self.width > 0.0:
            raise DomainError(f"GaussianSource: width must be > 0, got {self.width}")
        if not self.coupling > 0.0:
            raise DomainError(f"GaussianSource: coupling must be > 0, got {self.coupling}")


SourceModel = PointSource | GaussianSource


@dataclass(frozen=True)
class GaussianScaled:
    """Dimensionless view of a Gaussian source at one energy (and point).

    log_weight is ln Lambda(eps~); the weight itself overflows for wide
    sources, so only the log is stored.  zeta_tilde/rho_tilde are present
    when an evaluation point was supplied.
    """

    alpha: float
    epsilon_tilde: float
    log_weight: float
    zeta_tilde: float | None = None
    rho_tilde: float | None = None


def gaussian_scaled(
    sys: PhysicalSystem, src: GaussianSource, energy: float, r=None
) -> GaussianScaled:
    alpha = sys.beta_f * src.width
    eps = -2.0 * sys.beta * energy
    eps_t = eps + 4.0 * alpha**4
    log_w = (
        math.log(sys.hbar * src.coupling)
        + 1.5 * math.log(2.0 * math.sqrt(math.pi) * src.width)
        + 2.0 * alpha**2 * (eps_t - 4.0 * alpha**4 / 3.0)
    )
    if r is None:
        return GaussianScaled(alpha, eps_t, log_w)
    p = sys.scale_point(r)
    zt = p.zeta + 2.0 * alpha**4
    rt = math.sqrt(p.xi**2 + p.nu_y**2 + zt**2)
    return GaussianScaled(alpha, eps_t, log_w, zeta_tilde=zt, rho_tilde=rt)


def source_amplitude(sys: PhysicalSystem, src: SourceModel, r) -> float:
    """sigma(r) for a Gaussian source (the delta source has no pointwise value)."""
    if isinstance(src, PointSource):
        raise UnsupportedModelError("a delta source has no pointwise amplitude")
    r2 = r[0] ** 2 + r[1] ** 2 + r[2] ** 2
    n0 = src.width**-1.5 * math.pi**-0.75
    return sys.hbar * src.coupling * n0 * math.exp(-r2 / (2.0 * src.width**2))


def equivalent_point_strength(sys: PhysicalSystem, src: GaussianSource) -> float:
    """Point-source strength C = hbar*Omega*(2 sqrt(pi) a)^(3/2) of the a -> 0 limit."""
    return sys.hbar * src.coupling * (2.0 * math.sqrt(math.pi) * src.width) ** 1.5


def virtual_source_shift(sys: PhysicalSystem, src: GaussianSource) -> float:
    """Upstream displacement -m F a^4/(2 hbar^2) of the virtual point source (m)."""
    return -sys.mass * sys.force * src.width**4 / (2.0 * sys.hbar**2)


# ----------------------------------------------------------------------------
# point source
# ----------------------------------------------------------------------------

def psi_point(sys: PhysicalSystem, src: PointSource, r, energy: float) -> complex:
    """Scattering wave C * G(r, 0; E) of the delta source."""
    if r[0] == 0.0 and r[1] == 0.0 and r[2] == 0.0:
        raise DomainError("psi_point: the wavefunction diverges at the source point")
    return src.strength * green_closed(sys, r, (0.0, 0.0, 0.0), energy).value


def _jz_shape(xi: float, nu: float, zeta: float, eps: float) -> tuple[float, float]:
    """Dimensionless current-density shape as (mantissa, log_scale).

    (1/rho^3) * { zeta Ai'(am)^2 + [zeta(zeta - eps) + rho^2] Ai(am)^2 }
    with am = eps - zeta + rho; Airy factors exponentially scaled once the
    argument enters the deep tunneling region.
    """
    rho = math.sqrt(xi * xi + nu * nu + zeta * zeta)
    if rho == 0.0:
        raise DomainError("current density undefined at the source point")
    am = eps - zeta + rho
    coef = zeta * (zeta - eps) + rho * rho
    if am <= 8.0:
        p = airy_all(am)
        val = (zeta * p.ai_prime**2 + coef * p.ai**2) / rho**3
        return val, 0.0
    ai_s, aip_s, _, _, za = airy_scaled(am)
    val = (zeta * aip_s**2 + coef * ai_s**2) / rho**3
    return val, -2.0 * za


def current_density_point(
    sys: PhysicalSystem, src: PointSource, r, energy: float
) -> float:
    """Current density j_z (1/(m^2 s) times |C|^2 units) of the delta source."""
    p = sys.scale_point(r)
    eps = -2.0 * sys.beta * energy
    mant, log_scale = _jz_shape(p.xi, p.nu_y, p.zeta, eps)
    pref = abs(src.strength) ** 2 * sys.mass * sys.beta_f**3 / (
        2.0 * math.pi * sys.hbar**3
    )
    return pref * mant * math.exp(log_scale)


def total_current_point(sys: PhysicalSystem, src: PointSource, energy: float) -> float:
    """Total emitted current J(E) of the delta source; positive for every E.

    Below threshold (E < 0) this is the tunneling tail: the closed form is
    entire in E and simply decays.
    """
    eps = -2.0 * sys.beta * energy
    pref = 2.0 * abs(src.strength) ** 2 * sys.mass * sys.beta * sys.force / sys.hbar**3
    return pref * math.exp(airy_bracket_log(eps))


# ----------------------------------------------------------------------------
# Gaussian source
# ----------------------------------------------------------------------------

def _require_far_field(g: GaussianScaled, what: str) -> None:
    if g.rho_tilde < _FAR_FIELD_HARD * g.alpha:
        raise DomainError(
            f"{what}: rho~ = {g.rho_tilde:.3g} inside the source core "
            f"(< {_FAR_FIELD_HARD} alpha = {_FAR_FIELD_HARD * g.alpha:.3g}); "
            "the far-field form is invalid there"
        )
    if g.rho_tilde < _FAR_FIELD_SOFT * g.alpha:
        warnings.warn(
            f"{what}: rho~ = {g.rho_tilde:.3g} within {_FAR_FIELD_SOFT} alpha "
            "of the source; far-field accuracy degrades",
            stacklevel=3,
        )


def psi_gauss_far(
    sys: PhysicalSystem, src: GaussianSource, r, energy: float
) -> complex:
    """Far-field wave: a virtual point source shifted upstream by 2 alpha^4.

    Exact consequence of the Gaussian r' integration; only the near-field
    (purely real) part is missing.
    """
    g = gaussian_scaled(sys, src, energy, r)
    _require_far_field(g, "psi_gauss_far")
    ap = g.epsilon_tilde - g.zeta_tilde - g.rho_tilde
    am = g.epsilon_tilde - g.zeta_tilde + g.rho_tilde
    mant, log_scale = _bracket_scaled(ap, am)
    log_si = math.log(sys.beta * sys.beta_f**3)
    return (2.0 / g.rho_tilde) * mant * math.exp(g.log_weight + log_si + log_scale)


def psi_gauss_near(
    sys: PhysicalSystem, src: GaussianSource, r, energy: float
) -> float:
    """Asymptotic near-field contribution; purely real, dies off as a Gaussian."""
    g = gaussian_scaled(sys, src, energy, r)
    log_si = math.log(2.0 * sys.beta * sys.beta_f**3 / math.pi**1.5)
    log_mag = (
        g.log_weight
        + log_si
        + math.log(math.sqrt(2.0) * g.alpha / g.rho_tilde**2)
        - g.rho_tilde**2 / (2.0 * g.alpha**2)
    )
    return math.exp(log_mag)


def psi_gauss_quadrature(
    sys: PhysicalSystem, src: GaussianSource, r, energy: float
) -> complex:
    """Reference wavefunction from the contour integral (validation path).

    The contour runs from -2i alpha^2 to +infinity in the complex scaled
    time u.  The imaginary-axis segment (u = -i s) has a purely real
    integrand; the real-axis remainder is the Green-function time integral
    with tilde-shifted arguments.
    """
    g = gaussian_scaled(sys, src, energy, r)
    a = g.zeta_tilde - g.epsilon_tilde
    rho = g.rho_tilde
    s_hi = 2.0 * g.alpha**2

    def f_near(s):
        arg = -rho * rho / s + a * s + s**3 / 12.0
        if arg > 700.0:
            raise RangeError(
                "psi_gauss_quadrature: integrand exponent out of double range; "
                "use psi_gauss_far/psi_gauss_near for this parameter regime"
            )
        return (math.pi * s) ** -1.5 * math.exp(arg)

    s_min = min(rho * rho / 45.0, 0.5 * s_hi)
    near, near_err = quad(f_near, s_min, s_hi, limit=200, epsabs=1e-13, epsrel=1e-11)
    far, far_err = _g_time_scaled(rho, a, 0.0)
    if near_err + far_err > 1e-8:
        raise ConvergenceError(
            f"psi_gauss_quadrature: error estimate {near_err + far_err:.3e} "
            "above the 1e-8 budget (scaled units)",
            estimate=near_err + far_err,
        )
    log_si = math.log(sys.beta * sys.beta_f**3)
    return (2.0 * near + far) * math.exp(g.log_weight + log_si)


def current_density_gauss(
    sys: PhysicalSystem, src: GaussianSource, r, energy: float
) -> float:
    """Far-field current density: the point formula with tilde-shifted arguments."""
    g = gaussian_scaled(sys, src, energy, r)
    _require_far_field(g, "current_density_gauss")
    p = sys.scale_point(r)
    mant, log_scale = _jz_shape(p.xi, p.nu_y, g.zeta_tilde, g.epsilon_tilde)
    # |Lambda|^2 m (beta F)^3 / (2 pi hbar^3), assembled in log space
    log_pref = (
        2.0 * g.log_weight
        + math.log(sys.mass * sys.beta_f**3 / (2.0 * math.pi * sys.hbar**3))
    )
    exponent = log_pref + log_scale
    if exponent > 700.0:
        raise RangeError(
            f"current_density_gauss: exponent {exponent:.1f} overflows double range"
        )
    return mant * math.exp(exponent)


def total_current_gauss(
    sys: PhysicalSystem, src: GaussianSource, energy: float
) -> float:
    """Exact total current of the Gaussian source.

    J = 64 pi^(3/2) hbar Omega^2 alpha^3 beta
        * exp(4 alpha^2 (eps~ - 4 alpha^4/3)) * [Ai'(eps~)^2 - eps~ Ai(eps~)^2].

    The sign of the second bracket term follows eps = -2 beta E: it is the
    point formula's +2 beta E Ai^2 term in shifted variables.  Exact (not
    far-field): the near-field wave is real and drops out of the current.
    """
    g = gaussian_scaled(sys, src, energy)
    log_pref = (
        math.log(64.0 * math.pi**1.5)
        + math.log(sys.hbar)
        + 2.0 * math.log(src.coupling)
        + 3.0 * math.log(g.alpha)
        + math.log(sys.beta)
    )
    exponent = (
        4.0 * g.alpha**2 * (g.epsilon_tilde - 4.0 * g.alpha**4 / 3.0)
        + airy_bracket_log(g.epsilon_tilde)
    )
    if log_pref + exponent > 709.0:
        raise RangeError(
            f"total_current_gauss: exponent {log_pref + exponent:.1f} "
            "overflows double range"
        )
    return math.exp(log_pref + exponent)


def total_current_slicing(
    sys: PhysicalSystem, src: GaussianSource, energy: float
) -> float:
    """Saddle-point (slicing) current: probes |psi_0|^2 on the plane E + F z = 0.

    J_sp = 2 sqrt(pi) hbar Omega^2 beta / alpha * exp(-eps^2/(4 alpha^2)).
    Reliable for wide sources (alpha >> |eps|); in the tunneling regime its
    derivation assumptions fail.
    """
    g = gaussian_scaled(sys, src, energy)
    eps = -2.0 * sys.beta * energy
    pref = 2.0 * math.sqrt(math.pi) * sys.hbar * src.coupling**2 * sys.beta / g.alpha
    return pref * math.exp(-(eps**2) / (4.0 * g.alpha**2))


def sum_rule_check(
    sys: PhysicalSystem,
    src: SourceModel,
    energy_range: tuple[float, float],
    tol: float = 5e-3,
) -> tuple[float, float]:
    """Integrate J(E) over all energies and compare with (2 pi/hbar) ||sigma||^2.

    Returns (lhs, rhs) with rhs = 2 pi hbar Omega^2.  The integration window
    starts from ``energy_range`` and is extended in both directions until
    the marginal tail contribution drops below tol * rhs / 20.
    """
    if isinstance(src, PointSource):
        raise UnsupportedModelError(
            "sum_rule_check: the delta source has no square-integrable norm, "
            "so the total-current sum rule does not apply to it"
        )
    rhs = 2.0 * math.pi * sys.hbar * src.coupling**2

    def j_eps(eps):
        return total_current_gauss(sys, src, -eps / (2.0 * sys.beta))

    # E -> eps reverses orientation; J dE = (1/(2 beta)) J deps
    e_lo = -2.0 * sys.beta * energy_range[1]
    e_hi = -2.0 * sys.beta * energy_range[0]
    if e_lo > e_hi:
        e_lo, e_hi = e_hi, e_lo
    total, _ = quad(j_eps, e_lo, e_hi, limit=400, epsabs=0.0, epsrel=1e-9)
    slab = max(e_hi - e_lo, 10.0)
    cut = tol * rhs * 2.0 * sys.beta / 20.0
    for direction in (-1.0, +1.0):
        edge = e_lo if direction < 0 else e_hi
        while True:
            nxt = edge + direction * slab
            lo, hi = (nxt, edge) if direction < 0 else (edge, nxt)
            piece, _ = quad(j_eps, lo, hi, limit=400, epsabs=cut / 10.0, epsrel=1e-9)
            total += piece
            edge = nxt
            if abs(piece) < cut:
                break
    return total / (2.0 * sys.beta), rhs
