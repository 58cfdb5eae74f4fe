"""Energy-dependent retarded Green function of the uniform-field Hamiltonian.

Two routes to the same object:

* ``green_closed`` -- the closed Airy form

      G(r, r'; E) = (m / 2 hbar^2) (1/|r-r'|)
                    * [Ci(a+) Ai'(a-) - Ci'(a+) Ai(a-)],

  with a+- = -beta [2E + F(z+z') +- F|r-r'|] and Ci = Bi + i Ai.  This is
  the production path.

* ``green_oracle`` -- the causal Laplace transform of the uniform-field
  propagator, evaluated by adaptive quadrature along a deformed contour in
  scaled time, with an explicit +i*eta damping and Richardson extrapolation
  eta -> 0.  Exists purely for validation (the CLI ``validate`` command).

Everything internal is dimensionless: G = beta*(beta F)^3 * g(scaled args).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import quad

from .airy import airy_all, airy_scaled
from .errors import ConvergenceError, DomainError
from .scaling import PhysicalSystem

__all__ = ["GreenArgs", "GreenValue", "green_args", "green_closed", "green_oracle"]


@dataclass(frozen=True)
class GreenArgs:
    """Dimensionless Airy arguments of the closed form; alpha_plus <= alpha_minus."""

    alpha_plus: float
    alpha_minus: float


@dataclass(frozen=True)
class GreenValue:
    """A Green-function value split as mantissa * exp(log_scale).

    ``scaled`` is the dimensionless value (units of beta*(beta F)^3 removed),
    ``si_factor`` the recorded conversion beta*(beta F)^3 back to SI
    (mass / (hbar^2 * length)), and ``value`` the SI number itself.  The
    split keeps deep-tunneling evaluations representable.
    """

    mantissa: complex
    log_scale: float
    si_factor: float
    error_estimate: float | None = None

    @property
    def scaled(self) -> complex:
        return self.mantissa * math.exp(self.log_scale)

    @property
    def value(self) -> complex:
        return self.mantissa * math.exp(self.log_scale + math.log(self.si_factor))


def _relative_args(sys: PhysicalSystem, r, r_src, energy: float):
    """Scaled separation (rho_d), z-sum and energy for a point pair."""
    bf = sys.beta_f
    dx = (r[0] - r_src[0]) * bf
    dy = (r[1] - r_src[1]) * bf
    dz = (r[2] - r_src[2]) * bf
    rho_d = math.sqrt(dx * dx + dy * dy + dz * dz)
    zsum = (r[2] + r_src[2]) * bf
    eps = -2.0 * sys.beta * energy
    return rho_d, zsum, eps


def green_args(sys: PhysicalSystem, r, r_src, energy: float) -> GreenArgs:
    """Airy arguments a+- = eps - (zeta + zeta') -+ rho_d of the closed form."""
    rho_d, zsum, eps = _relative_args(sys, r, r_src, energy)
    return GreenArgs(alpha_plus=eps - zsum - rho_d, alpha_minus=eps - zsum + rho_d)


def _bracket_scaled(ap: float, am: float) -> tuple[complex, float]:
    """Ci(ap) Ai'(am) - Ci'(ap) Ai(am) as (mantissa, log_scale).

    For large positive arguments the Airy factors are kept exponentially
    scaled so the product with the caller's own exponential weights can be
    combined in log space.
    """
    if am <= 8.0:
        p = airy_all(ap)
        m = airy_all(am)
        return p.ci * m.ai_prime - p.ci_prime * m.ai, 0.0
    ai_s, aip_s, _, _, zm = airy_scaled(am)
    if ap <= 8.0:
        p = airy_all(ap)
        return p.ci * aip_s - p.ci_prime * ai_s, -zm
    pa_s, pap_s, pb_s, pbp_s, zp = airy_scaled(ap)
    # Ci(ap) e^{-zeta_p} = bi_s + i ai_s e^{-2 zeta_p}
    damp = math.exp(-2.0 * zp) if zp < 350.0 else 0.0
    ci_s = complex(pb_s, pa_s * damp)
    cip_s = complex(pbp_s, pap_s * damp)
    return ci_s * aip_s - cip_s * ai_s, zp - zm


def green_closed(sys: PhysicalSystem, r, r_src, energy: float) -> GreenValue:
    """Closed Airy form of the retarded Green function (production path)."""
    rho_d, zsum, eps = _relative_args(sys, r, r_src, energy)
    if rho_d == 0.0:
        raise DomainError(
            "green_closed: coincident points; the diagonal limit is "
            "total_current_point"
        )
    ap = eps - zsum - rho_d
    am = eps - zsum + rho_d
    mant, log_scale = _bracket_scaled(ap, am)
    si = sys.beta * sys.beta_f**3
    return GreenValue(mantissa=2.0 / rho_d * mant, log_scale=log_scale, si_factor=si)


# ----------------------------------------------------------------------------
# quadrature oracle
# ----------------------------------------------------------------------------

_THETA_IN = math.pi / 6     # entry ray angle below the real axis
_THETA_TAIL = math.pi / 6   # tail ray angle (cubic term decays fastest here)
_QUAD_LIMIT = 400


def _phase(tau: complex, rho: float, a: float, eta_s: float) -> complex:
    return 1j * (rho * rho / tau + a * tau - tau**3 / 12.0) - eta_s * tau


def _integrand(tau: complex, rho: float, a: float, eta_s: float) -> complex:
    ph = _phase(tau, rho, a, eta_s)
    if ph.real > 700.0:
        raise ConvergenceError(
            "time-integral contour magnitude out of double range; the "
            "quadrature path does not reach this parameter regime"
        )
    return -2j * (1j * math.pi * tau) ** -1.5 * cmath.exp(ph)


def _quad_c(f, lo, hi):
    val, err = quad(f, lo, hi, complex_func=True, limit=_QUAD_LIMIT,
                    epsabs=1e-13, epsrel=1e-11)
    return val, abs(err)


def _g_time_scaled(rho: float, a: float, eta_s: float) -> tuple[complex, float]:
    """Scaled Green function as the damped propagator transform.

    Integrates -2i (i pi tau)^(-3/2) exp(i rho^2/tau + i a tau - i tau^3/12
    - eta_s tau) over a contour equivalent to the positive real axis:

      1. a ray tau = t e^{-i theta} from the origin (the essential
         singularity exp(i rho^2/tau) decays super-exponentially there),
      2. a chord back up to the real axis at tau_c,
      3. the real segment [tau_c, T] past all stationary points,
      4. a descending tail ray where the cubic phase term decays.

    The integrand is analytic between this contour and the real axis, and
    the closing arcs vanish, so the deformation is exact.
    """
    sin_in = math.sin(_THETA_IN)
    tau_c = min(max(0.2 * rho, 0.05), 2.0)
    # entry ray; integrand dead below t_min
    t_min = rho * rho * sin_in / 45.0
    e_in = cmath.exp(-1j * _THETA_IN)

    def f_ray(t):
        return _integrand(t * e_in, rho, a, eta_s) * e_in

    v1, e1 = _quad_c(f_ray, min(t_min, tau_c * 0.999), tau_c)

    # chord from tau_c e^{-i theta} to tau_c
    z0 = tau_c * e_in
    dz = tau_c - z0

    def f_chord(s):
        return _integrand(z0 + s * dz, rho, a, eta_s) * dz

    v2, e2 = _quad_c(f_chord, 0.0, 1.0)

    # real segment past the classical turning structure
    T = max(2.0 * math.sqrt(max(a, 0.0)) + 6.0, 12.0)

    def f_real(t):
        return _integrand(t, rho, a, eta_s)

    v3, e3 = _quad_c(f_real, tau_c, T)

    # descending tail: cubic term gives exp(-(y-growth)) decay; find cutoff
    e_tail = cmath.exp(-1j * _THETA_TAIL)

    def log_mag(y):
        return _phase(T + y * e_tail, rho, a, eta_s).real

    y_hi = 5.0
    base = max(log_mag(0.0), 0.0)
    while log_mag(y_hi) > base - 42.0 and y_hi < 4000.0:
        y_hi *= 1.6

    def f_tail(y):
        return _integrand(T + y * e_tail, rho, a, eta_s) * e_tail

    v4, e4 = _quad_c(f_tail, 0.0, y_hi)

    return v1 + v2 + v3 + v4, e1 + e2 + e3 + e4


def _neville_at_zero(xs, ys):
    """Polynomial extrapolation of (xs, ys) to x = 0, with a delta estimate."""
    n = len(xs)
    tab = list(ys)
    last = tab[0]
    for level in range(1, n):
        for i in range(n - level):
            tab[i] = tab[i + 1] + (tab[i] - tab[i + 1]) * (0.0 - xs[i + level]) / (
                xs[i] - xs[i + level]
            )
        prev, last = last, tab[0]
    return last, abs(last - prev)


def green_oracle(
    sys: PhysicalSystem, r, r_src, energy: float, eta: float
) -> GreenValue:
    """Retarded Green function via the damped propagator transform.

    ``eta`` (J, > 0) sets the starting damping; the retarded prescription is
    E + i*eta with a decreasing sequence eta/2^k, k = 0..5, extrapolated
    polynomially to eta = 0.  Validation path only; it is slower and less
    accurate (~1e-8) than green_closed.
    """
    if eta <= 0.0:
        raise DomainError(f"green_oracle: eta must be > 0, got {eta}")
    rho_d, zsum, eps = _relative_args(sys, r, r_src, energy)
    if rho_d == 0.0:
        raise DomainError("green_oracle: coincident points")
    a = -(eps - zsum)         # i a tau phase term, a = zeta_rel - eps_shifted
    eta0 = 2.0 * sys.beta * eta
    etas = [eta0 / 2.0**k for k in range(6)]
    vals = []
    qerr = 0.0
    for es in etas:
        v, e = _g_time_scaled(rho_d, a, es)
        vals.append(v)
        qerr = max(qerr, e)
    g0, delta = _neville_at_zero(etas, vals)
    est = qerr + delta
    if qerr > 1e-8:
        raise ConvergenceError(
            f"green_oracle: quadrature error estimate {qerr:.3e} above the "
            "1e-8 budget (scaled units)",
            estimate=est,
        )
    si = sys.beta * sys.beta_f**3
    return GreenValue(mantissa=g0, log_scale=0.0, si_factor=si,
                      error_estimate=est)
