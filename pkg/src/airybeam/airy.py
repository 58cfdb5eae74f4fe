"""Real-argument Airy functions Ai, Bi, their derivatives, and Ci = Bi + i*Ai.

Self-contained implementation (no scipy.special) so that the quadrature
oracles elsewhere in the package remain fully independent of it.  Three
evaluation branches:

* power series / Taylor stepping of the ODE y'' = x*y on the middle range
  |x| <= 9 (stepping toward the growing solution keeps it stable: Bi is
  propagated outward from 0, Ai inward from an anchor at x = 12),
* scaled large-x asymptotic expansions for x >= 9,
* oscillatory asymptotic expansions for x <= -9.

Accuracy is ~1e-13 relative on the middle range and ~1e-12 near the
switchovers, comfortably inside the 1e-10 budget the Green-function layer
assumes.  Arguments above X_MAX raise (Bi overflows there); arbitrarily
negative arguments are allowed, with phase fidelity degrading slowly as
eps * |x|^(3/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, RangeError

__all__ = [
    "ComplexAiryPair",
    "airy_all",
    "airy_modulus_asymptotic",
    "airy_scaled",
    "airy_bracket_log",
    "X_MAX",
    "X_SWITCH",
]

# Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3), Bi = sqrt(3)-partners
_AI0 = 0.35502805388781723926
_AIP0 = -0.25881940379280679840
_BI0 = 0.61492662744600073515
_BIP0 = 0.44828835735382635791

_SQRT_PI = math.sqrt(math.pi)

X_MAX = 100.0          # beyond this exp(zeta) in Bi nears double overflow
X_SWITCH = 9.0         # series/asymptotic handover, both signs
_AI_ANCHOR = 12.0      # Ai on (1, 9) is stepped down from here
_STEP = 0.5
_MAX_TERMS = 60


@dataclass(frozen=True)
class ComplexAiryPair:
    """Values of Ai, Bi, their derivatives, and Ci = Bi + i*Ai at one point."""

    ai: float
    ai_prime: float
    bi: float
    bi_prime: float

    @property
    def ci(self) -> complex:
        return complex(self.bi, self.ai)

    @property
    def ci_prime(self) -> complex:
        return complex(self.bi_prime, self.ai_prime)


def _transfer(x0: float, h: float) -> tuple[float, float, float, float]:
    """Taylor-series propagator of y'' = x*y over one step.

    Returns (u, u', v, v') at x0 + h for the fundamental pair
    u(x0) = 1, u'(x0) = 0 and v(x0) = 0, v'(x0) = 1.  The coefficient
    recurrence is c_{n+2} = (x0*c_n + c_{n-1}) / ((n+1)(n+2)).
    """
    cu = [1.0, 0.0]
    cv = [0.0, 1.0]
    u, up = 1.0, 0.0
    v, vp = h, 1.0
    hn = h
    t1 = t2 = math.inf    # sparse coefficient patterns make single terms vanish
    for n in range(_MAX_TERMS):
        den = (n + 1) * (n + 2)
        prev_u = cu[n - 1] if n >= 1 else 0.0
        prev_v = cv[n - 1] if n >= 1 else 0.0
        cu.append((x0 * cu[n] + prev_u) / den)
        cv.append((x0 * cv[n] + prev_v) / den)
        hn *= h
        tu = cu[n + 2] * hn
        tv = cv[n + 2] * hn
        u += tu
        v += tv
        up += (n + 2) * cu[n + 2] * hn / h
        vp += (n + 2) * cv[n + 2] * hn / h
        tail = abs(tu) + abs(tv)
        if n > 10 and tail + t1 + t2 < 1e-19 * (abs(u) + abs(v) + 1e-300):
            break
        t1, t2 = tail, t1
    return u, up, v, vp


def _propagate(x_from: float, x_to: float, y: float, yp: float) -> tuple[float, float]:
    """Step a solution of y'' = x*y from x_from to x_to."""
    span = x_to - x_from
    nstep = max(1, math.ceil(abs(span) / _STEP))
    h = span / nstep
    x = x_from
    for _ in range(nstep):
        u, up, v, vp = _transfer(x, h)
        y, yp = u * y + v * yp, up * y + vp * yp
        x += h
    return y, yp


def _asym_sums(zeta: float) -> tuple[float, float]:
    """Poincare sums (sum (-1)^k u_k zeta^-k, same with v_k), optimally truncated."""
    su = 1.0
    sv = 1.0
    uk = 1.0
    term_prev = 1.0
    sign = 1.0
    k = 0
    while k < 200:
        k += 1
        uk *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        vk = uk * (6 * k + 1) / (1 - 6 * k)
        sign = -sign
        tu = sign * uk / zeta**k
        if abs(tu) >= term_prev:        # series started diverging
            break
        su += tu
        sv += sign * vk / zeta**k
        term_prev = abs(tu)
        if term_prev < 1e-19:
            break
    return su, sv


def _asym_sums_split(zeta: float) -> tuple[float, float, float, float]:
    """Even/odd split sums P, Q, R, S of the oscillatory expansions."""
    P = 1.0   # sum (-1)^k u_{2k} zeta^{-2k}
    Q = 0.0   # sum (-1)^k u_{2k+1} zeta^{-2k-1}
    R = 1.0   # v analogue of P
    S = 0.0   # v analogue of Q
    uk = 1.0
    zk = 1.0
    term_prev = 1.0
    j = 0
    while j < 200:
        j += 1
        uk *= (6 * j - 5) * (6 * j - 3) * (6 * j - 1) / (216.0 * j * (2 * j - 1))
        vk = uk * (6 * j + 1) / (1 - 6 * j)
        zk /= zeta
        t = uk * zk
        if t >= term_prev:
            break
        term_prev = t
        phase = (-1.0) ** (j // 2)
        if j % 2 == 1:
            Q += phase * t
            S += phase * vk * zk
        else:
            P += phase * t
            R += phase * vk * zk
        if t < 1e-19:
            break
    return P, Q, R, S


def _airy_pos_asym(x: float) -> tuple[float, float, float, float, float]:
    """Scaled asymptotic values for x >= 8.

    Returns (ai_s, aip_s, bi_s, bip_s, zeta) with
    Ai = ai_s*exp(-zeta), Ai' = aip_s*exp(-zeta), Bi = bi_s*exp(zeta),
    Bi' = bip_s*exp(zeta).
    """
    zeta = (2.0 / 3.0) * x ** 1.5
    su, sv = _asym_sums(zeta)          # alternating-sign sums
    sbu, sbv = _asym_sums(-zeta)       # same-sign sums via sign trick
    x4 = x ** 0.25
    ai_s = su / (2.0 * _SQRT_PI * x4)
    aip_s = -x4 * sv / (2.0 * _SQRT_PI)
    bi_s = sbu / (_SQRT_PI * x4)
    bip_s = x4 * sbv / _SQRT_PI
    return ai_s, aip_s, bi_s, bip_s, zeta


def airy_modulus_asymptotic(x: float) -> tuple[float, float, float, float]:
    """(Ai, Ai', Bi, Bi') from the oscillatory asymptotic expansions, x <= -8."""
    if not x <= -8.0:
        raise DomainError(f"oscillatory asymptotics need x <= -8, got {x}")
    z = -x
    zeta = (2.0 / 3.0) * z ** 1.5
    P, Q, R, S = _asym_sums_split(zeta)
    c = math.cos(zeta - 0.25 * math.pi)
    s = math.sin(zeta - 0.25 * math.pi)
    z4 = z ** 0.25
    ai = (c * P + s * Q) / (_SQRT_PI * z4)
    aip = (s * R - c * S) * z4 / _SQRT_PI
    bi = (-s * P + c * Q) / (_SQRT_PI * z4)
    bip = (c * R + s * S) * z4 / _SQRT_PI
    return ai, aip, bi, bip


def _airy_mid(x: float) -> tuple[float, float, float, float]:
    """Taylor-stepped values, usable on roughly [-13, 13]."""
    if x == 0.0:
        return _AI0, _AIP0, _BI0, _BIP0
    if x < 0.0 or x <= 1.0:
        ai, aip = _propagate(0.0, x, _AI0, _AIP0)
    else:
        a_s, ap_s, _, _, zeta = _airy_pos_asym(_AI_ANCHOR)
        e = math.exp(-zeta)
        ai, aip = _propagate(_AI_ANCHOR, x, a_s * e, ap_s * e)
    bi, bip = _propagate(0.0, x, _BI0, _BIP0)
    return ai, aip, bi, bip


def airy_all(x: float) -> ComplexAiryPair:
    """Evaluate Ai, Ai', Bi, Bi' (and Ci, Ci') at a real argument.

    Raises RangeError for x > X_MAX where Bi overflows, DomainError on NaN.
    """
    if math.isnan(x):
        raise DomainError("airy_all: argument is NaN")
    if x > X_MAX:
        raise RangeError(f"airy_all: x = {x} > {X_MAX}; Bi would overflow")
    if x >= X_SWITCH:
        ai_s, aip_s, bi_s, bip_s, zeta = _airy_pos_asym(x)
        em = math.exp(-zeta)
        ep = math.exp(zeta)
        return ComplexAiryPair(ai_s * em, aip_s * em, bi_s * ep, bip_s * ep)
    if x <= -X_SWITCH:
        return ComplexAiryPair(*airy_modulus_asymptotic(x))
    return ComplexAiryPair(*_airy_mid(x))


def airy_scaled(x: float) -> tuple[float, float, float, float, float]:
    """Exponentially scaled values for x >= 0, valid to arbitrarily large x.

    Returns (ai_s, aip_s, bi_s, bip_s, zeta) with Ai = ai_s*exp(-zeta) and
    Bi = bi_s*exp(+zeta).  Unlike airy_all this never overflows, which the
    total-current formulas rely on deep in the tunneling regime.
    """
    if not x >= 0.0:
        raise DomainError(f"airy_scaled: need x >= 0, got {x}")
    if x >= 8.0:
        return _airy_pos_asym(x)
    zeta = (2.0 / 3.0) * x ** 1.5
    p = airy_all(x)
    ep = math.exp(zeta)
    return p.ai * ep, p.ai_prime * ep, p.bi / ep, p.bi_prime / ep, zeta


def airy_bracket_log(x: float) -> float:
    """log of Ai'(x)^2 - x*Ai(x)^2, the emission bracket of the total currents.

    The bracket equals the integral of Ai^2 from x to infinity, hence is
    positive for every real x.  For x > 8 the two terms cancel to O(1/zeta);
    the difference is then formed inside the asymptotic series where it is
    exact, keeping ~12 significant digits even at x ~ 1e3.
    """
    if x <= 8.0:
        p = airy_all(x)
        return math.log(p.ai_prime**2 - x * p.ai**2)
    zeta = (2.0 / 3.0) * x ** 1.5
    su, sv = _asym_sums(zeta)
    # sv - su resummed termwise: (v_k - u_k) = u_k * 12k/(1 - 6k)
    diff = 0.0
    uk = 1.0
    sign = 1.0
    term_prev = math.inf
    for k in range(1, 200):
        uk *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        wk = uk * 12.0 * k / (1.0 - 6.0 * k)
        sign = -sign
        t = sign * wk / zeta**k
        if abs(t) >= term_prev:
            break
        diff += t
        term_prev = abs(t)
        if term_prev < 1e-22 * abs(diff):
            break
    # Ai'^2 - x Ai^2 = exp(-2 zeta) * sqrt(x)/(4 pi) * (sv - su)(sv + su)
    return -2.0 * zeta + math.log(math.sqrt(x) / (4.0 * math.pi) * diff * (sv + su))
