"""Normalized Bessel functions and validated tables of their positive zeros.

The workhorse is the even entire function

    jbar(nu, z) = sum_{m>=0} (-1)^m / (m! (nu+1)_m) (z/2)^(2m),

normalized so that jbar(nu, 0) = 1.  For z != 0 it shares its zeros with the
ordinary Bessel function J_nu, to which it is related by
J_nu(z) = (z/2)^nu / Gamma(nu+1) * jbar(nu, z).

Evaluation uses the power series, accumulated in 80-bit extended precision to
absorb alternating-sum cancellation, below a documented crossover radius, and
the large-argument cosine expansion truncated at its smallest term above it.
Both branches agree to ~1e-13 relative at the crossover for orders up to ~10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "EvaluationDomainError",
    "BracketError",
    "ZeroTable",
    "series_cutoff",
    "jbar_eval",
    "j_eval",
    "jbar_deriv",
    "bessel_zero",
    "zero_table",
    "check_interlacing",
]

# Imaginary parts beyond this overflow the cosine factors of the
# large-argument expansion well before float64 runs out; refuse loudly.
IMAG_LIMIT = 50.0

_SERIES_MAX_TERMS = 1400
# Extra guard digits held by 80-bit accumulation (eps ~ 1.1e-19).
_LD_EPS = float(np.finfo(np.longdouble).eps)


class EvaluationDomainError(ValueError):
    """Evaluation requested outside the supported parameter/argument domain."""


class BracketError(RuntimeError):
    """A sign-change bracket for a zero could not be constructed or validated."""


def series_cutoff(nu: float) -> float:
    """|z| below which the power series is used.

    Above it the large-argument expansion already reaches ~1e-13 relative
    while the series (even in extended precision) starts losing digits to
    cancellation.  The order-dependent bump keeps the expansion out of its
    divergent regime for larger orders.
    """
    return max(18.0, 2.0 * abs(nu) + 2.0)


def _series_eval(nu, z, dtype):
    """Power series with term recurrence; returns (sum, peak |term|).

    `dtype` selects np.longdouble / np.clongdouble accumulation.  The peak
    term magnitude bounds the cancellation noise floor: the result carries an
    absolute error of roughly peak * eps(longdouble).
    """
    z = np.asarray(z, dtype)
    w = -((z / 2.0) ** 2)
    term = np.ones_like(w)
    acc = term.copy()
    peak = np.abs(term).astype(np.longdouble)
    hump = np.max(np.abs(w)) if w.size else 0.0
    one = np.longdouble(1.0)
    nu_ld = np.longdouble(nu)
    for m in range(_SERIES_MAX_TERMS):
        # the denominator must stay in extended precision: rounding it to
        # float64 feeds ~1e-16 relative noise into every (huge) term
        term = term * (w / ((m + one) * (nu_ld + one + m)))
        acc = acc + term
        np.maximum(peak, np.abs(term).astype(np.longdouble), out=peak)
        if (m + 1.0) * (nu + 1.0 + m) > hump:
            if np.all(np.abs(term) <= 1e-22 * peak):
                break
    return acc, peak


def _asym_eval(nu, z):
    """Large-argument cosine expansion; requires Re z > 0 elementwise.

    Terms of the P/Q tails may grow before decaying for larger orders; each
    element is truncated at its own smallest term (optimal truncation).
    """
    z = np.asarray(z)
    four_nu2 = 4.0 * nu * nu
    zinv = 1.0 / z
    P = np.ones(z.shape, z.dtype)
    Q = np.zeros(z.shape, z.dtype)
    powk = zinv.copy()
    a_k = 1.0
    prev = np.full(z.shape, np.inf)
    decaying = np.zeros(z.shape, bool)
    active = np.ones(z.shape, bool)
    for k in range(1, 44):
        a_k *= (four_nu2 - (2 * k - 1) ** 2) / (8.0 * k)
        if a_k == 0.0:  # half-integer order: expansion is exact
            break
        term = a_k * powk
        mag = np.abs(term)
        active &= ~(decaying & (mag >= prev))
        if not active.any():
            break
        decaying |= mag < prev
        if k % 2:
            Q[active] += (-1) ** ((k - 1) // 2) * term[active]
        else:
            P[active] += (-1) ** (k // 2) * term[active]
        prev = np.where(active, mag, prev)
        active &= mag >= 1e-20
        powk = powk * zinv
    omega = z - (nu * 0.5 + 0.25) * np.pi
    amplitude = np.sqrt(2.0 / (np.pi * z))
    j_nu = amplitude * (np.cos(omega) * P - np.sin(omega) * Q)
    return math.gamma(nu + 1.0) * (z / 2.0) ** (-nu) * j_nu


def _jbar_real(nu, x):
    """Vectorized jbar on real arguments (float64 out)."""
    x = np.abs(np.asarray(x, float))
    cut = series_cutoff(nu)
    out = np.empty_like(x)
    lo = x <= cut
    if lo.any():
        out[lo] = _series_eval(nu, x[lo], np.longdouble)[0].astype(float)
    hi = ~lo
    if hi.any():
        out[hi] = _asym_eval(nu, x[hi])
    return out


def _validate_order_for_eval(nu: float) -> float:
    nu = float(nu)
    if not math.isfinite(nu):
        raise EvaluationDomainError("order must be finite")
    if nu <= -1.0 and nu == int(nu):
        raise EvaluationDomainError(
            f"order {nu} is a negative integer; the series normalization is undefined"
        )
    return nu


def jbar_eval(nu: float, z: complex) -> complex:
    """Normalized Bessel function jbar(nu, z); even in z, jbar(nu, 0) = 1."""
    nu = _validate_order_for_eval(nu)
    z = complex(z)
    if z.real < 0.0 or (z.real == 0.0 and z.imag < 0.0):
        z = -z  # even function
    az = abs(z)
    if az == 0.0:
        return complex(1.0)
    # Near the imaginary axis the series terms barely cancel, so it remains
    # usable at any radius; away from it, switch to the expansion.
    if az <= series_cutoff(nu) or az - abs(z.imag) <= 14.0:
        if az > 650.0:
            raise EvaluationDomainError(
                f"|z| = {az:.3g} overflows the series accumulation"
            )
        val, _peak = _series_eval(nu, np.array([z]), np.clongdouble)
        result = complex(val[0])
        if not (math.isfinite(result.real) and math.isfinite(result.imag)):
            raise EvaluationDomainError(f"jbar overflow at z = {z!r}")
        return result
    if abs(z.imag) > IMAG_LIMIT:
        raise EvaluationDomainError(
            f"|Im z| = {abs(z.imag):.3g} exceeds {IMAG_LIMIT} on the "
            "large-argument branch; result would overflow"
        )
    return complex(_asym_eval(nu, np.array([z]))[0])


def j_eval(nu: float, x: float) -> float:
    """Ordinary Bessel function J_nu on the positive real axis."""
    nu = _validate_order_for_eval(nu)
    x = float(x)
    if not x > 0.0:
        raise EvaluationDomainError("j_eval requires x > 0")
    return (x / 2.0) ** nu / math.gamma(nu + 1.0) * _jbar_real(nu, np.array([x]))[0]


def jbar_deriv(nu: float, z: complex) -> complex:
    """d/dz jbar(nu, z), computed through the order-raising identity
    jbar'(nu, z) = -z / (2 (nu+1)) * jbar(nu+1, z)."""
    nu = float(nu)
    if not nu > -1.0:
        raise EvaluationDomainError("jbar_deriv requires order > -1")
    z = complex(z)
    return -z / (2.0 * (nu + 1.0)) * jbar_eval(nu + 1.0, z)


# ---------------------------------------------------------------------------
# Zeros


@dataclass(frozen=True)
class ZeroTable:
    """Ascending positive zeros of jbar(mu, .) with validated sign-change
    brackets.  Arrays are read-only; the table is safe to share."""

    mu: float
    zeros: np.ndarray      # shape (M,)
    brackets: np.ndarray   # shape (M, 2), each row straddles exactly its zero

    def __post_init__(self):
        self.zeros.setflags(write=False)
        self.brackets.setflags(write=False)

    def __len__(self) -> int:
        return len(self.zeros)


def _mcmahon_seed(mu, ranks):
    """Large-rank expansion of the positive zeros, used for Newton seeding."""
    beta = (ranks + mu / 2.0 - 0.25) * np.pi
    t = 4.0 * mu * mu
    return (
        beta
        - (t - 1.0) / (8.0 * beta)
        - 4.0 * (t - 1.0) * (7.0 * t - 31.0) / (3.0 * (8.0 * beta) ** 3)
    )


def _scan_zero(mu, start, step):
    """First zero of jbar(mu, .) strictly beyond `start`, by sign scanning."""
    f = lambda x: float(_jbar_real(mu, np.array([x]))[0])
    x0 = start + max(1e-9, 1e-9 * start)
    s0 = math.copysign(1.0, f(x0))
    x = x0
    for _ in range(2048):
        xn = x + step
        if math.copysign(1.0, f(xn)) != s0:
            return brentq(f, x, xn, xtol=1e-15, rtol=4e-16)
        x = xn
    raise BracketError(
        f"no sign change of jbar({mu}, .) found in ({start}, {x}) while scanning"
    )


def _gap_signs_ok(mu, zeros):
    """Check that jbar(mu, .) keeps the expected constant sign strictly
    between consecutive located zeros (detects skipped or spurious roots)."""
    edges = np.concatenate(([0.0], zeros))
    fracs = np.linspace(0.07, 0.93, 8)
    pts = edges[:-1, None] + (edges[1:] - edges[:-1])[:, None] * fracs[None, :]
    vals = _jbar_real(mu, pts.ravel()).reshape(pts.shape)
    expected = (-1.0) ** np.arange(len(zeros))
    return np.all(np.sign(vals) == expected[:, None], axis=1)


def zero_table(mu: float, count: int) -> ZeroTable:
    """First `count` positive zeros of jbar(mu, .) with verified brackets.

    Newton refinement (derivative through the order-raising identity) runs
    vectorized from large-rank seeds; any rank that fails validation is
    repaired by sign scanning from its predecessor, so a returned table is
    always rank-correct.
    """
    mu = float(mu)
    if not mu > -1.0:
        raise EvaluationDomainError("zero tables require order > -1")
    count = int(count)
    if count < 1:
        raise ValueError("count must be >= 1")

    ranks = np.arange(1, count + 1, dtype=float)
    seeds = _mcmahon_seed(mu, ranks)
    window = 1.7
    lo_guard = np.maximum(seeds - window, 1e-8)
    hi_guard = seeds + window
    x = np.clip(seeds, lo_guard, hi_guard)
    strayed = np.zeros(count, bool)
    for _ in range(12):
        f = _jbar_real(mu, x)
        fp = -x / (2.0 * (mu + 1.0)) * _jbar_real(mu + 1.0, x)
        dx = f / fp
        x = x - dx
        bad = ~np.isfinite(x) | (x < lo_guard) | (x > hi_guard)
        strayed |= bad
        x = np.where(bad, np.clip(x, lo_guard, hi_guard), x)
        if np.max(np.abs(dx)) < 1e-14 * np.max(x):
            break

    ordered = np.all(np.diff(np.concatenate(([0.0], x))) > 0.0)
    good_gaps = _gap_signs_ok(mu, x) if ordered else np.zeros(count, bool)
    needs_repair = strayed | ~good_gaps
    if not ordered or needs_repair.any():
        first_bad = 0 if not ordered else int(np.argmax(needs_repair))
        prev = 0.0 if first_bad == 0 else float(x[first_bad - 1])
        step = min(np.pi / 16.0, max(0.02, 0.25 * math.sqrt(mu + 1.0)))
        repaired = list(x[:first_bad])
        for _ in range(first_bad, count):
            prev = _scan_zero(mu, prev, step)
            repaired.append(prev)
        x = np.asarray(repaired)
        if not np.all(_gap_signs_ok(mu, x)):
            raise BracketError(
                f"zero table for order {mu} failed sign validation after repair"
            )

    # Verified sign-change brackets around each refined zero.
    h = np.maximum(1e-8 * x, 1e-10)
    for _ in range(6):
        s_lo = np.sign(_jbar_real(mu, x - h))
        s_hi = np.sign(_jbar_real(mu, x + h))
        open_ = s_lo * s_hi >= 0
        if not open_.any():
            break
        h[open_] *= 8.0
    else:
        idx = int(np.argmax(open_))
        raise BracketError(
            f"no sign change across [{x[idx]-h[idx]}, {x[idx]+h[idx]}] "
            f"for zero #{idx+1} of order {mu}"
        )
    gaps = np.diff(np.concatenate(([0.0], x)))
    if np.any(h >= 0.45 * np.minimum(gaps, np.append(gaps[1:], np.inf))):
        raise BracketError(f"bracket widths overlap neighbouring zeros (order {mu})")

    return ZeroTable(mu=mu, zeros=x, brackets=np.column_stack((x - h, x + h)))


_TABLE_CACHE: dict[float, ZeroTable] = {}


def cached_zero_table(mu: float, count: int) -> ZeroTable:
    """Shared, growing zero-table cache (tables are immutable)."""
    mu = float(mu)
    table = _TABLE_CACHE.get(mu)
    if table is None or len(table) < count:
        table = zero_table(mu, max(count, 16, 2 * len(table or ())))
        _TABLE_CACHE[mu] = table
    return table


def bessel_zero(mu: float, m: int) -> float:
    """m-th positive zero of jbar(mu, .) (equivalently of J_mu), m >= 1."""
    m = int(m)
    if m < 1:
        raise ValueError("rank m must be >= 1")
    return float(cached_zero_table(mu, m).zeros[m - 1])


def check_interlacing(table: ZeroTable, raised: ZeroTable) -> bool:
    """True when zeros of consecutive orders interlace:
    j(mu, m) < j(mu+1, m) < j(mu, m+1) for all ranks both tables cover."""
    if abs(raised.mu - table.mu - 1.0) > 1e-12:
        raise ValueError("tables must be one order apart")
    n = min(len(table) - 1, len(raised))
    a = table.zeros[: n + 1]
    b = raised.zeros[:n]
    return bool(np.all(a[:-1] < b) and np.all(b < a[1:]))
