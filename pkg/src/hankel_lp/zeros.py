"""Sign patterns, interlaced zero localization, and power sums of the
positive zeros of finite Hankel transforms.

The localization logic runs on the sign sequence sigma_m = (-1)^(m+1) ht(j_m)
over the zeros j_m of the kernel of matching order.  A constant-sign sequence
puts exactly one transform zero strictly between consecutive kernel zeros
(plus one before the first kernel zero when the sequence is negative), each
simple; a mixed sequence carries no such guarantee and localization refuses
with a diagnostic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import zeta as hurwitz_zeta

from . import bessel, hankel as H, weights as W

__all__ = [
    "SignPatternError",
    "SturmVerdict",
    "SignSequence",
    "ZeroList",
    "RayleighSums",
    "sturm_sufficiency",
    "sign_sequence",
    "locate_zeros",
    "rayleigh_sums",
    "tail_corrected_power_sum",
    "bessel_zero_square_sum",
    "zerolist_to_csv",
    "zerolist_from_csv",
    "rayleigh_to_json",
]


class SignPatternError(RuntimeError):
    """The sign sequence is mixed; interlaced localization does not apply."""


# ---------------------------------------------------------------------------
# sufficiency


@dataclass(frozen=True)
class SturmVerdict:
    guaranteed: bool
    reason: str

    def __bool__(self) -> bool:
        return self.guaranteed


def sturm_sufficiency(spec: H.TransformSpec) -> SturmVerdict:
    """Sufficient conditions for the alternating sign pattern of ht(j_m):

    * |nu| < 1/2  : f nondecreasing on (0, 1);
    * |nu| = 1/2  : f nondecreasing and not a rational-breakpoint step
                    function (the exceptional class);
    * |nu| > 1/2  : t^(3/2 - 3 |nu|) f(t) nondecreasing on (0, 1).
    """
    nu = spec.nu
    f = spec.weight
    anu = abs(nu)
    if anu < 0.5:
        if W.monotonicity_check(f, 0.0):
            return SturmVerdict(True, "weight nondecreasing, |order| < 1/2")
        return SturmVerdict(False, "weight is not nondecreasing on (0, 1)")
    if anu == 0.5:
        if not W.monotonicity_check(f, 0.0):
            return SturmVerdict(False, "weight is not nondecreasing on (0, 1)")
        if W.is_exceptional(f):
            return SturmVerdict(
                False,
                "rational-breakpoint step weight: the |order| = 1/2 sign "
                "pattern can fail (exceptional class)",
            )
        return SturmVerdict(True, "weight nondecreasing, |order| = 1/2, not exceptional")
    exponent = 1.5 - 3.0 * anu
    if W.monotonicity_check(f, exponent):
        return SturmVerdict(
            True, f"t^{exponent:g} * f(t) nondecreasing, |order| > 1/2"
        )
    return SturmVerdict(
        False, f"t^{exponent:g} * f(t) is not nondecreasing on (0, 1)"
    )


# ---------------------------------------------------------------------------
# sign sequences


@dataclass(frozen=True)
class SignSequence:
    mu: float
    sigma: np.ndarray           # (-1)^(m+1) ht(j_m)
    verdict: str                # "all_positive" | "all_negative" | "mixed"
    first_violation: int | None  # 1-based rank of the first offender

    def __post_init__(self):
        self.sigma.setflags(write=False)


def sign_sequence(spec: H.TransformSpec, mu: float, count: int) -> SignSequence:
    """sigma_m = (-1)^(m+1) ht(j(mu, m)) for m = 1..count with a verdict.

    Values indistinguishable from zero (below 1e-9 of the neighbouring
    magnitudes) violate either sign and force the mixed verdict.
    """
    mu = float(mu)
    H._check_order_range(spec.nu, mu)
    table = bessel.cached_zero_table(mu, int(count))
    nodes = np.array(table.zeros[: int(count)])
    values = H._ht_eval_real_batch(spec, nodes)
    sigma = values * (-1.0) ** np.arange(2, len(nodes) + 2)

    mags = np.abs(sigma)
    local = np.maximum(mags, 0.0)
    for shift in (1, 2):
        local[:-shift] = np.maximum(local[:-shift], mags[shift:])
        local[shift:] = np.maximum(local[shift:], mags[:-shift])
    degenerate = mags < 1e-9 * local
    pos = (sigma > 0) & ~degenerate
    neg = (sigma < 0) & ~degenerate
    if pos.all():
        verdict, violation = "all_positive", None
    elif neg.all():
        verdict, violation = "all_negative", None
    else:
        majority_positive = pos.sum() >= neg.sum()
        offenders = ~pos if majority_positive else ~neg
        verdict, violation = "mixed", int(np.argmax(offenders)) + 1
    return SignSequence(mu=mu, sigma=sigma, verdict=verdict, first_violation=violation)


# ---------------------------------------------------------------------------
# localization


@dataclass(frozen=True)
class ZeroList:
    zeta: np.ndarray
    brackets: np.ndarray        # rows (lo, hi), kernel zeros (or 0) around zeta
    derivative_signs: np.ndarray

    def __post_init__(self):
        self.zeta.setflags(write=False)
        self.brackets.setflags(write=False)
        self.derivative_signs.setflags(write=False)

    def __len__(self) -> int:
        return len(self.zeta)


def locate_zeros(spec: H.TransformSpec, count: int) -> ZeroList:
    """First `count` positive zeros of the transform, each bracketed by
    consecutive zeros of the matching-order kernel and refined to 1e-11
    relative; simplicity is verified through the derivative magnitude."""
    count = int(count)
    seq = sign_sequence(spec, spec.nu, count + 1)
    if seq.verdict == "mixed":
        raise SignPatternError(
            "sign sequence over the kernel zeros is mixed (first violation "
            f"at rank {seq.first_violation}); interlaced localization "
            "does not apply"
        )
    table = bessel.cached_zero_table(spec.nu, count + 1)
    j = np.array(table.zeros[: count + 1])
    if seq.verdict == "all_positive":
        lo, hi = j[:count], j[1 : count + 1]
    else:
        lo = np.concatenate(([0.0], j[: count - 1]))
        hi = j[:count]

    func = lambda x: H._ht_eval_real(spec, x)
    zeta = np.empty(count)
    dsigns = np.empty(count)
    pad = 1e-9
    for i in range(count):
        a = lo[i] + (pad * max(lo[i], 1.0) if lo[i] else 1e-12)
        b = hi[i] - pad * hi[i]
        fa, fb = func(a), func(b)
        if fa * fb >= 0.0:
            raise SignPatternError(
                f"no sign change of the transform across bracket "
                f"({lo[i]:.6g}, {hi[i]:.6g})"
            )
        zeta[i] = brentq(func, a, b, xtol=1e-13, rtol=1e-12)
        deriv = H.ht_deriv(spec, zeta[i]).real
        scale = max(abs(fa), abs(fb)) / (hi[i] - lo[i])
        if abs(deriv) <= 1e-10 * scale:
            raise SignPatternError(
                f"zero at {zeta[i]:.8g} looks multiple: |ht'| = {abs(deriv):.3e}"
            )
        dsigns[i] = math.copysign(1.0, deriv)
    if np.any(dsigns[1:] == dsigns[:-1]):
        raise SignPatternError("derivative signs do not alternate along the zeros")
    return ZeroList(
        zeta=zeta, brackets=np.column_stack((lo, hi)), derivative_signs=dsigns
    )


# ---------------------------------------------------------------------------
# power sums


def tail_corrected_power_sum(points: np.ndarray, exponent: float, fit_count: int = 50) -> float:
    """sum_m points[m]^-exponent extended to m = infinity by fitting
    points_m ~ (m + c0) pi over the last `fit_count` entries and summing the
    model tail through the Hurwitz zeta function."""
    points = np.asarray(points, float)
    n = len(points)
    if n < 4:
        raise ValueError("need at least 4 points for a tail fit")
    k = min(fit_count, n // 2)
    m = np.arange(1, n + 1)
    c0 = float(np.mean(points[-k:] / np.pi - m[-k:]))
    head = float(np.sum(points**-exponent))
    tail = float(hurwitz_zeta(exponent, n + 1 + c0)) / math.pi**exponent
    return head + tail


def bessel_zero_square_sum(mu: float, count: int) -> float:
    """Tail-corrected sum of 1/j(mu, m)^2; equals 1/(4 (mu+1)) exactly."""
    table = bessel.cached_zero_table(mu, int(count))
    return tail_corrected_power_sum(np.array(table.zeros[: int(count)]), 2.0)


@dataclass(frozen=True)
class RayleighSums:
    """Power sums delta_k = sum_m zeta_m^-(2k+2) of the transform zeros.

    `delta` holds the primary values (the zero route when available, else the
    coefficient route); both routes are kept for cross-checks."""

    delta: np.ndarray
    delta_newton: np.ndarray
    delta_direct: np.ndarray | None

    def __post_init__(self):
        self.delta.setflags(write=False)
        self.delta_newton.setflags(write=False)
        if self.delta_direct is not None:
            self.delta_direct.setflags(write=False)


def _newton_deltas(spec: H.TransformSpec, k_max: int) -> np.ndarray:
    """Power sums from the series coefficients c_k of ht(sqrt(.)) through the
    logarithmic-derivative recurrence
    delta_k = -((k+1) c_{k+1}/c_0 + sum_{i=1..k} (c_i/c_0) delta_{k-i})."""
    beta = spec.moments(k_max + 1)
    nu = spec.nu
    c = np.empty(k_max + 2)
    c[0] = beta[0]
    fac = 1.0
    for k in range(1, k_max + 2):
        fac *= -0.25 / (k * (nu + k))
        c[k] = beta[k] * fac
    ratios = c / c[0]
    delta = np.empty(k_max + 1)
    for k in range(k_max + 1):
        delta[k] = -(k + 1) * ratios[k + 1] - np.dot(ratios[1 : k + 1], delta[k - 1 :: -1] if k else [])
    return delta


def rayleigh_sums(spec: H.TransformSpec, k_max: int, zero_count: int | None = None) -> RayleighSums:
    """delta_0..delta_k_max by two independent routes: direct summation over
    located zeros with a fitted tail, and the coefficient recurrence.  When
    localization is unavailable (mixed sign pattern) only the coefficient
    route is returned."""
    k_max = int(k_max)
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    newton = _newton_deltas(spec, k_max)
    direct = None
    if zero_count is not None:
        zs = locate_zeros(spec, int(zero_count)).zeta
        direct = np.array(
            [tail_corrected_power_sum(zs, 2.0 * k + 2.0) for k in range(k_max + 1)]
        )
    primary = direct if direct is not None else newton
    if np.any(primary <= 0.0):
        raise ValueError("power sums of positive zeros must be positive")
    return RayleighSums(delta=primary, delta_newton=newton, delta_direct=direct)


# ---------------------------------------------------------------------------
# serialization


def zerolist_to_csv(zl: ZeroList) -> str:
    lines = ["m,lo,hi,zeta"]
    for m, (z, (lo, hi)) in enumerate(zip(zl.zeta, zl.brackets), start=1):
        lines.append(f"{m},{lo:.17g},{hi:.17g},{z:.17g}")
    return "\n".join(lines) + "\n"


def zerolist_from_csv(text: str) -> ZeroList:
    rows = [line.split(",") for line in text.strip().splitlines()[1:]]
    lo = np.array([float(r[1]) for r in rows])
    hi = np.array([float(r[2]) for r in rows])
    zeta = np.array([float(r[3]) for r in rows])
    signs = np.array([(-1.0) ** (m + 1) for m in range(len(zeta))])
    return ZeroList(zeta=zeta, brackets=np.column_stack((lo, hi)), derivative_signs=signs)


def rayleigh_to_json(sums: RayleighSums) -> str:
    payload = {
        "delta": sums.delta.tolist(),
        "delta_newton": sums.delta_newton.tolist(),
        "delta_direct": None if sums.delta_direct is None else sums.delta_direct.tolist(),
    }
    return json.dumps(payload, indent=2)
