"""The even entire functions phi(z) = 1F2(a; b, c; -z^2/4): evaluation,
parameter-region classification with certificates, transference-shift
searches, argument-principle zero counting, and region grids.

Region codes used throughout (memberships of a parameter pair (b, c) for a
given first parameter a; each stands for the union with its b <-> c mirror
where that applies):

* ``N_a``   -- at least one positive zero exists,
* ``P_a``   -- positive on the real axis; off ``S_a`` this forces complex
               zeros, hence membership minus ``S_a`` certifies NotLP,
* ``S_a``   -- the two points where phi collapses to a squared Bessel
               function (real double zeros),
* ``Z_a``   -- all zeros real and simple, interlaced with the kernel zeros,
* ``X_a``   -- the shift-extended rectangle of LP-certified pairs,
* ``Type1`` -- integer shifts of the plain Bessel line b = a (any c > 0),
* ``Type2`` -- integer shifts of the squared-Bessel parameter pattern
               (a, a+1/2, 2a),
* ``Type3`` -- half-integer first parameter with b + c on an integer segment
               b + c = k, k = 1..2(a - 1/2) + 2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from . import bessel, hankel as H, weights as W

__all__ = [
    "ClassificationError",
    "WindingError",
    "OneF2Params",
    "RegionVerdict",
    "TransferPath",
    "phi_eval",
    "phi_deriv",
    "hankel_spec",
    "classify_region",
    "transfer_search",
    "operator_identity_check",
    "complex_zero_count",
    "zeta_sum_check",
    "region_grid",
    "RegionGrid",
    "RegionOverlay",
]


class ClassificationError(RuntimeError):
    """A parameter pair certified both LP and NotLP; impossible by theory."""


class WindingError(RuntimeError):
    """Boundary winding failed to settle on an integer after retries."""


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and float(x).is_integer()


@dataclass(frozen=True)
class OneF2Params:
    """Triple (a, b, c) with neither b nor c a non-positive integer."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("b", "c"):
            if _is_nonpositive_integer(getattr(self, name)):
                raise ValueError(f"parameter {name} must not be a non-positive integer")


# ---------------------------------------------------------------------------
# evaluation


def _phi_series_vec(params, z, dtype):
    """(values, peak |term|) of the defining series, vectorized over z."""
    a, b, c = params.a, params.b, params.c
    z = np.asarray(z, dtype)
    w = -((z / 2.0) ** 2)
    term = np.ones_like(w)
    acc = term.copy()
    peak = np.abs(term).astype(np.longdouble)
    hump = float(np.max(np.abs(w))) if w.size else 0.0
    one = np.longdouble(1.0)
    aL, bL, cL = (np.longdouble(v) for v in (a, b, c))
    for k in range(3000):
        term = term * ((aL + k) * w / ((bL + k) * (cL + k) * (k + one)))
        acc = acc + term
        np.maximum(peak, np.abs(term).astype(np.longdouble), out=peak)
        if (abs(b + k) * abs(c + k) * (k + 1.0)) > hump * (abs(a + k) + 1.0):
            if np.all(np.abs(term) <= 1e-22 * peak):
                break
    return acc, peak


def _phi_mp(params, z):
    z = complex(z)
    lost = max(0.0, 0.4343 * (abs(z) - abs(z.imag)))
    with mpmath.workdps(int(lost) + 25):
        w = -((mpmath.mpc(z.real, z.imag) / 2) ** 2)
        val = mpmath.hyper([params.a], [params.b, params.c], w)
        return complex(val)


def phi_eval(params: OneF2Params, z: complex, k_terms: int | None = None) -> complex:
    """phi(z) = 1F2(a; b, c; -z^2/4); even, phi(0) = 1.

    The series is summed in extended precision with a cancellation estimate;
    points whose alternating loss exceeds the budget escalate to arbitrary
    precision.  With `k_terms` given, exactly that many terms are summed and
    a truncation failure raises an explicit report.
    """
    z = complex(z)
    if z == 0:
        return complex(1.0)
    if k_terms is not None:
        a, b, c = params.a, params.b, params.c
        w = -((complex(z) / 2.0) ** 2)
        term = complex(1.0)
        acc = complex(1.0)
        for k in range(int(k_terms)):
            term *= (a + k) * w / ((b + k) * (c + k) * (k + 1.0))
            acc += term
        nxt = term * (a + k_terms) * w / (
            (b + k_terms) * (c + k_terms) * (k_terms + 1.0)
        )
        if abs(nxt) >= 1e-15 * abs(acc):
            raise H.TruncationError(
                f"series truncated at K = {k_terms} with next term "
                f"{abs(nxt):.3e} above 1e-15 of the running sum",
                terms_used=int(k_terms),
                last_term=abs(nxt),
            )
        return acc
    vals, peak = _phi_series_vec(params, np.array([z]), np.clongdouble)
    value = complex(vals[0])
    if float(peak[0]) * H._LD_EPS > 1e-11 * abs(value):
        return _phi_mp(params, z)
    return value


def phi_deriv(params: OneF2Params, z: complex) -> complex:
    """phi'(z) by termwise differentiation of the defining series."""
    z = complex(z)
    if z == 0:
        return complex(0.0)
    a, b, c = params.a, params.b, params.c
    zc = np.clongdouble(z)
    w = -((zc / 2.0) ** 2)
    term = np.clongdouble(1.0)
    acc = np.clongdouble(0.0)
    peak = np.longdouble(0.0)
    k = 0
    while True:
        term = term * ((a + k) * w / ((b + k) * (c + k) * (k + 1.0)))
        k += 1
        contrib = term * (2.0 * k) / zc
        acc = acc + contrib
        peak = max(peak, abs(contrib))
        if abs(contrib) < 1e-18 * max(abs(acc), peak * H._LD_EPS) and (
            (b + k) * (c + k) * (k + 1.0) > abs(w) * (abs(a + k) + 1.0)
        ):
            break
        if k > 5000:
            raise H.TruncationError("derivative series did not converge")
    if peak * H._LD_EPS > 1e-9 * abs(acc):
        lost = max(0.0, 0.4343 * (abs(z) - abs(z.imag)))
        with mpmath.workdps(int(lost) + 25):
            zz = mpmath.mpc(z.real, z.imag)
            f = lambda t: mpmath.hyper([a], [b, c], -((t / 2) ** 2))
            return complex(mpmath.diff(f, zz))
    return complex(acc)


def _phi_batch(params, zs, rel_target=1e-8):
    """Vectorized ladder evaluation of phi over an array of points."""
    zs = np.asarray(zs, complex)
    vals, peak = _phi_series_vec(params, zs, np.complex128)
    vals = vals.astype(complex)
    err = peak.astype(float) * 2.3e-16
    bad = err > rel_target * np.abs(vals)
    if bad.any():
        v2, p2 = _phi_series_vec(params, zs[bad], np.clongdouble)
        vals[bad] = v2.astype(complex)
        err2 = p2.astype(float) * H._LD_EPS
        still = err2 > rel_target * np.abs(vals[bad])
        if still.any():
            idx = np.flatnonzero(bad)[still]
            for i in idx:
                vals[i] = _phi_mp(params, complex(zs[i]))
    return vals


# ---------------------------------------------------------------------------
# transform representation


def hankel_spec(params: OneF2Params):
    """(transform spec, swapped) realizing phi as a transform of order c-1
    (after swapping b and c if needed so the weight slot exceeds a).

    Requires one denominator parameter strictly above a; equality makes phi
    a plain normalized Bessel function handled by the callers directly."""
    a, b, c = params.a, params.b, params.c
    if not a > 0:
        raise ValueError("the integral representation needs a > 0")

    def build(bb, cc, swapped):
        amp = 2.0 / math.exp(math.lgamma(a) + math.lgamma(bb - a) - math.lgamma(bb))
        spec = H.TransformSpec(
            cc - 1.0, W.BetaPower(amp, bb - a - 1.0, 2.0 * a - cc - 0.5)
        )
        return spec, swapped

    candidates = []
    if b > a and c > 0:
        candidates.append((b, c, False))
    if c > a and b > 0:
        candidates.append((c, b, True))
    errors = []
    for bb, cc, swapped in candidates:
        try:
            return build(bb, cc, swapped)
        except W.IntegrabilityError as exc:
            errors.append(str(exc))
    if errors:
        raise W.IntegrabilityError("; ".join(errors))
    raise ValueError(
        f"no integral representation: neither b = {b} nor c = {c} exceeds a = {a}"
    )


# ---------------------------------------------------------------------------
# region classification


@dataclass(frozen=True)
class _Interval:
    lo: float
    hi: float
    lo_open: bool
    hi_open: bool

    def contains(self, x: float) -> bool:
        lo_ok = x > self.lo if self.lo_open else x >= self.lo
        hi_ok = x < self.hi if self.hi_open else x <= self.hi
        return lo_ok and hi_ok


def _z_c_intervals(a):
    """Second-coordinate intervals of the reality region (first in (a, a+1])."""
    if not a > 0.5:
        return []
    if a < 1.0:
        return [_Interval(1.0 - a, 2.0 * a - 0.5, False, False)]
    return [_Interval(0.0, 0.5 * a + 1.0, True, False)]


def _x_c_intervals(a):
    """Second-coordinate intervals of the extended rectangle (first in (0, a+1])."""
    if not a > 0.5:
        return []
    if a <= 0.75:
        return [_Interval(1.0 - a, 2.0 * a - 0.5, False, False)]
    if a <= 5.0 / 6.0:
        return [
            _Interval(0.0, 2.0 * a - 1.5, True, False),
            _Interval(1.0 - a, 2.0 * a - 0.5, False, False),
        ]
    if a < 1.0:
        return [_Interval(0.0, 2.0 * a - 0.5, True, False)]
    return [_Interval(0.0, 0.5 * (a + math.floor(a - 1.0)) + 1.0, True, False)]


def _in_n(a, b, c):
    return b <= a or c <= a or b + c < 3.0 * a + 0.5


def _in_p_oriented(a, b, c):
    return b > a and c >= max(3.0 * a + 0.5 - b, a + a / (2.0 * (b - a)))


def _in_p(a, b, c):
    return _in_p_oriented(a, b, c) or _in_p_oriented(a, c, b)


def _in_s(a, b, c):
    return (b == a + 0.5 and c == 2.0 * a) or (b == 2.0 * a and c == a + 0.5)


def _near_s(a, b, c, tol=1e-9):
    return (
        max(abs(b - (a + 0.5)), abs(c - 2.0 * a)) <= tol
        or max(abs(b - 2.0 * a), abs(c - (a + 0.5))) <= tol
    )


def _in_z(a, b, c):
    ivals = _z_c_intervals(a)
    return any(
        (a < x <= a + 1.0) and iv.contains(y)
        for iv in ivals
        for x, y in ((b, c), (c, b))
    )


def _in_x(a, b, c):
    ivals = _x_c_intervals(a)
    return any(
        (0.0 < x <= a + 1.0) and iv.contains(y)
        for iv in ivals
        for x, y in ((b, c), (c, b))
    )


def _is_int(x, tol=1e-9):
    # integrality of parameter differences; a tolerance absorbs float noise
    # like 1.7 - 2.7 != -1 exactly (interval boundaries stay exact compares)
    return abs(x - round(x)) <= tol


def _in_type1(a, b, c):
    # integer shifts of the Bessel line b = a, any c > 0; the shifted slot
    # must stay positive for the shift constraints to admit a valid tuple
    if not (b > 0 and c > 0):
        return False
    return (_is_int(a - b) and a - b >= 0) or (_is_int(a - c) and a - c >= 0)


def _type2_shifts(a, b, c):
    """(m, n, l) landing (a, b, c) on the squared-Bessel pattern, or None."""
    m = 0
    while True:
        alpha = a - m
        if not alpha > -0.5:
            return None
        if alpha != 0.0:
            for bb, cc, swapped in ((b, c, False), (c, b, True)):
                n = bb - (alpha + 0.5)
                ell = cc - 2.0 * alpha
                if _is_int(n) and _is_int(ell) and n <= m and ell <= m and bb > 0 and cc > 0:
                    return m, int(round(n)), int(round(ell)), swapped
        m += 1


def _in_type2(a, b, c):
    return _type2_shifts(a, b, c) is not None


def _in_type3(a, b, c):
    if b <= 0 or c <= 0:
        return False
    m = a - 0.5
    if not (_is_int(m) and m >= 0):
        return False
    k = b + c
    return _is_int(k) and 1.0 <= k <= 2.0 * m + 2.0


@dataclass(frozen=True)
class RegionVerdict:
    a: float
    b: float
    c: float
    memberships: tuple
    lp: str          # "LP" | "NotLP" | "Undetermined"
    certificate: str
    near_singular: bool  # within 1e-9 of the squared-Bessel points

    def to_json(self) -> str:
        return json.dumps(
            {
                "a": self.a,
                "b": self.b,
                "c": self.c,
                "memberships": list(self.memberships),
                "lp": self.lp,
                "certificate": self.certificate,
            },
            indent=2,
        )


def classify_region(params: OneF2Params) -> RegionVerdict:
    """Exact membership tests with the boundary inclusions as printed; LP if
    any sufficient set fires, NotLP on the positivity region minus the
    squared-Bessel points, Undetermined otherwise (never extrapolated)."""
    a, b, c = params.a, params.b, params.c
    memberships = []
    evidence = []

    if a > 0:
        if _in_n(a, b, c):
            memberships.append("N_a")
        if _in_p(a, b, c):
            memberships.append("P_a")
        if _in_s(a, b, c):
            memberships.append("S_a")
            evidence.append("squared-Bessel point: real double zeros")
        if _in_z(a, b, c):
            memberships.append("Z_a")
            evidence.append("reality region: zeros real, simple, interlaced")
        if _in_x(a, b, c):
            memberships.append("X_a")
            evidence.append("shift-extended rectangle")
    if _in_type1(a, b, c):
        memberships.append("Type1")
        evidence.append("integer shift of the Bessel line b = a")
    if _in_type2(a, b, c):
        memberships.append("Type2")
        shifts = _type2_shifts(a, b, c)
        evidence.append(f"squared-Bessel pattern under shifts (m, n, l) = {shifts[:3]}")
    if _in_type3(a, b, c):
        memberships.append("Type3")
        evidence.append(f"half-integer family on the segment b + c = {b + c:g}")

    lp_sets = {"S_a", "Z_a", "X_a", "Type1", "Type2", "Type3"}
    lp_fired = [m for m in memberships if m in lp_sets]
    notlp = a > 0 and "P_a" in memberships and "S_a" not in memberships
    if lp_fired and notlp:
        raise ClassificationError(
            f"(a, b, c) = ({a}, {b}, {c}) certified LP via {lp_fired} and "
            "NotLP via the positivity region; the sets cannot intersect"
        )
    if lp_fired:
        lp = "LP"
        certificate = "; ".join(evidence)
    elif notlp:
        lp = "NotLP"
        grid_val = max(3.0 * a + 0.5 - b, a + a / (2.0 * (b - a))) if b > a else max(
            3.0 * a + 0.5 - c, a + a / (2.0 * (c - a))
        )
        certificate = (
            "positive on the real axis, not a squared-Bessel point: "
            f"c-threshold {grid_val:.6g} met; at least four complex zeros"
        )
    else:
        lp = "Undetermined"
        certificate = "outside every sufficient set and the positivity region"
    return RegionVerdict(
        a=a,
        b=b,
        c=c,
        memberships=tuple(memberships),
        lp=lp,
        certificate=certificate,
        near_singular=a > 0 and _near_s(a, b, c) and not _in_s(a, b, c),
    )


# ---------------------------------------------------------------------------
# transference search


@dataclass(frozen=True)
class TransferPath:
    """Integer shifts (m, n, l) from a named seed family:
    target = (a_seed + m, b_seed + n, c_seed + l), with m >= 0,
    -b_seed < n <= m and -c_seed < l <= m."""

    family: str
    seed: tuple
    shifts: tuple

    def replay(self) -> tuple:
        (sa, sb, sc), (m, n, ell) = self.seed, self.shifts
        return (sa + m, sb + n, sc + ell)


def _seed_candidates(params, m):
    """Valid shift paths with numerator shift exactly m, ordered by (n, l)."""
    a, b, c = params.a, params.b, params.c
    alpha = a - m
    out = []

    def consider(family, seed, n, ell):
        sa, sb, sc = seed
        if sb <= 0 or sc <= 0:
            return
        if not (-sb < n <= m and -sc < ell <= m):
            return
        if _is_nonpositive_integer(sb) or _is_nonpositive_integer(sc):
            return
        out.append(TransferPath(family=family, seed=seed, shifts=(m, int(n), int(ell))))

    # plain Bessel line: seed (alpha, alpha, c - l)
    if not _is_nonpositive_integer(alpha):
        if _is_int(b - alpha):
            consider("Type1", (alpha, alpha, c), int(round(b - alpha)), 0)
        if _is_int(c - alpha):
            consider("Type1", (alpha, b, alpha), 0, int(round(c - alpha)))
    # squared-Bessel pattern: seed (alpha, alpha + 1/2, 2 alpha)
    if alpha > -0.5 and alpha != 0.0:
        for sb, sc, nn, ll in (
            (alpha + 0.5, 2 * alpha, b - (alpha + 0.5), c - 2 * alpha),
            (2 * alpha, alpha + 0.5, b - 2 * alpha, c - (alpha + 0.5)),
        ):
            if _is_int(nn) and _is_int(ll):
                consider("Type2", (alpha, sb, sc), int(round(nn)), int(round(ll)))
    # Bessel-product family: seed (1/2, b0, 2 - b0)
    if alpha == 0.5 and _is_int(b + c - 2.0):
        total = int(round(b + c - 2.0))
        n_lo = max(total - m, int(math.floor(b - 2.0)) + 1)
        for n in range(n_lo, m + 1):
            ell = total - n
            sb, sc = b - n, c - ell
            if 0.0 < sb < 2.0 and 0.0 < sc < 2.0:
                consider("Type3", (0.5, sb, sc), n, ell)
    # reality region / extended rectangle seeds
    if alpha > 0.5:
        for region, first_lo, ivals in (
            ("Z", alpha, _z_c_intervals(alpha)),
            ("X", 0.0, _x_c_intervals(alpha)),
        ):
            for bb, cc, tag in ((b, c, ""), (c, b, "*")):
                n_lo = int(math.ceil(bb - (alpha + 1.0) - 1e-12))
                for n in range(n_lo, m + 1):
                    sb = bb - n
                    if not first_lo < sb <= alpha + 1.0:
                        continue
                    for iv in ivals:
                        l_lo = int(math.ceil(cc - iv.hi - 1e-12))
                        for ell in range(l_lo, m + 1):
                            sc = cc - ell
                            if iv.contains(sc):
                                # record shifts in the orientation used
                                if not tag:
                                    consider(f"{region}-region", (alpha, sb, sc), n, ell)
                                else:
                                    consider(f"{region}-region", (alpha, sc, sb), ell, n)
    out.sort(key=lambda path: (path.shifts[1], path.shifts[2], path.family))
    return out


def transfer_search(params: OneF2Params, max_shift: int = 16) -> TransferPath | None:
    """Smallest integer shift tuple (m, then n, then l) landing the triple on
    a known LP seed family; None when no path exists within the budget."""
    if max_shift > 64:
        raise ValueError("shift budget capped at 64")
    for m in range(0, int(max_shift) + 1):
        for path in _seed_candidates(params, m):
            replayed = path.replay()
            if max(abs(r - t) for r, t in zip(replayed, (params.a, params.b, params.c))) < 1e-9:
                return path
    return None


# ---------------------------------------------------------------------------
# differential shift identities


def operator_identity_check(params: OneF2Params, which: int, z: complex) -> float:
    """Residual of the three parameter-shift identities:

    1: z phi'(z) = -a z^2/(2 b c) * 1F2(a+1; b+1, c+1; -z^2/4)
    2: [z d/dz + 2(b-1)] phi = 2(b-1) * 1F2(a; b-1, c; -z^2/4)   (b != 1)
    3: [z d/dz + 2(c-1)] phi = 2(c-1) * 1F2(a; b, c-1; -z^2/4)   (c != 1)
    """
    a, b, c = params.a, params.b, params.c
    z = complex(z)
    zdphi = z * phi_deriv(params, z)
    if which == 1:
        if a == 0:
            raise ValueError("identity 1 requires a != 0")
        rhs = -a * z * z / (2.0 * b * c) * phi_eval(OneF2Params(a + 1, b + 1, c + 1), z)
        return abs(zdphi - rhs)
    if which == 2:
        if b == 1.0:
            raise ValueError("identity 2 requires b != 1")
        lhs = zdphi + 2.0 * (b - 1.0) * phi_eval(params, z)
        rhs = 2.0 * (b - 1.0) * phi_eval(OneF2Params(a, b - 1.0, c), z)
        return abs(lhs - rhs)
    if which == 3:
        if c == 1.0:
            raise ValueError("identity 3 requires c != 1")
        lhs = zdphi + 2.0 * (c - 1.0) * phi_eval(params, z)
        rhs = 2.0 * (c - 1.0) * phi_eval(OneF2Params(a, b, c - 1.0), z)
        return abs(lhs - rhs)
    raise ValueError("which must be 1, 2 or 3")


# ---------------------------------------------------------------------------
# argument-principle zero counting


def _rect_boundary(rect, points_per_unit=3.0, minimum=33):
    x0, x1, y0, y1 = rect
    corners = [
        complex(x0, y0),
        complex(x1, y0),
        complex(x1, y1),
        complex(x0, y1),
        complex(x0, y0),
    ]
    pts = []
    for s, e in zip(corners[:-1], corners[1:]):
        n = max(minimum, int(abs(e - s) * points_per_unit))
        seg = s + (e - s) * np.linspace(0.0, 1.0, n, endpoint=False)
        pts.append(seg)
    pts.append(np.array([corners[-1]]))
    return np.concatenate(pts)


def _winding_once(params, rect):
    pts = _rect_boundary(rect)
    vals = _phi_batch(params, pts)
    shifted = OneF2Params(params.a + 1.0, params.b + 1.0, params.c + 1.0)
    dscale = -params.a / (2.0 * params.b * params.c)
    for _ in range(60):
        if np.any(vals == 0.0) or np.any(~np.isfinite(vals)):
            raise WindingError("zero or non-finite value on the boundary")
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(dphi) >= 0.5 * math.pi
        if not bad.any():
            total = float(np.sum(dphi))
            # cross-check: trapezoid of phi'/phi along the same path, with
            # phi' through the parameter-shift identity (vectorized)
            g = dscale * pts * _phi_batch(shifted, pts) / vals
            integral = np.sum((pts[1:] - pts[:-1]) * (g[1:] + g[:-1]) / 2.0)
            if abs(integral.imag - total) > 0.2 * 2.0 * math.pi:
                raise WindingError(
                    f"phase tracking ({total / (2 * math.pi):.3f}) disagrees "
                    f"with the logarithmic integral "
                    f"({integral.imag / (2 * math.pi):.3f})"
                )
            winding = total / (2.0 * math.pi)
            if abs(winding - round(winding)) > 0.25:
                raise WindingError(f"non-integer winding {winding:.3f}")
            return int(round(winding))
        if len(pts) > 200_000:
            raise WindingError("boundary refinement exploded")
        mids = (pts[:-1][bad] + pts[1:][bad]) / 2.0
        mvals = _phi_batch(params, mids)
        order = np.argsort(np.concatenate([np.arange(len(pts), dtype=float),
                                           np.flatnonzero(bad) + 0.5]))
        pts = np.concatenate([pts, mids])[order]
        vals = np.concatenate([vals, mvals])[order]
    raise WindingError("phase steps did not settle below pi/2")


def complex_zero_count(params: OneF2Params, rect) -> int:
    """Number of zeros inside the axis-aligned rectangle (x0, x1, y0, y1) by
    the winding of phi along its boundary, with phase-continuity tracking and
    up to three 1e-3 perturbation retries when the boundary runs too close to
    a zero."""
    x0, x1, y0, y1 = (float(v) for v in rect)
    if not (x0 < x1 and y0 < y1):
        raise ValueError("rectangle must satisfy x0 < x1 and y0 < y1")
    nudge = 0.0
    last = None
    for attempt in range(4):
        try:
            return _winding_once(params, (x0 - nudge, x1 + nudge, y0 - nudge, y1 + nudge))
        except WindingError as exc:
            last = exc
            nudge = 1e-3 * (attempt + 1)
    raise WindingError(f"winding failed after 3 perturbation retries: {last}")


# ---------------------------------------------------------------------------
# zero sums through the transform representation


def zeta_sum_check(params: OneF2Params, zero_count: int = 200):
    """(lhs, rhs, gap): tail-corrected sum of 1/zeta_k^2 over located zeros
    against the closed form a/(4 b c)."""
    from . import zeros as Zmod

    a, b, c = params.a, params.b, params.c
    rhs = a / (4.0 * b * c)
    if b == a or c == a:
        order = (c if b == a else b) - 1.0
        lhs = Zmod.bessel_zero_square_sum(order, int(zero_count))
    else:
        spec, _ = hankel_spec(params)
        zl = Zmod.locate_zeros(spec, int(zero_count))
        lhs = Zmod.tail_corrected_power_sum(zl.zeta, 2.0)
    return lhs, rhs, abs(lhs - rhs)


# ---------------------------------------------------------------------------
# region grids and overlay geometry


@dataclass(frozen=True)
class RegionOverlay:
    """Measure-zero LP sets as explicit geometry in the (b, c) plane."""

    segments: tuple    # ((b0, c0, b1, c1, label), ...)
    rays: tuple        # ((b0, c0, b1, c1, label), ...) clipped to the window
    points: tuple      # ((b, c, label), ...)
    rectangles: tuple  # ((b0, c0, b1, c1, label), ...)


@dataclass(frozen=True)
class RegionGrid:
    a: float
    b_axis: np.ndarray
    c_axis: np.ndarray
    codes: np.ndarray  # 0 undetermined, 1 LP, 2 NotLP
    overlay: RegionOverlay

    def __post_init__(self):
        self.b_axis.setflags(write=False)
        self.c_axis.setflags(write=False)
        self.codes.setflags(write=False)


def _overlay_geometry(a, b_range, c_range):
    b0, b1 = b_range
    c0, c1 = c_range
    segments, rays, points, rectangles = [], [], [], []
    # Bessel-line shifts: vertical/horizontal rays at b (or c) = a - k > 0
    k = 0
    while a - k > 0 and k <= 64:
        x = a - k
        rays.append((x, max(c0, 0.0), x, c1, f"b = {x:g}"))
        rays.append((max(b0, 0.0), x, b1, x, f"c = {x:g}"))
        k += 1
    # half-integer product segments b + c = k, clipped to the window
    m = a - 0.5
    if _is_int(m) and m >= 0:
        for k in range(1, int(2 * m + 2) + 1):
            lo = max(0.0, b0, k - c1)
            hi = min(float(k), b1, k - max(c0, 0.0))
            if lo < hi:
                segments.append((lo, k - lo, hi, k - hi, f"b + c = {k}"))
    # squared-Bessel points and their integer-shift lattice
    seen = set()
    mshift = 0
    while a - mshift > -0.5:
        alpha = a - mshift
        if alpha > -0.5 and alpha != 0.0:
            for base_b, base_c in ((alpha + 0.5, 2 * alpha), (2 * alpha, alpha + 0.5)):
                for n in range(-int(math.ceil(base_b)) + 1, mshift + 1):
                    for ell in range(-int(math.ceil(base_c)) + 1, mshift + 1):
                        pb, pc = base_b + n, base_c + ell
                        if (pb, pc) in seen or pb <= 0 or pc <= 0:
                            continue
                        if b0 <= pb <= b1 and c0 <= pc <= c1:
                            seen.add((pb, pc))
                            points.append((pb, pc, "squared-Bessel shift"))
        mshift += 1
    # extended rectangles (largest interval variant and its mirror)
    for iv in _x_c_intervals(a):
        rectangles.append((0.0, iv.lo, a + 1.0, iv.hi, "X_a"))
        rectangles.append((iv.lo, 0.0, iv.hi, a + 1.0, "X_a*"))
    return RegionOverlay(
        segments=tuple(segments),
        rays=tuple(rays),
        points=tuple(sorted(points)),
        rectangles=tuple(rectangles),
    )


def region_grid(a: float, b_range=(0.0, 8.0), c_range=(0.0, 8.0), resolution: int = 160) -> RegionGrid:
    """Classify an evenly spaced grid of (b, c) pairs (cell centers) and
    collect the measure-zero LP sets as explicit overlay geometry."""
    resolution = int(resolution)
    if not 1 <= resolution <= 2000:
        raise ValueError("resolution must be in 1..2000")
    a = float(a)
    b0, b1 = (float(v) for v in b_range)
    c0, c1 = (float(v) for v in c_range)
    bs = b0 + (np.arange(resolution) + 0.5) * (b1 - b0) / resolution
    cs = c0 + (np.arange(resolution) + 0.5) * (c1 - c0) / resolution
    B, C = np.meshgrid(bs, cs, indexing="ij")

    lp = np.zeros(B.shape, bool)
    notlp = np.zeros(B.shape, bool)
    if a > 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            pmask = np.zeros(B.shape, bool)
            for X, Y in ((B, C), (C, B)):
                thr = np.maximum(3.0 * a + 0.5 - X, a + a / (2.0 * (X - a)))
                pmask |= (X > a) & (Y >= thr)
        smask = ((B == a + 0.5) & (C == 2.0 * a)) | ((B == 2.0 * a) & (C == a + 0.5))
        zmask = np.zeros(B.shape, bool)
        for iv in _z_c_intervals(a):
            for X, Y in ((B, C), (C, B)):
                in_iv = (Y > iv.lo if iv.lo_open else Y >= iv.lo) & (
                    Y < iv.hi if iv.hi_open else Y <= iv.hi
                )
                zmask |= (X > a) & (X <= a + 1.0) & in_iv
        xmask = np.zeros(B.shape, bool)
        for iv in _x_c_intervals(a):
            for X, Y in ((B, C), (C, B)):
                in_iv = (Y > iv.lo if iv.lo_open else Y >= iv.lo) & (
                    Y < iv.hi if iv.hi_open else Y <= iv.hi
                )
                xmask |= (X > 0.0) & (X <= a + 1.0) & in_iv
        lp |= smask | zmask | xmask
        notlp = pmask & ~smask
    # measure-zero families evaluated exactly on cell centers
    t1 = np.zeros(B.shape, bool)
    for X, Y in ((B, C), (C, B)):
        d = a - X
        t1 |= (Y > 0) & (d >= 0) & (np.round(d) == d)
    lp |= t1
    m = 0
    while a - m > -0.5:
        alpha = a - m
        if alpha != 0.0:
            for sb, sc in ((alpha + 0.5, 2 * alpha), (2 * alpha, alpha + 0.5)):
                n = B - sb
                ell = C - sc
                lp |= (
                    (np.round(n) == n)
                    & (np.round(ell) == ell)
                    & (n <= m)
                    & (ell <= m)
                    & (B > 0)
                    & (C > 0)
                )
        m += 1
    mhalf = a - 0.5
    if _is_int(mhalf) and mhalf >= 0:
        k = B + C
        lp |= (np.round(k) == k) & (k >= 1.0) & (k <= 2.0 * mhalf + 2.0) & (B > 0) & (C > 0)

    if np.any(lp & notlp):
        raise ClassificationError("grid produced overlapping LP and NotLP cells")
    codes = np.zeros(B.shape, np.int8)
    codes[lp] = 1
    codes[notlp] = 2
    return RegionGrid(
        a=a,
        b_axis=bs,
        c_axis=cs,
        codes=codes,
        overlay=_overlay_geometry(a, (b0, b1), (c0, c1)),
    )
