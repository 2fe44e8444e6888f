"""Weight functions f(t) on (0, 1): the integrand family of the transforms.

Three variants are supported:

* ``BetaPower``  -- f(t) = C (1 - t^2)^p t^q, the analytic family,
* ``Step``       -- piecewise constant with breakpoints strictly inside (0, 1),
* ``Tabulated``  -- monotone piecewise-cubic interpolant through sample data.

Breakpoints of step weights keep exact rational arithmetic when supplied as
fractions or decimal strings; floats are never classified as rational, since
rationality is a number-theoretic property that a float cannot witness.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

__all__ = [
    "IntegrabilityError",
    "WeightFunction",
    "BetaPower",
    "Step",
    "Tabulated",
    "MomentSequence",
    "validate_integrability",
    "moment",
    "moment_sequence",
    "is_exceptional",
    "monotonicity_check",
    "parse_weight",
    "tabulated_from_csv",
]


class IntegrabilityError(ValueError):
    """The weight fails the integrability condition for the requested order."""


@dataclass(frozen=True)
class BetaPower:
    """f(t) = amplitude * (1 - t^2)^p * t^q on (0, 1)."""

    amplitude: float
    p: float
    q: float

    def __post_init__(self):
        if not self.amplitude > 0:
            raise ValueError("amplitude must be positive")

    def __call__(self, t):
        t = np.asarray(t, float)
        return self.amplitude * (1.0 - t * t) ** self.p * t**self.q


@dataclass(frozen=True)
class Step:
    """Piecewise-constant weight: values[i] on (edges[i], edges[i+1]) where
    edges = (0, *breakpoints, 1).  Rational breakpoints stay exact."""

    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bp = tuple(self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", vals)
        floats = self.float_breakpoints
        if len(vals) != len(bp) + 1:
            raise ValueError("need exactly one value per piece (breakpoints + 1)")
        if any(not 0.0 < b < 1.0 for b in floats):
            raise ValueError("breakpoints must lie strictly inside (0, 1)")
        if any(floats[i] >= floats[i + 1] for i in range(len(floats) - 1)):
            raise ValueError("breakpoints must be strictly increasing")
        if any(v <= 0.0 for v in vals):
            raise ValueError("step values must be positive")

    @property
    def float_breakpoints(self) -> tuple:
        return tuple(float(b) for b in self.breakpoints)

    def __call__(self, t):
        t = np.asarray(t, float)
        idx = np.searchsorted(np.asarray(self.float_breakpoints), t, side="right")
        return np.asarray(self.values, float)[idx]


@dataclass(frozen=True)
class Tabulated:
    """Weight defined by data points, interpolated by a monotone piecewise
    cubic (keeps positivity of positive data, no overshoot)."""

    nodes: tuple
    values: tuple

    def __post_init__(self):
        nodes = tuple(float(x) for x in self.nodes)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", vals)
        if len(nodes) != len(vals) or len(nodes) < 2:
            raise ValueError("need at least two (t, f) samples")
        if any(nodes[i] >= nodes[i + 1] for i in range(len(nodes) - 1)):
            raise ValueError("nodes must be strictly increasing")
        if not (0.0 <= nodes[0] and nodes[-1] <= 1.0):
            raise ValueError("nodes must lie in [0, 1]")
        if any(v <= 0.0 for v in vals):
            raise ValueError("tabulated values must be positive")

    @property
    def _interp(self):
        interp = getattr(self, "_interp_cache", None)
        if interp is None:
            interp = PchipInterpolator(np.asarray(self.nodes), np.asarray(self.values))
            object.__setattr__(self, "_interp_cache", interp)
        return interp

    def __call__(self, t):
        t = np.asarray(t, float)
        # constant extension outside the sampled range
        clipped = np.clip(t, self.nodes[0], self.nodes[-1])
        return self._interp(clipped)


WeightFunction = BetaPower | Step | Tabulated


@dataclass(frozen=True)
class IntegrabilityReport:
    ok: bool
    detail: str

    def __bool__(self) -> bool:
        return self.ok


def validate_integrability(f: WeightFunction, nu: float) -> IntegrabilityReport:
    """Order-dependent integrability: plain integrability of |f| for
    nu >= -1/2, integrability of t^(nu+1/2) |f| for -1 < nu < -1/2."""
    nu = float(nu)
    if not nu > -1.0:
        return IntegrabilityReport(False, f"order {nu} is out of range (need > -1)")
    if isinstance(f, BetaPower):
        q_eff = f.q if nu >= -0.5 else f.q + nu + 0.5
        if f.p <= -1.0:
            return IntegrabilityReport(
                False, f"(1-t^2)^p endpoint diverges: p = {f.p} <= -1"
            )
        if q_eff <= -1.0:
            return IntegrabilityReport(
                False,
                f"t-power endpoint diverges: effective exponent {q_eff} <= -1",
            )
        return IntegrabilityReport(True, "beta-power weight integrable")
    # step and tabulated weights are bounded
    return IntegrabilityReport(True, "bounded weight is always integrable")


def moment(f: WeightFunction, nu: float, k: int) -> float:
    """k-th moment  beta_k = integral_0^1 t^(2k + nu + 1/2) f(t) dt.

    Closed form for beta-power weights, exact piecewise integration for step
    weights, adaptive quadrature (1e-10 target) for tabulated ones.
    """
    report = validate_integrability(f, nu)
    if not report:
        raise IntegrabilityError(report.detail)
    k = int(k)
    if k < 0:
        raise ValueError("moment index must be >= 0")
    e = 2.0 * k + nu + 0.5
    if isinstance(f, BetaPower):
        # substitute u = t^2: (C/2) * B((e + q + 1)/2, p + 1)
        x = (e + f.q + 1.0) / 2.0
        y = f.p + 1.0
        return (
            0.5
            * f.amplitude
            * math.exp(math.lgamma(x) + math.lgamma(y) - math.lgamma(x + y))
        )
    if isinstance(f, Step):
        edges = np.array([0.0, *f.float_breakpoints, 1.0])
        vals = np.asarray(f.values)
        return float(np.sum(vals * np.diff(edges ** (e + 1.0))) / (e + 1.0))
    val, err = quad(
        lambda t: t**e * float(f(t)),
        0.0,
        1.0,
        points=list(f.nodes),
        limit=200,
        epsabs=1e-12,
        epsrel=1e-12,
    )
    if err > 1e-10 * max(1.0, abs(val)):
        raise IntegrabilityError(
            f"tabulated moment quadrature error {err:.2e} exceeds target"
        )
    return float(val)


@dataclass(frozen=True)
class MomentSequence:
    nu: float
    beta: np.ndarray

    def __post_init__(self):
        self.beta.setflags(write=False)


def moment_sequence(f: WeightFunction, nu: float, count: int) -> MomentSequence:
    """beta_0 .. beta_count; validates positivity and strict decrease."""
    beta = np.array([moment(f, nu, k) for k in range(count + 1)])
    if np.any(beta <= 0.0):
        raise ValueError("moments of a positive weight must be positive")
    if np.any(np.diff(beta) >= 0.0):
        raise ValueError("moments must decrease strictly (t^2 < 1 on (0,1))")
    return MomentSequence(nu=float(nu), beta=beta)


def is_exceptional(f: WeightFunction) -> bool:
    """Step weight with all breakpoints exactly rational (includes the
    trivial no-jump case); the sign-pattern guarantee at |nu| = 1/2 excludes
    exactly this class."""
    if not isinstance(f, Step):
        return False
    return all(isinstance(b, (Fraction, int)) for b in f.breakpoints)


def monotonicity_check(f: WeightFunction, exponent: float) -> bool:
    """Is t -> t^exponent * f(t) nondecreasing on the open interval (0, 1)?

    Beta-power weights are decided in closed form from the derivative sign
    (e + q) (1 - t^2) - 2 p t^2; any p > 0 forces decrease near t = 1.
    Step and tabulated weights are checked by dense sampling.
    """
    exponent = float(exponent)
    if isinstance(f, BetaPower):
        return exponent + f.q >= 0.0 and f.p <= 0.0
    grid = np.linspace(1.0 / 4096.0, 1.0 - 1.0 / 4096.0, 2048)
    g = grid**exponent * f(grid)
    scale = np.max(np.abs(g))
    return bool(np.all(np.diff(g) >= -1e-12 * scale))


# ---------------------------------------------------------------------------
# CLI weight grammar: beta:C,p,q | step:b1,v1;b2,v2;...;1,vlast | table:path.csv


def _rational_or_float(text: str):
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def parse_weight(text: str) -> WeightFunction:
    kind, _, body = text.partition(":")
    kind = kind.strip().lower()
    if kind == "beta":
        parts = [float(x) for x in body.split(",")]
        if len(parts) != 3:
            raise ValueError("beta weight needs C,p,q")
        return BetaPower(amplitude=parts[0], p=parts[1], q=parts[2])
    if kind == "step":
        pairs = [seg.split(",") for seg in body.split(";") if seg.strip()]
        if not pairs or any(len(p) != 2 for p in pairs):
            raise ValueError("step weight needs b1,v1;b2,v2;...;1,vlast")
        bounds = [_rational_or_float(b.strip()) for b, _ in pairs]
        values = [float(v) for _, v in pairs]
        if float(bounds[-1]) != 1.0:
            raise ValueError("the final step segment must end at t = 1")
        return Step(breakpoints=tuple(bounds[:-1]), values=tuple(values))
    if kind == "table":
        return tabulated_from_csv(body.strip())
    raise ValueError(f"unknown weight kind {kind!r} (use beta:, step:, table:)")


def tabulated_from_csv(path: str) -> Tabulated:
    """Two-column CSV with header ``t,f``."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip().lower() for c in rows[0][:2]] != ["t", "f"]:
        raise ValueError(f"{path}: expected header 't,f'")
    data = [(float(r[0]), float(r[1])) for r in rows[1:] if r]
    return Tabulated(nodes=tuple(t for t, _ in data), values=tuple(v for _, v in data))
