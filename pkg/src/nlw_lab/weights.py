"""Exponent bookkeeping and Muckenhoupt weight estimates for radial power weights."""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from functools import partial

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.special import betainc

from .parallel import pmap
from .spectral.grid import sphere_area

# ---------------------------------------------------------------------------
# exponents
# ---------------------------------------------------------------------------

SUPERCRITICAL = "supercritical"
CRITICAL = "critical"
SUBCRITICAL = "subcritical"


@dataclass(frozen=True)
class ExponentPack:
    """Scalar exponents attached to ``(n, p, s)``.

    ``lifespan_exponent`` is the power of ``eps`` in the lifespan law: a float
    in the power-law regimes and the string ``"log"`` in the critical regime,
    where ``lifespan_rate = -(p - 1)`` is the exponent inside
    ``ln T ~ eps^rate``. In the supercritical regime the power law is the
    large-data one; small data give global solutions.
    """

    n: int
    p: float
    s: float
    p_c: float
    s_c: float
    s_l: float
    s_o: float
    delta: float
    delta1: float
    regime: str
    lifespan_exponent: float | str
    lifespan_rate: float | None
    admissible: bool
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["warnings"] = list(self.warnings)
        return d

    def a_tilde(self, T: float) -> float:
        """Time factor normalizing the weighted space-time part of the X-norm."""
        if self.regime == SUPERCRITICAL:
            return min(T**self.delta, 1.0)
        if self.regime == CRITICAL:
            return min(T**self.delta, math.sqrt(math.log(2.0 + T)))
        return T**self.delta


def critical_power(n: int) -> float:
    return 1.0 + 2.0 / (n - 1)


def critical_exponents(n: int, p: float, s: float) -> ExponentPack:
    """Build the :class:`ExponentPack` for ``(n, p, s)``.

    Parameter choices outside the well-posedness range are reported through
    ``admissible=False`` and ``warnings`` rather than raised.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    if not p > 1:
        raise ValueError(f"p must exceed 1, got {p}")
    n = int(n)
    p_c = critical_power(n)
    s_c = (n + 2) / 2 - 1 / (p - 1)
    s_l = (n + 5) / 4
    s_o = max(1.5, s_c)
    # exact float comparison: callers probing the boundary pass p_c itself
    if p > p_c:
        regime = SUPERCRITICAL
    elif p == p_c:
        regime = CRITICAL
    else:
        regime = SUBCRITICAL

    if p >= p_c:
        delta = (p - 1) / 2 * (s - s_c)
    else:
        delta = (p - 1) / 2 * (1.5 - s_c)
    if regime == SUPERCRITICAL:
        delta1 = (n - 1) / 4 * min(1.0, p - p_c)
    elif regime == CRITICAL:
        delta1 = 0.0
    else:
        delta1 = -delta

    if regime == SUBCRITICAL:
        lifespan_exponent: float | str = -1.0 / (1.5 - s_c)
        rate = None
    elif regime == CRITICAL:
        lifespan_exponent, rate = "log", -(p - 1)
    else:
        lifespan_exponent = -1.0 / (s - s_c) if s > s_c else math.nan
        rate = None

    notes = []
    if n >= 3 and p >= 1 + 2 / (n - 2):
        notes.append(f"p={p} outside (1, {1 + 2 / (n - 2):g}) for n={n}")
    if not s_o < s < 2:
        notes.append(f"s={s} outside (s_o, 2) = ({s_o:g}, 2)")
    if not 0 < delta < 0.5:
        notes.append(f"delta={delta:g} outside (0, 1/2)")
    if not -delta <= delta1 < (n - 1) / 2:
        notes.append(f"delta1={delta1:g} outside [-delta, (n-1)/2)")
    if not 0 <= 1 - 2 * delta <= 1 + 2 * delta1 < n:
        notes.append("0 <= 1-2delta <= 1+2delta1 < n fails")
    return ExponentPack(
        n=n, p=float(p), s=float(s), p_c=p_c, s_c=s_c, s_l=s_l, s_o=s_o,
        delta=delta, delta1=delta1, regime=regime,
        lifespan_exponent=lifespan_exponent, lifespan_rate=rate,
        admissible=not notes, warnings=tuple(notes),
    )


def subcritical_exponent_forms(n: int, p: float) -> tuple[float, float]:
    """The two closed forms of the subcritical lifespan exponent."""
    s_c = (n + 2) / 2 - 1 / (p - 1)
    return -1.0 / (1.5 - s_c), 2 * (p - 1) / ((n - 1) * (p - 1) - 2)


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightSpec:
    """Radial weight ``w(r) = r^a <r>^b`` on ``R^n`` with ``<r> = sqrt(1 + r^2)``."""

    n: int
    a: float = 0.0
    b: float = 0.0
    kind: str = "product"

    @classmethod
    def constant(cls, n: int) -> "WeightSpec":
        return cls(n, 0.0, 0.0, "constant")

    @classmethod
    def power(cls, n: int, a: float) -> "WeightSpec":
        return cls(n, float(a), 0.0, "power")

    @classmethod
    def product(cls, n: int, a: float, b: float) -> "WeightSpec":
        return cls(n, float(a), float(b), "product")

    @classmethod
    def paper(cls, n: int, delta: float, delta1: float) -> "WeightSpec":
        """``r^(-1+2 delta) <r>^(-2 delta - 2 delta1)``."""
        return cls(n, -1.0 + 2 * delta, -2 * delta - 2 * delta1, "paper")

    def pow(self, t: float) -> "WeightSpec":
        kind = "constant" if self.kind == "constant" else "product"
        return WeightSpec(self.n, self.a * t, self.b * t, kind)

    def __mul__(self, other: "WeightSpec") -> "WeightSpec":
        if self.n != other.n:
            raise ValueError("weights live in different dimensions")
        return WeightSpec(self.n, self.a + other.a, self.b + other.b, "product")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return r**self.a * (1.0 + r * r) ** (0.5 * self.b)

    def to_dict(self) -> dict:
        return asdict(self)


def eval_weight(spec: WeightSpec, r: float) -> float:
    if not r > 0:
        raise ValueError(f"weights are evaluated at r > 0, got {r}")
    return float(spec(r))


def _sphere_fraction(n: int, one_minus_mu: np.ndarray) -> np.ndarray:
    """Fraction of ``S^(n-1)`` with ``cos(theta) > mu`` given ``1 - mu``.

    Taking ``1 - mu`` directly avoids cancellation for small caps.
    """
    d = np.clip(one_minus_mu, 0.0, 2.0)
    x = d * (2.0 - d)  # 1 - mu^2
    half = 0.5 * betainc((n - 1) / 2, 0.5, x)
    return np.where(d <= 1.0, half, 1.0 - half)


def _quad(fn, lo, hi, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            val, _ = quad(fn, lo, hi, epsabs=0.0, epsrel=1e-11, limit=400, **kw)
            return float(val), True
        except IntegrationWarning:
            pass
    # roundoff-limited is fine for a sup estimate; a large error estimate is not
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(fn, lo, hi, epsabs=0.0, epsrel=1e-11, limit=400, **kw)
    return float(val), bool(err <= 1e-6 * abs(val))


def ball_integral(spec: WeightSpec, c: float, radius: float) -> tuple[float, bool]:
    """``int_{B(x, radius)} w(|y|) dy`` for ``|x| = c``; returns (value, converged).

    Radial symmetry reduces the ball to shells ``|y| = s`` intersected with
    the ball, whose area is a spherical-cap fraction. Shells are
    parametrized by ``t = s - c`` so that small far-away balls keep full
    relative accuracy.
    """
    n, a, b = spec.n, spec.a, spec.b
    omega = sphere_area(n)
    total, ok = 0.0, True
    if radius >= c and a + n <= 0:
        return math.inf, True
    if radius > c:
        # inner shells lie entirely in the ball
        L = radius - c
        if b == 0:
            total += omega * L ** (a + n) / (a + n)
        else:
            v, good = _quad(lambda s: (1.0 + s * s) ** (0.5 * b), 0.0, L, weight="alg", wvar=(a + n - 1, 0.0))
            total += omega * v
            ok &= good

    def cap_t(t):
        s = c + t
        frac = _sphere_fraction(n, (radius - t) * (radius + t) / (2 * s * c))
        return s ** (a + n - 1) * (1.0 + s * s) ** (0.5 * b) * frac

    t_lo, t_hi = abs(c - radius) - c, radius
    if c > radius:
        v, good = _quad(cap_t, t_lo, t_hi)
        total += omega * v
        ok &= good
        return total, ok
    # inner edge of the cap region sits at s = radius - c, possibly near 0:
    # geometric segments in s keep relative accuracy there
    lo, hi = radius - c, radius + c
    if lo == 0.0:
        # radius == c: 1 - mu reduces to 1 - s / (2c)
        def radial(s):
            return (1.0 + s * s) ** (0.5 * b) * _sphere_fraction(n, 1.0 - s / (2 * c))

        v, good = _quad(radial, 0.0, hi, weight="alg", wvar=(a + n - 1, 0.0))
        return total + omega * v, ok and good
    edges = [hi]
    while edges[-1] / 8.0 > lo:
        edges.append(edges[-1] / 8.0)
    edges.append(lo)
    edges = edges[::-1]
    for e0, e1 in zip(edges[:-1], edges[1:]):
        v, good = _quad(cap_t, e0 - c, e1 - c)
        total += omega * v
        ok &= good
    return total, ok


def ball_average(spec: WeightSpec, c: float, radius: float) -> tuple[float, bool]:
    vol = sphere_area(spec.n) * radius**spec.n / spec.n
    val, ok = ball_integral(spec, c, radius)
    return val / vol, ok


# ---------------------------------------------------------------------------
# A_p estimation
# ---------------------------------------------------------------------------

BOUNDED, DIVERGING, INCONCLUSIVE = "bounded", "diverging", "inconclusive"


@dataclass(frozen=True)
class SamplingPlan:
    """Nested log-spaced centers ``|x|`` and radii; level ``m`` has ``base*2^m + 1`` points per axis."""

    c_min: float = 1e-3
    c_max: float = 1e3
    r_min: float = 1e-3
    r_max: float = 1e3
    base: int = 8
    levels: int = 3

    def __post_init__(self):
        if self.levels < 3:
            raise ValueError("at least three sampling levels are required")
        if not (0 < self.c_min < self.c_max and 0 < self.r_min < self.r_max):
            raise ValueError("sampling ranges must be positive and increasing")

    def axis(self, lo: float, hi: float, level: int) -> np.ndarray:
        return np.geomspace(lo, hi, self.base * 2**level + 1)

    @property
    def finest(self) -> int:
        return self.levels - 1


@dataclass(frozen=True)
class ApReport:
    p: float
    estimate: float
    sample_count: int
    refinement_history: tuple[float, ...]
    verdict: str
    weight: dict = field(default_factory=dict)
    unconverged: int = 0

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "estimate": self.estimate,
            "sample_count": self.sample_count,
            "refinements": list(self.refinement_history),
            "verdict": self.verdict,
            "weight": self.weight,
            "unconverged_quadratures": self.unconverged,
        }


def _verdict(history: list[float], argmax_ok: bool) -> str:
    if any(math.isinf(h) for h in history):
        return DIVERGING
    h = history
    if len(h) >= 3 and h[-1] > 1.25 * h[-2] and h[-2] > 1.25 * h[-3]:
        return DIVERGING
    if not argmax_ok:
        return INCONCLUSIVE
    if abs(h[-1] - h[-2]) <= 0.10 * h[-2]:
        return BOUNDED
    return INCONCLUSIVE


def _quotient_row(c: float, radii: np.ndarray, spec: WeightSpec, p: float) -> list[tuple[float, bool]]:
    row = []
    wx = float(spec(c))
    for rad in radii:
        avg, ok = ball_average(spec, c, rad)
        if p == 1:
            row.append((avg / wx, ok))
            continue
        if math.isinf(avg):
            row.append((math.inf, ok))
            continue
        dual = spec.pow(1.0 / (1.0 - p))  # w^(1 - p')
        avg2, ok2 = ball_average(dual, c, rad)
        row.append((avg * avg2 ** (p - 1), ok and ok2))
    return row


def estimate_Ap_constant(
    spec: WeightSpec, p: float, plan: SamplingPlan | None = None, jobs: int | None = 1
) -> ApReport:
    """Sampled sup of the A_p quotient over balls ``B(x, r)``.

    ``p = 1`` gives the centered A_1 quotient ``avg_B w / w(x)``. Every
    coarser level is a subset of the finest one, so the refinement history is
    nondecreasing by construction.
    """
    if not p >= 1:
        raise ValueError(f"A_p index must be >= 1, got {p}")
    plan = plan or SamplingPlan()
    L = plan.finest
    cs = plan.axis(plan.c_min, plan.c_max, L)
    rs = plan.axis(plan.r_min, plan.r_max, L)
    rows = pmap(partial(_quotient_row, radii=rs, spec=spec, p=float(p)), list(cs), jobs=jobs)
    Q = np.array([[v for v, _ in row] for row in rows])
    OK = np.array([[ok for _, ok in row] for row in rows])
    history = []
    for m in range(plan.levels):
        step = 2 ** (L - m)
        history.append(float(np.max(Q[::step, ::step])))
    i, j = np.unravel_index(np.argmax(Q), Q.shape)
    verdict = _verdict(history, bool(OK[i, j]))
    return ApReport(
        p=float(p),
        estimate=history[-1],
        sample_count=int(Q.size),
        refinement_history=tuple(history),
        verdict=verdict,
        weight=spec.to_dict(),
        unconverged=int((~OK).sum()),
    )


def estimate_A1_constant(spec: WeightSpec, plan: SamplingPlan | None = None, jobs: int | None = 1) -> ApReport:
    return estimate_Ap_constant(spec, 1.0, plan, jobs)
