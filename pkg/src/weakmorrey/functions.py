"""A parametric family of nonnegative functions with computable superlevel sets.

The family covers radial powers c*|x - x0|^(-alpha), scaled ball indicators,
radial step functions, and finite products of these. Any product whose
factors share a center collapses to a single piecewise "radial profile"
with one power exponent; its superlevel sets are finite unions of annuli,
so distribution values (superlevel measures inside a ball) have closed
forms built from two-ball intersections. Products with genuinely distinct
centers fall back to the Monte Carlo estimator.

Spec strings use a small grammar, e.g.::

    power:c=1,alpha=0.5,center=0
    indicator:c=2,center=0,0,radius=1.5
    step:center=0,breaks=1,2,values=3,1
    product:[power:c=1,alpha=0.25,center=0;indicator:c=1,center=0,radius=1]

Whitespace is ignored everywhere; ``parse_function`` reports the character
position of the first offending token on malformed input.
"""

import math
import re
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .errors import InvalidFunctionError, NoClosedFormError, ParseError
from .geometry import Ball, ball_overlap_measure

__all__ = [
    "RadialPower",
    "BallIndicator",
    "RadialStep",
    "Product",
    "DistributionQuery",
    "dimension",
    "evaluate",
    "reduce",
    "distribution",
    "distribution_mc",
    "parse_function",
    "to_spec",
]

#: Minimum Monte Carlo sample count accepted by distribution_mc.
MIN_MC_SAMPLES = 1000


def _check_center(center) -> tuple:
    c = tuple(float(v) for v in center)
    if not c:
        raise InvalidFunctionError("center must have at least one coordinate")
    if any(not math.isfinite(v) for v in c):
        raise InvalidFunctionError("center coordinates must be finite")
    return c


@dataclass(frozen=True)
class RadialPower:
    """c * |x - center|^(-alpha) with c > 0 and alpha >= 0.

    alpha = 0 gives the constant c; at x = center the value is +inf
    (a measure-zero convention that superlevel sets never notice).
    """

    c: float
    alpha: float
    center: tuple

    def __post_init__(self):
        c, alpha = float(self.c), float(self.alpha)
        if not (c > 0.0 and math.isfinite(c)):
            raise InvalidFunctionError(f"amplitude must be positive finite, got {c}")
        if not (alpha >= 0.0 and math.isfinite(alpha)):
            raise InvalidFunctionError(f"power exponent must be >= 0, got {alpha}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "center", _check_center(self.center))


@dataclass(frozen=True)
class BallIndicator:
    """c on the open ball ``support``, 0 outside."""

    c: float
    support: Ball

    def __post_init__(self):
        c = float(self.c)
        if not (c > 0.0 and math.isfinite(c)):
            raise InvalidFunctionError(f"amplitude must be positive finite, got {c}")
        if not isinstance(self.support, Ball):
            raise InvalidFunctionError("support must be a Ball")
        object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class RadialStep:
    """Piecewise constant in |x - center|.

    With breakpoints 0 < r_1 < ... < r_k, the value is values[j-1] on the
    annulus {r_{j-1} <= |x - center| < r_j} (r_0 = 0) and 0 beyond r_k.
    """

    center: tuple
    breaks: tuple
    values: tuple

    def __post_init__(self):
        breaks = tuple(float(b) for b in self.breaks)
        values = tuple(float(v) for v in self.values)
        if not breaks or len(breaks) != len(values):
            raise InvalidFunctionError(
                "breaks and values must be non-empty and of equal length"
            )
        if breaks[0] <= 0.0 or any(
            b2 <= b1 for b1, b2 in zip(breaks, breaks[1:])
        ):
            raise InvalidFunctionError(
                f"breakpoints must be strictly increasing and positive, got {breaks}"
            )
        if not math.isfinite(breaks[-1]):
            raise InvalidFunctionError("breakpoints must be finite")
        if any(v < 0.0 or not math.isfinite(v) for v in values):
            raise InvalidFunctionError(f"step values must be >= 0 and finite, got {values}")
        object.__setattr__(self, "center", _check_center(self.center))
        object.__setattr__(self, "breaks", breaks)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class Product:
    """Pointwise product of factors (0 * inf is read as 0)."""

    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise InvalidFunctionError("a product needs at least one factor")
        dims = {dimension(f) for f in factors}
        if len(dims) > 1:
            raise InvalidFunctionError(
                f"product factors live in different dimensions: {sorted(dims)}"
            )
        object.__setattr__(self, "factors", factors)


def dimension(f) -> int:
    """Ambient dimension of a function expression."""
    if isinstance(f, RadialPower) or isinstance(f, RadialStep):
        return len(f.center)
    if isinstance(f, BallIndicator):
        return f.support.n
    if isinstance(f, Product):
        return dimension(f.factors[0])
    raise InvalidFunctionError(f"not a function expression: {f!r}")


@dataclass(frozen=True)
class DistributionQuery:
    """A superlevel-measure query |{x in ball : f(x) > gamma}|."""

    function: object
    ball: Ball
    gamma: float

    def __post_init__(self):
        gamma = float(self.gamma)
        if not (gamma > 0.0 and math.isfinite(gamma)):
            raise InvalidFunctionError(f"gamma must be positive finite, got {gamma}")
        if dimension(self.function) != self.ball.n:
            raise InvalidFunctionError(
                f"function dimension {dimension(self.function)} does not match "
                f"ball dimension {self.ball.n}"
            )
        object.__setattr__(self, "gamma", gamma)


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(f, x) -> float:
    """Evaluate f at the point x (+inf at an interior power singularity)."""
    pt = tuple(float(v) for v in x)
    if len(pt) != dimension(f):
        raise InvalidFunctionError(
            f"point dimension {len(pt)} does not match function dimension {dimension(f)}"
        )
    return _evaluate_scalar(f, pt)


def _evaluate_scalar(f, pt) -> float:
    if isinstance(f, RadialPower):
        if f.alpha == 0.0:
            return f.c
        s = math.dist(pt, f.center)
        if s == 0.0:
            return math.inf
        return f.c * s ** (-f.alpha)
    if isinstance(f, BallIndicator):
        return f.c if math.dist(pt, f.support.center) < f.support.radius else 0.0
    if isinstance(f, RadialStep):
        idx = bisect_right(f.breaks, math.dist(pt, f.center))
        return f.values[idx] if idx < len(f.values) else 0.0
    vals = [_evaluate_scalar(g, pt) for g in f.factors]
    if any(v == 0.0 for v in vals):
        return 0.0
    if any(math.isinf(v) for v in vals):
        return math.inf
    return math.prod(vals)


def _evaluate_batch(f, pts: np.ndarray) -> np.ndarray:
    """Vectorized evaluate over an (N, n) array of points."""
    if isinstance(f, RadialPower):
        if f.alpha == 0.0:
            return np.full(len(pts), f.c)
        s = np.linalg.norm(pts - np.asarray(f.center), axis=1)
        with np.errstate(divide="ignore"):
            return f.c * s ** (-f.alpha)
    if isinstance(f, BallIndicator):
        s = np.linalg.norm(pts - np.asarray(f.support.center), axis=1)
        return np.where(s < f.support.radius, f.c, 0.0)
    if isinstance(f, RadialStep):
        s = np.linalg.norm(pts - np.asarray(f.center), axis=1)
        idx = np.searchsorted(np.asarray(f.breaks), s, side="right")
        return np.asarray(f.values + (0.0,))[idx]
    out = np.ones(len(pts))
    zero = np.zeros(len(pts), dtype=bool)
    for g in f.factors:
        vals = _evaluate_batch(g, pts)
        zero |= vals == 0.0
        with np.errstate(invalid="ignore"):
            out *= vals
    out[zero] = 0.0
    return out


# ---------------------------------------------------------------------------
# Canonicalization and radial profiles


def reduce(f):
    """Canonicalize: flatten nested products, merge same-center powers.

    Amplitudes multiply and exponents add, so the result evaluates
    identically everywhere (up to the usual floating point rounding).
    """
    if not isinstance(f, Product):
        return f
    flat = []
    stack = list(f.factors)[::-1]
    while stack:
        g = stack.pop()
        g = reduce(g)
        if isinstance(g, Product):
            stack.extend(list(g.factors)[::-1])
        else:
            flat.append(g)
    merged = []
    power_slot = {}
    for g in flat:
        if isinstance(g, RadialPower):
            if g.center in power_slot:
                i = power_slot[g.center]
                prev = merged[i]
                merged[i] = RadialPower(
                    c=prev.c * g.c, alpha=prev.alpha + g.alpha, center=g.center
                )
                continue
            power_slot[g.center] = len(merged)
        merged.append(g)
    if len(merged) == 1:
        return merged[0]
    return Product(tuple(merged))


@dataclass(frozen=True)
class _RadialProfile:
    """f(x) = weights[j] * s^(-alpha) for s = |x - center| in the j-th piece.

    Pieces are [0, cuts[0]), [cuts[0], cuts[1]), ..., [cuts[-1], inf).
    ``center is None`` means the profile is constant in space per piece
    structure only (a pure constant); callers substitute any center.
    """

    center: tuple
    cuts: tuple
    weights: tuple
    alpha: float

    def piece_bounds(self) -> tuple:
        return (0.0,) + self.cuts + (math.inf,)

    def weight_at(self, s: float) -> float:
        return self.weights[bisect_right(self.cuts, s)]

    def superlevel_intervals(self, gamma: float) -> list:
        """Disjoint radial intervals [lo, hi) where the profile exceeds gamma."""
        bounds = self.piece_bounds()
        out = []
        for j, w in enumerate(self.weights):
            if w <= 0.0:
                continue
            lo, hi = bounds[j], bounds[j + 1]
            if self.alpha == 0.0:
                if w > gamma:
                    out.append((lo, hi))
            else:
                top = min(hi, _power_radius(w, gamma, self.alpha))
                if top > lo:
                    out.append((lo, top))
        return out


def _power_radius(w: float, gamma: float, alpha: float) -> float:
    """Solve w * s^(-alpha) = gamma for s, saturating to +inf on overflow."""
    t = (math.log(w) - math.log(gamma)) / alpha
    if t > 700.0:
        return math.inf
    return math.exp(t)


def _as_profile(f):
    """Reduce f to a co-centered radial profile, or None if impossible."""
    if isinstance(f, RadialPower):
        center = None if f.alpha == 0.0 else f.center
        return _RadialProfile(center=center, cuts=(), weights=(f.c,), alpha=f.alpha)
    if isinstance(f, BallIndicator):
        return _RadialProfile(
            center=f.support.center,
            cuts=(f.support.radius,),
            weights=(f.c, 0.0),
            alpha=0.0,
        )
    if isinstance(f, RadialStep):
        return _RadialProfile(
            center=f.center, cuts=f.breaks, weights=f.values + (0.0,), alpha=0.0
        )
    if not isinstance(f, Product):
        return None
    parts = []
    center = None
    for g in f.factors:
        prof = _as_profile(g)
        if prof is None:
            return None
        if prof.center is not None:
            if center is None:
                center = prof.center
            elif center != prof.center:
                return None
        parts.append(prof)
    cuts = sorted({c for prof in parts for c in prof.cuts})
    weights = []
    for lo in [0.0] + cuts:
        w = 1.0
        for prof in parts:
            w *= prof.weight_at(lo)
        weights.append(w)
    alpha = math.fsum(prof.alpha for prof in parts)
    return _RadialProfile(
        center=center, cuts=tuple(cuts), weights=tuple(weights), alpha=alpha
    )


# ---------------------------------------------------------------------------
# Distribution (superlevel measure inside a ball)


def distribution(f, ball: Ball, gamma: float) -> float:
    """|{x in ball : f(x) > gamma}| by closed form.

    Requires f (after canonicalization) to collapse to a single radial
    profile; raises NoClosedFormError otherwise, in which case
    ``distribution_mc`` is the fallback.
    """
    query = DistributionQuery(function=f, ball=ball, gamma=gamma)
    prof = _as_profile(reduce(f))
    if prof is None:
        raise NoClosedFormError(
            "no closed-form superlevel measure for factors with distinct centers; "
            "use distribution_mc"
        )
    return _profile_distribution(prof, ball, query.gamma)


def _profile_distribution(prof: _RadialProfile, ball: Ball, gamma: float) -> float:
    center = prof.center if prof.center is not None else ball.center
    dist = math.dist(center, ball.center)
    total = 0.0
    for lo, hi in prof.superlevel_intervals(gamma):
        outer = ball_overlap_measure(dist, hi, ball.radius, ball.n)
        inner = ball_overlap_measure(dist, lo, ball.radius, ball.n)
        total += outer - inner
    return max(0.0, total)


def _sample_ball(rng: np.random.Generator, ball: Ball, count: int) -> np.ndarray:
    """Uniform points in a ball: Gaussian direction, radius r * U^(1/n).

    Direct sampling stays exact in every dimension, unlike rejection from
    the bounding cube whose acceptance rate collapses as n grows.
    """
    n = ball.n
    g = rng.standard_normal((count, n))
    norms = np.linalg.norm(g, axis=1)
    norms[norms == 0.0] = 1.0
    radii = ball.radius * rng.random(count) ** (1.0 / n)
    return np.asarray(ball.center) + g * (radii / norms)[:, None]


def distribution_mc(
    f, ball: Ball, gamma: float, samples: int = 100_000, seed: int = 0
) -> tuple:
    """Monte Carlo estimate of |{x in ball : f(x) > gamma}|.

    Returns (estimate, stderr). Deterministic for a fixed seed; the
    estimate is unbiased with binomial standard error
    |ball| * sqrt(phat (1 - phat) / samples).
    """
    DistributionQuery(function=f, ball=ball, gamma=gamma)
    if samples < MIN_MC_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_MC_SAMPLES}, got {samples}")
    rng = np.random.default_rng(seed)
    pts = _sample_ball(rng, ball, samples)
    vals = _evaluate_batch(f, pts)
    phat = np.count_nonzero(vals > gamma) / samples
    measure = ball.measure
    return (measure * phat, measure * math.sqrt(phat * (1.0 - phat) / samples))


# ---------------------------------------------------------------------------
# Spec-string grammar


_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_]+")

_KIND_KEYS = {
    "power": ("c", "alpha", "center"),
    "indicator": ("c", "center", "radius"),
    "step": ("center", "breaks", "values"),
}
_SCALAR_KEYS = {"c", "alpha", "radius"}


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str):
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise ParseError(f"expected {literal!r}", self.pos)
        self.pos += len(literal)

    def ident(self) -> str:
        self.skip_ws()
        m = _IDENT_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected an identifier", self.pos)
        self.pos = m.end()
        return m.group()

    def number(self) -> float:
        self.skip_ws()
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            raise ParseError("expected a number", self.pos)
        self.pos = m.end()
        return float(m.group())

    def at_key_boundary(self, keys) -> bool:
        """True if the scanner sits at ``ident=`` for a known field key."""
        saved = self.pos
        try:
            self.skip_ws()
            m = _IDENT_RE.match(self.text, self.pos)
            if not m or m.group() not in keys:
                return False
            self.pos = m.end()
            self.skip_ws()
            return self.pos < len(self.text) and self.text[self.pos] == "="
        finally:
            self.pos = saved


def _parse_expr(sc: _Scanner):
    sc.skip_ws()
    start = sc.pos
    kind = sc.ident()
    if kind == "product":
        sc.expect(":")
        sc.expect("[")
        factors = [_parse_expr(sc)]
        while sc.peek() == ";":
            sc.expect(";")
            factors.append(_parse_expr(sc))
        sc.expect("]")
        return Product(tuple(factors))
    if kind not in _KIND_KEYS:
        raise ParseError(
            f"unknown function kind {kind!r} (expected power, indicator, step, product)",
            start,
        )
    sc.expect(":")
    keys = _KIND_KEYS[kind]
    fields = {}
    while True:
        sc.skip_ws()
        key_pos = sc.pos
        key = sc.ident()
        if key not in keys:
            raise ParseError(
                f"unknown field {key!r} for {kind} (expected one of {', '.join(keys)})",
                key_pos,
            )
        if key in fields:
            raise ParseError(f"duplicate field {key!r}", key_pos)
        sc.expect("=")
        if key in _SCALAR_KEYS:
            fields[key] = sc.number()
        else:
            values = [sc.number()]
            while sc.peek() == "," and not _next_is_key(sc, keys):
                sc.expect(",")
                values.append(sc.number())
            fields[key] = tuple(values)
        if sc.peek() != ",":
            break
        sc.expect(",")
    missing = [k for k in keys if k not in fields]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)} for {kind}", sc.pos)
    if kind == "power":
        return RadialPower(c=fields["c"], alpha=fields["alpha"], center=fields["center"])
    if kind == "indicator":
        return BallIndicator(
            c=fields["c"], support=Ball(center=fields["center"], radius=fields["radius"])
        )
    return RadialStep(center=fields["center"], breaks=fields["breaks"], values=fields["values"])


def _next_is_key(sc: _Scanner, keys) -> bool:
    saved = sc.pos
    try:
        sc.expect(",")
        return sc.at_key_boundary(keys)
    finally:
        sc.pos = saved


def parse_function(spec: str, n: int = None):
    """Parse a function spec string; see the module docstring for the grammar.

    If ``n`` is given, the parsed expression must live in R^n.
    """
    sc = _Scanner(spec)
    try:
        f = _parse_expr(sc)
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), sc.pos) from exc
    sc.skip_ws()
    if sc.pos != len(sc.text):
        raise ParseError("unexpected trailing input", sc.pos)
    if n is not None and dimension(f) != n:
        raise InvalidFunctionError(
            f"function lives in dimension {dimension(f)}, expected {n}"
        )
    return f


def to_spec(f) -> str:
    """Canonical spec string for an expression; parse_function inverts it."""
    if isinstance(f, RadialPower):
        ctr = ",".join(repr(v) for v in f.center)
        return f"power:c={f.c!r},alpha={f.alpha!r},center={ctr}"
    if isinstance(f, BallIndicator):
        ctr = ",".join(repr(v) for v in f.support.center)
        return f"indicator:c={f.c!r},center={ctr},radius={f.support.radius!r}"
    if isinstance(f, RadialStep):
        ctr = ",".join(repr(v) for v in f.center)
        brk = ",".join(repr(v) for v in f.breaks)
        val = ",".join(repr(v) for v in f.values)
        return f"step:center={ctr},breaks={brk},values={val}"
    if isinstance(f, Product):
        return "product:[" + ";".join(to_spec(g) for g in f.factors) + "]"
    raise InvalidFunctionError(f"not a function expression: {f!r}")
