"""Balls in R^n and Lebesgue measure utilities.

Dimensions are capped at MAX_DIM: high-dimensional balls have vanishing
volume and every downstream tolerance would need rescaling beyond that.
"""

import math
from dataclasses import dataclass

from scipy.integrate import quad

MAX_DIM = 16


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n, pi^(n/2) / Gamma(n/2 + 1).

    Evaluated through the recursion v_n = v_{n-2} * 2*pi / n so that the
    low-dimensional values (2, pi, 4*pi/3, ...) come out exactly; the
    direct Gamma-function form loses an ulp already at n = 1.
    """
    if not isinstance(n, int) or not 1 <= n <= MAX_DIM:
        raise ValueError(f"dimension must be an integer in [1, {MAX_DIM}], got {n!r}")
    value = 2.0 if n % 2 else math.pi
    for k in range((1 if n % 2 else 2) + 2, n + 1, 2):
        value *= 2.0 * math.pi / k
    return value


@dataclass(frozen=True)
class Ball:
    """Open Euclidean ball with positive finite radius."""

    center: tuple
    radius: float

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        if not 1 <= len(center) <= MAX_DIM:
            raise ValueError(
                f"ball dimension must be in [1, {MAX_DIM}], got {len(center)}"
            )
        if any(not math.isfinite(c) for c in center):
            raise ValueError("ball center coordinates must be finite")
        radius = float(self.radius)
        if not (radius > 0.0 and math.isfinite(radius)):
            raise ValueError(f"ball radius must be positive and finite, got {radius}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", radius)

    @property
    def n(self) -> int:
        return len(self.center)

    @property
    def measure(self) -> float:
        return unit_ball_volume(self.n) * self.radius**self.n

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}

    @classmethod
    def from_dict(cls, d: dict) -> "Ball":
        return cls(center=tuple(d["center"]), radius=d["radius"])


def ball_measure(ball: Ball) -> float:
    """Lebesgue measure of a ball."""
    return ball.measure


def _cap_measure(n: int, radius: float, height: float) -> float:
    """Measure of the cap {x in B(0, radius) : x_1 > radius - height}.

    Closed forms exist for small n; for n >= 4 the slice-area integral
    v_{n-1} * (R^2 - t^2)^((n-1)/2) is integrated numerically to relative
    accuracy ~1e-9 (the integrand is smooth and the interval finite).
    """
    r = radius
    if height <= 0.0:
        return 0.0
    if height >= 2.0 * r:
        return unit_ball_volume(n) * r**n
    if n == 1:
        return height
    if n == 2:
        # Circular segment: R^2 * (phi - sin phi cos phi) with cos phi = 1 - h/R.
        cos_phi = min(1.0, max(-1.0, 1.0 - height / r))
        phi = math.acos(cos_phi)
        return r * r * (phi - math.sin(phi) * cos_phi)
    if n == 3:
        return math.pi * height * height * (3.0 * r - height) / 3.0
    v_slice = unit_ball_volume(n - 1)
    power = (n - 1) / 2.0
    scale = v_slice * r ** (n - 1)

    def integrand(t: float) -> float:
        return (r * r - t * t) ** power

    value, _ = quad(
        integrand, r - height, r, epsabs=1e-13 * scale * height, epsrel=1e-10, limit=200
    )
    return v_slice * value


def ball_overlap_measure(dist: float, r1: float, r2: float, n: int) -> float:
    """Measure of the intersection of two balls with center distance ``dist``.

    Either radius may be 0 (empty ball) or +inf (all of R^n); the measure of
    the intersection of two infinite balls is +inf.
    """
    if dist < 0.0:
        raise ValueError("center distance must be nonnegative")
    if r1 <= 0.0 or r2 <= 0.0:
        return 0.0
    if math.isinf(r1) and math.isinf(r2):
        return math.inf
    if math.isinf(r1):
        return unit_ball_volume(n) * r2**n
    if math.isinf(r2):
        return unit_ball_volume(n) * r1**n
    if dist >= r1 + r2:
        return 0.0
    if dist <= abs(r1 - r2):
        return unit_ball_volume(n) * min(r1, r2) ** n
    if n == 1:
        return min(r1 + r2 - dist, 2.0 * r1, 2.0 * r2)
    # Proper lens: split along the radical hyperplane at distance t* from
    # the first center, then add the two caps.
    t_star = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist)
    h1 = r1 - t_star
    h2 = r2 - (dist - t_star)
    return _cap_measure(n, r1, h1) + _cap_measure(n, r2, h2)
