"""Constants for the multi-factor Holder inequality and their comparison chain.

For exponents p_1, ..., p_m >= 1 with harmonic conjugate p* defined by
1/p* = sum_i 1/p_i, three constants make the product inequality true:

    c_new = prod_i (p_i / p*)^(1/p_i)   (the sharpest of the three)
    c_mid = m^(1/p*)
    c_old = m

They satisfy c_new <= c_mid <= c_old, with c_new = c_mid exactly when all
p_i coincide. The first comparison is an instance of the weighted AM-GM
inequality applied to x_i = p_i/p* with weights 1/p_i.
"""

import math
from dataclasses import dataclass

__all__ = [
    "ExponentPair",
    "ExponentSystem",
    "WeightedMeanInput",
    "harmonic_conjugate",
    "bound_new",
    "bound_comparison",
    "weighted_am_gm",
]

from .errors import InvalidExponentError

#: Relative tolerance for exponent-system bookkeeping identities.
REL_TOL = 1e-12


def _check_exponent_list(p_list) -> list:
    p = [float(v) for v in p_list]
    if not p:
        raise InvalidExponentError("exponent list must be non-empty")
    for i, v in enumerate(p):
        if not (v >= 1.0 and math.isfinite(v)):
            raise InvalidExponentError(
                f"exponents must satisfy 1 <= p < inf; p[{i}] = {v}"
            )
    return p


def harmonic_conjugate(p_list) -> float:
    """Return p* with 1/p* = sum_i 1/p_i for exponents p_i >= 1."""
    p = _check_exponent_list(p_list)
    return 1.0 / math.fsum(1.0 / v for v in p)


def bound_new(p_list) -> float:
    """The product constant prod_i (p_i / p*)^(1/p_i).

    Computed in log space for stability; always >= 1, and equals 1 when
    m = 1 (then p* = p_1 and the product is empty of content).
    """
    p = _check_exponent_list(p_list)
    p_star = harmonic_conjugate(p)
    log_c = math.fsum(math.log(v / p_star) / v for v in p)
    return math.exp(log_c)


def bound_comparison(p_list) -> tuple:
    """Return (c_new, c_mid, c_old) = (bound_new, m^(1/p*), m).

    The chain c_new <= c_mid <= c_old holds for every admissible input;
    c_new == c_mid exactly when all p_i are equal.
    """
    p = _check_exponent_list(p_list)
    m = len(p)
    p_star = harmonic_conjugate(p)
    c_new = bound_new(p)
    c_mid = float(m) ** (1.0 / p_star)
    return (c_new, c_mid, float(m))


@dataclass(frozen=True)
class WeightedMeanInput:
    """Positive values with positive weights for a weighted mean comparison."""

    values: tuple
    weights: tuple

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        weights = tuple(float(w) for w in self.weights)
        if not values or len(values) != len(weights):
            raise InvalidExponentError(
                "values and weights must be non-empty and of equal length"
            )
        for i, v in enumerate(values):
            if not (v > 0.0 and math.isfinite(v)):
                raise InvalidExponentError(f"values must be positive finite; x[{i}] = {v}")
        for i, w in enumerate(weights):
            if not (w > 0.0 and math.isfinite(w)):
                raise InvalidExponentError(
                    f"weights must be positive finite; w[{i}] = {w}"
                )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)


def weighted_am_gm(data: WeightedMeanInput) -> tuple:
    """Return (geometric, arithmetic, is_equality) for a weighted mean pair.

    geometric = (prod x_i^{w_i})^{1/w},  arithmetic = (sum w_i x_i)/w,
    with w = sum w_i. The geometric mean never exceeds the arithmetic one;
    equality holds exactly when all x_i agree (detected within relative
    tolerance REL_TOL).
    """
    x, w = data.values, data.weights
    w_total = math.fsum(w)
    geometric = math.exp(math.fsum(wi * math.log(xi) for xi, wi in zip(x, w)) / w_total)
    arithmetic = math.fsum(wi * xi for xi, wi in zip(x, w)) / w_total
    lo, hi = min(x), max(x)
    is_equality = (hi - lo) <= REL_TOL * hi
    return (geometric, arithmetic, is_equality)


@dataclass(frozen=True)
class ExponentPair:
    """A local/global exponent pair (p, q) with 1 <= p <= q < inf."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (1.0 <= p and math.isfinite(p)):
            raise InvalidExponentError(f"p must satisfy 1 <= p < inf, got {p}")
        if not (p <= q and math.isfinite(q)):
            raise InvalidExponentError(f"q must satisfy p <= q < inf, got q={q}, p={p}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class ExponentSystem:
    """Factor exponent pairs (p_i, q_i) with a target pair (p, q).

    Admissibility:
      * sum_i 1/q_i = 1/q  (within relative tolerance REL_TOL),
      * sum_i 1/p_i <= 1/p (within the same slack),
    which together force p <= p* <= q for p* = harmonic_conjugate(p_i).
    """

    factors: tuple
    target: ExponentPair

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise InvalidExponentError("an exponent system needs at least one factor")
        for f in factors:
            if not isinstance(f, ExponentPair):
                raise InvalidExponentError(f"factors must be ExponentPair, got {f!r}")
        if not isinstance(self.target, ExponentPair):
            raise InvalidExponentError(f"target must be ExponentPair, got {self.target!r}")
        object.__setattr__(self, "factors", factors)

        inv_q_sum = math.fsum(1.0 / f.q for f in factors)
        inv_q = 1.0 / self.target.q
        if abs(inv_q_sum - inv_q) > REL_TOL * max(inv_q_sum, inv_q):
            raise InvalidExponentError(
                f"sum of 1/q_i = {inv_q_sum!r} must equal 1/q = {inv_q!r}"
            )
        inv_p_sum = math.fsum(1.0 / f.p for f in factors)
        inv_p = 1.0 / self.target.p
        if inv_p_sum > inv_p * (1.0 + REL_TOL):
            raise InvalidExponentError(
                f"sum of 1/p_i = {inv_p_sum!r} must not exceed 1/p = {inv_p!r}"
            )

    @property
    def m(self) -> int:
        return len(self.factors)

    @property
    def p_star(self) -> float:
        return harmonic_conjugate([f.p for f in self.factors])

    def p_list(self) -> list:
        return [f.p for f in self.factors]

    def q_list(self) -> list:
        return [f.q for f in self.factors]

    def to_dict(self) -> dict:
        return {
            "pairs": [[f.p, f.q] for f in self.factors],
            "target": [self.target.p, self.target.q],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExponentSystem":
        try:
            pairs = [ExponentPair(p, q) for p, q in d["pairs"]]
            tp, tq = d["target"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidExponentError(f"malformed exponent system: {exc}") from exc
        return cls(factors=tuple(pairs), target=ExponentPair(tp, tq))
