"""Threshold splits and the product inequality verdict.

The product inequality bounds the weak Morrey norm of a product by the
constant c_new = prod_i (p_i/p*)^(1/p_i) times the product of the factor
norms. Its proof splits a superlevel threshold theta into per-factor
thresholds 1/y_i with prod_i y_i = 1/theta, then minimizes

    F(y) = sum_i a_i * y_i^{p_i}        (a_i = i-th factor norm^p_i)

subject to that constraint. The Lagrange system has the closed solution

    lambda = theta^(-p*) * prod_j (p_j a_j)^(p*/p_j),
    y_i = (lambda / (p_i a_i))^(1/p_i),
    min F = lambda / p* = theta^(-p*) * prod_j (p_j/p*)^(p*/p_j) a_j^(p*/p_j).

``equal_share_split`` replaces the p*/p_i weight in y_i^{p_i} by 1/m, an
appealingly symmetric choice that achieves the same objective value but
violates the product constraint by the factor m^(-1/p*) * c_new < 1
whenever the p_i differ, so it is not a feasible split.
"""

import math
from dataclasses import dataclass

from .bounds import ExponentSystem, bound_comparison, harmonic_conjugate
from .errors import (
    ConstraintViolationError,
    DegenerateFactorError,
    InconsistencyError,
    InvalidExponentError,
    InvalidFunctionError,
    NoClosedFormError,
    NotInSpaceError,
)
from .functions import Product, dimension, distribution, distribution_mc, reduce
from .geometry import Ball
from .quasinorm import (
    QuasinormReport,
    SearchConfig,
    VERDICT_SLACK,
    weak_morrey_norm,
)

__all__ = [
    "ThresholdSplit",
    "EqualShareSplit",
    "UnionBoundReport",
    "HolderReport",
    "optimal_split",
    "equal_share_split",
    "union_bound_check",
    "check_holder",
]

#: Relative tolerance for the closed-form identities a ThresholdSplit obeys.
SPLIT_REL_TOL = 1e-10


def _check_split_inputs(a, p, theta: float) -> tuple:
    a = tuple(float(v) for v in a)
    p = tuple(float(v) for v in p)
    if not a or len(a) != len(p):
        raise InvalidExponentError(
            "weights and exponents must be non-empty and of equal length"
        )
    for i, v in enumerate(a):
        if v == 0.0:
            raise DegenerateFactorError(
                f"factor weight a[{i}] = 0: the split is undefined for vanishing factors"
            )
        if not (v > 0.0 and math.isfinite(v)):
            raise ValueError(f"factor weights must be positive finite; a[{i}] = {v}")
    for i, v in enumerate(p):
        if not (v >= 1.0 and math.isfinite(v)):
            raise InvalidExponentError(f"exponents must satisfy 1 <= p < inf; p[{i}] = {v}")
    theta = float(theta)
    if not (theta > 0.0 and math.isfinite(theta)):
        raise ValueError(f"theta must be positive finite, got {theta}")
    return a, p, theta


def _displayed_minimum(a, p, theta: float) -> float:
    """theta^(-p*) * prod_j (p_j/p*)^(p*/p_j) * a_j^(p*/p_j), in log space."""
    p_star = harmonic_conjugate(p)
    log_val = -p_star * math.log(theta) + p_star * math.fsum(
        (math.log(pj / p_star) + math.log(aj)) / pj for aj, pj in zip(a, p)
    )
    return math.exp(log_val)


@dataclass(frozen=True)
class ThresholdSplit:
    """A feasible threshold split with its Lagrange data.

    Invariants (validated on construction): prod_i y_i * theta = 1 and
    objective = the displayed closed-form minimum, both within SPLIT_REL_TOL.
    """

    a: tuple
    p: tuple
    theta: float
    lam: float
    y: tuple
    objective: float

    def __post_init__(self):
        a, p, theta = _check_split_inputs(self.a, self.p, self.theta)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "theta", theta)
        y = tuple(float(v) for v in self.y)
        object.__setattr__(self, "y", y)
        prod_y = math.exp(math.fsum(math.log(v) for v in y))
        if abs(prod_y * theta - 1.0) > SPLIT_REL_TOL:
            raise ConstraintViolationError(
                f"split constraint violated: prod(y) * theta = {prod_y * theta!r}, "
                "expected 1"
            )
        displayed = _displayed_minimum(a, p, theta)
        if abs(self.objective - displayed) > SPLIT_REL_TOL * displayed:
            raise InconsistencyError(
                f"split objective {self.objective!r} does not match the "
                f"closed-form minimum {displayed!r}"
            )

    def to_dict(self) -> dict:
        return {
            "a": list(self.a),
            "p": list(self.p),
            "theta": self.theta,
            "lam": self.lam,
            "y": list(self.y),
            "objective": self.objective,
        }


def optimal_split(a, p, theta: float) -> ThresholdSplit:
    """Minimize sum_i a_i y_i^{p_i} subject to prod_i y_i = 1/theta.

    All quantities are evaluated in log space; the returned split
    validates its own constraint and objective identities.
    """
    a, p, theta = _check_split_inputs(a, p, theta)
    p_star = harmonic_conjugate(p)
    log_lam = -p_star * math.log(theta) + p_star * math.fsum(
        math.log(pj * aj) / pj for aj, pj in zip(a, p)
    )
    lam = math.exp(log_lam)
    y = tuple(
        math.exp((log_lam - math.log(pj * aj)) / pj) for aj, pj in zip(a, p)
    )
    objective = math.fsum(aj * yj**pj for aj, pj, yj in zip(a, p, y))
    return ThresholdSplit(a=a, p=p, theta=theta, lam=lam, y=y, objective=objective)


@dataclass(frozen=True)
class EqualShareSplit:
    """The symmetric 1/m split: same objective value, infeasible constraint.

    constraint_product is theta * prod_i y_i, which equals
    m^(-1/p*) * c_new (= expected_constraint_product) and falls below 1
    whenever the exponents differ.
    """

    y: tuple
    objective: float
    constraint_product: float
    expected_constraint_product: float

    def to_dict(self) -> dict:
        return {
            "y": list(self.y),
            "objective": self.objective,
            "constraint_product": self.constraint_product,
            "expected_constraint_product": self.expected_constraint_product,
        }


def equal_share_split(a, p, theta: float) -> EqualShareSplit:
    """The split with y_i^{p_i} = (1/m) theta^(-p*) a_i^(-1) * Q.

    Q is the product prod_j (p_j/p*)^(p*/p_j) a_j^(p*/p_j), so every term
    a_i y_i^{p_i} carries an equal 1/m share of the displayed minimum.
    """
    a, p, theta = _check_split_inputs(a, p, theta)
    m = len(a)
    p_star = harmonic_conjugate(p)
    log_q = p_star * math.fsum(
        (math.log(pj / p_star) + math.log(aj)) / pj for aj, pj in zip(a, p)
    )
    y = tuple(
        math.exp((log_q - math.log(m) - p_star * math.log(theta) - math.log(aj)) / pj)
        for aj, pj in zip(a, p)
    )
    objective = math.fsum(aj * yj**pj for aj, pj, yj in zip(a, p, y))
    constraint_product = theta * math.exp(math.fsum(math.log(v) for v in y))
    c_new, _, _ = bound_comparison(p)
    expected = m ** (-1.0 / p_star) * c_new
    return EqualShareSplit(
        y=y,
        objective=objective,
        constraint_product=constraint_product,
        expected_constraint_product=expected,
    )


# ---------------------------------------------------------------------------
# Union bound over superlevel sets


@dataclass(frozen=True)
class UnionBoundReport:
    """|{prod f_i > theta}| vs the sum of per-factor superlevel measures."""

    lhs: float
    rhs: float
    thresholds: tuple
    terms: tuple
    constraint_product: float
    tolerance: float
    holds: bool
    method: str

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "thresholds": list(self.thresholds),
            "terms": list(self.terms),
            "constraint_product": self.constraint_product,
            "tolerance": self.tolerance,
            "holds": self.holds,
            "method": self.method,
        }


def _distribution_either(f, ball: Ball, gamma: float, cfg: SearchConfig) -> tuple:
    """(value, mc_stderr_or_0) using the closed form when available."""
    try:
        return (distribution(f, ball, gamma), 0.0)
    except NoClosedFormError:
        if not cfg.enable_mc:
            raise
        est, se = distribution_mc(f, ball, gamma, samples=cfg.mc_samples, seed=cfg.seed)
        return (est, se)


def union_bound_check(
    f_list, ball: Ball, theta: float, y, config: SearchConfig = None
) -> UnionBoundReport:
    """Check |{x in B : prod f_i > theta}| <= sum_i |{x in B : f_i > 1/y_i}|.

    Requires the split to cover theta: prod_i y_i >= 1/theta (up to
    relative slack VERDICT_SLACK); otherwise the set inclusion underlying
    the bound fails and a ConstraintViolationError is raised.
    """
    cfg = config or SearchConfig()
    f_list = list(f_list)
    y = tuple(float(v) for v in y)
    if not f_list or len(f_list) != len(y):
        raise InvalidFunctionError(
            "need one threshold factor y_i per function, both non-empty"
        )
    theta = float(theta)
    if not (theta > 0.0 and math.isfinite(theta)):
        raise ValueError(f"theta must be positive finite, got {theta}")
    for i, v in enumerate(y):
        if not (v > 0.0 and math.isfinite(v)):
            raise ValueError(f"thresholds must be positive finite; y[{i}] = {v}")
    prod_y = math.exp(math.fsum(math.log(v) for v in y))
    if prod_y * theta < 1.0 - VERDICT_SLACK:
        raise ConstraintViolationError(
            f"prod(y) * theta = {prod_y * theta!r} < 1: the per-factor superlevel "
            "sets do not cover the product superlevel set"
        )
    product = reduce(Product(tuple(f_list)) if len(f_list) > 1 else f_list[0])
    lhs, lhs_se = _distribution_either(product, ball, theta, cfg)
    terms = []
    se_total = lhs_se
    for i, (f, yi) in enumerate(zip(f_list, y)):
        val, se = _distribution_either(f, ball, 1.0 / yi, cfg)
        terms.append(val)
        se_total += se
    rhs = math.fsum(terms)
    tolerance = VERDICT_SLACK * max(1.0, rhs) + 4.0 * se_total
    return UnionBoundReport(
        lhs=lhs,
        rhs=rhs,
        thresholds=tuple(1.0 / v for v in y),
        terms=tuple(terms),
        constraint_product=prod_y * theta,
        tolerance=tolerance,
        holds=lhs <= rhs + tolerance,
        method="analytic" if se_total == 0.0 else "monte-carlo",
    )


# ---------------------------------------------------------------------------
# The product inequality itself


@dataclass(frozen=True)
class HolderReport:
    """Everything check_holder measured, plus the verdict.

    ratio = lhs / prod(factor norms) (0 when lhs = 0); verdict asserts
    lhs <= c_new * prod(factor norms) within tolerance. inclusion_ok
    tracks the p <= p* monotonicity step used to finish the proof.
    """

    lhs: QuasinormReport
    lhs_pstar: QuasinormReport
    factor_norms: tuple
    p_star: float
    c_new: float
    c_mid: float
    c_old: float
    product_of_norms: float
    ratio: float
    tolerance: float
    verdict: bool
    inclusion_ok: bool
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs.to_dict(),
            "lhs_pstar": self.lhs_pstar.to_dict(),
            "factor_norms": [r.to_dict() for r in self.factor_norms],
            "p_star": self.p_star,
            "c_new": self.c_new,
            "c_mid": self.c_mid,
            "c_old": self.c_old,
            "product_of_norms": self.product_of_norms,
            "ratio": self.ratio,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
            "inclusion_ok": self.inclusion_ok,
            "note": self.note,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "HolderReport":
        return cls(
            lhs=QuasinormReport.from_dict(d["lhs"]),
            lhs_pstar=QuasinormReport.from_dict(d["lhs_pstar"]),
            factor_norms=tuple(QuasinormReport.from_dict(r) for r in d["factor_norms"]),
            p_star=d["p_star"],
            c_new=d["c_new"],
            c_mid=d["c_mid"],
            c_old=d["c_old"],
            product_of_norms=d["product_of_norms"],
            ratio=d["ratio"],
            tolerance=d["tolerance"],
            verdict=d["verdict"],
            inclusion_ok=d["inclusion_ok"],
            note=d["note"],
        )


def check_holder(f_list, system: ExponentSystem, config: SearchConfig = None) -> HolderReport:
    """Verify ||prod f_i||_{wM^p_q} <= c_new * prod_i ||f_i||_{wM^{p_i}_{q_i}}.

    Any factor with infinite norm raises NotInSpaceError naming its index.
    A product whose norm comes out infinite while every factor norm is
    finite contradicts the inequality and raises InconsistencyError.
    """
    cfg = config or SearchConfig()
    f_list = list(f_list)
    if len(f_list) != system.m:
        raise InvalidFunctionError(
            f"got {len(f_list)} functions for an exponent system with m = {system.m}"
        )
    dims = {dimension(f) for f in f_list}
    if len(dims) != 1:
        raise InvalidFunctionError(
            f"factors live in different dimensions: {sorted(dims)}"
        )

    factor_norms = []
    for i, (f, pair) in enumerate(zip(f_list, system.factors)):
        rep = weak_morrey_norm(f, pair.p, pair.q, cfg)
        if math.isinf(rep.value):
            raise NotInSpaceError(
                f"factor {i} has infinite wM^({pair.p},{pair.q}) norm: {rep.note}"
            )
        factor_norms.append(rep)

    product = reduce(Product(tuple(f_list)) if len(f_list) > 1 else f_list[0])
    p, q = system.target.p, system.target.q
    p_star = system.p_star
    lhs = weak_morrey_norm(product, p, q, cfg)
    lhs_pstar = weak_morrey_norm(product, p_star, q, cfg)

    c_new, c_mid, c_old = bound_comparison(system.p_list())
    values = [r.value for r in factor_norms]
    product_of_norms = math.prod(values)
    if product_of_norms > 0.0:
        propagated = product_of_norms * math.fsum(
            r.error_bound / r.value for r in factor_norms
        )
    else:
        propagated = math.fsum(r.error_bound for r in factor_norms)
    bound = c_new * product_of_norms
    tolerance = lhs.error_bound + c_new * propagated + VERDICT_SLACK * max(bound, 1.0)

    if math.isinf(lhs.value) or math.isinf(lhs_pstar.value):
        raise InconsistencyError(
            "product norm is infinite although every factor norm is finite; "
            "the product inequality forbids this"
        )
    inc_tol = (
        lhs.error_bound
        + lhs_pstar.error_bound
        + VERDICT_SLACK * max(lhs_pstar.value, 1.0)
    )
    inclusion_ok = lhs.value <= lhs_pstar.value + inc_tol
    if lhs.value == 0.0:
        ratio = 0.0
    elif product_of_norms == 0.0:
        if lhs.value > tolerance:
            raise InconsistencyError(
                "a factor norm is zero (so the product vanishes a.e.) but the "
                f"product norm is {lhs.value!r}"
            )
        ratio = 0.0
    else:
        ratio = lhs.value / product_of_norms
    verdict = lhs.value <= bound + tolerance

    notes = []
    ones = [i for i, pair in enumerate(system.factors) if pair.p == 1.0]
    if ones:
        notes.append(
            f"factor exponent(s) p_i = 1 at index(es) {ones}: the constant chain "
            "is computed as stated, though sharper behavior at p = 1 is unexplored"
        )
    return HolderReport(
        lhs=lhs,
        lhs_pstar=lhs_pstar,
        factor_norms=tuple(factor_norms),
        p_star=p_star,
        c_new=c_new,
        c_mid=c_mid,
        c_old=c_old,
        product_of_norms=product_of_norms,
        ratio=ratio,
        tolerance=tolerance,
        verdict=verdict,
        inclusion_ok=inclusion_ok,
        note="; ".join(notes),
    )
