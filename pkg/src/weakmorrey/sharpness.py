"""Search for product tuples with the largest norm ratio.

The product inequality holds with constant c_new; whether any tuple
attains it is open. This module searches parametric families for the
largest observed ratio

    ||prod f_i||_{wM^p_q} / prod_i ||f_i||_{wM^{p_i}_{q_i}}

and reports the gap to c_new. It never claims sharpness: best_ratio is
only "the largest ratio found". Any ratio exceeding c_new beyond the
report tolerance aborts the run with InconsistencyError, because the
inequality says that cannot happen.

Families (all centered at the origin, so every norm uses the closed-form
radial path):

* ``co_centered_powers``: f_i = c_i |x|^(-n/q_i). Exponents are pinned to
  n/q_i because any other power has infinite wM^{p_i}_{q_i} norm.
* ``truncated_powers``: f_i = c_i |x|^(-t_i n/q_i) 1_{|x| < R_i} with
  t_i in (0, 1]. Fractions above 1 leave the space and are rejected as
  invalid candidates at evaluation time.
* ``two_level_steps``: f_i takes value v1_i on {|x| < r_i} and v2_i on
  {r_i <= |x| < s_i r_i}.

Determinism: the budget is consumed in chunks of RESTART_BUDGET
evaluations; restart k draws its starting point from seed + k and then
proceeds by a fixed-order compass search, so a run is a deterministic
function of (system, family, budget, seed) and enlarging the budget only
appends evaluations (best_ratio is monotone in budget).
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .bounds import ExponentSystem, bound_new
from .errors import (
    DegenerateFamilyError,
    InconsistencyError,
    InvalidFunctionError,
    NotInSpaceError,
)
from .functions import BallIndicator, Product, RadialPower, RadialStep
from .geometry import MAX_DIM, Ball
from .holder import check_holder
from .quasinorm import SearchConfig

__all__ = ["FamilyConfig", "SharpnessResult", "search_extremal", "FAMILY_KINDS"]

FAMILY_KINDS = ("co_centered_powers", "truncated_powers", "two_level_steps")

#: Evaluations consumed per restart; fixing this is what makes runs with a
#: larger budget extend, rather than reshuffle, runs with a smaller one.
RESTART_BUDGET = 250


@dataclass(frozen=True)
class FamilyConfig:
    """A family kind plus per-parameter search intervals (all positive).

    A degenerate interval (lo == hi) pins that parameter. The search works
    in log coordinates, so intervals are geometric.
    """

    kind: str
    n: int
    amplitude_lo: float = 0.5
    amplitude_hi: float = 2.0
    fraction_lo: float = 0.35
    fraction_hi: float = 1.0
    radius_lo: float = 0.25
    radius_hi: float = 4.0
    spread_lo: float = 1.5
    spread_hi: float = 4.0
    level_lo: float = 0.2
    level_hi: float = 5.0

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise InvalidFunctionError(
                f"unknown family kind {self.kind!r}; expected one of {FAMILY_KINDS}"
            )
        if not isinstance(self.n, int) or not 1 <= self.n <= MAX_DIM:
            raise InvalidFunctionError(
                f"family dimension must be an integer in [1, {MAX_DIM}], got {self.n!r}"
            )
        for name in ("amplitude", "fraction", "radius", "spread", "level"):
            lo = getattr(self, name + "_lo")
            hi = getattr(self, name + "_hi")
            if not (0.0 < lo <= hi < math.inf):
                raise InvalidFunctionError(
                    f"need 0 < {name}_lo <= {name}_hi < inf, got [{lo}, {hi}]"
                )

    def _boxes(self) -> list:
        """Per-factor list of (lo, hi) parameter intervals."""
        if self.kind == "co_centered_powers":
            return [(self.amplitude_lo, self.amplitude_hi)]
        if self.kind == "truncated_powers":
            return [
                (self.amplitude_lo, self.amplitude_hi),
                (self.fraction_lo, self.fraction_hi),
                (self.radius_lo, self.radius_hi),
            ]
        return [
            (self.radius_lo, self.radius_hi),
            (self.spread_lo, self.spread_hi),
            (self.level_lo, self.level_hi),
            (self.level_lo, self.level_hi),
        ]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n": self.n,
            "amplitude_lo": self.amplitude_lo,
            "amplitude_hi": self.amplitude_hi,
            "fraction_lo": self.fraction_lo,
            "fraction_hi": self.fraction_hi,
            "radius_lo": self.radius_lo,
            "radius_hi": self.radius_hi,
            "spread_lo": self.spread_lo,
            "spread_hi": self.spread_hi,
            "level_lo": self.level_lo,
            "level_hi": self.level_hi,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FamilyConfig":
        return cls(**d)


def _build_functions(family: FamilyConfig, system: ExponentSystem, params) -> list:
    """Instantiate the family member for a flat positive parameter vector."""
    n = family.n
    origin = (0.0,) * n
    per = len(family._boxes())
    out = []
    for i, pair in enumerate(system.factors):
        block = params[per * i : per * (i + 1)]
        if family.kind == "co_centered_powers":
            out.append(RadialPower(c=block[0], alpha=n / pair.q, center=origin))
        elif family.kind == "truncated_powers":
            c, frac, radius = block
            out.append(
                Product(
                    (
                        RadialPower(c=c, alpha=frac * n / pair.q, center=origin),
                        BallIndicator(c=1.0, support=Ball(origin, radius)),
                    )
                )
            )
        else:
            r1, spread, v1, v2 = block
            out.append(
                RadialStep(center=origin, breaks=(r1, r1 * spread), values=(v1, v2))
            )
    return out


@dataclass(frozen=True)
class SharpnessResult:
    """Outcome of a budgeted extremal search.

    history holds one (params, ratio) entry per evaluation in a run-stable
    order; ratio is None for candidates rejected for infinite norms. gap is
    c_new - best_ratio and stays >= -tolerance by the abort rule above.
    """

    best_ratio: float
    best_params: tuple
    trials: int
    gap: float
    c_new: float
    budget: int
    seed: int
    history: tuple

    def to_dict(self) -> dict:
        return {
            "best_ratio": self.best_ratio,
            "best_params": list(self.best_params),
            "trials": self.trials,
            "gap": self.gap,
            "c_new": self.c_new,
            "budget": self.budget,
            "seed": self.seed,
            "history": [
                {"params": list(params), "ratio": ratio} for params, ratio in self.history
            ],
        }


def _worker_count() -> int:
    raw = os.environ.get("WEAKMORREY_THREADS", "")
    try:
        workers = int(raw) if raw else 1
    except ValueError:
        workers = 1
    return max(1, workers)


def search_extremal(
    system: ExponentSystem,
    family: FamilyConfig,
    budget: int,
    seed: int = 0,
    config: SearchConfig = None,
) -> SharpnessResult:
    """Multi-start compass search for the largest norm ratio in a family.

    Runs ceil(budget / RESTART_BUDGET) restarts, each from a point drawn
    with seed + restart_index, together consuming exactly ``budget`` ratio
    evaluations. Restarts are independent, so they run on a thread pool
    capped by the WEAKMORREY_THREADS environment variable (default 1); the
    merged result does not depend on the worker count.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    cfg = replace(config or SearchConfig(), off_center_guard=False)
    c_new = bound_new(system.p_list())
    boxes = family._boxes() * system.m
    log_lo = np.log([b[0] for b in boxes])
    log_hi = np.log([b[1] for b in boxes])

    def evaluate(params: tuple):
        functions = _build_functions(family, system, params)
        try:
            report = check_holder(functions, system, cfg)
        except NotInSpaceError:
            return None
        ratio = report.ratio
        if report.product_of_norms > 0.0:
            slack = report.tolerance / report.product_of_norms
            if ratio > c_new + slack:
                raise InconsistencyError(
                    f"observed ratio {ratio!r} exceeds the proven bound {c_new!r} "
                    f"(+{slack!r} tolerance) at params {params!r}"
                )
        return ratio

    allotments = [RESTART_BUDGET] * (budget // RESTART_BUDGET)
    if budget % RESTART_BUDGET:
        allotments.append(budget % RESTART_BUDGET)

    def run_restart(args) -> tuple:
        index, allowed = args
        return _restart(evaluate, log_lo, log_hi, seed + index, allowed)

    workers = _worker_count()
    jobs = list(enumerate(allotments))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run_restart, jobs))
    else:
        outcomes = [run_restart(j) for j in jobs]

    history = []
    best_ratio, best_params = -math.inf, None
    for ratio, params, entries in outcomes:
        history.extend(entries)
        if ratio is not None and ratio > best_ratio:
            best_ratio, best_params = ratio, params
    if best_params is None:
        raise DegenerateFamilyError(
            "every candidate in the family had an infinite or undefined norm; "
            "check the parameter intervals (e.g. fractions above 1 leave the space)"
        )
    return SharpnessResult(
        best_ratio=best_ratio,
        best_params=tuple(best_params),
        trials=len(history),
        gap=c_new - best_ratio,
        c_new=c_new,
        budget=budget,
        seed=seed,
        history=tuple(history),
    )


def _restart(evaluate, log_lo, log_hi, rng_seed: int, allowed: int) -> tuple:
    """One compass-search restart; consumes at most ``allowed`` evaluations.

    The random generator only picks the starting point; everything after
    is a fixed-order scan with step halving, so the evaluation sequence is
    a deterministic stream that an exhausted budget merely truncates.
    """
    rng = np.random.default_rng(rng_seed)
    x = log_lo + (log_hi - log_lo) * rng.random(len(log_lo))
    history = []
    remaining = [allowed]

    def attempt(point: np.ndarray):
        params = tuple(float(v) for v in np.exp(point))
        ratio = evaluate(params)
        history.append((params, ratio))
        remaining[0] -= 1
        return ratio

    best_ratio = attempt(x)
    best_params = tuple(float(v) for v in np.exp(x))
    step = 0.25 * (log_hi - log_lo)
    while remaining[0] > 0 and float(np.max(step, initial=0.0)) > 1e-4:
        improved = False
        for i in range(len(x)):
            if step[i] == 0.0:
                continue
            for sign in (1.0, -1.0):
                if remaining[0] <= 0:
                    break
                trial = x.copy()
                trial[i] = min(max(x[i] + sign * step[i], log_lo[i]), log_hi[i])
                if trial[i] == x[i]:
                    continue
                ratio = attempt(trial)
                if ratio is not None and (best_ratio is None or ratio > best_ratio):
                    x = trial
                    best_ratio = ratio
                    best_params = tuple(float(v) for v in np.exp(x))
                    improved = True
        if not improved:
            step *= 0.5
    return (best_ratio, best_params, history)
