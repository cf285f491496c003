"""Scale-factor search: grid bracketing plus derivative-free refinement.

The search evaluates the objective on a log-spaced grid (always including
0, the unsmoothed baseline), brackets the best point with its neighbors,
and refines inside the bracket with Brent's method (golden-section steps
combined with successive parabolic interpolation).  The reported optimum
is the best point ever evaluated, so the tuned result can never score
worse on the development data than the baseline.

Discrete objectives such as the raw error count are piecewise constant in
lambda; the refinement then stops inside a flat gap and simply returns a
point of it.  That behavior is intentional and is why the smoothed error
count exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import ParallelCorpus
from .errors import TuningError
from .objectives import DevSet, Objective
from .smoothing import AddingStrategy
from .trainer import TrainConfig, train

# (3 - sqrt(5)) / 2, the golden-section step fraction
_GOLDEN = 0.3819660112501051

DEFAULT_GRID: tuple[float, ...] = (0.0,) + tuple(10.0 ** (k / 4.0) for k in range(-16, 17))


@dataclass(frozen=True)
class TuneConfig:
    grid: tuple[float, ...] = DEFAULT_GRID
    tolerance: float = 1e-4
    max_refine_evals: int = 100

    def __post_init__(self):
        if any(x < 0 for x in self.grid):
            raise ValueError("grid candidates must be non-negative")
        if list(self.grid) != sorted(self.grid):
            raise ValueError("grid must be sorted ascending")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_refine_evals < 0:
            raise ValueError("max_refine_evals must be non-negative")


@dataclass(frozen=True)
class TuneResult:
    lambda_star: float
    objective_value: float
    evaluations: tuple[tuple[float, float], ...]
    strategy: str
    objective: str


def _is_better(value: float, best: float, maximize: bool) -> bool:
    return value > best if maximize else value < best


def grid_bracket(f, grid, maximize: bool = False) -> tuple[float, float, float]:
    """Evaluate f on the whole grid and bracket the best point.

    Returns (lo, mid, hi) with mid the best grid point.  If the best point
    is an endpoint the bracket degenerates on that side (lo == mid or
    mid == hi) and refinement will return mid unchanged.
    """
    grid = list(grid)
    if len(grid) < 3:
        raise ValueError("grid needs at least 3 points")
    best_i = None
    best_v = None
    for i, x in enumerate(grid):
        v = f(x)
        if math.isnan(v):
            continue
        if best_v is None or _is_better(v, best_v, maximize):
            best_i, best_v = i, v
    if best_v is None or math.isinf(best_v):
        raise TuningError("objective is not finite anywhere on the grid")
    lo = grid[max(best_i - 1, 0)]
    hi = grid[min(best_i + 1, len(grid) - 1)]
    return lo, grid[best_i], hi


def brent_minimize(f, bracket, tolerance: float = 1e-4, max_evals: int = 100) -> tuple[float, float]:
    """Minimize f inside a bracket without derivatives (Brent's method).

    The bracket mid point must be strictly better than both ends;
    otherwise (including degenerate brackets) mid is returned unrefined.
    Stops once the enclosing interval shrinks below the tolerance or the
    evaluation budget runs out.  A non-finite value at a new interior
    point raises TuningError naming the offending lambda.
    """
    lo, mid, hi = bracket
    if not lo <= mid <= hi:
        raise ValueError(f"invalid bracket {bracket}")
    evals = 0

    def checked(x: float) -> float:
        nonlocal evals
        evals += 1
        v = f(x)
        if math.isnan(v) or math.isinf(v):
            raise TuningError(f"objective returned non-finite value at lambda={x!r}", lam=x)
        return v

    if lo == mid or mid == hi:
        return mid, checked(mid)
    fmid = checked(mid)
    flo, fhi = f(lo), f(hi)
    evals += 2
    if not (fmid < flo and fmid < fhi):
        return mid, fmid

    a, b = lo, hi
    x = w = v = mid
    fx = fw = fv = fmid
    d = e = 0.0
    while evals < max_evals:
        xm = 0.5 * (a + b)
        tol1 = tolerance
        tol2 = 2.0 * tol1
        if abs(x - xm) <= tol2 - 0.5 * (b - a):
            break
        if abs(e) > tol1:
            # try a parabola through (x, fx), (w, fw), (v, fv)
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            etemp = e
            e = d
            if abs(p) >= abs(0.5 * q * etemp) or p <= q * (a - x) or p >= q * (b - x):
                # parabola rejected: golden-section step into the larger side
                e = b - x if x < xm else a - x
                d = _GOLDEN * e
            else:
                d = p / q
                u = x + d
                if u - a < tol2 or b - u < tol2:
                    d = math.copysign(tol1, xm - x)
        else:
            e = b - x if x < xm else a - x
            d = _GOLDEN * e
        u = x + d if abs(d) >= tol1 else x + math.copysign(tol1, d)
        fu = checked(u)
        if fu <= fx:
            if u >= x:
                a = x
            else:
                b = x
            v, w, x = w, x, u
            fv, fw, fx = fw, fx, fu
        else:
            if u < x:
                a = u
            else:
                b = u
            if fu <= fw or w == x:
                v, w = w, u
                fv, fw = fw, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return x, fx


def search_scale(f, grid, maximize: bool = False, tolerance: float = 1e-4,
                 max_refine_evals: int = 100) -> tuple[float, float, tuple[tuple[float, float], ...]]:
    """Grid sweep plus refinement; returns (best_lambda, best_value, trace).

    Every objective evaluation is memoized, the trace is reported in
    lambda order, and the winner is the best point evaluated anywhere
    (ties resolve toward the smallest lambda).
    """
    cache: dict[float, float] = {}

    def memo(x: float) -> float:
        if x not in cache:
            cache[x] = f(x)
        return cache[x]

    signed = (lambda x: -memo(x)) if maximize else memo
    try:
        bracket = grid_bracket(memo, grid, maximize)
        brent_minimize(signed, bracket, tolerance, max_refine_evals)
    except TuningError as err:
        err.evaluations = tuple(sorted(cache.items()))
        raise
    best_lam = None
    best_v = None
    for lam in sorted(cache):
        value = cache[lam]
        if math.isnan(value):
            continue
        if best_v is None or _is_better(value, best_v, maximize):
            best_lam, best_v = lam, value
    return best_lam, best_v, tuple(sorted(cache.items()))


def tune(
    train_corpus: ParallelCorpus,
    dev: DevSet,
    strategy: AddingStrategy,
    objective: Objective,
    tune_config: TuneConfig | None = None,
    train_config: TrainConfig | None = None,
) -> TuneResult:
    """Pick the scale lambda optimizing the objective on development data.

    Each candidate lambda triggers a full retrain on the training corpus;
    lambda = 0 is always among the candidates, so the tuned result is
    never worse on the development data than the unsmoothed baseline.
    """
    tune_config = tune_config or TuneConfig()
    base = train_config or TrainConfig()
    if objective.requires_annotation and not dev.annotated:
        raise ValueError(f"objective {objective.name!r} needs an annotated development set")
    grid = sorted(set(tune_config.grid) | {0.0})

    def score(lam: float) -> float:
        result = train(train_corpus, TrainConfig(base.iterations, lam, strategy, base.epsilon))
        return objective.evaluate(dev, result.table)

    lam, value, trace = search_scale(
        score, grid, objective.maximize, tune_config.tolerance, tune_config.max_refine_evals
    )
    return TuneResult(lam, value, trace, strategy.name, objective.name)
