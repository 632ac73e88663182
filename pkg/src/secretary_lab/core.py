"""Problem instances, arrival schedules, and prediction-error algebras.

A candidate i has a true value u_i > 0 and a predicted value uhat_i > 0. An
arrival schedule assigns each candidate an i.i.d. Uniform[0,1] arrival time;
processing candidates in time order is the usual random-order model, with the
clock available to the algorithms as side information. Candidate indices are
0-based everywhere.
"""

from __future__ import annotations

import math
import operator
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "Instance",
    "Schedule",
    "ErrorAlgebra",
    "RunningError",
    "ADDITIVE",
    "MULTIPLICATIVE",
    "SYMMETRIC_MULTIPLICATIVE",
    "ALGEBRAS",
    "make_instance",
    "best_true_index",
    "best_predicted_index",
    "prediction_error",
    "sample_schedule",
    "algebra_assumption_check",
    "lambert_w0",
    "lambert_wm1",
]


@dataclass(frozen=True)
class Instance:
    """A selection problem: true values and predicted values, all > 0."""

    true_values: tuple[float, ...]
    predicted_values: tuple[float, ...]

    def __post_init__(self) -> None:
        tv = tuple(float(v) for v in self.true_values)
        pv = tuple(float(v) for v in self.predicted_values)
        object.__setattr__(self, "true_values", tv)
        object.__setattr__(self, "predicted_values", pv)
        if len(tv) != len(pv):
            raise ValueError(
                f"length mismatch: {len(tv)} true values vs {len(pv)} predicted values"
            )
        if not tv:
            raise ValueError("an instance needs at least one candidate")
        for kind, vals in (("true", tv), ("predicted", pv)):
            for i, v in enumerate(vals):
                if not math.isfinite(v) or v <= 0.0:
                    raise ValueError(f"nonpositive {kind} value {v!r} at index {i}")

    @property
    def n(self) -> int:
        return len(self.true_values)


def make_instance(
    true_values: Iterable[float], predicted_values: Iterable[float]
) -> Instance:
    return Instance(tuple(true_values), tuple(predicted_values))


def best_true_index(instance: Instance) -> int:
    """Index of the highest true value; ties go to the lowest index."""
    u = instance.true_values
    return max(range(instance.n), key=lambda i: (u[i], -i))


def best_predicted_index(instance: Instance) -> int:
    """Index of the highest predicted value; ties go to the lowest index."""
    p = instance.predicted_values
    return max(range(instance.n), key=lambda i: (p[i], -i))


@dataclass(frozen=True)
class ErrorAlgebra:
    """How prediction error is measured and composed with values.

    combine/inverse form a group action on positive values with the given
    identity; error_fn(u, uhat) >= 0 measures the discrepancy of one
    prediction. The shipped algebras all satisfy the sandwich property

        combine(u, identity + e) >= uhat >= combine(u, identity - e)

    with e = error_fn(u, uhat), which is what the selection guarantees need
    (checked by algebra_assumption_check).
    """

    name: str
    combine: Callable[[float, float], float]
    inverse: Callable[[float, float], float]
    identity: float
    error_fn: Callable[[float, float], float]

    def instance_error(self, instance: Instance) -> float:
        return max(
            self.error_fn(u, p)
            for u, p in zip(instance.true_values, instance.predicted_values)
        )


ADDITIVE = ErrorAlgebra(
    name="additive",
    combine=operator.add,
    inverse=operator.sub,
    identity=0.0,
    error_fn=lambda u, uhat: abs(uhat - u),
)

MULTIPLICATIVE = ErrorAlgebra(
    name="multiplicative",
    combine=operator.mul,
    inverse=operator.truediv,
    identity=1.0,
    error_fn=lambda u, uhat: abs(1.0 - uhat / u),
)

SYMMETRIC_MULTIPLICATIVE = ErrorAlgebra(
    name="symmetric-multiplicative",
    combine=operator.mul,
    inverse=operator.truediv,
    identity=1.0,
    error_fn=lambda u, uhat: abs(1.0 - max(u, uhat) / min(u, uhat)),
)

ALGEBRAS = {
    a.name: a for a in (ADDITIVE, MULTIPLICATIVE, SYMMETRIC_MULTIPLICATIVE)
}


def prediction_error(instance: Instance, algebra: ErrorAlgebra = ADDITIVE) -> float:
    """Worst per-candidate prediction error of the instance under an algebra."""
    return algebra.instance_error(instance)


def algebra_assumption_check(
    algebra: ErrorAlgebra, u: float, uhat: float, tol: float = 1e-12
) -> bool:
    """True iff the sandwich property holds for this (u, uhat) pair.

    A small relative slack absorbs rounding in combine/error_fn.
    """
    e = algebra.error_fn(u, uhat)
    hi = algebra.combine(u, algebra.identity + e)
    lo = algebra.combine(u, algebra.identity - e)
    slack = tol * max(1.0, abs(u), abs(uhat))
    return hi >= uhat - slack and uhat >= lo - slack


class RunningError:
    """Maximum per-candidate error among the arrivals observed so far."""

    __slots__ = ("current_max",)

    def __init__(self) -> None:
        self.current_max = 0.0

    def observe(self, err: float) -> float:
        if err > self.current_max:
            self.current_max = err
        return self.current_max


@dataclass(frozen=True)
class Schedule:
    """Distinct arrival times in [0,1] plus the induced arrival order."""

    arrival_times: tuple[float, ...]
    arrival_order: tuple[int, ...]

    def __post_init__(self) -> None:
        times = tuple(float(t) for t in self.arrival_times)
        order = tuple(int(i) for i in self.arrival_order)
        object.__setattr__(self, "arrival_times", times)
        object.__setattr__(self, "arrival_order", order)
        n = len(times)
        if sorted(order) != list(range(n)):
            raise ValueError("arrival_order is not a permutation of the candidates")
        for i, t in enumerate(times):
            if not (0.0 <= t <= 1.0):
                raise ValueError(f"arrival time {t!r} at index {i} outside [0, 1]")
        if len(set(times)) != n:
            raise ValueError("arrival times must be pairwise distinct")
        for a, b in zip(order, order[1:]):
            if not times[a] < times[b]:
                raise ValueError("arrival_order does not sort the arrival times")

    @classmethod
    def from_times(cls, times: Sequence[float]) -> "Schedule":
        times = tuple(float(t) for t in times)
        order = tuple(sorted(range(len(times)), key=times.__getitem__))
        return cls(times, order)

    @property
    def n(self) -> int:
        return len(self.arrival_times)


def _sample_times(n: int, rng: np.random.Generator) -> np.ndarray:
    """n distinct uniform arrival times; float collisions are re-drawn."""
    times = rng.random(n)
    while True:
        uniq, counts = np.unique(times, return_counts=True)
        if counts.max(initial=1) == 1:
            return times
        colliding = np.isin(times, uniq[counts > 1])
        times[colliding] = rng.random(int(colliding.sum()))


def sample_schedule(n: int, rng: np.random.Generator) -> Schedule:
    """Draw an i.i.d. Uniform[0,1] arrival schedule for n candidates."""
    if n < 1:
        raise ValueError(f"need at least one candidate, got n={n}")
    times = _sample_times(n, rng)
    order = tuple(int(i) for i in np.argsort(times))
    return Schedule(tuple(float(t) for t in times), order)


# --- Lambert W (both real branches) -----------------------------------------
#
# Halley iteration on f(w) = w e^w - x. Seeds: branch-point series
# w = -1 + p - p^2/3 + 11 p^3/72 with p = +-sqrt(2(e x + 1)) near x = -1/e
# (Corless et al. 1996, eq. 4.22), log asymptotics elsewhere.

_BRANCH_POINT = -math.exp(-1.0)
_MAX_ITER = 50
_STEP_TOL = 1e-14


def _halley(x: float, w: float) -> float:
    for _ in range(_MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        step = f / denom
        w -= step
        if abs(step) <= _STEP_TOL * max(1.0, abs(w)):
            break
    return w


def _branch_series(p: float) -> float:
    return -1.0 + p - p * p / 3.0 + 11.0 * p**3 / 72.0


def _check_domain(x: float) -> float:
    if x < _BRANCH_POINT:
        # tolerate rounding right at -1/e, reject anything genuinely below
        if x < _BRANCH_POINT - 1e-15 * abs(_BRANCH_POINT):
            raise ValueError(f"lambert W undefined for x={x!r} < -1/e")
        return _BRANCH_POINT
    return x


def lambert_w0(x: float) -> float:
    """Principal branch W_0: the solution w >= -1 of w e^w = x, x >= -1/e."""
    x = _check_domain(float(x))
    if x == _BRANCH_POINT:
        return -1.0
    if x == 0.0:
        return 0.0
    if x < -0.32:
        p = math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        w = _branch_series(p)
    elif x < 1.0:
        w = x
    else:
        lx = math.log(x)
        w = lx - math.log(lx) if lx > 1.0 else 0.5
    return _halley(x, w)


def lambert_wm1(x: float) -> float:
    """Lower branch W_-1: the solution w <= -1 of w e^w = x, -1/e <= x < 0."""
    x = _check_domain(float(x))
    if x >= 0.0:
        raise ValueError(f"lambert W_-1 undefined for x={x!r} >= 0")
    if x == _BRANCH_POINT:
        return -1.0
    if x < -0.32:
        p = -math.sqrt(max(0.0, 2.0 * (math.e * x + 1.0)))
        w = _branch_series(p)
    else:
        l1 = math.log(-x)
        l2 = math.log(-l1)
        w = l1 - l2 + l2 / l1
    w = _halley(x, w)
    if w > -1.0 or abs(w * math.exp(w) - x) > 1e-10 * abs(x):
        w = _bisect_wm1(x)
    return w


def _bisect_wm1(x: float) -> float:
    # g(w) = w e^w decreases from 0- to -1/e on (-inf, -1]
    hi = -1.0
    lo = -2.0
    while lo * math.exp(lo) < x:
        lo *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < x:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
