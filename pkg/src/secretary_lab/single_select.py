"""Single-choice online selection: the pegging family and four baselines.

Every runner consumes an Instance plus a Schedule, processes candidates in
arrival order, and commits irrevocably to at most one candidate. Outcomes
carry an acceptance-rule tag naming the branch that fired, which the tests
and the exact oracle lean on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .core import (
    ADDITIVE,
    MULTIPLICATIVE,
    SYMMETRIC_MULTIPLICATIVE,
    ErrorAlgebra,
    Instance,
    RunningError,
    Schedule,
    best_predicted_index,
    lambert_w0,
    lambert_wm1,
)

__all__ = [
    "SelectionOutcome",
    "PeggingState",
    "additive_pegging_run",
    "pegging_run",
    "multiplicative_pegging_run",
    "symmetric_pegging_run",
    "dynkin_run",
    "learned_dynkin_run",
    "highest_prediction_run",
    "value_max_secretary_run",
    "value_max_phase_times",
    "CLASSIC_CUTOFF",
    "ERROR_SWITCH_THRESHOLD",
    "LEARNED_REJECT_END",
]

# acceptance rule tags
PEGGED_SINGLETON = "PeggedSingleton"
CAND_F = "CandF"
CAND_NOT_F_EMPTY_PEG = "CandNotF-EmptyPeg"
NOT_CAND_F = "NotCandF"
PREDICTION_MODE = "PredictionMode"
SECRETARY_MODE = "SecretaryMode"
PHASE2 = "Phase2"
PHASE3 = "Phase3"
NO_ACCEPT = "None"

CLASSIC_CUTOFF = math.exp(-1.0)

# learned-dynkin constants: switch to fallback mode once a relative prediction
# error above the threshold is seen; fallback rejects everything before 0.313
ERROR_SWITCH_THRESHOLD = 0.646
LEARNED_REJECT_END = 0.313


@dataclass(frozen=True)
class SelectionOutcome:
    accepted_index: int | None
    accepted_value: float | None
    acceptance_time: float | None
    acceptance_rule: str

    @property
    def accepted(self) -> bool:
        return self.accepted_index is not None


@dataclass
class PeggingState:
    """Mutable pegging-run state: the pegged set and the error high-water mark."""

    pegged_set: set[int] = field(default_factory=set)
    running_error: RunningError = field(default_factory=RunningError)


def _no_accept() -> SelectionOutcome:
    return SelectionOutcome(None, None, None, NO_ACCEPT)


def _accept(instance: Instance, schedule: Schedule, i: int, rule: str) -> SelectionOutcome:
    return SelectionOutcome(
        i, instance.true_values[i], schedule.arrival_times[i], rule
    )


def _check_pair(instance: Instance, schedule: Schedule) -> None:
    if instance.n != schedule.n:
        raise ValueError(
            f"instance has {instance.n} candidates but schedule has {schedule.n}"
        )


def additive_pegging_run(instance: Instance, schedule: Schedule) -> SelectionOutcome:
    """Pegging with additive errors.

    An arriving member of the pegged set is accepted if it is the last one
    left, otherwise unpegged and handled like anyone else. A candidate is
    "fair-looking" (F) when it beats everything seen so far and arrives after
    time 1/2; it is "the candidate" (C) when it carries the highest
    prediction. C and F: accept. C alone: peg every later candidate whose
    prediction plus the current error slack could beat it, and accept now if
    nobody qualifies. F alone: accept if the true value clears the best
    prediction minus the error slack.
    """
    _check_pair(instance, schedule)
    u = instance.true_values
    uhat = instance.predicted_values
    ihat = best_predicted_index(instance)
    order = schedule.arrival_order
    state = PeggingState()
    best_seen = -math.inf
    for pos, i in enumerate(order):
        if i in state.pegged_set:
            if len(state.pegged_set) == 1:
                return _accept(instance, schedule, i, PEGGED_SINGLETON)
            state.pegged_set.discard(i)
        t = schedule.arrival_times[i]
        eps_t = state.running_error.observe(abs(uhat[i] - u[i]))
        fair = u[i] > best_seen and t > 0.5
        cand = i == ihat
        best_seen = max(best_seen, u[i])
        if cand and fair:
            return _accept(instance, schedule, i, CAND_F)
        elif cand:
            state.pegged_set = {
                j for j in order[pos + 1 :] if u[ihat] < uhat[j] + eps_t
            }
            if not state.pegged_set:
                return _accept(instance, schedule, i, CAND_NOT_F_EMPTY_PEG)
        elif fair:
            if u[i] > uhat[ihat] - eps_t:
                return _accept(instance, schedule, i, NOT_CAND_F)
    raise AssertionError("pegging must accept some candidate")  # pragma: no cover


def pegging_run(
    instance: Instance, schedule: Schedule, algebra: ErrorAlgebra
) -> SelectionOutcome:
    """Pegging generalized over an error algebra.

    Comparisons pad the known side with the running error through the
    algebra's combine: a candidate's value combined with (identity + error)
    must beat the best prediction, and the pegged set keeps every later
    candidate whose prediction beats the best candidate's value combined with
    (identity - error).
    """
    _check_pair(instance, schedule)
    u = instance.true_values
    uhat = instance.predicted_values
    ihat = best_predicted_index(instance)
    order = schedule.arrival_order
    combine = algebra.combine
    ident = algebra.identity
    state = PeggingState()
    best_seen = -math.inf
    for pos, i in enumerate(order):
        if i in state.pegged_set:
            if len(state.pegged_set) == 1:
                return _accept(instance, schedule, i, PEGGED_SINGLETON)
            state.pegged_set.discard(i)
        t = schedule.arrival_times[i]
        eps_t = state.running_error.observe(algebra.error_fn(u[i], uhat[i]))
        fair = u[i] > best_seen and t > 0.5
        cand = i == ihat
        best_seen = max(best_seen, u[i])
        if cand and fair:
            return _accept(instance, schedule, i, CAND_F)
        elif cand:
            floor = combine(u[ihat], ident - eps_t)
            state.pegged_set = {j for j in order[pos + 1 :] if floor < uhat[j]}
            if not state.pegged_set:
                return _accept(instance, schedule, i, CAND_NOT_F_EMPTY_PEG)
        elif fair:
            if combine(u[i], ident + eps_t) > uhat[ihat]:
                return _accept(instance, schedule, i, NOT_CAND_F)
    raise AssertionError("pegging must accept some candidate")  # pragma: no cover


def multiplicative_pegging_run(
    instance: Instance, schedule: Schedule
) -> SelectionOutcome:
    return pegging_run(instance, schedule, MULTIPLICATIVE)


def symmetric_pegging_run(instance: Instance, schedule: Schedule) -> SelectionOutcome:
    return pegging_run(instance, schedule, SYMMETRIC_MULTIPLICATIVE)


def dynkin_run(
    instance: Instance, schedule: Schedule, cutoff: float = CLASSIC_CUTOFF
) -> SelectionOutcome:
    """Classic cutoff rule: observe until the cutoff time, then take the first
    candidate beating everything seen so far. Ignores predictions."""
    _check_pair(instance, schedule)
    if not 0.0 < cutoff < 1.0:
        raise ValueError(f"cutoff must lie in (0, 1), got {cutoff!r}")
    u = instance.true_values
    best_seen = -math.inf
    for i in schedule.arrival_order:
        t = schedule.arrival_times[i]
        if t > cutoff and u[i] > best_seen:
            return _accept(instance, schedule, i, SECRETARY_MODE)
        best_seen = max(best_seen, u[i])
    return _no_accept()


def learned_dynkin_run(instance: Instance, schedule: Schedule) -> SelectionOutcome:
    """Trust the predictions until one is off by more than the switch
    threshold (relative), then fall back to a cutoff rule at 0.313.

    The mode switch is checked before the acceptance checks on the same
    arrival, so the candidate that reveals a bad prediction is never accepted
    on trust.
    """
    _check_pair(instance, schedule)
    u = instance.true_values
    uhat = instance.predicted_values
    ihat = best_predicted_index(instance)
    prediction_mode = True
    best_seen = -math.inf
    for i in schedule.arrival_order:
        t = schedule.arrival_times[i]
        if abs(1.0 - uhat[i] / u[i]) > ERROR_SWITCH_THRESHOLD:
            prediction_mode = False
        if prediction_mode and i == ihat:
            return _accept(instance, schedule, i, PREDICTION_MODE)
        if not prediction_mode and t > LEARNED_REJECT_END and u[i] > best_seen:
            return _accept(instance, schedule, i, SECRETARY_MODE)
        best_seen = max(best_seen, u[i])
    return _no_accept()


def highest_prediction_run(instance: Instance, schedule: Schedule) -> SelectionOutcome:
    """Accept the highest-predicted candidate the moment it arrives."""
    _check_pair(instance, schedule)
    ihat = best_predicted_index(instance)
    return _accept(instance, schedule, ihat, PREDICTION_MODE)


def value_max_phase_times(c: float) -> tuple[float, float]:
    """Phase boundaries exp(W_-1(-1/(ce))) <= exp(W_0(-1/(ce))) for c >= 1."""
    if c < 1.0:
        raise ValueError(f"c must be >= 1, got {c!r}")
    a = -1.0 / (c * math.e)
    return math.exp(lambert_wm1(a)), math.exp(lambert_w0(a))


def value_max_secretary_run(
    instance: Instance,
    schedule: Schedule,
    c: float = 1.0,
    lam: float = 0.0,
) -> SelectionOutcome:
    """Three-phase rule driven by the best prediction as a scalar target.

    Observe until t_lo. Between t_lo and t_hi accept anything beating both the
    observed phase-1 maximum and (target - lam), where the target is the
    largest predicted value. From t_hi on, accept anything beating everything
    observed before t_hi.
    """
    _check_pair(instance, schedule)
    if lam < 0.0:
        raise ValueError(f"lam must be >= 0, got {lam!r}")
    t_lo, t_hi = value_max_phase_times(c)
    u = instance.true_values
    target = max(instance.predicted_values)
    max_before_lo = -math.inf
    max_before_hi = -math.inf
    for i in schedule.arrival_order:
        t = schedule.arrival_times[i]
        if t_lo < t < t_hi and u[i] > max(max_before_lo, target - lam):
            return _accept(instance, schedule, i, PHASE2)
        if t >= t_hi and u[i] > max_before_hi:
            return _accept(instance, schedule, i, PHASE3)
        if t < t_lo:
            max_before_lo = max(max_before_lo, u[i])
        if t < t_hi:
            max_before_hi = max(max_before_hi, u[i])
    return _no_accept()
