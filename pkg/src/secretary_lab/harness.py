"""Monte Carlo harness: seeded trial runner, metrics, smoothness predicates,
the exact small-n oracle, and the algorithm registry.

Every trial derives its own RNG seed from (master seed, family, eps, n, trial
index) through a fixed 64-bit mix, so results are bit-identical across runs
and independent of execution order or batching. Within a trial the instance
is drawn first, then the arrival schedule, from the same per-trial generator;
all algorithms in a sweep therefore see identical instances and schedules.
"""

from __future__ import annotations

import itertools
import math
import struct
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Mapping

import numpy as np

from . import _engine
from .core import (
    ADDITIVE,
    MULTIPLICATIVE,
    SYMMETRIC_MULTIPLICATIVE,
    Instance,
    Schedule,
    _sample_times,
)
from .generators import FamilySpec, family_arrays
from .multi_select import SetSelection, fair_half_run, k_pegging_run
from .single_select import (
    CLASSIC_CUTOFF,
    LEARNED_REJECT_END,
    SelectionOutcome,
    additive_pegging_run,
    dynkin_run,
    highest_prediction_run,
    learned_dynkin_run,
    multiplicative_pegging_run,
    symmetric_pegging_run,
    value_max_phase_times,
    value_max_secretary_run,
)

__all__ = [
    "AlgorithmSpec",
    "AlgorithmInfo",
    "REGISTRY",
    "TrialStats",
    "ExactStats",
    "OracleComparison",
    "trial_seed",
    "generate_cell",
    "run_trials",
    "check_smoothness",
    "exact_oracle",
    "compare_oracle_montecarlo",
]


# --- algorithm registry ------------------------------------------------------


@dataclass(frozen=True)
class AlgorithmSpec:
    """A registry name plus parameter overrides (k, cutoff, c, lam)."""

    name: str
    params: Mapping[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class AlgorithmInfo:
    name: str
    kind: str  # "single" | "multi"
    smoothness: str | None  # "additive" | "multiplicative" | "symmetric" | "k" | None
    run: Callable
    thresholds: Callable[[Mapping[str, float]], tuple[float, ...]]


def _fixed(*ts: float) -> Callable[[Mapping[str, float]], tuple[float, ...]]:
    return lambda params: ts


REGISTRY: dict[str, AlgorithmInfo] = {
    info.name: info
    for info in (
        AlgorithmInfo(
            "additive-pegging", "single", "additive", additive_pegging_run, _fixed(0.5)
        ),
        AlgorithmInfo(
            "multiplicative-pegging",
            "single",
            "multiplicative",
            multiplicative_pegging_run,
            _fixed(0.5),
        ),
        AlgorithmInfo(
            "pegging-symmetric", "single", "symmetric", symmetric_pegging_run, _fixed(0.5)
        ),
        AlgorithmInfo(
            "dynkin",
            "single",
            None,
            dynkin_run,
            lambda params: (float(params.get("cutoff", CLASSIC_CUTOFF)),),
        ),
        AlgorithmInfo(
            "learned-dynkin", "single", None, learned_dynkin_run, _fixed(LEARNED_REJECT_END)
        ),
        AlgorithmInfo(
            "highest-prediction", "single", None, highest_prediction_run, _fixed()
        ),
        AlgorithmInfo(
            "value-max",
            "single",
            None,
            value_max_secretary_run,
            lambda params: value_max_phase_times(float(params.get("c", 1.0))),
        ),
        AlgorithmInfo("k-pegging", "multi", "k", k_pegging_run, _fixed(0.5)),
        AlgorithmInfo("fair-half", "multi", None, fair_half_run, _fixed(0.5)),
    )
}

_SMOOTHNESS_ERROR_KIND = {
    "additive": "additive",
    "multiplicative": "multiplicative",
    "symmetric": "symmetric",
}


def _info(spec: AlgorithmSpec) -> AlgorithmInfo:
    try:
        return REGISTRY[spec.name]
    except KeyError:
        raise ValueError(f"unknown algorithm {spec.name!r}") from None


def _run_params(spec: AlgorithmSpec) -> dict:
    return {k: v for k, v in spec.params.items() if k != "k"}


# --- per-trial seeding --------------------------------------------------------

_MASK64 = (1 << 64) - 1


def _splitmix64(v: int) -> int:
    v = (v + 0x9E3779B97F4A7C15) & _MASK64
    v = ((v ^ (v >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    v = ((v ^ (v >> 27)) * 0x94D049BB133111EB) & _MASK64
    return v ^ (v >> 31)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _MASK64
    return h


def _mix64(*parts: int) -> int:
    acc = 0
    for p in parts:
        acc = _splitmix64(acc ^ (p & _MASK64))
    return acc


def trial_seed(master_seed: int, family_spec: FamilySpec, trial: int) -> int:
    """Deterministic 64-bit seed for one trial of one sweep cell."""
    eps_bits = struct.unpack("<Q", struct.pack("<d", family_spec.epsilon))[0]
    return _mix64(
        master_seed,
        _fnv1a64(family_spec.family.encode()),
        eps_bits,
        family_spec.n,
        trial,
    )


@lru_cache(maxsize=2)
def _cell_arrays(
    family: str, epsilon: float, n: int, trials: int, master_seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    spec = FamilySpec(family, epsilon, n)
    U = np.empty((trials, n))
    UH = np.empty((trials, n))
    T = np.empty((trials, n))
    for t in range(trials):
        rng = np.random.default_rng(trial_seed(master_seed, spec, t))
        u, uhat = family_arrays(spec, rng)
        U[t] = u
        UH[t] = uhat
        T[t] = _sample_times(n, rng)
    for a in (U, UH, T):
        a.setflags(write=False)
    return U, UH, T


def generate_cell(
    family_spec: FamilySpec, trials: int, master_seed: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All instances and schedules of one cell as read-only (trials, n) matrices.

    Cached so that several algorithms sweeping the same cell share one
    generation pass; generation is a pure function of the arguments.
    """
    return _cell_arrays(
        family_spec.family, family_spec.epsilon, family_spec.n, trials, master_seed
    )


# --- metrics -------------------------------------------------------------------


@dataclass(frozen=True)
class TrialStats:
    trials: int
    k: int
    competitive_ratio: float
    fairness: float | tuple[float, ...]
    fill_rate: float
    smoothness_violations: int
    no_accept_count: int


def _smoothness_ok_batch(
    kind: str, U: np.ndarray, UH: np.ndarray, val: np.ndarray
) -> np.ndarray:
    u_star = U.max(axis=1)
    if kind == "additive":
        eps = _engine.error_matrix("additive", U, UH).max(axis=1)
        bound = u_star - 4.0 * eps
        slack = 1e-9 * np.maximum(1.0, u_star)
        return val >= bound - slack
    eps = _engine.error_matrix(_SMOOTHNESS_ERROR_KIND[kind], U, UH).max(axis=1)
    bound = u_star * (1.0 - eps) ** 2 / (1.0 + eps) ** 2
    slack = 1e-9 * np.maximum(1.0, bound)
    # the multiplicative-form guarantee is vacuous once the error reaches 1
    return (eps >= 1.0) | (val >= bound - slack)


def check_smoothness(
    outcome: SelectionOutcome | SetSelection,
    instance: Instance,
    algorithm_spec: AlgorithmSpec,
) -> bool:
    """Per-trial smoothness predicate; baselines are exempt (always True)."""
    info = _info(algorithm_spec)
    if info.smoothness is None:
        return True
    u = instance.true_values
    if info.smoothness == "k":
        k = outcome.capacity
        eps = ADDITIVE.instance_error(instance)
        top_k_sum = sum(sorted(u, reverse=True)[:k])
        got = sum(u[i] for i in outcome.accepted_indices)
        slack = 1e-9 * max(1.0, top_k_sum)
        return got >= top_k_sum - 4.0 * k * eps - slack
    u_star = max(u)
    val = outcome.accepted_value if outcome.accepted else 0.0
    if info.smoothness == "additive":
        eps = ADDITIVE.instance_error(instance)
        bound = u_star - 4.0 * eps
        slack = 1e-9 * max(1.0, u_star)
        return val >= bound - slack
    algebra = (
        MULTIPLICATIVE if info.smoothness == "multiplicative" else SYMMETRIC_MULTIPLICATIVE
    )
    eps = algebra.instance_error(instance)
    if eps >= 1.0:
        return True
    bound = u_star * (1.0 - eps) ** 2 / (1.0 + eps) ** 2
    slack = 1e-9 * max(1.0, bound)
    return val >= bound - slack


def _schedule_from_row(times: np.ndarray) -> Schedule:
    order = tuple(int(i) for i in np.argsort(times))
    return Schedule(tuple(float(t) for t in times), order)


def _run_single_reference(
    info: AlgorithmInfo, params: dict, U: np.ndarray, UH: np.ndarray, T: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    trials = U.shape[0]
    idx = np.empty(trials, dtype=np.int64)
    val = np.empty(trials)
    time = np.empty(trials)
    for t in range(trials):
        inst = Instance(tuple(U[t].tolist()), tuple(UH[t].tolist()))
        sched = _schedule_from_row(T[t])
        out = info.run(inst, sched, **params)
        if out.accepted:
            idx[t] = out.accepted_index
            val[t] = out.accepted_value
            time[t] = out.acceptance_time
        else:
            idx[t] = -1
            val[t] = 0.0
            time[t] = np.nan
    return idx, val, time


def run_trials(
    algorithm_spec: AlgorithmSpec,
    family_spec: FamilySpec,
    trials: int,
    master_seed: int,
    engine: str = "auto",
) -> TrialStats:
    """Run one (algorithm, family, eps) cell of seeded Monte Carlo trials.

    engine selects the execution route for single-select algorithms:
    "reference" loops the per-trial implementations, "vectorized" uses the
    batch engines, "auto" prefers vectorized when available. Both routes are
    decision-identical; stats are assembled from the same per-trial arrays.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials!r}")
    if engine not in ("auto", "reference", "vectorized"):
        raise ValueError(f"unknown engine {engine!r}")
    info = _info(algorithm_spec)
    U, UH, T = generate_cell(family_spec, trials, master_seed)

    if info.kind == "single":
        params = _run_params(algorithm_spec)
        use_batch = engine == "vectorized" or (
            engine == "auto" and algorithm_spec.name in _engine.BATCH_ALGORITHMS
        )
        if use_batch:
            idx, val, _ = _engine.run_single_batch(algorithm_spec.name, params, U, UH, T)
        else:
            idx, val, _ = _run_single_reference(info, params, U, UH, T)
        accepted = idx >= 0
        u_star = U.max(axis=1)
        i_star = U.argmax(axis=1)
        ratios = np.where(accepted, val / u_star, 0.0)
        if info.smoothness is not None:
            ok = _smoothness_ok_batch(info.smoothness, U, UH, np.where(accepted, val, 0.0))
            violations = int((~ok).sum())
        else:
            violations = 0
        return TrialStats(
            trials=trials,
            k=1,
            competitive_ratio=float(ratios.mean()),
            fairness=float((idx == i_star).mean()),
            fill_rate=float(accepted.mean()),
            smoothness_violations=violations,
            no_accept_count=int((~accepted).sum()),
        )

    k = int(algorithm_spec.params.get("k", 1))
    ratios = np.empty(trials)
    hits = np.zeros((trials, k), dtype=bool)
    sizes = np.empty(trials, dtype=np.int64)
    violations = 0
    for t in range(trials):
        inst = Instance(tuple(U[t].tolist()), tuple(UH[t].tolist()))
        sched = _schedule_from_row(T[t])
        sel = info.run(inst, k, sched)
        by_value = np.argsort(-U[t], kind="stable")
        top_k_sum = float(U[t][by_value[:k]].sum())
        got = sum(inst.true_values[i] for i in sel.accepted_indices)
        ratios[t] = got / top_k_sum
        chosen = set(sel.accepted_indices)
        for rank in range(k):
            hits[t, rank] = int(by_value[rank]) in chosen
        sizes[t] = sel.size
        if info.smoothness is not None and not check_smoothness(
            sel, inst, algorithm_spec
        ):
            violations += 1
    return TrialStats(
        trials=trials,
        k=k,
        competitive_ratio=float(ratios.mean()),
        fairness=tuple(float(x) for x in hits.mean(axis=0)),
        fill_rate=float(sizes.mean() / k),
        smoothness_violations=violations,
        no_accept_count=int((sizes == 0).sum()),
    )


# --- exact oracle ---------------------------------------------------------------


@dataclass(frozen=True)
class ExactStats:
    """Exact distribution of one algorithm on one instance over all schedules."""

    acceptance_probability: tuple[float, ...]
    expected_value: float
    no_accept_probability: float


_ORACLE_MAX_N = 8


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first, *rest)


def _region_times(
    comp: tuple[int, ...], edges: list[float]
) -> list[float]:
    """Representative interior times: comp[r] evenly spaced inside region r."""
    times: list[float] = []
    for r, m in enumerate(comp):
        a, b = edges[r], edges[r + 1]
        for j in range(m):
            times.append(a + (b - a) * (j + 1) / (m + 1))
    return times


def exact_oracle(
    algorithm_spec: AlgorithmSpec, instance: Instance, k: int = 1
) -> ExactStats:
    """Exact outcome distribution by enumerating arrival orders and threshold
    region splits.

    Eligible algorithms depend on arrival times only through the order and
    each time's position relative to fixed thresholds, so averaging the
    replayed outcome over every (order, split) cell with weight
    prod_r width_r^{m_r} / m_r! integrates out the uniform arrival times
    exactly.
    """
    info = _info(algorithm_spec)
    n = instance.n
    if n > _ORACLE_MAX_N:
        raise ValueError(f"exact oracle supports n <= {_ORACLE_MAX_N}, got n={n}")
    params = _run_params(algorithm_spec)
    thresholds = sorted(
        {float(t) for t in info.thresholds(algorithm_spec.params) if 0.0 < t < 1.0}
    )
    edges = [0.0, *thresholds, 1.0]
    regions = len(edges) - 1
    widths = [edges[r + 1] - edges[r] for r in range(regions)]
    factorial = [math.factorial(m) for m in range(n + 1)]

    acc = np.zeros(n)
    expected = 0.0
    none_p = 0.0
    for comp in _compositions(n, regions):
        weight = 1.0
        for m, w in zip(comp, widths):
            if m:
                weight *= w**m / factorial[m]
        slot_times = _region_times(comp, edges)
        for perm in itertools.permutations(range(n)):
            times = [0.0] * n
            for pos, i in enumerate(perm):
                times[i] = slot_times[pos]
            schedule = Schedule(tuple(times), perm)
            if info.kind == "single":
                out = info.run(instance, schedule, **params)
                if out.accepted:
                    acc[out.accepted_index] += weight
                    expected += weight * out.accepted_value
                else:
                    none_p += weight
            else:
                sel = info.run(instance, k, schedule)
                for i in sel.accepted_indices:
                    acc[i] += weight
                    expected += weight * instance.true_values[i]
                if sel.size == 0:
                    none_p += weight
    return ExactStats(
        acceptance_probability=tuple(float(p) for p in acc),
        expected_value=float(expected),
        no_accept_probability=float(none_p),
    )


@dataclass(frozen=True)
class OracleComparison:
    algorithm: str
    trials: int
    tol: float
    exact: tuple[float, ...]
    empirical: tuple[float, ...]
    max_deviation: float
    passed: bool


def compare_oracle_montecarlo(
    algorithm_spec: AlgorithmSpec,
    instance: Instance,
    trials: int,
    tol: float,
    seed: int,
    k: int = 1,
) -> OracleComparison:
    """Monte Carlo acceptance frequencies vs the exact oracle, per candidate.

    Returns a diagnostic report; deviations beyond tol mark it failed rather
    than raising.
    """
    exact = exact_oracle(algorithm_spec, instance, k=k)
    info = _info(algorithm_spec)
    n = instance.n
    rng = np.random.default_rng(seed)
    counts = np.zeros(n)
    if info.kind == "single" and algorithm_spec.name in _engine.BATCH_ALGORITHMS:
        T = rng.random((trials, n))
        while True:
            ordered = np.sort(T, axis=1)
            bad = (np.diff(ordered, axis=1) == 0).any(axis=1)
            if not bad.any():
                break
            T[bad] = rng.random((int(bad.sum()), n))
        U = np.tile(np.asarray(instance.true_values), (trials, 1))
        UH = np.tile(np.asarray(instance.predicted_values), (trials, 1))
        idx, _, _ = _engine.run_single_batch(
            algorithm_spec.name, _run_params(algorithm_spec), U, UH, T
        )
        counts = np.bincount(idx[idx >= 0], minlength=n).astype(float)
    else:
        params = _run_params(algorithm_spec)
        for _ in range(trials):
            sched = _schedule_from_row(_sample_times(n, rng))
            if info.kind == "single":
                out = info.run(instance, sched, **params)
                if out.accepted:
                    counts[out.accepted_index] += 1
            else:
                sel = info.run(instance, k, sched)
                for i in sel.accepted_indices:
                    counts[i] += 1
    empirical = counts / trials
    max_dev = float(np.abs(empirical - np.asarray(exact.acceptance_probability)).max())
    return OracleComparison(
        algorithm=algorithm_spec.name,
        trials=trials,
        tol=tol,
        exact=exact.acceptance_probability,
        empirical=tuple(float(x) for x in empirical),
        max_deviation=max_dev,
        passed=max_dev <= tol,
    )
