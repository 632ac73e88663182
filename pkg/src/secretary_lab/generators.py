"""Random instance families for the benchmark sweep, plus two hand-built
constructions that defeat specific baselines.

Every generator returns strictly positive values (zero draws are re-drawn) so
instances always validate. The eps knob controls prediction quality: 0 means
exact predictions for every family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Instance

__all__ = [
    "FamilySpec",
    "FAMILIES",
    "SWEEP_FAMILIES",
    "gen_almost_constant",
    "gen_uniform",
    "gen_adversarial",
    "gen_unfair",
    "counterexample_learned_dynkin",
    "counterexample_value_max",
    "generate_instance",
    "family_arrays",
]

ALMOST_CONSTANT = "almost-constant"
UNIFORM = "uniform"
ADVERSARIAL = "adversarial"
UNFAIR = "unfair"
LEARNED_DYNKIN_COUNTER = "learned-dynkin-counter"
VALUE_MAX_COUNTER = "value-max-counter"

SWEEP_FAMILIES = (ALMOST_CONSTANT, UNIFORM, ADVERSARIAL, UNFAIR)
FAMILIES = SWEEP_FAMILIES + (LEARNED_DYNKIN_COUNTER, VALUE_MAX_COUNTER)

# learned-dynkin's trust threshold; the counterexample must stay below it
_SWITCH_THRESHOLD = 0.646


@dataclass(frozen=True)
class FamilySpec:
    """A named family at a fixed prediction-error level and instance size."""

    family: str
    epsilon: float
    n: int

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n!r}")
        if self.family == LEARNED_DYNKIN_COUNTER:
            if not 0.0 < self.epsilon < _SWITCH_THRESHOLD:
                raise ValueError(
                    f"counter construction needs epsilon in (0, {_SWITCH_THRESHOLD}), "
                    f"got {self.epsilon!r}"
                )
            if self.n != 2:
                raise ValueError("learned-dynkin counterexample has exactly 2 candidates")
        elif self.family == VALUE_MAX_COUNTER:
            if not 0.0 < self.epsilon < 1.0:
                raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon!r}")
            if self.n < 2:
                raise ValueError("value-max counterexample needs n >= 2")
        else:
            if not 0.0 <= self.epsilon < 1.0:
                raise ValueError(f"epsilon must lie in [0, 1), got {self.epsilon!r}")


def _positive(draw, rng: np.random.Generator) -> np.ndarray:
    """Re-draw any nonpositive entries (measure-zero, but values must be > 0)."""
    vals = draw(rng)
    while (vals <= 0.0).any():
        bad = vals <= 0.0
        vals[bad] = draw(rng)[bad]
    return vals


def _almost_constant_arrays(
    eps: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    # one uniformly chosen candidate is worth 1/(1-eps), everyone else 1;
    # predictions are flat 1s
    special = int(rng.integers(n))
    u = np.ones(n)
    u[special] = 1.0 / (1.0 - eps)
    return u, np.ones(n)


def _uniform_arrays(
    eps: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    u = _positive(lambda r: r.standard_exponential(n), rng)
    noise = rng.uniform(1.0 - eps, 1.0 + eps, n)
    return u, u * noise


def _adversarial_arrays(
    eps: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    # deflate the predictions of the better half, inflate the worse half
    u = _positive(lambda r: r.standard_exponential(n), rng)
    by_value = np.argsort(-u, kind="stable")
    factor = np.empty(n)
    factor[by_value[: n // 2]] = 1.0 - eps
    factor[by_value[n // 2 :]] = 1.0 + eps
    return u, u * factor


def _unfair_arrays(
    eps: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    # predictions are the true values with ranks inverted: the best candidate
    # gets the worst candidate's value as its prediction, and so on
    u = _positive(lambda r: r.uniform(1.0 - eps / 4.0, 1.0 + eps / 4.0, n), rng)
    by_value = np.argsort(-u, kind="stable")
    uhat = np.empty(n)
    uhat[by_value] = u[by_value[::-1]]
    return u, uhat


def _value_max_counter_arrays(
    eps: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    # candidate 0 is worth 1 but predicted at 1-eps; everyone else is worth
    # almost nothing and predicted exactly. The cap keeps 1-eps the largest
    # prediction for every eps in (0,1).
    cap = min(eps, 0.999 * (1.0 - eps))
    rest = _positive(lambda r: r.uniform(0.0, cap, n - 1), rng)
    while len(np.unique(rest)) != n - 1:
        rest = _positive(lambda r: r.uniform(0.0, cap, n - 1), rng)
    u = np.concatenate(([1.0], rest))
    uhat = np.concatenate(([1.0 - eps], rest))
    return u, uhat


def _learned_dynkin_counter_arrays(
    theta: float, n: int, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    u = np.array([1.0 + theta / 2.0, 1.0])
    uhat = np.array([1.0 + theta / 2.0, 1.0 + theta])
    return u, uhat


_ARRAY_CORES = {
    ALMOST_CONSTANT: _almost_constant_arrays,
    UNIFORM: _uniform_arrays,
    ADVERSARIAL: _adversarial_arrays,
    UNFAIR: _unfair_arrays,
    LEARNED_DYNKIN_COUNTER: _learned_dynkin_counter_arrays,
    VALUE_MAX_COUNTER: _value_max_counter_arrays,
}


def family_arrays(
    spec: FamilySpec, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Raw (true, predicted) arrays for one draw from the family."""
    return _ARRAY_CORES[spec.family](spec.epsilon, spec.n, rng)


def generate_instance(spec: FamilySpec, rng: np.random.Generator) -> Instance:
    u, uhat = family_arrays(spec, rng)
    return Instance(tuple(u.tolist()), tuple(uhat.tolist()))


def gen_almost_constant(eps: float, n: int, rng: np.random.Generator) -> Instance:
    return generate_instance(FamilySpec(ALMOST_CONSTANT, eps, n), rng)


def gen_uniform(eps: float, n: int, rng: np.random.Generator) -> Instance:
    return generate_instance(FamilySpec(UNIFORM, eps, n), rng)


def gen_adversarial(eps: float, n: int, rng: np.random.Generator) -> Instance:
    return generate_instance(FamilySpec(ADVERSARIAL, eps, n), rng)


def gen_unfair(eps: float, n: int, rng: np.random.Generator) -> Instance:
    return generate_instance(FamilySpec(UNFAIR, eps, n), rng)


def counterexample_learned_dynkin(theta: float) -> Instance:
    """Two candidates the trusting baseline never gets right: the worse one
    carries the higher prediction, but its error stays below the switch
    threshold, so the true best is never accepted."""
    spec = FamilySpec(LEARNED_DYNKIN_COUNTER, theta, 2)
    u, uhat = family_arrays(spec, np.random.default_rng(0))
    return Instance(tuple(u.tolist()), tuple(uhat.tolist()))


def counterexample_value_max(
    eps: float, n: int, rng: np.random.Generator
) -> tuple[Instance, float]:
    """An instance where the three-phase rule's expected value degrades
    linearly in the phase-1 length. Returns (instance, top prediction)."""
    spec = FamilySpec(VALUE_MAX_COUNTER, eps, n)
    u, uhat = family_arrays(spec, rng)
    return Instance(tuple(u.tolist()), tuple(uhat.tolist())), 1.0 - eps
