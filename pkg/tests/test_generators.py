import numpy as np
import pytest

from secretary_lab.core import (
    MULTIPLICATIVE,
    best_predicted_index,
    best_true_index,
    prediction_error,
)
from secretary_lab.generators import (
    ADVERSARIAL,
    ALMOST_CONSTANT,
    FAMILIES,
    SWEEP_FAMILIES,
    UNFAIR,
    UNIFORM,
    FamilySpec,
    counterexample_learned_dynkin,
    counterexample_value_max,
    family_arrays,
    gen_adversarial,
    gen_almost_constant,
    gen_uniform,
    gen_unfair,
    generate_instance,
)

EPS_GRID = [0.0, 0.05, 0.5, 0.95]


class TestFamilySpec:
    def test_family_names(self):
        assert SWEEP_FAMILIES == ("almost-constant", "uniform", "adversarial", "unfair")
        assert set(SWEEP_FAMILIES) < set(FAMILIES)

    def test_unknown_family(self):
        with pytest.raises(ValueError, match="unknown family"):
            FamilySpec("nope", 0.1, 5)

    @pytest.mark.parametrize("family", SWEEP_FAMILIES)
    @pytest.mark.parametrize("eps", [-0.1, 1.0, 1.5])
    def test_eps_range(self, family, eps):
        with pytest.raises(ValueError, match="epsilon"):
            FamilySpec(family, eps, 5)

    def test_n_validation(self):
        with pytest.raises(ValueError, match="n must be"):
            FamilySpec(UNIFORM, 0.1, 0)

    def test_counter_family_constraints(self):
        with pytest.raises(ValueError, match="exactly 2"):
            FamilySpec("learned-dynkin-counter", 0.5, 3)
        with pytest.raises(ValueError, match=r"\(0, 0.646\)"):
            FamilySpec("learned-dynkin-counter", 0.7, 2)
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            FamilySpec("value-max-counter", 0.0, 100)


class TestSweepFamilies:
    @pytest.mark.parametrize("family", SWEEP_FAMILIES)
    @pytest.mark.parametrize("eps", EPS_GRID)
    def test_shapes_positivity_determinism(self, family, eps):
        spec = FamilySpec(family, eps, 40)
        a = generate_instance(spec, np.random.default_rng(5))
        b = generate_instance(spec, np.random.default_rng(5))
        assert a == b
        assert a.n == 40
        assert all(v > 0 for v in a.true_values)
        assert all(v > 0 for v in a.predicted_values)

    def test_almost_constant_structure(self):
        inst = gen_almost_constant(0.4, 30, np.random.default_rng(1))
        assert inst.predicted_values == (1.0,) * 30
        specials = [v for v in inst.true_values if v != 1.0]
        assert specials == [1.0 / 0.6]
        assert prediction_error(inst, MULTIPLICATIVE) == pytest.approx(0.4, abs=1e-12)

    def test_almost_constant_zero_eps_degenerates_to_ones(self):
        inst = gen_almost_constant(0.0, 10, np.random.default_rng(1))
        assert inst.true_values == (1.0,) * 10

    @pytest.mark.parametrize("eps", [0.0, 0.3, 0.9])
    def test_uniform_error_within_eps(self, eps):
        inst = gen_uniform(eps, 200, np.random.default_rng(2))
        assert prediction_error(inst, MULTIPLICATIVE) <= eps + 1e-12

    def test_adversarial_splits_exact_factors(self):
        eps = 0.25
        inst = gen_adversarial(eps, 31, np.random.default_rng(3))
        u = np.array(inst.true_values)
        uhat = np.array(inst.predicted_values)
        ratio = uhat / u
        by_value = np.argsort(-u, kind="stable")
        top, bottom = by_value[: 31 // 2], by_value[31 // 2 :]
        assert np.allclose(ratio[top], 1.0 - eps, atol=1e-12)
        assert np.allclose(ratio[bottom], 1.0 + eps, atol=1e-12)
        # the better half is underpredicted, so the worst-case error is eps
        assert prediction_error(inst, MULTIPLICATIVE) == pytest.approx(eps, abs=1e-12)

    def test_unfair_is_a_rank_inverting_permutation(self):
        inst = gen_unfair(0.8, 25, np.random.default_rng(4))
        assert sorted(inst.predicted_values) == sorted(inst.true_values)
        # highest prediction sits on the worst candidate
        worst = min(range(25), key=lambda i: inst.true_values[i])
        assert best_predicted_index(inst) == worst
        assert inst.predicted_values[best_true_index(inst)] == min(inst.true_values)

    def test_unfair_values_stay_near_one(self):
        inst = gen_unfair(0.8, 500, np.random.default_rng(6))
        assert min(inst.true_values) >= 1.0 - 0.2
        assert max(inst.true_values) <= 1.0 + 0.2


class TestCounterexamples:
    def test_learned_dynkin_shape(self):
        inst = counterexample_learned_dynkin(0.5)
        assert inst.true_values == (1.25, 1.0)
        assert inst.predicted_values == (1.25, 1.5)
        # the wrong candidate carries the top prediction, within the trusted
        # error band, and the true best is predicted perfectly
        assert best_true_index(inst) == 0
        assert best_predicted_index(inst) == 1
        assert abs(1.0 - inst.predicted_values[1] / inst.true_values[1]) == 0.5

    def test_learned_dynkin_theta_range(self):
        with pytest.raises(ValueError):
            counterexample_learned_dynkin(0.7)
        with pytest.raises(ValueError):
            counterexample_learned_dynkin(0.0)

    @pytest.mark.parametrize("eps", [0.01, 0.5, 0.99])
    def test_value_max_structure(self, eps):
        inst, target = counterexample_value_max(eps, 50, np.random.default_rng(7))
        assert target == 1.0 - eps
        assert inst.true_values[0] == 1.0
        assert inst.predicted_values[0] == target
        assert max(inst.predicted_values) == target
        # every other candidate is worth less than the prediction gap
        assert max(inst.true_values[1:]) <= min(eps, 0.999 * (1.0 - eps))
        assert inst.true_values[1:] == inst.predicted_values[1:]
        assert len(set(inst.true_values)) == 50


class TestFamilyArrays:
    def test_matches_generate_instance(self):
        spec = FamilySpec(ADVERSARIAL, 0.3, 12)
        u, uhat = family_arrays(spec, np.random.default_rng(9))
        inst = generate_instance(spec, np.random.default_rng(9))
        assert inst.true_values == tuple(u.tolist())
        assert inst.predicted_values == tuple(uhat.tolist())

    def test_distinct_rngs_differ(self):
        spec = FamilySpec(UNIFORM, 0.3, 12)
        a = generate_instance(spec, np.random.default_rng(0))
        b = generate_instance(spec, np.random.default_rng(1))
        assert a != b
