import math

import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from secretary_lab.core import (
    ADDITIVE,
    ALGEBRAS,
    MULTIPLICATIVE,
    SYMMETRIC_MULTIPLICATIVE,
    ErrorAlgebra,
    Instance,
    RunningError,
    Schedule,
    algebra_assumption_check,
    best_predicted_index,
    best_true_index,
    lambert_w0,
    lambert_wm1,
    make_instance,
    prediction_error,
    sample_schedule,
)

positive_floats = st.floats(
    min_value=1e-6, max_value=1e6, allow_nan=False, allow_infinity=False
)


class TestInstance:
    def test_coerces_to_float_tuples(self):
        inst = make_instance([1, 2], [3, 4])
        assert inst.true_values == (1.0, 2.0)
        assert inst.predicted_values == (3.0, 4.0)
        assert inst.n == 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError, match="length mismatch"):
            Instance((1.0, 2.0), (1.0,))

    def test_empty(self):
        with pytest.raises(ValueError, match="at least one"):
            Instance((), ())

    def test_nonpositive_named_with_index(self):
        with pytest.raises(ValueError, match="true value 0.0 at index 1"):
            Instance((1.0, 0.0), (1.0, 1.0))
        with pytest.raises(ValueError, match="predicted value -3.0 at index 0"):
            Instance((1.0, 2.0), (-3.0, 1.0))
        with pytest.raises(ValueError, match="nonpositive"):
            Instance((1.0, float("nan")), (1.0, 1.0))

    def test_best_indices_and_tie_break(self):
        inst = make_instance([1.0, 5.0, 5.0, 2.0], [9.0, 1.0, 9.0, 2.0])
        assert best_true_index(inst) == 1  # ties go low
        assert best_predicted_index(inst) == 0


class TestErrorAlgebras:
    def test_prediction_error_examples(self):
        inst = make_instance([2.0, 4.0], [1.0, 4.0])
        assert prediction_error(inst) == 1.0
        assert prediction_error(inst, MULTIPLICATIVE) == 0.5
        assert prediction_error(inst, SYMMETRIC_MULTIPLICATIVE) == 1.0

    def test_symmetric_exceeds_one_sided(self):
        # underprediction: uhat/u = 1/2 gives 0.5 one-sided but 1.0 symmetric
        inst = make_instance([2.0], [1.0])
        assert prediction_error(inst, MULTIPLICATIVE) == 0.5
        assert prediction_error(inst, SYMMETRIC_MULTIPLICATIVE) == 1.0

    def test_registry_names(self):
        assert set(ALGEBRAS) == {"additive", "multiplicative", "symmetric-multiplicative"}

    @given(u=positive_floats, uhat=positive_floats)
    @settings(deadline=None)
    def test_shipped_algebras_satisfy_sandwich(self, u, uhat):
        for algebra in ALGEBRAS.values():
            assert algebra_assumption_check(algebra, u, uhat)

    def test_nonconforming_algebra_fails_sandwich(self):
        # measuring error relative to the prediction breaks the sandwich
        bad = ErrorAlgebra(
            name="relative-to-prediction",
            combine=lambda a, b: a * b,
            inverse=lambda a, b: a / b,
            identity=1.0,
            error_fn=lambda u, uhat: abs(1.0 - u / uhat),
        )
        assert not algebra_assumption_check(bad, 2.0, 3.0)

    @given(x=positive_floats, y=st.floats(min_value=0.1, max_value=10.0))
    @settings(deadline=None)
    def test_combine_inverse_round_trip(self, x, y):
        for algebra in ALGEBRAS.values():
            back = algebra.inverse(algebra.combine(x, y), y)
            assert back == pytest.approx(x, rel=1e-12)

    def test_running_error_is_a_high_water_mark(self):
        r = RunningError()
        assert r.observe(0.5) == 0.5
        assert r.observe(0.2) == 0.5
        assert r.observe(1.5) == 1.5
        assert r.current_max == 1.5


class TestSchedule:
    def test_from_times_orders(self):
        s = Schedule.from_times([0.9, 0.1, 0.5])
        assert s.arrival_order == (1, 2, 0)
        assert s.n == 3

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError, match="permutation"):
            Schedule((0.1, 0.2), (0, 0))

    def test_rejects_out_of_range_time(self):
        with pytest.raises(ValueError, match="outside"):
            Schedule((0.1, 1.2), (0, 1))

    def test_rejects_duplicate_times(self):
        with pytest.raises(ValueError, match="distinct"):
            Schedule((0.4, 0.4), (0, 1))

    def test_rejects_unsorted_order(self):
        with pytest.raises(ValueError, match="sort"):
            Schedule((0.1, 0.2), (1, 0))

    def test_sample_schedule_deterministic_and_uniform(self):
        a = sample_schedule(50, np.random.default_rng(3))
        b = sample_schedule(50, np.random.default_rng(3))
        assert a == b
        assert len(set(a.arrival_times)) == 50
        rng = np.random.default_rng(0)
        mean = np.mean([t for _ in range(200) for t in sample_schedule(50, rng).arrival_times])
        assert 0.49 <= mean <= 0.51

    def test_sample_schedule_rejects_empty(self):
        with pytest.raises(ValueError, match="at least one"):
            sample_schedule(0, np.random.default_rng(0))


class TestLambertW:
    def test_branch_point_both_branches(self):
        x = -math.exp(-1.0)
        assert lambert_w0(x) == -1.0
        assert lambert_wm1(x) == -1.0

    def test_zero(self):
        assert lambert_w0(0.0) == 0.0

    def test_domain_errors(self):
        with pytest.raises(ValueError, match="undefined"):
            lambert_w0(-math.exp(-1.0) - 1e-3)
        with pytest.raises(ValueError, match="undefined"):
            lambert_wm1(0.0)
        with pytest.raises(ValueError, match="undefined"):
            lambert_wm1(0.5)

    @pytest.mark.parametrize(
        "x",
        [-0.367879, -0.36, -0.3, -0.1, -1e-3, -1e-9, 1e-9, 0.1, 1.0, 10.0, 1e6, 1e100],
    )
    def test_w0_round_trip(self, x):
        w = lambert_w0(x)
        assert w >= -1.0
        assert abs(w * math.exp(w) - x) <= 1e-12 * max(1e-12, abs(x))

    @pytest.mark.parametrize(
        "x", [-0.367879, -0.36, -0.3, -0.1, -1e-2, -1e-4, -1e-8, -1e-12]
    )
    def test_wm1_round_trip(self, x):
        w = lambert_wm1(x)
        assert w <= -1.0
        assert abs(w * math.exp(w) - x) <= 1e-12 * abs(x)

    @pytest.mark.parametrize("x", [-0.36, -0.2, -0.05, 0.5, 2.0, 50.0])
    def test_matches_scipy_inside_domain(self, x):
        assert lambert_w0(x) == pytest.approx(
            float(scipy.special.lambertw(x, 0).real), abs=1e-12, rel=1e-12
        )
        if x < 0:
            assert lambert_wm1(x) == pytest.approx(
                float(scipy.special.lambertw(x, -1).real), abs=1e-12, rel=1e-12
            )
