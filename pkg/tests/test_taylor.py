import math

import numpy as np
import pytest

from pqcsurrogate import (
    GridOracle,
    build_taylor,
    enumerate_multiindices,
    eval_taylor,
    f_eval,
    partial_at_zero,
    taylor_error_bound,
    taylor_sample_bound,
)
from pqcsurrogate.errors import ValidationError
from pqcsurrogate.io import surrogate_from_json, surrogate_to_json

from helpers import (
    cosine_circuit,
    cosine_product_circuit,
    finite_difference_partial,
    random_circuit,
    random_observable,
    sample_l1_ball,
)


def cosine_oracle():
    circ, obs = cosine_circuit()
    return GridOracle(circ, obs)


class TestPartialAtZero:
    def test_order_zero_is_value_at_origin(self):
        oracle = cosine_oracle()
        assert partial_at_zero(oracle, (0,)) == pytest.approx(1.0)

    def test_cosine_first_derivative(self):
        # (f(pi/2) - f(3pi/2)) / 2 = 0
        assert partial_at_zero(cosine_oracle(), (1,)) == pytest.approx(0.0, abs=1e-15)

    def test_cosine_second_derivative(self):
        # (2 f(pi) - 2 f(0)) / 4 = -1
        assert partial_at_zero(cosine_oracle(), (2,)) == pytest.approx(-1.0)

    def test_product_mixed_partial(self):
        # f = cos(t1) cos(t2): d^4/dt1^2 dt2^2 f(0) = (-1)(-1) = 1
        circ, obs = cosine_product_circuit(2)
        oracle = GridOracle(circ, obs)
        assert partial_at_zero(oracle, (2, 2)) == pytest.approx(1.0)
        assert partial_at_zero(oracle, (1, 1)) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_against_finite_differences(self, seed):
        rng = np.random.default_rng(1000 + seed)
        circ = random_circuit(rng, 3, 3)
        obs = random_observable(rng, 3)
        oracle = GridOracle(circ, obs)
        fn = lambda theta: f_eval(circ, obs, theta)
        for alpha in enumerate_multiindices(3, 3):
            shift = partial_at_zero(oracle, alpha)
            fd = finite_difference_partial(fn, alpha)
            assert shift == pytest.approx(fd, abs=1e-4), f"alpha={alpha}"


class TestBuildAndEval:
    def test_cosine_coefficients(self):
        surr = build_taylor(cosine_oracle(), 2)
        assert surr.coeffs[(0,)] == pytest.approx(1.0)
        assert surr.coeffs[(1,)] == pytest.approx(0.0, abs=1e-15)
        assert surr.coeffs[(2,)] == pytest.approx(-0.5)

    def test_eval_matches_truncated_cosine(self):
        surr = build_taylor(cosine_oracle(), 2)
        assert eval_taylor(surr, np.array([0.0])) == pytest.approx(1.0)
        assert eval_taylor(surr, np.array([0.1])) == pytest.approx(0.995)
        assert surr(np.array([0.1])) == pytest.approx(0.995)

    def test_coefficients_reproduce_derivatives(self):
        # alpha! * coeff must reproduce the shift-rule derivative essentially exactly
        rng = np.random.default_rng(71)
        circ = random_circuit(rng, 2, 2)
        obs = random_observable(rng, 2)
        oracle = GridOracle(circ, obs)
        surr = build_taylor(oracle, 3)
        for alpha, coeff in surr.coeffs.items():
            fact = math.prod(math.factorial(a) for a in alpha)
            derivative = partial_at_zero(oracle, alpha)
            assert fact * coeff == pytest.approx(derivative, rel=1e-14, abs=1e-14)

    def test_shared_cache_reuses_points(self):
        oracle = cosine_oracle()
        build_taylor(oracle, 2)
        stats = oracle.cache.stats()
        # 7 raw queries (1 + 2 + 4) over only 4 distinct lattice points
        assert stats["misses"] == 4
        assert stats["hits"] == 3

    def test_eval_many_matches_scalar_eval(self):
        rng = np.random.default_rng(73)
        circ = random_circuit(rng, 2, 2)
        obs = random_observable(rng, 2)
        surr = build_taylor(GridOracle(circ, obs), 3)
        thetas = rng.uniform(-1, 1, size=(25, 2))
        batch = surr.eval_many(thetas)
        single = [eval_taylor(surr, row) for row in thetas]
        np.testing.assert_allclose(batch, single, rtol=1e-13, atol=1e-15)

    def test_enumeration_order_preserved(self):
        surr = build_taylor(cosine_oracle(), 3)
        assert list(surr.coeffs.keys()) == enumerate_multiindices(1, 3)

    def test_order_cap(self):
        with pytest.raises(ValidationError):
            build_taylor(cosine_oracle(), 21)
        with pytest.raises(ValidationError):
            build_taylor(cosine_oracle(), -1)

    def test_workers_match_serial(self):
        rng = np.random.default_rng(79)
        circ = random_circuit(rng, 3, 3)
        obs = random_observable(rng, 3)
        serial = build_taylor(GridOracle(circ, obs), 2)
        threaded = build_taylor(GridOracle(circ, obs), 2, workers=4)
        assert serial.coeffs == threaded.coeffs  # bitwise equality

    def test_json_round_trip_is_bitwise(self):
        rng = np.random.default_rng(83)
        circ = random_circuit(rng, 2, 2)
        surr = build_taylor(GridOracle(circ, random_observable(rng, 2)), 2)
        loaded = surrogate_from_json(surrogate_to_json(surr))
        assert loaded.coeffs == surr.coeffs
        assert loaded.obs_one_norm == surr.obs_one_norm
        theta = np.array([0.3, -0.2])
        assert eval_taylor(loaded, theta) == eval_taylor(surr, theta)


class TestErrorBound:
    def test_zero_theta(self):
        assert taylor_error_bound(2.0, 3, np.zeros(4)) == 0.0

    def test_order_zero_unit_norm(self):
        # tail of exp at t=1 with no terms kept: e - 1
        got = taylor_error_bound(1.0, 0, np.array([1.0]))
        assert got == pytest.approx(math.e - 1.0, rel=1e-12)

    def test_tighter_branch_wins(self):
        # at t=1, order 4, the exp-tail (0.0099485...) beats 2/120
        got = taylor_error_bound(1.0, 4, np.array([1.0]))
        assert got == pytest.approx(0.009948495125712054, rel=1e-12)
        assert got <= 2.0 / 120.0

    def test_uses_one_norm_of_theta(self):
        a = taylor_error_bound(1.0, 2, np.array([0.3, -0.4]))
        b = taylor_error_bound(1.0, 2, np.array([0.7]))
        assert a == pytest.approx(b, rel=1e-12)

    def test_scales_linearly_with_one_norm(self):
        theta = np.array([0.5, 0.25])
        assert taylor_error_bound(3.0, 2, theta) == pytest.approx(
            3.0 * taylor_error_bound(1.0, 2, theta), rel=1e-12
        )

    def test_large_radius_uses_generic_form(self):
        # t > 1 + order/2: only the exp-tail applies
        t = 4.0
        got = taylor_error_bound(1.0, 1, np.array([t]))
        assert got == pytest.approx(math.exp(t) - 1.0 - t, rel=1e-10)

    def test_envelope_on_benchmark(self):
        from pqcsurrogate import BenchmarkSpec, build_benchmark_circuit

        circ = build_benchmark_circuit(4, 1)
        obs = BenchmarkSpec(4, 1).observable()
        oracle = GridOracle(circ, obs)
        rng = np.random.default_rng(89)
        for order in (1, 2):
            surr = build_taylor(oracle, order)
            thetas = sample_l1_ball(rng, 4, 1.0 + order / 2.0, 100)
            from pqcsurrogate import f_eval_many

            truth = f_eval_many(circ, obs, thetas)
            approx = surr.eval_many(thetas)
            bounds = np.array([taylor_error_bound(obs.one_norm(), order, t) for t in thetas])
            assert np.all(np.abs(truth - approx) <= bounds + 1e-12)

    def test_validation(self):
        with pytest.raises(ValidationError):
            taylor_error_bound(-1.0, 2, np.zeros(2))
        with pytest.raises(ValidationError):
            taylor_error_bound(1.0, 30, np.zeros(2))


class TestSampleBound:
    def test_frozen_values(self):
        assert taylor_sample_bound(2, 1) == 8
        assert [taylor_sample_bound(16, order) for order in (1, 2, 3, 4)] == [
            64, 2048, 43690, 699050,
        ]
        assert taylor_sample_bound(3, 0) == 1

    def test_actual_queries_within_bound(self):
        rng = np.random.default_rng(97)
        for m, order in [(2, 1), (2, 2), (3, 2), (3, 3)]:
            circ = random_circuit(rng, 2, m)
            obs = random_observable(rng, 2)
            oracle = GridOracle(circ, obs)
            build_taylor(oracle, order)
            assert oracle.cache.stats()["distinct_points"] <= taylor_sample_bound(m, order)

    def test_validation(self):
        with pytest.raises(ValidationError):
            taylor_sample_bound(0, 1)
