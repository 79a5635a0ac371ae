import numpy as np
import pytest
from scipy.special import expit

from applepath import PathConfig, PenaltySpec
from applepath.simulation import (
    Metrics, SimReport, SimSpec, compute_metrics, example_beta, example_spec, generate_design,
    generate_response, run_experiment,
)


class TestDesign:
    def test_independent_columns(self):
        X = generate_design(10_000, 5, 0.0, np.random.default_rng(0))
        C = np.corrcoef(X, rowvar=False)
        assert np.max(np.abs(C - np.eye(5))) < 0.05

    def test_ar1_correlation_and_variance(self):
        X = generate_design(20_000, 6, 0.5, np.random.default_rng(1))
        assert np.corrcoef(X[:, 0], X[:, 2])[0, 1] == pytest.approx(0.25, abs=0.02)
        np.testing.assert_allclose(X.var(axis=0), 1.0, atol=0.03)

    def test_rho_range(self):
        with pytest.raises(ValueError):
            generate_design(5, 3, 1.0, np.random.default_rng(0))


class TestResponse:
    def test_logistic_null(self):
        rng = np.random.default_rng(2)
        X = rng.standard_normal((10_000, 3))
        assert generate_response("logistic", X, np.zeros(3), rng).mean() == pytest.approx(0.5, abs=0.02)

    def test_poisson_null(self):
        rng = np.random.default_rng(3)
        X = rng.standard_normal((10_000, 3))
        assert generate_response("poisson", X, np.zeros(3), rng).mean() == pytest.approx(1.0, abs=0.03)

    def test_logistic_stratum(self):
        rng = np.random.default_rng(4)
        X = np.ones((10_000, 1))
        y = generate_response("logistic", X, np.array([3.0]), rng)
        assert y.mean() == pytest.approx(expit(3.0), abs=0.02)
        assert expit(3.0) == pytest.approx(0.9526, abs=1e-4)


class TestBeta:
    def test_example1(self):
        b = example_beta("logistic", 10)
        np.testing.assert_array_equal(b[:5], [3, 1.5, 0, 0, 2])
        assert np.count_nonzero(b) == 3

    def test_example2(self):
        np.testing.assert_array_equal(example_beta("poisson", 6)[:5], [1.2, 0.6, 0, 0, 0.8])

    @pytest.mark.parametrize("family, block", [("logistic", [3, 1.5, 0, 0, 2, 0, 0]),
                                               ("poisson", [1.2, 0.6, 0, 0, 0.8, 0, 0])])
    def test_d24(self, family, block):
        b = example_beta(family, 100, d=24)
        np.testing.assert_array_equal(b[:56], np.tile(block, 8))
        assert np.count_nonzero(b) == 24 and np.all(b[56:] == 0)


class TestMetrics:
    def test_exact(self):
        b = example_beta("logistic", 20)
        assert compute_metrics(b, b) == Metrics(0, 3, 0.0, 0.0)

    def test_zero_estimate(self):
        m = compute_metrics(np.zeros(20), example_beta("logistic", 20))
        assert (m.fp, m.tp) == (0, 0)
        assert m.l1_loss == pytest.approx(6.5)
        assert m.l2_loss == pytest.approx(np.sqrt(15.25))

    def test_spurious_coordinate_and_intercept_ignored(self):
        truth = example_beta("logistic", 20)
        est = truth.copy()
        est[10] = 0.1
        m = compute_metrics(np.r_[5.0, est], truth)
        assert (m.fp, m.tp) == (1, 3)
        assert m.l1_loss == pytest.approx(0.1)


@pytest.fixture(scope="module")
def small_spec():
    return example_spec(1, 0.0, n=120, p=40, reps=4, seed=3, penalty=PenaltySpec.mcp(3.0), config=PathConfig(K=40))


class TestExperiment:
    def test_single_rep_sd_is_zero(self):
        spec = example_spec(1, 0.0, n=100, p=30, reps=1, seed=1)
        s = run_experiment(spec).summary()
        assert s["tp"][1] == 0.0 and s["l2_loss"][1] == 0.0

    def test_reproducible(self, small_spec):
        a, b = run_experiment(small_spec), run_experiment(small_spec)
        assert a.to_csv() == b.to_csv()
        assert a.to_text() == b.to_text()

    def test_metric_bounds(self, small_spec):
        rep = run_experiment(small_spec)
        assert len(rep.metrics) + rep.failures == small_spec.reps
        for m in rep.metrics:
            assert 0 <= m.tp <= small_spec.d and 0 <= m.fp <= small_spec.p - small_spec.d
            assert m.l1_loss >= 0 and m.l2_loss >= 0

    def test_cv_selection_runs(self):
        spec = example_spec(2, 0.3, n=100, p=20, reps=2, seed=0, selection="cv", folds=3, config=PathConfig(K=20))
        rep = run_experiment(spec)
        assert len(rep.metrics) == 2

    def test_csv_layout(self, small_spec):
        text = run_experiment(small_spec).to_csv(timing=True)
        lines = text.splitlines()
        assert lines[0].startswith("#")
        assert lines[1].split(",")[:4] == ["model", "method", "fp", "fp_sd"]
        assert "time" in lines[1].split(",")
        assert lines[2].split(",")[0] == "MCP gamma=3 rho=0"

    def test_spec_validation(self):
        with pytest.raises(ValueError):
            SimSpec("logistic", 10, 5, 0.0, np.zeros(4))
        with pytest.raises(ValueError):
            example_spec(1, 0.0, n=10, p=20, selection="aic")

    def test_parallel_matches_serial(self, small_spec):
        a = run_experiment(small_spec)
        b = run_experiment(small_spec, n_jobs=2)
        assert a.metrics == b.metrics
