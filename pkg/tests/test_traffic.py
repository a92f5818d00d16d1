import numpy as np
import pytest
from scipy.stats import norm

from sdnsched.traffic import (
    ArrivalSpec,
    HotSpotSpec,
    PredictionSpec,
    TrafficModel,
    error_rate_from_sigma,
    load_empirical,
    predicted_count,
    sample_arrivals,
    sigma_from_error_rate,
    slot_counts,
    substream,
)


def invert_phi_by_bisection(target: float) -> float:
    """Independent inverse of the standard normal CDF (no ppf)."""
    lo, hi = 0.0, 20.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if norm.cdf(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


class TestSigma:
    def test_zero_rate_disables_errors(self):
        assert sigma_from_error_rate(0.0) == 0.0

    @pytest.mark.parametrize("r,expected_z", [(0.10, 0.95), (0.50, 0.75)])
    def test_matches_bisection_oracle(self, r, expected_z):
        sigma = sigma_from_error_rate(r)
        assert sigma == pytest.approx(0.5 / invert_phi_by_bisection(expected_z), abs=1e-9)

    def test_frozen_values(self):
        assert sigma_from_error_rate(0.10) == pytest.approx(0.3040, abs=2e-4)
        assert sigma_from_error_rate(0.50) == pytest.approx(0.7413, abs=2e-4)

    @pytest.mark.parametrize("r", [0.05, 0.1, 0.3, 0.5, 0.9])
    def test_round_trip_identity(self, r):
        assert error_rate_from_sigma(sigma_from_error_rate(r)) == pytest.approx(r, abs=1e-9)

    @pytest.mark.parametrize("r", [1.0, 1.5, -0.1])
    def test_rejects_out_of_range(self, r):
        with pytest.raises(ValueError):
            sigma_from_error_rate(r)


class TestPoissonArrivals:
    def test_mean_over_million_draws(self):
        spec = ArrivalSpec(process="poisson", mean_rate=5.88)
        rng = substream(1, 1, 0)
        counts, _ = slot_counts(spec, 5.88, 1_000_000, rng)
        assert 5.82 <= counts.mean() <= 5.94

    def test_zero_rate_always_zero(self):
        spec = ArrivalSpec(process="poisson", mean_rate=0.0)
        rng = substream(1, 1, 0)
        assert all(
            sample_arrivals(spec, None, "s0", t, rng) == 0 for t in range(100)
        )

    def test_hot_spot_rate_applies(self):
        spec = ArrivalSpec(process="poisson", mean_rate=5.88)
        hot = HotSpotSpec(pod_index=0, rate=200.0)
        model = TrafficModel(
            n_switches=2,
            spec=spec,
            prediction=PredictionSpec(),
            horizon=100_000,
            master_seed=3,
            hot_switch_idxs=frozenset({1}),
            hot_rate=hot.rate,
        )
        hot_mean = np.mean([model.actual(1, t) for t in range(100_000)])
        cold_mean = np.mean([model.actual(0, t) for t in range(100_000)])
        assert hot_mean == pytest.approx(200.0, rel=0.02)
        assert cold_mean == pytest.approx(5.88, rel=0.05)

    def test_sample_arrivals_hot_switch_set(self):
        spec = ArrivalSpec(process="poisson", mean_rate=1.0)
        hot = HotSpotSpec(pod_index=0, rate=50.0)
        rng = substream(7, 1, 0)
        draws = [
            sample_arrivals(spec, hot, "s1", t, rng, hot_switches=frozenset({"s1"}))
            for t in range(3000)
        ]
        assert np.mean(draws) == pytest.approx(50.0, rel=0.05)


class TestPrediction:
    def test_sigma_zero_identity(self):
        rng = substream(1, 2, 0)
        for actual in (0, 1, 7, 500):
            assert predicted_count(actual, 0.0, rng) == actual

    def test_clamped_at_zero(self):
        rng = substream(1, 2, 0)
        draws = [predicted_count(0, 5.0, rng) for _ in range(2000)]
        assert min(draws) == 0
        assert all(d >= 0 for d in draws)

    def test_mis_prediction_frequency_around_r(self):
        sigma = sigma_from_error_rate(0.10)
        rng = substream(9, 2, 0)
        devs = np.rint(rng.normal(0.0, sigma, size=1_000_000))
        freq = np.mean(devs != 0)
        assert 0.095 <= freq <= 0.105

    def test_rejects_negative_actual(self):
        with pytest.raises(ValueError):
            predicted_count(-1, 0.1, substream(1, 2, 0))

    def test_cached_draws_are_persistent(self):
        spec = ArrivalSpec(process="poisson", mean_rate=5.0)
        model = TrafficModel(
            n_switches=3,
            spec=spec,
            prediction=PredictionSpec(mean_window=3, error_rate=0.3),
            horizon=500,
            master_seed=11,
        )
        first = [(i, t, model.predicted(i, t)) for i in range(3) for t in range(500)]
        second = [(i, t, model.predicted(i, t)) for i in range(3) for t in range(500)]
        assert first == second

    def test_prediction_equals_actual_when_perfect(self):
        spec = ArrivalSpec(process="poisson", mean_rate=5.0)
        model = TrafficModel(
            n_switches=2,
            spec=spec,
            prediction=PredictionSpec(mean_window=4, error_rate=0.0),
            horizon=300,
            master_seed=5,
        )
        assert all(
            model.predicted(i, t) == model.actual(i, t) for i in range(2) for t in range(300)
        )

    def test_windows_sampled_in_range(self):
        spec = ArrivalSpec(process="poisson", mean_rate=5.0)
        model = TrafficModel(
            n_switches=200,
            spec=spec,
            prediction=PredictionSpec(mean_window=3, error_rate=0.0),
            horizon=10,
            master_seed=2,
        )
        ws = [model.window(i) for i in range(200)]
        assert all(0 <= w <= 6 for w in ws)
        assert min(ws) < 3 < max(ws)  # actually spread over the range
        zero_d = TrafficModel(
            n_switches=5,
            spec=spec,
            prediction=PredictionSpec(mean_window=0, error_rate=0.0),
            horizon=10,
            master_seed=2,
        )
        assert all(zero_d.window(i) == 0 for i in range(5))


class TestParetoArrivals:
    def test_long_run_mean_within_5_percent(self):
        spec = ArrivalSpec(process="pareto", mean_rate=5.88)
        counts, _ = slot_counts(spec, 5.88, 100_000, substream(1, 1, 0))
        assert counts.mean() == pytest.approx(5.88, rel=0.05)
        assert np.all(counts >= 0)

    def test_a_max_truncation_counted(self):
        spec = ArrivalSpec(process="pareto", mean_rate=5.88, a_max=8)
        counts, truncated = slot_counts(spec, 5.88, 20_000, substream(1, 1, 0))
        assert truncated > 0
        assert counts.max() <= 8

    def test_model_reports_truncations(self):
        spec = ArrivalSpec(process="poisson", mean_rate=50.0, a_max=40)
        model = TrafficModel(
            n_switches=2,
            spec=spec,
            prediction=PredictionSpec(),
            horizon=2000,
            master_seed=1,
        )
        assert model.truncations > 0
        assert max(model.actual(0, t) for t in range(2000)) <= 40

    def test_shape_must_have_finite_variance(self):
        with pytest.raises(ValueError):
            ArrivalSpec(process="pareto", mean_rate=5.88, pareto_shape=1.9).validate()


class TestEmpiricalArrivals:
    def write(self, tmp_path, text):
        path = tmp_path / "dist.csv"
        path.write_text(text)
        return str(path)

    def test_long_run_mean_within_5_percent(self, tmp_path):
        path = self.write(
            tmp_path,
            "0.4,0.35\n1.0,0.30\n2.5,0.20\n6.0,0.10\n15.0,0.05\n",
        )
        spec = ArrivalSpec(process="empirical", mean_rate=5.88, empirical_file=path)
        counts, _ = slot_counts(spec, 5.88, 100_000, substream(1, 1, 0))
        assert counts.mean() == pytest.approx(5.88, rel=0.05)

    def test_probabilities_must_sum_to_one(self, tmp_path):
        path = self.write(tmp_path, "1.0,0.5\n2.0,0.4\n")
        with pytest.raises(ValueError, match="sum"):
            load_empirical(path)

    def test_malformed_rows_rejected(self, tmp_path):
        for text in ("1.0\n", "a,b\n", "1.0,0.5,0.5\n", "-1.0,1.0\n", ""):
            path = self.write(tmp_path, text)
            with pytest.raises(ValueError):
                load_empirical(path)

    def test_comments_and_blank_lines_ignored(self, tmp_path):
        path = self.write(tmp_path, "# gap_ms,prob\n\n1.0,0.5\n3.0,0.5\n")
        values, probs = load_empirical(path)
        assert values.tolist() == [1.0, 3.0]
        assert probs.sum() == pytest.approx(1.0)


def test_substreams_are_independent_and_reproducible():
    a1 = substream(42, 1, 0).normal(size=5)
    a2 = substream(42, 1, 0).normal(size=5)
    b = substream(42, 1, 1).normal(size=5)
    c = substream(43, 1, 0).normal(size=5)
    assert np.array_equal(a1, a2)
    assert not np.array_equal(a1, b)
    assert not np.array_equal(a1, c)


def test_window_seed_pins_assignment_across_replications():
    spec = ArrivalSpec(process="poisson", mean_rate=5.0)
    pred = PredictionSpec(mean_window=4, error_rate=0.0, window_seed=9)
    a = TrafficModel(6, spec, pred, 20, master_seed=1)
    b = TrafficModel(6, spec, pred, 20, master_seed=2)
    assert [a.window(i) for i in range(6)] == [b.window(i) for i in range(6)]
    # arrivals still vary with the master seed
    assert any(a.actual(0, t) != b.actual(0, t) for t in range(20))
    with pytest.raises(ValueError):
        PredictionSpec(mean_window=2, error_rate=0.0, window_seed=-1).validate()
