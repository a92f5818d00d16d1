import numpy as np
import pytest

from sdnsched.metrics import (
    Aggregator,
    RunSummary,
    SLOT_CSV_HEADER,
    SlotRecord,
    lyapunov,
    slot_costs,
    weighted_backlog,
)


def record(**kw):
    base = dict(
        t=0,
        f=0.0,
        g=0.0,
        h=0.0,
        per_controller_backlogs=(0, 0),
        per_switch_backlogs=(0,),
        completions=0,
        sum_response_slots=0,
        phantom_completions=0,
    )
    base.update(kw)
    return SlotRecord(**base)


class TestSlotCosts:
    def test_no_admissions_no_cost(self):
        m = np.array([[1.0], [2.0]])
        p = np.array([2.0, 2.0])
        assert slot_costs([0, None], [0, 0], m, p, 1.0) == (0.0, 0.0)

    def test_worked_decision_costs_nine(self):
        # three switches, two controllers; per-request unit costs chosen to
        # match the motivating two-decision comparison (totals 9 and 13)
        m = np.array([[1.0, 9.0], [1.0, 9.0], [9.0, 3.0]])
        p = np.array([9.0, 2.0, 2.0])
        y = [3, 2, 2]
        f1, g1 = slot_costs([0, 0, None], y, m, p, 1.0)
        assert f1 == 5.0 and g1 == 4.0
        assert f1 + 1.0 * g1 == 9.0

    def test_alternative_decision_costs_thirteen(self):
        m = np.array([[1.0, 9.0], [1.0, 9.0], [9.0, 3.0]])
        p = np.array([9.0, 2.0, 2.0])
        y = [3, 2, 2]
        f2, g2 = slot_costs([0, None, 1], y, m, p, 1.0)
        assert f2 == 9.0 and g2 == 4.0
        assert f2 + 1.0 * g2 == 13.0

    def test_each_switch_charged_once(self):
        m = np.array([[2.0, 3.0]])
        p = np.array([5.0])
        f_up, g_up = slot_costs([1], [4], m, p, 1.0)
        assert (f_up, g_up) == (12.0, 0.0)
        f_lo, g_lo = slot_costs([None], [4], m, p, 1.0)
        assert (f_lo, g_lo) == (0.0, 20.0)


class TestWeightedBacklog:
    def test_empty_system(self):
        assert weighted_backlog([], [], [], 1.0, 1.0) == 0.0

    def test_worked_example(self):
        assert weighted_backlog([4, 6], [1, 2], [0, 3], 1.0, 1.0) == 16.0

    def test_zero_weight_excludes_window_queues(self):
        assert weighted_backlog([4, 6], [1, 2], [50, 3], 1.0, 0.0) == 13.0


class TestLyapunov:
    def test_empty(self):
        assert lyapunov([], [], [], 1.0, 1.0) == 0.0

    def test_single_queue(self):
        assert lyapunov([2], [], [], 1.0, 1.0) == 2.0

    def test_doubling_quadruples(self):
        l1 = lyapunov([1, 2], [3], [4], 1.5, 0.5)
        l2 = lyapunov([2, 4], [6], [8], 1.5, 0.5)
        assert l2 == 4 * l1


class TestSlotRecord:
    def test_variance_zero_when_balanced(self):
        assert record(per_controller_backlogs=(7, 7, 7)).qc_variance() == 0.0

    def test_variance_matches_numpy(self):
        qc = (3, 9, 1, 7)
        assert record(per_controller_backlogs=qc).qc_variance() == pytest.approx(
            float(np.var(qc))
        )

    def test_csv_row_schema(self):
        row = record(
            t=5, f=1.5, g=2.0, h=9.0, completions=4, sum_response_slots=6
        ).csv_row(gamma=1.0)
        assert len(row.split(",")) == len(SLOT_CSV_HEADER.split(","))
        assert row.split(",")[0] == "5"
        idle = record().csv_row(gamma=1.0)
        assert idle.split(",")[7] == "nan"


class TestAggregator:
    def test_warmup_slots_excluded(self):
        agg = Aggregator(warmup=2, slot_ms=10.0, gamma=1.0)
        for t in range(4):
            agg.add(record(t=t, f=float(t), completions=1, sum_response_slots=t))
        s = agg.summary({}, truncations=0)
        assert s.slots_averaged == 2
        assert s.avg_total_cost == pytest.approx((2.0 + 3.0) / 2)
        assert s.avg_response_slots == pytest.approx((2 + 3) / 2)
        assert s.avg_response_ms == pytest.approx(25.0)

    def test_gamma_weights_computation_cost(self):
        agg = Aggregator(warmup=0, slot_ms=10.0, gamma=2.0)
        agg.add(record(f=3.0, g=4.0))
        assert agg.summary({}, 0).avg_total_cost == pytest.approx(11.0)

    def test_no_completions_zero_response(self):
        agg = Aggregator(warmup=0, slot_ms=10.0, gamma=1.0)
        agg.add(record())
        assert agg.summary({}, 0).avg_response_ms == 0.0


class TestRunSummaryText:
    def test_text_is_deterministic_and_parseable(self):
        import yaml

        s = RunSummary(
            avg_total_cost=1.25,
            avg_backlog=3.5,
            backlog_variance_across_controllers=0.25,
            avg_response_slots=0.5,
            avg_response_ms=5.0,
            completions=10,
            phantom_completions=1,
            truncated_slots=0,
            slots_averaged=2,
            config={"run": {"horizon": 4, "master_seed": 1}},
        )
        text = s.to_text()
        assert text == s.to_text()
        parsed = yaml.safe_load(text)
        assert parsed["summary"]["avg_total_cost"] == 1.25
        assert parsed["config"]["run"]["horizon"] == 4
