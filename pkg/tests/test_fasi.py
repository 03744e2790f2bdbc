import numpy as np
import pytest

from fsrselect import binary_scores, q_hat_class, select_fasi
from fsrselect.shift import EmptyStratumError

CAL_SCORES = binary_scores([0.9, 0.2, 0.6])
CAL_LABELS = [1, 1, 1]
TEST_SCORES = binary_scores([0.95, 0.7])


def fasi_instance(rng, n_cal=8, n_test=6):
    while True:
        labels = rng.integers(1, 3, n_cal)
        if np.any(labels == 1) and np.any(labels == 2):
            break
    cal = binary_scores(rng.integers(0, 9, n_cal) / 8)
    test = binary_scores(rng.integers(0, 9, n_test) / 8)
    return cal, labels, test


def naive_class_tau(cal, labels, test, c, budget):
    """Scalar-reference scan for the per-class threshold."""
    col = c - 1
    grid = sorted({0.5} | {s for s in cal[:, col] if s >= 0.5}
                  | {s for s in test[:, col] if s >= 0.5})
    for t in grid:
        if q_hat_class(cal, labels, test, t, c) <= budget:
            return t
    return None


class TestQHatClass:
    def test_hand_evaluation_class1(self):
        # no class-1 errors above 0.75: (0+1)/4 over max(1,1)/2
        value = q_hat_class(CAL_SCORES, CAL_LABELS, TEST_SCORES, 0.75, 1)
        assert value == pytest.approx(0.5)

    def test_hand_evaluation_class2(self):
        # one class-2 "selection" (the 0.8 score) and it is an error
        value = q_hat_class(CAL_SCORES, CAL_LABELS, TEST_SCORES, 0.75, 2)
        assert value == pytest.approx(1.0)

    def test_threshold_domain_enforced(self):
        with pytest.raises(ValueError):
            q_hat_class(CAL_SCORES, CAL_LABELS, TEST_SCORES, 0.3, 1)

    def test_class_label_validated(self):
        with pytest.raises(ValueError):
            q_hat_class(CAL_SCORES, CAL_LABELS, TEST_SCORES, 0.75, 3)


class TestSelectFasi:
    def test_thresholds_match_scalar_scan(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            cal, labels, test = fasi_instance(rng)
            res = select_fasi(cal, labels, test, 0.5)
            pi = res.info["pi_cal_hat"]
            for c, share in ((1, pi), (2, 1.0 - pi)):
                expected = naive_class_tau(cal, labels, test, c, 0.5 * share)
                assert res.info["tau_by_class"][c] == expected

    def test_selected_iff_r_below_alpha(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            cal, labels, test = fasi_instance(rng)
            for alpha in (0.2, 0.5, 0.8):
                res = select_fasi(cal, labels, test, alpha)
                np.testing.assert_array_equal(
                    res.decisions != 0, res.r_values <= alpha
                )

    def test_no_sample_clears_both_thresholds(self):
        # with s1 + s2 = 1 and thresholds in (0.5, 1] the assignments are
        # disjoint; only an exact 0.5/0.5 tie could clear both
        rng = np.random.default_rng(47)
        for _ in range(20):
            cal, labels, test = fasi_instance(rng)
            res = select_fasi(cal, labels, test, 0.6)
            taus = res.info["tau_by_class"]
            for c in (1, 2):
                if taus[c] is None:
                    continue
                assigned = res.decisions == c
                clears = test[:, c - 1] >= taus[c]
                ties = test[:, 0] == 0.5
                np.testing.assert_array_equal(assigned | ties, clears | ties)

    def test_class_mirror_symmetry(self):
        rng = np.random.default_rng(53)
        checked = 0
        while checked < 15:
            cal, labels, test = fasi_instance(rng)
            if np.any(test[:, 0] == 0.5):  # ties break asymmetrically
                continue
            res = select_fasi(cal, labels, test, 0.5)
            res_m = select_fasi(
                cal[:, ::-1].copy(), 3 - labels, test[:, ::-1].copy(), 0.5
            )
            mirrored = np.where(res.decisions == 0, 0, 3 - res.decisions)
            np.testing.assert_array_equal(res_m.decisions, mirrored)
            np.testing.assert_array_equal(res_m.r_values, res.r_values)
            checked += 1

    def test_no_threshold_means_all_indecision(self):
        cal = binary_scores([0.55, 0.45])
        res = select_fasi(cal, [2, 1], binary_scores([0.9, 0.1]), 0.05)
        assert res.info["tau_by_class"] == {1: None, 2: None}
        assert np.all(res.decisions == 0)

    def test_empty_stratum_rejected(self):
        cal = binary_scores([0.9, 0.8])
        with pytest.raises(EmptyStratumError):
            select_fasi(cal, [1, 1], TEST_SCORES, 0.1)

    def test_r_values_clipped_at_one(self):
        rng = np.random.default_rng(59)
        cal, labels, test = fasi_instance(rng)
        res = select_fasi(cal, labels, test, 0.2)
        assert np.all(res.r_values <= 1.0)
