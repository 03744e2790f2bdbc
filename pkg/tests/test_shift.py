import numpy as np
import pytest

import bruteforce
from fsrselect import (
    binary_scores,
    choose_side,
    p_cal_hat,
    p_test_hat,
    select_base,
    select_corrected,
    storey_pi,
)
from fsrselect.shift import (
    USE_S1,
    USE_S2,
    DegenerateLambdaError,
    EmpiricalCdf,
    EmptyStratumError,
)


class TestEmpiricalCdf:
    def test_right_closed_steps(self):
        cdf = EmpiricalCdf([0.2, 0.5, 0.5, 0.9])
        assert cdf(0.1) == 0.0
        assert cdf(0.2) == 0.25
        assert cdf(0.5) == 0.75
        assert cdf(1.0) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(EmptyStratumError):
            EmpiricalCdf([])


class TestStoreyPi:
    def test_hand_evaluation(self):
        # F(0.5) = 0.25 via one of four reference values below 0.5
        f11 = EmpiricalCdf([0.4, 0.6, 0.7, 0.8])
        assert storey_pi([0.2, 0.6, 0.7, 0.9], 0.5, f11) == pytest.approx(1.0)

    def test_zero_exceedances(self):
        f11 = EmpiricalCdf([0.4, 0.9])
        assert storey_pi([0.1, 0.2], 0.5, f11) == 0.0

    def test_clamped_at_one(self):
        f11 = EmpiricalCdf([0.1, 0.2, 0.3, 0.9])  # small tail mass above 0.5
        assert storey_pi([0.9, 0.9, 0.9, 0.9], 0.5, f11) == 1.0

    def test_degenerate_denominator(self):
        f11 = EmpiricalCdf([0.1, 0.2])
        with pytest.raises(DegenerateLambdaError):
            storey_pi([0.9], 0.5, f11)


class TestChooseSide:
    def test_sign_checks(self):
        assert choose_side(0.9, 0.9) == USE_S1
        assert choose_side(0.05, 0.05) == USE_S2

    def test_boundary_is_s1(self):
        assert choose_side(0.4, 0.6) == USE_S1


class TestPTestHat:
    def test_hand_evaluation(self):
        assert p_test_hat(0.5, 0.2, 0.9) == pytest.approx(0.15)

    def test_degenerate_mixture(self):
        assert p_test_hat(0.0, 0.3, 0.9) == pytest.approx(0.1)

    def test_collapses_to_pi(self):
        assert p_test_hat(0.7, 1.0, 1.0) == pytest.approx(0.7)

    def test_floor(self):
        assert p_test_hat(0.0, 0.0, 1.0, floor=0.01) == 0.01


class TestPCalHat:
    def test_hand_count(self):
        cal = np.array([[0.9, 0.1], [0.8, 0.2], [0.4, 0.6]])
        assert p_cal_hat(cal, [1, 2, 2]) == pytest.approx(1 / 3)

    def test_separable_floors(self):
        cal = binary_scores([0.9, 0.8, 0.1])
        assert p_cal_hat(cal, [1, 1, 2]) == pytest.approx(1 / 4)

    def test_all_wrong(self):
        cal = binary_scores([0.9, 0.1])
        assert p_cal_hat(cal, [2, 1]) == 1.0


def shift_instance(rng, n_cal=8, n_test=6):
    while True:
        labels = rng.integers(1, 3, n_cal)
        if np.any(labels == 1) and np.any(labels == 2):
            break
    cal = binary_scores(rng.integers(0, 9, n_cal) / 8)
    test = binary_scores(rng.integers(0, 9, n_test) / 8)
    return cal, labels, test


class TestSelectCorrected:
    def test_equal_rates_match_base(self):
        # engineer p_test_hat == p_cal_hat so the multiplier is exactly 1
        rng = np.random.default_rng(0)
        found = 0
        for _ in range(300):
            cal, labels, test = shift_instance(rng)
            try:
                res = select_corrected(cal, labels, test, 0.3)
            except (DegenerateLambdaError, EmptyStratumError):
                continue
            if res.info["p_test_hat"] == res.info["p_cal_hat"]:
                base = select_base(cal, labels, test, 0.3)
                np.testing.assert_array_equal(res.decisions, base.decisions)
                found += 1
        assert found > 0

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(21)
        checked = 0
        while checked < 25:
            cal, labels, test = shift_instance(rng)
            try:
                res = select_corrected(cal, labels, test, 0.3)
            except DegenerateLambdaError:
                continue
            naive_dec, naive_r = bruteforce.select_corrected(
                [(tuple(v), int(l)) for v, l in zip(cal, labels)],
                [tuple(v) for v in test],
                0.3,
            )
            assert list(res.decisions) == naive_dec
            np.testing.assert_array_equal(res.r_values, naive_r)
            checked += 1

    def test_multiplier_direction(self):
        rng = np.random.default_rng(33)
        seen = set()
        for _ in range(400):
            cal, labels, test = shift_instance(rng, n_cal=12, n_test=8)
            try:
                res = select_corrected(cal, labels, test, 0.3)
            except DegenerateLambdaError:
                continue
            base = select_base(cal, labels, test, 0.3)
            sel_base = set(np.flatnonzero(base.decisions))
            sel_corr = set(np.flatnonzero(res.decisions))
            m = res.info["multiplier"]
            if m > 1:
                assert sel_corr <= sel_base
                seen.add(">")
            elif m < 1:
                assert sel_base <= sel_corr
                seen.add("<")
            else:
                assert sel_base == sel_corr
        assert {">", "<"} <= seen

    def test_mirror_symmetry(self):
        # class swap flips the chosen side and leaves the estimate alone;
        # scores avoid 0.5 so the side rule is never on its boundary
        rng = np.random.default_rng(5)
        checked = 0
        while checked < 20:
            labels = rng.integers(1, 3, 8)
            if not (np.any(labels == 1) and np.any(labels == 2)):
                continue
            cal = binary_scores(rng.integers(0, 8, 8) / 8 + 1 / 16)
            test = binary_scores(rng.integers(0, 8, 6) / 8 + 1 / 16)
            f11 = EmpiricalCdf(cal[labels == 1, 0])
            f12 = EmpiricalCdf(cal[labels == 2, 0])
            if f11(0.5) + f12(0.5) == 1.0:  # boundary: flip not required
                continue
            try:
                res = select_corrected(cal, labels, test, 0.3)
                res_swapped = select_corrected(
                    cal[:, ::-1].copy(), 3 - labels, test[:, ::-1].copy(), 0.3
                )
            except DegenerateLambdaError:
                continue
            assert {res.info["side"], res_swapped.info["side"]} == {USE_S1, USE_S2}
            assert res.info["p_test_hat"] == res_swapped.info["p_test_hat"]
            np.testing.assert_array_equal(
                res.decisions != 0, res_swapped.decisions != 0
            )
            checked += 1

    def test_empty_stratum_rejected(self):
        cal = binary_scores([0.9, 0.8])
        with pytest.raises(EmptyStratumError):
            select_corrected(cal, [1, 1], binary_scores([0.7]), 0.1)

    def test_requires_binary(self):
        cal = np.full((3, 3), 1 / 3)
        with pytest.raises(ValueError):
            select_corrected(cal, [1, 2, 3], np.full((2, 3), 1 / 3), 0.1)
