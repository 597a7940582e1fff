import pytest
import numpy as np
from numpy.testing import (assert_allclose,
                           assert_array_equal)

import gpbucb
from gpbucb import infogain
from gpbucb.kernels import DecisionSet, KernelSpec


@pytest.fixture
def small_set():
    return DecisionSet.grid([0.0], [1.0], 6)


class Test_mutual_information:

    def test_single_point(self, rbf):
        assert_allclose(infogain.mutual_information(rbf, 0.5, [[0.3]]),
                        0.5 * np.log(1 + 1 / 0.5))

    def test_empty_set_gives_zero(self, rbf):
        assert infogain.mutual_information(rbf, 0.5, []) == 0

    def test_matches_log_determinant(self, matern):
        A = np.array([[0.1], [0.2], [0.6]])
        K = gpbucb.kernels.evaluate_matrix(matern, A)
        expected = 0.5 * np.linalg.slogdet(np.eye(3) + K / 0.1)[1]
        assert_allclose(infogain.mutual_information(matern, 0.1, A), expected)

    def test_repeats_are_allowed(self, rbf):
        once = infogain.mutual_information(rbf, 0.1, [[0.5]])
        twice = infogain.mutual_information(rbf, 0.1, [[0.5], [0.5]])
        assert once < twice < 2 * once


class Test_conditional_mutual_information:

    def test_chain_rule(self, matern):
        A = np.array([[0.1], [0.4]])
        S = np.array([[0.2], [0.9]])
        joint = infogain.mutual_information(matern, 0.1, np.vstack([S, A]))
        alone = infogain.mutual_information(matern, 0.1, S)
        assert_allclose(infogain.conditional_mutual_information(
            matern, 0.1, A, S), joint - alone, rtol=1e-10)

    def test_empty_condition_equals_mutual_information(self, rbf):
        A = np.array([[0.1], [0.4]])
        assert infogain.conditional_mutual_information(rbf, 0.1, A, []) == \
            infogain.mutual_information(rbf, 0.1, A)


class Test_greedy_gamma:

    def test_curve_sums_to_gain_and_is_non_increasing(self, matern, grid):
        report = infogain.greedy_gamma(matern, 0.01, grid, 8)
        assert_allclose(np.sum(report.greedy_curve), report.gain)
        assert np.all(np.diff(report.greedy_curve) <= 1e-12)
        assert_allclose(report.upper_bracket,
                        report.gain * np.e / (np.e - 1))

    def test_gain_equals_information_of_picked_points(self, matern, grid):
        report = infogain.greedy_gamma(matern, 0.01, grid, 5)
        assert_allclose(report.gain, infogain.mutual_information(
            matern, 0.01, grid.points[report.indices]), rtol=1e-8)

    def test_first_pick_is_lowest_index_of_maximum_variance(self, rbf, grid):
        assert infogain.greedy_gamma(rbf, 0.01, grid, 1).indices == [0]

    def test_without_repeats_picks_distinct_points(self, rbf, small_set):
        report = infogain.greedy_gamma(rbf, 0.01, small_set, 6)
        assert sorted(report.indices) == list(range(6))

    def test_too_many_distinct_picks_raise_error(self, rbf, small_set):
        with pytest.raises(ValueError):
            infogain.greedy_gamma(rbf, 0.01, small_set, 7)
        assert len(infogain.greedy_gamma(rbf, 0.01, small_set, 7,
                                         repeats=True).indices) == 7

    def test_conditioning_reduces_gain(self, matern, grid):
        plain = infogain.greedy_gamma(matern, 0.01, grid, 3)
        conditioned = infogain.greedy_gamma(matern, 0.01, grid, 3,
                                            conditioned_on=grid.points[::4])
        assert conditioned.gain < plain.gain


class Test_exact_gamma:

    def test_brackets_greedy_value(self, matern, small_set):
        for T in (1, 2, 3):
            greedy = infogain.greedy_gamma(matern, 0.1, small_set, T).gain
            exact, best = infogain.exact_gamma(matern, 0.1, small_set, T)
            assert greedy <= exact + 1e-12
            assert exact <= greedy * np.e / (np.e - 1) + 1e-12
            assert len(best) == T

    def test_multisets_reach_at_least_sets(self, rbf, small_set):
        sets, _ = infogain.exact_gamma(rbf, 0.1, small_set, 2)
        multisets, _ = infogain.exact_gamma(rbf, 0.1, small_set, 2,
                                            repeats=True)
        assert multisets >= sets


class Test_check_lemma1:

    @pytest.mark.parametrize('seed', range(5))
    def test_ratio_within_bound(self, seed):
        kernel = KernelSpec('matern', [0.3, 0.3])
        rng = np.random.default_rng(seed)
        check = infogain.check_lemma1(kernel, 0.05,
                                      rng.uniform(size=(3, 2)),
                                      rng.uniform(size=(4, 2)),
                                      rng.uniform(size=2))
        assert check.holds
        assert not check.degenerate
        assert check.ratio >= 1 - 1e-12

    def test_no_pending_points_gives_ratio_one(self, rbf):
        check = infogain.check_lemma1(rbf, 0.1, [[0.2]], [], [0.5])
        assert_allclose(check.ratio, 1.0)
        assert check.bound == 1.0

    def test_degenerate_variance_is_flagged(self):
        kernel = KernelSpec('linear', [1.0])
        check = infogain.check_lemma1(kernel, 1e-3, [], [], [0.0])
        assert check.degenerate
        assert np.isnan(check.ratio)
        assert check.holds is None


class Test_check_lemma2:

    def test_holds_for_uncertainty_sampling_initialization(self, matern,
                                                          grid):
        check = infogain.check_lemma2(matern, 0.01, grid, B=4, t_init=12)
        assert check.holds
        assert check.lhs <= check.lhs_upper + 1e-12

    def test_exact_version_holds(self, matern, small_set):
        check = infogain.check_lemma2_exact(matern, 0.1, small_set, B=3,
                                            t_init=3)
        assert check.holds
        assert check.lhs == check.lhs_upper

    @pytest.mark.parametrize('B, t_init', [(1, 3), (3, 0)])
    def test_invalid_sizes_raise_error(self, rbf, small_set, B, t_init):
        with pytest.raises(ValueError):
            infogain.check_lemma2(rbf, 0.1, small_set, B, t_init)


class Test_bound_C:

    def test_zero_for_batch_size_one(self, rbf, grid):
        assert infogain.bound_C(rbf, 0.01, grid, 1) == 0

    def test_raw_mode_is_greedy_upper_bracket(self, rbf, grid):
        report = infogain.greedy_gamma(rbf, 0.01, grid, 4, repeats=True)
        assert infogain.bound_C(rbf, 0.01, grid, 5) == report.upper_bracket

    def test_initialized_mode(self, rbf, grid):
        report = infogain.greedy_gamma(rbf, 0.01, grid, 10, repeats=True)
        assert_allclose(infogain.bound_C(rbf, 0.01, grid, 5,
                                         mode='initialized', t_init=10),
                        4 / 10 * report.upper_bracket)

    def test_initialized_mode_without_size_raises_error(self, rbf, grid):
        with pytest.raises(ValueError):
            infogain.bound_C(rbf, 0.01, grid, 5, mode='initialized')

    def test_unknown_mode_raises_error(self, rbf, grid):
        with pytest.raises(ValueError):
            infogain.bound_C(rbf, 0.01, grid, 5, mode='tight')


class Test_information_report:

    def test_stores_result_in_experiment(self, experiment):
        report = infogain.information_report(experiment, T=5)
        assert 'infogain.information_report' in experiment.results
        assert len(report['indices']) == 5
        assert_allclose(report['cumulative_gain'],
                        np.cumsum(report['greedy_curve']))

    def test_is_not_recomputed(self, mocker, experiment):
        infogain.information_report(experiment, T=5)
        spy = mocker.spy(infogain, 'greedy_gamma')
        infogain.information_report(experiment, T=5)
        spy.assert_not_called()


class Test_conditional_information_bound:

    def test_equals_bound_C(self, experiment):
        expected = infogain.bound_C(experiment.kernel,
                                    experiment.noise_variance,
                                    experiment.decision_set,
                                    experiment.base_schedule.B)
        assert infogain.conditional_information_bound(experiment) == expected
        assert experiment.results['infogain.C'] == expected

    def test_mode_and_size_enter_hash(self, experiment):
        raw = infogain.conditional_information_bound(experiment)
        initialized = infogain.conditional_information_bound(
            experiment, mode='initialized', t_init=6)
        assert raw != initialized
        assert len(experiment.results_hash_dict) == 2
        assert_array_equal(experiment.results['infogain.C'], initialized)
