"""
Randomized checks of the information gain identities and bounds.
"""

import pytest
import numpy as np

from gpbucb import infogain
from gpbucb.kernels import DecisionSet, KernelSpec


def random_kernel(rng, d):
    family = rng.choice(['rbf', 'matern', 'linear'])
    return KernelSpec(family, rng.uniform(0.2, 1.0, size=d),
                      signal_variance=rng.uniform(0.5, 2.0),
                      smoothness=rng.choice([0.5, 1.5, 2.5]))


class Test_ratio_of_standard_deviations:

    def test_no_violation_in_random_configurations(self):
        rng = np.random.default_rng(1)
        violations = []
        for k in range(1000):
            d = int(rng.integers(1, 4))
            kernel = random_kernel(rng, d)
            noise_variance = rng.uniform(0.01, 1.0)
            n = int(rng.integers(0, 11))
            n_fb = int(rng.integers(0, n + 1))
            history = rng.uniform(size=(n, d))
            check = infogain.check_lemma1(kernel, noise_variance,
                                          history[:n_fb], history[n_fb:],
                                          rng.uniform(size=d))
            if check.holds is False:
                violations.append((k, check))
        assert violations == []


class Test_batch_information_after_initialization:

    @pytest.mark.parametrize('t_init', [2, 4])
    def test_holds_for_random_kernels(self, t_init):
        rng = np.random.default_rng(t_init)
        for _ in range(100):
            kernel = KernelSpec(rng.choice(['rbf', 'matern']),
                                [rng.uniform(0.1, 1.0)],
                                smoothness=rng.choice([0.5, 1.5, 2.5]))
            decision_set = DecisionSet(rng.uniform(size=(8, 1)))
            check = infogain.check_lemma2_exact(
                kernel, rng.uniform(0.05, 1.0), decision_set, B=3,
                t_init=t_init)
            assert check.holds


class Test_information_identities:

    @pytest.mark.parametrize('seed', range(20))
    def test_chain_rule(self, seed):
        rng = np.random.default_rng(seed)
        kernel = random_kernel(rng, 2)
        A = rng.uniform(size=(3, 2))
        S = rng.uniform(size=(4, 2))
        joint = infogain.mutual_information(kernel, 0.1, np.vstack([S, A]))
        alone = infogain.mutual_information(kernel, 0.1, S)
        conditional = infogain.conditional_mutual_information(kernel, 0.1, A,
                                                              S)
        assert abs(conditional - (joint - alone)) <= 1e-9 * max(joint, 1)

    @pytest.mark.parametrize('seed', range(20))
    def test_information_never_hurts(self, seed):
        rng = np.random.default_rng(seed)
        kernel = random_kernel(rng, 2)
        A = rng.uniform(size=(5, 2))
        values = [infogain.mutual_information(kernel, 0.1, A[:k])
                  for k in range(6)]
        assert np.all(np.diff(values) >= -1e-12)

    @pytest.mark.parametrize('seed', range(20))
    def test_conditioning_on_more_points_never_adds_information(self, seed):
        rng = np.random.default_rng(seed)
        kernel = random_kernel(rng, 2)
        noise_variance = rng.uniform(0.01, 1.0)
        A = rng.uniform(size=(int(rng.integers(1, 5)), 2))
        S = rng.uniform(size=(int(rng.integers(0, 5)), 2))
        s = rng.uniform(size=(1, 2))
        smaller = infogain.conditional_mutual_information(
            kernel, noise_variance, A, S)
        larger = infogain.conditional_mutual_information(
            kernel, noise_variance, A, np.vstack([S, s]))
        assert larger <= smaller + 1e-9

    def test_empty_set_has_zero_information(self, rbf):
        assert infogain.mutual_information(rbf, 0.3, []) == 0

    def test_single_point_with_unit_signal_to_noise(self, rbf):
        assert np.isclose(infogain.mutual_information(rbf, 1.0, [[0.4]]),
                          0.5 * np.log(2), rtol=1e-12)
