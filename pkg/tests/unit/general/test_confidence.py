import pytest
import numpy as np
from numpy.testing import assert_allclose

from gpbucb import confidence as conf
from gpbucb.confidence import ConfidenceParams
from gpbucb.feedback import FeedbackSchedule
from gpbucb.utils import ConfigurationError


@pytest.fixture
def finite():
    return ConfidenceParams('finite', 0.1, n_decisions=100)


@pytest.fixture
def compact():
    return ConfidenceParams('compact', 0.05, d=2, l=1.0, a=1.0, b=1.0)


@pytest.fixture
def rkhs():
    return ConfidenceParams('rkhs', 0.1, M=2.0, gamma=lambda t: np.log(t + 1))


class Test_ConfidenceParams:

    @pytest.mark.parametrize('delta', [0, 1, 1.5, -0.1])
    def test_delta_outside_unit_interval_raises_error(self, delta):
        with pytest.raises(ConfigurationError, match='delta'):
            ConfidenceParams('finite', delta, n_decisions=10)

    def test_negative_C_raises_error(self):
        with pytest.raises(ConfigurationError, match='C'):
            ConfidenceParams('finite', 0.1, C=-1, n_decisions=10)

    def test_missing_regime_constants_are_all_listed(self):
        with pytest.raises(ConfigurationError) as error:
            ConfidenceParams('compact', 0.1, d=1)
        assert len(error.value.messages) == 3

    def test_constants_of_other_regimes_raise_error(self):
        with pytest.raises(ConfigurationError, match="'M'"):
            ConfidenceParams('finite', 0.1, n_decisions=10, M=1.0)

    def test_unknown_regime_raises_error(self):
        with pytest.raises(ConfigurationError):
            ConfidenceParams('infinite', 0.1)

    def test_with_C_keeps_other_fields(self, compact):
        params = compact.with_C(0.7)
        assert params.C == 0.7
        assert params.to_dict() == dict(compact.to_dict(), C=0.7)

    def test_gamma_from_sequence(self):
        params = ConfidenceParams('rkhs', 0.1, M=1.0, gamma=[0.5, 0.9, 1.2])
        assert params.gamma_at(2) == 0.9
        with pytest.raises(ValueError):
            params.gamma_at(4)


class Test_alpha:

    def test_finite_formula(self, finite):
        assert_allclose(conf.alpha(finite, 3),
                        2 * np.log(100 * 9 * np.pi**2 / (6 * 0.1)))

    def test_compact_formula(self, compact):
        t, d = 4, 2
        expected = (2 * np.log(t**2 * 2 * np.pi**2 / (3 * 0.05))
                    + 2 * d * np.log(t**2 * d * np.sqrt(np.log(4 * d / 0.05))))
        assert_allclose(conf.alpha(compact, t), expected)

    def test_rkhs_formula(self, rkhs):
        t = 5
        assert_allclose(conf.alpha(rkhs, t),
                        2 * 4.0 + 300 * np.log(6) * np.log(t / 0.1)**3)

    @pytest.mark.parametrize('regime', ['finite', 'compact', 'rkhs'])
    def test_positive_and_non_decreasing(self, regime, finite, compact,
                                         rkhs):
        params = dict(finite=finite, compact=compact, rkhs=rkhs)[regime]
        values = [conf.alpha(params, t) for t in range(1, 50)]
        assert values[0] > 0
        assert np.all(np.diff(values) >= 0)

    def test_round_zero_raises_error(self, finite):
        with pytest.raises(ValueError):
            conf.alpha(finite, 0)


class Test_beta:

    def test_sequential_without_C_equals_alpha_at_previous_round(self,
                                                                 finite):
        schedule = FeedbackSchedule.sequential()
        for t in range(2, 10):
            assert conf.beta(finite, schedule, t) == \
                conf.alpha(finite, t - 1)

    def test_no_feedback_uses_alpha_one(self, finite):
        schedule = FeedbackSchedule.batch(5)
        assert conf.beta(finite, schedule, 3) == conf.alpha(finite, 1)

    def test_scaled_by_exp_two_C(self, finite):
        schedule = FeedbackSchedule.batch(5)
        assert_allclose(conf.beta(finite.with_C(0.5), schedule, 7),
                        np.e * conf.alpha(finite, 5))


class Test_regret_bound:

    def test_formula(self, finite):
        params = finite.with_C(0.25)
        C_1 = 8 / np.log(1 + 1 / 0.01)
        expected = np.sqrt(C_1 * 100 * np.exp(0.5)
                           * conf.alpha(params, 100) * 12.0) + 2
        assert_allclose(conf.regret_bound(params, 100, 12.0, 0.01), expected)

    def test_regret_constant(self):
        assert_allclose(conf.regret_constant(0.5), 8 / np.log(3))

    def test_negative_gamma_raises_error(self, finite):
        with pytest.raises(ValueError):
            conf.regret_bound(finite, 10, -1.0, 0.01)

    def test_grows_with_C(self, finite):
        assert conf.regret_bound(finite.with_C(1.0), 50, 5.0, 0.1) > \
            conf.regret_bound(finite, 50, 5.0, 0.1)
