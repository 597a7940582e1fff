"""
State and scoring shared by all selection rules.

State
*****

.. autosummary::
    :toctree: _toctree/policies/

    PolicyState

Scores
******

.. autosummary::
    :toctree: _toctree/policies/

    ucb_scores
    confidence_interval
    _argmax
    _ucb_weight

"""

import logging

import numpy as np

from .. import confidence as conf
from .. import feedback
from ..kernels import DecisionSet
from ..posterior import GpPosterior


log = logging.getLogger(__name__)


class PolicyState():
    """
    Everything a selection rule needs within one trial.

    Parameters
    ----------
    decision_set : DecisionSet
        Candidate decisions.
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    schedule : FeedbackSchedule
        Feedback schedule.
    confidence : ConfidenceParams
        Constants of the exploration weights.
    posterior : GpPosterior, optional
        Starting posterior over `decision_set`. Default is the prior.

    Attributes
    ----------
    t : int
        Round whose decision is chosen next, starting at 1.
    pending : list of tuple
        ``(round, decision index, hallucinated)`` of rounds without
        delivered outcomes.
    outcomes : list of float
        Outcome of every committed round, nan until it is delivered.
    sigma_hat : np.ndarray
        Upper bounds on the posterior standard deviations, lazy rule only.
    recompute_count : int
        Number of candidate variances evaluated by the selections so far.
    """

    def __init__(self, decision_set, kernel, noise_variance, schedule,
                 confidence, posterior=None):
        if not isinstance(decision_set, DecisionSet):
            decision_set = DecisionSet(decision_set)
        self.decision_set = decision_set
        if posterior is None:
            posterior = GpPosterior(kernel, noise_variance,
                                    candidates=decision_set)
        self.posterior = posterior
        self.schedule = schedule
        self.confidence = confidence
        self.t = 1
        self.pending = []
        self.outcomes = []
        self.recompute_count = 0

        n = len(decision_set)
        self.sigma_hat = np.full(n, np.inf)
        # path size at which sigma_hat[i] was last computed exactly
        self.sigma_hat_size = np.full(n, -1)
        self.heap = []
        self.heap_key = None

    @property
    def fb(self):
        """fb[t] of the current round."""
        return feedback.fb(self.schedule, self.t)

    def advance(self, index, hallucinate=True):
        """
        Commit `index` as decision of round t and move to round t + 1.

        Parameters
        ----------
        index : int
            Chosen decision.
        hallucinate : bool
            Whether to condition the variance on the pending decision.
        """
        if hallucinate:
            self.posterior.hallucinate(self.decision_set[index])
        self.pending.append((self.t, int(index), hallucinate))
        self.outcomes.append(np.nan)
        self.t += 1
        return int(index)

    def deliver(self, outcomes):
        """
        Deliver outcomes of the oldest pending rounds, in round order.

        Hallucinated decisions are promoted, the others are conditioned on
        directly.
        """
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=float))
        if len(outcomes) > len(self.pending):
            raise ValueError(f'Got {len(outcomes)} outcomes for '
                             f'{len(self.pending)} pending rounds.')
        delivered = self.pending[:len(outcomes)]
        self.pending = self.pending[len(outcomes):]
        n_hallucinated = sum(1 for _, _, h in delivered if h)
        self.posterior.promote_oldest(outcomes[:n_hallucinated])
        for (round_, index, hallucinated), y in zip(delivered, outcomes):
            self.outcomes[round_ - 1] = float(y)
            if not hallucinated:
                self.posterior.condition_on_observation(
                    self.decision_set[index], y)
        log.debug('Delivered %d outcomes before round %d.', len(outcomes),
                  self.t)


def _argmax(scores):
    """Index of the maximum; ties go to the lowest index."""
    return int(np.argmax(scores))


def _ucb_weight(state):
    """alpha_{fb[t] + 1}, the sequential weight given feedback through fb[t]."""
    return conf.alpha(state.confidence, state.fb + 1)


def ucb_scores(state, weight):
    """
    Upper confidence bounds ``mean + sqrt(weight) * std`` of all candidates.

    The mean uses delivered outcomes, the standard deviation all conditioned
    points of the posterior.

    Parameters
    ----------
    state : PolicyState
        Current state.
    weight : float
        Exploration weight, alpha or beta.

    Returns
    -------
    np.ndarray
    """
    means = state.posterior.candidate_means()
    variances = state.posterior.candidate_variances()
    state.recompute_count += len(variances)
    return means + np.sqrt(weight) * np.sqrt(variances)


def confidence_interval(state, index, weight=None):
    """
    Confidence interval of the payoff of decision `index` at round t.

    Parameters
    ----------
    state : PolicyState
        Current state.
    index : int
        Decision index.
    weight : float, optional
        Exploration weight. Default is beta_t.

    Returns
    -------
    tuple of float
        ``(lower, upper)`` = mean -/+ sqrt(weight) * std.
    """
    if weight is None:
        weight = conf.beta(state.confidence, state.schedule, state.t)
    mean = state.posterior.candidate_means()[index]
    std = np.sqrt(state.posterior.candidate_variances([index])[0])
    half_width = np.sqrt(weight) * std
    return mean - half_width, mean + half_width
