"""
Batch upper confidence bound rules with hallucinated observations.

GP-BUCB picks the maximizer of :math:`\\mu_{fb[t]}(x) + \\beta_t^{1/2}
\\sigma_{t-1}(x)`: the mean uses delivered outcomes only, the standard
deviation also conditions on the pending decisions. The lazy variant keeps
upper bounds on the standard deviations in a priority queue and only
evaluates the variances of decisions that could still be the maximizer.

Selection Functions
*******************

.. autosummary::
    :toctree: _toctree/policies/

    select_gp_bucb
    select_gp_bucb_lazy
    select_uncertainty
    select_two_stage

Initialization
**************

.. autosummary::
    :toctree: _toctree/policies/

    uncertainty_sampling_init
    t_init_size

"""

from heapq import heapify, heappop, heappush
import logging

import numpy as np

from .. import confidence as conf
from ..utils import (ConfigurationError,
                     _check_positive_params)
from ._general import (ucb_scores,
                       _argmax)


log = logging.getLogger(__name__)

INIT_FAMILIES = ('linear', 'matern', 'rbf')


def select_gp_bucb(state):
    """
    GP-BUCB decision of round t, evaluating all variances.

    The chosen decision is hallucinated before the state moves to round
    t + 1.

    Parameters
    ----------
    state : PolicyState
        Current state.

    Returns
    -------
    int
        Chosen decision index.
    """
    weight = conf.beta(state.confidence, state.schedule, state.t)
    return state.advance(_argmax(ucb_scores(state, weight)))


def _rebuild_heap(state, means, sqrt_beta):
    state.heap = [(-(means[i] + sqrt_beta * state.sigma_hat[i]), i)
                  for i in range(len(means))]
    heapify(state.heap)


def select_gp_bucb_lazy(state):
    """
    GP-BUCB decision of round t with lazy variance evaluation.

    Returns the same decision as :func:`select_gp_bucb`. The queue holds
    ``(-bound, index)`` with score upper bounds built from `sigma_hat`. The
    top entry is re-evaluated until its bound is exact for the current
    posterior; then it is the maximizer with the lowest index. Bounds are
    rebuilt when beta_t or the posterior mean changes.

    Parameters
    ----------
    state : PolicyState
        Current state.

    Returns
    -------
    int
        Chosen decision index.

    Raises
    ------
    RuntimeError
        If an evaluated standard deviation exceeds its stored upper bound.
    """
    posterior = state.posterior
    weight = conf.beta(state.confidence, state.schedule, state.t)
    sqrt_beta = np.sqrt(weight)
    means = posterior.candidate_means()
    key = (weight, posterior.mean_version)
    if state.heap_key != key:
        _rebuild_heap(state, means, sqrt_beta)
        state.heap_key = key

    size = posterior.n_conditioned
    n_evaluated = 0
    while True:
        _, i = state.heap[0]
        if state.sigma_hat_size[i] == size:
            break
        heappop(state.heap)
        sigma = np.sqrt(posterior.candidate_variances([i])[0])
        n_evaluated += 1
        if sigma > state.sigma_hat[i]:
            raise RuntimeError(
                f'Standard deviation {sigma!r} of decision {i} exceeds its '
                f'upper bound {state.sigma_hat[i]!r}.')
        state.sigma_hat[i] = sigma
        state.sigma_hat_size[i] = size
        heappush(state.heap, (-(means[i] + sqrt_beta * sigma), i))
    state.recompute_count += n_evaluated
    log.debug('Round %d: evaluated %d variances.', state.t, n_evaluated)
    return state.advance(i)


def select_uncertainty(state):
    """
    Uncertainty sampling: the decision of highest posterior variance.

    The choice is hallucinated; ties go to the lowest index.
    """
    variances = state.posterior.candidate_variances()
    state.recompute_count += len(variances)
    return state.advance(_argmax(variances))


def select_two_stage(state):
    """
    Uncertainty sampling for the first t_init rounds, GP-BUCB afterwards.

    Parameters
    ----------
    state : PolicyState
        State whose schedule is built with
        :meth:`gpbucb.feedback.FeedbackSchedule.initialized`.

    Returns
    -------
    int
        Chosen decision index.
    """
    if state.t <= state.schedule.t_init:
        return select_uncertainty(state)
    return select_gp_bucb(state)


def uncertainty_sampling_init(posterior, decision_set, t_init):
    """
    Greedy initialization set of maximum posterior variance.

    Each pick is hallucinated into `posterior` before the next one, so the
    same decision can only reappear once its variance is the largest again.

    Parameters
    ----------
    posterior : GpPosterior
        Posterior built over `decision_set`; modified in place.
    decision_set : DecisionSet
        Candidate decisions.
    t_init : int
        Number of picks, t_init >= 1.

    Returns
    -------
    list of int
        Decision indices in selection order.
    """
    if t_init < 1:
        raise ValueError(f't_init must be at least 1, got {t_init}.')
    if posterior.candidates is None or \
            len(posterior.candidates) != len(decision_set):
        raise ValueError('The posterior must be built over the decision set.')
    indices = []
    for _ in range(t_init):
        i = _argmax(posterior.candidate_variances())
        posterior.hallucinate(decision_set[i])
        indices.append(i)
    return indices


@_check_positive_params
def t_init_size(family, B, eta=None, d=None, nu=None, epsilon=None):
    """
    Initialization size and regret multiplier for a kernel family.

    The sizes assume the information gain bounds gamma_t <= eta d log(t + 1)
    (linear), gamma_t <= nu t^epsilon (Matérn), and
    gamma_t <= eta (log(t + 1))^d (rbf).

    Parameters
    ----------
    family : {'linear', 'matern', 'rbf'}
        Kernel family.
    B : int
        Batch size bound.
    eta, d : float, optional
        Constants of the linear and rbf bounds.
    nu, epsilon : float, optional
        Constants of the Matérn bound, epsilon in (0, 1).

    Returns
    -------
    t_init : int
        Ceiling of the size expression, 0 for B = 1.
    multiplier : float
        Regret multiplier C'.
    """
    errors = []
    if family not in INIT_FAMILIES:
        raise ConfigurationError(
            f"No initialization size for kernel family '{family}'. Valid "
            f"families are {', '.join(INIT_FAMILIES)}.")
    required = {'linear': ('eta', 'd'), 'rbf': ('eta', 'd'),
                'matern': ('nu', 'epsilon')}[family]
    values = dict(eta=eta, d=d, nu=nu, epsilon=epsilon)
    for name in required:
        if values[name] is None:
            errors.append(f"Family '{family}' requires '{name}'.")
    if family == 'matern' and epsilon is not None and not 0 < epsilon < 1:
        errors.append(f'epsilon must lie in (0, 1), got {epsilon}.')
    if errors:
        raise ConfigurationError(errors)

    if family == 'linear':
        multiplier = np.exp(2 / np.e)
    elif family == 'matern':
        multiplier = np.e
    else:
        multiplier = np.exp((2 * d / np.e)**d)
    if B == 1:
        return 0, float(multiplier)

    log_B = np.log(B)
    if family == 'linear':
        size = max(log_B,
                   np.e * (np.log(eta) + np.log(d) + 2 * log_B)
                   / (2 * log_B - 1) * eta * d * (B - 1) * log_B)
    elif family == 'matern':
        size = (nu * (B - 1))**(1 / (1 - epsilon))
    else:
        # grouping: ((e log eta + (d + 1) log B) / (2 d log B - 1))^d
        size = max(log_B**d,
                   ((np.e * np.log(eta) + (d + 1) * log_B)
                    / (d * 2 * log_B - 1))**d * eta * (B - 1) * log_B**d)
    # small tolerance so exact integers are not rounded up by roundoff
    return int(np.ceil(size - 1e-9)), float(multiplier)
