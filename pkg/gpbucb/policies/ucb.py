"""
Sequential upper confidence bound rule and its naive batch extensions.

GP-UCB picks the maximizer of :math:`\\mu_{t-1}(x) + \\alpha_t^{1/2}
\\sigma_{t-1}(x)` and needs feedback after every round. The naive batch
rules ignore pending decisions: NRB repeats the GP-UCB choice at fb[t]
throughout the batch, NTB takes the top scoring distinct decisions.

Selection Functions
*******************

.. autosummary::
    :toctree: _toctree/policies/

    select_gp_ucb
    select_nrb
    select_ntb

"""

import numpy as np

from .. import confidence as conf
from ..utils import ConfigurationError
from ._general import (ucb_scores,
                       _argmax,
                       _ucb_weight)


def select_gp_ucb(state):
    """
    GP-UCB decision of round t.

    Parameters
    ----------
    state : PolicyState
        State with a sequential schedule; advanced by one round.

    Returns
    -------
    int
        Chosen decision index.
    """
    if state.schedule.kind != 'sequential':
        raise ConfigurationError(
            f'GP-UCB needs sequential feedback, got {state.schedule!r}.')
    scores = ucb_scores(state, conf.alpha(state.confidence, state.t))
    return state.advance(_argmax(scores))


def select_nrb(state):
    """
    Naive repeated batch: the GP-UCB choice given feedback through fb[t].

    The variance is not conditioned on pending decisions, so the choice
    stays the same until new feedback arrives.

    Returns
    -------
    int
        Chosen decision index.
    """
    scores = ucb_scores(state, _ucb_weight(state))
    return state.advance(_argmax(scores), hallucinate=False)


def select_ntb(state, j=None):
    """
    Naive top batch: the j-th best distinct decision by GP-UCB score at fb[t].

    Parameters
    ----------
    state : PolicyState
        Current state, advanced by one round.
    j : int, optional
        Position within the batch. Default is ``t - fb[t]``.

    Returns
    -------
    int
        Chosen decision index.
    """
    if j is None:
        j = state.t - state.fb
    n = len(state.decision_set)
    if not 1 <= j <= n:
        raise ValueError(f'Batch position {j} is outside 1..{n}.')
    scores = ucb_scores(state, _ucb_weight(state))
    # stable sort keeps the lowest index first among equal scores
    order = np.argsort(-scores, kind='stable')
    return state.advance(int(order[j - 1]), hallucinate=False)
