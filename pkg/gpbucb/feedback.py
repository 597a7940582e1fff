"""
Feedback schedules: which rounds' outcomes are usable when choosing round t.

A schedule is the mapping ``fb[t]``: when choosing the decision of round t,
outcomes of rounds ``1 .. fb[t]`` are known. After round t's decision the
outcomes of rounds ``fb[t] + 1 .. fb[t + 1]`` are delivered.

Schedules
*********

.. autosummary::
    :toctree: _toctree/feedback/

    FeedbackSchedule

Functions
*********

.. autosummary::
    :toctree: _toctree/feedback/

    fb
    is_feedback_round
    delivered_rounds

"""

import numpy as np

from .utils import ConfigurationError


KINDS = ('sequential', 'batch', 'delay', 'custom', 'initialized')


class FeedbackSchedule():
    """
    Mapping from round index to the latest round with usable feedback.

    Use the constructors :meth:`sequential`, :meth:`batch`, :meth:`delay`,
    :meth:`custom`, and :meth:`initialized`. Schedules are immutable.

    Attributes
    ----------
    kind : str
        One of ``'sequential'``, ``'batch'``, ``'delay'``, ``'custom'``,
        ``'initialized'``.
    B : int
        Bound on ``t - fb[t]``.
    """

    def __init__(self, kind, B, values=None, base=None, t_init=0):
        if kind not in KINDS:
            raise ConfigurationError(
                f"Unknown schedule kind '{kind}'. Valid kinds are "
                f"{', '.join(KINDS)}.")
        if int(B) != B or B < 1:
            raise ConfigurationError(f'B must be a positive integer, got {B}.')
        self.kind = kind
        self.B = int(B)
        self._values = values
        self._base = base
        self.t_init = int(t_init)

    @classmethod
    def sequential(cls):
        """Strictly sequential feedback, fb[t] = t - 1."""
        return cls('sequential', 1)

    @classmethod
    def batch(cls, B):
        """Simple batches of size B, fb[t] = floor((t - 1) / B) * B."""
        return cls('batch', B)

    @classmethod
    def delay(cls, B):
        """Fixed delay, fb[t] = max(t - B, 0)."""
        return cls('delay', B)

    @classmethod
    def custom(cls, values):
        """
        Explicit schedule from an event log.

        Parameters
        ----------
        values : array_like of int
            ``values[t - 1]`` is fb[t] for rounds t = 1 .. len(values).

        Raises
        ------
        ConfigurationError
            If the values break fb[t] <= t - 1 or are decreasing.
        """
        values = np.asarray(values, dtype=int)
        if values.ndim != 1 or len(values) == 0:
            raise ConfigurationError('A custom schedule needs a non-empty '
                                     'list of fb values.')
        rounds = np.arange(1, len(values) + 1)
        errors = []
        for t in rounds[(values > rounds - 1) | (values < 0)]:
            errors.append(f'fb[{t}] = {values[t - 1]} violates '
                          f'0 <= fb[t] <= t - 1.')
        for t in rounds[1:][np.diff(values) < 0]:
            errors.append(f'fb[{t}] = {values[t - 1]} is smaller than '
                          f'fb[{t - 1}] = {values[t - 2]}.')
        if errors:
            raise ConfigurationError(errors)
        values = tuple(int(v) for v in values)
        return cls('custom', int(np.max(rounds - values)), values=values)

    @classmethod
    def initialized(cls, base, t_init):
        """
        Two-stage schedule: no feedback during the first `t_init` rounds.

        All initialization outcomes arrive after round `t_init`; afterwards
        `base` applies, shifted by `t_init` rounds.

        Parameters
        ----------
        base : FeedbackSchedule
            Schedule of the second stage.
        t_init : int
            Size of the initialization stage.
        """
        if int(t_init) != t_init or t_init < 0:
            raise ConfigurationError(
                f't_init must be a non-negative integer, got {t_init}.')
        if t_init == 0:
            return base
        return cls('initialized', max(base.B, int(t_init)), base=base,
                   t_init=t_init)

    @property
    def length(self):
        """Number of rounds covered; None if unbounded."""
        if self.kind == 'custom':
            return len(self._values)
        if self.kind == 'initialized' and self._base.length is not None:
            return self.t_init + self._base.length
        return None

    def __repr__(self):
        if self.kind == 'initialized':
            return f'FeedbackSchedule.initialized({self._base!r}, {self.t_init})'
        return f'FeedbackSchedule({self.kind!r}, B={self.B})'


def fb(schedule, t):
    """
    Latest round whose outcome is usable when choosing round `t`.

    Parameters
    ----------
    schedule : FeedbackSchedule
        The schedule.
    t : int
        Round index, t >= 1.

    Returns
    -------
    int
    """
    if t < 1:
        raise ValueError(f'Rounds start at 1, got t = {t}.')
    if schedule.length is not None and t > schedule.length:
        raise ValueError(f'Round {t} is outside the schedule, which covers '
                         f'rounds 1..{schedule.length}.')
    if schedule.kind == 'sequential':
        return t - 1
    elif schedule.kind == 'batch':
        return (t - 1) // schedule.B * schedule.B
    elif schedule.kind == 'delay':
        return max(t - schedule.B, 0)
    elif schedule.kind == 'custom':
        return schedule._values[t - 1]
    # initialized
    if t <= schedule.t_init:
        return 0
    return schedule.t_init + fb(schedule._base, t - schedule.t_init)


def is_feedback_round(schedule, t):
    """
    Whether all outcomes up to round `t` are available after round t.

    Returns
    -------
    bool
        True iff fb[t + 1] = t.
    """
    return fb(schedule, t + 1) == t


def delivered_rounds(schedule, t):
    """
    Rounds whose outcomes are delivered after the decision of round `t`.

    Returns
    -------
    range
        Rounds fb[t] + 1 .. fb[t + 1].
    """
    return range(fb(schedule, t) + 1, fb(schedule, t + 1) + 1)
