"""
Exploration weights of the upper confidence bound rules.

The sequential weight :math:`\\alpha_t` depends on the assumptions on the
payoff function, called regimes here:

``'finite'``
    f is a sample from the GP prior over a finite decision set,
    :math:`\\alpha_t = 2 \\log(|D| t^2 \\pi^2 / (6 \\delta))`.
``'compact'``
    f is a GP sample over a compact convex set :math:`[0, l]^d` whose
    derivatives satisfy a tail bound with constants a and b,
    :math:`\\alpha_t = 2 \\log(t^2 2 \\pi^2 / (3 \\delta)) +
    2 d \\log(t^2 d b l \\sqrt{\\log(4 d a / \\delta)})`.
``'rkhs'``
    f has RKHS norm at most M and the noise is bounded,
    :math:`\\alpha_t = 2 M^2 + 300 \\gamma_t \\log^3(t / \\delta)`.

The batch weight is :math:`\\beta_t = e^{2C} \\alpha_{fb[t]}`, where C bounds
the information gained within a batch.

Types
*****

.. autosummary::
    :toctree: _toctree/confidence/

    ConfidenceParams

Functions
*********

.. autosummary::
    :toctree: _toctree/confidence/

    alpha
    beta
    regret_bound
    regret_constant

"""

import numpy as np

from . import feedback
from .utils import ConfigurationError


REGIMES = ('finite', 'compact', 'rkhs')

_REQUIRED = {
    'finite': ('n_decisions',),
    'compact': ('d', 'l', 'a', 'b'),
    'rkhs': ('M', 'gamma'),
}


class ConfidenceParams():
    """
    Constants entering the exploration weights.

    Parameters
    ----------
    regime : {'finite', 'compact', 'rkhs'}
        Assumption regime.
    delta : float
        Failure probability, in (0, 1).
    C : float
        Bound on the conditional information gain within a batch, C >= 0.
        Default is 0.
    n_decisions : int, optional
        Size of the decision set, regime ``'finite'``.
    d, l, a, b : float, optional
        Dimension, side length and derivative tail constants, regime
        ``'compact'``.
    M : float, optional
        RKHS norm bound, regime ``'rkhs'``.
    gamma : [callable | array_like], optional
        Maximum information gain after t steps, regime ``'rkhs'``. Either a
        function of t or a sequence with ``gamma[t - 1]`` = gamma_t.

    Raises
    ------
    ConfigurationError
        Listing every invalid or missing field.
    """

    def __init__(self, regime, delta, C=0.0, n_decisions=None, d=None,
                 l=None, a=None, b=None, M=None, gamma=None):
        fields = dict(n_decisions=n_decisions, d=d, l=l, a=a, b=b, M=M,
                      gamma=gamma)
        errors = []
        if regime not in REGIMES:
            errors.append(f"Unknown confidence regime '{regime}'. Valid "
                          f"regimes are {', '.join(REGIMES)}.")
        if not 0 < delta < 1:
            errors.append(f'delta must lie in (0, 1), got {delta}.')
        if not C >= 0:
            errors.append(f'C must be non-negative, got {C}.')
        for name in _REQUIRED.get(regime, ()):
            value = fields[name]
            if value is None:
                errors.append(f"Regime '{regime}' requires '{name}'.")
            elif name != 'gamma' and not value > 0:
                errors.append(f'{name} must be positive, got {value}.')
        for name, value in fields.items():
            if value is not None and name not in _REQUIRED.get(regime, ()):
                errors.append(f"'{name}' is not used by regime '{regime}'.")
        if errors:
            raise ConfigurationError(errors)

        self.regime = regime
        self.delta = float(delta)
        self.C = float(C)
        self.n_decisions = n_decisions
        self.d = d
        self.l = l
        self.a = a
        self.b = b
        self.M = M
        self.gamma = gamma

    def with_C(self, C):
        """Copy with a different bound C."""
        fields = {name: getattr(self, name)
                  for name in _REQUIRED[self.regime]}
        return ConfidenceParams(self.regime, self.delta, C=C, **fields)

    def gamma_at(self, t):
        """Information gain bound gamma_t of the rkhs regime."""
        if callable(self.gamma):
            return float(self.gamma(t))
        gamma = np.atleast_1d(self.gamma)
        if t > len(gamma):
            raise ValueError(f'gamma is only known up to t = {len(gamma)}, '
                             f'got t = {t}.')
        return float(gamma[t - 1])

    def to_dict(self):
        params = {'regime': self.regime, 'delta': self.delta, 'C': self.C}
        for name in _REQUIRED[self.regime]:
            if name != 'gamma':
                params[name] = getattr(self, name)
        return params

    def __repr__(self):
        return 'ConfidenceParams({})'.format(
            ', '.join(f'{k}={v!r}' for k, v in self.to_dict().items()))


def alpha(params, t):
    """
    Exploration weight alpha_t of the sequential rule.

    Parameters
    ----------
    params : ConfidenceParams
        Regime and constants.
    t : int
        Round index, t >= 1.

    Returns
    -------
    float
        Positive weight, non-decreasing in t.
    """
    if t < 1:
        raise ValueError(f'alpha is defined for t >= 1, got t = {t}.')
    delta = params.delta
    if params.regime == 'finite':
        return 2 * np.log(params.n_decisions * t**2 * np.pi**2
                          / (6 * delta))
    elif params.regime == 'compact':
        d = params.d
        # grouping: 2 log(t^2 * 2 pi^2 / (3 delta))
        first = 2 * np.log(t**2 * 2 * np.pi**2 / (3 * delta))
        second = 2 * d * np.log(t**2 * d * params.b * params.l
                                * np.sqrt(np.log(4 * d * params.a / delta)))
        return first + second
    elif params.regime == 'rkhs':
        return (2 * params.M**2
                + 300 * params.gamma_at(t) * np.log(t / delta)**3)
    raise NotImplementedError(
        f"The regime '{params.regime}' is not implemented.")


def beta(params, schedule, t):
    """
    Exploration weight beta_t of the batch rule.

    Rounds without any feedback yet, fb[t] = 0, use alpha_1.

    Parameters
    ----------
    params : ConfidenceParams
        Regime, constants and C.
    schedule : FeedbackSchedule
        Feedback schedule providing fb[t].
    t : int
        Round index, t >= 1.

    Returns
    -------
    float
        ``exp(2 C) * alpha(max(fb[t], 1))``.
    """
    return np.exp(2 * params.C) * alpha(params,
                                        max(feedback.fb(schedule, t), 1))


def regret_constant(noise_variance):
    """C_1 = 8 / log(1 + 1 / noise_variance)."""
    return 8 / np.log1p(1 / noise_variance)


def regret_bound(params, T, gamma_T, noise_variance):
    """
    High-probability bound on the cumulative regret after T rounds.

    Parameters
    ----------
    params : ConfidenceParams
        Regime, constants and C.
    T : int
        Horizon.
    gamma_T : float
        Bound on the maximum information gain after T observations.
    noise_variance : float
        Observation noise variance.

    Returns
    -------
    float
        ``sqrt(C_1 T exp(2 C) alpha_T gamma_T) + 2``.
    """
    if not gamma_T >= 0:
        raise ValueError(f'gamma_T must be non-negative, got {gamma_T}.')
    if not noise_variance > 0:
        raise ValueError('noise_variance should be larger than zero!')
    return np.sqrt(regret_constant(noise_variance) * T * np.exp(2 * params.C)
                   * alpha(params, T) * gamma_T) + 2
