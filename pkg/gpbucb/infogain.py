"""
Information gain of noisy observations about the payoff function.

All quantities are measured in nats. For a set A of observation points with
Gaussian noise of variance :math:`\\sigma_n^2`,

.. math::

    I(f; y_A) = \\frac{1}{2} \\log \\det(I + \\sigma_n^{-2} K(A, A)),

and conditioning on observations at S replaces K by the posterior covariance
given S. The maximum information gain :math:`\\gamma_T` over T observations
is approximated greedily by uncertainty sampling; the greedy value G brackets
the true maximum as :math:`G \\le \\gamma_T \\le G e / (e - 1)`.

Experiment Functions
********************

.. autosummary::
    :toctree: _toctree/infogain/

    information_report
    conditional_information_bound

Parameter Functions
*******************

.. autosummary::
    :toctree: _toctree/infogain/

    mutual_information
    conditional_mutual_information
    greedy_gamma
    exact_gamma
    check_lemma1
    check_lemma2
    check_lemma2_exact
    bound_C
    _information_report
    _conditional_information_bound

"""

from collections import namedtuple
import itertools
import logging

import numpy as np
from scipy.linalg import cholesky, cho_factor, cho_solve, LinAlgError

from . import kernels
from .posterior import GpPosterior, NEGATIVE_VARIANCE_TOL
from .utils import (NumericalError,
                    check_dimension,
                    _cache)


log = logging.getLogger(__name__)

_prefix = 'infogain.'

# G <= gamma <= G * GREEDY_FACTOR for the greedy value G
GREEDY_FACTOR = np.e / (np.e - 1)

InfoGainReport = namedtuple(
    'InfoGainReport',
    ['indices', 'gain', 'conditional_on', 'greedy_curve', 'upper_bracket'])
InfoGainReport.__doc__ = """\
Result of a greedy information gain computation.

indices : list of int
    Decision indices in selection order.
gain : float
    Greedy value G, sum of the greedy curve.
conditional_on : np.ndarray
    Points conditioned on before the greedy selection.
greedy_curve : np.ndarray
    Gain of each greedy step, non-increasing.
upper_bracket : float
    ``G * e / (e - 1)``, an upper bound on the maximum gain.
"""

Lemma1Check = namedtuple('Lemma1Check',
                         ['ratio', 'bound', 'holds', 'degenerate'])
Lemma2Check = namedtuple('Lemma2Check',
                         ['lhs', 'lhs_upper', 'rhs', 'holds'])


def _log_det_term(covariance, noise_variance):
    """1/2 log det(I + covariance / noise_variance) via Cholesky."""
    n = covariance.shape[0]
    if n == 0:
        return 0.0
    matrix = np.eye(n) + covariance / noise_variance
    try:
        factor = cholesky(matrix, lower=True, check_finite=False)
    except LinAlgError as err:
        raise NumericalError(
            f'Cholesky factorization of a {n}x{n} information matrix '
            f'failed: {err}') from err
    return float(np.sum(np.log(np.diag(factor))))


def mutual_information(kernel, noise_variance, A):
    """
    Information gain I(f; y_A) of noisy observations at the points `A`.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    A : array_like
        Points of shape (n, d); may contain repeats or be empty.

    Returns
    -------
    float
        Non-negative gain in nats.
    """
    A = check_dimension(A, kernel.dimension, 'A')
    return _log_det_term(kernels.evaluate_matrix(kernel, A), noise_variance)


def conditional_mutual_information(kernel, noise_variance, A, S):
    """
    Information gain I(f; y_A | y_S) given noisy observations at `S`.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    A, S : array_like
        Points of shape (n_A, d) and (n_S, d).

    Returns
    -------
    float
        Non-negative gain in nats.
    """
    A = check_dimension(A, kernel.dimension, 'A')
    S = check_dimension(S, kernel.dimension, 'S')
    K_AA = kernels.evaluate_matrix(kernel, A)
    if len(S) == 0 or len(A) == 0:
        return _log_det_term(K_AA, noise_variance)
    K_SS = kernels.evaluate_matrix(kernel, S) + noise_variance * np.eye(len(S))
    K_SA = kernels.cross(kernel, S, A)
    try:
        factor = cho_factor(K_SS, lower=True, check_finite=False)
    except LinAlgError as err:
        raise NumericalError(
            f'Cholesky factorization of the {len(S)}x{len(S)} conditioning '
            f'matrix failed: {err}') from err
    posterior_cov = K_AA - K_SA.T @ cho_solve(factor, K_SA, check_finite=False)
    posterior_cov = (posterior_cov + posterior_cov.T) / 2
    return _log_det_term(posterior_cov, noise_variance)


def _greedy(posterior, T, repeats):
    """Greedy variance maximization, hallucinating every pick."""
    n = len(posterior.candidates)
    picked = np.zeros(n, dtype=bool)
    indices = []
    gains = []
    for _ in range(T):
        variances = posterior.candidate_variances()
        if not repeats:
            variances = np.where(picked, -np.inf, variances)
        i = int(np.argmax(variances))
        gains.append(0.5 * np.log1p(variances[i] / posterior.noise_variance))
        indices.append(i)
        picked[i] = True
        posterior.hallucinate(posterior.candidates[i])
    return indices, np.array(gains)


def greedy_gamma(kernel, noise_variance, decision_set, T, conditioned_on=None,
                 repeats=False):
    """
    Greedy surrogate for the maximum information gain of T observations.

    Each step adds the decision of highest posterior variance given the
    conditioning points and all earlier picks; ties go to the lowest index.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    decision_set : DecisionSet
        Candidate decisions.
    T : int
        Number of greedy steps.
    conditioned_on : array_like, optional
        Points with observations known beforehand. Default is None.
    repeats : bool
        Whether a decision may be picked more than once. Default is False,
        which requires ``T <= len(decision_set)``.

    Returns
    -------
    InfoGainReport
    """
    if T < 0:
        raise ValueError(f'T must be non-negative, got {T}.')
    if not repeats and T > len(decision_set):
        raise ValueError(f'Cannot pick {T} distinct decisions out of '
                         f'{len(decision_set)}.')
    posterior = GpPosterior(kernel, noise_variance, candidates=decision_set)
    if conditioned_on is None:
        conditioned_on = np.empty((0, kernel.dimension))
    conditioned_on = check_dimension(conditioned_on, kernel.dimension,
                                     'conditioned_on')
    for x in conditioned_on:
        posterior.hallucinate(x)
    indices, gains = _greedy(posterior, T, repeats)
    gain = float(np.sum(gains))
    return InfoGainReport(indices, gain, conditioned_on, gains,
                          gain * GREEDY_FACTOR)


def exact_gamma(kernel, noise_variance, decision_set, T, conditioned_on=None,
                repeats=False):
    """
    Maximum information gain of T observations by enumeration.

    Only feasible for small decision sets. Gains grow with the observation
    set, so only sets of size exactly T are enumerated.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    decision_set : DecisionSet
        Candidate decisions.
    T : int
        Number of observations.
    conditioned_on : array_like, optional
        Points with observations known beforehand. Default is None.
    repeats : bool
        Whether to enumerate multisets. Default is False.

    Returns
    -------
    gamma : float
        The maximum gain.
    best : tuple of int
        A maximizing index combination, the first one found.
    """
    if conditioned_on is None:
        conditioned_on = np.empty((0, kernel.dimension))
    if repeats:
        combinations = itertools.combinations_with_replacement(
            range(len(decision_set)), T)
    else:
        combinations = itertools.combinations(range(len(decision_set)), T)
    gamma, best = -np.inf, ()
    for combination in combinations:
        gain = conditional_mutual_information(
            kernel, noise_variance, decision_set.points[list(combination)],
            conditioned_on)
        if gain > gamma:
            gamma, best = gain, combination
    return max(gamma, 0.0), best


def check_lemma1(kernel, noise_variance, observed, pending, x):
    """
    Compare the standard deviation shrinkage by pending points to its bound.

    The ratio of the standard deviation at `x` given `observed` only to the
    one given `observed` and `pending` is bounded by
    ``exp(I(f; y_pending | y_observed))``.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    observed : array_like
        Points with delivered outcomes.
    pending : array_like
        Points without outcomes yet.
    x : array_like
        Query point.

    Returns
    -------
    Lemma1Check
        ``ratio``, ``bound``, ``holds`` (ratio <= bound + 1e-9), and
        ``degenerate``, which is True if the variance given all points is
        below the roundoff floor. The ratio is nan then and holds is None.
    """
    observed = check_dimension(observed, kernel.dimension, 'observed')
    pending = check_dimension(pending, kernel.dimension, 'pending')
    posterior = GpPosterior(kernel, noise_variance)
    for point in observed:
        posterior.hallucinate(point)
    var_fb = posterior.variance(x)[0]
    for point in pending:
        posterior.hallucinate(point)
    var_now = posterior.variance(x)[0]
    bound = float(np.exp(conditional_mutual_information(
        kernel, noise_variance, pending, observed)))
    if var_now <= NEGATIVE_VARIANCE_TOL * kernel.signal_variance:
        return Lemma1Check(np.nan, bound, None, True)
    ratio = float(np.sqrt(var_fb / var_now))
    return Lemma1Check(ratio, bound, ratio <= bound + 1e-9, False)


def _initialization_gains(kernel, noise_variance, decision_set, t_init):
    posterior = GpPosterior(kernel, noise_variance, candidates=decision_set)
    indices, gains = _greedy(posterior, t_init, repeats=True)
    return indices, gains


def check_lemma2(kernel, noise_variance, decision_set, B, t_init):
    """
    Check the batch information bound after uncertainty sampling.

    Compares the greedy gain of B - 1 further observations after an
    uncertainty sampling initialization of size `t_init` (left-hand side)
    with ``(B - 1) / t_init`` times the gain of the initialization itself
    (right-hand side). The left-hand side is replaced by an upper bound on
    its true maximum, so a pass is meaningful despite the greedy surrogate.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    decision_set : DecisionSet
        Candidate decisions.
    B : int
        Batch size, B >= 2.
    t_init : int
        Initialization size, t_init >= 1.

    Returns
    -------
    Lemma2Check
        ``lhs`` greedy value, ``lhs_upper`` its upper bound
        ``min(G e / (e - 1), (B - 1) g_1)`` with g_1 the largest single
        gain after initialization, ``rhs``, and ``holds``.
    """
    if B < 2 or t_init < 1:
        raise ValueError(f'Need B >= 2 and t_init >= 1, got B = {B}, '
                         f't_init = {t_init}.')
    init_indices, init_gains = _initialization_gains(
        kernel, noise_variance, decision_set, t_init)
    report = greedy_gamma(kernel, noise_variance, decision_set, B - 1,
                          conditioned_on=decision_set.points[init_indices],
                          repeats=True)
    lhs_upper = min(report.upper_bracket,
                    (B - 1) * report.greedy_curve[0])
    rhs = (B - 1) / t_init * float(np.sum(init_gains))
    return Lemma2Check(report.gain, lhs_upper, rhs, lhs_upper <= rhs + 1e-9)


def check_lemma2_exact(kernel, noise_variance, decision_set, B, t_init):
    """
    Check the batch information bound with enumerated maxima.

    Both sides use :func:`exact_gamma` over multisets; the initialization is
    the uncertainty sampling sequence of size `t_init`.

    Returns
    -------
    Lemma2Check
        ``lhs`` and ``lhs_upper`` are both the exact left-hand side.
    """
    if B < 2 or t_init < 1:
        raise ValueError(f'Need B >= 2 and t_init >= 1, got B = {B}, '
                         f't_init = {t_init}.')
    init_indices, _ = _initialization_gains(kernel, noise_variance,
                                            decision_set, t_init)
    lhs, _ = exact_gamma(kernel, noise_variance, decision_set, B - 1,
                         conditioned_on=decision_set.points[init_indices],
                         repeats=True)
    gamma, _ = exact_gamma(kernel, noise_variance, decision_set, t_init,
                           repeats=True)
    rhs = (B - 1) / t_init * gamma
    return Lemma2Check(lhs, lhs, rhs, lhs <= rhs + 1e-9)


def bound_C(kernel, noise_variance, decision_set, B, mode='raw', t_init=0):
    """
    Upper bound C on the information gained within one batch.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    noise_variance : float
        Observation noise variance.
    decision_set : DecisionSet
        Candidate decisions.
    B : int
        Batch size bound.
    mode : {'raw', 'initialized'}
        ``'raw'`` bounds by the greedy upper bracket of gamma_{B-1};
        ``'initialized'`` by ``(B - 1) / t_init`` times the upper bracket of
        gamma_{t_init}. Default is ``'raw'``.
    t_init : int
        Initialization size, needed for mode ``'initialized'``.

    Returns
    -------
    float
        Non-negative bound, 0 for B = 1.
    """
    if mode not in ('raw', 'initialized'):
        raise ValueError(f"Unknown mode '{mode}', use 'raw' or "
                         f"'initialized'.")
    if B == 1:
        return 0.0
    if mode == 'raw':
        report = greedy_gamma(kernel, noise_variance, decision_set, B - 1,
                              repeats=True)
        return report.upper_bracket
    if t_init < 1:
        raise ValueError(f"Mode 'initialized' needs t_init >= 1, got "
                         f"{t_init}.")
    report = greedy_gamma(kernel, noise_variance, decision_set, t_init,
                          repeats=True)
    return (B - 1) / t_init * report.upper_bracket


def information_report(experiment, T=None):
    """
    Greedy information gain curve for the experiment's decision set.

    Parameters
    ----------
    experiment : gpbucb.models.Experiment or child class instance
        Experiment with a decision set, kernel and noise variance.
    T : int, optional
        Number of greedy steps. Default is the batch size bound minus one,
        or one if that is zero.

    Returns
    -------
    dict
        Keys ``indices``, ``greedy_curve``, ``cumulative_gain``,
        ``upper_bracket``.
    """
    if T is None:
        T = max(experiment.schedule.B - 1, 1)
    params = dict(points=experiment.decision_set.points,
                  kernel_params=experiment.kernel.to_dict(),
                  noise_variance=experiment.noise_variance,
                  T=int(T))
    return _cache(experiment, _information_report, params,
                  _prefix + 'information_report')


def _information_report(points, kernel_params, noise_variance, T):
    """
    Greedy information gain curve as plain dict.

    Parameters
    ----------
    points : np.ndarray
        Decision set of shape (n, d).
    kernel_params : dict
        Keyword arguments of :class:`gpbucb.kernels.KernelSpec`.
    noise_variance : float
        Observation noise variance.
    T : int
        Number of greedy steps, repeats allowed.

    Returns
    -------
    dict
    """
    kernel = kernels.KernelSpec(**kernel_params)
    report = greedy_gamma(kernel, noise_variance,
                          kernels.DecisionSet(points), T, repeats=True)
    cumulative = np.cumsum(report.greedy_curve)
    return {'indices': np.array(report.indices, dtype=int),
            'greedy_curve': report.greedy_curve,
            'cumulative_gain': cumulative,
            'upper_bracket': cumulative * GREEDY_FACTOR}


def conditional_information_bound(experiment, mode=None, t_init=None):
    """
    Bound C for the experiment, stored in its results.

    Parameters
    ----------
    experiment : gpbucb.models.Experiment or child class instance
        Experiment with a decision set, kernel, schedule and noise variance.
    mode : {None, 'raw', 'initialized'}
        Default is ``'initialized'`` if the experiment has an initialization
        stage and ``'raw'`` otherwise.
    t_init : int, optional
        Initialization size; default is the experiment's.

    Returns
    -------
    float
    """
    if t_init is None:
        t_init = experiment.t_init
    if mode is None:
        mode = 'initialized' if t_init > 0 else 'raw'
    params = dict(points=experiment.decision_set.points,
                  kernel_params=experiment.kernel.to_dict(),
                  noise_variance=experiment.noise_variance,
                  B=experiment.base_schedule.B,
                  mode=mode,
                  t_init=int(t_init))
    return _cache(experiment, _conditional_information_bound, params,
                  _prefix + 'C')


def _conditional_information_bound(points, kernel_params, noise_variance, B,
                                   mode, t_init):
    """Parameter version of :func:`conditional_information_bound`."""
    C = bound_C(kernels.KernelSpec(**kernel_params), noise_variance,
                kernels.DecisionSet(points), B, mode=mode, t_init=t_init)
    log.info('Bound on within-batch information gain C = %.4g (%s).',
             C, mode)
    return C
