"""
Bandit simulations with regret bookkeeping.

A payoff instance fixes the expected payoff of every decision, either drawn
from the GP prior or read from a table. A trial runs one selection rule for
T rounds against an instance, with outcomes ``y_t = f(x_t) + noise`` that are
delivered according to a feedback schedule. An experiment repeats trials and
aggregates the regret curves.

Random numbers are derived from one master seed: stream 0 of a trial draws
the payoff function, stream 1 the observation noise, see
:func:`gpbucb.utils.trial_rng`.

Types
*****

.. autosummary::
    :toctree: _toctree/harness/

    PayoffInstance
    TrialTrace

Instances
*********

.. autosummary::
    :toctree: _toctree/harness/

    sample_gp_instance
    load_tabular_instance
    save_tabular_instance

Simulations
***********

.. autosummary::
    :toctree: _toctree/harness/

    run_trial
    run_two_stage
    run_experiment
    aggregate_traces

"""

import logging
import os
import time

import numpy as np
from scipy.linalg import cholesky, LinAlgError

from . import feedback
from . import infogain
from . import input_output as io
from . import kernels
from .policies import POLICIES, PolicyState, select_two_stage
from .utils import (NumericalError,
                    trial_rng,
                    _cache)


log = logging.getLogger(__name__)

_prefix = 'harness.'

NOISE_MODES = ('gaussian', 'bounded')
# jitter relative to the signal variance when factorizing K(D, D)
SAMPLING_JITTERS = (1e-10, 1e-8, 1e-6)

TRIAL_COLUMNS = ['trial', 't', 'decision_index', 'y', 'r_t', 'R_t',
                 'min_regret', 'recompute_count']
AGGREGATE_COLUMNS = ['t', 'mean_avg_regret', 'se_avg_regret',
                     'mean_min_regret', 'se_min_regret']
TIMING_COLUMNS = ['trial', 'elapsed', 'recompute_total']


class PayoffInstance():
    """
    Decision set together with the expected payoff of every decision.

    Parameters
    ----------
    decision_set : DecisionSet
        Candidate decisions.
    payoffs : array_like
        Expected payoff f(x_i) for every decision i.

    Attributes
    ----------
    optimum_value : float
        Largest payoff f(x*).
    optimum_indices : np.ndarray
        All indices attaining the optimum.
    """

    def __init__(self, decision_set, payoffs):
        payoffs = np.array(payoffs, dtype=float)
        if payoffs.shape != (len(decision_set),):
            raise ValueError(f'Need one payoff per decision, got shape '
                             f'{payoffs.shape} for {len(decision_set)} '
                             f'decisions.')
        if not np.all(np.isfinite(payoffs)):
            raise ValueError('Payoffs must be finite.')
        payoffs.setflags(write=False)
        self.decision_set = decision_set
        self.payoffs = payoffs
        self.optimum_value = float(np.max(payoffs))
        self.optimum_indices = np.flatnonzero(payoffs == self.optimum_value)

    def regret(self, index):
        """Instantaneous regret f(x*) - f(x_index)."""
        return self.optimum_value - self.payoffs[index]


class TrialTrace():
    """
    Per-round record of one trial.

    Parameters
    ----------
    decisions : array_like of int
        Decision index of each round.
    outcomes : array_like
        Noisy outcome of each round.
    regrets : array_like
        Instantaneous regret r_t of each round.
    recompute_counts : array_like of int
        Variances evaluated by the selection of each round.
    seed : int
        Master seed.
    trial : int
        Trial index.
    elapsed : float
        Wall time of the trial in seconds.
    """

    def __init__(self, decisions, outcomes, regrets, recompute_counts, seed,
                 trial=0, elapsed=0.0):
        self.decisions = np.asarray(decisions, dtype=int)
        self.outcomes = np.asarray(outcomes, dtype=float)
        self.regrets = np.asarray(regrets, dtype=float)
        self.recompute_counts = np.asarray(recompute_counts, dtype=int)
        self.seed = seed
        self.trial = trial
        self.elapsed = float(elapsed)

    @property
    def T(self):
        return len(self.decisions)

    @property
    def cumulative_regret(self):
        """R_t for t = 1..T."""
        return np.cumsum(self.regrets)

    @property
    def average_regret(self):
        """R_t / t for t = 1..T."""
        return self.cumulative_regret / np.arange(1, self.T + 1)

    @property
    def min_regret(self):
        """Smallest instantaneous regret up to round t."""
        return np.minimum.accumulate(self.regrets)

    def rows(self):
        """Rows of the per-trial table."""
        R = self.cumulative_regret
        min_regret = self.min_regret
        for k in range(self.T):
            yield {'trial': self.trial,
                   't': k + 1,
                   'decision_index': int(self.decisions[k]),
                   'y': float(self.outcomes[k]),
                   'r_t': float(self.regrets[k]),
                   'R_t': float(R[k]),
                   'min_regret': float(min_regret[k]),
                   'recompute_count': int(self.recompute_counts[k])}

    def to_dict(self):
        return {'decisions': self.decisions,
                'outcomes': self.outcomes,
                'regrets': self.regrets,
                'recompute_counts': self.recompute_counts,
                'seed': self.seed,
                'trial': self.trial,
                'elapsed': self.elapsed}


def sample_gp_instance(kernel, decision_set, seed, trial=0):
    """
    Draw a payoff function from the zero mean GP prior.

    The payoffs are ``L z`` with L the Cholesky factor of
    ``K(D, D) + jitter * I`` and z a standard normal vector from stream 0 of
    the trial. The smallest working jitter of 1e-10, 1e-8 and 1e-6 times the
    signal variance is used.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance.
    decision_set : DecisionSet
        Candidate decisions.
    seed : int
        Master seed.
    trial : int
        Trial index. Default is 0.

    Returns
    -------
    PayoffInstance

    Raises
    ------
    NumericalError
        If the kernel matrix cannot be factorized.
    """
    K = kernels.evaluate_matrix(kernel, decision_set.points)
    n = len(decision_set)
    for rel_jitter in SAMPLING_JITTERS:
        jitter = rel_jitter * kernel.signal_variance
        try:
            L = cholesky(K + jitter * np.eye(n), lower=True,
                         check_finite=False)
            break
        except LinAlgError:
            continue
    else:
        raise NumericalError(
            f'Cholesky factorization of the {n}x{n} prior covariance failed '
            f'with jitter up to {jitter:.1e}.')
    z = trial_rng(seed, trial, 0).standard_normal(n)
    return PayoffInstance(decision_set, L @ z)


def load_tabular_instance(path, payoff_column, feature_columns=None):
    """
    Read a payoff instance from a comma separated table.

    Parameters
    ----------
    path : str
        File with a header row and numeric cells.
    payoff_column : str
        Column of expected payoffs.
    feature_columns : list of str, optional
        Columns forming the decisions. Default is all other columns.

    Returns
    -------
    PayoffInstance

    Raises
    ------
    ValueError
        On missing columns, non-numeric cells, or duplicate decisions.
    """
    header, data = io.read_table(path)
    if feature_columns is None:
        feature_columns = [name for name in header if name != payoff_column]
    missing = [name for name in [payoff_column] + list(feature_columns)
               if name not in header]
    if missing:
        raise ValueError(f"{path}: missing columns {', '.join(missing)}.")
    if len(data) == 0:
        raise ValueError(f'{path} has no data rows.')
    features = data[:, [header.index(name) for name in feature_columns]]
    payoffs = data[:, header.index(payoff_column)]

    first_row = {}
    for row, point in enumerate(features, start=1):
        key = tuple(point)
        if key in first_row:
            raise ValueError(f'{path}: data rows {first_row[key]} and {row} '
                             f'have identical features.')
        first_row[key] = row
    return PayoffInstance(kernels.DecisionSet(features), payoffs)


def save_tabular_instance(path, instance, payoff_column='payoff',
                          feature_columns=None):
    """
    Write a payoff instance as table readable by :func:`load_tabular_instance`.

    Parameters
    ----------
    path : str
        Output file name.
    instance : PayoffInstance
        Instance to be written.
    payoff_column : str
        Name of the payoff column. Default is ``'payoff'``.
    feature_columns : list of str, optional
        Names of the feature columns. Default is ``x0, x1, ...``.
    """
    d = instance.decision_set.dimension
    if feature_columns is None:
        feature_columns = [f'x{j}' for j in range(d)]
    columns = list(feature_columns) + [payoff_column]
    rows = ({**dict(zip(feature_columns, point.tolist())),
             payoff_column: float(payoff)}
            for point, payoff in zip(instance.decision_set.points,
                                     instance.payoffs))
    io.write_csv(path, columns, rows)


def _noise(noise, noise_variance, T, seed, trial):
    rng = trial_rng(seed, trial, 1)
    if noise == 'gaussian':
        return np.sqrt(noise_variance) * rng.standard_normal(T)
    elif noise == 'bounded':
        sigma = np.sqrt(noise_variance)
        return rng.uniform(-sigma, sigma, T)
    raise ValueError(f"Unknown noise mode '{noise}'. Valid modes are "
                     f"{', '.join(NOISE_MODES)}.")


def _check_unpoisoned(state, index):
    """Raise if an undelivered outcome reached the selection of this round."""
    for round_, _, _ in state.pending:
        if not np.isnan(state.outcomes[round_ - 1]):
            raise NumericalError(f'Outcome of pending round {round_} is '
                                 f'visible to the rule.')
    if not 0 <= index < len(state.decision_set):
        raise NumericalError(f'Decision index {index} out of range.')
    if not np.all(np.isfinite(state.posterior.candidate_means())):
        raise NumericalError('Posterior mean is not finite, an undelivered '
                             'outcome was used.')


def run_trial(instance, policy, kernel, schedule, confidence, T,
              noise_variance, seed, trial=0, noise='gaussian', poison=False):
    """
    Run one selection rule for T rounds.

    After the decision of round t the outcomes of rounds fb[t] + 1 .. fb[t+1]
    are delivered to the rule.

    Parameters
    ----------
    instance : PayoffInstance
        Payoffs of the decisions.
    policy : [str | callable]
        Name in :data:`gpbucb.policies.POLICIES` or selection function.
    kernel : KernelSpec
        Prior covariance used by the rule.
    schedule : FeedbackSchedule
        Feedback schedule.
    confidence : ConfidenceParams
        Constants of the exploration weights.
    T : int
        Number of rounds.
    noise_variance : float
        Observation noise variance.
    seed : int
        Master seed.
    trial : int
        Trial index, selects the noise stream. Default is 0.
    noise : {'gaussian', 'bounded'}
        Noise distribution, Gaussian or uniform on [-sigma_n, sigma_n].
    poison : bool
        If True, check after every selection that the outcome ledger of
        the state is nan for all pending rounds and that the posterior
        mean is finite, so any use of an undelivered outcome fails with
        NumericalError. Default is False.

    Returns
    -------
    TrialTrace

    Raises
    ------
    NumericalError
        If the posterior breaks down, naming trial and round.
    """
    if T < 1:
        raise ValueError(f'T must be at least 1, got {T}.')
    if schedule.length is not None and T > schedule.length:
        raise ValueError(f'The schedule covers {schedule.length} rounds, '
                         f'T = {T} requested.')
    select = POLICIES[policy] if isinstance(policy, str) else policy
    state = PolicyState(instance.decision_set, kernel, noise_variance,
                        schedule, confidence)
    noise_values = _noise(noise, noise_variance, T, seed, trial)

    decisions = np.zeros(T, dtype=int)
    outcomes = np.zeros(T)
    regrets = np.zeros(T)
    recompute_counts = np.zeros(T, dtype=int)
    start = time.perf_counter()
    for t in range(1, T + 1):
        try:
            before = state.recompute_count
            index = select(state)
            recompute_counts[t - 1] = state.recompute_count - before
            if poison:
                _check_unpoisoned(state, index)
            decisions[t - 1] = index
            outcomes[t - 1] = instance.payoffs[index] + noise_values[t - 1]
            regrets[t - 1] = instance.regret(index)
            if t == T:
                break
            rounds = np.array(feedback.delivered_rounds(schedule, t),
                              dtype=int)
            state.deliver(outcomes[rounds - 1])
        except NumericalError as err:
            raise NumericalError(f'Trial {trial}, round {t}: {err}') from err
    elapsed = time.perf_counter() - start
    return TrialTrace(decisions, outcomes, regrets, recompute_counts, seed,
                      trial, elapsed=elapsed)


def run_two_stage(instance, kernel, schedule, confidence, T, noise_variance,
                  seed, t_init, trial=0, noise='gaussian', C=None):
    """
    Uncertainty sampling for t_init rounds, then GP-BUCB.

    No feedback arrives during the first stage; all its outcomes are
    delivered after round t_init. The second stage follows `schedule`.

    Parameters
    ----------
    instance : PayoffInstance
        Payoffs of the decisions.
    kernel : KernelSpec
        Prior covariance.
    schedule : FeedbackSchedule
        Schedule of the second stage.
    confidence : ConfidenceParams
        Constants of the exploration weights.
    T : int
        Number of rounds, T >= t_init.
    noise_variance : float
        Observation noise variance.
    seed : int
        Master seed.
    t_init : int
        Size of the initialization stage.
    trial : int
        Trial index. Default is 0.
    noise : {'gaussian', 'bounded'}
        Noise distribution.
    C : float, optional
        Within-batch information bound. Default is the bound after
        initialization of size t_init, or the plain bound for t_init = 0.

    Returns
    -------
    TrialTrace
    """
    if T < t_init:
        raise ValueError(f'T = {T} is shorter than the initialization '
                         f'stage t_init = {t_init}.')
    if C is None:
        mode = 'initialized' if t_init > 0 else 'raw'
        C = infogain.bound_C(kernel, noise_variance, instance.decision_set,
                             schedule.B, mode=mode, t_init=t_init)
    two_stage = feedback.FeedbackSchedule.initialized(schedule, t_init)
    return run_trial(instance, select_two_stage, kernel, two_stage,
                     confidence.with_C(C), T, noise_variance, seed,
                     trial=trial, noise=noise)


def aggregate_traces(traces):
    """
    Mean and standard error of the regret curves over trials.

    Parameters
    ----------
    traces : list of TrialTrace
        Completed trials with equal horizon.

    Returns
    -------
    dict
        Arrays ``t``, ``mean_avg_regret``, ``se_avg_regret``,
        ``mean_min_regret``, ``se_min_regret``; the standard errors are
        zero for a single trial.
    """
    average = np.array([trace.average_regret for trace in traces])
    minimum = np.array([trace.min_regret for trace in traces])
    n = len(traces)

    def standard_error(values):
        if n < 2:
            return np.zeros(values.shape[1])
        return np.std(values, axis=0, ddof=1) / np.sqrt(n)

    return {'t': np.arange(1, average.shape[1] + 1),
            'mean_avg_regret': np.mean(average, axis=0),
            'se_avg_regret': standard_error(average),
            'mean_min_regret': np.mean(minimum, axis=0),
            'se_min_regret': standard_error(minimum)}


def _run_trials(experiment):
    traces = []
    failures = []
    for trial in range(experiment.trials):
        try:
            instance = experiment.instance(trial)
            traces.append(run_trial(
                instance, experiment.policy, experiment.kernel,
                experiment.schedule, experiment.confidence,
                experiment.horizon, experiment.noise_variance,
                experiment.seed, trial=trial, noise=experiment.noise))
        except (NumericalError, RuntimeError) as err:
            log.warning('Trial %d failed: %s', trial, err)
            failures.append(f'trial {trial}: {err}')
    return traces, failures


def run_experiment(experiment, output_dir=None):
    """
    Run all trials of an experiment and write the result tables.

    Writes ``trials.csv`` (one row per trial and round), ``aggregate.csv``
    (one row per round), ``timing.csv`` (wall time and recomputations per
    trial) and ``summary.yaml`` to `output_dir`. Failed trials
    are logged, listed in the summary, and left out of the aggregate.

    Parameters
    ----------
    experiment : gpbucb.models.Experiment or child class instance
        Fully specified experiment.
    output_dir : str, optional
        Output directory, created if needed. Default is the experiment's.

    Returns
    -------
    dict
        The aggregate, see :func:`aggregate_traces`; empty if every trial
        failed.
    """
    if output_dir is None:
        output_dir = experiment.output_dir
    log.info('Running %d trials of %s for %d rounds.', experiment.trials,
             experiment.policy, experiment.horizon)

    def trials(config_hash):
        traces, failures = _run_trials(experiment)
        aggregate = aggregate_traces(traces) if traces else {}
        return ({trace.trial: trace.to_dict() for trace in traces},
                aggregate, failures)

    traces, aggregate, failures = _cache(
        experiment, trials, {'config_hash': experiment.config_hash},
        [_prefix + 'traces', _prefix + 'aggregate', _prefix + 'failures'])

    os.makedirs(output_dir, exist_ok=True)
    trace_objects = [TrialTrace(**traces[k]) for k in sorted(traces)]
    io.write_csv(os.path.join(output_dir, 'trials.csv'), TRIAL_COLUMNS,
                 (row for trace in trace_objects for row in trace.rows()))
    if aggregate:
        rows = ({key: aggregate[key][k] for key in AGGREGATE_COLUMNS}
                for k in range(len(aggregate['t'])))
    else:
        rows = ()
    io.write_csv(os.path.join(output_dir, 'aggregate.csv'),
                 AGGREGATE_COLUMNS, rows)
    # wall times vary between runs, trials.csv stays reproducible
    io.write_csv(os.path.join(output_dir, 'timing.csv'), TIMING_COLUMNS,
                 ({'trial': trace.trial,
                   'elapsed': trace.elapsed,
                   'recompute_total': int(trace.recompute_counts.sum())}
                  for trace in trace_objects))

    summary = {'policy': experiment.policy,
               'horizon': experiment.horizon,
               'trials': experiment.trials,
               'trials_completed': len(trace_objects),
               # a single failure reloaded from h5 is a plain string
               'failures': np.atleast_1d(failures).tolist(),
               'seed': experiment.seed,
               'config_hash': experiment.config_hash,
               'C': experiment.confidence.C,
               'recompute_total': int(sum(trace.recompute_counts.sum()
                                          for trace in trace_objects)),
               'elapsed_total': float(sum(trace.elapsed
                                          for trace in trace_objects))}
    if aggregate:
        summary['final_mean_avg_regret'] = float(
            aggregate['mean_avg_regret'][-1])
        summary['final_mean_min_regret'] = float(
            aggregate['mean_min_regret'][-1])
    io.save_yaml(os.path.join(output_dir, 'summary.yaml'), summary)
    log.info('Finished %d of %d trials, results in %s.', len(trace_objects),
             experiment.trials, output_dir)
    return aggregate
