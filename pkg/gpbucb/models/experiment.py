"""
Module that contains the basic Experiment class and config validation.
"""
import copy
import numbers
import os

import numpy as np

from .. import confidence as conf
from .. import feedback
from .. import infogain
from .. import input_output as io
from .. import kernels
from ..policies import POLICIES, t_init_size
from ..utils import ConfigurationError


TABLE_KEYS = {
    'instance': ('source', 'path', 'payoff_column', 'feature_columns',
                 'redraw'),
    'decision_set': ('lower', 'upper', 'resolution'),
    'kernel': ('family', 'lengthscales', 'signal_variance', 'smoothness'),
    'schedule': ('kind', 'B', 'values'),
    'confidence': ('regime', 'delta', 'C', 'd', 'l', 'a', 'b', 'M'),
    'initialization': ('t_init', 'eta', 'd', 'nu', 'epsilon'),
}
SCALAR_KEYS = ('policy', 'horizon', 'trials', 'noise_variance', 'noise',
               'seed', 'output_dir')
SOURCES = ('gp-sample', 'tabular')
SCHEDULE_KINDS = ('sequential', 'batch', 'delay', 'custom')

DEFAULTS = {
    'noise': 'gaussian',
    'trials': 1,
    'seed': 0,
    'output_dir': 'results',
    'schedule': {'kind': 'sequential'},
    'confidence': {'regime': 'finite', 'delta': 0.1, 'C': 'auto'},
    'kernel': {'signal_variance': 1.0, 'smoothness': 2.5},
    'initialization': {},
}


def _is_int(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _is_real(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def validate_config(config):
    """
    Check an experiment configuration and fill in defaults.

    Parameters
    ----------
    config : dict
        Nested configuration as read from yaml.

    Returns
    -------
    dict
        Deep copy of `config` with defaults filled in.

    Raises
    ------
    ConfigurationError
        Listing every problem found.
    """
    errors = []
    config = copy.deepcopy(config)

    for key in config:
        if key not in TABLE_KEYS and key not in SCALAR_KEYS:
            errors.append(f"Unknown configuration key '{key}'.")
    for key, allowed in TABLE_KEYS.items():
        table = config.get(key, {})
        if not isinstance(table, dict):
            errors.append(f"'{key}' must be a table of keys.")
            config[key] = {}
            continue
        for sub_key in table:
            if sub_key not in allowed:
                errors.append(f"Unknown configuration key '{key}.{sub_key}'.")

    for key in ('instance', 'kernel', 'policy', 'horizon', 'noise_variance'):
        if key not in config:
            errors.append(f"Missing required configuration key '{key}'.")

    for key, default in DEFAULTS.items():
        if isinstance(default, dict):
            table = dict(default)
            table.update(config.get(key) or {})
            config[key] = table
        else:
            config.setdefault(key, default)

    policy = config.get('policy')
    if policy is not None and policy not in POLICIES:
        errors.append(f"Unknown policy '{policy}'. Valid policies are "
                      f"{', '.join(POLICIES)}.")
    for key in ('horizon', 'trials'):
        value = config.get(key)
        if value is not None and not (_is_int(value) and value >= 1):
            errors.append(f'{key} must be an integer >= 1, got {value!r}.')
    value = config.get('noise_variance')
    if value is not None and not (_is_real(value) and value > 0):
        errors.append(f'noise_variance must be > 0, got {value!r}.')
    if config['noise'] not in ('gaussian', 'bounded'):
        errors.append(f"noise must be 'gaussian' or 'bounded', got "
                      f"{config['noise']!r}.")
    if not (_is_int(config['seed']) and config['seed'] >= 0):
        errors.append(f"seed must be a non-negative integer, got "
                      f"{config['seed']!r}.")

    instance = config.get('instance', {})
    source = instance.get('source')
    if source not in SOURCES:
        errors.append(f"instance.source must be one of {', '.join(SOURCES)}, "
                      f"got {source!r}.")
    elif source == 'tabular':
        path = instance.get('path')
        if path is None:
            errors.append("Tabular instances require 'instance.path'.")
        elif not os.path.isfile(path):
            errors.append(f"instance.path '{path}' does not exist.")
        if 'payoff_column' not in instance:
            errors.append("Tabular instances require "
                          "'instance.payoff_column'.")
        if instance.get('redraw'):
            errors.append('Tabular instances cannot be redrawn.')
        instance['redraw'] = False
        if config.get('decision_set'):
            errors.append("'decision_set' is not used by tabular instances.")
    else:
        instance.setdefault('redraw', True)
        decision_set = config.get('decision_set', {})
        for key in TABLE_KEYS['decision_set']:
            if key not in decision_set:
                errors.append(f"gp-sample instances require "
                              f"'decision_set.{key}'.")

    kernel = config.get('kernel', {})
    if kernel.get('family') not in kernels.FAMILIES:
        errors.append(f"kernel.family must be one of "
                      f"{', '.join(kernels.FAMILIES)}, got "
                      f"{kernel.get('family')!r}.")
    if 'lengthscales' not in kernel:
        errors.append("Missing required configuration key "
                      "'kernel.lengthscales'.")

    schedule = config['schedule']
    kind = schedule.get('kind')
    if kind not in SCHEDULE_KINDS:
        errors.append(f"schedule.kind must be one of "
                      f"{', '.join(SCHEDULE_KINDS)}, got {kind!r}.")
    elif kind in ('batch', 'delay'):
        B = schedule.get('B')
        if not (_is_int(B) and B >= 1):
            errors.append(f'schedule.B must be an integer >= 1, got {B!r}.')
    elif kind == 'custom':
        values = schedule.get('values')
        if not isinstance(values, list):
            errors.append("Custom schedules require a list "
                          "'schedule.values'.")
        elif _is_int(config.get('horizon')) and \
                len(values) < config['horizon']:
            errors.append(f"schedule.values covers {len(values)} rounds, "
                          f"horizon is {config['horizon']}.")
    if policy == 'gp-ucb' and kind != 'sequential':
        errors.append(f"Policy 'gp-ucb' needs a sequential schedule, got "
                      f"'{kind}'.")

    confidence = config['confidence']
    delta = confidence.get('delta')
    if not (_is_real(delta) and 0 < delta < 1):
        errors.append(f'confidence.delta must lie in (0, 1), got {delta!r}.')
    C = confidence.get('C')
    if C != 'auto' and not (_is_real(C) and C >= 0):
        errors.append(f"confidence.C must be 'auto' or >= 0, got {C!r}.")
    regime = confidence.get('regime')
    if regime not in conf.REGIMES:
        errors.append(f"confidence.regime must be one of "
                      f"{', '.join(conf.REGIMES)}, got {regime!r}.")
    elif regime == 'compact':
        for key in ('d', 'l', 'a', 'b'):
            if key not in confidence:
                errors.append(f"Regime 'compact' requires 'confidence.{key}'.")
    elif regime == 'rkhs' and 'M' not in confidence:
        errors.append("Regime 'rkhs' requires 'confidence.M'.")

    initialization = config['initialization']
    if policy == 'gp-bucb-init':
        t_init = initialization.get('t_init')
        if t_init is not None:
            if not (_is_int(t_init) and t_init >= 0):
                errors.append(f'initialization.t_init must be an integer '
                              f'>= 0, got {t_init!r}.')
            elif _is_int(config.get('horizon')) and \
                    t_init > config['horizon']:
                errors.append(f"initialization.t_init = {t_init} exceeds "
                              f"horizon {config['horizon']}.")
        else:
            family = kernel.get('family')
            required = ('nu', 'epsilon') if family == 'matern' \
                else ('eta', 'd')
            for key in required:
                if key not in initialization:
                    errors.append(f"Without 'initialization.t_init', "
                                  f"'initialization.{key}' is required.")
    elif initialization:
        errors.append(f"'initialization' is only used by policy "
                      f"'gp-bucb-init', not by {policy!r}.")

    if errors:
        raise ConfigurationError(errors)
    return config


class Experiment():
    """
    Basic Experiment parent class all other models inherit from.

    This class serves as a container for experiment parameters and results
    calculated using the toolbox. It has convenient saving and loading
    methods. Child classes define how the payoff instances are obtained.

    Parameters
    ----------
    experiment_params : [str | dict], optional
        Path to yaml file containing the experiment configuration or
        dictionary of parameters.
    file : str, optional
        File name of h5 file from which the experiment can be loaded.
        Default is ``None``.

    Attributes
    ----------
    experiment_params : dict
        Validated configuration with defaults filled in.
    experiment_params_yaml : str
        File name of the yaml file that was read in, if any.
    results : dict
        This dictionary stores the most recently calculated results.
    results_hash_dict : dict
        This dictionary stores all calculated results using a unique hash.
        When a quantity that already has been calculated is to be calculated
        another time, the result is retrieved from this dictionary.
    kernel : KernelSpec
        Prior covariance.
    decision_set : DecisionSet
        Candidate decisions.
    base_schedule : FeedbackSchedule
        Configured feedback schedule.
    schedule : FeedbackSchedule
        Schedule used by the policy, including an initialization stage.
    t_init : int
        Size of the initialization stage, 0 without.
    confidence : ConfidenceParams
        Constants of the exploration weights with resolved C.

    Methods
    -------
    save
        Save experiment to h5 file.
    load
        Load experiment from h5 file.
    show
        Returns which results have already been calculated.
    change_parameters
        Change parameters and return experiment with specified parameters.
    copy
        Returns a deep copy of the experiment.
    """

    def __init__(self, experiment_params=None, file=None):

        if file:
            self.load(file)
        else:
            if experiment_params is None:
                self.experiment_params_yaml = ''
                self.experiment_params = {}
            elif isinstance(experiment_params, str):
                self.experiment_params_yaml = experiment_params
                self.experiment_params = io.load_config(experiment_params)
            elif isinstance(experiment_params, dict):
                self.experiment_params_yaml = ''
                self.experiment_params = experiment_params
            else:
                raise ValueError('Invalid value for `experiment_params`.')

            # empty results
            self.results = {}
            self.results_hash_dict = {}

        if self.experiment_params:
            self.experiment_params = validate_config(self.experiment_params)
            self._calculate_dependent_parameters()

    def _calculate_dependent_parameters(self):
        """
        Build the objects the experiment is made of from its parameters.

        Raises
        ------
        ConfigurationError
            If the parameters do not fit together.
        """
        params = self.experiment_params
        for key in SCALAR_KEYS:
            setattr(self, key, params[key])
        self.noise_variance = float(self.noise_variance)
        self.redraw = bool(params['instance']['redraw'])
        self.config_hash = io.create_hash(
            params, [key for key in params if key != 'output_dir'])

        try:
            self.kernel = kernels.KernelSpec(**params['kernel'])
            self.decision_set = self._build_decision_set()
            if self.decision_set.dimension != self.kernel.dimension:
                raise ConfigurationError(
                    f'The kernel has {self.kernel.dimension} lengthscales, '
                    f'the decisions have dimension '
                    f'{self.decision_set.dimension}.')
            self.base_schedule = self._build_schedule()
            self.t_init = self._initialization_size()
            if self.t_init > self.horizon:
                raise ConfigurationError(
                    f'The initialization size {self.t_init} exceeds the '
                    f'horizon {self.horizon}.')
            self.schedule = feedback.FeedbackSchedule.initialized(
                self.base_schedule, self.t_init)
            self.confidence = self._build_confidence()
        except ConfigurationError:
            raise
        except ValueError as err:
            raise ConfigurationError(str(err)) from err

    def _build_decision_set(self):
        """Needs to be implemented for each child class seperately."""
        raise NotImplementedError(
            'The base Experiment has no decision set, use a child class.')

    def instance(self, trial):
        """Payoff instance of a trial; implemented by child classes."""
        raise NotImplementedError(
            'The base Experiment has no payoff instances, use a child class.')

    def _build_schedule(self):
        schedule = self.experiment_params['schedule']
        kind = schedule['kind']
        if kind == 'sequential':
            return feedback.FeedbackSchedule.sequential()
        elif kind == 'batch':
            return feedback.FeedbackSchedule.batch(schedule['B'])
        elif kind == 'delay':
            return feedback.FeedbackSchedule.delay(schedule['B'])
        return feedback.FeedbackSchedule.custom(schedule['values'])

    def _initialization_size(self):
        if self.policy != 'gp-bucb-init':
            return 0
        initialization = self.experiment_params['initialization']
        if initialization.get('t_init') is not None:
            return int(initialization['t_init'])
        constants = {key: initialization[key]
                     for key in ('eta', 'd', 'nu', 'epsilon')
                     if key in initialization}
        t_init, _ = t_init_size(self.kernel.family, self.base_schedule.B,
                                **constants)
        return t_init

    def _build_confidence(self):
        params = dict(self.experiment_params['confidence'])
        regime = params.pop('regime')
        delta = params.pop('delta')
        C = params.pop('C')
        if regime == 'finite':
            params['n_decisions'] = len(self.decision_set)
        elif regime == 'rkhs':
            report = infogain.information_report(self, T=self.horizon)
            params['gamma'] = report['upper_bracket']
        confidence = conf.ConfidenceParams(regime, delta, **params)
        if C == 'auto':
            C = infogain.conditional_information_bound(self)
        return confidence.with_C(C)

    def save(self, file):
        """
        Save experiment to h5 file.

        The experiment's dictionaries (experiment_params, results,
        results_hash_dict) are stored.

        Parameters
        ----------
        file : str
            Output file name.
        """
        io.save_experiment(file, self)

    def load(self, file):
        """
        Load experiment from h5 file.

        The experiment's dictionaries (experiment_params, results,
        results_hash_dict) are loaded.

        Note: The experiment's state is overwritten!

        Parameters
        ----------
        file : str
            Input file name.
        """
        (self.experiment_params,
         self.results,
         self.results_hash_dict) = io.load_experiment(file)
        self.experiment_params_yaml = ''
        self.experiment_params = _restore_lists(self.experiment_params)

    def show(self):
        """Returns which results have already been calculated."""
        return sorted(list(self.results.keys()))

    def change_parameters(self, changed_params={}, overwrite=False):
        """
        Change parameters and return experiment with specified parameters.

        Parameters
        ----------
        changed_params : dict
            Dictionary specifying which parameters should be altered. Tables
            are updated key by key.
        overwrite : bool
            Specifying whether existing experiment should be overwritten.
            Note: This deletes the existing results!

        Returns
        -------
        Experiment object
            New experiment with specified parameters.
        """
        new_params = copy.deepcopy(self.experiment_params)
        for key, value in changed_params.items():
            if isinstance(value, dict) and isinstance(new_params.get(key),
                                                      dict):
                new_params[key].update(value)
            else:
                new_params[key] = value

        if overwrite:
            # results could belong to the old parameters
            self.results = {}
            self.results_hash_dict = {}
            self.experiment_params = validate_config(new_params)
            self._calculate_dependent_parameters()
            return self
        else:
            return self._instantiate(new_params)

    def _instantiate(self, new_params):
        """
        Helper method for change of parameters that instatiates experiment.
        Needs to be implemented for each child class seperately.
        """
        return Experiment(new_params)

    def copy(self):
        """
        Returns a deep copy of the experiment.
        """
        experiment = self.__class__.__new__(self.__class__)
        experiment.__dict__.update(copy.deepcopy(self.__dict__))
        return experiment

    def clear_results(self, results=None):
        """
        Remove calculated results or specified ones from internal dicts.

        Parameters
        ----------
        results : [None | list]
            List of results to be removed. Default is None.
        """
        if results is not None:
            results = np.atleast_1d(results).tolist()
            hashs = []
            for result in results:
                for hash in self.results_hash_dict.keys():
                    if result in self.results_hash_dict[hash]:
                        hashs.append(hash)
                        self.results.pop(result)
            [self.results_hash_dict.pop(hash) for hash in hashs]
        else:
            self.results_hash_dict = {}
            self.results = {}


def _restore_lists(params):
    """Turn arrays read from h5 back into the lists of a yaml config."""
    restored = {}
    for key, value in params.items():
        if isinstance(value, dict):
            restored[key] = _restore_lists(value)
        elif isinstance(value, np.ndarray):
            restored[key] = value.tolist()
        else:
            restored[key] = value
    return restored
