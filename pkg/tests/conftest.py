"""
Special pytest module containing defs of pytest fixtures and parametrizations.

Fixtures:
---------
unit_config_path: path to yaml configs for unit tests.
rbf, matern, linear: standard kernels on one input dimension.
grid: 25 points evenly spaced on [0, 1].
confidence: finite regime confidence params for `grid`.
config: minimal synthetic experiment configuration as dict.
experiment: Synthetic experiment built from `config`.
empty_experiment: Experiment object with no parameters.
std_params: set of standard params needed by requesting tested function.

Parametrization Schemes:
------------------------
pos_keys: parametrizes all pos params needed by requesting tested function.
"""

import copy
from inspect import signature

import pytest
import numpy as np

import gpbucb


# path to experiment configuration files
config_path = 'tests/fixtures/unit/config/'

# list of all always positive arguments
all_pos_keys = ['signal_variance',
                'lengthscales',
                'noise_variance',
                'B',
                'eta',
                'nu',
                'd',
                ]

minimal_config = {
    'instance': {'source': 'gp-sample'},
    'decision_set': {'lower': [0.0], 'upper': [1.0], 'resolution': 25},
    'kernel': {'family': 'rbf', 'lengthscales': [0.2]},
    'policy': 'gp-bucb',
    'schedule': {'kind': 'batch', 'B': 3},
    'confidence': {'C': 0.5},
    'horizon': 12,
    'trials': 2,
    'noise_variance': 0.01,
    'seed': 7,
}


def get_required_keys(func, all_keys):
    """Checks arguments of func and returns corresponding parameters."""
    arg_keys = list(signature(func).parameters)
    required_keys = [key for key in all_keys if key in arg_keys]
    return required_keys


def get_required_params(func, all_params):
    """Checks arguments of func and returns corresponding parameters."""
    required_keys = list(signature(func).parameters)
    required_params = {k: v for k, v in all_params.items()
                       if k in required_keys}
    return required_params


@pytest.fixture
def unit_config_path():
    """Path to yaml configs for unit tests."""
    return config_path


@pytest.fixture
def rbf():
    return gpbucb.kernels.KernelSpec('rbf', [0.2])


@pytest.fixture
def matern():
    return gpbucb.kernels.KernelSpec('matern', [0.2], smoothness=2.5)


@pytest.fixture
def linear():
    return gpbucb.kernels.KernelSpec('linear', [1.0])


@pytest.fixture
def grid():
    """25 points evenly spaced on [0, 1]."""
    return gpbucb.kernels.DecisionSet.grid([0.0], [1.0], 25)


@pytest.fixture
def confidence(grid):
    return gpbucb.confidence.ConfidenceParams('finite', 0.1, C=0.5,
                                              n_decisions=len(grid))


@pytest.fixture
def config():
    """Minimal synthetic experiment configuration."""
    return copy.deepcopy(minimal_config)


@pytest.fixture
def experiment(config):
    """Synthetic experiment built from the minimal configuration."""
    return gpbucb.models.Synthetic(config)


@pytest.fixture
def empty_experiment():
    """Experiment object with no parameters."""
    return gpbucb.models.Experiment()


@pytest.fixture
def all_std_params():
    """Standard parameters of the parameter functions."""
    return dict(family='matern',
                lengthscales=np.array([0.2]),
                signal_variance=1.0,
                smoothness=2.5,
                kernel=gpbucb.kernels.KernelSpec('matern', [0.2]),
                noise_variance=0.01,
                B=5,
                eta=1.0,
                d=1.0,
                nu=1.0,
                epsilon=0.5)


@pytest.fixture
def std_params(request, all_std_params):
    """
    Returns set of standard params needed by requesting tested function.

    For using this fixture, the function test class needs to have a class
    attribute `func`, which is the tested function as a staticmethod.
    """
    return get_required_params(request.cls.func, all_std_params)


def pytest_generate_tests(metafunc):
    """
    Special pytest function defining parametrizations for certain fixtures.

    `pos_keys`:
    If a test requires all positive keys contained in the list of arguments of
    the tested function, the corresponding function test class needs to have a
    class attribute `func`, which is the tested function as a staticmethod.
    The pos keys are tested one after each other as a parametrization.
    """
    # check if requesting test class has class attribute func
    if hasattr(metafunc.cls, 'func'):
        func = metafunc.cls.func
    # if it does not, just return and don't parametrize
    else:
        return None

    if "pos_keys" in metafunc.fixturenames:
        pos_keys = get_required_keys(func, all_pos_keys)
        # define parametrization
        metafunc.parametrize("pos_keys", pos_keys)
