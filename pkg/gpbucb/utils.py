"""
This module contains utility functions, mainly used for internal purposes.

Cache
*****

.. autosummary::
    :toctree: _toctree/utils/

    _cache

Checks
******

.. autosummary::
    :toctree: _toctree/utils/

    check_if_positive
    check_dimension
    _check_positive_params

Exceptions
**********

.. autosummary::
    :toctree: _toctree/utils/

    ConfigurationError
    NumericalError
    NegativeVarianceWarning

Miscellaneous
*************

.. autosummary::
    :toctree: _toctree/utils/

    build_full_arg_list
    trial_rng

"""

import inspect
from functools import wraps
import hashlib

import numpy as np


class ConfigurationError(ValueError):
    """
    Raised if an experiment configuration is invalid.

    Collects all problems found instead of stopping at the first one.

    Parameters
    ----------
    messages : [str | list of str]
        Description(s) of what is wrong.
    """

    def __init__(self, messages):
        self.messages = list(np.atleast_1d(messages).tolist())
        super().__init__('\n'.join(self.messages))


class NumericalError(RuntimeError):
    """Raised if a factorization breaks down beyond the jitter retries."""


class NegativeVarianceWarning(RuntimeWarning):
    """Raw posterior variance fell below the tolerated roundoff floor."""


def _cache(experiment, func, params, result_keys):
    """
    Save result of ``func(**params)`` into experiment dicts using `result_keys`.

    This function serves as a wrapper for functions that calculate quantities
    which are to be stored in the experiment's result dicts. First it creates
    a hash using the function name, the passed parameters, and the result
    keys, and checks whether this hash is a key of the experiment's
    ``results_hash_dict``. If this is the case, the old result is returned.

    If not, the new result is calculated and stored in the
    ``results_hash_dict`` and the ``results`` dict. Then the new result is
    returned.

    Parameters
    ----------
    experiment : Experiment object or child class instance.
        The experiment whose dicts are used for storing the results.
    func : function
        Function whose return value should be cached.
    params : dict
        Parameters passed on to `func`.
    result_keys : str or list of str
        Specifies under which keys the result should be stored.

    Returns
    -------
    ``func(**params)``
    """
    result_keys = np.atleast_1d(result_keys).tolist()

    # create unique hash for given function parameter combination
    label = str((func.__name__, result_keys, _hash_label(params)))
    h = hashlib.md5(label.encode('utf-8')).hexdigest()

    results = experiment.results
    results_hash_dict = experiment.results_hash_dict

    if h in results_hash_dict.keys():
        if len(result_keys) == 1:
            new_results = results_hash_dict[h][result_keys[0]]
        else:
            new_results = [results_hash_dict[h][key] for key in result_keys]
    else:
        new_results = func(**params)

        if len(result_keys) == 1:
            hash_dict = {result_keys[0]: new_results}
        else:
            assert len(result_keys) == len(new_results)
            hash_dict = dict(zip(result_keys, new_results))

        hash_dict['params'] = params
        results_hash_dict[h] = hash_dict

    if len(result_keys) == 1:
        results[result_keys[0]] = new_results
    else:
        for i, key in enumerate(result_keys):
            results[key] = new_results[i]

    experiment.results = results
    experiment.results_hash_dict = results_hash_dict

    return new_results


def _hash_label(value):
    """String label of `value`; arrays enter with their full content."""
    if isinstance(value, dict):
        return '{' + ','.join(f'{k}:{_hash_label(v)}'
                              for k, v in sorted(value.items())) + '}'
    if isinstance(value, np.ndarray):
        return (f'array{value.shape}{value.dtype}'
                + hashlib.md5(np.ascontiguousarray(value).tobytes())
                .hexdigest())
    if isinstance(value, (list, tuple)):
        return '[' + ','.join(_hash_label(v) for v in value) + ']'
    return repr(value)


def check_if_positive(parameters, parameter_names):
    """Check that will raise an error if parameters are not positive."""
    for parameter, parameter_name in zip(parameters, parameter_names):
        if parameter is None:
            continue
        if np.any(np.atleast_1d(np.asarray(parameter, dtype=float)) <= 0):
            raise ValueError('{} should be larger than zero!'.format(
                parameter_name))


def check_dimension(points, dimension, name='x'):
    """
    Return `points` as 2d float array, checking the trailing dimension.

    Parameters
    ----------
    points : array_like
        A single point of shape (d,) or a list of points of shape (n, d).
    dimension : int
        Required dimension d.
    name : str
        Name used in the error message.

    Returns
    -------
    np.ndarray
        Array of shape (n, d).
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 0:
        points = points.reshape(1, 1)
    elif points.ndim == 1:
        if points.size == 0 and dimension != 0:
            # an empty list stands for an empty point set
            return np.empty((0, dimension))
        points = points[np.newaxis, :]
    if points.ndim != 2 or points.shape[1] != dimension:
        raise ValueError(
            f'{name} has shape {points.shape}, expected points of dimension '
            f'{dimension}.')
    return points


def _check_positive_params(func):
    """Decorator that checks that a fixed list of parameters is positive."""
    all_pos_params = ['signal_variance',
                      'lengthscales',
                      'noise_variance',
                      'delta',
                      'B',
                      'horizon',
                      'T',
                      'trials',
                      'n_decisions',
                      'eta',
                      'nu',
                      'd',
                      'l',
                      'a',
                      'b',
                      'M',
                      ]

    @wraps(func)
    def decorator_check(*args, **kwargs):
        signature = inspect.signature(func)
        pos_param_names = [param for param in signature.parameters
                           if param in all_pos_params]
        all_args = build_full_arg_list(signature, args, kwargs)
        pos_params = [all_args[i] for i, param
                      in enumerate(signature.parameters)
                      if param in pos_param_names]
        check_if_positive(pos_params, pos_param_names)
        return func(*args, **kwargs)
    return decorator_check


def build_full_arg_list(signature, args, kwargs):
    """
    Creates a full list of arguments including standard arguments.

    Parameters
    ----------
    signature : Signature object
        The signature of a given function.
    args : list
        List of passed positional arguments.
    kwargs : dict
        Dict of passed keyword arguments.

    Returns
    -------
    list
        Full list of arguments.
    """

    keys = list(signature.parameters.keys())[len(args):]
    defaults = [param.default for param
                in signature.parameters.values()][len(args):]

    full_list = list(args)
    for key, default in zip(keys, defaults):
        if key in kwargs.keys():
            full_list.append(kwargs[key])
        elif default is inspect.Parameter.empty:
            full_list.append(None)
        else:
            full_list.append(default)

    return full_list


def trial_rng(seed, trial=0, stream=0):
    """
    Random generator for one stream of one trial.

    The master `seed` is split with :class:`numpy.random.SeedSequence`, the
    trial index and the stream id (0: payoff draw, 1: observation noise) form
    the spawn key. Gaussian variates come from
    :meth:`numpy.random.Generator.standard_normal`.

    Parameters
    ----------
    seed : int
        Master seed.
    trial : int
        Trial index.
    stream : int
        Stream id.

    Returns
    -------
    numpy.random.Generator
    """
    sequence = np.random.SeedSequence(int(seed),
                                      spawn_key=(int(trial), int(stream)))
    return np.random.default_rng(sequence)
