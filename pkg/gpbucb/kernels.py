"""
Covariance functions of the Gaussian process prior and decision sets.

The prior mean is fixed to zero. Three kernel families are available:
squared exponential with per-dimension lengthscales (``'rbf'``), Matérn with
smoothness 1/2, 3/2 or 5/2 (``'matern'``), and the linear kernel
:math:`k(x, x') = \\sum_j w_j x_j x'_j` with weights
:math:`w_j = 1 / l_j^2` (``'linear'``).

Types
*****

.. autosummary::
    :toctree: _toctree/kernels/

    DecisionSet
    KernelSpec

Kernel Functions
****************

.. autosummary::
    :toctree: _toctree/kernels/

    evaluate
    evaluate_vector
    evaluate_matrix
    cross
    diagonal

Parameter Functions
*******************

.. autosummary::
    :toctree: _toctree/kernels/

    _rbf
    _matern
    _linear

"""

import numpy as np

from .utils import (check_dimension,
                    _check_positive_params)


FAMILIES = ('rbf', 'matern', 'linear')
STATIONARY = ('rbf', 'matern')
SMOOTHNESS = (0.5, 1.5, 2.5)


class DecisionSet():
    """
    Finite indexed collection of candidate decisions in R^d.

    Parameters
    ----------
    points : array_like
        Array of shape (n, d). Index i refers to ``points[i]``.

    Attributes
    ----------
    points : np.ndarray
        The candidate decisions, read-only.
    dimension : int
        Dimension d of each decision.
    """

    def __init__(self, points):
        points = np.array(points, dtype=float)
        if points.ndim == 1:
            points = points[:, np.newaxis]
        if points.ndim != 2 or points.shape[0] == 0 or points.shape[1] == 0:
            raise ValueError('A decision set needs at least one point of '
                             'positive dimension.')
        if not np.all(np.isfinite(points)):
            raise ValueError('Decisions must have finite coordinates.')
        points.setflags(write=False)
        self.points = points

    @classmethod
    def grid(cls, lower, upper, resolution):
        """
        Evenly spaced grid over the box [lower, upper].

        Parameters
        ----------
        lower, upper : array_like
            Box corners, one entry per dimension.
        resolution : [int | array_like]
            Number of grid points per dimension.

        Returns
        -------
        DecisionSet
            Grid points ordered with the last dimension varying fastest.
        """
        lower = np.atleast_1d(np.asarray(lower, dtype=float))
        upper = np.atleast_1d(np.asarray(upper, dtype=float))
        resolution = np.broadcast_to(np.atleast_1d(resolution),
                                     lower.shape).astype(int)
        if lower.shape != upper.shape:
            raise ValueError('`lower` and `upper` need the same length.')
        if np.any(upper < lower) or np.any(resolution < 1):
            raise ValueError('Invalid grid bounds or resolution.')
        axes = [np.linspace(lo, up, n)
                for lo, up, n in zip(lower, upper, resolution)]
        mesh = np.meshgrid(*axes, indexing='ij')
        return cls(np.stack([m.ravel() for m in mesh], axis=-1))

    @property
    def dimension(self):
        return self.points.shape[1]

    def __len__(self):
        return self.points.shape[0]

    def __getitem__(self, index):
        return self.points[index]


class KernelSpec():
    """
    Covariance function family together with its hyperparameters.

    Parameters
    ----------
    family : {'rbf', 'matern', 'linear'}
        Kernel family.
    lengthscales : array_like
        One positive lengthscale per input dimension. For the linear kernel
        the weights are ``1 / lengthscales**2``.
    signal_variance : float
        Value of k(x, x) for the stationary families; overall scale of the
        linear kernel. Default is 1.
    smoothness : {0.5, 1.5, 2.5}
        Matérn smoothness. Ignored by other families. Default is 2.5.
    """

    @_check_positive_params
    def __init__(self, family, lengthscales, signal_variance=1.0,
                 smoothness=2.5):
        if family not in FAMILIES:
            raise ValueError(f"Unknown kernel family '{family}'. Valid "
                             f"families are {', '.join(FAMILIES)}.")
        if family == 'matern' and float(smoothness) not in SMOOTHNESS:
            raise ValueError(f'Matern smoothness must be one of {SMOOTHNESS}, '
                             f'got {smoothness}.')
        self.family = family
        self.lengthscales = np.atleast_1d(
            np.asarray(lengthscales, dtype=float)).copy()
        self.lengthscales.setflags(write=False)
        self.signal_variance = float(signal_variance)
        self.smoothness = float(smoothness)

    @property
    def dimension(self):
        return len(self.lengthscales)

    @property
    def stationary(self):
        return self.family in STATIONARY

    def to_dict(self):
        """Parameters as plain dict, e.g. for yaml or h5 output."""
        return {'family': self.family,
                'lengthscales': self.lengthscales.tolist(),
                'signal_variance': self.signal_variance,
                'smoothness': self.smoothness}

    def __repr__(self):
        return ('KernelSpec(family={family!r}, lengthscales={lengthscales}, '
                'signal_variance={signal_variance}, '
                'smoothness={smoothness})').format(**self.to_dict())


def evaluate(spec, x, x_prime):
    """
    Kernel value k(x, x').

    Parameters
    ----------
    spec : KernelSpec
        The kernel.
    x, x_prime : array_like
        Points of dimension d.

    Returns
    -------
    float
    """
    x = check_dimension(x, spec.dimension, 'x')
    x_prime = check_dimension(x_prime, spec.dimension, 'x_prime')
    if len(x) != 1 or len(x_prime) != 1:
        raise ValueError('`evaluate` expects single points.')
    return float(cross(spec, x, x_prime)[0, 0])


def evaluate_vector(spec, x, X):
    """
    Row vector of kernel evaluations k(x, X).

    Parameters
    ----------
    spec : KernelSpec
        The kernel.
    x : array_like
        Single point of dimension d.
    X : array_like
        Points of shape (n, d), possibly empty.

    Returns
    -------
    np.ndarray
        Array of length n.
    """
    x = check_dimension(x, spec.dimension, 'x')
    X = check_dimension(X, spec.dimension, 'X')
    if len(x) != 1:
        raise ValueError('`evaluate_vector` expects a single point `x`.')
    return cross(spec, x, X)[0]


def evaluate_matrix(spec, X):
    """
    Symmetric kernel matrix K(X, X).

    Only the upper triangle is computed, the lower one is its mirror image, so
    the result equals its transpose exactly.

    Parameters
    ----------
    spec : KernelSpec
        The kernel.
    X : array_like
        Points of shape (n, d).

    Returns
    -------
    np.ndarray
        Array of shape (n, n).
    """
    X = check_dimension(X, spec.dimension, 'X')
    K = cross(spec, X, X)
    upper = np.triu(K)
    return upper + np.triu(upper, 1).T


def cross(spec, X1, X2):
    """
    Rectangular kernel matrix K(X1, X2).

    Every entry is computed element-wise, so the value of a pair does not
    depend on which other points are passed along.

    Parameters
    ----------
    spec : KernelSpec
        The kernel.
    X1, X2 : np.ndarray
        Arrays of shape (n1, d) and (n2, d).

    Returns
    -------
    np.ndarray
        Array of shape (n1, n2).
    """
    X1 = check_dimension(X1, spec.dimension, 'X1')
    X2 = check_dimension(X2, spec.dimension, 'X2')
    if spec.family == 'rbf':
        return _rbf(X1, X2, spec.lengthscales, spec.signal_variance)
    elif spec.family == 'matern':
        return _matern(X1, X2, spec.lengthscales, spec.signal_variance,
                       spec.smoothness)
    elif spec.family == 'linear':
        return _linear(X1, X2, spec.lengthscales, spec.signal_variance)
    raise NotImplementedError(
        f"The kernel family '{spec.family}' is not implemented.")


def diagonal(spec, X):
    """Prior variances k(x, x) for all rows of `X`."""
    X = check_dimension(X, spec.dimension, 'X')
    if spec.stationary:
        return np.full(len(X), spec.signal_variance)
    weights = 1 / spec.lengthscales**2
    return spec.signal_variance * np.sum(weights * X * X, axis=-1)


def _scaled_sq_dist(X1, X2, lengthscales):
    """Squared distances after dividing each dimension by its lengthscale."""
    diff = (X1[:, np.newaxis, :] - X2[np.newaxis, :, :]) / lengthscales
    return np.sum(diff * diff, axis=-1)


def _rbf(X1, X2, lengthscales, signal_variance):
    """
    Squared exponential kernel with automatic relevance determination.

    Parameters
    ----------
    X1, X2 : np.ndarray
        Points of shape (n1, d) and (n2, d).
    lengthscales : np.ndarray
        Lengthscale per dimension.
    signal_variance : float
        Prior variance k(x, x).

    Returns
    -------
    np.ndarray
        Array of shape (n1, n2).
    """
    return signal_variance * np.exp(
        -0.5 * _scaled_sq_dist(X1, X2, lengthscales))


def _matern(X1, X2, lengthscales, signal_variance, smoothness):
    """
    Matérn kernel in closed form for half-integer smoothness.

    Parameters
    ----------
    X1, X2 : np.ndarray
        Points of shape (n1, d) and (n2, d).
    lengthscales : np.ndarray
        Lengthscale per dimension.
    signal_variance : float
        Prior variance k(x, x).
    smoothness : {0.5, 1.5, 2.5}
        Smoothness parameter.

    Returns
    -------
    np.ndarray
        Array of shape (n1, n2).
    """
    r = np.sqrt(_scaled_sq_dist(X1, X2, lengthscales))
    if smoothness == 0.5:
        shape = np.exp(-r)
    elif smoothness == 1.5:
        s = np.sqrt(3) * r
        shape = (1 + s) * np.exp(-s)
    elif smoothness == 2.5:
        s = np.sqrt(5) * r
        shape = (1 + s + s * s / 3) * np.exp(-s)
    else:
        raise NotImplementedError(
            f'Matern smoothness {smoothness} is not implemented.')
    return signal_variance * shape


def _linear(X1, X2, lengthscales, signal_variance):
    """
    Linear kernel with one weight ``1 / l_j**2`` per dimension.

    Returns
    -------
    np.ndarray
        Array of shape (n1, n2).
    """
    weights = 1 / lengthscales**2
    products = X1[:, np.newaxis, :] * X2[np.newaxis, :, :]
    return signal_variance * np.sum(weights * products, axis=-1)
