"""
Gaussian process posterior with incremental Cholesky factors.

The posterior keeps two conditioning paths. The mean path conditions on real
observations only; the variance path additionally conditions on hallucinated
inputs, i.e. pending decisions whose outcomes are not known yet. Posterior
variances only depend on where observations are made, so hallucinating a
point gives exactly the variance real feedback at that point would give.

Both paths are lower triangular factors of ``K(X, X) + noise_variance * I``
that grow by one row per conditioning step.

Posterior
*********

.. autosummary::
    :toctree: _toctree/posterior/

    GpPosterior

Functions
*********

.. autosummary::
    :toctree: _toctree/posterior/

    posterior_mean
    posterior_variance
    condition_on_observation
    hallucinate
    promote_hallucinations

"""

import copy
import logging
import warnings

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from . import kernels
from .utils import (NegativeVarianceWarning,
                    NumericalError,
                    check_dimension,
                    _check_positive_params)


log = logging.getLogger(__name__)

# relative jitter added to a failing diagonal entry, tried in this order
JITTERS = (1e-10, 1e-8)
# raw variances below -NEGATIVE_VARIANCE_TOL * signal_variance are reported
NEGATIVE_VARIANCE_TOL = 1e-8


def _extend_factor(factor, k_new, k_self, noise_variance, signal_variance):
    """
    Append one row to the Cholesky factor of ``K + noise_variance * I``.

    Parameters
    ----------
    factor : np.ndarray
        Lower triangular factor of shape (m, m).
    k_new : np.ndarray
        Kernel values between the new point and the m factored points.
    k_self : float
        Prior variance of the new point.
    noise_variance : float
        Observation noise variance.
    signal_variance : float
        Scale for the jitter.

    Returns
    -------
    np.ndarray
        Factor of shape (m + 1, m + 1).
    """
    m = factor.shape[0]
    if m > 0:
        row = solve_triangular(factor, k_new, lower=True, check_finite=False)
    else:
        row = np.empty(0)
    pivot = k_self + noise_variance - row @ row
    jitter = 0.0
    if not pivot > 0:
        for rel_jitter in JITTERS:
            jitter = rel_jitter * signal_variance
            if pivot + jitter > 0:
                warnings.warn(f'Added jitter {jitter:.1e} to factor row '
                              f'{m}.', RuntimeWarning)
                break
        else:
            raise NumericalError(
                f'Cholesky extension to size {m + 1} failed: pivot '
                f'{pivot:.3e} stays non-positive after jitter up to '
                f'{jitter:.1e}.')
    extended = np.zeros((m + 1, m + 1))
    extended[:m, :m] = factor
    extended[m, :m] = row
    extended[m, m] = np.sqrt(pivot + jitter)
    return extended


class GpPosterior():
    """
    Running GP posterior given noisy and hallucinated observations.

    Mutating methods change the instance in place and return it, so calls can
    be chained. Use :meth:`copy` to branch off an independent state.

    Parameters
    ----------
    kernel : KernelSpec
        Prior covariance function, prior mean is zero.
    noise_variance : float
        Known observation noise variance.
    candidates : [None | DecisionSet | array_like], optional
        Decision set for which variances are tracked incrementally, see
        :meth:`candidate_variances`. Default is None.

    Attributes
    ----------
    observed_inputs : np.ndarray
        Inputs with real outcomes, mean path, in conditioning order.
    observed_outcomes : np.ndarray
        Outcomes aligned with `observed_inputs`.
    hallucinated_inputs : np.ndarray
        Pending inputs conditioned on for the variance only.
    variance_inputs : np.ndarray
        All inputs of the variance path in conditioning order.
    """

    @_check_positive_params
    def __init__(self, kernel, noise_variance, candidates=None):
        self.kernel = kernel
        self.noise_variance = float(noise_variance)
        d = kernel.dimension

        self.observed_inputs = np.empty((0, d))
        self.observed_outcomes = np.empty(0)
        self.hallucinated_inputs = np.empty((0, d))
        self.variance_inputs = np.empty((0, d))
        self._mean_factor = np.empty((0, 0))
        self._variance_factor = np.empty((0, 0))
        self._weights = np.empty(0)
        # incremented whenever the mean path changes
        self.mean_version = 0

        if candidates is None:
            self.candidates = None
        else:
            if isinstance(candidates, kernels.DecisionSet):
                candidates = candidates.points
            self.candidates = check_dimension(candidates, d, 'candidates')
            n = len(self.candidates)
            self._projections = np.empty((0, n))
            self._rows_done = np.zeros(n, dtype=int)
            self._raw_variances = kernels.diagonal(kernel, self.candidates)
            self._candidate_means = None

    @property
    def n_observed(self):
        return len(self.observed_outcomes)

    @property
    def n_hallucinated(self):
        return len(self.hallucinated_inputs)

    @property
    def n_conditioned(self):
        """Size of the variance path."""
        return len(self.variance_inputs)

    def copy(self):
        """Independent deep copy of the posterior."""
        return copy.deepcopy(self)

    def mean(self, x):
        """Posterior mean at the rows of `x`, real observations only."""
        x = check_dimension(x, self.kernel.dimension, 'x')
        if self.n_observed == 0:
            return np.zeros(len(x))
        return kernels.cross(self.kernel, x, self.observed_inputs) @ \
            self._weights

    def variance(self, x):
        """
        Posterior variance at the rows of `x`, clamped to be non-negative.

        Conditions on real and hallucinated inputs.
        """
        x = check_dimension(x, self.kernel.dimension, 'x')
        prior = kernels.diagonal(self.kernel, x)
        if self.n_conditioned == 0:
            return prior
        k = kernels.cross(self.kernel, self.variance_inputs, x)
        v = solve_triangular(self._variance_factor, k, lower=True,
                             check_finite=False)
        return self._clamp(prior - np.sum(v * v, axis=0))

    def _clamp(self, raw):
        floor = -NEGATIVE_VARIANCE_TOL * self.kernel.signal_variance
        if np.any(raw < floor):
            warnings.warn(f'Raw posterior variance {np.min(raw):.3e} below '
                          f'tolerance {floor:.1e}.', NegativeVarianceWarning)
        return np.maximum(raw, 0.0)

    def condition_on_observation(self, x, y):
        """
        Add a real observation ``(x, y)`` to both conditioning paths.

        Raises
        ------
        ValueError
            If `y` is not finite.
        NumericalError
            If the factor cannot be extended.
        """
        x = check_dimension(x, self.kernel.dimension, 'x')
        if len(x) != 1:
            raise ValueError('Condition on one observation at a time.')
        if not np.isfinite(y):
            raise ValueError(f'Outcome {y} is not finite.')
        self._extend_variance_path(x)
        self._extend_mean_path(x, [y])
        return self

    def hallucinate(self, x):
        """
        Condition the variance path on input `x` without an outcome.

        The posterior mean is unchanged at every point.
        """
        x = check_dimension(x, self.kernel.dimension, 'x')
        if len(x) != 1:
            raise ValueError('Hallucinate one input at a time.')
        self._extend_variance_path(x)
        self.hallucinated_inputs = np.vstack([self.hallucinated_inputs, x])
        return self

    def promote_oldest(self, outcomes):
        """
        Turn the oldest ``len(outcomes)`` hallucinations into observations.

        The variance path is unchanged, the mean path is extended.

        Parameters
        ----------
        outcomes : array_like
            Outcomes in hallucination order.
        """
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=float))
        k = len(outcomes)
        if k > self.n_hallucinated:
            raise ValueError(f'Cannot promote {k} outcomes, only '
                             f'{self.n_hallucinated} inputs are pending.')
        if not np.all(np.isfinite(outcomes)):
            raise ValueError('Outcomes must be finite.')
        if k == 0:
            return self
        inputs = self.hallucinated_inputs[:k]
        self.hallucinated_inputs = self.hallucinated_inputs[k:]
        self._extend_mean_path(inputs, outcomes)
        return self

    def promote_hallucinations(self, outcomes):
        """
        Turn all hallucinated inputs into real observations.

        Parameters
        ----------
        outcomes : array_like
            One outcome per hallucinated input, in hallucination order.
        """
        outcomes = np.atleast_1d(np.asarray(outcomes, dtype=float))
        if len(outcomes) != self.n_hallucinated:
            raise ValueError(f'Got {len(outcomes)} outcomes for '
                             f'{self.n_hallucinated} hallucinated inputs.')
        return self.promote_oldest(outcomes)

    def _extend_variance_path(self, x):
        k_new = kernels.cross(self.kernel, self.variance_inputs, x)[:, 0]
        k_self = kernels.diagonal(self.kernel, x)[0]
        self._variance_factor = _extend_factor(
            self._variance_factor, k_new, k_self, self.noise_variance,
            self.kernel.signal_variance)
        self.variance_inputs = np.vstack([self.variance_inputs, x])
        if self.candidates is not None:
            self._store_candidate_column(x)

    def _extend_mean_path(self, inputs, outcomes):
        for x, y in zip(inputs, outcomes):
            k_new = kernels.cross(self.kernel, self.observed_inputs,
                                  x[np.newaxis, :])[:, 0]
            k_self = kernels.diagonal(self.kernel, x[np.newaxis, :])[0]
            self._mean_factor = _extend_factor(
                self._mean_factor, k_new, k_self, self.noise_variance,
                self.kernel.signal_variance)
            self.observed_inputs = np.vstack([self.observed_inputs, x])
            self.observed_outcomes = np.append(self.observed_outcomes, y)
        self._weights = cho_solve((self._mean_factor, True),
                                  self.observed_outcomes, check_finite=False)
        self.mean_version += 1
        if self.candidates is not None:
            self._candidate_means = None

    def candidate_means(self):
        """
        Posterior means over all candidates.

        Computed once per change of the mean path.

        Returns
        -------
        np.ndarray
            Read-only array with one mean per candidate.
        """
        self._require_candidates()
        if self._candidate_means is None:
            means = self.mean(self.candidates)
            means.setflags(write=False)
            self._candidate_means = means
        return self._candidate_means

    def candidate_variances(self, indices=None):
        """
        Posterior variances of the given candidates, clamped at zero.

        Each candidate lags behind the variance path until it is queried;
        querying catches it up one factor row at a time. The arithmetic per
        candidate is element-wise and happens in the same order whichever
        other candidates are queried along, so results do not depend on the
        query pattern.

        Parameters
        ----------
        indices : [None | array_like of int], optional
            Candidate indices; all candidates if None.

        Returns
        -------
        np.ndarray
        """
        self._require_candidates()
        if indices is None:
            indices = slice(None)
            n_rows_done = self._rows_done
        else:
            indices = np.atleast_1d(np.asarray(indices, dtype=int))
            n_rows_done = self._rows_done[indices]
        m = self.n_conditioned
        if n_rows_done.size and np.min(n_rows_done) < m:
            self._catch_up(indices, m)
        return self._clamp(self._raw_variances[indices])

    def _store_candidate_column(self, x):
        """Keep k(x, candidates) as raw row of the projection matrix."""
        m = self.n_conditioned
        if self._projections.shape[0] < m:
            grown = np.empty((max(m, 2 * self._projections.shape[0]),
                              self._projections.shape[1]))
            grown[:self._projections.shape[0]] = self._projections
            self._projections = grown
        self._projections[m - 1] = kernels.cross(self.kernel, x,
                                                 self.candidates)[0]

    def _catch_up(self, indices, m):
        # row r of the projections holds raw kernel values for candidates
        # with fewer than r + 1 rows done, and solved values otherwise
        factor = self._variance_factor
        if isinstance(indices, slice):
            all_idx = np.arange(len(self.candidates))
        else:
            all_idx = indices
        start = int(np.min(self._rows_done[all_idx]))
        n_updates = 0
        for r in range(start, m):
            lagging = all_idx[self._rows_done[all_idx] == r]
            n_updates += len(lagging)
            if len(lagging) == len(self.candidates):
                lagging = slice(None)
            acc = self._projections[r, lagging].copy()
            for s in range(r):
                acc -= factor[r, s] * self._projections[s, lagging]
            row = acc / factor[r, r]
            self._projections[r, lagging] = row
            self._raw_variances[lagging] -= row * row
            self._rows_done[lagging] = r + 1
        log.debug('Caught up %d candidate rows to path size %d.',
                  n_updates, m)

    def _require_candidates(self):
        if self.candidates is None:
            raise RuntimeError('The posterior was built without candidates.')


def posterior_mean(state, x):
    """
    Posterior mean at a single point, using real observations only.

    Parameters
    ----------
    state : GpPosterior
    x : array_like
        Point of dimension d.

    Returns
    -------
    float
    """
    return float(state.mean(x)[0])


def posterior_variance(state, x):
    """
    Posterior variance at a single point, conditioning on real and
    hallucinated inputs.

    Returns
    -------
    float
        Non-negative variance.
    """
    return float(state.variance(x)[0])


def condition_on_observation(state, x, y):
    """Add the observation ``(x, y)``; see :meth:`GpPosterior.condition_on_observation`."""
    return state.condition_on_observation(x, y)


def hallucinate(state, x):
    """Condition the variance on `x` only; see :meth:`GpPosterior.hallucinate`."""
    return state.hallucinate(x)


def promote_hallucinations(state, outcomes):
    """Deliver outcomes of all hallucinated inputs."""
    return state.promote_hallucinations(outcomes)
