"""
Defines the Synthetic experiment, with payoffs drawn from the GP prior.
"""

import logging

from .experiment import Experiment
from .. import harness
from .. import kernels


log = logging.getLogger(__name__)


class Synthetic(Experiment):
    """
    Experiment on a grid with payoff functions sampled from the GP prior.

    The decisions form an evenly spaced grid over a box. Each trial draws
    its own payoff function from stream 0 of the trial unless
    ``instance.redraw`` is false, in which case all trials share the payoffs
    of trial 0.

    Parameters
    ----------
    experiment_params : [str | dict]
        Experiment configuration yaml file name or dictionary including:

        - `instance` : dict
            ``source: gp-sample`` and optionally ``redraw``.
        - `decision_set` : dict
            Box corners `lower`, `upper` and grid `resolution`.
        - `kernel` : dict
            `family`, `lengthscales`, optionally `signal_variance` and
            `smoothness`.
        - `policy` : str
            Name of the selection rule.
        - `horizon` : int
            Number of rounds T.
        - `noise_variance` : float
            Observation noise variance.

        See :func:`gpbucb.models.experiment.validate_config` for the
        optional keys.
    file : str
        h5 file from which the experiment is loaded. Default is ``None``.
    """

    def __init__(self, experiment_params=None, file=None):
        self._shared_instance = None
        super().__init__(experiment_params, file)

    def _build_decision_set(self):
        box = self.experiment_params['decision_set']
        self._shared_instance = None
        decision_set = kernels.DecisionSet.grid(
            box['lower'], box['upper'], box['resolution'])
        log.debug('Grid of %d decisions in dimension %d.',
                  len(decision_set), decision_set.dimension)
        return decision_set

    def instance(self, trial):
        """
        Payoff instance of a trial.

        Parameters
        ----------
        trial : int
            Trial index.

        Returns
        -------
        PayoffInstance
        """
        if self.redraw:
            return harness.sample_gp_instance(self.kernel, self.decision_set,
                                              self.seed, trial)
        if self._shared_instance is None:
            self._shared_instance = harness.sample_gp_instance(
                self.kernel, self.decision_set, self.seed, 0)
        return self._shared_instance

    def _instantiate(self, new_params):
        return Synthetic(new_params)
