"""
Defines the Tabular experiment, with payoffs read from a table.
"""

import numpy as np

from .experiment import Experiment
from .. import harness


class Tabular(Experiment):
    """
    Experiment on a fixed payoff table.

    Every row of the table is a decision: its feature columns give the
    coordinates, the payoff column its expected payoff. All trials share
    the payoffs and differ in their noise.

    Parameters
    ----------
    experiment_params : [str | dict]
        Experiment configuration yaml file name or dictionary. The
        `instance` table needs ``source: tabular``, the table `path`, the
        `payoff_column` and optionally the `feature_columns`; there is no
        `decision_set` table.
    file : str
        h5 file from which the experiment is loaded. Default is ``None``.

    Raises
    ------
    ValueError
        If the table is malformed or has duplicate decisions.
    """

    def _build_decision_set(self):
        params = self.experiment_params['instance']
        feature_columns = params.get('feature_columns')
        if feature_columns is not None:
            feature_columns = np.atleast_1d(feature_columns).tolist()
        self._instance = harness.load_tabular_instance(
            params['path'], params['payoff_column'], feature_columns)
        return self._instance.decision_set

    def instance(self, trial):
        """Payoff instance; the same for every trial."""
        return self._instance

    def _instantiate(self, new_params):
        return Tabular(new_params)
