"""
Regret behaviour of the selection rules on synthetic benchmarks.

The guards of the desk-scale benchmark compare policies run on the same
payoff functions and noise draws. They are evaluated on the recorded run in
``tests/fixtures/integration/data/synthetic_benchmark/``, whose
``aggregate.csv`` and ``summary.yaml`` are written by the first run of this
module and committed. Later runs have to reproduce the recording.
"""

import os
import shutil

import pytest
import numpy as np
from numpy.testing import assert_allclose

from gpbucb import confidence as conf
from gpbucb import harness
from gpbucb import infogain
from gpbucb import input_output as io
from gpbucb.models import Synthetic

from ..checks import assert_traces_equal


config_path = 'tests/fixtures/integration/config/'
fix_path = 'tests/fixtures/integration/data/synthetic_benchmark/'

recorded_files = ('aggregate.csv', 'summary.yaml')


def benchmark_variants():
    experiment = Synthetic(config_path
                           + 'synthetic_benchmark.yaml')
    return {
        'gp-bucb': experiment,
        'gp-ucb': experiment.change_parameters(
            {'policy': 'gp-ucb', 'schedule': {'kind': 'sequential'}}),
        'nrb-ucb': experiment.change_parameters({'policy': 'nrb-ucb'}),
        'ntb-ucb': experiment.change_parameters({'policy': 'ntb-ucb'}),
        }


def load_run(directory):
    header, data = io.read_table(os.path.join(directory, 'aggregate.csv'))
    aggregate = dict(zip(header, data.T))
    summary = io.load_config(os.path.join(directory, 'summary.yaml'))
    return aggregate, summary


@pytest.fixture(scope='module')
def benchmark(tmp_path_factory):
    output_dir = tmp_path_factory.mktemp('benchmark')
    runs = {}
    for name, variant in benchmark_variants().items():
        directory = str(output_dir / name)
        harness.run_experiment(variant, directory)
        record = os.path.join(fix_path, name)
        if not os.path.exists(os.path.join(record, 'summary.yaml')):
            os.makedirs(record, exist_ok=True)
            for file in recorded_files:
                shutil.copy(os.path.join(directory, file), record)
        runs[name] = load_run(directory)
    return runs


@pytest.fixture(scope='module')
def recorded(benchmark):
    return {name: load_run(os.path.join(fix_path, name))[0]
            for name in benchmark}


@pytest.mark.slow
class Test_synthetic_benchmark:

    @pytest.mark.parametrize('name', ['gp-bucb', 'gp-ucb', 'nrb-ucb',
                                      'ntb-ucb'])
    def test_reproduces_recorded_run(self, benchmark, name):
        aggregate, summary = benchmark[name]
        recorded_aggregate, recorded_summary = load_run(
            os.path.join(fix_path, name))
        assert summary['config_hash'] == recorded_summary['config_hash']
        assert summary['trials_completed'] == \
            recorded_summary['trials_completed']
        for key in harness.AGGREGATE_COLUMNS:
            assert_allclose(aggregate[key], recorded_aggregate[key],
                            rtol=1e-10, atol=1e-12)

    def test_naive_batch_rules_perform_poorly(self, recorded):
        final = recorded['gp-bucb']['mean_avg_regret'][-1]
        for name in ('nrb-ucb', 'ntb-ucb'):
            assert recorded[name]['mean_avg_regret'][-1] >= 1.5 * final

    def test_sequential_rule_leads_during_first_batch(self, recorded):
        assert recorded['gp-ucb']['mean_avg_regret'][9] < \
            recorded['gp-bucb']['mean_avg_regret'][9]

    def test_batch_rule_catches_up_with_sequential_rule(self, recorded):
        ratio = (recorded['gp-bucb']['mean_avg_regret'][-1]
                 / recorded['gp-ucb']['mean_avg_regret'][-1])
        assert ratio < 1.5

    def test_minimum_regret_converges(self, recorded):
        min_regret = recorded['gp-bucb']['mean_min_regret']
        assert min_regret[-1] < 0.25 * min_regret[9]


@pytest.mark.slow
def test_realized_regret_below_high_probability_bound(tmp_path):
    experiment = Synthetic(config_path + 'regret_bound.yaml')
    harness.run_experiment(experiment, str(tmp_path))
    report = infogain.information_report(experiment, T=experiment.horizon)
    bound = conf.regret_bound(experiment.confidence, experiment.horizon,
                              report['upper_bracket'][-1],
                              experiment.noise_variance)
    traces = experiment.results['harness.traces']
    regrets = [np.sum(trace['regrets']) for trace in traces.values()]
    assert len(regrets) == experiment.trials
    assert sum(R < bound for R in regrets) >= 95


def test_runs_are_reproducible(config):
    config['trials'] = 3
    runs = []
    for _ in range(2):
        experiment = Synthetic(config)
        runs.append([harness.run_trial(
            experiment.instance(trial), experiment.policy, experiment.kernel,
            experiment.schedule, experiment.confidence, experiment.horizon,
            experiment.noise_variance, experiment.seed, trial=trial)
            for trial in range(experiment.trials)])
    for first, second in zip(*runs):
        assert_traces_equal(first, second)


def test_two_stage_policy_runs_end_to_end(tmp_path, config):
    config['policy'] = 'gp-bucb-init'
    config['kernel'] = {'family': 'matern', 'lengthscales': [0.2]}
    config['initialization'] = {'nu': 1.0, 'epsilon': 0.5}
    config['confidence']['C'] = 'auto'
    experiment = Synthetic(config)
    aggregate = harness.run_experiment(experiment, str(tmp_path))
    assert len(aggregate['t']) == experiment.horizon
    trace = experiment.results['harness.traces'][0]
    assert list(trace['decisions'][:2]) == [0, 24]
