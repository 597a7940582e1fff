import pytest
import numpy as np
from numpy.testing import assert_array_equal

import gpbucb
from gpbucb import infogain
from gpbucb.models import (Experiment,
                           Synthetic,
                           Tabular,
                           from_config,
                           validate_config)
from gpbucb.utils import ConfigurationError

from ...checks import check_dicts_are_equal


class Test_validate_config:

    def test_defaults_are_filled_in(self, config):
        del config['confidence']
        validated = validate_config(config)
        assert validated['confidence'] == {'regime': 'finite', 'delta': 0.1,
                                           'C': 'auto'}
        assert validated['noise'] == 'gaussian'
        assert validated['instance']['redraw'] is True
        assert validated['kernel']['smoothness'] == 2.5

    def test_given_values_win_over_defaults(self, config):
        validated = validate_config(config)
        assert validated['confidence']['C'] == 0.5
        assert validated['schedule'] == {'kind': 'batch', 'B': 3}

    def test_input_is_not_modified(self, config):
        validate_config(config)
        assert 'noise' not in config

    def test_all_errors_are_collected(self, unit_config_path):
        config = gpbucb.models.load_config(unit_config_path + 'broken.yaml')
        with pytest.raises(ConfigurationError) as error:
            validate_config(config)
        messages = error.value.messages
        assert len(messages) == 4
        assert any('kernel.colour' in m for m in messages)
        assert any('gp-ucb' in m for m in messages)

    @pytest.mark.parametrize('key', ['instance', 'kernel', 'policy',
                                     'horizon', 'noise_variance'])
    def test_missing_required_key(self, config, key):
        del config[key]
        with pytest.raises(ConfigurationError, match=key):
            validate_config(config)

    @pytest.mark.parametrize('key, value', [('horizon', 2.5),
                                            ('trials', 0),
                                            ('noise_variance', 0),
                                            ('noise', 'cauchy'),
                                            ('seed', -1),
                                            ('policy', 'ucb')])
    def test_invalid_scalar(self, config, key, value):
        config[key] = value
        with pytest.raises(ConfigurationError):
            validate_config(config)

    def test_gp_ucb_needs_sequential_schedule(self, config):
        config['policy'] = 'gp-ucb'
        with pytest.raises(ConfigurationError, match='sequential'):
            validate_config(config)

    def test_custom_schedule_must_cover_horizon(self, config):
        config['schedule'] = {'kind': 'custom', 'values': [0, 1, 2]}
        with pytest.raises(ConfigurationError, match='covers 3 rounds'):
            validate_config(config)

    @pytest.mark.parametrize('C', [-0.1, 'large'])
    def test_invalid_C(self, config, C):
        config['confidence']['C'] = C
        with pytest.raises(ConfigurationError):
            validate_config(config)

    def test_regime_constants_are_required(self, config):
        config['confidence']['regime'] = 'compact'
        config['confidence']['d'] = 1
        with pytest.raises(ConfigurationError) as error:
            validate_config(config)
        assert len(error.value.messages) == 3

    def test_initialization_only_for_two_stage_policy(self, config):
        config['initialization'] = {'t_init': 3}
        with pytest.raises(ConfigurationError, match='gp-bucb-init'):
            validate_config(config)

    def test_initialization_needs_size_or_constants(self, config):
        config['policy'] = 'gp-bucb-init'
        config['kernel']['family'] = 'matern'
        config['initialization'] = {'nu': 1.0}
        with pytest.raises(ConfigurationError, match='epsilon'):
            validate_config(config)

    def test_tabular_rejects_decision_set_and_redraw(self, config,
                                                     unit_config_path):
        config['instance'] = {'source': 'tabular',
                              'path': unit_config_path + 'table.csv',
                              'payoff_column': 'payoff',
                              'redraw': True}
        with pytest.raises(ConfigurationError) as error:
            validate_config(config)
        assert len(error.value.messages) == 2

    def test_tabular_path_must_exist(self, config):
        config['instance'] = {'source': 'tabular', 'path': 'missing.csv',
                              'payoff_column': 'payoff'}
        del config['decision_set']
        with pytest.raises(ConfigurationError, match='missing.csv'):
            validate_config(config)


class Test_initialization:

    def test_all_dicts_created(self):
        experiment = Experiment()
        assert hasattr(experiment, 'experiment_params')
        assert hasattr(experiment, 'results')
        assert hasattr(experiment, 'results_hash_dict')

    def test_objects_are_built(self, experiment):
        assert len(experiment.decision_set) == 25
        assert experiment.kernel.family == 'rbf'
        assert experiment.schedule.B == 3
        assert experiment.t_init == 0
        assert experiment.confidence.C == 0.5
        assert experiment.confidence.n_decisions == 25

    def test_loads_yaml_file(self, unit_config_path):
        experiment = Synthetic(unit_config_path + 'minimal.yaml')
        assert experiment.horizon == 12
        assert experiment.experiment_params_yaml.endswith('minimal.yaml')

    def test_invalid_parameter_type_raises_error(self):
        with pytest.raises(ValueError):
            Synthetic(42)

    def test_dimension_mismatch_raises_error(self, config):
        config['kernel']['lengthscales'] = [0.2, 0.2]
        with pytest.raises(ConfigurationError, match='dimension'):
            Synthetic(config)

    def test_base_experiment_has_no_decision_set(self, config):
        with pytest.raises(NotImplementedError):
            Experiment(config)

    def test_auto_C_is_bound_of_decision_set(self, config):
        config['confidence']['C'] = 'auto'
        experiment = Synthetic(config)
        expected = infogain.bound_C(experiment.kernel,
                                    experiment.noise_variance,
                                    experiment.decision_set, 3)
        assert experiment.confidence.C == expected
        assert 'infogain.C' in experiment.show()

    def test_config_hash_ignores_output_dir(self, config):
        first = Synthetic(config)
        config['output_dir'] = 'elsewhere'
        assert Synthetic(config).config_hash == first.config_hash
        config['seed'] = 8
        assert Synthetic(config).config_hash != first.config_hash

    def test_rkhs_regime_uses_information_report(self, config):
        config['confidence'] = {'regime': 'rkhs', 'M': 1.0, 'C': 0.0}
        experiment = Synthetic(config)
        report = infogain.information_report(experiment, T=12)
        assert experiment.confidence.gamma_at(12) == \
            report['upper_bracket'][-1]


class Test_two_stage_experiment:

    @pytest.fixture
    def two_stage_config(self, config):
        config['policy'] = 'gp-bucb-init'
        config['kernel'] = {'family': 'matern', 'lengthscales': [0.2]}
        config['initialization'] = {'nu': 1.0, 'epsilon': 0.5}
        config['confidence']['C'] = 'auto'
        return config

    def test_size_from_constants(self, two_stage_config):
        experiment = Synthetic(two_stage_config)
        assert experiment.t_init == 4
        assert experiment.schedule.t_init == 4
        assert experiment.base_schedule.B == 3

    def test_explicit_size_wins(self, two_stage_config):
        two_stage_config['initialization'] = {'t_init': 6}
        assert Synthetic(two_stage_config).t_init == 6

    def test_auto_C_uses_initialized_bound(self, two_stage_config):
        experiment = Synthetic(two_stage_config)
        expected = infogain.bound_C(experiment.kernel,
                                    experiment.noise_variance,
                                    experiment.decision_set, 3,
                                    mode='initialized', t_init=4)
        assert experiment.confidence.C == expected

    def test_size_beyond_horizon_raises_error(self, two_stage_config):
        two_stage_config['initialization'] = {'nu': 4.0, 'epsilon': 0.5}
        with pytest.raises(ConfigurationError, match='horizon'):
            Synthetic(two_stage_config)


class Test_Synthetic:

    def test_trials_draw_own_payoffs(self, experiment):
        first = experiment.instance(0).payoffs
        second = experiment.instance(1).payoffs
        assert not np.array_equal(first, second)
        assert_array_equal(experiment.instance(1).payoffs, second)

    def test_shared_payoffs_without_redraw(self, config):
        config['instance']['redraw'] = False
        experiment = Synthetic(config)
        assert experiment.instance(1) is experiment.instance(0)

    def test_change_parameters_keeps_class(self, experiment):
        new = experiment.change_parameters({'decision_set': {'resolution': 9}})
        assert isinstance(new, Synthetic)
        assert len(new.decision_set) == 9
        assert new.experiment_params['decision_set']['lower'] == [0.0]


class Test_Tabular:

    def test_decisions_come_from_table(self, unit_config_path):
        experiment = Tabular(unit_config_path + 'tabular.yaml')
        assert len(experiment.decision_set) == 5
        assert experiment.confidence.n_decisions == 5
        assert experiment.instance(0) is experiment.instance(2)
        assert experiment.redraw is False

    def test_from_config_picks_class(self, unit_config_path, config):
        assert isinstance(from_config(unit_config_path + 'tabular.yaml'),
                          Tabular)
        assert isinstance(from_config(config), Synthetic)


class Test_saving_and_loading:

    def test_load_restores_experiment(self, tmpdir, experiment):
        gpbucb.harness.run_experiment(experiment, str(tmpdir.join('out')))
        file = str(tmpdir.join('experiment.h5'))
        experiment.save(file)
        loaded = Synthetic(file=file)
        assert loaded.experiment_params == experiment.experiment_params
        assert loaded.config_hash == experiment.config_hash
        assert loaded.show() == experiment.show()
        assert_array_equal(loaded.results['harness.aggregate']['t'],
                           experiment.results['harness.aggregate']['t'])

    def test_loaded_results_are_reused(self, mocker, tmpdir, experiment):
        gpbucb.harness.run_experiment(experiment, str(tmpdir.join('a')))
        file = str(tmpdir.join('experiment.h5'))
        experiment.save(file)
        loaded = Synthetic(file=file)
        spy = mocker.spy(gpbucb.harness, 'run_trial')
        gpbucb.harness.run_experiment(loaded, str(tmpdir.join('b')))
        spy.assert_not_called()

    def test_save_stores_all_dicts(self, tmpdir, empty_experiment):
        empty_experiment.results['test'] = 1
        file = str(tmpdir.join('test.h5'))
        empty_experiment.save(file)
        output = gpbucb.input_output.load_h5(file)
        assert output['results'] == {'test': 1}


class Test_meta_functions:

    def test_show(self, empty_experiment):
        assert empty_experiment.show() == []
        empty_experiment.results['spam'] = 1
        empty_experiment.results['ham'] = 2
        assert empty_experiment.show() == ['ham', 'spam']

    def test_change_parameters_returns_new_experiment(self, experiment):
        new = experiment.change_parameters({'horizon': 20})
        assert new is not experiment
        assert new.horizon == 20
        assert experiment.horizon == 12

    def test_change_parameters_with_overwrite(self, experiment):
        experiment.results['test'] = 1
        experiment.change_parameters({'schedule': {'B': 4}}, overwrite=True)
        assert experiment.base_schedule.B == 4
        assert experiment.results == {}
        assert experiment.results_hash_dict == {}

    def test_changed_parameters_are_validated(self, experiment):
        with pytest.raises(ConfigurationError):
            experiment.change_parameters({'horizon': 0})

    def test_copy_is_independent(self, experiment):
        twin = experiment.copy()
        twin.experiment_params['kernel']['lengthscales'] = [0.9]
        twin.results['test'] = 1
        assert experiment.experiment_params['kernel']['lengthscales'] == [0.2]
        assert 'test' not in experiment.results
        check_dicts_are_equal(twin.experiment_params['decision_set'],
                              experiment.experiment_params['decision_set'])


class Test_clear_results:

    def test_clear_all(self, empty_experiment):
        empty_experiment.results['a'] = 1
        empty_experiment.results_hash_dict['asdjfkl'] = {'a': 1,
                                                         'params': []}
        empty_experiment.clear_results()
        assert empty_experiment.results == {}
        assert empty_experiment.results_hash_dict == {}

    def test_clear_one(self, empty_experiment):
        empty_experiment.results['a'] = 1
        empty_experiment.results['b'] = 2
        empty_experiment.results_hash_dict['asdjfkl'] = {'a': 1,
                                                         'params': []}
        empty_experiment.results_hash_dict['lkjhfds'] = {'b': 2,
                                                         'params': []}
        empty_experiment.clear_results('a')
        assert list(empty_experiment.results) == ['b']
        assert list(empty_experiment.results_hash_dict) == ['lkjhfds']
