'''
Command line interface of gpbucb.

Usage:
    gpbucb run <config> [--set=<key=value>]... [--output-dir=<dir>] [-v]
    gpbucb infogain <config> [--set=<key=value>]... [--output-dir=<dir>]
                    [--steps=<T>] [-v]
    gpbucb init-size <family> <B> [--eta=<eta>] [--d=<d>] [--nu=<nu>]
                     [--epsilon=<epsilon>]
    gpbucb validate <config> [--set=<key=value>]... [-v]
    gpbucb -h | --help
    gpbucb --version

Commands:
    run         Run all trials of an experiment and write trials.csv,
                aggregate.csv, timing.csv and summary.yaml to the output
                directory.
    infogain    Write the greedy information gain curve to infogain.csv and
                print the bounds on the within-batch information gain and
                the standard deviation shrinkage within a batch.
    init-size   Print the initialization size and regret multiplier of a
                kernel family for batch size B.
    validate    Check a configuration without writing anything.

Options:
    --set=<key=value>     Override a config entry, e.g. schedule.B=5. The
                          value is read as yaml. Can be repeated.
    --output-dir=<dir>    Output directory, overrides the environment
                          variable GPBUCB_OUTPUT_DIR and the config file.
    --steps=<T>           Number of greedy steps [default: horizon].
    --eta=<eta>           Constant of the linear and rbf information bounds.
    --d=<d>               Dimension in the linear and rbf information bounds.
    --nu=<nu>             Constant of the Matern information bound.
    --epsilon=<epsilon>   Exponent of the Matern information bound.
    -v, --verbose         Log progress messages.
    -h, --help            Show this information.
    --version             Show the version.

Exit codes:
    0 success, 1 unexpected error, 2 configuration error, 3 numerical error,
    4 I/O error.
'''

import logging
import os
import sys

import docopt
import yaml

from . import __version__
from . import infogain
from . import input_output as io
from . import models
from .harness import run_experiment
from .policies import t_init_size
from .utils import ConfigurationError, NumericalError


log = logging.getLogger(__name__)

OUTPUT_DIR_ENV = 'GPBUCB_OUTPUT_DIR'
INFOGAIN_COLUMNS = ['step', 'decision_index', 'gain', 'cumulative_gain',
                    'upper_bracket']

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


def apply_overrides(config, overrides=(), output_dir=None, environ=None):
    """
    Apply command line and environment overrides to a configuration.

    Precedence is flag > environment > file.

    Parameters
    ----------
    config : dict
        Configuration as read from file; not modified.
    overrides : list of str
        Entries ``key.path=value``, the value parsed as yaml.
    output_dir : str, optional
        Value of ``--output-dir``.
    environ : mapping, optional
        Environment variables. Default is ``os.environ``.

    Returns
    -------
    dict
        Updated copy of `config`.

    Raises
    ------
    ConfigurationError
        If an override is malformed.
    """
    environ = os.environ if environ is None else environ
    config = {key: dict(value) if isinstance(value, dict) else value
              for key, value in config.items()}
    if environ.get(OUTPUT_DIR_ENV):
        config['output_dir'] = environ[OUTPUT_DIR_ENV]

    errors = []
    for override in overrides:
        key_path, sep, raw = override.partition('=')
        keys = key_path.strip().split('.')
        if not sep or not all(keys):
            errors.append(f"Override '{override}' is not of the form "
                          f"key.path=value.")
            continue
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError:
            errors.append(f"Cannot read the value of override '{override}'.")
            continue
        table = config
        for key in keys[:-1]:
            if not isinstance(table.get(key), dict):
                table[key] = {}
            table = table[key]
        table[keys[-1]] = value
    if errors:
        raise ConfigurationError(errors)

    if output_dir is not None:
        config['output_dir'] = output_dir
    return config


def parse_config(path, overrides=(), output_dir=None, environ=None):
    """
    Read, override and validate an experiment configuration.

    Parameters
    ----------
    path : str
        Yaml file.
    overrides, output_dir, environ
        See :func:`apply_overrides`.

    Returns
    -------
    dict
        Validated configuration with defaults filled in.

    Raises
    ------
    OSError
        If the file cannot be read.
    ConfigurationError
        Listing all problems of the configuration.
    """
    config = apply_overrides(io.load_config(path), overrides, output_dir,
                             environ)
    return models.validate_config(config)


def _run(args):
    config = parse_config(args['<config>'], args['--set'],
                          args['--output-dir'])
    experiment = models.from_config(config)
    aggregate = run_experiment(experiment)
    if aggregate:
        print(f"final mean average regret: "
              f"{aggregate['mean_avg_regret'][-1]:.6g}")
    print(f'results written to {experiment.output_dir}')


def _infogain(args):
    config = parse_config(args['<config>'], args['--set'],
                          args['--output-dir'])
    experiment = models.from_config(config)
    steps = args['--steps']
    T = experiment.horizon if steps in (None, 'horizon') else int(steps)
    report = infogain.information_report(experiment, T=T)
    os.makedirs(experiment.output_dir, exist_ok=True)
    rows = ({'step': k + 1,
             'decision_index': int(report['indices'][k]),
             'gain': float(report['greedy_curve'][k]),
             'cumulative_gain': float(report['cumulative_gain'][k]),
             'upper_bracket': float(report['upper_bracket'][k])}
            for k in range(len(report['indices'])))
    file = os.path.join(experiment.output_dir, 'infogain.csv')
    io.write_csv(file, INFOGAIN_COLUMNS, rows)

    B = experiment.base_schedule.B
    print(f'greedy information gain after {T} steps: '
          f"{report['cumulative_gain'][-1]:.6g} "
          f"(upper bracket {report['upper_bracket'][-1]:.6g})")
    C_raw = infogain.conditional_information_bound(experiment, mode='raw',
                                                   t_init=0)
    print(f'C (no initialization, B = {B}): {C_raw:.6g}')
    indices = report['indices']
    if B >= 2 and len(indices) >= B:
        D = experiment.decision_set
        # first B - 1 greedy points pending, the next one queried
        check = infogain.check_lemma1(
            experiment.kernel, experiment.noise_variance, [],
            [D[int(i)] for i in indices[:B - 1]], D[int(indices[B - 1])])
        if check.degenerate:
            print('standard deviation ratio within a batch: degenerate')
        else:
            print(f'standard deviation ratio within a batch: '
                  f'{check.ratio:.6g} <= {check.bound:.6g}: '
                  f"{'holds' if check.holds else 'violated'}")
    if experiment.t_init > 0:
        C_init = infogain.conditional_information_bound(experiment)
        print(f'C (initialization of {experiment.t_init}): {C_init:.6g}')
        if B >= 2:
            check = infogain.check_lemma2(
                experiment.kernel, experiment.noise_variance,
                experiment.decision_set, B, experiment.t_init)
            print(f'batch gain after initialization: {check.lhs:.6g} '
                  f'(upper bound {check.lhs_upper:.6g}) <= {check.rhs:.6g}: '
                  f"{'holds' if check.holds else 'violated'}")
    print(f'curve written to {file}')


def _init_size(args):
    constants = {}
    for name in ('eta', 'd', 'nu', 'epsilon'):
        value = args[f'--{name}']
        if value is not None:
            try:
                constants[name] = float(value)
            except ValueError:
                raise ConfigurationError(f'--{name} must be a number, got '
                                         f'{value!r}.')
    try:
        B = int(args['<B>'])
    except ValueError:
        raise ConfigurationError(f"B must be an integer, got {args['<B>']!r}.")
    t_init, multiplier = t_init_size(args['<family>'], B, **constants)
    print(f'T_init: {t_init}')
    print(f'multiplier: {multiplier:.6g}')


def _validate(args):
    config = parse_config(args['<config>'], args['--set'])
    models.from_config(config)
    print(f"{args['<config>']}: valid")


COMMANDS = {'run': _run,
            'infogain': _infogain,
            'init-size': _init_size,
            'validate': _validate}


def main(argv=None):
    """
    Entry point of the ``gpbucb`` command.

    Parameters
    ----------
    argv : list of str, optional
        Command line arguments. Default is ``sys.argv[1:]``.

    Returns
    -------
    int
        Exit code.
    """
    args = docopt.docopt(__doc__, argv=argv,
                         version=f'gpbucb {__version__}')
    logging.basicConfig(
        level=logging.INFO if args.get('--verbose') else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s')
    command = next(name for name in COMMANDS if args[name])
    try:
        COMMANDS[command](args)
    except ConfigurationError as err:
        for message in err.messages:
            print(f'configuration error: {message}', file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as err:
        print(f'configuration error: {err}', file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as err:
        print(f'numerical error: {err}', file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as err:
        print(f'I/O error: {err}', file=sys.stderr)
        return EXIT_IO
    except Exception as err:
        log.exception('Unexpected failure of %s.', command)
        print(f'error: {err}', file=sys.stderr)
        return EXIT_UNEXPECTED
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
