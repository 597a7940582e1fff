# -*- coding: utf-8 -*-
'''
Collection of routines for input and output related tasks.

Contains functions for reading experiment configurations from yaml files,
for saving and loading dictionaries or whole experiments to h5 files, and
for writing and reading the comma separated tables of the benchmark.

HDF5 Wrapper
************

.. autosummary::
    :toctree: _toctree/input_output/

    save_h5
    load_h5

Yaml
****

.. autosummary::
    :toctree: _toctree/input_output/

    load_config
    save_yaml

Tables
******

.. autosummary::
    :toctree: _toctree/input_output/

    write_csv
    read_table

Experiments
***********

.. autosummary::
    :toctree: _toctree/input_output/

    save_experiment
    load_experiment

Others
******

.. autosummary::
    :toctree: _toctree/input_output/

    create_hash
    convert_arrays_in_dict_to_lists

'''

from collections.abc import Iterable
from numbers import Integral, Number
import os
import hashlib as hl

import numpy as np
import yaml
import h5py

from .utils import ConfigurationError


def save_h5(file, d, *args, **kwargs):
    """
    Saves dictionary to h5 file.

    Parameters
    ----------
    file : str
        Output filename.
    d : dict
        Dictionary to be stored.
    """
    f = h5py.File(file, "w")
    try:
        _store_dict(f, d)
    finally:
        f.close()


def _store_dict(f, d):
    """
    Recursively stores dictionary in HDF5 file object.

    ``None`` values are skipped.

    Parameters
    ----------
    f : HDF5 file object
        Object dictionary is to be stored in.
    d : dict
        Dictionary to be stored.
    """
    for key, value in d.items():
        if value is None:
            continue
        if isinstance(value, dict):
            grp = f.create_group(str(key))
            if isinstance(key, Number):
                grp.attrs['numerical_key'] = True
            _store_dict(grp, value)
        else:
            if isinstance(key, Number):
                numerical_key = True
                key = str(key)
            else:
                numerical_key = False
            if isinstance(value, list):
                dtypes = [type(e) for e in value]
                if len(set(dtypes)) > 1:
                    raise ValueError('List to be stored must only contain '
                                     'same datatypes.')
                dtype = dtypes[0] if value else float
            else:
                dtype = type(value)

            if isinstance(value, str):
                dset = f.create_dataset(key, (1,), dtype=h5py.string_dtype())
                dset[0] = value
            elif dtype == str:
                dset = f.create_dataset(key, (len(value),),
                                        dtype=h5py.string_dtype())
                dset[:] = value
            else:
                value = np.array(value)
                dset = f.create_dataset(key, data=value)
            if numerical_key:
                dset.attrs['numerical_key'] = True


def load_h5(file, *args, **kwargs):
    """
    Loads dictionary from h5 file.

    Parameters
    ----------
    file : str
        File to be loaded.

    Returns
    -------
    dict
        Stored dictionary.
    """
    f = h5py.File(file, 'r')
    try:
        d = _retrieve_dict(f)
    finally:
        f.close()
    return d


def _retrieve_dict(f):
    """
    Recursively retrieves a dictionary from an HDF5 file object.

    Parameters
    ----------
    f : HDF5 file object
        Object dictionary is stored in.

    Returns
    -------
    dict
        Stored dictionary.
    """
    d = {}
    for key, group in f.items():
        # if key originally was a numerical key, convert it to number
        if group.attrs.get('numerical_key'):
            try:
                key = int(key)
            except ValueError:
                key = float(key)
        # if group is Group, retrieve recursively
        if isinstance(group, h5py.Group):
            d[key] = _retrieve_dict(group)
        # decode bytes to strings
        elif isinstance(group[()], bytes):
            d[key] = group[()].decode('utf8')
        # convert h5py strings to python strings if necessary
        elif ((group.dtype == h5py.string_dtype())
              and (len(group[()]) == 1)):
            d[key] = group.asstr()[()][0]
        # convert h5py string arrays to lists of strings
        elif group.dtype == h5py.string_dtype():
            d[key] = group.asstr()[()].tolist()
        # decode arrays of bytes to strings
        elif ((isinstance(group[()], Iterable)) and len(group[()]) > 0
              and (isinstance(group[0], bytes))):
            d[key] = np.char.decode(group[()], 'utf8')
        else:
            value = group[()]
            # scalars come back as numpy scalars
            d[key] = value.item() if np.ndim(value) == 0 else value
    return d


def convert_arrays_in_dict_to_lists(adict):
    """
    Recursively searches through a dict and replaces all numpy arrays by lists.
    """
    adict = dict(adict)
    for key, value in adict.items():
        if isinstance(value, np.ndarray):
            adict[key] = value.tolist()
        elif isinstance(value, np.generic):
            adict[key] = value.item()
        elif isinstance(value, dict):
            adict[key] = convert_arrays_in_dict_to_lists(value)
    return adict


def load_config(file):
    """
    Loads an experiment configuration from a yaml file.

    Parameters
    ----------
    file : str
        The file to be loaded.

    Returns
    -------
    dict
        Nested configuration dict; empty if the file is empty.

    Raises
    ------
    OSError
        If the file cannot be read.
    ConfigurationError
        If the file is no valid yaml or its top level is not a mapping.
    """
    with open(file, 'r') as stream:
        try:
            config = yaml.safe_load(stream)
        except yaml.YAMLError as exc:
            raise ConfigurationError(f'Could not parse {file}: {exc}')
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigurationError(f'{file} must contain a mapping of '
                                 f'configuration keys.')
    return config


def save_yaml(file, d):
    """
    Saves dictionary to yaml file with sorted keys.

    Parameters
    ----------
    file : str
        Output file name.
    d : dict
        Dictionary to be stored; numpy arrays are converted to lists.
    """
    with open(file, 'w') as f:
        yaml.safe_dump(convert_arrays_in_dict_to_lists(d), f,
                       default_flow_style=False, sort_keys=True)


def _column_format(value):
    if isinstance(value, (Integral, np.integer)):
        return '%d'
    return '%.17g'


def write_csv(file, columns, rows):
    """
    Writes a comma separated numeric table with header row.

    Columns holding integers in the first row are written as integers, all
    others with 17 significant digits, so rereading them gives the same
    values and repeated runs give identical files.

    Parameters
    ----------
    file : str
        Output file name.
    columns : list of str
        Column names in output order.
    rows : iterable of dict
        One dict per row, keyed by column names.
    """
    columns = list(columns)
    rows = [[row[key] for key in columns] for row in rows]
    if rows:
        fmt = [_column_format(value) for value in rows[0]]
    else:
        fmt = ['%.17g'] * len(columns)
    data = np.array(rows, dtype=float).reshape(-1, len(columns))
    np.savetxt(file, data, fmt=fmt, delimiter=',', header=','.join(columns),
               comments='', encoding='utf-8')


def read_table(file):
    """
    Reads a comma separated numeric table with header row.

    Parameters
    ----------
    file : str
        Input file name.

    Returns
    -------
    header : list of str
        Column names.
    data : np.ndarray
        Array of shape (n_rows, n_columns).

    Raises
    ------
    ValueError
        If the file is empty, a cell is not numeric, or a row has the wrong
        length.
    """
    if os.path.getsize(file) == 0:
        raise ValueError(f'{file} is empty.')
    try:
        table = np.genfromtxt(file, delimiter=',', names=True, dtype=float,
                              autostrip=True, deletechars='', loose=False,
                              invalid_raise=True, encoding='utf-8')
    except ValueError as err:
        raise ValueError(f'{file}: {str(err).strip()}') from err
    table = np.atleast_1d(table)
    header = list(table.dtype.names)
    data = np.column_stack([table[name] for name in header])
    return header, data.reshape(-1, len(header))


def save_experiment(file, experiment):
    """
    Save experiment to h5 file.

    The experiment's dictionaries (``experiment_params``, ``results``,
    ``results_hash_dict``) are stored.

    Parameters
    ----------
    file : str
        Output file name.
    experiment : Experiment object
        The experiment to be saved.
    """
    output = {'experiment_params': experiment.experiment_params,
              'results': experiment.results,
              'results_hash_dict': experiment.results_hash_dict}
    save_h5(file, output)


def load_experiment(file):
    """
    Load experiment dictionaries from h5 file.

    Parameters
    ----------
    file : str
        Input file name.

    Returns
    -------
    experiment_params : dict
        Experiment parameters.
    results : dict
        Dictionary containing most recently calculated results.
    results_hash_dict : dict
        Dictionary where all calculated results are stored.
    """
    input = load_h5(file)
    return (input['experiment_params'],
            input.get('results', {}),
            input.get('results_hash_dict', {}))


def create_hash(params, param_keys):
    """
    Create unique hash from values of parameters specified in param_keys.

    Parameters
    ----------
    params : dict
        Dictionary containing all experiment parameters.
    param_keys : list
        List specifying which parameters should be reflected in hash.

    Returns
    -------
    str
        Hash string.
    """

    label = ''
    # add all param values to one string
    for key in sorted(list(param_keys)):
        label += yaml.safe_dump(
            convert_arrays_in_dict_to_lists({key: params[key]}),
            sort_keys=True)
    # create and return hash (label must be encoded)
    return hl.md5(label.encode('utf-8')).hexdigest()
