from .experiment import *
from .synthetic import *
from .tabular import *
from .experiment import validate_config
from ..input_output import load_config


def from_config(config):
    """
    Build the experiment matching the instance source of a configuration.

    Parameters
    ----------
    config : [str | dict]
        Yaml file name or configuration dictionary.

    Returns
    -------
    Synthetic or Tabular
    """
    if isinstance(config, str):
        config = load_config(config)
    source = (config.get('instance') or {}).get('source')
    if source == 'tabular':
        return Tabular(config)
    return Synthetic(config)
