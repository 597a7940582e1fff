# Configuration file for the Sphinx documentation builder.

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))

from gpbucb import __version__


project = 'gpbucb'
author = 'gpbucb developers'
release = __version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax',
    'numpydoc',
    ]

# custom-module-template.rst and custom-class-template.rst
templates_path = ['_templates']

# one page per function listed in the autosummary blocks of the modules
autosummary_generate = True

html_theme = 'alabaster'
html_theme_options = {
    'description': 'Gaussian process bandits with batch feedback',
}

numpydoc_show_class_members = False
