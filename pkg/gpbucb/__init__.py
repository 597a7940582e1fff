from . import utils
from . import input_output
from . import kernels
from . import posterior
from . import feedback
from . import confidence
from . import infogain
from . import policies
from . import harness
from . import models

__version__ = '1.0.0'
