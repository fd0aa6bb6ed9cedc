# helpers shared by the solver, the CLI and the post-processing scripts

from .type_check import *
from .configuration import *
from .counter import *
from .logger import *
