"""Settings configuration."""

from ._01_graph import *
from ._02_extractors import *
from ._03_learner import *
from ._04_executor import *
from ._05_baseline import *
from ._06_runtime import *

"""Import last so every conf section is registered."""
from ._07_fields import *
