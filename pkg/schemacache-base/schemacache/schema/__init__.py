
from . types import *
from . corpus import *
from . workload import *
from . report import *

