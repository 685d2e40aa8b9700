
from . precompute import *

