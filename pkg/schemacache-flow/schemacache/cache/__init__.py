
from . policy import *
from . backend import *
from . tiered import *

