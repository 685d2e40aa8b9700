
from . cost import *
from . schedule import *
from . simulate import *
from . batch import *

