
from . verify import *

