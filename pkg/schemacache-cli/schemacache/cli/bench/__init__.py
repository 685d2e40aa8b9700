
from . bench import *

