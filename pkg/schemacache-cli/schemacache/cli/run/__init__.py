
from . runner import *

