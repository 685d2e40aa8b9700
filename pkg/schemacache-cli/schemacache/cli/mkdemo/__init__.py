
from . writer import *

