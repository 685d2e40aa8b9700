
from . graph import *
from . plan import *

