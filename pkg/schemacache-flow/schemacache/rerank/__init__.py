
from . incidence import *
from . rerank import *

