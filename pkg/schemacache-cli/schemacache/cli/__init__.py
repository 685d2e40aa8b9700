
from . tokenizer import *
from . serialize import *
from . config import *
from . engine import *
from . demo import *

