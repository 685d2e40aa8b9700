
from . config import *
from . rotary import *
from . transformer import *
from . kv import *
from . assembly import *

