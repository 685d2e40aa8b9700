
from . trie import *

