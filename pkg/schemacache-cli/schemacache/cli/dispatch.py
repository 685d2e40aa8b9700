"""
Table-granular KV cache engine for schema prompts: precompute table caches,
run and benchmark workloads, verify assembly against full prefill.
"""

import sys

from .. base import CommandParser
from . precompute import Processor as Precompute
from . run import Processor as Run
from . verify import Processor as Verify
from . bench import Processor as Bench
from . mkdemo import Processor as MakeDemo

COMMANDS = {
    "precompute": Precompute,
    "run": Run,
    "verify": Verify,
    "bench": Bench,
    "make-demo": MakeDemo,
}

def command_doc(cls):
    return sys.modules[cls.__module__].__doc__.strip()

def main(argv=None):

    parser = CommandParser(prog="schemacache", description=__doc__)

    commands = parser.add_subparsers(dest="command", required=True)

    for name, cls in COMMANDS.items():
        doc = command_doc(cls)
        sub = commands.add_parser(
            name, description=doc, help=doc.split("\n")[0],
        )
        cls.add_args(sub)

    args = vars(parser.parse_args(argv))

    cls = COMMANDS[args.pop("command")]

    return cls.execute(args)

def run():

    sys.exit(main())

