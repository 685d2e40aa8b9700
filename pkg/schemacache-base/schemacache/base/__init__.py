
from . base_command import BaseCommand, CommandParser
from . base_command import EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_VERIFY

