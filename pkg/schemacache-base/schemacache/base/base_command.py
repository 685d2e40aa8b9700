
import argparse
import logging
import sys

from prometheus_client import start_http_server, Info, Enum

from .. log_level import LogLevel
from .. exceptions import ConfigError, DataError, VerifyFailed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3

logger = logging.getLogger(__name__)

class CommandParser(argparse.ArgumentParser):

    # argparse exits with 2 on usage errors, which is our data error code
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")

class BaseCommand:

    def __init__(self, **params):

        if not hasattr(__class__, "params_metric"):
            __class__.params_metric = Info(
                'params', 'Parameters configuration'
            )

        if not hasattr(__class__, "state_metric"):
            __class__.state_metric = Enum(
                'processor_state', 'Processor state',
                states=['starting', 'running', 'stopped']
            )

        __class__.state_metric.state('starting')

        __class__.params_metric.info({
            k: str(params[k])
            for k in params
            if k != "func"
        })

        log_level = params.get("log_level", LogLevel.INFO)
        if isinstance(log_level, str):
            log_level = LogLevel(log_level)

        self.log_level = log_level

        logging.basicConfig(
            level=log_level.to_logging(),
            format="%(asctime)s %(name)s %(levelname)s %(message)s",
        )

    @staticmethod
    def add_args(parser):

        parser.add_argument(
            '-l', '--log-level',
            type=LogLevel,
            default=LogLevel.WARN,
            choices=list(LogLevel),
            help=f'Log level (default: warn)'
        )

        parser.add_argument(
            '--metrics',
            action=argparse.BooleanOptionalAction,
            default=False,
            help=f'Metrics enabled (default: false)',
        )

        parser.add_argument(
            '-P', '--metrics-port',
            type=int,
            default=8000,
            help=f'Metrics port (default: 8000)',
        )

    def run(self):
        raise RuntimeError("Something should have implemented the run method")

    @classmethod
    def execute(cls, args):
        """Runs one command from parsed arguments, returns an exit code"""

        if args.get("metrics"):
            start_http_server(args["metrics_port"])

        try:

            p = cls(**args)

            __class__.state_metric.state('running')
            p.run()
            __class__.state_metric.state('stopped')

            return EXIT_OK

        except KeyboardInterrupt:
            print("Keyboard interrupt.")
            return EXIT_USAGE

        except ConfigError as e:
            print("Configuration error:", e, flush=True)
            return EXIT_USAGE

        except VerifyFailed as e:
            print("Verification failed:", e, flush=True)
            return EXIT_VERIFY

        except DataError as e:
            print(f"{type(e).__name__}:", e, flush=True)
            return EXIT_DATA

    @classmethod
    def start(cls, prog, doc, argv=None):

        parser = CommandParser(
            prog=prog,
            description=doc
        )

        cls.add_args(parser)

        args = parser.parse_args(argv)
        args = vars(args)

        logger.debug(f"Arguments: {args}")

        return cls.execute(args)

