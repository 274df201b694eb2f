import logging

from django.core.management.base import BaseCommand, CommandError

from ... import config
from ...exceptions import FiberAnalysisError, NumericalInconsistencyError
from ...instances import load_instance
from ...reports import write_csv

logger = logging.getLogger(__name__)

EXIT_ACCEPTANCE_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_NUMERICAL_INCONSISTENCY = 3


class AnalysisCommand(BaseCommand):
    """Shared flags and error mapping for the analysis subcommands.

    Subclasses implement ``run(instance, options)`` returning
    ``(text, columns, rows)``; the text goes to stdout unless --quiet and
    the rows to --csv when given.
    """

    requires_config = True
    requires_system_checks = []

    def add_arguments(self, parser):
        if self.requires_config:
            parser.add_argument('--config', required=True, help='Instance config (JSON)')
        parser.add_argument('--csv', help='Write the per-fiber table to this path')
        parser.add_argument('--seed', type=int, help='Seed for random generators')
        parser.add_argument('--tol-rank', type=float, help='Relative singular-value cutoff')
        parser.add_argument('--tol-intersect', type=float, help='Principal-cosine cutoff for intersections')
        parser.add_argument('--tol-close', type=float, help='Angle margin below 1 for closedness')
        parser.add_argument('--quiet', action='store_true', help='Do not print the report')

    def tolerance_overrides(self, options) -> dict:
        return {
            'rank': options.get('tol_rank'),
            'intersect': options.get('tol_intersect'),
            'close': options.get('tol_close'),
        }

    def load(self, options):
        return load_instance(options['config'], options.get('seed'), self.tolerance_overrides(options))

    def run(self, instance, options):
        raise NotImplementedError

    def handle(self, *args, **options):
        config.log_configuration()
        try:
            instance = self.load(options) if self.requires_config else None
            text, columns, rows = self.run(instance, options)
        except NumericalInconsistencyError as e:
            logger.error('Numerical inconsistency: %s', e)
            raise CommandError(str(e), returncode=EXIT_NUMERICAL_INCONSISTENCY) from e
        except FiberAnalysisError as e:
            logger.error('%s: %s', type(e).__name__, e)
            raise CommandError(str(e), returncode=EXIT_CONFIG_ERROR) from e

        if options.get('csv'):
            try:
                write_csv(options['csv'], columns, rows)
            except OSError as e:
                raise CommandError(f"Could not write {options['csv']}: {e}", returncode=EXIT_CONFIG_ERROR) from e
        if not options.get('quiet'):
            self.stdout.write(text, ending='')
        self.after_output(options)

    def after_output(self, options):
        """Hook for commands whose exit status depends on the result."""
