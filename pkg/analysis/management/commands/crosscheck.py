from django.core.management.base import CommandError

from ._base import EXIT_ACCEPTANCE_FAILURE, AnalysisCommand
from ... import config
from ...exceptions import ConfigurationError
from ...oracle import ANGLE_TOLERANCE, crosscheck_suite
from ...reports import CROSSCHECK_COLUMNS, crosscheck_report, crosscheck_rows


class Command(AnalysisCommand):
    help = 'Seeded comparison of the fiberwise pipeline against the dense finite-group oracle'

    requires_config = False

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--angle-instances', type=int, default=200)
        parser.add_argument('--injectivity-instances', type=int, default=100)
        parser.add_argument('--min-order', type=int, default=4)
        parser.add_argument('--max-order', type=int, default=64)
        parser.add_argument('--max-generators', type=int, default=3)
        parser.add_argument('--max-deviation', type=float, default=ANGLE_TOLERANCE)

    def run(self, instance, options):
        if min(options['angle_instances'], options['injectivity_instances']) < 0:
            raise ConfigurationError('Instance counts must be non-negative')
        if not 1 <= options['min_order'] <= options['max_order']:
            raise ConfigurationError('Need 1 <= --min-order <= --max-order')
        if options['max_generators'] < 1:
            raise ConfigurationError('--max-generators must be at least 1')
        if not options['max_deviation'] > 0:
            raise ConfigurationError('--max-deviation must be positive')

        seed = options['seed'] if options.get('seed') is not None else config.SEED
        tol = config.default_tolerance().replace(
            relative_threshold=options.get('tol_rank'),
            intersect_threshold=options.get('tol_intersect'),
            close_threshold=options.get('tol_close'),
        )
        self.summary = crosscheck_suite(
            seed=seed,
            angle_instances=options['angle_instances'],
            injectivity_instances=options['injectivity_instances'],
            min_order=options['min_order'],
            max_order=options['max_order'],
            max_generators=options['max_generators'],
            tol=tol,
            max_deviation=options['max_deviation'],
        )
        return crosscheck_report(self.summary), CROSSCHECK_COLUMNS, crosscheck_rows(self.summary)

    def after_output(self, options):
        if not self.summary.passed:
            raise CommandError(
                f'{len(self.summary.failures)} crosscheck failures', returncode=EXIT_ACCEPTANCE_FAILURE,
            )
