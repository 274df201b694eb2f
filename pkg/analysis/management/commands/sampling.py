import logging

from ._base import AnalysisCommand
from ...exceptions import ConfigurationError
from ...oracle import dense_injectivity, dense_space
from ...reports import SAMPLING_COLUMNS, sampling_report, sampling_rows
from ...sampling import injectivity_check, sampling_matrix_finite

logger = logging.getLogger(__name__)


class Command(AnalysisCommand):
    help = 'Injectivity of the sampling operator of the measuring set on one target space'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--target', help='Target set name (defaults to the first of targets)')

    def run(self, instance, options):
        measuring = instance.role('measuring')
        name = options.get('target') or (instance.roles.get('targets') or [None])[0]
        if name is None or name not in instance.sets:
            raise ConfigurationError(f"No target set named {name!r}")
        target = instance.sets[name]
        report = injectivity_check(measuring, target, instance.tol)
        text = sampling_report(report)

        if instance.is_finite:
            T = sampling_matrix_finite(instance.pair, instance.generators[instance.roles['measuring']])
            dense = dense_injectivity(T, dense_space(instance.pair, instance.generators[name], instance.tol), instance.tol)
            agreement = 'agrees' if dense == report.injective else 'DISAGREES'
            if dense != report.injective:
                logger.warning('Dense oracle disagrees with the fiberwise rank test on target %s', name)
            text += f"  dense oracle:    {'injective' if dense else 'not injective'} ({agreement})\n"
        return text, SAMPLING_COLUMNS, sampling_rows(report, target.grid.points)
