from ._base import AnalysisCommand
from ...exceptions import ConfigurationError
from ...fiber_field import frame_bounds
from ...reports import FRAME_COLUMNS, frame_bounds_report, frame_bounds_rows


class Command(AnalysisCommand):
    help = 'Fiberwise and global frame bounds of one generated system (set A by default)'

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument('--set', dest='set_name', help='Name of the set to analyze')

    def run(self, instance, options):
        name = options.get('set_name')
        if name is None:
            gen_set = instance.role('A')
        elif name in instance.sets:
            gen_set = instance.sets[name]
        else:
            raise ConfigurationError(f"Unknown set '{name}'")
        report = frame_bounds(gen_set, instance.tol)
        return frame_bounds_report(report), FRAME_COLUMNS, frame_bounds_rows(report, gen_set.grid.points)
