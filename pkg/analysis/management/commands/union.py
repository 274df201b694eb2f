from ._base import AnalysisCommand
from ...reports import UNION_COLUMNS, union_report, union_rows
from ...sampling import union_injectivity_check


class Command(AnalysisCommand):
    help = 'Injectivity of the sampling operator on the union of all pairwise target sums'

    def run(self, instance, options):
        targets = instance.targets()
        report = union_injectivity_check(instance.role('measuring'), targets, instance.tol)
        text = union_report(report, instance.roles['targets'])
        return text, UNION_COLUMNS, union_rows(report, targets[0].grid.points)
