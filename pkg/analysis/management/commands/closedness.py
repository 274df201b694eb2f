from ._base import AnalysisCommand
from ...fiber_field import closedness_diagnosis
from ...reports import ANGLE_COLUMNS, angle_rows, closedness_report


class Command(AnalysisCommand):
    help = "Closed / not closed verdict for S(A) + S(B), judged on Omega'"

    def run(self, instance, options):
        report = closedness_diagnosis(instance.role('A'), instance.role('B'), instance.tol)
        return closedness_report(report), ANGLE_COLUMNS, angle_rows(report.profile)
