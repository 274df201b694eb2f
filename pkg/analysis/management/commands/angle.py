from ._base import AnalysisCommand
from ...fiber_field import ess_sup_angle
from ...reports import ANGLE_COLUMNS, angle_report, angle_rows


class Command(AnalysisCommand):
    help = 'Supremum cosine angle between the spaces generated by sets A and B'

    def run(self, instance, options):
        profile = ess_sup_angle(instance.role('A'), instance.role('B'), tol=instance.tol)
        return angle_report(profile), ANGLE_COLUMNS, angle_rows(profile)
