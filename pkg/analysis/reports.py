"""Text reports and per-fiber CSV tables.

Floats are written with 17 significant digits and flags as 0/1, so equal
inputs give byte-identical output. Every number a text report prints also
appears in the matching CSV table.
"""

import csv
import io
import logging
from typing import Iterable, List, Optional, Sequence

from .fiber_field import AngleProfile, ClosednessReport, FrameBoundsReport
from .oracle import CrosscheckSummary
from .sampling import InjectivityReport, UnionReport

logger = logging.getLogger(__name__)

ANGLE_COLUMNS = ('fiber_index', 'x_value', 'dim_J_A', 'dim_J_B', 'angle', 'in_omega', 'in_omega_prime')
FRAME_COLUMNS = ('fiber_index', 'x_value', 'dim_J', 'lower', 'upper')
SAMPLING_COLUMNS = ('fiber_index', 'x_value', 'dim_J_target', 'rank', 'in_spectrum', 'measuring_upper')
UNION_COLUMNS = (
    'delta', 'theta', 'fiber_index', 'x_value', 'angle', 'in_omega_prime', 'dim_J_union', 'rank',
)
CROSSCHECK_COLUMNS = ('metric', 'value')


def fmt_float(value: Optional[float]) -> str:
    if value is None:
        return ''
    return format(float(value), '.16e')


def fmt_flag(value: bool) -> str:
    return '1' if value else '0'


def _text_float(value: Optional[float]) -> str:
    return 'none' if value is None else fmt_float(value)


def _indices(indices: Iterable[int]) -> str:
    indices = list(indices)
    return ' '.join(str(j) for j in indices) if indices else 'none'


def render_csv(columns: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence[str]]):
    with open(path, 'w', encoding='utf-8', newline='') as fh:
        fh.write(render_csv(columns, rows))
    logger.info('Wrote CSV to %s', path)


def angle_rows(profile: AngleProfile) -> List[List[str]]:
    return [
        [
            str(f.index),
            fmt_float(profile.grid.points[f.index]),
            str(f.dim_a),
            str(f.dim_b),
            fmt_float(f.angle),
            fmt_flag(f.in_omega),
            fmt_flag(f.in_omega_prime),
        ]
        for f in profile.fibers
    ]


def angle_report(profile: AngleProfile) -> str:
    lines = ['Supremum cosine angle']
    lines.append(f'  ess-sup over Omega:  {fmt_float(profile.ess_sup)}')
    if profile.argmax is None:
        lines.append('  argmax fiber:        none (Omega is empty)')
    else:
        lines.append(
            f'  argmax fiber:        {profile.argmax} '
            f'(x = {fmt_float(profile.grid.points[profile.argmax])})'
        )
    return '\n'.join(lines) + '\n'


def closedness_report(report: ClosednessReport) -> str:
    lines = ['Closedness of S(A) + S(B)']
    lines.append(f"  verdict:                {'closed' if report.closed else 'not closed'}")
    lines.append(f"  ess-sup over Omega':    {fmt_float(report.ess_sup_omega_prime)}")
    lines.append(f'  witness fibers:         {_indices(report.witnesses)}')
    lines.append(f'  intersection fibers:    {_indices(report.intersection_fibers)}')
    return '\n'.join(lines) + '\n'


def frame_bounds_rows(report: FrameBoundsReport, points) -> List[List[str]]:
    rows = []
    for f in report.fibers:
        lower = upper = None
        if f.bounds is not None:
            lower, upper = f.bounds.lower, f.bounds.upper
        rows.append([str(f.index), fmt_float(points[f.index]), str(f.dim), fmt_float(lower), fmt_float(upper)])
    return rows


def frame_bounds_report(report: FrameBoundsReport) -> str:
    lines = ['Frame bounds of the generated system']
    lines.append(f'  lower bound:     {_text_float(report.lower)}')
    lines.append(f'  upper bound:     {_text_float(report.upper)}')
    lines.append(f"  frame:           {'yes' if report.is_frame else 'no'}")
    lines.append(f"  riesz sequence:  {'yes' if report.is_riesz else 'no'}")
    return '\n'.join(lines) + '\n'


def sampling_rows(report: InjectivityReport, points) -> List[List[str]]:
    return [
        [
            str(f.index),
            fmt_float(points[f.index]),
            str(f.dim),
            str(f.rank),
            fmt_flag(f.dim > 0),
            fmt_float(f.measuring_upper_bound),
        ]
        for f in report.fibers
    ]


def sampling_report(report: InjectivityReport) -> str:
    lines = ['Sampling operator on the target space']
    lines.append(f"  verdict:         {'injective' if report.injective else 'not injective'}")
    lines.append(f'  bessel bound:    {_text_float(report.bessel_bound)}')
    if report.failing_fibers:
        lines.append('  failing fibers:')
        for f in report.failing_fibers:
            lines.append(f'    fiber {f.index} (label {f.label}): rank {f.rank} < dim {f.dim}')
    else:
        lines.append('  failing fibers:  none')
    return '\n'.join(lines) + '\n'


def union_rows(report: UnionReport, points) -> List[List[str]]:
    rows = []
    for pair in report.pair_reports:
        angles = pair.closedness.profile.fibers
        ranks = pair.injectivity.fibers if pair.injectivity is not None else None
        for j, f in enumerate(angles):
            dim = rank = ''
            if ranks is not None:
                dim, rank = str(ranks[j].dim), str(ranks[j].rank)
            rows.append([
                str(pair.delta), str(pair.theta), str(j), fmt_float(points[j]),
                fmt_float(f.angle), fmt_flag(f.in_omega_prime), dim, rank,
            ])
    return rows


def union_report(report: UnionReport, names: Sequence[str]) -> str:
    lines = ['Sampling operator on the union of pairwise sums']
    lines.append(f'  verdict:  {report.verdict.value}')
    for pair in report.pair_reports:
        label = f'({names[pair.delta]}, {names[pair.theta]})'
        closed = 'closed' if pair.hypothesis_holds else 'not closed'
        lines.append(f"  pair {label}: {closed}, ess-sup over Omega' {fmt_float(pair.closedness.ess_sup_omega_prime)}")
        if pair.injectivity is None:
            lines.append('    injectivity: not checked')
            continue
        injectivity = 'injective' if pair.injectivity.injective else 'not injective'
        failing = _indices(f.index for f in pair.injectivity.failing_fibers)
        lines.append(f'    injectivity: {injectivity}, failing fibers {failing}')
    if report.hypothesis_violations:
        violated = ', '.join(f'({names[d]}, {names[t]})' for d, t in report.hypothesis_violations)
        lines.append(f'  hypothesis violated by: {violated}')
    return '\n'.join(lines) + '\n'


def crosscheck_rows(summary: CrosscheckSummary) -> List[List[str]]:
    return [
        ['seed', str(summary.seed)],
        ['angle_instances', str(summary.angle_instances)],
        ['injectivity_instances', str(summary.injectivity_instances)],
        ['max_angle_deviation', fmt_float(summary.max_angle_deviation)],
        ['max_route_gap', fmt_float(summary.max_route_gap)],
        ['max_method_gap', fmt_float(summary.max_method_gap)],
        ['injectivity_disagreements', str(summary.injectivity_disagreements)],
        ['failures', str(len(summary.failures))],
        ['passed', fmt_flag(summary.passed)],
    ]


def crosscheck_report(summary: CrosscheckSummary) -> str:
    lines = ['Pipeline versus dense oracle']
    lines.append(f'  seed:                       {summary.seed}')
    lines.append(f'  angle instances:            {summary.angle_instances}')
    lines.append(f'  injectivity instances:      {summary.injectivity_instances}')
    lines.append(f'  max angle deviation:        {fmt_float(summary.max_angle_deviation)}')
    lines.append(f'  max route gap:              {fmt_float(summary.max_route_gap)}')
    lines.append(f'  max method gap:             {fmt_float(summary.max_method_gap)}')
    lines.append(f'  injectivity disagreements:  {summary.injectivity_disagreements}')
    lines.append(f'  failures:                   {len(summary.failures)}')
    for failure in summary.failures:
        lines.append(f'    [{failure.kind}] instance {failure.instance}: {failure.detail}')
    lines.append(f"  result:                     {'PASS' if summary.passed else 'FAIL'}")
    return '\n'.join(lines) + '\n'
