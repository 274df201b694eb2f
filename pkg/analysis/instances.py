"""Instance configs resolved into fibered generator sets.

A config file is read as JSON, validated by InstanceConfigSerializer and
then realized: finite-group generators are built as vectors of C^N and
fiberized through the Zak transform, real-line profiles are sampled on the
configured grid.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from . import config
from .exceptions import ConfigurationError
from .fiber_field import FiberedGeneratorSet
from .profiles import build_profile
from .serializers import FINITE_GROUP, InstanceConfigSerializer
from .subspace_geometry import RankTolerance
from .transforms import FiniteGroupPair, fiberize_group, fiberize_real_line

logger = logging.getLogger(__name__)


@dataclass
class Instance:
    realization: str
    sets: Dict[str, FiberedGeneratorSet]
    tol: RankTolerance
    seed: int
    pair: Optional[FiniteGroupPair] = None
    # Generator vectors per set, finite groups only (input to the dense oracle).
    generators: Dict[str, List[np.ndarray]] = field(default_factory=dict)
    roles: dict = field(default_factory=dict)

    def role(self, key: str) -> FiberedGeneratorSet:
        name = self.roles.get(key)
        if name is None:
            raise ConfigurationError(f"Config does not name a '{key}' set")
        return self.sets[name]

    def targets(self) -> List[FiberedGeneratorSet]:
        names = self.roles.get('targets')
        if not names:
            raise ConfigurationError("Config does not name any 'targets'")
        return [self.sets[name] for name in names]

    @property
    def is_finite(self) -> bool:
        return self.realization == FINITE_GROUP


def read_config(path: str) -> dict:
    try:
        with open(path, encoding='utf-8') as fh:
            return json.load(fh)
    except OSError as e:
        raise ConfigurationError(f'Could not read config {path}: {e}') from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f'Config {path} is not valid JSON: {e}') from e


def _format_errors(errors, prefix='') -> List[str]:
    lines = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            name = key if key != 'non_field_errors' else ''
            lines.extend(_format_errors(value, f'{prefix}.{name}' if prefix and name else prefix or name))
    elif isinstance(errors, list):
        for i, value in enumerate(errors):
            if isinstance(value, (dict, list)):
                lines.extend(_format_errors(value, f'{prefix}[{i}]'))
            else:
                lines.append(f'{prefix}: {value}' if prefix else str(value))
    else:
        lines.append(f'{prefix}: {errors}' if prefix else str(errors))
    return lines


def validate_config(data) -> dict:
    """Validated config data; ConfigurationError lists every field error."""
    if not isinstance(data, dict):
        raise ConfigurationError('Config must be a JSON object')
    serializer = InstanceConfigSerializer(data=data)
    if not serializer.is_valid():
        errors = _format_errors(serializer.errors)
        logger.error('Config validation failed: %s', '; '.join(errors))
        raise ConfigurationError('Invalid config: ' + '; '.join(errors))
    return serializer.validated_data


def resolve_tolerance(data: dict, overrides: Optional[dict] = None) -> RankTolerance:
    """Environment defaults, then the config's tolerances, then explicit overrides."""
    section = data.get('tolerances') or {}
    overrides = overrides or {}
    tol = config.default_tolerance().replace(
        relative_threshold=section.get('rank'),
        intersect_threshold=section.get('intersect'),
        close_threshold=section.get('close'),
    )
    return tol.replace(
        relative_threshold=overrides.get('rank'),
        intersect_threshold=overrides.get('intersect'),
        close_threshold=overrides.get('close'),
    )


def _finite_generator(spec: dict, N: int, rng) -> np.ndarray:
    if 'values' in spec:
        return np.array(spec['values'], dtype=complex)
    if 'delta' in spec:
        vector = np.zeros(N, dtype=complex)
        vector[spec['delta']] = spec.get('coefficient', 1.0)
        return vector
    # Complex standard normal: E|z|^2 = 1.
    return (rng.standard_normal(N) + 1j * rng.standard_normal(N)) / np.sqrt(2)


def _with_base_dir(spec: dict, base_dir: Optional[str]) -> dict:
    if base_dir is None or 'path' not in spec or os.path.isabs(spec['path']):
        return spec
    return {**spec, 'path': os.path.join(base_dir, spec['path'])}


def build_instance(
    data: dict,
    seed: Optional[int] = None,
    tol_overrides: Optional[dict] = None,
    base_dir: Optional[str] = None,
) -> Instance:
    """Realize validated config data.

    Random generators are drawn in declaration order from one generator
    seeded with ``seed``, else the config's seed, else FIBERSCOPE_SEED.
    Relative custom-table paths are taken from ``base_dir``.
    """
    if seed is None:
        seed = data.get('seed', config.SEED)
    tol = resolve_tolerance(data, tol_overrides)
    roles = {key: data[key] for key in ('A', 'B', 'measuring', 'targets') if key in data}

    if data['realization'] == FINITE_GROUP:
        pair = FiniteGroupPair(data['group']['N'], data['group']['M'])
        rng = np.random.default_rng(seed)
        generators = {
            name: [_finite_generator(spec, pair.N, rng) for spec in specs]
            for name, specs in data['sets'].items()
        }
        sets = {name: fiberize_group(gens, pair) for name, gens in generators.items()}
        logger.info('Finite-group instance N=%d M=%d with %d sets', pair.N, pair.M, len(sets))
        return Instance(data['realization'], sets, tol, seed, pair=pair, generators=generators, roles=roles)

    grid = data['grid']
    sets = {}
    for name, specs in data['sets'].items():
        profiles = [build_profile(_with_base_dir(spec, base_dir)) for spec in specs]
        sets[name] = fiberize_real_line(profiles, grid['size'], grid['truncation'], grid['sampling'])
    logger.info(
        'Real-line instance on %d %s fibers, K=%d, with %d sets',
        grid['size'], grid['sampling'], grid['truncation'], len(sets),
    )
    return Instance(data['realization'], sets, tol, seed, roles=roles)


def load_instance(path: str, seed: Optional[int] = None, tol_overrides: Optional[dict] = None) -> Instance:
    data = validate_config(read_config(path))
    return build_instance(data, seed, tol_overrides, base_dir=os.path.dirname(os.path.abspath(path)))
