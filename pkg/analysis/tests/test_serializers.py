import os
from unittest import mock

import numpy as np
from django.test import SimpleTestCase
from numpy.testing import assert_allclose

from analysis import config
from analysis.exceptions import ConfigurationError
from analysis.instances import build_instance, load_instance, validate_config
from analysis.serializers import (
    FiniteGeneratorSerializer,
    InstanceConfigSerializer,
    ProfileSpecSerializer,
)

FIXTURES = os.path.join(os.path.dirname(__file__), 'fixtures')


def finite_config(**overrides):
    data = {
        'realization': 'finite-group',
        'group': {'N': 4, 'M': 2},
        'sets': {
            'delta': [{'delta': 0}],
            'inline': [[[1, 0], [0, 1], [0, 0], [2, -1]]],
        },
        'A': 'delta',
        'B': 'inline',
    }
    data.update(overrides)
    return data


class InstanceConfigSerializerTests(SimpleTestCase):
    def test_valid_finite_config(self):
        serializer = InstanceConfigSerializer(data=finite_config())
        self.assertTrue(serializer.is_valid(), serializer.errors)
        values = serializer.validated_data['sets']['inline'][0]['values']
        self.assertEqual(values, [1, 1j, 0, 2 - 1j])

    def test_index_must_divide_order(self):
        serializer = InstanceConfigSerializer(data=finite_config(group={'N': 4, 'M': 3}))
        self.assertFalse(serializer.is_valid())
        self.assertIn('group', serializer.errors)

    def test_group_required_for_finite_groups(self):
        data = finite_config()
        del data['group']
        self.assertFalse(InstanceConfigSerializer(data=data).is_valid())

    def test_unknown_set_name(self):
        serializer = InstanceConfigSerializer(data=finite_config(B='missing'))
        self.assertFalse(serializer.is_valid())
        self.assertIn('missing', str(serializer.errors))

    def test_generator_length_and_delta_range(self):
        data = finite_config(sets={'short': [[[1, 0]]], 'far': [{'delta': 9}]}, A='short', B='far')
        serializer = InstanceConfigSerializer(data=data)
        self.assertFalse(serializer.is_valid())
        self.assertIn('expected N=4', str(serializer.errors))
        self.assertIn('outside Z_4', str(serializer.errors))

    def test_generator_limit(self):
        with mock.patch.object(config, 'MAX_GENERATORS', 1):
            data = finite_config(sets={'delta': [{'delta': 0}, {'delta': 1}]}, B='delta')
            self.assertFalse(InstanceConfigSerializer(data=data).is_valid())

    def test_target_limit(self):
        with mock.patch.object(config, 'MAX_TARGETS', 1):
            data = finite_config(measuring='delta', targets=['delta', 'inline'])
            serializer = InstanceConfigSerializer(data=data)
            self.assertFalse(serializer.is_valid())
            self.assertIn('targets', serializer.errors)

    def test_tolerances_must_be_in_unit_interval(self):
        serializer = InstanceConfigSerializer(data=finite_config(tolerances={'rank': 2.0}))
        self.assertFalse(serializer.is_valid())
        self.assertIn('tolerances', serializer.errors)

    def test_real_line_needs_grid(self):
        data = {
            'realization': 'real-line',
            'sets': {'g': [{'kind': 'gaussian'}]},
        }
        self.assertFalse(InstanceConfigSerializer(data=data).is_valid())
        data['grid'] = {'size': 8}
        serializer = InstanceConfigSerializer(data=data)
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data['grid']['truncation'], config.TRUNCATION)
        self.assertEqual(serializer.validated_data['grid']['sampling'], 'midpoint')


class GeneratorSpecTests(SimpleTestCase):
    def test_finite_spec_kinds(self):
        for spec in ([[1, 0]], {'delta': 2, 'coefficient': [0, 1]}, {'random': True}):
            serializer = FiniteGeneratorSerializer(data=spec)
            self.assertTrue(serializer.is_valid(), serializer.errors)

    def test_finite_spec_ambiguity(self):
        for spec in ({'delta': 0, 'random': True}, {}, {'random': False}, {'values': [[1, 0]], 'coefficient': [1, 0]}):
            self.assertFalse(FiniteGeneratorSerializer(data=spec).is_valid(), spec)

    def test_complex_entries(self):
        self.assertFalse(FiniteGeneratorSerializer(data=[[1, 0, 0]]).is_valid())
        self.assertFalse(FiniteGeneratorSerializer(data=[['a', 0]]).is_valid())

    def test_profile_parameters(self):
        self.assertTrue(ProfileSpecSerializer(data={'kind': 'bspline', 'p': 3}).is_valid())
        self.assertFalse(ProfileSpecSerializer(data={'kind': 'bspline'}).is_valid())
        self.assertFalse(ProfileSpecSerializer(data={'kind': 'gaussian', 'p': 3}).is_valid())
        self.assertFalse(ProfileSpecSerializer(data={'kind': 'gaussian', 'a': -1}).is_valid())
        self.assertFalse(ProfileSpecSerializer(data={'kind': 'bandlimit', 'c': 2, 'd': 1}).is_valid())
        self.assertFalse(ProfileSpecSerializer(data={'kind': 'wavelet'}).is_valid())


class InstanceTests(SimpleTestCase):
    def test_finite_instance(self):
        instance = build_instance(validate_config(finite_config()))
        self.assertTrue(instance.is_finite)
        self.assertEqual(instance.pair.L, 2)
        assert_allclose(instance.generators['delta'][0], [1, 0, 0, 0])
        self.assertEqual(instance.role('A').values.shape, (2, 2, 1))
        with self.assertRaises(ConfigurationError):
            instance.role('measuring')
        with self.assertRaises(ConfigurationError):
            instance.targets()

    def test_random_generators_follow_the_seed(self):
        data = validate_config(finite_config(sets={'noise': [{'random': True}]}, A='noise', B='noise'))
        first = build_instance(data, seed=5).generators['noise'][0]
        again = build_instance(data, seed=5).generators['noise'][0]
        other = build_instance(data, seed=6).generators['noise'][0]
        assert_allclose(first, again)
        self.assertFalse(np.allclose(first, other))

    def test_tolerance_resolution_order(self):
        data = validate_config(finite_config(tolerances={'rank': 1e-9, 'close': 1e-5}))
        instance = build_instance(data, tol_overrides={'close': 1e-4})
        self.assertEqual(instance.tol.relative_threshold, 1e-9)
        self.assertEqual(instance.tol.close_threshold, 1e-4)
        self.assertEqual(instance.tol.intersect_threshold, config.TOL_INTERSECT)

    def test_real_line_instance(self):
        instance = load_instance(os.path.join(FIXTURES, 'disjoint_bands.json'))
        self.assertFalse(instance.is_finite)
        self.assertEqual(instance.role('measuring').values.shape, (32, 7, 2))
        self.assertEqual(len(instance.targets()), 2)

    def test_custom_table_path_is_relative_to_config(self):
        data = validate_config({
            'realization': 'real-line',
            'grid': {'size': 4, 'truncation': 2},
            'sets': {'table': [{'kind': 'custom-table', 'path': 'profile_table.csv'}]},
            'A': 'table',
        })
        instance = build_instance(data, base_dir=FIXTURES)
        self.assertEqual(instance.role('A').values.shape, (4, 5, 1))

    def test_unreadable_config(self):
        with self.assertRaises(ConfigurationError):
            load_instance(os.path.join(FIXTURES, 'missing.json'))
        with self.assertRaises(ConfigurationError):
            validate_config(['not', 'an', 'object'])
        with self.assertRaises(ConfigurationError):
            validate_config(finite_config(realization='torus'))
