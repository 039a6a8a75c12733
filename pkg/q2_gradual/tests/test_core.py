# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import itertools

from hypothesis import given

from q2_gradual._core import (Arrow, BOOL, Base, GBase, GFUN, GROUNDS, NAT,
                              Num, UNKNOWN, all_types, consistent,
                              ground_of, ground_to_type, is_ground_type,
                              type_depth, type_size, typeof, BoolL)
from q2_gradual.tests._base import TestBase
from q2_gradual.tests.strategies import types

STAR_TO_STAR = Arrow(UNKNOWN, UNKNOWN)


class TestTypes(TestBase):
    def test_str(self):
        self.assertEqual(str(Arrow(NAT, Arrow(UNKNOWN, BOOL))),
                         '(-> Nat (-> * Bool))')
        self.assertEqual(str(GFUN), 'Fun')
        self.assertEqual(str(GBase(Base.BOOL)), 'Bool')

    def test_ground_to_type(self):
        self.assertEqual(ground_to_type(GBase(Base.NAT)), NAT)
        self.assertEqual(ground_to_type(GFUN), STAR_TO_STAR)

    def test_ground_of(self):
        self.assertEqual(ground_of(NAT), GBase(Base.NAT))
        self.assertEqual(ground_of(Arrow(NAT, NAT)), GFUN)
        self.assertIsNone(ground_of(UNKNOWN))

    def test_is_ground_type(self):
        self.assertTrue(is_ground_type(BOOL))
        self.assertTrue(is_ground_type(STAR_TO_STAR))
        self.assertFalse(is_ground_type(UNKNOWN))
        self.assertFalse(is_ground_type(Arrow(NAT, UNKNOWN)))

    def test_grounds_round_trip(self):
        for g in GROUNDS:
            self.assertEqual(ground_of(ground_to_type(g)), g)

    def test_typeof(self):
        self.assertIs(typeof(Num(0)), Base.NAT)
        self.assertIs(typeof(BoolL(False)), Base.BOOL)

    def test_negative_natural(self):
        with self.assertRaisesRegex(ValueError, 'non-negative.*-1'):
            Num(-1)

    def test_big_natural(self):
        self.assertEqual(Num(2 ** 80).n, 2 ** 80)

    def test_depth_and_size(self):
        a = Arrow(Arrow(NAT, NAT), UNKNOWN)
        self.assertEqual(type_depth(a), 2)
        self.assertEqual(type_size(a), 5)
        self.assertEqual(type_depth(BOOL), 0)

    def test_all_types_counts(self):
        self.assertEqual(len(list(all_types(0))), 3)
        self.assertEqual(len(list(all_types(1))), 3 + 9)
        self.assertEqual(len(set(all_types(2))), 3 + 12 ** 2)


class TestConsistency(TestBase):
    def test_examples(self):
        self.assertTrue(consistent(UNKNOWN, Arrow(NAT, BOOL)))
        self.assertTrue(consistent(Arrow(UNKNOWN, BOOL),
                                   Arrow(NAT, UNKNOWN)))
        self.assertFalse(consistent(NAT, BOOL))
        self.assertFalse(consistent(NAT, STAR_TO_STAR))
        self.assertFalse(consistent(Arrow(NAT, NAT), Arrow(BOOL, NAT)))

    @given(types())
    def test_reflexive(self, a):
        self.assertTrue(consistent(a, a))
        self.assertTrue(consistent(UNKNOWN, a))

    def test_symmetric(self):
        for a, b in itertools.product(all_types(2), repeat=2):
            self.assertEqual(consistent(a, b), consistent(b, a))

    def test_not_transitive(self):
        self.assertTrue(consistent(NAT, UNKNOWN))
        self.assertTrue(consistent(UNKNOWN, BOOL))
        self.assertFalse(consistent(NAT, BOOL))

    @given(types(), types())
    def test_unknown_bridges_any_pair(self, a, b):
        self.assertTrue(consistent(a, UNKNOWN))
        self.assertTrue(consistent(UNKNOWN, b))
        if a in (NAT, BOOL) and b in (NAT, BOOL):
            self.assertEqual(consistent(a, b), a == b)
