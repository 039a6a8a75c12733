# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

from hypothesis import given, settings

from q2_gradual._core import (Arrow, BOOL, Base, BoolL, GBase, GFUN, NAT,
                              Num, UNKNOWN)
from q2_gradual._abt import (ABlame, ALam, App, Blame, Inject, Lam, Lit,
                             Project, Span, Var)
from q2_gradual._reduce import Blamed, Timeout, Val, evaluate
from q2_gradual._precision import BaseP, PInjL, PLit, UnkGround
from q2_gradual._syntax import (ParseError, UnboundName, derivation_to_json,
                                describe_outcome, outcome_to_json, parse,
                                parse_type, print_term, tokenize,
                                trace_to_json, type_prec_to_json)
from q2_gradual.tests._base import TestBase
from q2_gradual.tests.strategies import typed_terms

NAT_G = GBase(Base.NAT)
ONE = Lit(Num(1))
ID_NAT = ALam(NAT, Var(0))


class TestTokenize(TestBase):
    def test_positions(self):
        tokens = tokenize('(nat 1)\n  ; note\n  x')
        self.assertEqual([t.text for t in tokens], ['(', 'nat', '1', ')',
                                                    'x'])
        self.assertEqual(tokens[1].span, Span(1, 2))
        self.assertEqual(tokens[-1].span, Span(3, 3))

    def test_arrow_is_one_token(self):
        self.assertEqual([t.text for t in tokenize('(-> * Nat)')],
                         ['(', '->', '*', 'Nat', ')'])


class TestParse(TestBase):
    def test_lambda(self):
        self.assertEqual(parse('(lam (x : Nat) x)'), ID_NAT)
        self.assertEqual(parse('(lam (x) x)'), Lam(Var(0)))

    def test_shadowing(self):
        self.assertEqual(parse('(lam (x : Nat) (lam (x : Bool) x))'),
                         ALam(NAT, ALam(BOOL, Var(0))))
        self.assertEqual(parse('(lam (x : Nat) (lam (y : Bool) x))'),
                         ALam(NAT, ALam(BOOL, Var(1))))

    def test_casts_and_literals(self):
        self.assertEqual(parse('(proj Fun (inj Nat (nat 2)))'),
                         Project(Inject(Lit(Num(2)), NAT_G), GFUN))
        self.assertEqual(parse('false'), Lit(BoolL(False)))
        self.assertEqual(parse('(nat 123456789012345678901234567890)'),
                         Lit(Num(123456789012345678901234567890)))

    def test_blame(self):
        self.assertEqual(parse('blame'), Blame())
        self.assertEqual(parse('(blame (-> Nat *))'),
                         ABlame(Arrow(NAT, UNKNOWN)))

    def test_application(self):
        self.assertEqual(self.load_program('beta.gc'), App(ID_NAT, ONE))

    def test_spans(self):
        m = parse('\n  ((lam (x : Nat) x)\n   (nat 1))')
        self.assertEqual(m.span, Span(2, 3))
        self.assertEqual(m.fn.span, Span(2, 4))
        self.assertEqual(m.arg.span, Span(3, 4))

    def test_types(self):
        self.assertEqual(parse_type('(-> (-> Nat *) Bool)'),
                         Arrow(Arrow(NAT, UNKNOWN), BOOL))
        with self.assertRaisesRegex(ParseError, 'Expected a type'):
            parse_type('Fun')
        with self.assertRaises(ParseError):
            parse_type('(-> Nat)')


class TestParseErrors(TestBase):
    def test_unbound(self):
        with self.assertRaises(UnboundName) as cm:
            self.load_program('unbound.gc')
        self.assertEqual(cm.exception.name, 'y')
        self.assertEqual(cm.exception.span, Span(2, 12))
        self.assertEqual(cm.exception.code, 'unbound-name')
        self.assertTrue(str(cm.exception).startswith('2:12: '))

    def test_unclosed(self):
        with self.assertRaisesRegex(ParseError,
                                    "^1:16: Unexpected end of input"):
            self.load_program('unclosed.gc')

    def test_trailing(self):
        with self.assertRaisesRegex(ParseError, "1:9: Unexpected '\\('"):
            parse('(nat 1) (nat 2)')

    def test_keyword_as_name(self):
        with self.assertRaisesRegex(ParseError, 'cannot be used'):
            parse('(lam (lam : Nat) lam)')

    def test_bad_natural(self):
        with self.assertRaisesRegex(ParseError, 'natural number'):
            parse('(nat -1)')

    def test_non_ascii_digits(self):
        with self.assertRaisesRegex(ParseError,
                                    '^2:6: Expected a natural number'):
            self.load_program('nat_superscript.gc')
        with self.assertRaisesRegex(ParseError, 'natural number'):
            parse('(nat \u0664)')

    def test_bad_ground(self):
        with self.assertRaisesRegex(ParseError, 'ground type'):
            parse('(inj * (nat 1))')

    def test_empty(self):
        with self.assertRaisesRegex(ParseError, 'end of input'):
            parse('  ; nothing here\n')

    def test_stray_close(self):
        with self.assertRaisesRegex(ParseError, "Unexpected '\\)'"):
            parse(')')


class TestPrint(TestBase):
    def test_terms(self):
        self.assertEqual(print_term(ID_NAT), '(lam (x0 : Nat) x0)')
        self.assertEqual(print_term(Lam(Lam(App(Var(1), Var(0))))),
                         '(lam (x0) (lam (x1) (x0 x1)))')
        self.assertEqual(print_term(Var(2)), '#2')
        self.assertEqual(print_term(Inject(Lit(BoolL(True)),
                                           GBase(Base.BOOL))),
                         '(inj Bool true)')

    def test_blame(self):
        self.assertEqual(print_term(ABlame(NAT)), '(blame Nat)')
        self.assertEqual(print_term(ABlame(NAT), blame_types=False),
                         'blame')
        self.assertEqual(print_term(Blame()), 'blame')

    def test_files_round_trip(self):
        for filename in ('beta.gc', 'omega.gc', 'id_star.gc', 'core_lam.gc',
                         'blame_nat.gc'):
            with self.subTest(filename=filename):
                m = self.load_program(filename)
                self.assertEqual(parse(print_term(m)), m)

    @settings(max_examples=100, deadline=None)
    @given(typed_terms())
    def test_round_trip(self, pair):
        m, _ = pair
        self.assertEqual(parse(print_term(m)), m)

    def test_describe_outcome(self):
        self.assertEqual(describe_outcome(Val(ONE, 1)),
                         'value (nat 1) after 1 step')
        self.assertEqual(describe_outcome(Blamed(3)), 'blame after 3 steps')
        self.assertEqual(describe_outcome(Timeout(100)),
                         'timeout after 100 steps')


class TestJSON(TestBase):
    def test_outcome(self):
        self.assertEqual(outcome_to_json(Val(ONE, 2)),
                         {'outcome': 'value', 'steps': 2,
                          'value': '(nat 1)'})
        self.assertEqual(outcome_to_json(Timeout(5)),
                         {'outcome': 'timeout', 'steps': 5})

    def test_trace(self):
        m = App(ID_NAT, Project(Inject(ONE, NAT_G), NAT_G))
        out = evaluate(m, 10, trace=True)
        self.assertEqual(trace_to_json(out.trace), [
            {'index': 1, 'rule': 'xi', 'focus': 'collapse',
             'path': ['app-arg'], 'term': '((lam (x0 : Nat) x0) (nat 1))'},
            {'index': 2, 'rule': 'beta', 'focus': 'beta', 'path': [],
             'term': '(nat 1)'},
        ])

    def test_type_precision(self):
        c = UnkGround(NAT_G, BaseP(Base.NAT))
        self.assertEqual(type_prec_to_json(c), {
            'rule': 'unk', 'less': '*', 'more': 'Nat', 'ground': 'Nat',
            'premises': [{'rule': 'base', 'less': 'Nat', 'more': 'Nat',
                          'premises': []}]})

    def test_derivation(self):
        d = PInjL(NAT_G, PLit(Num(4)))
        self.assertEqual(derivation_to_json(d), {
            'rule': 'inj-L', 'ground': 'Nat',
            'premises': [{'rule': 'lit', 'literal': '(nat 4)',
                          'premises': []}]})
