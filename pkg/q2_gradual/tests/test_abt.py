# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

from dataclasses import dataclass

from hypothesis import given, settings, strategies as st

from q2_gradual._core import GBase, GFUN, Base, Num, UNKNOWN, NAT
from q2_gradual._abt import (ABlame, ALam, App, Blame, IDENT, Inject, Lam,
                             Lit, MAX_INDEX, Project, Renaming, Span,
                             Substitution, UP, Var, bracket, cons, erase,
                             ext, extr, free_indices, from_renaming,
                             is_blame, is_closed, is_value, rename, shift,
                             size, subst_apply)
from q2_gradual.tests._base import TestBase
from q2_gradual.tests.strategies import (raw_terms, renamings, substitutions,
                                      values)

NAT_G = GBase(Base.NAT)


# A named representation with capture-avoiding substitution, used as an
# independent oracle for de Bruijn substitution.
@dataclass(frozen=True)
class NVar:
    name: str


@dataclass(frozen=True)
class NLam:
    name: str
    body: object


@dataclass(frozen=True)
class NApp:
    fn: object
    arg: object


def to_named(m, free_name, binder_name, scope=()):
    # `binder_name(depth)` must differ from every name already in scope and
    # from every free name of `m`
    match m:
        case Var(i):
            if i < len(scope):
                return NVar(scope[i])
            return NVar(free_name(i - len(scope)))
        case Lam(body):
            name = binder_name(len(scope))
            return NLam(name, to_named(body, free_name, binder_name,
                                       (name,) + scope))
        case App(fn, arg):
            return NApp(to_named(fn, free_name, binder_name, scope),
                        to_named(arg, free_name, binder_name, scope))
    raise TypeError(m)


def from_named(n, scope=()):
    match n:
        case NVar(x):
            if x in scope:
                return Var(scope.index(x))
            return Var(int(x[1:]) + len(scope))
        case NLam(x, body):
            return Lam(from_named(body, (x,) + scope))
        case NApp(fn, arg):
            return App(from_named(fn, scope), from_named(arg, scope))


def named_free(n):
    match n:
        case NVar(x):
            return {x}
        case NLam(x, body):
            return named_free(body) - {x}
        case NApp(fn, arg):
            return named_free(fn) | named_free(arg)


def named_subst(n, x, s, fresh):
    match n:
        case NVar(y):
            return s if y == x else n
        case NApp(fn, arg):
            return NApp(named_subst(fn, x, s, fresh),
                        named_subst(arg, x, s, fresh))
        case NLam(y, body):
            if y == x:
                return n
            if y in named_free(s):
                z = next(fresh)
                body = named_subst(body, y, NVar(z), fresh)
                y = z
            return NLam(y, named_subst(body, x, s, fresh))


def _fresh_names():
    i = 0
    while True:
        yield 'v%d' % i
        i += 1


def pure_terms(max_index=2):
    leaves = st.builds(Var, st.integers(0, max_index))
    return st.recursive(
        leaves, lambda inner: st.one_of(st.builds(Lam, inner),
                                        st.builds(App, inner, inner)),
        max_leaves=10)


class TestTerms(TestBase):
    def test_values(self):
        self.assertTrue(is_value(Lit(Num(1))))
        self.assertTrue(is_value(Lam(Var(0))))
        self.assertTrue(is_value(ALam(NAT, Var(0))))
        self.assertTrue(is_value(Inject(Inject(Lit(Num(1)), NAT_G), NAT_G)))
        self.assertFalse(is_value(Inject(App(Lam(Var(0)), Lit(Num(1))),
                                         NAT_G)))
        self.assertFalse(is_value(Project(Lit(Num(1)), NAT_G)))
        self.assertFalse(is_value(Var(0)))
        self.assertFalse(is_value(Blame()))

    def test_blame(self):
        self.assertTrue(is_blame(Blame()))
        self.assertTrue(is_blame(ABlame(NAT)))
        self.assertFalse(is_blame(Lit(Num(0))))

    def test_negative_index(self):
        with self.assertRaisesRegex(ValueError, 'natural.*-2'):
            Var(-2)

    def test_index_overflow(self):
        Var(MAX_INDEX)
        with self.assertRaises(OverflowError):
            Var(MAX_INDEX + 1)

    def test_spans_do_not_affect_equality(self):
        self.assertEqual(Var(0, span=Span(1, 1)), Var(0, span=Span(3, 7)))
        self.assertEqual(hash(Var(0, span=Span(1, 1))), hash(Var(0)))

    def test_erase(self):
        m = ALam(UNKNOWN, App(Project(Var(0), GFUN), ABlame(NAT)))
        self.assertEqual(erase(m), Lam(App(Project(Var(0), GFUN), Blame())))

    def test_size(self):
        self.assertEqual(size(App(Lam(Var(0)), Inject(Lit(Num(1)),
                                                      NAT_G))), 5)

    def test_free_indices(self):
        m = Lam(App(Var(0), App(Var(1), Var(3))))
        self.assertEqual(free_indices(m), frozenset([0, 2]))
        self.assertFalse(is_closed(m))
        self.assertTrue(is_closed(Lam(Lam(App(Var(1), Var(0))))))


class TestRenaming(TestBase):
    def test_call(self):
        rho = Renaming((5, 7), 2)
        self.assertEqual([rho(i) for i in range(4)], [5, 7, 2, 3])

    def test_extr(self):
        rho = extr(Renaming((3,), 0))
        self.assertEqual([rho(i) for i in range(4)], [0, 4, 1, 2])

    def test_shift_is_up(self):
        m = Lam(App(Var(0), Var(1)))
        self.assertEqual(shift(m), Lam(App(Var(0), Var(2))))
        self.assertEqual(rename(UP, m), shift(m))

    @settings(max_examples=1000, deadline=None)
    @given(raw_terms())
    def test_rename_matches_substitution(self, m):
        rho = Renaming((2, 0), 3)
        self.assertEqual(rename(rho, m),
                         subst_apply(from_renaming(rho), m))

    def test_annotations_preserved(self):
        m = ALam(NAT, App(Var(1), ABlame(UNKNOWN)))
        self.assertEqual(shift(m), ALam(NAT, App(Var(2), ABlame(UNKNOWN))))


class TestSubstitution(TestBase):
    @settings(max_examples=1000, deadline=None)
    @given(raw_terms())
    def test_identity(self, m):
        self.assertEqual(subst_apply(IDENT, m), m)

    @settings(max_examples=1000, deadline=None)
    @given(substitutions(), st.integers(0, 6))
    def test_ext_lifts_under_a_binder(self, sigma, i):
        lifted = ext(sigma)
        if i == 0:
            self.assertEqual(lifted(0), Var(0))
        else:
            self.assertEqual(lifted(i), shift(sigma(i - 1)))

    @settings(max_examples=1000, deadline=None)
    @given(raw_terms(), substitutions(), substitutions())
    def test_composition(self, m, sigma, tau):
        composed = Substitution(
            tuple(subst_apply(tau, sigma(i))
                  for i in range(len(sigma.prefix) + 8)), 0)
        # only the indices that occur matter
        bound = max(free_indices(m), default=-1) + 1
        if bound > len(composed.prefix):
            return
        self.assertEqual(subst_apply(tau, subst_apply(sigma, m)),
                         subst_apply(composed, m))

    def test_cons(self):
        sigma = cons(Lit(Num(9)), Substitution((), 4))
        self.assertEqual(sigma(0), Lit(Num(9)))
        self.assertEqual(sigma(2), Var(5))

    def test_bracket_beta(self):
        body = App(Var(0), Lam(App(Var(1), Var(2))))
        self.assertEqual(bracket(body, Var(7)),
                         App(Var(7), Lam(App(Var(8), Var(1)))))

    def test_bracket_does_not_capture(self):
        # (λ. λ. 1) applied to a term mentioning free index 0
        body = Lam(Var(1))
        self.assertEqual(bracket(body, Var(0)), Lam(Var(1)))

    def test_bracket_preserves_annotations(self):
        body = ALam(NAT, Inject(Var(1), GFUN))
        arg = ALam(UNKNOWN, Var(0))
        self.assertEqual(bracket(body, arg),
                         ALam(NAT, Inject(ALam(UNKNOWN, Var(0)), GFUN)))

    @settings(max_examples=1000, deadline=None)
    @given(pure_terms(), pure_terms())
    def test_bracket_agrees_with_named_substitution(self, body, arg):
        # the outermost binder of the body reuses a free name of the
        # argument, so naive substitution would capture it
        arg_free = sorted(free_indices(arg))
        body_free = {k - 1 for k in free_indices(body) if k > 0}
        clashing = [j for j in arg_free if j not in body_free]

        def body_binder(depth):
            if depth == 0 and clashing:
                return 'f%d' % clashing[0]
            return 'b%d' % depth

        def free_name(k):
            return 'f%d' % k

        named_body = to_named(
            body, lambda k: 's' if k == 0 else free_name(k - 1),
            body_binder, ())
        named_arg = to_named(arg, free_name, lambda d: 'b%d' % d)
        expected = named_subst(named_body, 's', named_arg, _fresh_names())
        self.assertEqual(bracket(body, arg), from_named(expected))

    def test_free_variables_of_bracket(self):
        body = App(Var(0), Var(2))
        self.assertEqual(free_indices(bracket(body, Var(4))),
                         frozenset([4, 1]))

    @settings(max_examples=1000, deadline=None)
    @given(raw_terms(), substitutions(), raw_terms(max_leaves=6))
    def test_ext_then_bracket_is_cons(self, n, sigma, v):
        self.assertEqual(bracket(subst_apply(ext(sigma), n), v),
                         subst_apply(cons(v, sigma), n))

    @settings(max_examples=1000, deadline=None)
    @given(values(), renamings, substitutions())
    def test_values_stay_values(self, v, rho, sigma):
        self.assertTrue(is_value(rename(rho, v)))
        self.assertTrue(is_value(subst_apply(sigma, v)))

    def test_blame_untouched(self):
        self.assertEqual(subst_apply(Substitution((Lit(Num(1)),), 0),
                                     Blame()), Blame())
