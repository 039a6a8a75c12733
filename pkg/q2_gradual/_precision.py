# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

"""Precision on types (A ⊑ A′, "A is less precise than A′") and on terms.

Type precision derivations are unique, so `type_prec` is a decision
procedure that also returns the derivation. Term precision is searched
for with backtracking over the cast rules, which are the only rules that
overlap.
"""

import dataclasses
import itertools
from dataclasses import dataclass, field
from typing import (Iterator, List, Mapping, Optional, Sequence, Tuple,
                    Union)

from q2_gradual._core import (Arrow, Base, BaseT, GBase, GFUN, GROUNDS,
                              Ground, Type, Unknown, UNKNOWN, all_types,
                              ground_to_type, typeof)
from q2_gradual._abt import (ABlame, ALam, App, Blame, Inject, Lam, Lit,
                             Project, Var, is_blame, size)
from q2_gradual._typecheck import (TypingError, _Meta, check_core,
                                   reconstruct)


@dataclass(frozen=True)
class UnkUnk:
    @property
    def less(self) -> Type:
        return UNKNOWN

    @property
    def more(self) -> Type:
        return UNKNOWN


@dataclass(frozen=True)
class UnkGround:
    """★ ⊑ B, witnessed by ⌈g⌉ ⊑ B."""
    g: Ground
    sub: 'TypePrecDeriv'

    def __post_init__(self):
        if self.sub.less != ground_to_type(self.g):
            raise ValueError('The premise of unk⊑ must start from ⌈%s⌉, not'
                             ' %s.' % (self.g, self.sub.less))

    @property
    def less(self) -> Type:
        return UNKNOWN

    @property
    def more(self) -> Type:
        return self.sub.more


@dataclass(frozen=True)
class BaseP:
    base: Base

    @property
    def less(self) -> Type:
        return BaseT(self.base)

    @property
    def more(self) -> Type:
        return BaseT(self.base)


@dataclass(frozen=True)
class FunP:
    dom: 'TypePrecDeriv'
    cod: 'TypePrecDeriv'

    @property
    def less(self) -> Type:
        return Arrow(self.dom.less, self.cod.less)

    @property
    def more(self) -> Type:
        return Arrow(self.dom.more, self.cod.more)


TypePrecDeriv = Union[UnkUnk, UnkGround, BaseP, FunP]

UNK_UNK = UnkUnk()


def conclusion(d) -> Tuple[Type, Type]:
    return d.less, d.more


@dataclass(frozen=True)
class PrecTriple:
    less: Type
    more: Type
    deriv: TypePrecDeriv

    def __post_init__(self):
        if conclusion(self.deriv) != (self.less, self.more):
            raise ValueError('The derivation concludes %s ⊑ %s, not %s ⊑ %s.'
                             % (*conclusion(self.deriv), self.less,
                                self.more))

    @classmethod
    def of(cls, deriv: TypePrecDeriv) -> 'PrecTriple':
        return cls(deriv.less, deriv.more, deriv)


def type_prec(a: Type, b: Type) -> Optional[TypePrecDeriv]:
    match a, b:
        case Unknown(), Unknown():
            return UNK_UNK
        case Unknown(), BaseT(base):
            return UnkGround(GBase(base), BaseP(base))
        case Unknown(), Arrow():
            sub = type_prec(ground_to_type(GFUN), b)
            return None if sub is None else UnkGround(GFUN, sub)
        case BaseT(x), BaseT(y) if x == y:
            return BaseP(x)
        case Arrow(a1, a2), Arrow(b1, b2):
            dom, cod = type_prec(a1, b1), type_prec(a2, b2)
            if dom is None or cod is None:
                return None
            return FunP(dom, cod)
    return None


def refl_prec(a: Type) -> TypePrecDeriv:
    match a:
        case Unknown():
            return UNK_UNK
        case BaseT(base):
            return BaseP(base)
        case Arrow(dom, cod):
            return FunP(refl_prec(dom), refl_prec(cod))
    raise TypeError('Not a type: %r' % (a,))


def all_type_prec(a: Type, b: Type) -> Iterator[TypePrecDeriv]:
    """Every derivation of a ⊑ b, found by trying every rule."""
    if isinstance(a, Unknown):
        if isinstance(b, Unknown):
            yield UNK_UNK
        for g in GROUNDS:
            for sub in all_type_prec(ground_to_type(g), b):
                yield UnkGround(g, sub)
    if isinstance(a, BaseT) and a == b:
        yield BaseP(a.base)
    if isinstance(a, Arrow) and isinstance(b, Arrow):
        yield from (FunP(d, c) for d, c in itertools.product(
            list(all_type_prec(a.dom, b.dom)),
            list(all_type_prec(a.cod, b.cod))))


def ground_prec_inverse(d: TypePrecDeriv, g: Ground) -> TypePrecDeriv:
    """Any derivation of ★ ⊑ ⌈g⌉ is unk⊑ over ⌈g⌉ ⊑ ⌈g⌉; return that
    premise."""
    if not (isinstance(d, UnkGround) and d.g == g
            and d.more == ground_to_type(g)):
        raise ValueError('Expected a derivation of * ⊑ %s, got %r.'
                         % (ground_to_type(g), d))
    return d.sub


@dataclass(frozen=True)
class PVar:
    index: int


@dataclass(frozen=True)
class PLit:
    lit: object


@dataclass(frozen=True)
class PApp:
    fn: 'TermPrecDeriv'
    arg: 'TermPrecDeriv'


@dataclass(frozen=True)
class PLam:
    """⊑-lam; `dom` is the rule's implicit c : A ⊑ C for the binder."""
    dom: TypePrecDeriv
    body: 'TermPrecDeriv'


@dataclass(frozen=True)
class PInjL:
    g: Ground
    sub: 'TermPrecDeriv'


@dataclass(frozen=True)
class PInjR:
    g: Ground
    sub: 'TermPrecDeriv'


@dataclass(frozen=True)
class PProjL:
    h: Ground
    sub: 'TermPrecDeriv'


@dataclass(frozen=True)
class PProjR:
    h: Ground
    sub: 'TermPrecDeriv'


@dataclass(frozen=True)
class PBlame:
    a: Type


TermPrecDeriv = Union[PVar, PLit, PApp, PLam, PInjL, PInjR, PProjL, PProjR,
                      PBlame]

RULE_NAMES = {
    PVar: 'var', PLit: 'lit', PApp: 'app', PLam: 'lam', PInjL: 'inj-L',
    PInjR: 'inj-R', PProjL: 'proj-L', PProjR: 'proj-R', PBlame: 'blame',
}


def premises(d: TermPrecDeriv) -> List[TermPrecDeriv]:
    match d:
        case PApp(fn, arg):
            return [fn, arg]
        case PLam(_, body):
            return [body]
        case PInjL(_, sub) | PInjR(_, sub) | PProjL(_, sub) | PProjR(_, sub):
            return [sub]
    return []


class IllTyped(ValueError):
    code = 'ill-typed'

    def __init__(self, side, error):
        self.side = side
        self.error = error
        super().__init__('The %s-precise term is not well typed, so no'
                         ' precision derivation exists for it: %s'
                         % (side, error))


Context = Sequence[PrecTriple]


def _less_types(ctx: Context):
    return tuple(t.less for t in ctx)


def _lefts(pairs):
    return tuple(a for a, _ in pairs)


# Unannotated lambdas and blame on either side get metavariables. Equations
# between types are solved as the search goes; a ⊑ t with `a` still unknown
# is deferred until the end, where metas left free become *. The state is
# persistent, so backtracking undoes bindings for free.

@dataclass(frozen=True)
class _State:
    solution: Mapping[int, object] = field(default_factory=dict)
    deferred: Tuple[Tuple[object, object], ...] = ()

    def resolve(self, t):
        while isinstance(t, _Meta) and t.id in self.solution:
            t = self.solution[t.id]
        return t

    def occurs(self, meta, t) -> bool:
        t = self.resolve(t)
        if isinstance(t, Arrow):
            return self.occurs(meta, t.dom) or self.occurs(meta, t.cod)
        return t == meta

    def bind(self, meta, t) -> '_State':
        return _State({**self.solution, meta.id: t}, self.deferred)

    def defer(self, a, t) -> '_State':
        return _State(self.solution, self.deferred + ((a, t),))

    def unify(self, a, b) -> Optional['_State']:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return self
        if isinstance(a, _Meta) or isinstance(b, _Meta):
            meta, other = (a, b) if isinstance(a, _Meta) else (b, a)
            return None if self.occurs(meta, other) else self.bind(meta,
                                                                   other)
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            st = self.unify(a.dom, b.dom)
            return None if st is None else st.unify(a.cod, b.cod)
        return None

    def zonk(self, t) -> Type:
        t = self.resolve(t)
        match t:
            case Arrow(dom, cod):
                return Arrow(self.zonk(dom), self.zonk(cod))
            case _Meta():
                return UNKNOWN
        return t


@dataclass(frozen=True)
class _PendingDomain:
    less: object
    more: object


class _Search:
    def __init__(self):
        self._ids = itertools.count()

    def fresh(self) -> _Meta:
        return _Meta(next(self._ids))

    def arrow(self, st, t):
        t = st.resolve(t)
        if isinstance(t, Arrow):
            return st, t
        if isinstance(t, _Meta):
            arr = Arrow(self.fresh(), self.fresh())
            return st.bind(t, arr), arr
        return None

    def below(self, st, a, t) -> Optional[_State]:
        """Constrain the state so that a ⊑ t."""
        a = st.resolve(a)
        match a:
            case Unknown():
                return st
            case BaseT():
                return st.unify(a, t)
            case Arrow(dom, cod):
                found = self.arrow(st, t)
                if found is None:
                    return None
                st, t = found
                st = self.below(st, dom, t.dom)
                return None if st is None else self.below(st, cod, t.cod)
        return st.defer(a, t)

    def settle(self, st) -> Optional[_State]:
        """Discharge every deferred constraint whose left side is known."""
        while True:
            deferred = st.deferred
            st = _State(st.solution)
            progress = False
            for a, t in deferred:
                if isinstance(st.resolve(a), _Meta):
                    st = st.defer(a, t)
                    continue
                progress = True
                st = self.below(st, a, t)
                if st is None:
                    return None
            if not progress:
                return st

    def type_of(self, st, ctx, m):
        """Type a less-precise subterm, or None when it is ill typed."""
        match m:
            case Var(i):
                return (ctx[i], st) if i < len(ctx) else None
            case Lit(lit):
                return BaseT(typeof(lit)), st
            case ALam(dom, body):
                found = self.type_of(st, (dom,) + ctx, body)
                return None if found is None \
                    else (Arrow(dom, found[0]), found[1])
            case Lam(body):
                dom = self.fresh()
                found = self.type_of(st, (dom,) + ctx, body)
                return None if found is None \
                    else (Arrow(dom, found[0]), found[1])
            case App(fn, arg):
                found = self.type_of(st, ctx, fn)
                found = found and self.arrow(found[1], found[0])
                if not found:
                    return None
                st, a = found
                found = self.type_of(st, ctx, arg)
                st = found and found[1].unify(found[0], a.dom)
                return None if st is None else (a.cod, st)
            case Inject(body, g):
                found = self.type_of(st, ctx, body)
                st = found and found[1].unify(found[0], ground_to_type(g))
                return None if st is None else (UNKNOWN, st)
            case Project(body, h):
                found = self.type_of(st, ctx, body)
                st = found and found[1].unify(found[0], UNKNOWN)
                return None if st is None else (ground_to_type(h), st)
            case ABlame(ann):
                return ann, st
            case Blame():
                return self.fresh(), st
        raise TypeError('Not a term of the Cast Calculus: %r' % (m,))

    def run(self, ctx, m, m2, depth: int, st):
        """Yield (a, t, d, st) for each derivation of ctx ⊩ m ⊑ m2 ⦂ a ⊑ t
        found within `depth`; `a` and `t` are read through `st`."""
        if depth <= 0:
            return
        depth -= 1

        if is_blame(m2):
            found = self.type_of(st, _lefts(ctx), m)
            if found is not None:
                a, st1 = found
                yield a, a, PBlame(a), st1

        match m, m2:
            case Var(i), Var(j) if i == j and i < len(ctx):
                a, t = ctx[i]
                yield a, t, PVar(i), st
            case Lit(x), Lit(y) if x == y:
                a = BaseT(typeof(x))
                yield a, a, PLit(x), st
            case App(fn, arg), App(fn2, arg2):
                yield from self._app(ctx, fn, arg, fn2, arg2, depth, st)
            case (Lam() | ALam()), (Lam() | ALam()):
                dom = m.dom if isinstance(m, ALam) else self.fresh()
                dom2 = m2.dom if isinstance(m2, ALam) else self.fresh()
                st1 = self.below(st, dom, dom2)
                if st1 is not None:
                    inner = ((dom, dom2),) + ctx
                    for a, t, d, st2 in self.run(inner, m.body, m2.body,
                                                 depth, st1):
                        yield (Arrow(dom, a), Arrow(dom2, t),
                               PLam(_PendingDomain(dom, dom2), d), st2)

        match m:
            case Inject(body, g):
                for a, t, d, st1 in self.run(ctx, body, m2, depth, st):
                    st2 = st1.unify(a, ground_to_type(g))
                    if st2 is not None:
                        yield UNKNOWN, t, PInjL(g, d), st2
            case Project(body, h):
                for a, t, d, st1 in self.run(ctx, body, m2, depth, st):
                    st2 = st1.unify(a, UNKNOWN)
                    st2 = st2 and self.below(st2, ground_to_type(h), t)
                    if st2 is not None:
                        yield ground_to_type(h), t, PProjL(h, d), st2

        # casts on the right need a left side of type ★
        if isinstance(m2, (Inject, Project)) and self._may_be_unknown(
                st, _lefts(ctx), m):
            match m2:
                case Inject(body2, g):
                    for a, t, d, st1 in self.run(ctx, m, body2, depth, st):
                        st2 = st1.unify(a, UNKNOWN)
                        st2 = st2 and st2.unify(t, ground_to_type(g))
                        if st2 is not None:
                            yield UNKNOWN, UNKNOWN, PInjR(g, d), st2
                case Project(body2, h):
                    for a, t, d, st1 in self.run(ctx, m, body2, depth, st):
                        st2 = st1.unify(a, UNKNOWN)
                        st2 = st2 and st2.unify(t, UNKNOWN)
                        if st2 is not None:
                            yield (UNKNOWN, ground_to_type(h), PProjR(h, d),
                                   st2)

    def _may_be_unknown(self, st, ctx, m) -> bool:
        found = self.type_of(st, ctx, m)
        return found is not None and found[1].unify(found[0],
                                                    UNKNOWN) is not None

    def _app(self, ctx, fn, arg, fn2, arg2, depth, st):
        for a, t, d, st1 in self.run(ctx, fn, fn2, depth, st):
            found = self.arrow(st1, a)
            if found is None:
                continue
            st1, a = found
            found = self.arrow(st1, t)
            if found is None:
                continue
            st1, t = found
            for a_arg, t_arg, d_arg, st2 in self.run(ctx, arg, arg2, depth,
                                                     st1):
                st3 = st2.unify(a_arg, a.dom)
                st3 = st3 and st3.unify(t_arg, t.dom)
                if st3 is not None:
                    yield a.cod, t.cod, PApp(d, d_arg), st3


def _finish(st: _State, d) -> Optional[TermPrecDeriv]:
    # read the solved metas back into the derivation
    match d:
        case PLam(_PendingDomain(a, t), body):
            dom = type_prec(st.zonk(a), st.zonk(t))
            body = _finish(st, body)
            if dom is None or body is None:
                return None
            return PLam(dom, body)
        case PApp(fn, arg):
            fn, arg = _finish(st, fn), _finish(st, arg)
            if fn is None or arg is None:
                return None
            return PApp(fn, arg)
        case PInjL() | PInjR() | PProjL() | PProjR():
            sub = _finish(st, d.sub)
            return None if sub is None else dataclasses.replace(d, sub=sub)
        case PBlame(a):
            return PBlame(st.zonk(a))
    return d


SEARCH_SLACK = 8


def _annotate(ctx_types, m, side):
    try:
        return reconstruct(ctx_types, m)
    except TypingError as e:
        raise IllTyped(side, e) from e


def infer_term_prec(ctx: Context, m, m2
                    ) -> Optional[Tuple[TypePrecDeriv, TermPrecDeriv]]:
    """Search for a derivation of ctx ⊩ m ⊑ m2 ⦂ c and return (c, d).

    Terms may be core or annotated. Missing lambda domains and blame types
    are solved jointly for both sides during the search, since which types
    work depends on the derivation. Returns None when the bounded search
    finds nothing.
    """
    ctx = tuple(ctx)
    _annotate(_less_types(ctx), m, 'less')
    _annotate(tuple(t.more for t in ctx), m2, 'more')
    bound = size(m) + size(m2) + SEARCH_SLACK
    search = _Search()
    pairs = tuple((t.less, t.more) for t in ctx)
    for a, t, d, st in search.run(pairs, m, m2, bound, _State()):
        st = search.settle(st)
        if st is None:
            continue
        c = type_prec(st.zonk(a), st.zonk(t))
        d = _finish(st, d)
        if c is not None and d is not None \
                and _conclude(ctx, d, m, m2) == c:
            return c, d
    return None


def _domain_fits(lam, a) -> bool:
    return not isinstance(lam, ALam) or lam.dom == a


def _conclude(ctx: Tuple[PrecTriple, ...], d, m, m2
              ) -> Optional[TypePrecDeriv]:
    # the type precision d concludes, or None if a side condition fails
    match d:
        case PVar(i):
            if m == m2 == Var(i) and i < len(ctx):
                return ctx[i].deriv
        case PLit(lit):
            if m == m2 == Lit(lit):
                return BaseP(typeof(lit))
        case PApp(fn_d, arg_d):
            if isinstance(m, App) and isinstance(m2, App):
                c = _conclude(ctx, fn_d, m.fn, m2.fn)
                if isinstance(c, FunP) \
                        and _conclude(ctx, arg_d, m.arg, m2.arg) == c.dom:
                    return c.cod
        case PLam(dom, body_d):
            if isinstance(m, (Lam, ALam)) and isinstance(m2, (Lam, ALam)) \
                    and _domain_fits(m, dom.less) \
                    and _domain_fits(m2, dom.more):
                inner = (PrecTriple.of(dom),) + ctx
                c = _conclude(inner, body_d, m.body, m2.body)
                if c is not None:
                    return FunP(dom, c)
        case PInjL(g, sub):
            if isinstance(m, Inject) and m.g == g:
                c = _conclude(ctx, sub, m.body, m2)
                if c is not None and c.less == ground_to_type(g):
                    return UnkGround(g, c)
        case PInjR(g, sub):
            if isinstance(m2, Inject) and m2.g == g:
                c = _conclude(ctx, sub, m, m2.body)
                if c is not None \
                        and conclusion(c) == (UNKNOWN, ground_to_type(g)):
                    return UNK_UNK
        case PProjL(h, sub):
            if isinstance(m, Project) and m.h == h:
                c = _conclude(ctx, sub, m.body, m2)
                if isinstance(c, UnkGround) and c.g == h:
                    return c.sub
        case PProjR(h, sub):
            if isinstance(m2, Project) and m2.h == h:
                c = _conclude(ctx, sub, m, m2.body)
                if c == UNK_UNK:
                    return type_prec(UNKNOWN, ground_to_type(h))
        case PBlame(a):
            if is_blame(m2):
                try:
                    check_core(_less_types(ctx), m, a)
                except TypingError:
                    return None
                return refl_prec(a)
    return None


def derivation_conclusion(ctx: Context, d: TermPrecDeriv, m, m2
                          ) -> Optional[TypePrecDeriv]:
    return _conclude(tuple(ctx), d, m, m2)


def validate_term_prec(ctx: Context, d: TermPrecDeriv, m, m2) -> bool:
    """Whether `d` is a correct derivation of ctx ⊩ m ⊑ m2 at the type
    precision it computes."""
    return _conclude(tuple(ctx), d, m, m2) is not None


def enumerate_term_prec(ctx: Context, m, m2, depth: int,
                        type_depth: int = 1) -> Iterator[TermPrecDeriv]:
    """Every rule tree of height at most `depth` whose shape fits the two
    terms, without checking side conditions. Lambda domains and blame types
    range over `all_types(type_depth)`."""
    ctx = tuple(ctx)
    if depth <= 0:
        return
    depth -= 1
    types = list(all_types(type_depth))

    if is_blame(m2):
        yield from (PBlame(a) for a in types)
    match m, m2:
        case Var(i), Var(j) if i == j:
            yield PVar(i)
        case Lit(x), Lit(y) if x == y:
            yield PLit(x)
        case App(fn, arg), App(fn2, arg2):
            for fn_d in enumerate_term_prec(ctx, fn, fn2, depth, type_depth):
                for arg_d in enumerate_term_prec(ctx, arg, arg2, depth,
                                                 type_depth):
                    yield PApp(fn_d, arg_d)
        case (Lam() | ALam()), (Lam() | ALam()):
            doms = [m.dom] if isinstance(m, ALam) else types
            doms2 = [m2.dom] if isinstance(m2, ALam) else types
            for a, b in itertools.product(doms, doms2):
                c_dom = type_prec(a, b)
                if c_dom is None:
                    continue
                inner = (PrecTriple.of(c_dom),) + ctx
                for body_d in enumerate_term_prec(inner, m.body, m2.body,
                                                  depth, type_depth):
                    yield PLam(c_dom, body_d)
    if isinstance(m, Inject):
        yield from (PInjL(m.g, d) for d in enumerate_term_prec(
            ctx, m.body, m2, depth, type_depth))
    if isinstance(m, Project):
        yield from (PProjL(m.h, d) for d in enumerate_term_prec(
            ctx, m.body, m2, depth, type_depth))
    if isinstance(m2, Inject):
        yield from (PInjR(m2.g, d) for d in enumerate_term_prec(
            ctx, m, m2.body, depth, type_depth))
    if isinstance(m2, Project):
        yield from (PProjR(m2.h, d) for d in enumerate_term_prec(
            ctx, m, m2.body, depth, type_depth))
