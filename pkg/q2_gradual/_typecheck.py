# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import itertools
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from q2_gradual._core import (Arrow, BaseT, Type, UNKNOWN, ground_to_type,
                              typeof)
from q2_gradual._abt import (ABlame, ALam, App, Blame, Inject, Lam, Lit,
                             Project, Span, Term, Var, erase)

TypeContext = Sequence[Type]


class TypingError(ValueError):
    code = 'type-error'

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is None:
            return self.message
        return '%s: %s' % (self.span, self.message)


class UnboundVariable(TypingError):
    code = 'unbound-variable'

    def __init__(self, index, span=None):
        self.index = index
        super().__init__('Variable with de Bruijn index %d is not bound by'
                         ' the typing context.' % index, span)


class AppNotArrow(TypingError):
    code = 'app-not-arrow'

    def __init__(self, found, span=None):
        self.found = found
        super().__init__('Only functions can be applied, but the term in'
                         ' function position has type %s.' % found, span)


class AppArgMismatch(TypingError):
    code = 'app-arg-mismatch'

    def __init__(self, expected, found, span=None):
        self.expected = expected
        self.found = found
        super().__init__('The function expects an argument of type %s, but'
                         ' the argument has type %s.' % (expected, found),
                         span)


class InjectBodyMismatch(TypingError):
    code = 'inject-body-mismatch'

    def __init__(self, expected, found, span=None):
        self.expected = expected
        self.found = found
        super().__init__('An injection at ground type %s needs a body of'
                         ' that type, but the body has type %s.'
                         % (expected, found), span)


class ProjectBodyNotUnknown(TypingError):
    code = 'project-body-not-unknown'

    def __init__(self, found, span=None):
        self.found = found
        super().__init__('Only terms of type * can be projected, but the'
                         ' body of the projection has type %s.' % found, span)


class TypeMismatch(TypingError):
    code = 'type-mismatch'

    def __init__(self, expected, found, span=None):
        self.expected = expected
        self.found = found
        super().__init__('Expected a term of type %s, but found type %s.'
                         % (expected, found), span)


class CannotInfer(TypingError):
    code = 'cannot-infer'

    def __init__(self, what, span=None):
        self.what = what
        super().__init__('Cannot infer the type of an unannotated %s; annotate'
                         ' it or check it against a known type.' % what, span)


def _lookup(ctx: TypeContext, m: Var) -> Type:
    if m.index >= len(ctx):
        raise UnboundVariable(m.index, m.span)
    return ctx[m.index]


def infer(ctx: TypeContext, m) -> Tuple[Term, Type]:
    """Infer the type of an annotated term and return it with the erased
    term."""
    return erase(m), _infer(tuple(ctx), m)


def _infer(ctx, m) -> Type:
    match m:
        case Var():
            return _lookup(ctx, m)
        case Lit(lit):
            return BaseT(typeof(lit))
        case App(fn, arg):
            fn_type = _infer(ctx, fn)
            if not isinstance(fn_type, Arrow):
                raise AppNotArrow(fn_type, m.span)
            arg_type = _infer(ctx, arg)
            if arg_type != fn_type.dom:
                raise AppArgMismatch(fn_type.dom, arg_type, arg.span)
            return fn_type.cod
        case ALam(dom, body):
            return Arrow(dom, _infer((dom,) + ctx, body))
        case Inject(body, g):
            expected = ground_to_type(g)
            found = _infer(ctx, body)
            if found != expected:
                raise InjectBodyMismatch(expected, found, m.span)
            return UNKNOWN
        case Project(body, h):
            found = _infer(ctx, body)
            if found != UNKNOWN:
                raise ProjectBodyNotUnknown(found, m.span)
            return ground_to_type(h)
        case ABlame(ann):
            return ann
        case Lam():
            raise CannotInfer('lambda', m.span)
        case Blame():
            raise CannotInfer('blame', m.span)
        case _:
            raise TypeError('Not a term of the Cast Calculus: %r' % (m,))


def check(ctx: TypeContext, m, a: Type) -> Term:
    """Check an annotated term against `a`; blame checks at every type."""
    ctx = tuple(ctx)
    match m:
        case Blame() | ABlame():
            return Blame(span=m.span)
        case Lam(body) if isinstance(a, Arrow):
            return Lam(check((a.dom,) + ctx, body, a.cod), span=m.span)
    found = _infer(ctx, m)
    if found != a:
        raise TypeMismatch(a, found, m.span)
    return erase(m)


@dataclass(frozen=True)
class _Meta:
    id: int

    def __str__(self):
        return '?%d' % self.id


class _Mismatch(Exception):
    pass


class _Unifier:
    def __init__(self):
        self.solution: Dict[int, Type] = {}
        self._ids = itertools.count()

    def fresh(self) -> _Meta:
        return _Meta(next(self._ids))

    def resolve(self, t):
        while isinstance(t, _Meta) and t.id in self.solution:
            t = self.solution[t.id]
        return t

    def zonk(self, t) -> Type:
        # unconstrained metas default to *
        t = self.resolve(t)
        match t:
            case Arrow(dom, cod):
                return Arrow(self.zonk(dom), self.zonk(cod))
            case _Meta():
                return UNKNOWN
            case _:
                return t

    def _occurs(self, meta, t) -> bool:
        t = self.resolve(t)
        if isinstance(t, _Meta):
            return t == meta
        if isinstance(t, Arrow):
            return self._occurs(meta, t.dom) or self._occurs(meta, t.cod)
        return False

    def unify(self, a, b):
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, _Meta) or isinstance(b, _Meta):
            meta, other = (a, b) if isinstance(a, _Meta) else (b, a)
            if self._occurs(meta, other):
                raise _Mismatch()
            self.solution[meta.id] = other
            return
        if isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom)
            self.unify(a.cod, b.cod)
            return
        raise _Mismatch()


def reconstruct(ctx: TypeContext, m, expected: Optional[Type] = None):
    """Recover the lambda domains and blame types of a (possibly core) term
    by first-order unification and return the fully annotated term.

    Annotations already present are kept. Type variables left unconstrained
    are instantiated at *, which keeps the result well typed.
    """
    u = _Unifier()
    annotated, found = _walk(u, tuple(ctx), m)
    if expected is not None:
        try:
            u.unify(found, expected)
        except _Mismatch as e:
            raise TypeMismatch(expected, u.zonk(found), m.span) from e
    return _zonk_term(u, annotated)


def check_core(ctx: TypeContext, m, a: Type) -> Term:
    """Check a term whose lambdas may lack domains against `a`."""
    return check(ctx, reconstruct(ctx, m, a), a)


def _walk(u: _Unifier, ctx, m):
    match m:
        case Var():
            return m, _lookup(ctx, m)
        case Lit(lit):
            return m, BaseT(typeof(lit))
        case App(fn, arg):
            fn_ann, fn_type = _walk(u, ctx, fn)
            arg_ann, arg_type = _walk(u, ctx, arg)
            fn_type = u.resolve(fn_type)
            if isinstance(fn_type, _Meta):
                u.unify(fn_type, Arrow(u.fresh(), u.fresh()))
                fn_type = u.resolve(fn_type)
            if not isinstance(fn_type, Arrow):
                raise AppNotArrow(u.zonk(fn_type), m.span)
            try:
                u.unify(fn_type.dom, arg_type)
            except _Mismatch as e:
                raise AppArgMismatch(u.zonk(fn_type.dom), u.zonk(arg_type),
                                     arg.span) from e
            return App(fn_ann, arg_ann, span=m.span), fn_type.cod
        case Lam(body):
            return _walk_lam(u, ctx, m, u.fresh(), body)
        case ALam(dom, body):
            return _walk_lam(u, ctx, m, dom, body)
        case Inject(body, g):
            body_ann, found = _walk(u, ctx, body)
            try:
                u.unify(found, ground_to_type(g))
            except _Mismatch as e:
                raise InjectBodyMismatch(ground_to_type(g), u.zonk(found),
                                         m.span) from e
            return Inject(body_ann, g, span=m.span), UNKNOWN
        case Project(body, h):
            body_ann, found = _walk(u, ctx, body)
            try:
                u.unify(found, UNKNOWN)
            except _Mismatch as e:
                raise ProjectBodyNotUnknown(u.zonk(found), m.span) from e
            return Project(body_ann, h, span=m.span), ground_to_type(h)
        case Blame():
            meta = u.fresh()
            return ABlame(meta, span=m.span), meta
        case ABlame(ann):
            return m, ann
        case _:
            raise TypeError('Not a term of the Cast Calculus: %r' % (m,))


def _walk_lam(u, ctx, m, dom, body):
    body_ann, cod = _walk(u, (dom,) + ctx, body)
    return ALam(dom, body_ann, span=m.span), Arrow(dom, cod)


def _zonk_term(u: _Unifier, m):
    match m:
        case ALam(dom, body):
            return ALam(u.zonk(dom), _zonk_term(u, body), span=m.span)
        case ABlame(ann):
            return ABlame(u.zonk(ann), span=m.span)
        case App(fn, arg):
            return App(_zonk_term(u, fn), _zonk_term(u, arg), span=m.span)
        case Inject(body, g):
            return Inject(_zonk_term(u, body), g, span=m.span)
        case Project(body, h):
            return Project(_zonk_term(u, body), h, span=m.span)
        case _:
            return m


def type_of(ctx: TypeContext, m) -> Type:
    """The type of a well-typed term, annotated or not."""
    return _infer(tuple(ctx), reconstruct(ctx, m))
