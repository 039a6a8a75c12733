# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

"""De Bruijn terms of the Cast Calculus with parallel renaming and
substitution.

A lambda binds exactly one variable; application and the two casts bind
none. Besides the core nodes there are two annotated nodes, `ALam` and
`ABlame`, produced by the parser: they carry the lambda domain and the
type of blame that the typing rules cannot recover from syntax. Renaming
and substitution preserve annotations; `erase` drops them.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

from q2_gradual._core import Ground, Literal, Type

MAX_INDEX = 2 ** 63 - 1


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self):
        return '%d:%d' % (self.line, self.column)


_span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    index: int
    span: Optional[Span] = _span

    def __post_init__(self):
        if self.index < 0:
            raise ValueError('De Bruijn indices are natural numbers, got %r.'
                             % self.index)
        if self.index > MAX_INDEX:
            raise OverflowError('De Bruijn index %r exceeds the machine'
                                ' natural range.' % self.index)


@dataclass(frozen=True)
class Lam:
    body: 'Term'
    span: Optional[Span] = _span


@dataclass(frozen=True)
class App:
    fn: 'Term'
    arg: 'Term'
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Lit:
    lit: Literal
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Inject:
    body: 'Term'
    g: Ground
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Project:
    body: 'Term'
    h: Ground
    span: Optional[Span] = _span


@dataclass(frozen=True)
class Blame:
    span: Optional[Span] = _span


@dataclass(frozen=True)
class ALam:
    dom: Type
    body: 'Term'
    span: Optional[Span] = _span


@dataclass(frozen=True)
class ABlame:
    ann: Type
    span: Optional[Span] = _span


Term = Union[Var, Lam, App, Lit, Inject, Project, Blame]
AnnTerm = Union[Var, ALam, App, Lit, Inject, Project, ABlame]

BLAME = Blame()


def is_value(m) -> bool:
    match m:
        case Lam() | ALam() | Lit():
            return True
        case Inject(body, _):
            return is_value(body)
        case _:
            return False


def is_blame(m) -> bool:
    return isinstance(m, (Blame, ABlame))


def erase(m) -> Term:
    """Drop lambda domains and blame annotations."""
    match m:
        case ALam(_, body):
            return Lam(erase(body), span=m.span)
        case ABlame():
            return Blame(span=m.span)
        case Lam(body):
            return Lam(erase(body), span=m.span)
        case App(fn, arg):
            return App(erase(fn), erase(arg), span=m.span)
        case Inject(body, g):
            return Inject(erase(body), g, span=m.span)
        case Project(body, h):
            return Project(erase(body), h, span=m.span)
        case _:
            return m


def size(m) -> int:
    match m:
        case Lam(body) | ALam(_, body):
            return 1 + size(body)
        case App(fn, arg):
            return 1 + size(fn) + size(arg)
        case Inject(body, _) | Project(body, _):
            return 1 + size(body)
        case _:
            return 1


def free_indices(m, depth: int = 0) -> frozenset:
    """Free variable indices of `m`, counted from outside its binders."""
    match m:
        case Var(i):
            return frozenset([i - depth]) if i >= depth else frozenset()
        case Lam(body) | ALam(_, body):
            return free_indices(body, depth + 1)
        case App(fn, arg):
            return free_indices(fn, depth) | free_indices(arg, depth)
        case Inject(body, _) | Project(body, _):
            return free_indices(body, depth)
        case _:
            return frozenset()


def is_closed(m) -> bool:
    return not free_indices(m)


@dataclass(frozen=True)
class Renaming:
    """A total map on indices: `prefix[i]` for i < len(prefix), else
    `i - len(prefix) + shift`."""
    prefix: Tuple[int, ...] = ()
    shift: int = 0

    def __call__(self, i: int) -> int:
        if i < len(self.prefix):
            return self.prefix[i]
        return i - len(self.prefix) + self.shift

    def agrees_with(self, other: 'Renaming', bound: int) -> bool:
        return all(self(i) == other(i) for i in range(bound))


@dataclass(frozen=True)
class Substitution:
    """A total map from indices to terms: the explicit `prefix` followed by
    the variables `Var(i - len(prefix) + shift)`."""
    prefix: Tuple[Term, ...] = ()
    shift: int = 0

    def __call__(self, i: int) -> Term:
        if i < len(self.prefix):
            return self.prefix[i]
        return Var(i - len(self.prefix) + self.shift)

    def agrees_with(self, other: 'Substitution', bound: int) -> bool:
        return all(self(i) == other(i) for i in range(bound))


IDENT_RENAMING = Renaming()
UP = Renaming((), 1)
IDENT = Substitution()


def extr(rho: Renaming) -> Renaming:
    return Renaming((0,) + tuple(i + 1 for i in rho.prefix), rho.shift + 1)


def cons(v: Term, sigma: Substitution) -> Substitution:
    """Stream cons: index 0 maps to `v`, index 1 + x to `sigma(x)`."""
    return Substitution((v,) + sigma.prefix, sigma.shift)


def ext(sigma: Substitution) -> Substitution:
    """Transport `sigma` under one binder."""
    return Substitution(
        (Var(0),) + tuple(rename(UP, t) for t in sigma.prefix),
        sigma.shift + 1)


def from_renaming(rho: Renaming) -> Substitution:
    return Substitution(tuple(Var(i) for i in rho.prefix), rho.shift)


def _traverse(m, var: Callable[[int, int, Var], Term], depth: int = 0):
    # `var(index, depth, node)` rebuilds a variable seen under `depth`
    # binders.
    match m:
        case Var(i):
            return var(i, depth, m)
        case Lam(body):
            return Lam(_traverse(body, var, depth + 1), span=m.span)
        case ALam(dom, body):
            return ALam(dom, _traverse(body, var, depth + 1), span=m.span)
        case App(fn, arg):
            return App(_traverse(fn, var, depth),
                       _traverse(arg, var, depth), span=m.span)
        case Inject(body, g):
            return Inject(_traverse(body, var, depth), g, span=m.span)
        case Project(body, h):
            return Project(_traverse(body, var, depth), h, span=m.span)
        case _:
            return m


def _lifted(f, start):
    # lifted(depth) is f applied depth times to start, computed once
    chain = [start]

    def lifted(depth):
        while len(chain) <= depth:
            chain.append(f(chain[-1]))
        return chain[depth]
    return lifted


def rename(rho: Renaming, m):
    lifted = _lifted(extr, rho)

    def var(i, depth, node):
        return Var(lifted(depth)(i), span=node.span)
    return _traverse(m, var)


def subst_apply(sigma: Substitution, m):
    lifted = _lifted(ext, sigma)

    def var(i, depth, node):
        return lifted(depth)(i)
    return _traverse(m, var)


def shift(m):
    return rename(UP, m)


def bracket(m, n):
    """m[n]: replace variable 0 by `n`, decrementing the other free
    variables."""
    return subst_apply(cons(n, IDENT), m)
