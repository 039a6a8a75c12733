# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

from dataclasses import dataclass

from q2_gradual._core import (Arrow, GFUN, Type, UNKNOWN, consistent,
                              ground_of, is_ground_type)
from q2_gradual._abt import (ALam, App, Inject, Project, Term, Var,
                             is_closed, shift)
from q2_gradual._typecheck import check_core

STAR_TO_STAR = Arrow(UNKNOWN, UNKNOWN)


class Inconsistent(ValueError):
    code = 'inconsistent-cast'

    def __init__(self, source, target):
        self.source = source
        self.target = target
        super().__init__('Cannot cast from %s to %s: the types are not'
                         ' consistent, so every such cast would fail.'
                         % (source, target))


def compile_cast(a: Type, b: Type, m) -> Term:
    """Build a term of type `b` that behaves like `m : a` cast to `b`, out of
    lambdas, injections and projections only.

    Function casts are eta-expanded, which changes step counts but not
    observable results. A closed subject is checked against `a` first
    unless Python runs with -O.
    """
    if not consistent(a, b):
        raise Inconsistent(a, b)
    if __debug__ and is_closed(m):
        check_core([], m, a)
    return _compile(a, b, m)


def _compile(a, b, m):
    if a == b:
        return m
    if b == UNKNOWN:
        if is_ground_type(a):
            return Inject(m, ground_of(a))
        return Inject(_compile(a, STAR_TO_STAR, m), GFUN)
    if a == UNKNOWN:
        if is_ground_type(b):
            return Project(m, ground_of(b))
        return _compile(STAR_TO_STAR, b, Project(m, GFUN))
    # both arrows; consistency rules out every other pairing
    arg = _compile(b.dom, a.dom, Var(0))
    return ALam(b.dom, _compile(a.cod, b.cod, App(shift(m), arg)))


@dataclass(frozen=True)
class CastRequest:
    source: Type
    target: Type
    subject: Term

    def __post_init__(self):
        if not consistent(self.source, self.target):
            raise Inconsistent(self.source, self.target)

    def compile(self) -> Term:
        return compile_cast(self.source, self.target, self.subject)
