# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import enum
import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Union


class Base(enum.Enum):
    NAT = 'Nat'
    BOOL = 'Bool'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Unknown:
    def __str__(self):
        return '*'


@dataclass(frozen=True)
class BaseT:
    base: Base

    def __str__(self):
        return str(self.base)


@dataclass(frozen=True)
class Arrow:
    dom: 'Type'
    cod: 'Type'

    def __str__(self):
        return '(-> %s %s)' % (self.dom, self.cod)


Type = Union[Unknown, BaseT, Arrow]

UNKNOWN = Unknown()
NAT = BaseT(Base.NAT)
BOOL = BaseT(Base.BOOL)


@dataclass(frozen=True)
class GBase:
    base: Base

    def __str__(self):
        return str(self.base)


@dataclass(frozen=True)
class GFun:
    def __str__(self):
        return 'Fun'


Ground = Union[GBase, GFun]

GFUN = GFun()
GROUNDS = (GBase(Base.NAT), GBase(Base.BOOL), GFUN)


# Literals carry Python ints, so the naturals are unbounded.
@dataclass(frozen=True)
class Num:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError('Natural number literals must be non-negative,'
                             ' got %r.' % self.n)


@dataclass(frozen=True)
class BoolL:
    b: bool


Literal = Union[Num, BoolL]


def typeof(lit: Literal) -> Base:
    if isinstance(lit, Num):
        return Base.NAT
    return Base.BOOL


def ground_to_type(g: Ground) -> Type:
    """The type ⌈g⌉ a ground type stands for."""
    if isinstance(g, GBase):
        return BaseT(g.base)
    return Arrow(UNKNOWN, UNKNOWN)


def ground_of(a: Type) -> Optional[Ground]:
    """Classify a type by the ground type of its head constructor."""
    match a:
        case BaseT(base):
            return GBase(base)
        case Arrow():
            return GFUN
        case _:
            return None


def is_ground_type(a: Type) -> bool:
    g = ground_of(a)
    return g is not None and ground_to_type(g) == a


def consistent(a: Type, b: Type) -> bool:
    match a, b:
        case Unknown(), _:
            return True
        case _, Unknown():
            return True
        case BaseT(x), BaseT(y):
            return x == y
        case Arrow(a1, a2), Arrow(b1, b2):
            return consistent(a1, b1) and consistent(a2, b2)
        case _:
            return False


def type_depth(a: Type) -> int:
    if isinstance(a, Arrow):
        return 1 + max(type_depth(a.dom), type_depth(a.cod))
    return 0


def type_size(a: Type) -> int:
    if isinstance(a, Arrow):
        return 1 + type_size(a.dom) + type_size(a.cod)
    return 1


def all_types(depth: int) -> Iterator[Type]:
    """Every type whose arrow nesting is at most `depth`."""
    yield UNKNOWN
    yield NAT
    yield BOOL
    if depth > 0:
        smaller = list(all_types(depth - 1))
        for dom, cod in itertools.product(smaller, repeat=2):
            yield Arrow(dom, cod)
