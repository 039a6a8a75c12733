# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

from q2_gradual._core import Ground
from q2_gradual._abt import (ALam, App, Blame, Inject, Lam, Project, Term,
                             bracket, is_blame, is_value)


@dataclass(frozen=True)
class AppL:
    """□ · arg"""
    arg: Term


@dataclass(frozen=True)
class AppR:
    """fn_value · □"""
    fn_value: Term

    def __post_init__(self):
        if not is_value(self.fn_value):
            raise ValueError('The function side of a `v · □` frame must be a'
                             ' value, got %r.' % (self.fn_value,))


@dataclass(frozen=True)
class InjF:
    g: Ground


@dataclass(frozen=True)
class ProjF:
    h: Ground


@dataclass(frozen=True)
class Hole:
    pass


Frame = Union[AppL, AppR, InjF, ProjF]
PEFrame = Union[Hole, Frame]

HOLE = Hole()


def plug(f: PEFrame, m) -> Term:
    match f:
        case Hole():
            return m
        case AppL(arg):
            return App(m, arg)
        case AppR(fn_value):
            return App(fn_value, m)
        case InjF(g):
            return Inject(m, g)
        case ProjF(h):
            return Project(m, h)
    raise TypeError('Not an evaluation frame: %r' % (f,))


def plug_path(path, m) -> Term:
    """Plug `m` into frames listed from the outermost inwards."""
    for f in reversed(path):
        m = plug(f, m)
    return m


class Rule(enum.Enum):
    BETA = 'beta'
    COLLAPSE = 'collapse'
    COLLIDE = 'collide'
    CONG = 'xi'
    CONG_BLAME = 'xi-blame'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class StepResult:
    """One reduction step.

    `rule` is the rule at the root of the step's derivation and `frame` its
    frame when that rule is a congruence. `focus` is the rule that fired at
    the innermost position and `path` lists the frames, outermost first,
    around it.
    """
    next: Term
    rule: Rule
    frame: Optional[Frame] = None
    focus: Optional[Rule] = None
    path: Tuple[Frame, ...] = ()

    def __post_init__(self):
        if self.focus is None:
            object.__setattr__(self, 'focus', self.rule)


class StuckTerm(ValueError):
    code = 'stuck-term'

    def __init__(self, term):
        self.term = term
        super().__init__('Reduction is stuck on a term that is neither a'
                         ' value nor blame, which only happens to ill-typed'
                         ' terms: %r' % (term,))


def _congruence(f: Frame, inner) -> Optional[StepResult]:
    if is_blame(inner):
        return StepResult(Blame(), Rule.CONG_BLAME, frame=f)
    r = step(inner)
    if r is None:
        return None
    return StepResult(plug(f, r.next), Rule.CONG, frame=f, focus=r.focus,
                      path=(f,) + r.path)


def step(m) -> Optional[StepResult]:
    """The unique successor of `m`, or None for values, blame and stuck
    terms. Functions reduce before arguments, cast bodies before casts."""
    match m:
        case App(fn, arg):
            if not is_value(fn):
                return _congruence(AppL(arg), fn)
            if not is_value(arg):
                return _congruence(AppR(fn), arg)
            if isinstance(fn, (Lam, ALam)):
                return StepResult(bracket(fn.body, arg), Rule.BETA)
            return None
        case Inject(body, g):
            if is_value(body):
                return None
            return _congruence(InjF(g), body)
        case Project(body, h):
            if not is_value(body):
                return _congruence(ProjF(h), body)
            if isinstance(body, Inject):
                if body.g == h:
                    return StepResult(body.body, Rule.COLLAPSE)
                return StepResult(Blame(), Rule.COLLIDE)
            return None
        case _:
            return None


@dataclass(frozen=True)
class Decomposition:
    path: Tuple[Frame, ...]
    focus: Term


def _split(m) -> Optional[Tuple[Frame, Term]]:
    match m:
        case App(fn, arg) if not is_value(fn):
            return AppL(arg), fn
        case App(fn, arg) if not is_value(arg):
            return AppR(fn), arg
        case Inject(body, g) if not is_value(body):
            return InjF(g), body
        case Project(body, h) if not is_value(body):
            return ProjF(h), body
    return None


def _is_redex(m) -> bool:
    match m:
        case App(Lam() | ALam(), arg):
            return is_value(arg)
        case Project(Inject(v, _), _):
            return is_value(v)
    return False


def decompose(m) -> Optional[Decomposition]:
    """Split `m` into evaluation frames and the innermost term that
    contracts: a root redex or a single frame around blame."""
    path = []
    while True:
        split = _split(m)
        if split is None:
            return Decomposition(tuple(path), m) if _is_redex(m) else None
        f, inner = split
        if is_blame(inner):
            return Decomposition(tuple(path), m)
        path.append(f)
        m = inner


def contract(focus) -> Term:
    split = _split(focus)
    if split is not None and is_blame(split[1]):
        return Blame()
    match focus:
        case App(fn, arg):
            return bracket(fn.body, arg)
        case Project(Inject(v, g), h):
            return v if g == h else Blame()
    raise ValueError('Not a contractible term: %r' % (focus,))


def step_by_decomposition(m) -> Optional[Term]:
    d = decompose(m)
    if d is None:
        return None
    return plug_path(d.path, contract(d.focus))


@dataclass(frozen=True)
class TraceRecord:
    index: int
    rule: Rule
    focus: Rule
    path: Tuple[Frame, ...]
    term: Term


@dataclass(frozen=True)
class Val:
    value: Term
    steps: int
    trace: Tuple[TraceRecord, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class Blamed:
    steps: int
    trace: Tuple[TraceRecord, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class Timeout:
    fuel: int
    trace: Tuple[TraceRecord, ...] = field(default=(), compare=False)


Outcome = Union[Val, Blamed, Timeout]


def _check_count(name, n):
    if n < 0:
        raise ValueError('`%s` counts reduction steps and must be'
                         ' non-negative, got %r.' % (name, n))


def evaluate(m, fuel: int, trace: bool = False) -> Outcome:
    """Reduce `m` for at most `fuel` steps."""
    _check_count('fuel', fuel)
    records = []
    steps = 0
    while True:
        if is_value(m):
            return Val(m, steps, tuple(records))
        if is_blame(m):
            return Blamed(steps, tuple(records))
        if steps == fuel:
            return Timeout(fuel, tuple(records))
        r = step(m)
        if r is None:
            raise StuckTerm(m)
        m = r.next
        steps += 1
        if trace:
            records.append(TraceRecord(steps, r.rule, r.focus, r.path, m))


def run_exact(m, k: int) -> Optional[Term]:
    """The term reached after exactly `k` steps, or None when `m` halts
    sooner."""
    _check_count('k', k)
    for _ in range(k):
        if is_value(m) or is_blame(m):
            return None
        r = step(m)
        if r is None:
            raise StuckTerm(m)
        m = r.next
    return m


def multistep(m, fuel: int) -> List[Term]:
    """The reduction sequence from `m`, at most `fuel` steps long."""
    _check_count('fuel', fuel)
    seq = [m]
    while len(seq) <= fuel:
        r = step(seq[-1])
        if r is None:
            if not (is_value(seq[-1]) or is_blame(seq[-1])):
                raise StuckTerm(seq[-1])
            break
        seq.append(r.next)
    return seq
