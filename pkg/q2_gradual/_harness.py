# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

"""Differential testing of the gradual guarantee.

Well-typed terms are generated at random, made less precise by edits that
each correspond to a precision rule, and the two sides of every pair are
run side by side. Divergence cannot be observed under fuel, so clauses
that need it come out Inconclusive rather than guessed.
"""

import dataclasses
import enum
import json
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from q2_gradual._core import (Arrow, BaseT, BoolL, GBase, GFUN, GROUNDS,
                              Base, Num, Type, UNKNOWN, ground_of,
                              ground_to_type, is_ground_type)
from q2_gradual._abt import (ABlame, ALam, App, Inject, Lit, Project,
                             Substitution, Var, size, subst_apply)
from q2_gradual._typecheck import _infer, reconstruct
from q2_gradual._reduce import (Blamed, Timeout, Val, evaluate, run_exact)
from q2_gradual._precision import (TermPrecDeriv, TypePrecDeriv,
                                   infer_term_prec, validate_term_prec)
from q2_gradual._castcomp import compile_cast
from q2_gradual import _syntax
from q2_gradual._util import stable_dumps

logger = logging.getLogger(__name__)

DEFAULT_WEIGHTS = {
    'var': 3.0, 'lit': 3.0, 'lam': 3.0, 'app': 2.0, 'inject': 2.0,
    'project': 2.0, 'diverge': 0.1, 'blame': 0.0,
}

DEFAULT_KS = (0, 1, 2, 4, 8)


class GenerationExhausted(ValueError):
    code = 'generation-exhausted'

    def __init__(self, target, retries, max_size):
        self.target = target
        self.retries = retries
        self.max_size = max_size
        super().__init__('Could not generate a term of type %s with at most'
                         ' %d nodes in %d attempts; the constructor weights'
                         ' or the size bound leave no way to build it.'
                         % (target, max_size, retries))


class MutationBudgetExhausted(ValueError):
    code = 'mutation-budget-exhausted'

    def __init__(self, term, budget):
        self.term = term
        self.budget = budget
        super().__init__('No precision-preserving edit applies to %s, so'
                         ' none of the %d requested edits could be made.'
                         % (_syntax.print_term(term), budget))


@dataclass(frozen=True)
class GenConfig:
    """Everything that determines a generated term, pair or campaign.

    Identical configurations give identical results.
    """
    seed: int = 0
    max_size: int = 12
    type_depth: int = 2
    weights: Dict[str, float] = field(
        default_factory=lambda: dict(DEFAULT_WEIGHTS))
    fuel: int = 1000
    mutation_budget: int = 3
    adversarial: bool = False
    jobs: int = 1
    retries: int = 50
    ks: Tuple[int, ...] = DEFAULT_KS

    def __post_init__(self):
        unknown = set(self.weights) - set(DEFAULT_WEIGHTS)
        if unknown:
            raise ValueError('Unknown constructor weights: %s. Expected some'
                             ' of: %s.' % (', '.join(sorted(unknown)),
                                           ', '.join(DEFAULT_WEIGHTS)))
        if any(w < 0 for w in self.weights.values()):
            raise ValueError('Constructor weights must be non-negative: %r'
                             % (self.weights,))
        if self.max_size < 1:
            raise ValueError('`max_size` must be at least 1, got %r.'
                             % self.max_size)
        for name in ('type_depth', 'fuel', 'mutation_budget', 'retries'):
            if getattr(self, name) < 0:
                raise ValueError('`%s` must be non-negative, got %r.'
                                 % (name, getattr(self, name)))
        if self.jobs < 1:
            raise ValueError('`jobs` must be at least 1, got %r.'
                             % self.jobs)
        if any(k > self.fuel for k in self.ks):
            raise ValueError('Every step index in `ks` must be at most'
                             ' `fuel` (%d), got %r.' % (self.fuel, self.ks))

    def weight(self, kind: str) -> float:
        return self.weights.get(kind, DEFAULT_WEIGHTS[kind])

    def replace(self, **changes) -> 'GenConfig':
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d['weights'] = {k: self.weight(k) for k in DEFAULT_WEIGHTS}
        d['ks'] = list(self.ks)
        return d


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def gen_type(rng, depth: int) -> Type:
    rng = _rng(rng)
    choices = 4 if depth > 0 else 3
    match int(rng.integers(choices)):
        case 0:
            return UNKNOWN
        case 1:
            return BaseT(Base.NAT)
        case 2:
            return BaseT(Base.BOOL)
    return Arrow(gen_type(rng, depth - 1), gen_type(rng, depth - 1))


_OMEGA_HALF = ALam(UNKNOWN, App(Project(Var(0), GFUN), Var(0)))
OMEGA = App(_OMEGA_HALF, Inject(_OMEGA_HALF, GFUN))


def diverging_term(a: Type = UNKNOWN):
    """Self-application through ★ ⇒ ★, cast to `a`.

    At ★ and at ground types the term diverges; at other arrow types the
    cast wraps it in a lambda that diverges once applied.
    """
    return compile_cast(UNKNOWN, a, OMEGA)


class _Starved(Exception):
    pass


class _Generator:
    def __init__(self, cfg: GenConfig, rng: np.random.Generator):
        self.cfg = cfg
        self.rng = rng

    def _choose(self, options):
        options = [(kind, w) for kind, w in options if w > 0]
        if not options:
            raise _Starved()
        weights = np.array([w for _, w in options], dtype=float)
        i = self.rng.choice(len(options), p=weights / weights.sum())
        return options[int(i)][0]

    def _literal(self, a: BaseT):
        if a.base == Base.NAT:
            return Lit(Num(int(self.rng.integers(0, 10))))
        return Lit(BoolL(bool(self.rng.integers(2))))

    def smallest(self, ctx, a):
        for i, t in enumerate(ctx):
            if t == a:
                return Var(i)
        match a:
            case BaseT():
                return self._literal(a)
            case Arrow(dom, cod):
                return ALam(dom, self.smallest((dom,) + ctx, cod))
        return Inject(Lit(Num(0)), GBase(Base.NAT))

    def term(self, ctx: Tuple[Type, ...], a: Type, budget: int):
        if budget <= 1:
            return self.smallest(ctx, a)
        w = self.cfg.weight
        options = [('blame', w('blame'))]
        if w('diverge') > 0 and size(diverging_term(a)) <= budget:
            options.append(('diverge', w('diverge')))
        if any(t == a for t in ctx):
            options.append(('var', w('var')))
        if isinstance(a, BaseT):
            options.append(('lit', w('lit')))
        if isinstance(a, Arrow):
            options.append(('lam', w('lam')))
        if budget >= 3:
            options.append(('app', w('app')))
        if a == UNKNOWN:
            options.append(('inject', w('inject')))
        if is_ground_type(a):
            options.append(('project', w('project')))

        match self._choose(options):
            case 'diverge':
                return diverging_term(a)
            case 'blame':
                return ABlame(a)
            case 'var':
                found = [i for i, t in enumerate(ctx) if t == a]
                return Var(found[int(self.rng.integers(len(found)))])
            case 'lit':
                return self._literal(a)
            case 'lam':
                return ALam(a.dom, self.term((a.dom,) + ctx, a.cod,
                                             budget - 1))
            case 'app':
                arg_type = gen_type(self.rng, self.cfg.type_depth)
                fn_budget = int(self.rng.integers(1, budget - 1))
                fn = self.term(ctx, Arrow(arg_type, a), fn_budget)
                arg = self.term(ctx, arg_type, budget - 1 - fn_budget)
                return App(fn, arg)
            case 'inject':
                g = GROUNDS[int(self.rng.integers(len(GROUNDS)))]
                return Inject(self.term(ctx, ground_to_type(g), budget - 1),
                              g)
            case 'project':
                return Project(self.term(ctx, UNKNOWN, budget - 1),
                               ground_of(a))


def gen_term(cfg: GenConfig, target: Type, rng=None):
    """A closed annotated term of type `target`.

    The term has at most `cfg.max_size` nodes. Generation spends that many
    constructor choices, a diverging subterm is charged its full size, and
    an attempt that still overruns the bound is drawn again.
    """
    rng = _rng(cfg.seed if rng is None else rng)
    gen = _Generator(cfg, rng)
    retries = max(cfg.retries, 1)
    for attempt in range(retries):
        try:
            m = gen.term((), target, cfg.max_size)
        except _Starved:
            logger.debug('generation attempt %d at %s was starved',
                         attempt, target)
            continue
        if size(m) <= cfg.max_size:
            return m
        logger.debug('generation attempt %d at %s has %d nodes, over %d',
                     attempt, target, size(m), cfg.max_size)
    raise GenerationExhausted(target, retries, cfg.max_size)


@dataclass(frozen=True)
class PrecPair:
    less: object
    more: object
    c: TypePrecDeriv
    d: TermPrecDeriv
    edits: Tuple[str, ...] = field(default=(), compare=False)


def _positions(m, ctx=(), path=()):
    yield path, m, ctx
    match m:
        case ALam(dom, body):
            yield from _positions(body, (dom,) + ctx, path + ('body',))
        case App(fn, arg):
            yield from _positions(fn, ctx, path + ('fn',))
            yield from _positions(arg, ctx, path + ('arg',))
        case Inject(body, _) | Project(body, _):
            yield from _positions(body, ctx, path + ('body',))


def _replace_at(m, path, new):
    if not path:
        return new
    child = getattr(m, path[0])
    return dataclasses.replace(m, **{path[0]: _replace_at(child, path[1:],
                                                          new)})


def _relax(lam: ALam):
    # the bound variable now has type ★; project it back where it is used
    g = ground_of(lam.dom)
    sigma = Substitution((Project(Var(0), g),), 1)
    return ALam(UNKNOWN, subst_apply(sigma, lam.body))


def _edit_candidates(less, more, adversarial):
    for path, sub, ctx in _positions(less):
        a = _infer(ctx, sub)
        if is_ground_type(a):
            g = ground_of(a)
            wrapped = Inject(sub, g) if not path \
                else Project(Inject(sub, g), g)
            yield 'inject', _replace_at(less, path, wrapped), more
        if isinstance(sub, ALam) and is_ground_type(sub.dom):
            if not path:
                yield 'relax', _relax(sub), more
            elif path[-1] == 'fn':
                parent = path[:-1]
                app = _subterm(less, parent)
                relaxed = App(_relax(sub),
                              Inject(app.arg, ground_of(sub.dom)))
                yield 'relax', _replace_at(less, parent, relaxed), more
    if adversarial:
        for path, sub, ctx in _positions(more):
            if not isinstance(sub, ABlame):
                yield 'blame', less, _replace_at(more, path,
                                                 ABlame(_infer(ctx, sub)))


def _subterm(m, path):
    for name in path:
        m = getattr(m, name)
    return m


def _derive(less, more):
    found = infer_term_prec([], less, more)
    if found is None:
        return None
    c, d = found
    if not validate_term_prec([], d, less, more):
        return None
    return c, d


def abstract_mutate(more, a: Type, budget: int, seed,
                    adversarial: bool = False) -> PrecPair:
    """Make a less-precise partner for the closed term `more : a` with up
    to `budget` precision-preserving edits.

    Edits are drawn from `seed` (an int or a numpy Generator), so a seed
    fixes the pair. Every edit is checked by deriving precision for the
    edited pair, and only pairs whose derivation validates are returned.
    """
    if seed is None:
        raise ValueError('abstract_mutate needs a seed; pass an int or a'
                         ' numpy Generator.')
    if adversarial and budget == 0:
        warnings.warn('Adversarial mutation was requested with a budget of'
                      ' 0, so no blame edit can be applied.', UserWarning)
    rng = _rng(seed)
    more = reconstruct([], more, a)
    less = more
    edits = []
    found = _derive(less, more)
    if found is None:
        raise ValueError('The term %s is not precise relative to itself at'
                         ' %s; is it well typed?'
                         % (_syntax.print_term(more), a))
    for _ in range(budget):
        candidates = list(_edit_candidates(less, more, adversarial))
        if adversarial and 'blame' not in edits:
            # one blame edit first, so the pair can go wrong on the right
            candidates = [c for c in candidates if c[0] == 'blame'] \
                or candidates
        order = rng.permutation(len(candidates))
        for i in order:
            kind, less2, more2 = candidates[int(i)]
            derived = _derive(less2, more2)
            if derived is not None:
                less, more, found = less2, more2, derived
                edits.append(kind)
                break
        else:
            if not edits:
                raise MutationBudgetExhausted(less, budget)
            break
    c, d = found
    return PrecPair(less, more, c, d, tuple(edits))


class Clause(enum.Enum):
    LESS_BLAMES_MORE_HALTS = 'less-blames-more-halts'
    # needs the less-precise side to diverge, which fuel cannot show
    MORE_HALTS_LESS_DOESNT = 'more-halts-less-doesnt'

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Consistent:
    outcomes: Optional[tuple] = field(default=None, compare=False)

    def __str__(self):
        return 'consistent'


@dataclass(frozen=True)
class Violation:
    clause: Clause
    outcomes: Optional[tuple] = field(default=None, compare=False)

    def __str__(self):
        return 'violation (%s)' % self.clause


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    outcomes: Optional[tuple] = field(default=None, compare=False)

    def __str__(self):
        return 'inconclusive (%s)' % self.reason


Verdict = Union[Consistent, Violation, Inconclusive]

LESS_TIMEOUT = 'less-timeout'
MORE_TIMEOUT = 'more-timeout'
BOTH_TIMEOUT = 'both-diverge-so-far'


def gradual_verdict(m, m2, fuel: int, trace: bool = False) -> Verdict:
    """Run the less-precise `m` and the more-precise `m2` for `fuel` steps
    each and judge the outcomes against the gradual guarantee.

    Reduction is deterministic, so a halted side's result is final.
    """
    less = evaluate(m, fuel, trace)
    more = evaluate(m2, fuel, trace)
    outcomes = (less, more)
    match less, more:
        case _, Blamed():
            return Consistent(outcomes)
        case Val(), Val():
            return Consistent(outcomes)
        case Blamed(), Val():
            return Violation(Clause.LESS_BLAMES_MORE_HALTS, outcomes)
        case Timeout(), Val():
            return Inconclusive(LESS_TIMEOUT, outcomes)
        case Timeout(), Timeout():
            return Inconclusive(BOTH_TIMEOUT, outcomes)
    return Inconclusive(MORE_TIMEOUT, outcomes)


class Direction(enum.Enum):
    LE = 'le'
    GE = 'ge'

    def __str__(self):
        return '≼' if self is Direction.LE else '≽'


class ThreeValued(enum.Enum):
    HOLDS = 'Holds'
    FAILS = 'Fails'
    UNKNOWN = 'Unknown'

    def __str__(self):
        return self.value

    def __and__(self, other: 'ThreeValued') -> 'ThreeValued':
        if ThreeValued.FAILS in (self, other):
            return ThreeValued.FAILS
        if ThreeValued.UNKNOWN in (self, other):
            return ThreeValued.UNKNOWN
        return ThreeValued.HOLDS


def sem_approx(direction: Direction, m, m2, k: int,
               fuel: int) -> ThreeValued:
    """Semantic approximation of the less-precise `m` by `m2` at step
    index `k`.

    In the ≼ direction `m` is the side that runs for k steps and `m2` must
    keep up; in ≽ the roles are swapped. Running the other side for
    `fuel` steps can only be inconclusive when it times out.
    """
    if k < 0:
        raise ValueError('`k` must be non-negative, got %r.' % k)
    if fuel < k:
        raise ValueError('`fuel` (%d) must be at least the step index `k`'
                         ' (%d).' % (fuel, k))
    direction = Direction(direction)
    runner, other = (m, m2) if direction is Direction.LE else (m2, m)
    if run_exact(runner, k) is not None:
        return ThreeValued.HOLDS
    halted = evaluate(runner, k)
    answer = evaluate(other, fuel)
    if direction is Direction.LE:
        if isinstance(halted, Val):
            # more halts either way, at a value or blame
            return (ThreeValued.UNKNOWN if isinstance(answer, Timeout)
                    else ThreeValued.HOLDS)
        match answer:
            case Blamed():
                return ThreeValued.HOLDS
            case Val():
                return ThreeValued.FAILS
        return ThreeValued.UNKNOWN
    if isinstance(halted, Blamed):
        return ThreeValued.HOLDS
    match answer:
        case Val():
            return ThreeValued.HOLDS
        case Blamed():
            return ThreeValued.FAILS
    return ThreeValued.UNKNOWN


def sem_approx_both(m, m2, k: int, fuel: int) -> ThreeValued:
    return (sem_approx(Direction.LE, m, m2, k, fuel)
            & sem_approx(Direction.GE, m, m2, k, fuel))


@dataclass(frozen=True)
class PairRecord:
    index: int
    seed: int
    target: str
    less: str
    more: str
    verdict: str
    detail: Optional[str]
    less_outcome: dict
    more_outcome: dict
    edits: Tuple[str, ...]
    validated: bool = True
    swapped: bool = False
    sem_approx: Dict[str, str] = field(default_factory=dict)
    traces: Optional[dict] = None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d['edits'] = list(self.edits)
        return d


def _verdict_kind(v: Verdict) -> Tuple[str, Optional[str]]:
    match v:
        case Consistent():
            return 'consistent', None
        case Violation(clause):
            return 'violation', str(clause)
        case Inconclusive(reason):
            return 'inconclusive', reason
    raise TypeError('Not a verdict: %r' % (v,))


def _record(cfg, index, seed, target, less, more, edits, validated,
            swapped) -> PairRecord:
    verdict = gradual_verdict(less, more, cfg.fuel)
    kind, detail = _verdict_kind(verdict)
    less_out, more_out = verdict.outcomes
    checks = {}
    if validated:
        for k in cfg.ks:
            for direction in Direction:
                checks['%s:%d' % (direction.value, k)] = str(
                    sem_approx(direction, less, more, k, cfg.fuel))
    traces = None
    if kind == 'violation':
        traced = gradual_verdict(less, more, cfg.fuel, trace=True)
        traces = {
            'less': _syntax.trace_to_json(traced.outcomes[0].trace),
            'more': _syntax.trace_to_json(traced.outcomes[1].trace),
        }
    return PairRecord(
        index=index, seed=seed, target=_syntax.print_type(target),
        less=_syntax.print_term(less), more=_syntax.print_term(more),
        verdict=kind, detail=detail,
        less_outcome=_syntax.outcome_to_json(less_out),
        more_outcome=_syntax.outcome_to_json(more_out),
        edits=tuple(edits), validated=validated, swapped=swapped,
        sem_approx=checks, traces=traces)


def pair_seeds(seed: int, n_pairs: int) -> List[int]:
    """Independent per-pair seeds, stable under any partition of pairs."""
    children = np.random.SeedSequence(seed).spawn(n_pairs)
    return [int(child.generate_state(1, dtype=np.uint64)[0])
            for child in children]


def run_pair(cfg: GenConfig, index: int, seed: int) -> List[PairRecord]:
    rng = np.random.default_rng(seed)
    target = gen_type(rng, cfg.type_depth)
    more = gen_term(cfg, target, rng)
    try:
        pair = abstract_mutate(more, target, cfg.mutation_budget, rng,
                               adversarial=cfg.adversarial)
    except MutationBudgetExhausted:
        logger.debug('pair %d: no edit applies, using the term itself',
                     index)
        pair = abstract_mutate(more, target, 0, rng)
    records = [_record(cfg, index, seed, target, pair.less, pair.more,
                       pair.edits, True, False)]
    if cfg.adversarial and 'blame' in pair.edits:
        records.append(_record(cfg, index, seed, target, pair.more,
                               pair.less, pair.edits, False, True))
    for r in records:
        logger.debug('pair %d%s: %s', index,
                     ' (swapped)' if r.swapped else '', r.verdict)
    return records


def _run_chunk(args):
    cfg, items = args
    return [r for index, seed in items for r in run_pair(cfg, index, seed)]


@dataclass(frozen=True)
class CampaignReport:
    config: dict
    records: Tuple[PairRecord, ...]

    @property
    def totals(self) -> Dict[str, int]:
        totals = {'consistent': 0, 'violation': 0, 'inconclusive': 0}
        for r in self.records:
            totals[r.verdict] += 1
        return totals

    @property
    def violations(self) -> List[PairRecord]:
        return [r for r in self.records if r.verdict == 'violation']

    @property
    def sem_approx_failures(self) -> List[dict]:
        return [{'index': r.index, 'seed': r.seed, 'check': check,
                 'less': r.less, 'more': r.more}
                for r in self.records
                for check, result in sorted(r.sem_approx.items())
                if result == str(ThreeValued.FAILS)]

    def to_dict(self) -> dict:
        return {
            'config': self.config,
            'totals': self.totals,
            'violations': [{'index': r.index, 'seed': r.seed,
                            'swapped': r.swapped, 'validated': r.validated,
                            'clause': r.detail,
                            'pair': {'less': r.less, 'more': r.more},
                            'traces': r.traces}
                           for r in self.violations],
            'sem_approx_failures': self.sem_approx_failures,
        }

    def to_json(self) -> str:
        return stable_dumps(self.to_dict())

    def to_dataframe(self) -> pd.DataFrame:
        columns = ['index', 'seed', 'target', 'verdict', 'detail',
                   'less_steps', 'more_steps', 'edits', 'validated',
                   'swapped', 'less', 'more']
        rows = [{'index': r.index, 'seed': r.seed, 'target': r.target,
                 'verdict': r.verdict, 'detail': r.detail,
                 'less_steps': r.less_outcome['steps'],
                 'more_steps': r.more_outcome['steps'],
                 'edits': ','.join(r.edits), 'validated': r.validated,
                 'swapped': r.swapped, 'less': r.less, 'more': r.more}
                for r in self.records]
        df = pd.DataFrame(rows, columns=columns)
        df.attrs['columns'] = {
            'verdict': {
                'title': 'verdict',
                'description': 'Judgement of the pair against the gradual'
                               ' guarantee under the configured fuel.'},
            'less_steps': {
                'title': 'steps (less precise)',
                'description': 'Reduction steps taken by the less-precise'
                               ' term.'},
            'more_steps': {
                'title': 'steps (more precise)',
                'description': 'Reduction steps taken by the more-precise'
                               ' term.'},
        }
        return df


def fuzz_campaign(cfg: GenConfig, n_pairs: int) -> CampaignReport:
    """Generate `n_pairs` precision pairs and judge each one.

    Records are ordered by pair index, so serial and parallel runs give
    the same report.
    """
    if n_pairs < 0:
        raise ValueError('`n_pairs` must be non-negative, got %r.' % n_pairs)
    if cfg.adversarial and cfg.mutation_budget == 0:
        warnings.warn('Adversarial mode needs a mutation budget to place'
                      ' blame; with a budget of 0 it has no effect.',
                      UserWarning)
    logger.info('campaign: %d pairs, seed %d, fuel %d, %d job(s)',
                n_pairs, cfg.seed, cfg.fuel, cfg.jobs)
    items = list(enumerate(pair_seeds(cfg.seed, n_pairs)))
    if cfg.jobs == 1 or len(items) < 2:
        records = _run_chunk((cfg, items))
    else:
        chunks = [(cfg, items[i::cfg.jobs]) for i in range(cfg.jobs)]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = [r for chunk in pool.map(_run_chunk, chunks)
                       for r in chunk]
    records.sort(key=lambda r: (r.index, r.swapped))
    report = CampaignReport(cfg.to_dict(), tuple(records))
    for r in report.violations:
        logger.info('violation at pair %d (seed %d%s): %s vs %s',
                    r.index, r.seed, ', swapped' if r.swapped else '',
                    r.less, r.more)
    logger.info('campaign done: %s', json.dumps(report.totals,
                                                sort_keys=True))
    return report
