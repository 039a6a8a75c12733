# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

import argparse
import logging
import os
import sys

from q2_gradual._typecheck import TypingError, reconstruct, type_of
from q2_gradual._reduce import StuckTerm, evaluate
from q2_gradual._precision import IllTyped, infer_term_prec
from q2_gradual._castcomp import Inconsistent, compile_cast
from q2_gradual._harness import (Direction, GenConfig, GenerationExhausted,
                                 ThreeValued, fuzz_campaign, sem_approx)
from q2_gradual._syntax import (ParseError, derivation_to_json, parse,
                                parse_type, print_term, print_type,
                                describe_outcome, trace_to_json,
                                type_prec_to_json)
from q2_gradual._util import stable_dumps

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_VIOLATION = 2
EXIT_USAGE = 3

_COLORS = {'Holds': '32', 'Fails': '31', 'Unknown': '33',
           'violation': '31', 'consistent': '32', 'inconclusive': '33'}


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError('%s: error: %s' % (self.prog, message))


def _color(word: str) -> str:
    if os.environ.get('GG_COLOR', '0') != '1' or word not in _COLORS:
        return word
    return '\033[%sm%s\033[0m' % (_COLORS[word], word)


def _read_program(path):
    try:
        with open(path, encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        raise UsageError('Cannot read %s: %s' % (path, e.strerror)) from e
    try:
        return parse(text)
    except ParseError as e:
        raise UsageError('%s:%s' % (path, e)) from e


def _type_arg(text):
    try:
        return parse_type(text)
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _natural(text):
    try:
        n = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError('expected a natural number, got %r'
                                         % text) from e
    if n < 0:
        raise argparse.ArgumentTypeError('expected a natural number, got %r'
                                         % text)
    return n


def _cmd_typecheck(args, out):
    m = _read_program(args.file)
    print(print_type(type_of([], m)), file=out)
    return EXIT_OK


def _cmd_run(args, out):
    m = reconstruct([], _read_program(args.file))
    outcome = evaluate(m, args.fuel, trace=args.trace)
    print(describe_outcome(outcome), file=out)
    if args.trace:
        print(stable_dumps(trace_to_json(outcome.trace)), file=out)
    return EXIT_OK


def _cmd_cast(args, out):
    m = reconstruct([], _read_program(args.file), args.source)
    print(print_term(compile_cast(args.source, args.target, m)), file=out)
    return EXIT_OK


def _cmd_prec(args, out):
    less = _read_program(args.less)
    more = _read_program(args.more)
    found = infer_term_prec([], less, more)
    if found is None:
        print('not derivable', file=out)
        return EXIT_NEGATIVE
    c, d = found
    print(stable_dumps({'type_precision': type_prec_to_json(c),
                        'derivation': derivation_to_json(d)}), file=out)
    return EXIT_OK


def _cmd_semapprox(args, out):
    if args.fuel < args.k:
        raise UsageError('--fuel (%d) must be at least -k (%d).'
                         % (args.fuel, args.k))
    less = reconstruct([], _read_program(args.less))
    more = reconstruct([], _read_program(args.more))
    result = sem_approx(Direction(args.dir), less, more, args.k, args.fuel)
    print(_color(str(result)), file=out)
    return EXIT_NEGATIVE if result is ThreeValued.FAILS else EXIT_OK


def _cmd_fuzz(args, out):
    try:
        cfg = GenConfig(seed=args.seed, fuel=args.fuel,
                        max_size=args.max_size, type_depth=args.type_depth,
                        mutation_budget=args.mutation_budget,
                        adversarial=args.adversarial, jobs=args.jobs)
    except ValueError as e:
        raise UsageError(str(e)) from e
    try:
        report = fuzz_campaign(cfg, args.pairs)
    except GenerationExhausted as e:
        raise UsageError(str(e)) from e
    totals = report.totals
    print('pairs: %d  %s: %d  %s: %d  %s: %d' % (
        len(report.records),
        _color('consistent'), totals['consistent'],
        _color('violation'), totals['violation'],
        _color('inconclusive'), totals['inconclusive']), file=out)
    if args.json == '-':
        print(report.to_json(), file=out)
    elif args.json is not None:
        with open(args.json, 'w', encoding='utf-8') as fh:
            fh.write(report.to_json())
            fh.write('\n')
    return EXIT_VIOLATION if totals['violation'] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog='q2-gradual',
        description='Type check, run, compile casts for and compare the'
                    ' precision of Cast Calculus programs, and test the'
                    ' gradual guarantee on generated pairs.')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='log campaign progress (repeat for detail)')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('typecheck', help='print the type of a program')
    p.add_argument('file')
    p.set_defaults(func=_cmd_typecheck)

    p = sub.add_parser('run', help='evaluate a program with bounded fuel')
    p.add_argument('file')
    p.add_argument('--fuel', type=_natural, default=1000)
    p.add_argument('--trace', action='store_true',
                   help='also print every step as JSON')
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser('cast', help='compile a cast around a program')
    p.add_argument('file')
    p.add_argument('--from', dest='source', type=_type_arg, required=True)
    p.add_argument('--to', dest='target', type=_type_arg, required=True)
    p.set_defaults(func=_cmd_cast)

    p = sub.add_parser('prec', help='derive LESS ⊑ MORE')
    p.add_argument('less')
    p.add_argument('more')
    p.set_defaults(func=_cmd_prec)

    p = sub.add_parser('semapprox',
                       help='semantic approximation at a step index')
    p.add_argument('less')
    p.add_argument('more')
    p.add_argument('--dir', choices=[d.value for d in Direction],
                   default=Direction.LE.value)
    p.add_argument('-k', type=_natural, required=True)
    p.add_argument('--fuel', type=_natural, default=1000)
    p.set_defaults(func=_cmd_semapprox)

    p = sub.add_parser('fuzz', help='run a gradual guarantee campaign')
    p.add_argument('--seed', type=_natural, default=0)
    p.add_argument('--pairs', type=_natural, default=100)
    p.add_argument('--fuel', type=_natural, default=1000)
    p.add_argument('--max-size', type=_natural, default=12)
    p.add_argument('--type-depth', type=_natural, default=2)
    p.add_argument('--mutation-budget', type=_natural, default=3)
    p.add_argument('--adversarial', action='store_true',
                   help='also place blame on the more-precise side and'
                        ' judge the swapped pairs as negative controls')
    p.add_argument('--jobs', type=int, default=1)
    p.add_argument('--json', metavar='OUT',
                   help="write the report as JSON to OUT ('-' for stdout)")
    p.set_defaults(func=_cmd_fuzz)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        # --help
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose,
                                                      logging.DEBUG)
    logging.basicConfig(level=level,
                        format='%(levelname)s %(name)s: %(message)s')

    try:
        return args.func(args, out)
    except UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except (TypingError, IllTyped, Inconsistent, StuckTerm) as e:
        logger.debug('command failed', exc_info=True)
        print('error [%s]: %s' % (e.code, e), file=sys.stderr)
        return EXIT_NEGATIVE
