# ----------------------------------------------------------------------------
# Copyright (c) 2023-2026, QIIME 2 development team.
#
# Distributed under the terms of the Modified BSD License.
#
# The full license is in the file LICENSE, distributed with this software.
# ----------------------------------------------------------------------------

"""Concrete s-expression syntax for programs and types.

    type   := "*" | "Nat" | "Bool" | "(->" type type ")"
    ground := "Nat" | "Bool" | "Fun"
    term   := ident | "(lam" "(" ident [":" type] ")" term ")"
            | "(" term term ")" | "(nat" integer ")" | "true" | "false"
            | "(inj" ground term ")" | "(proj" ground term ")"
            | "(blame" type ")" | "blame"

A lambda without a domain and a bare `blame` parse to the unannotated core
nodes. `;` starts a comment that runs to the end of the line.
"""

import re
from dataclasses import dataclass
from typing import List, Optional, Sequence

from q2_gradual._core import (Arrow, Base, BaseT, BoolL, GBase, GFUN, Ground,
                              Num, Type, UNKNOWN)
from q2_gradual._abt import (ABlame, ALam, App, Blame, Inject, Lam, Lit,
                             Project, Span, Var)
from q2_gradual._reduce import (AppL, AppR, Blamed, InjF, ProjF, Timeout,
                                Val)
from q2_gradual import _precision as prec

KEYWORDS = frozenset(['lam', 'nat', 'inj', 'proj', 'blame', 'true', 'false'])

_TOKEN = re.compile(r'\s+|;[^\n]*|(?P<tok>[():]|[^\s():;]+)')
_NATURAL = re.compile(r'[0-9]+')


class ParseError(ValueError):
    code = 'parse-error'

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self):
        if self.span is None:
            return self.message
        return '%s: %s' % (self.span, self.message)


class UnboundName(ParseError):
    code = 'unbound-name'

    def __init__(self, name, span=None):
        self.name = name
        super().__init__('The name %r is not bound by any enclosing lambda.'
                         % name, span)


@dataclass(frozen=True)
class Token:
    text: str
    span: Span


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        # the pattern accepts every character, so a match always exists
        if match.group('tok') is not None:
            tokens.append(Token(match.group('tok'),
                                Span(line, pos - line_start + 1)))
        chunk = match.group(0)
        newlines = chunk.count('\n')
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex('\n') + 1
        pos = match.end()
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.pos = 0

    def _eof_span(self):
        if self.tokens:
            return self.tokens[-1].span
        return Span(1, 1)

    def peek(self, offset=0) -> Optional[Token]:
        i = self.pos + offset
        return self.tokens[i] if i < len(self.tokens) else None

    def next(self, what) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError('Unexpected end of input, expected %s.' % what,
                             self._eof_span())
        self.pos += 1
        return tok

    def expect(self, text):
        tok = self.next(repr(text))
        if tok.text != text:
            raise ParseError('Expected %r but found %r.' % (text, tok.text),
                             tok.span)
        return tok

    def finish(self):
        tok = self.peek()
        if tok is not None:
            raise ParseError('Unexpected %r after the end of the program.'
                             % tok.text, tok.span)

    def type(self) -> Type:
        tok = self.next('a type')
        match tok.text:
            case '*':
                return UNKNOWN
            case 'Nat':
                return BaseT(Base.NAT)
            case 'Bool':
                return BaseT(Base.BOOL)
            case '(':
                self.expect('->')
                dom = self.type()
                cod = self.type()
                self.expect(')')
                return Arrow(dom, cod)
        raise ParseError('Expected a type (*, Nat, Bool or (-> A B)) but'
                         ' found %r.' % tok.text, tok.span)

    def ground(self) -> Ground:
        tok = self.next('a ground type')
        match tok.text:
            case 'Nat':
                return GBase(Base.NAT)
            case 'Bool':
                return GBase(Base.BOOL)
            case 'Fun':
                return GFUN
        raise ParseError('Expected a ground type (Nat, Bool or Fun) but'
                         ' found %r.' % tok.text, tok.span)

    def ident(self) -> Token:
        tok = self.next('a variable name')
        if tok.text in KEYWORDS or tok.text in ('(', ')', ':') \
                or tok.text[0].isdigit():
            raise ParseError('%r cannot be used as a variable name.'
                             % tok.text, tok.span)
        return tok

    def term(self, scope: Sequence[str]):
        tok = self.next('a term')
        match tok.text:
            case 'true':
                return Lit(BoolL(True), span=tok.span)
            case 'false':
                return Lit(BoolL(False), span=tok.span)
            case 'blame':
                return Blame(span=tok.span)
            case '(':
                return self._form(tok, scope)
            case ')' | ':':
                raise ParseError('Unexpected %r, expected a term.'
                                 % tok.text, tok.span)
        return self._variable(tok, scope)

    def _variable(self, tok, scope):
        if tok.text in KEYWORDS or tok.text[0].isdigit():
            raise ParseError('Unexpected %r, expected a term.' % tok.text,
                             tok.span)
        # innermost binder first, so shadowing picks the nearest one
        for index, name in enumerate(reversed(scope)):
            if name == tok.text:
                return Var(index, span=tok.span)
        raise UnboundName(tok.text, tok.span)

    def _form(self, open_tok, scope):
        head = self.peek()
        keyword = head.text if head is not None else None
        if keyword == 'lam':
            self.pos += 1
            self.expect('(')
            name = self.ident().text
            dom = None
            if self.peek() is not None and self.peek().text == ':':
                self.pos += 1
                dom = self.type()
            self.expect(')')
            body = self.term(list(scope) + [name])
            self.expect(')')
            if dom is None:
                return Lam(body, span=open_tok.span)
            return ALam(dom, body, span=open_tok.span)
        if keyword == 'nat':
            self.pos += 1
            tok = self.next('a natural number')
            if not _NATURAL.fullmatch(tok.text):
                raise ParseError('Expected a natural number but found %r.'
                                 % tok.text, tok.span)
            self.expect(')')
            return Lit(Num(int(tok.text)), span=open_tok.span)
        if keyword in ('inj', 'proj'):
            self.pos += 1
            g = self.ground()
            body = self.term(scope)
            self.expect(')')
            cls = Inject if keyword == 'inj' else Project
            return cls(body, g, span=open_tok.span)
        if keyword == 'blame':
            self.pos += 1
            ann = self.type()
            self.expect(')')
            return ABlame(ann, span=open_tok.span)
        fn = self.term(scope)
        arg = self.term(scope)
        self.expect(')')
        return App(fn, arg, span=open_tok.span)


def parse(text: str):
    """Parse a closed program; named binders become de Bruijn indices."""
    p = _Parser(text)
    m = p.term([])
    p.finish()
    return m


def parse_type(text: str) -> Type:
    p = _Parser(text)
    a = p.type()
    p.finish()
    return a


def print_type(a: Type) -> str:
    return str(a)


def print_ground(g: Ground) -> str:
    return str(g)


def print_literal(lit) -> str:
    if isinstance(lit, Num):
        return '(nat %d)' % lit.n
    return 'true' if lit.b else 'false'


def print_term(m, blame_types: bool = True, depth: int = 0) -> str:
    """Print `m` in the concrete syntax, naming the binder at depth d `x{d}`.

    With `blame_types=False`, annotated blame prints as bare `blame`.
    """
    match m:
        case Var(i):
            if i < depth:
                return 'x%d' % (depth - 1 - i)
            return '#%d' % (i - depth)
        case Lit(lit):
            return print_literal(lit)
        case ALam(dom, body):
            return '(lam (x%d : %s) %s)' % (
                depth, dom, print_term(body, blame_types, depth + 1))
        case Lam(body):
            return '(lam (x%d) %s)' % (
                depth, print_term(body, blame_types, depth + 1))
        case App(fn, arg):
            return '(%s %s)' % (print_term(fn, blame_types, depth),
                                print_term(arg, blame_types, depth))
        case Inject(body, g):
            return '(inj %s %s)' % (g, print_term(body, blame_types, depth))
        case Project(body, h):
            return '(proj %s %s)' % (h, print_term(body, blame_types, depth))
        case ABlame(ann):
            return '(blame %s)' % ann if blame_types else 'blame'
        case Blame():
            return 'blame'
    raise TypeError('Not a term of the Cast Calculus: %r' % (m,))


def _plural(n, word):
    return '%d %s%s' % (n, word, '' if n == 1 else 's')


def describe_outcome(outcome) -> str:
    match outcome:
        case Val(value, steps):
            return 'value %s after %s' % (print_term(value, False),
                                          _plural(steps, 'step'))
        case Blamed(steps):
            return 'blame after %s' % _plural(steps, 'step')
        case Timeout(fuel):
            return 'timeout after %s' % _plural(fuel, 'step')
    raise TypeError('Not an evaluation outcome: %r' % (outcome,))


def outcome_to_json(outcome) -> dict:
    match outcome:
        case Val(value, steps):
            return {'outcome': 'value', 'steps': steps,
                    'value': print_term(value, False)}
        case Blamed(steps):
            return {'outcome': 'blame', 'steps': steps}
        case Timeout(fuel):
            return {'outcome': 'timeout', 'steps': fuel}
    raise TypeError('Not an evaluation outcome: %r' % (outcome,))


def frame_to_json(f) -> str:
    match f:
        case AppL():
            return 'app-fn'
        case AppR():
            return 'app-arg'
        case InjF(g):
            return 'inj %s' % g
        case ProjF(h):
            return 'proj %s' % h
    raise TypeError('Not an evaluation frame: %r' % (f,))


def trace_to_json(records) -> list:
    return [{'index': r.index, 'rule': str(r.rule), 'focus': str(r.focus),
             'path': [frame_to_json(f) for f in r.path],
             'term': print_term(r.term, blame_types=False)}
            for r in records]


_TYPE_PREC_RULES = {
    prec.UnkUnk: 'unk-unk', prec.UnkGround: 'unk',
    prec.BaseP: 'base', prec.FunP: 'fun',
}


def type_prec_to_json(c) -> dict:
    node = {'rule': _TYPE_PREC_RULES[type(c)],
            'less': print_type(c.less), 'more': print_type(c.more)}
    match c:
        case prec.UnkGround(g, sub):
            node['ground'] = print_ground(g)
            node['premises'] = [type_prec_to_json(sub)]
        case prec.FunP(dom, cod):
            node['premises'] = [type_prec_to_json(dom),
                                type_prec_to_json(cod)]
        case _:
            node['premises'] = []
    return node


def derivation_to_json(d) -> dict:
    """One node per rule; children follow the rule's premise order."""
    node = {'rule': prec.RULE_NAMES[type(d)]}
    match d:
        case prec.PVar(index):
            node['index'] = index
        case prec.PLit(lit):
            node['literal'] = print_literal(lit)
        case prec.PLam(dom, _):
            node['domain'] = type_prec_to_json(dom)
        case prec.PInjL(g, _) | prec.PInjR(g, _):
            node['ground'] = print_ground(g)
        case prec.PProjL(h, _) | prec.PProjR(h, _):
            node['ground'] = print_ground(h)
        case prec.PBlame(a):
            node['type'] = print_type(a)
    node['premises'] = [derivation_to_json(p) for p in prec.premises(d)]
    return node
