'''
PASL formulas: the AST, a text parser and a minimal-parenthesis printer.

Concrete syntax, loosest binding first::

    ->   right associative
    -*   right associative
    |    left associative
    &    left associative
    *    left associative
    ~    prefix

Keywords are ``top`` (also ``T``), ``bot`` and ``emp``. The Unicode forms
``⊤ ⊥ ⊤* ¬ ∧ ∨ → ∗ −∗`` are accepted as synonyms.
'''
import re

from pyparsing import (ParserElement, ParseBaseException, Literal, Regex,
                       Suppress, infixNotation, opAssoc, MatchFirst)

from .exceptions import FormulaSyntaxError

ParserElement.enablePackrat()


class Formula(object):
    """
    Base class of the formula AST. Formulas are immutable values: equality
    and hashing are structural.
    """
    __slots__ = ('args', '_hash')
    arity = 0
    precedence = 7
    symbol = None

    def __init__(self, *args):
        if len(args) != self.arity:
            raise TypeError('%s takes %d arguments, %d given' % (
                self.__class__.__name__, self.arity, len(args)))
        self.args = args
        self._hash = hash((self.__class__.__name__,) + args)

    def __eq__(self, other):
        if self is other:
            return True
        return (self.__class__ is other.__class__
                and self._hash == other._hash and self.args == other.args)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return self._hash

    def __reduce__(self):
        return (self.__class__, self.args)

    def __repr__(self):
        return '%s(%s)' % (self.__class__.__name__,
                           ', '.join(repr(a) for a in self.args))

    def __str__(self):
        return render(self)


class Atom(Formula):
    __slots__ = ()
    arity = 1

    def __init__(self, name):
        if name in KEYWORDS or not _NAME_RE.match(name):
            raise FormulaSyntaxError('%r is not an atom name' % (name,))
        super(Atom, self).__init__(name)

    @property
    def name(self):
        return self.args[0]


class Top(Formula):
    __slots__ = ()
    symbol = 'top'


class Bot(Formula):
    __slots__ = ()
    symbol = 'bot'


class Emp(Formula):
    __slots__ = ()
    symbol = 'emp'


class Not(Formula):
    __slots__ = ()
    arity = 1
    precedence = 6
    symbol = '~'

    @property
    def sub(self):
        return self.args[0]


class Binary(Formula):
    __slots__ = ()
    arity = 2
    right_assoc = False

    @property
    def left(self):
        return self.args[0]

    @property
    def right(self):
        return self.args[1]


class Imp(Binary):
    __slots__ = ()
    precedence = 1
    right_assoc = True
    symbol = '->'


class Wand(Binary):
    __slots__ = ()
    precedence = 2
    right_assoc = True
    symbol = '-*'


class Or(Binary):
    __slots__ = ()
    precedence = 3
    symbol = '|'


class And(Binary):
    __slots__ = ()
    precedence = 4
    symbol = '&'


class Star(Binary):
    __slots__ = ()
    precedence = 5
    symbol = '*'


TOP = Top()
BOT = Bot()
EMP = Emp()

KEYWORDS = {
    'top': TOP,
    'T': TOP,
    'bot': BOT,
    'emp': EMP,
}

_NAME_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_']*\Z")


def size(f):
    """Number of nodes in the formula."""
    return 1 + sum(size(a) for a in f.args if isinstance(a, Formula))


def connectives(f):
    """Number of connectives (non-leaf nodes)."""
    if isinstance(f, (Not, Binary)):
        return 1 + sum(connectives(a) for a in f.args)
    return 0


def atoms(f):
    """Sorted list of the atom names occurring in f."""
    found = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            found.add(g.name)
    return sorted(found)


def subformulas(f):
    """All subformulas of f, f itself included, in pre-order."""
    stack = [f]
    out = []
    while stack:
        g = stack.pop()
        out.append(g)
        stack.extend(reversed([a for a in g.args if isinstance(a, Formula)]))
    return out


#
# Parser
#

def _identifier(tokens):
    name = tokens[0]
    if name in KEYWORDS:
        return KEYWORDS[name]
    return Atom(name)


def _unary(tokens):
    ops = tokens[0]
    result = ops[-1]
    for _ in ops[:-1]:
        result = Not(result)
    return result


def _left(cls):
    def action(tokens):
        items = tokens[0]
        result = items[0]
        for i in range(2, len(items), 2):
            result = cls(result, items[i])
        return result
    return action


def _right(cls):
    def action(tokens):
        items = tokens[0]
        result = items[-1]
        for i in range(len(items) - 3, -1, -2):
            result = cls(items[i], result)
        return result
    return action


def _op(*spellings):
    return MatchFirst([Literal(s) for s in spellings])


def _build_grammar():
    constant = MatchFirst([
        Literal(u'⊤*').setParseAction(lambda: EMP),
        Literal(u'⊤').setParseAction(lambda: TOP),
        Literal(u'⊥').setParseAction(lambda: BOT),
    ])
    ident = Regex(r"[a-zA-Z_][a-zA-Z0-9_']*").setName('identifier')
    ident.setParseAction(_identifier)

    expr = infixNotation(constant | ident, [
        (_op('~', u'¬'), 1, opAssoc.RIGHT, _unary),
        (_op('*', u'∗'), 2, opAssoc.LEFT, _left(Star)),
        (_op('&', u'∧'), 2, opAssoc.LEFT, _left(And)),
        (_op('|', u'∨'), 2, opAssoc.LEFT, _left(Or)),
        (_op('-*', u'−∗', u'-∗', u'−*'),
         2, opAssoc.RIGHT, _right(Wand)),
        (_op('->', u'→'), 2, opAssoc.RIGHT, _right(Imp)),
    ], lpar=Suppress('('), rpar=Suppress(')'))
    return expr


_grammar = _build_grammar()
_expected_re = re.compile(r'Expected\s+(.*?)(?:,\s*found.*)?$')


def parse(text):
    """
    Parse ``text`` into a Formula. Raises FormulaSyntaxError with the byte
    offset of the failure.
    """
    try:
        return _grammar.parseString(text, parseAll=True)[0]
    except ParseBaseException as e:
        loc = min(e.loc, len(text))
        offset = len(text[:loc].encode('utf-8'))
        m = _expected_re.match(e.msg or '')
        expected = [m.group(1)] if m else [e.msg]
        raise FormulaSyntaxError(
            'syntax error at byte %d: %s' % (offset, e.msg),
            offset=offset, expected=expected)


#
# Printer
#

def _needs_parens(child, parent, on_right):
    if child.precedence < parent.precedence:
        return True
    if child.precedence == parent.precedence and isinstance(child, Binary):
        return parent.right_assoc != on_right
    return False


def render(f):
    """Text for f with the fewest parentheses that re-parse to f."""
    if isinstance(f, Atom):
        return f.name
    if f.arity == 0:
        return f.symbol
    if isinstance(f, Not):
        inner = render(f.sub)
        if isinstance(f.sub, Binary):
            inner = '(%s)' % inner
        return '~' + inner
    left, right = render(f.left), render(f.right)
    if _needs_parens(f.left, f, False):
        left = '(%s)' % left
    if _needs_parens(f.right, f, True):
        right = '(%s)' % right
    return '%s %s %s' % (left, f.symbol, right)
