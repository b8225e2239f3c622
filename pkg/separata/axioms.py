'''
Frame axioms and the structural rules they induce.

An axiom has the shape::

    forall xs. s1 = t1 & ... & S1 & ... & Sk  =>  exists ys. T1 & ... & Tl

and is written in axiom files as::

    name: forall x1 .. xm. [s1 = t1, ...] [S1; ...] => exists y1 .. yn. [T1; ...]

Ternary atoms are ``(a,b > c)``, inequalities ``a != b``, equalities
``a = b`` and the unit label is ``eps``. Lines starting with ``#`` are
comments.

Schematic variables are strings; the unit is sequents.EPSILON.
'''
import os
from collections import namedtuple
from itertools import permutations, product

from pyparsing import (Group, Keyword, Literal, Optional, ParseBaseException,
                       Regex, Suppress, ZeroOrMore, delimitedList, MatchFirst,
                       StringEnd)

from .exceptions import (AxiomSyntaxError, InvalidAxiom, UnknownSystem)
from .sequents import EPSILON, Ternary, Eq, Neq

import logging
log = logging.getLogger('separata')

LIBRARY = os.path.join(os.path.dirname(__file__), 'data', 'library.axioms')


def is_var(term):
    return isinstance(term, str)


def term_name(term):
    return 'eps' if term == EPSILON else term


def _rename_terms(items, mapping):
    return [item.rename(mapping) for item in items]


def _rename_pairs(pairs, mapping):
    return [(mapping.get(s, s), mapping.get(t, t)) for s, t in pairs]


Violation = namedtuple('Violation', 'condition atom message')
Violation.__str__ = lambda self: self.message


class FrameAxiom(object):
    """
    A first-order frame axiom. ``equalities`` is a list of (s, t) pairs,
    ``antecedent`` and ``consequent`` lists of relational atoms over the
    schematic variables.
    """
    def __init__(self, name, universals, equalities, antecedent,
                 existentials, consequent, lineno=None):
        self.name = name
        self.universals = tuple(universals)
        self.equalities = tuple(tuple(p) for p in equalities)
        self.antecedent = tuple(antecedent)
        self.existentials = tuple(existentials)
        self.consequent = tuple(consequent)
        self.lineno = lineno

    def __repr__(self):
        return '<FrameAxiom %s>' % render_axiom(self)


def validate_axiom(axiom):
    """
    Check the four conditions of the frame-axiom format. Returns a list of
    violations; an empty list means the axiom is fine.
    """
    violations = []
    seen = set()
    for atom in axiom.antecedent:
        if not isinstance(atom, (Ternary, Neq)):
            violations.append(Violation(
                'antecedent-shape', atom,
                'antecedent atom %s is not a ternary atom or an inequality'
                % render_schema_atom(atom)))
            continue
        if isinstance(atom, Ternary) and EPSILON in atom:
            violations.append(Violation(
                'epsilon-in-antecedent', atom,
                'eps occurs in antecedent ternary atom %s'
                % render_schema_atom(atom)))
        for t in atom:
            if not is_var(t):
                continue
            if t in seen:
                violations.append(Violation(
                    'repeated-variable', atom,
                    'variable %s occurs twice in antecedent' % t))
            seen.add(t)
    for atom in axiom.consequent:
        if not isinstance(atom, (Ternary, Eq, Neq)):
            violations.append(Violation(
                'consequent-shape', atom,
                'consequent item %r is not a relational atom' % (atom,)))
    return violations


#
# Rules
#

class Rule(object):
    """
    Common shape of structural rules. ``antecedent`` is matched against the
    conclusion, ``fresh`` variables receive fresh labels, ``adds`` are the
    atoms the premise gains and ``free`` the universals that the antecedent
    does not bind (they range over the labels of the sequent).
    """
    conditions = ()
    substitutions = ()

    def __init__(self, name, antecedent, fresh, adds, free):
        self.name = name
        self.antecedent = tuple(antecedent)
        self.fresh = tuple(fresh)
        self.adds = tuple(adds)
        self.free = tuple(free)

    @property
    def unifying(self):
        """True for rules that identify labels and create none."""
        if self.fresh:
            return False
        return bool(self.substitutions) or any(
            isinstance(a, Eq) for a in self.adds)

    def variables(self):
        found = set(self.fresh) | set(self.free)
        for atom in self.antecedent + self.adds:
            found.update(t for t in atom if is_var(t))
        for pair in self.conditions + self.substitutions:
            found.update(t for t in pair if is_var(t))
        return found

    def key(self):
        return (self.__class__.__name__,
                frozenset(self.antecedent),
                frozenset(frozenset(p) for p in self.conditions),
                tuple(self.substitutions),
                frozenset(self.fresh),
                frozenset(self.adds),
                frozenset(self.free))

    def rename(self, mapping):
        raise NotImplementedError

    def __repr__(self):
        return '<%s %s>' % (self.__class__.__name__, render_rule(self))


class StructuralRule(Rule):
    """Equality-based rule: side conditions are checked with eq_query."""
    def __init__(self, name, antecedent, conditions, fresh, adds, free):
        super(StructuralRule, self).__init__(
            name, antecedent, fresh, adds, free)
        self.conditions = tuple(tuple(p) for p in conditions)

    def rename(self, mapping):
        return StructuralRule(
            self.name, _rename_terms(self.antecedent, mapping),
            _rename_pairs(self.conditions, mapping),
            [mapping.get(v, v) for v in self.fresh],
            _rename_terms(self.adds, mapping),
            [mapping.get(v, v) for v in self.free])


class SubstRule(Rule):
    """
    Equality-free rule: the premise is the conclusion under the global
    ``substitutions`` (each (frm, to) replaces frm by to) plus ``adds``.
    """
    def __init__(self, name, antecedent, substitutions, fresh, adds, free):
        super(SubstRule, self).__init__(name, antecedent, fresh, adds, free)
        self.substitutions = tuple(tuple(p) for p in substitutions)

    def rename(self, mapping):
        return SubstRule(
            self.name, _rename_terms(self.antecedent, mapping),
            _rename_pairs(self.substitutions, mapping),
            [mapping.get(v, v) for v in self.fresh],
            _rename_terms(self.adds, mapping),
            [mapping.get(v, v) for v in self.free])


def rules_equivalent(r1, r2):
    """Equality of two rules up to a renaming of their variables."""
    if r1.__class__ is not r2.__class__:
        return False
    if (len(r1.antecedent), len(r1.adds), len(r1.fresh)) != \
            (len(r2.antecedent), len(r2.adds), len(r2.fresh)):
        return False
    fresh1, fresh2 = sorted(r1.fresh), sorted(r2.fresh)
    rest1 = sorted(r1.variables() - set(fresh1))
    rest2 = sorted(r2.variables() - set(fresh2))
    if len(rest1) != len(rest2):
        return False
    target = r2.key()
    for p_rest, p_fresh in product(permutations(rest2),
                                   permutations(fresh2)):
        mapping = dict(zip(rest1, p_rest))
        mapping.update(zip(fresh1, p_fresh))
        if r1.rename(mapping).key() == target:
            return True
    return False


def synthesize_rule(axiom):
    """The structural rule induced by a valid frame axiom."""
    violations = validate_axiom(axiom)
    if violations:
        raise InvalidAxiom(axiom.name, violations, axiom.lineno)
    bound = set()
    for atom in axiom.antecedent:
        bound.update(t for t in atom if is_var(t))
    free = [v for v in axiom.universals if v not in bound]
    return StructuralRule(axiom.name, axiom.antecedent, axiom.equalities,
                          axiom.existentials, axiom.consequent, free)


def to_subst_rules(rule):
    """
    Convert an equality-based rule into equality-free rules: side-condition
    equalities become variable identifications in the rule itself, and
    consequent equalities become global substitutions in the premise, one
    rule per direction that does not substitute eps away.
    """
    antecedent = list(rule.antecedent)
    adds = list(rule.adds)
    free = list(rule.free)
    conditions = list(rule.conditions)

    while conditions:
        s, t = conditions.pop(0)
        if t != EPSILON:
            frm, to = t, s
        elif s != EPSILON:
            frm, to = s, EPSILON
        else:
            continue
        if frm == to:
            continue
        m = {frm: to}
        antecedent = _rename_terms(antecedent, m)
        adds = _rename_terms(adds, m)
        conditions = _rename_pairs(conditions, m)
        free = [v for v in free if v != frm]
        if is_var(to) and to not in free and to in rule.free:
            free.append(to)

    equalities = [a for a in adds if isinstance(a, Eq)]
    others = [a for a in adds if not isinstance(a, Eq)]

    variants = []

    def expand(pending, subs, mapping):
        if not pending:
            extra = []
            if subs:
                extra = _rename_terms(antecedent, mapping)
            new_adds = []
            for atom in extra + _rename_terms(others, mapping):
                if atom not in new_adds:
                    new_adds.append(atom)
            variants.append((subs, new_adds))
            return
        x, y = pending[0]
        x, y = mapping.get(x, x), mapping.get(y, y)
        rest = pending[1:]
        if x == y:
            expand(rest, subs, mapping)
            return
        for frm, to in ((y, x), (x, y)):
            if frm == EPSILON:
                continue
            m = dict((k, to if v == frm else v) for k, v in mapping.items())
            m[frm] = to
            expand(rest, subs + [(frm, to)], m)

    expand([tuple(e) for e in equalities], [], {})

    out = []
    for subs, new_adds in variants:
        candidate = SubstRule(rule.name, antecedent, subs, rule.fresh,
                              new_adds, free)
        if not any(rules_equivalent(candidate, r) for r in out):
            out.append(candidate)
    if len(out) > 1:
        for i, r in enumerate(out):
            r.name = '%s%d' % (rule.name, i + 1)
    return out


#
# Rendering
#

def render_schema_atom(atom):
    if isinstance(atom, Ternary):
        return '(%s,%s > %s)' % tuple(term_name(t) for t in atom)
    if isinstance(atom, Eq):
        return '%s = %s' % (term_name(atom[0]), term_name(atom[1]))
    return '%s != %s' % (term_name(atom[0]), term_name(atom[1]))


def _pairs(pairs):
    return ', '.join('%s = %s' % (term_name(s), term_name(t))
                     for s, t in pairs)


def _atoms(atoms):
    return '; '.join(render_schema_atom(a) for a in atoms)


def render_axiom(axiom):
    out = '%s: forall %s. [%s] [%s] =>' % (
        axiom.name, ' '.join(axiom.universals), _pairs(axiom.equalities),
        _atoms(axiom.antecedent))
    if axiom.existentials:
        out += ' exists %s.' % ' '.join(axiom.existentials)
    return out + ' [%s]' % _atoms(axiom.consequent)


def render_rule(rule):
    """One-line rule notation used by the synth command."""
    out = '%s: %s' % (rule.name, _atoms(rule.antecedent) or '.')
    if rule.conditions:
        out += ' | %s' % _pairs(rule.conditions)
    if rule.free:
        out += ' | for %s' % ' '.join(rule.free)
    out += ' =>'
    if rule.substitutions:
        out += ' %s' % ' '.join('[%s/%s]' % (term_name(to), term_name(frm))
                                for frm, to in rule.substitutions)
    if rule.fresh:
        out += ' fresh %s.' % ' '.join(rule.fresh)
    return out + ' %s' % (_atoms(rule.adds) or '.')


#
# Axiom file parser
#

def _build_grammar():
    ident = Regex(r"[A-Za-z_][A-Za-z0-9_']*|ε")

    def term_action(tokens):
        t = tokens[0]
        return EPSILON if t in ('eps', u'ε') else t

    term = ident.copy().setParseAction(term_action)
    ternary = (Suppress('(') + term + Suppress(',') + term +
               Suppress(MatchFirst([Literal('>'), Literal(u'▷')])) +
               term + Suppress(')'))
    ternary.setParseAction(lambda t: Ternary(*t))
    neq = term + Suppress(MatchFirst([Literal('!='), Literal(u'≠')])) + term
    neq.setParseAction(lambda t: Neq(*t))
    eq = term + Suppress('=') + term
    eq.setParseAction(lambda t: Eq(*t))
    atom = ternary | neq | eq
    sep = Suppress(MatchFirst([Literal(';'), Literal(',')]))

    def bracket(item):
        return Group(Suppress('[') + Optional(delimitedList(item, sep)) +
                     Suppress(']'))

    name = Regex(r"[A-Za-z_][A-Za-z0-9_'-]*")
    variables = Group(ZeroOrMore(~Keyword('exists') + ident))
    line = (name('name') + Suppress(':') + Suppress(Keyword('forall')) +
            variables('universals') + Suppress('.') +
            bracket(eq)('equalities') + bracket(atom)('antecedent') +
            Suppress('=>') +
            Optional(Suppress(Keyword('exists')) + variables('existentials') +
                     Suppress('.')) +
            bracket(atom)('consequent') + StringEnd())
    return line


_axiom_line = _build_grammar()


def parse_axiom(text, lineno=None):
    """Parse one axiom line. The axiom is not validated here."""
    try:
        r = _axiom_line.parseString(text)
    except ParseBaseException as e:
        raise AxiomSyntaxError('column %d: %s' % (e.col, e.msg), lineno)

    universals = list(r['universals'])
    existentials = list(r['existentials']) if 'existentials' in r else []
    for v in universals + existentials:
        if v in ('eps', u'ε'):
            raise AxiomSyntaxError('eps cannot be quantified', lineno)
    if len(set(universals + existentials)) != \
            len(universals) + len(existentials):
        raise AxiomSyntaxError('variable quantified twice', lineno)
    equalities = [tuple(e) for e in r['equalities']]
    antecedent = list(r['antecedent'])
    consequent = list(r['consequent'])

    def check(terms, allowed, where):
        for t in terms:
            if is_var(t) and t not in allowed:
                raise AxiomSyntaxError(
                    'undeclared variable %s in %s' % (t, where), lineno)

    for pair in equalities:
        check(pair, universals, 'equalities')
    for atom in antecedent:
        check(atom, universals, 'antecedent')
    for atom in consequent:
        check(atom, universals + existentials, 'consequent')

    return FrameAxiom(r['name'], universals, equalities, antecedent,
                      existentials, consequent, lineno=lineno)


def parse_axioms(text, validate=True):
    """Parse an axiom file; with ``validate`` every axiom is checked."""
    axioms = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        axiom = parse_axiom(line, lineno)
        if validate:
            violations = validate_axiom(axiom)
            if violations:
                raise InvalidAxiom(axiom.name, violations, lineno)
        axioms.append(axiom)
    return axioms


def load_axioms(path, validate=True):
    with open(path) as fh:
        return parse_axioms(fh.read(), validate=validate)


_library = None


def library():
    """The built-in axioms keyed by name."""
    global _library
    if _library is None:
        _library = dict((a.name, a) for a in load_axioms(LIBRARY))
    return _library


#
# Systems
#

BASES = {
    'bbi-nd': ('E', 'U', 'Com', 'A'),
    'pasl': ('E', 'U', 'Com', 'A', 'C', 'P'),
    'pasl-nocancel': ('E', 'U', 'Com', 'A', 'P'),
}

FLAGS = {
    'iu': 'IU',
    'd': 'D',
    's': 'S',
    'cs': 'CS',
    'ext': 'EXT',
    'p': 'P',
    'c': 'C',
}


class SystemConfig(object):
    """
    A proof system: the active frame axioms plus switches for the NEq and EM
    rules and for the calculus used by the prover.

    EM is forced on by any axiom that needs inequalities in its antecedent
    (splittability), and NEq by any axiom that can produce inequalities.
    """
    def __init__(self, name, axioms, neq=False, em=False,
                 use_substitution_calculus=True, include_iu_shortcut=True):
        self.name = name
        self.axioms = tuple(axioms)
        names = set(a.name for a in self.axioms)
        self.include_iu_shortcut = include_iu_shortcut
        self.use_substitution_calculus = use_substitution_calculus
        self.em = em or any(isinstance(s, Neq)
                            for a in self.axioms for s in a.antecedent)
        self.neq = neq or self.em or any(
            isinstance(t, Neq) for a in self.axioms for t in a.consequent)
        self._names = names
        self._rules = {}

    def active_axioms(self):
        """Axioms used for rules and model checking, shortcuts included."""
        axioms = list(self.axioms)
        if (self.include_iu_shortcut and 'D' in self._names
                and 'IU' not in self._names):
            axioms.append(library()['IU'])
        return axioms

    def structural_rules(self):
        if 'eq' not in self._rules:
            self._rules['eq'] = [synthesize_rule(a)
                                 for a in self.active_axioms()]
        return self._rules['eq']

    def subst_rules(self):
        if 'subst' not in self._rules:
            rules = []
            for r in self.structural_rules():
                rules.extend(to_subst_rules(r))
            self._rules['subst'] = rules
        return self._rules['subst']

    def rules(self):
        if self.use_substitution_calculus:
            return self.subst_rules()
        return self.structural_rules()

    def with_engine(self, engine):
        """A copy of this config using the 'subst' or 'eq' calculus."""
        if engine not in ('subst', 'eq'):
            raise ValueError('unknown engine %r' % engine)
        return SystemConfig(self.name, self.axioms, neq=self.neq, em=self.em,
                            use_substitution_calculus=(engine == 'subst'),
                            include_iu_shortcut=self.include_iu_shortcut)

    @property
    def engine(self):
        return 'subst' if self.use_substitution_calculus else 'eq'

    def __repr__(self):
        return '<SystemConfig %s %s>' % (
            self.name, ','.join(a.name for a in self.axioms))


def builtin_system(name, **options):
    """
    A SystemConfig by name: a base (bbi-nd, pasl, pasl-nocancel) followed by
    "+"-joined flags (iu, d, s, cs, ext, p, c, em, neq).
    """
    if not name:
        raise UnknownSystem('empty system name')
    parts = name.strip().lower().split('+')
    base = parts[0]
    if base not in BASES:
        raise UnknownSystem('unknown base system %r' % base)
    names = list(BASES[base])
    em = options.pop('em', False)
    neq = options.pop('neq', False)
    for flag in parts[1:]:
        if flag == 'em':
            em = True
        elif flag == 'neq':
            neq = True
        elif flag in FLAGS:
            if FLAGS[flag] not in names:
                names.append(FLAGS[flag])
        else:
            raise UnknownSystem('unknown system flag %r in %r' % (flag, name))
    lib = library()
    return SystemConfig(name, [lib[n] for n in names], neq=neq, em=em,
                        **options)


def custom_system(axioms, name='custom', **options):
    return SystemConfig(name, axioms, **options)
