'''
Finite Kripke relational models: formula evaluation, frame-axiom checking,
sequent falsifiability and a few concrete models used as test oracles.

Worlds are strings. ``rel`` is a set of (h1, h2, h3) triples meaning
h1 . h2 = h3.
'''
import json
import random
from fractions import Fraction
from itertools import product

from .exceptions import (UnknownWorld, UnmappedLabel, CapExceeded,
                         ModelFormatError)
from .formula import (Atom, Top, Bot, Emp, Not, And, Or, Imp, Star, Wand,
                      atoms as formula_atoms)
from .sequents import EPSILON, Ternary, Eq, Neq, label_name
from .axioms import is_var, term_name
from .calculus import match_patterns

import logging
log = logging.getLogger('separata')


class KripkeModel(object):
    """
    A finite frame (worlds, rel, epsilon) with a valuation of atoms and an
    optional mapping ``rho`` from sequent labels to worlds.
    """
    def __init__(self, worlds, epsilon, rel, valuation=None, rho=None,
                 name=None):
        self.worlds = tuple(worlds)
        self.epsilon = epsilon
        self.rel = frozenset(tuple(t) for t in rel)
        self.valuation = dict((k, frozenset(v))
                              for k, v in (valuation or {}).items())
        self.rho = dict(rho or {})
        self.rho[EPSILON] = epsilon
        self.name = name
        self._all = frozenset(self.worlds)
        self._ext = {}
        self._check()

    def _check(self):
        if not self.worlds:
            raise ModelFormatError('a model needs at least one world')
        if len(self._all) != len(self.worlds):
            raise ModelFormatError('duplicate world names')
        if self.epsilon not in self._all:
            raise ModelFormatError('epsilon %r is not a world' % self.epsilon)
        for t in self.rel:
            if len(t) != 3 or not set(t) <= self._all:
                raise ModelFormatError('bad triple %r' % (t,))
        for atom, ws in self.valuation.items():
            if not ws <= self._all:
                raise ModelFormatError('valuation of %s is not a set of worlds'
                                       % atom)
        for label, w in self.rho.items():
            if w not in self._all:
                raise ModelFormatError('label %s mapped to unknown world %r'
                                       % (label_name(label), w))

    def with_valuation(self, valuation):
        return KripkeModel(self.worlds, self.epsilon, self.rel, valuation,
                           self.rho, self.name)

    def with_rho(self, rho):
        return KripkeModel(self.worlds, self.epsilon, self.rel,
                           self.valuation, rho, self.name)

    def __repr__(self):
        return '<KripkeModel %s: %d worlds, %d triples>' % (
            self.name or '', len(self.worlds), len(self.rel))


#
# Evaluation
#

def extension(m, f):
    """The set of worlds of m at which f holds."""
    try:
        return m._ext[f]
    except KeyError:
        pass
    if isinstance(f, Atom):
        out = m.valuation.get(f.name, frozenset())
    elif isinstance(f, Top):
        out = m._all
    elif isinstance(f, Bot):
        out = frozenset()
    elif isinstance(f, Emp):
        out = frozenset([m.epsilon])
    elif isinstance(f, Not):
        out = m._all - extension(m, f.sub)
    elif isinstance(f, And):
        out = extension(m, f.left) & extension(m, f.right)
    elif isinstance(f, Or):
        out = extension(m, f.left) | extension(m, f.right)
    elif isinstance(f, Imp):
        out = (m._all - extension(m, f.left)) | extension(m, f.right)
    elif isinstance(f, Star):
        a, b = extension(m, f.left), extension(m, f.right)
        out = frozenset(h for h1, h2, h in m.rel if h1 in a and h2 in b)
    elif isinstance(f, Wand):
        a, b = extension(m, f.left), extension(m, f.right)
        out = m._all - frozenset(h for h, h1, h2 in m.rel
                                 if h1 in a and h2 not in b)
    else:
        raise TypeError('not a formula: %r' % (f,))
    m._ext[f] = out
    return out


def eval(m, h, f):
    """True iff world h forces f in m."""
    if h not in m._all:
        raise UnknownWorld('no world %r in model' % (h,))
    return h in extension(m, f)


def valid_in(m, f):
    return extension(m, f) == m._all


def falsifying_world(m, f):
    """A world where f fails, preferring epsilon, or None."""
    ext = extension(m, f)
    if m.epsilon not in ext:
        return m.epsilon
    for h in m.worlds:
        if h not in ext:
            return h
    return None


#
# Frame axioms
#

class FrameViolation(object):
    def __init__(self, axiom, assignment):
        self.axiom = axiom
        self.assignment = assignment

    @property
    def name(self):
        return self.axiom.name

    def __str__(self):
        return 'axiom %s fails for %s' % (self.axiom.name, ', '.join(
            '%s=%s' % (v, self.assignment[v]) for v in self.axiom.universals
            if v in self.assignment))

    __repr__ = __str__


class _Indexed(object):
    """Worlds numbered from 1 so that schema terms and worlds never clash."""
    def __init__(self, m):
        self.names = (None,) + m.worlds
        self.ids = dict((w, i) for i, w in enumerate(m.worlds, 1))
        self.eps = self.ids[m.epsilon]
        self.triples = sorted(tuple(self.ids[w] for w in t) for t in m.rel)
        self.tripleset = frozenset(self.triples)
        self.domain = range(1, len(m.worlds) + 1)

    def ground(self, atom):
        return atom.rename({EPSILON: self.eps})


def _holds(ix, atom, binding):
    a = atom.rename(binding)
    if isinstance(a, Ternary):
        return tuple(a) in ix.tripleset
    if isinstance(a, Eq):
        return a[0] == a[1]
    return a[0] != a[1]


def _assignments(ix, patterns, variables, binding):
    def candidates(pattern, b):
        return ix.triples
    for matched in match_patterns(patterns, candidates, binding):
        rest = [v for v in variables if v not in matched]
        for values in product(ix.domain, repeat=len(rest)):
            full = dict(matched)
            full.update(zip(rest, values))
            yield full


def check_frame(m, axioms):
    """
    Violations of the given frame axioms in m, at most one per axiom, each
    with a witnessing assignment of the universals.
    """
    ix = _Indexed(m)
    out = []
    for axiom in axioms:
        ante = [ix.ground(a) for a in axiom.antecedent]
        cons = [ix.ground(a) for a in axiom.consequent]
        eqs = [tuple(ix.eps if t == EPSILON else t for t in p)
               for p in axiom.equalities]
        ante_tern = [a for a in ante if isinstance(a, Ternary)]
        ante_rest = [a for a in ante if not isinstance(a, Ternary)]
        cons_tern = [a for a in cons if isinstance(a, Ternary)]
        cons_rest = [a for a in cons if not isinstance(a, Ternary)]
        witness = None
        for binding in _assignments(ix, ante_tern, axiom.universals, {}):
            if not all(binding.get(s, s) == binding.get(t, t)
                       for s, t in eqs):
                continue
            if not all(_holds(ix, a, binding) for a in ante_rest):
                continue
            satisfied = False
            for full in _assignments(ix, cons_tern, axiom.existentials,
                                     binding):
                if all(_holds(ix, a, full) for a in cons_rest):
                    satisfied = True
                    break
            if not satisfied:
                witness = binding
                break
        if witness is not None:
            out.append(FrameViolation(axiom, dict(
                (v, ix.names[witness[v]]) for v in axiom.universals
                if is_var(v) and v in witness)))
    return out


def check_frame_names(m, axioms):
    return [v.name for v in check_frame(m, axioms)]


#
# Sequents
#

def _world(m, label):
    try:
        return m.rho[label]
    except KeyError:
        raise UnmappedLabel('label %s is not mapped to a world'
                            % label_name(label))


def falsifiable(m, s):
    """
    True iff m with its label mapping makes every antecedent formula and
    relational atom of s true and every succedent formula false.
    """
    for l in s.labels():
        _world(m, l)
    for a, b, c in s.rel:
        if (_world(m, a), _world(m, b), _world(m, c)) not in m.rel:
            return False
    for a, b in s.eqs:
        if _world(m, a) != _world(m, b):
            return False
    for a, b in s.neqs:
        if _world(m, a) == _world(m, b):
            return False
    for l, f in s.gamma:
        if not eval(m, _world(m, l), f):
            return False
    for l, f in s.delta:
        if eval(m, _world(m, l), f):
            return False
    return True


#
# Concrete models
#

def make_monoid(elements, op, unit, name=None):
    """
    The frame of a (partial) commutative monoid. ``op`` is a function or a
    dict keyed by pairs; a result of None leaves the composition undefined.
    """
    lookup = op.get if isinstance(op, dict) else (lambda p: op(*p))
    worlds = [str(e) for e in elements]
    rel = []
    for a in elements:
        for b in elements:
            c = lookup((a, b))
            if c is not None:
                rel.append((str(a), str(b), str(c)))
    return KripkeModel(worlds, str(unit), rel, name=name)


def make_zn(n):
    """Integers modulo n under addition: total, cancellative, not disjoint."""
    return make_monoid(range(n), lambda a, b: (a + b) % n, 0,
                       name='Z%d' % n)


def make_counter(n):
    """{0..n-1} under max: total and deterministic but not cancellative."""
    return make_monoid(range(n), max, 0, name='max%d' % n)


def make_fractional(d):
    """
    Fractional permissions on one location with shares k/d, composed by
    addition when the sum stays within 1.
    """
    if not 1 <= d <= 4:
        raise CapExceeded('fractional models are limited to denominators <= 4')
    shares = [Fraction(k, d) for k in range(d + 1)]

    def add(a, b):
        c = a + b
        return c if c <= 1 else None
    return make_monoid(shares, add, Fraction(0), name='frac%d' % d)


def _heap_name(heap):
    if not heap:
        return '{}'
    return '{%s}' % ','.join('%d:%d' % kv for kv in heap)


def heap_frame(locations, values, cap=64):
    """
    Heaps over ``locations`` locations holding one of ``values`` values,
    composed by disjoint union.
    """
    size = (values + 1) ** locations
    if size > cap:
        raise CapExceeded('%d heaps over %d locations exceeds the cap of %d'
                          % (size, locations, cap))
    heaps = []
    for choice in product(range(values + 1), repeat=locations):
        heaps.append(tuple((loc, v - 1) for loc, v in enumerate(choice)
                           if v))
    heaps.sort(key=lambda h: (len(h), h))
    rel = []
    for h1 in heaps:
        d1 = set(loc for loc, _ in h1)
        for h2 in heaps:
            if d1.isdisjoint(loc for loc, _ in h2):
                h3 = tuple(sorted(h1 + h2))
                rel.append((_heap_name(h1), _heap_name(h2), _heap_name(h3)))
    return KripkeModel([_heap_name(h) for h in heaps], '{}', rel,
                       name='heap%dx%d' % (locations, values))


def valuations(worlds, atoms, samples=None, seed=0, limit=4096):
    """
    Valuations of ``atoms`` over ``worlds``: all of them when there are at
    most ``limit`` (and no ``samples`` is asked for), otherwise a seeded
    random sample of ``samples`` (default ``limit``).
    """
    worlds = list(worlds)
    atoms = list(atoms)
    subsets = 2 ** len(worlds)
    total = subsets ** len(atoms)
    if samples is None and total <= limit:
        masks = product(range(subsets), repeat=len(atoms))
    else:
        rng = random.Random(seed)
        count = min(samples or limit, total)
        masks = ([rng.randrange(subsets) for _ in atoms]
                 for _ in range(count))
    for mask in masks:
        yield dict((a, [w for i, w in enumerate(worlds) if bits >> i & 1])
                   for a, bits in zip(atoms, mask))


def enumerate_heap_models(locations, values, atoms, samples=None, seed=0,
                          cap=64):
    """Heap frames crossed with valuations of ``atoms``."""
    frame = heap_frame(locations, values, cap)
    for v in valuations(frame.worlds, atoms, samples, seed):
        yield frame.with_valuation(v)


def small_frames():
    """Small concrete frames, smallest first, for counter-model search."""
    return [
        make_zn(1),
        heap_frame(1, 1),
        make_zn(2),
        make_counter(2),
        make_fractional(2),
        make_zn(3),
        heap_frame(1, 2),
        make_counter(3),
        heap_frame(2, 1),
        make_fractional(3),
        make_zn(4),
    ]


def countermodel_in(frame, f, samples=None, seed=0, limit=4096, check=None):
    """A (model, world) falsifying f over frame, or None."""
    for v in valuations(frame.worlds, formula_atoms(f), samples, seed, limit):
        if check is not None:
            check()
        m = frame.with_valuation(v)
        h = falsifying_world(m, f)
        if h is not None:
            return m, h
    return None


#
# Model files
#

def model_to_dict(m):
    out = {
        'worlds': list(m.worlds),
        'epsilon': m.epsilon,
        'rel': [list(t) for t in sorted(m.rel)],
        'valuation': dict((a, sorted(ws)) for a, ws in
                          sorted(m.valuation.items())),
    }
    rho = dict((label_name(l), w) for l, w in m.rho.items()
               if l != EPSILON)
    if rho:
        out['rho'] = rho
    return out


def _parse_label(text):
    if text in ('e', 'eps'):
        return EPSILON
    if text.startswith('a') and text[1:].isdigit():
        return int(text[1:])
    raise ModelFormatError('bad label %r in rho' % text)


def model_from_dict(data):
    if not isinstance(data, dict):
        raise ModelFormatError('a model must be an object')
    for field in ('worlds', 'epsilon', 'rel'):
        if field not in data:
            raise ModelFormatError('missing field %r' % field)
    try:
        worlds = [str(w) for w in data['worlds']]
        rel = [tuple(str(w) for w in t) for t in data['rel']]
        valuation = dict((str(a), [str(w) for w in ws])
                         for a, ws in data.get('valuation', {}).items())
        rho = dict((_parse_label(str(l)), str(w))
                   for l, w in data.get('rho', {}).items())
    except (TypeError, AttributeError) as e:
        raise ModelFormatError('malformed model: %s' % e)
    return KripkeModel(worlds, str(data['epsilon']), rel, valuation, rho)


def load_model(path):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except ValueError as e:
        raise ModelFormatError('%s: %s' % (path, e))
    return model_from_dict(data)


def dump_model(m, path=None):
    """Write m as JSON to path, or return the JSON text."""
    text = json.dumps(model_to_dict(m), indent=2, sort_keys=True)
    if path is None:
        return text
    with open(path, 'w') as fh:
        fh.write(text + '\n')
    return text
