'''
Random BBI theorems from a Hilbert system.

A theorem is built by instantiating a randomly chosen axiom schema with
random formulas, then rewriting it ``i`` times with the two deduction rules
for the magic wand::

    |- A -> (B -* C)          |- (A * B) -> C
    ----------------  wand1   ----------------  wand2
    |- (A * B) -> C           |- A -> (B -* C)

Rewrites only happen at theorem positions: the whole formula and the
conjuncts of a conjunction at a theorem position.

Random choices come from SplitMix64 seeded with (seed, k), so suites are
identical across runs and platforms.
'''
from collections import namedtuple

from .formula import (Formula, Atom, Not, And, Or, Imp, Star, Wand, TOP, BOT,
                      EMP, parse)

import logging
log = logging.getLogger('separata')

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
STREAM = 0xD1B54A32D192ED03

ATOMS = ('p', 'q', 'r', 's')


class SplitMix64(object):
    def __init__(self, seed):
        self.state = seed & MASK

    def next(self):
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n):
        return self.next() % n

    def choice(self, items):
        return items[self.below(len(items))]


def rng_for(seed, k):
    return SplitMix64((seed + (k + 1) * STREAM) & MASK)


GenParams = namedtuple('GenParams', 'n i seed count')
GenParams.__new__.__defaults__ = (10, 20, 0, 100)


def check_params(params):
    if params.n < 1:
        raise ValueError('n must be at least 1')
    if params.i < 0:
        raise ValueError('i must not be negative')
    if params.count < 0:
        raise ValueError('count must not be negative')


# Metavariables are the upper-case atoms of each schema.
SCHEMA_TEXT = (
    ('unit-intro', 'A -> emp * A'),
    ('unit-elim', 'emp * A -> A'),
    ('star-comm', 'A * B -> B * A'),
    ('star-assoc', 'A * (B * C) -> (A * B) * C'),
    ('k', 'A -> B -> A'),
    ('s', '(A -> B -> C) -> (A -> B) -> A -> C'),
    ('dneg', '~~A -> A'),
    ('and-intro', 'A -> B -> A & B'),
    ('and-elim1', 'A & B -> A'),
    ('and-elim2', 'A & B -> B'),
    ('or-intro1', 'A -> A | B'),
    ('or-intro2', 'B -> A | B'),
    ('or-elim', '(A -> C) -> (B -> C) -> A | B -> C'),
    ('not-elim', '~A -> A -> bot'),
    ('not-intro', '(A -> bot) -> ~A'),
)

_schemas = None


def schemas():
    global _schemas
    if _schemas is None:
        _schemas = [(name, parse(text)) for name, text in SCHEMA_TEXT]
    return _schemas


def metavariables(schema):
    found = set()
    stack = [schema]
    while stack:
        f = stack.pop()
        if isinstance(f, Atom):
            found.add(f.name)
        stack.extend(a for a in f.args if isinstance(a, Formula))
    return sorted(found)


def instantiate(schema, mapping):
    """Replace the atoms named in ``mapping`` simultaneously."""
    if isinstance(schema, Atom):
        return mapping.get(schema.name, schema)
    if not schema.args:
        return schema
    return schema.__class__(*[instantiate(a, mapping) for a in schema.args])


def random_formula(rng, n, atoms=ATOMS):
    """A random formula with exactly n connectives."""
    if n == 0:
        roll = rng.below(8)
        if roll == 0:
            return TOP
        if roll == 1:
            return EMP
        if roll == 2:
            return BOT
        return Atom(rng.choice(atoms))
    op = rng.choice((Not, And, Or, Imp, Star, Wand))
    if op is Not:
        return Not(random_formula(rng, n - 1, atoms))
    k = rng.below(n)
    return op(random_formula(rng, k, atoms),
              random_formula(rng, n - 1 - k, atoms))


def theorem_positions(f, path=()):
    """Paths of the subformulas whose theoremhood follows from f's."""
    yield path, f
    if isinstance(f, And):
        for i, sub in enumerate(f.args):
            for found in theorem_positions(sub, path + (i,)):
                yield found


def replace_at(f, path, new):
    if not path:
        return new
    args = list(f.args)
    args[path[0]] = replace_at(args[path[0]], path[1:], new)
    return f.__class__(*args)


def wand1(f):
    """A -> (B -* C) to (A * B) -> C, or None."""
    if isinstance(f, Imp) and isinstance(f.right, Wand):
        return Imp(Star(f.left, f.right.left), f.right.right)
    return None


def wand2(f):
    """(A * B) -> C to A -> (B -* C), or None."""
    if isinstance(f, Imp) and isinstance(f.left, Star):
        return Imp(f.left.left, Wand(f.left.right, f.right))
    return None


def mutation_sites(f):
    sites = []
    for path, sub in theorem_positions(f):
        for rule in (wand1, wand2):
            new = rule(sub)
            if new is not None:
                sites.append((path, new))
    return sites


def mutate(f, rng):
    """One random wand1/wand2 rewrite; f itself when nothing applies."""
    sites = mutation_sites(f)
    if not sites:
        return f
    path, new = rng.choice(sites)
    return replace_at(f, path, new)


def gen_theorem(params, k):
    """The k-th theorem of the suite described by params."""
    rng = rng_for(params.seed, k)
    name, schema = rng.choice(schemas())
    mapping = dict((v, random_formula(rng, rng.below(params.n + 1)))
                   for v in metavariables(schema))
    f = instantiate(schema, mapping)
    for _ in range(params.i):
        f = mutate(f, rng)
    log.debug('theorem %d from %s: %s', k, name, f)
    return f


def gen_suite(params):
    check_params(params)
    return [gen_theorem(params, k) for k in range(params.count)]
