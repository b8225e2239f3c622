'''
Labels, relational atoms, labelled sequents and the equality store.

Labels are plain integers: ``EPSILON`` (0) is the unit and every positive
integer is a label variable handed out by a LabelAllocator.
'''
from .exceptions import SubstituteEpsilon

EPSILON = 0


def label_name(label):
    if label == EPSILON:
        return 'e'
    if isinstance(label, int):
        return 'a%d' % label
    return str(label)


class RelAtom(tuple):
    """
    A relational atom. Components are labels in sequents and variable
    names in rule schemata.
    """
    __slots__ = ()
    kind = None

    def __new__(cls, *labels):
        return tuple.__new__(cls, labels)

    def __getnewargs__(self):
        return tuple(self)

    def __eq__(self, other):
        return self.__class__ is other.__class__ and tuple.__eq__(self, other)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        return hash((self.kind,) + tuple(self))

    def __repr__(self):
        return '%s%r' % (self.__class__.__name__, tuple(self))

    def __str__(self):
        return render_atom(self)

    def rename(self, mapping):
        return self.__class__(*[mapping.get(t, t) for t in self])


class Ternary(RelAtom):
    """(a, b > c), i.e. R(a, b, c)."""
    __slots__ = ()
    kind = 'R'

    # tuple equality and hashing: these are the hot atoms of the search
    __eq__ = tuple.__eq__
    __ne__ = tuple.__ne__
    __hash__ = tuple.__hash__

    @property
    def a(self):
        return self[0]

    @property
    def b(self):
        return self[1]

    @property
    def c(self):
        return self[2]


class Eq(RelAtom):
    __slots__ = ()
    kind = '='


class Neq(RelAtom):
    __slots__ = ()
    kind = '!='


def render_atom(atom, name=label_name):
    if isinstance(atom, Ternary):
        return '(%s,%s > %s)' % tuple(name(t) for t in atom)
    if isinstance(atom, Eq):
        return '%s = %s' % (name(atom[0]), name(atom[1]))
    return '%s != %s' % (name(atom[0]), name(atom[1]))


class EqStore(object):
    """
    Union-find over labels. EPSILON, when in a class, is that class's
    representative; otherwise the smallest label is.
    """
    def __init__(self, parent=None):
        self._parent = dict(parent) if parent else {}

    @classmethod
    def from_pairs(cls, pairs):
        store = cls()
        for a, b in pairs:
            store._union(a, b)
        return store

    def find(self, a):
        parent = self._parent
        root = a
        while root in parent:
            root = parent[root]
        # path compression
        while a != root:
            nxt = parent[a]
            parent[a] = root
            a = nxt
        return root

    def _union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb == EPSILON or (ra != EPSILON and rb < ra):
            ra, rb = rb, ra
        self._parent[rb] = ra
        return True

    def union(self, a, b):
        """A new store with the classes of a and b merged."""
        if self.query(a, b):
            return self
        store = EqStore(self._parent)
        store._union(a, b)
        return store

    def query(self, a, b):
        return a == b or self.find(a) == self.find(b)

    def members(self):
        return set(self._parent) | set(self._parent.values())

    def __len__(self):
        return len(self._parent)


def _unique(items):
    seen = set()
    out = []
    for item in items:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return tuple(out)


_EMPTY_STORE = EqStore()


class Sequent(object):
    """
    A labelled sequent ``G ; Gamma |- Delta``.

    ``rel`` holds ternary atoms, ``eqs`` and ``neqs`` the (in)equality atoms;
    together they are the relational part G. ``gamma`` and ``delta`` are
    duplicate-free tuples of (label, formula) pairs; their order is the
    worklist order used by the prover, but equality between sequents is
    set-based.
    """
    __slots__ = ('rel', 'eqs', 'neqs', 'gamma', 'delta', 'eq',
                 '_gamma_set', '_delta_set', '_labels', '_hash', '_sorted',
                 '_norm', '_index')

    def __init__(self, rel=(), gamma=(), delta=(), eqs=(), neqs=(), eq=None):
        self.rel = frozenset(rel)
        self.eqs = frozenset(eqs)
        self.neqs = frozenset(neqs)
        self.gamma = _unique(gamma)
        self.delta = _unique(delta)
        if eq is None:
            eq = EqStore.from_pairs(self.eqs) if self.eqs else _EMPTY_STORE
        self.eq = eq
        self._gamma_set = frozenset(self.gamma)
        self._delta_set = frozenset(self.delta)
        self._labels = None
        self._hash = None
        self._sorted = None
        self._norm = None
        self._index = None

    def replace(self, **changes):
        eq = self.eq if 'eqs' not in changes else None
        return Sequent(rel=changes.get('rel', self.rel),
                       gamma=changes.get('gamma', self.gamma),
                       delta=changes.get('delta', self.delta),
                       eqs=changes.get('eqs', self.eqs),
                       neqs=changes.get('neqs', self.neqs),
                       eq=eq)

    @property
    def g(self):
        return self.rel | self.eqs | self.neqs

    def in_gamma(self, item):
        return item in self._gamma_set

    def in_delta(self, item):
        return item in self._delta_set

    def has_atom(self, atom):
        if isinstance(atom, Ternary):
            return atom in self.rel
        if isinstance(atom, Eq):
            return atom in self.eqs
        return atom in self.neqs

    def sorted_rel(self):
        if self._sorted is None:
            self._sorted = tuple(sorted(self.rel))
        return self._sorted

    def index(self):
        """Ternary atoms keyed by (position, label), positions 0, 1 and 2."""
        if self._index is None:
            index = {}
            for atom in self.sorted_rel():
                for pos in (0, 1, 2):
                    index.setdefault((pos, atom[pos]), []).append(atom)
            self._index = index
        return self._index

    def normalized_rel(self):
        """Ternary atoms with every label replaced by its class representative."""
        if self._norm is None:
            find = self.eq.find
            self._norm = frozenset(
                Ternary(find(a), find(b), find(c)) for a, b, c in self.rel)
        return self._norm

    def labels(self):
        if self._labels is None:
            found = set()
            for atom in self.rel:
                found.update(atom)
            for atom in self.eqs:
                found.update(atom)
            for atom in self.neqs:
                found.update(atom)
            found.update(l for l, _ in self.gamma)
            found.update(l for l, _ in self.delta)
            self._labels = frozenset(found)
        return self._labels

    def eq_query(self, a, b):
        return self.eq.query(a, b)

    def add_atoms(self, atoms):
        rel, eqs, neqs = set(), set(), set()
        for atom in atoms:
            if isinstance(atom, Ternary):
                rel.add(atom)
            elif isinstance(atom, Eq):
                eqs.add(atom)
            else:
                neqs.add(atom)
        if rel <= self.rel and eqs <= self.eqs and neqs <= self.neqs:
            return self
        store = self.eq
        for a, b in eqs:
            store = store.union(a, b)
        return Sequent(rel=self.rel | rel, gamma=self.gamma,
                       delta=self.delta, eqs=self.eqs | eqs,
                       neqs=self.neqs | neqs, eq=store)

    def assert_eq(self, a, b):
        return self.add_atoms([Eq(a, b)])

    def subst(self, frm, to):
        """Replace every occurrence of label ``frm`` by ``to``."""
        if frm == EPSILON:
            raise SubstituteEpsilon('cannot substitute %s away' %
                                    label_name(EPSILON))
        if frm == to or frm not in self.labels():
            return self
        m = {frm: to}
        return Sequent(
            rel=[a.rename(m) if frm in a else a for a in self.rel],
            gamma=[(to if l == frm else l, f) for l, f in self.gamma],
            delta=[(to if l == frm else l, f) for l, f in self.delta],
            eqs=[a.rename(m) for a in self.eqs],
            neqs=[a.rename(m) for a in self.neqs])

    def facts(self):
        """Atoms and signed labelled formulas, as used by unsat cores."""
        out = set(self.rel)
        out.update(self.eqs)
        out.update(self.neqs)
        out.update(('L', l, f) for l, f in self.gamma)
        out.update(('R', l, f) for l, f in self.delta)
        return out

    def __eq__(self, other):
        if not isinstance(other, Sequent):
            return False
        return (self.rel == other.rel and self.eqs == other.eqs
                and self.neqs == other.neqs
                and self._gamma_set == other._gamma_set
                and self._delta_set == other._delta_set)

    def __ne__(self, other):
        return not self.__eq__(other)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rel, self.eqs, self.neqs,
                               self._gamma_set, self._delta_set))
        return self._hash

    def __repr__(self):
        return '<Sequent %s>' % render_sequent(self)

    def __str__(self):
        return render_sequent(self)


def render_labelled(item):
    label, f = item
    return '%s:%s' % (label_name(label), f)


def render_sequent(s):
    g = [render_atom(a) for a in s.sorted_rel()]
    g += sorted(render_atom(a) for a in s.eqs)
    g += sorted(render_atom(a) for a in s.neqs)
    return '%s ; %s |- %s' % (', '.join(g),
                              ', '.join(render_labelled(i) for i in s.gamma),
                              ', '.join(render_labelled(i) for i in s.delta))


def eq_query(s, a, b):
    """True iff a = b follows from the equalities of s."""
    return s.eq_query(a, b)


def assert_eq(s, a, b):
    return s.assert_eq(a, b)


def apply_subst(s, frm, to):
    return s.subst(frm, to)


class LabelAllocator(object):
    """
    Hands out label variables from a monotone counter; a label is never
    returned twice by one allocator.
    """
    def __init__(self, start=1):
        self.next = max(start, 1)
        self.count = 0

    def reserve(self, labels):
        """Make sure future labels are above everything in ``labels``."""
        for l in labels:
            if l >= self.next:
                self.next = l + 1

    def fresh(self):
        label = self.next
        self.next += 1
        self.count += 1
        return label


def fresh_label(alloc):
    return alloc.fresh()
