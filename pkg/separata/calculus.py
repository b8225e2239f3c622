'''
Rule application for the labelled calculi.

A Calculus is built from a SystemConfig. In the equality calculus label
identities live in the sequent's EqStore and rule side conditions are
checked with eq_query. In the substitution calculus there are no equality
atoms: rules match labels syntactically and identify labels by global
substitution.

Premises are always regenerated from a RuleInstance by ``expand``, which is
what proof replay relies on.
'''
from collections import namedtuple

from .exceptions import RuleNotApplicable
from .formula import (Atom, Top, Bot, Emp, Not, And, Or, Imp, Star, Wand)
from .sequents import EPSILON, Ternary, Eq, Neq, label_name
from .axioms import is_var

import logging
log = logging.getLogger('separata')


RuleInstance = namedtuple('RuleInstance', 'rule principal atoms fresh binding')
RuleInstance.__new__.__defaults__ = (None, (), (), ())

ClosureReason = namedtuple('ClosureReason', 'instance facts')
Premises = namedtuple('Premises', 'instance children')

UNARY_LEFT = (And, Not, Emp, Star)
UNARY_RIGHT = (Imp, Not, Or, Wand)
BINARY_LEFT = (Or, Imp)
BINARY_RIGHT = (And,)

LOGICAL_RULES = {
    ('L', And): 'andL', ('R', And): 'andR',
    ('L', Or): 'orL', ('R', Or): 'orR',
    ('L', Imp): 'impL', ('R', Imp): 'impR',
    ('L', Not): 'notL', ('R', Not): 'notR',
    ('L', Emp): 'empL',
    ('L', Star): 'starL', ('R', Star): 'starR',
    ('L', Wand): 'wandL', ('R', Wand): 'wandR',
}


def _syntactic(a, b):
    return a == b


def _orientations(pattern, atom):
    if isinstance(pattern, Neq):
        if atom[0] == atom[1]:
            return (atom,)
        return (atom, (atom[1], atom[0]))
    return (atom,)


def _extend(binding, pattern, labels, same):
    out = binding
    for t, l in zip(pattern, labels):
        if is_var(t):
            if t in out:
                if not same(out[t], l):
                    return None
            else:
                if out is binding:
                    out = dict(binding)
                out[t] = l
        elif not same(t, l):
            return None
    return out


def match_patterns(patterns, candidates, binding, same=_syntactic):
    """
    Yield every extension of ``binding`` that maps each pattern atom onto an
    atom produced by ``candidates(pattern, binding)``. Inequalities match in
    either orientation.
    """
    if not patterns:
        yield binding
        return
    head, rest = patterns[0], patterns[1:]
    for atom in candidates(head, binding):
        for labels in _orientations(head, atom):
            extended = _extend(binding, head, labels, same)
            if extended is not None:
                for result in match_patterns(rest, candidates, extended,
                                             same):
                    yield result


def instantiate(atom, binding):
    return atom.rename(binding)


def _without(items, item):
    return tuple(i for i in items if i != item)


class Calculus(object):
    """
    Rule engine for one SystemConfig. All methods are pure with respect to
    the sequents they are given.
    """
    def __init__(self, config):
        self.config = config
        self.subst = config.use_substitution_calculus
        self.rules = list(config.rules())
        self.by_name = dict((r.name, r) for r in self.rules)
        self.unifying = [r for r in self.rules if r.unifying]
        rest = [r for r in self.rules if not r.unifying]
        self.closing = [r for r in rest if not r.fresh and not r.free]
        self.creating = [r for r in rest if r.fresh]
        self.identity = [r for r in rest if r.free and not r.fresh]

    def same(self, s):
        return _syntactic if self.subst else s.eq.query

    #
    # zero-premise rules
    #

    def close_check(self, s):
        """A ClosureReason if some zero-premise rule closes s, else None."""
        same = self.same(s)
        extra = set(s.eqs) if not self.subst else set()
        for item in s.gamma:
            if isinstance(item[1], Bot):
                return ClosureReason(
                    RuleInstance('botL', ('L',) + item),
                    set([('L',) + item]))
        for item in s.delta:
            l, f = item
            if isinstance(f, Top):
                return ClosureReason(
                    RuleInstance('topR', ('R',) + item),
                    set([('R',) + item]))
        for item in s.gamma:
            l, f = item
            if not isinstance(f, Atom):
                continue
            if s.in_delta(item):
                return ClosureReason(
                    RuleInstance('id', ('L',) + item),
                    set([('L',) + item, ('R',) + item]))
            if not self.subst:
                for l2, f2 in s.delta:
                    if f2 == f and same(l, l2):
                        return ClosureReason(
                            RuleInstance('id', ('L',) + item),
                            set([('L',) + item, ('R', l2, f2)]) | extra)
        for item in s.delta:
            l, f = item
            if isinstance(f, Emp) and same(l, EPSILON):
                return ClosureReason(RuleInstance('empR', ('R',) + item),
                                     set([('R',) + item]) | extra)
        if self.config.neq:
            for atom in s.neqs:
                if same(atom[0], atom[1]):
                    return ClosureReason(RuleInstance('NEq', None, (atom,)),
                                         set([atom]) | extra)
        return None

    #
    # premise generation
    #

    def expand(self, s, inst):
        """The premises of ``inst`` applied to s, as a tuple of sequents."""
        return self.expand_full(s, inst)[0]

    def expand_full(self, s, inst):
        """
        Like expand, but also returns for each premise the list of (frm, to)
        label substitutions that produced it.
        """
        if inst.rule in ('id', 'botL', 'topR', 'empR', 'NEq'):
            raise RuleNotApplicable('%s has no premises' % inst.rule)
        for l in inst.fresh:
            if l == EPSILON or l in s.labels():
                raise RuleNotApplicable(
                    'label %s is not fresh' % label_name(l))
        if len(set(inst.fresh)) != len(inst.fresh):
            raise RuleNotApplicable('fresh labels are not distinct')
        if inst.rule == 'EM':
            return self._expand_em(s, inst)
        if inst.principal is not None and inst.rule in \
                LOGICAL_RULES.values():
            return self._expand_logical(s, inst)
        if inst.rule in self.by_name:
            return self._expand_structural(s, inst)
        raise RuleNotApplicable('unknown rule %s' % inst.rule)

    def _expand_logical(self, s, inst):
        side, l, f = inst.principal
        item = (l, f)
        if LOGICAL_RULES.get((side, f.__class__)) != inst.rule:
            raise RuleNotApplicable('%s does not apply to %s' % (
                inst.rule, f.__class__.__name__))
        if side == 'L' and not s.in_gamma(item):
            raise RuleNotApplicable('principal formula not in antecedent')
        if side == 'R' and not s.in_delta(item):
            raise RuleNotApplicable('principal formula not in succedent')
        gamma = _without(s.gamma, item) if side == 'L' else s.gamma
        delta = _without(s.delta, item) if side == 'R' else s.delta
        rule = inst.rule
        same = self.same(s)
        nosub = [[]]

        def fresh(n):
            if len(inst.fresh) != n:
                raise RuleNotApplicable('%s needs %d fresh labels' % (rule, n))
            return inst.fresh

        if rule == 'andL':
            return (s.replace(gamma=((l, f.left), (l, f.right)) + gamma),), \
                nosub
        if rule == 'andR':
            return (s.replace(delta=((l, f.left),) + delta),
                    s.replace(delta=((l, f.right),) + delta)), [[], []]
        if rule == 'orL':
            return (s.replace(gamma=((l, f.left),) + gamma),
                    s.replace(gamma=((l, f.right),) + gamma)), [[], []]
        if rule == 'orR':
            return (s.replace(delta=((l, f.left), (l, f.right)) + delta),), \
                nosub
        if rule == 'impL':
            return (s.replace(gamma=gamma, delta=((l, f.left),) + delta),
                    s.replace(gamma=((l, f.right),) + gamma)), [[], []]
        if rule == 'impR':
            return (s.replace(gamma=((l, f.left),) + gamma,
                              delta=((l, f.right),) + delta),), nosub
        if rule == 'notL':
            return (s.replace(gamma=gamma, delta=((l, f.sub),) + delta),), \
                nosub
        if rule == 'notR':
            return (s.replace(gamma=((l, f.sub),) + gamma, delta=delta),), \
                nosub
        if rule == 'empL':
            premise = s.replace(gamma=gamma)
            if l == EPSILON:
                return (premise,), nosub
            if self.subst:
                return (premise.subst(l, EPSILON),), [[(l, EPSILON)]]
            return (premise.assert_eq(l, EPSILON),), nosub
        if rule == 'starL':
            x, y = fresh(2)
            premise = s.replace(gamma=((x, f.left), (y, f.right)) + gamma)
            return (premise.add_atoms([Ternary(x, y, l)]),), nosub
        if rule == 'wandR':
            x, y = fresh(2)
            premise = s.replace(gamma=((x, f.left),) + gamma,
                                delta=((y, f.right),) + delta)
            return (premise.add_atoms([Ternary(x, l, y)]),), nosub
        if rule in ('starR', 'wandL'):
            if len(inst.atoms) != 1:
                raise RuleNotApplicable('%s needs one relational atom' % rule)
            atom = inst.atoms[0]
            if atom not in s.rel:
                raise RuleNotApplicable('relational atom %s not in sequent'
                                        % atom)
            x, y, z = atom
            if rule == 'starR':
                if not same(z, l):
                    raise RuleNotApplicable('atom does not split %s'
                                            % label_name(l))
                # principal stays, moved to the end of its list
                rotated = delta + (item,)
                return (s.replace(delta=((x, f.left),) + rotated),
                        s.replace(delta=((y, f.right),) + rotated)), [[], []]
            if not same(y, l):
                raise RuleNotApplicable('atom does not extend %s'
                                        % label_name(l))
            rotated = gamma + (item,)
            return (s.replace(gamma=rotated, delta=((x, f.left),) + delta),
                    s.replace(gamma=((z, f.right),) + rotated)), [[], []]
        raise RuleNotApplicable('unknown logical rule %s' % rule)

    def _expand_em(self, s, inst):
        binding = dict(inst.binding)
        x, y = binding.get('x'), binding.get('y')
        if x is None or y is None:
            raise RuleNotApplicable('EM needs a pair of labels')
        right = s.add_atoms([Neq(x, y)])
        if not self.subst:
            return (s.assert_eq(x, y), right), [[], []]
        if y != EPSILON:
            return (s.subst(y, x), right), [[(y, x)], []]
        if x != EPSILON:
            return (s.subst(x, y), right), [[(x, y)], []]
        return (s, right), [[], []]

    def _present(self, s, atom):
        if s.has_atom(atom):
            return True
        if isinstance(atom, Neq) and s.has_atom(Neq(atom[1], atom[0])):
            return True
        if self.subst or isinstance(atom, Ternary):
            return False
        same = s.eq.query
        for other in s.neqs:
            if (same(other[0], atom[0]) and same(other[1], atom[1])) or \
                    (same(other[0], atom[1]) and same(other[1], atom[0])):
                return True
        return False

    def _expand_structural(self, s, inst):
        rule = self.by_name[inst.rule]
        binding = dict(inst.binding)
        for pattern in rule.antecedent:
            atom = instantiate(pattern, binding)
            if any(is_var(t) for t in atom):
                raise RuleNotApplicable('%s: unbound variable' % rule.name)
            if not self._present(s, atom):
                raise RuleNotApplicable('%s: %s not in sequent' % (
                    rule.name, atom))
        same = self.same(s)
        for a, b in rule.conditions:
            if not same(binding.get(a, a), binding.get(b, b)):
                raise RuleNotApplicable('%s: side condition fails' % rule.name)
        domain = s.labels() | set([EPSILON])
        for v in rule.free:
            if binding.get(v) not in domain:
                raise RuleNotApplicable('%s: %s does not occur' % (
                    rule.name, v))
        if len(inst.fresh) != len(rule.fresh):
            raise RuleNotApplicable('%s needs %d fresh labels' % (
                rule.name, len(rule.fresh)))
        binding.update(zip(rule.fresh, inst.fresh))

        premise = s
        subs = []
        for frm_var, to_var in rule.substitutions:
            frm, to = binding[frm_var], binding.get(to_var, to_var)
            if frm == to:
                continue
            if frm == EPSILON:
                frm, to = to, frm
            premise = premise.subst(frm, to)
            subs.append((frm, to))
            for k, v in list(binding.items()):
                if v == frm:
                    binding[k] = to
        premise = premise.add_atoms(
            [instantiate(a, binding) for a in rule.adds])
        return (premise,), [subs]

    #
    # instances
    #

    def apply_logical(self, s, inst, alloc):
        """Premises of a logical rule, allocating fresh labels as needed."""
        if inst.rule in ('starL', 'wandR') and not inst.fresh:
            inst = inst._replace(fresh=(alloc.fresh(), alloc.fresh()))
        return Premises(inst, self.expand(s, inst))

    def logical_instance(self, side, item, atom=None):
        l, f = item
        rule = LOGICAL_RULES.get((side, f.__class__))
        if rule is None:
            return None
        atoms = (atom,) if atom is not None else ()
        return RuleInstance(rule, (side, l, f), atoms)

    def candidates(self, s):
        """Candidate function for match_patterns over the atoms of s."""
        if not self.subst:
            def all_atoms(pattern, binding):
                if isinstance(pattern, Ternary):
                    return s.sorted_rel()
                if isinstance(pattern, Neq):
                    return sorted(s.neqs)
                return sorted(s.eqs)
            return all_atoms
        index = s.index()

        def indexed(pattern, binding):
            if isinstance(pattern, Ternary):
                best = None
                for pos, t in enumerate(pattern):
                    l = binding.get(t) if is_var(t) else t
                    if l is None:
                        continue
                    found = index.get((pos, l), ())
                    if best is None or len(found) < len(best):
                        best = found
                return s.sorted_rel() if best is None else best
            if isinstance(pattern, Neq):
                return sorted(s.neqs)
            return sorted(s.eqs)
        return indexed

    def label_domain(self, s):
        labels = set(s.labels())
        labels.add(EPSILON)
        if self.subst:
            return sorted(labels)
        find = s.eq.find
        return sorted(set(find(l) for l in labels))

    def match_structural(self, rule, s):
        """
        All bindings of the rule's antecedent (and free universals) against
        s that satisfy its side conditions. Deterministic and duplicate-free.
        """
        same = self.same(s)
        candidates = self.candidates(s)
        patterns = [p for p in rule.antecedent
                    if isinstance(p, (Ternary, Neq))]
        out = []
        seen = set()
        domain = self.label_domain(s) if rule.free else ()
        for binding in match_patterns(patterns, candidates, {}, same):
            for extended in self._bind_free(rule.free, binding, domain):
                ok = True
                for a, b in rule.conditions:
                    if not same(extended.get(a, a), extended.get(b, b)):
                        ok = False
                        break
                if not ok:
                    continue
                key = tuple(sorted(extended.items()))
                if key not in seen:
                    seen.add(key)
                    out.append(extended)
        return out

    def _bind_free(self, free, binding, domain):
        if not free:
            yield binding
            return
        head, rest = free[0], free[1:]
        if head in binding:
            for b in self._bind_free(rest, binding, domain):
                yield b
            return
        for l in domain:
            extended = dict(binding)
            extended[head] = l
            for b in self._bind_free(rest, extended, domain):
                yield b

    def redundant(self, rule, binding, s):
        """
        True when some choice for the rule's fresh variables already makes
        every atom the rule would add present in s.
        """
        same = self.same(s)
        adds = [instantiate(a, binding) for a in rule.adds]
        patterns = [a for a in adds if not isinstance(a, Eq)]
        equalities = [a for a in adds if isinstance(a, Eq)]
        if self.subst:
            candidates = self.candidates(s)
        else:
            norm = s.normalized_rel()
            find = s.eq.find

            def candidates(pattern, b):
                if isinstance(pattern, Ternary):
                    return sorted(norm)
                return sorted(s.neqs)
            patterns = [a.rename(dict((t, find(t)) for t in a
                                      if not is_var(t)))
                        if isinstance(a, Ternary) else a for a in patterns]
        for found in match_patterns(patterns, candidates, {}, same):
            if all(self._eq_holds(e, found, same) for e in equalities):
                return True
        return False

    @staticmethod
    def _eq_holds(atom, binding, same):
        a, b = (binding.get(t, t) for t in atom)
        if is_var(a) or is_var(b):
            return True
        return same(a, b)

    def structural_instance(self, rule, binding, fresh=()):
        atoms = tuple(instantiate(p, binding) for p in rule.antecedent)
        return RuleInstance(rule.name, None, atoms, tuple(fresh),
                            tuple(sorted(binding.items())))

    def apply_structural(self, s, rule, binding, alloc):
        fresh = tuple(alloc.fresh() for _ in rule.fresh)
        inst = self.structural_instance(rule, binding, fresh)
        return Premises(inst, self.expand(s, inst))

    def em_instance(self, x, y):
        return RuleInstance('EM', None, (), (), (('x', x), ('y', y)))

    def principal_facts(self, s, inst):
        """Occurrences a rule instance consumes, for unsat cores."""
        facts = set()
        if inst.principal is not None:
            facts.add(inst.principal)
        for atom in inst.atoms:
            if isinstance(atom, Neq) and atom not in s.neqs:
                atom = Neq(atom[1], atom[0])
            facts.add(atom)
        if not self.subst and (inst.rule in self.by_name
                               or inst.rule in ('starR', 'wandL')):
            facts.update(s.eqs)
        return facts


def apply_logical(s, inst, alloc, config):
    return Calculus(config).apply_logical(s, inst, alloc)


def close_check(s, config):
    return Calculus(config).close_check(s)


def match_structural(rule, s, config):
    return Calculus(config).match_structural(rule, s)


def apply_structural(s, rule, binding, alloc, config):
    return Calculus(config).apply_structural(s, rule, binding, alloc)
