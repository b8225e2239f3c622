'''
Backward proof search.

The strategy on every branch, in order:

1. close the branch with a zero-premise rule;
2. apply a label-unifying structural rule;
3. apply an invertible logical rule, unary rules before branching ones;
4. apply *R or -*L to a (formula, relational atom) pair not used before on
   this branch, heuristic hints first;
5. run one step of a structural saturation round: closing rules, then rules
   creating fresh labels over a snapshot of the sequent, then rules with
   free universals;
6. split on excluded middle for an undecided pair of labels (only for
   systems that need it), otherwise give up on the branch.

No rule application is ever undone, so the first branch that reaches 6
without closing decides the search. Closed premises report an unsat core.
A premise whose core avoids everything its rule introduced is replayed on
the conclusion and the rule is dropped; a left core that also occurs in the
right premise is replayed there instead of searching again.
'''
import sys
import time

from .exceptions import (SeparataException, BudgetExceeded, NotSaturated,
                         RuleNotApplicable)
from .formula import Atom, Not, And, Or, Imp, Emp, Star, Wand
from .sequents import (EPSILON, Sequent, RelAtom, Ternary, Neq,
                       LabelAllocator, label_name, render_labelled,
                       render_atom)
from .calculus import Calculus
from .axioms import builtin_system
from . import semantics

import logging
log = logging.getLogger('separata')

RECURSION_LIMIT = 20000


class Budget(object):
    """Resource bounds for one proof attempt."""
    def __init__(self, timeout=60.0, max_labels=None, max_steps=None):
        if timeout is None and max_labels is None and max_steps is None:
            raise ValueError('a budget needs at least one finite bound')
        self.timeout = timeout
        self.max_labels = max_labels
        self.max_steps = max_steps
        self.started = None

    def start(self):
        self.started = time.time()

    def elapsed(self):
        return time.time() - self.started if self.started else 0.0

    def check(self, labels, steps):
        if self.timeout is not None and self.elapsed() > self.timeout:
            raise BudgetExceeded('timeout')
        if self.max_labels is not None and labels > self.max_labels:
            raise BudgetExceeded('budget')
        if self.max_steps is not None and steps > self.max_steps:
            raise BudgetExceeded('budget')

    def __repr__(self):
        return '<Budget timeout=%s labels=%s steps=%s>' % (
            self.timeout, self.max_labels, self.max_steps)


#
# Proofs and verdicts
#

class Proof(object):
    """A derivation: the conclusion, the rule instance, the sub-derivations."""
    __slots__ = ('sequent', 'instance', 'children')

    def __init__(self, sequent, instance, children=()):
        self.sequent = sequent
        self.instance = instance
        self.children = tuple(children)

    @property
    def rule(self):
        return self.instance.rule

    def nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def size(self):
        return sum(1 for _ in self.nodes())

    def rules(self):
        return set(node.rule for node in self.nodes())

    def to_dict(self):
        root = _node_dict(self)
        stack = [(self, root)]
        while stack:
            node, out = stack.pop()
            for child in node.children:
                d = _node_dict(child)
                out['children'].append(d)
                stack.append((child, d))
        return root

    def render(self):
        """Indented text, one node per line."""
        lines = []
        stack = [(self, 0)]
        while stack:
            node, depth = stack.pop()
            lines.append('%s%s  %s' % ('  ' * depth, node.rule, node.sequent))
            stack.extend((c, depth + 1) for c in reversed(node.children))
        return '\n'.join(lines)

    def __repr__(self):
        return '<Proof %s, %d nodes>' % (self.rule, self.size())


def _render_principal(principal):
    if principal is None:
        return None
    side, l, f = principal
    return '%s %s' % (side, render_labelled((l, f)))


def _node_dict(node):
    inst = node.instance
    return {
        'rule': inst.rule,
        'sequent': str(node.sequent),
        'principal': _render_principal(inst.principal),
        'atoms': [render_atom(a) for a in inst.atoms],
        'fresh': [label_name(l) for l in inst.fresh],
        'children': [],
    }


class Verdict(object):
    verdict = None
    proved = refuted = unknown = False

    def __init__(self, seconds=0.0, stats=None):
        self.seconds = seconds
        self.stats = stats or {}

    def to_dict(self):
        return {'verdict': self.verdict, 'seconds': round(self.seconds, 4)}

    def __repr__(self):
        return '<%s %.3fs>' % (self.__class__.__name__, self.seconds)


class Proved(Verdict):
    verdict = 'proved'
    proved = True

    def __init__(self, proof, seconds=0.0, stats=None):
        super(Proved, self).__init__(seconds, stats)
        self.proof = proof

    def to_dict(self, proof=True):
        out = super(Proved, self).to_dict()
        if proof:
            out['proof'] = self.proof.to_dict()
        return out


class Refuted(Verdict):
    verdict = 'refuted'
    refuted = True

    def __init__(self, model, world, seconds=0.0, source='saturation',
                 stats=None):
        super(Refuted, self).__init__(seconds, stats)
        self.model = model
        self.world = world
        self.source = source

    def to_dict(self):
        out = super(Refuted, self).to_dict()
        out.update(model=semantics.model_to_dict(self.model),
                   world=self.world, source=self.source)
        return out


class Unknown(Verdict):
    verdict = 'unknown'
    unknown = True

    REASONS = ('timeout', 'budget', 'saturation-unvalidated')

    def __init__(self, reason, seconds=0.0, stats=None):
        if reason not in self.REASONS:
            raise ValueError('unknown reason %r' % reason)
        super(Unknown, self).__init__(seconds, stats)
        self.reason = reason

    def to_dict(self):
        out = super(Unknown, self).to_dict()
        out['reason'] = self.reason
        return out

    def __repr__(self):
        return '<Unknown %s %.3fs>' % (self.reason, self.seconds)


#
# Search bookkeeping
#

class OpenBranch(Exception):
    def __init__(self, sequent, state):
        super(OpenBranch, self).__init__('open branch')
        self.sequent = sequent
        self.state = state


def _rename_label(l, frm, to):
    return to if l == frm else l


def _rename_fact(fact, frm, to):
    if isinstance(fact, RelAtom):
        return fact.rename({frm: to}) if frm in fact else fact
    side, l, f = fact
    return (side, _rename_label(l, frm, to), f)


def _image(fact, subs):
    for frm, to in subs:
        fact = _rename_fact(fact, frm, to)
    return fact


def _rename_binding(binding, frm, to):
    return tuple((k, _rename_label(v, frm, to)) for k, v in binding)


class SearchState(object):
    """
    Per-branch memory: *R/-*L pairs already used, structural instances
    already applied, excluded-middle pairs already split on, the root label
    and the current saturation round.
    """
    def __init__(self, root):
        self.root = root
        self.applied = set()
        self.done = set()
        self.em_done = set()
        self.queue = None
        self.phase = 'a'
        self.round_changed = False
        self.last_g = None

    def copy(self):
        other = SearchState(self.root)
        other.applied = set(self.applied)
        other.done = set(self.done)
        other.em_done = set(self.em_done)
        other.queue = list(self.queue) if self.queue is not None else None
        other.phase = self.phase
        other.round_changed = self.round_changed
        other.last_g = self.last_g
        return other

    def rename(self, frm, to):
        self.root = _rename_label(self.root, frm, to)
        self.applied = set(
            (side, _rename_label(l, frm, to), f, atom.rename({frm: to}))
            for side, l, f, atom in self.applied)
        self.done = set((name, _rename_binding(b, frm, to))
                        for name, b in self.done)
        self.em_done = set(tuple(sorted(_rename_label(l, frm, to)
                                        for l in pair))
                           for pair in self.em_done)
        if self.queue is not None:
            self.queue = [(rule, dict((k, _rename_label(v, frm, to))
                                      for k, v in binding.items()))
                          for rule, binding in self.queue]
        self.last_g = None


def _done_key(rule, binding):
    return (rule.name, tuple(sorted(binding.items())))


#
# Heuristics
#

def heuristic_hint(s, z, f, same=None, depth=6):
    """
    Relational atoms of a label tree rooted at z whose leaves carry, in the
    antecedent, the components of the star formula f. Returns [] when there
    is no such tree. Only an ordering hint for *R.
    """
    if not isinstance(f, Star):
        return []
    if same is None:
        index = s.index()

        def below(label):
            return index.get((2, label), ())

        def holds(label, g):
            return s.in_gamma((label, g))
    else:
        def below(label):
            return [a for a in s.sorted_rel() if same(a[2], label)]

        def holds(label, g):
            return any(g2 == g and same(l, label) for l, g2 in s.gamma)

    memo = {}

    def cover(label, g, depth):
        key = (label, g, depth)
        if key not in memo:
            memo[key] = _cover(label, g, depth)
        return memo[key]

    def _cover(label, g, depth):
        if holds(label, g):
            return []
        if not isinstance(g, Star) or depth == 0:
            return None
        for atom in below(label):
            left = cover(atom[0], g.left, depth - 1)
            if left is None:
                continue
            right = cover(atom[1], g.right, depth - 1)
            if right is None:
                continue
            return [atom] + left + right
        return None

    for atom in below(z):
        left = cover(atom[0], f.left, depth - 1)
        if left is None:
            continue
        right = cover(atom[1], f.right, depth - 1)
        if right is not None:
            return [atom] + left + right
    return []


#
# The prover
#

class Prover(object):
    """
    One proof attempt per call of ``prove``. A Prover can be reused for
    several formulas; it holds no state between attempts.
    """
    def __init__(self, config=None, budget=None, engine=None,
                 backjumping=True, heuristics=True, extract_model=False,
                 check=True):
        config = config or builtin_system('pasl+d')
        if engine is not None and engine != config.engine:
            config = config.with_engine(engine)
        self.config = config
        self.calc = Calculus(config)
        self.subst = config.use_substitution_calculus
        self.budget = budget or Budget()
        self.backjumping = backjumping
        self.heuristics = heuristics
        self.extract_model = extract_model
        self.check = check

    def prove(self, f):
        budget = self.budget
        budget.start()
        self.alloc = LabelAllocator()
        self.steps = 0
        self.stats = {'steps': 0, 'labels': 0, 'backjumps': 0,
                      'transplants': 0, 'rounds': 0}
        limit = sys.getrecursionlimit()
        if limit < RECURSION_LIMIT:
            sys.setrecursionlimit(RECURSION_LIMIT)
        try:
            return self._prove(f)
        except BudgetExceeded as e:
            log.info('%s: %s after %.2fs', f, e.reason, budget.elapsed())
            return Unknown(e.reason, budget.elapsed(), self._stats())
        finally:
            sys.setrecursionlimit(limit)

    def _prove(self, f):
        budget = self.budget
        if self.extract_model:
            found = find_countermodel(f, self.config, check=self._check_budget)
            if found is not None:
                model, world = found
                log.info('finite counter-model for %s in %s', f, model.name)
                return Refuted(model, world, budget.elapsed(),
                               source='finite-search', stats=self._stats())

        root = self.alloc.fresh()
        s = Sequent(delta=[(root, f)])
        state = SearchState(root)
        try:
            proof, _ = self._search(s, state)
        except OpenBranch as e:
            return self._open(f, e)
        if self.check and not check_proof(proof, self.config):
            raise SeparataException('derivation of %s does not replay' % f)
        log.info('proved %s in %.2fs', f, budget.elapsed())
        return Proved(proof, budget.elapsed(), self._stats())

    def _stats(self):
        self.stats['steps'] = self.steps
        self.stats['labels'] = self.alloc.count
        return dict(self.stats)

    def _open(self, f, e):
        budget = self.budget
        if not self.extract_model:
            log.info('open branch for %s after %.2fs', f, budget.elapsed())
            return Unknown('saturation-unvalidated', budget.elapsed(),
                           self._stats())
        model = extract_model(e.sequent, self.config)
        world = model.rho[e.state.root]
        violations = semantics.check_frame(model,
                                           self.config.active_axioms())
        if violations:
            log.warning('extracted model violates %s',
                        ', '.join(str(v) for v in violations))
        elif semantics.eval(model, world, f):
            log.warning('extracted model does not falsify %s', f)
        else:
            return Refuted(model, world, budget.elapsed(),
                           source='saturation', stats=self._stats())
        return Unknown('saturation-unvalidated', budget.elapsed(),
                       self._stats())

    def _tick(self):
        self.steps += 1
        self._check_budget()

    def _check_budget(self):
        self.budget.check(self.alloc.count, self.steps)

    #
    # search
    #

    def _search(self, s, state):
        chain = []
        calc = self.calc
        while True:
            self._tick()
            reason = calc.close_check(s)
            if reason is not None:
                proof = Proof(s, reason.instance)
                core = None
                if self.backjumping:
                    core = set(reason.facts)
                    if not self.subst:
                        core.update(s.eqs)
                break
            inst, children, subs = self._step(s, state)
            log.debug('%s on %s', inst.rule, s)
            if len(children) == 1:
                for frm, to in subs[0]:
                    state.rename(frm, to)
                chain.append((s, inst, subs))
                s = children[0]
                continue
            proof, core = self._branch(s, state, inst, children, subs)
            break

        for conc, inst, subs in reversed(chain):
            proof = Proof(conc, inst, (proof,))
            if core is not None:
                core = self._lift(conc, inst, subs, [core])
        return proof, core

    def _branch(self, s, state, inst, children, subs):
        c1, c2 = children
        left_state = state.copy()
        for frm, to in subs[0]:
            left_state.rename(frm, to)
        left, left_core = self._search(c1, left_state)
        pruned = self._prune(s, inst, left, left_core, subs[0])
        if pruned is not None:
            return pruned, left_core

        right = None
        right_core = None
        if left_core is not None and left_core <= c2.facts():
            self.stats['backjumps'] += 1
            right = self._transplant(left, c2)
            if right is not None:
                self.stats['transplants'] += 1
                right_core = left_core
                log.debug('reused left derivation for %s', c2)
        if right is None:
            right_state = state.copy()
            for frm, to in subs[1]:
                right_state.rename(frm, to)
            right, right_core = self._search(c2, right_state)
            pruned = self._prune(s, inst, right, right_core, subs[1])
            if pruned is not None:
                return pruned, right_core

        core = None
        if left_core is not None and right_core is not None:
            core = self._lift(s, inst, subs, [left_core, right_core])
        return Proof(s, inst, (left, right)), core

    def _prune(self, s, inst, proof, core, subs):
        """
        When a premise closed without anything the rule introduced, its
        derivation replayed on the conclusion s, dropping the rule. None
        otherwise.
        """
        if core is None or subs or not core <= s.facts():
            return None
        replayed = self._transplant(proof, s)
        if replayed is not None:
            self.stats['backjumps'] += 1
            log.debug('dropped %s on %s', inst.rule, s)
        return replayed

    def _lift(self, conc, inst, subs, cores):
        facts = conc.facts()
        core = set()
        principal = False
        for sub, child_core in zip(subs, cores):
            images = {}
            for fact in facts:
                images.setdefault(_image(fact, sub), []).append(fact)
            for img, origins in images.items():
                if img in child_core:
                    core.update(origins)
            if sub or any(fact not in images for fact in child_core):
                principal = True
        if principal:
            core.update(self.calc.principal_facts(conc, inst))
        return core

    def _transplant(self, proof, s):
        """Replay ``proof`` on s, skipping nodes whose rule does not apply."""
        calc = self.calc
        chain = []
        node = proof
        while True:
            self._tick()
            reason = calc.close_check(s)
            if reason is not None:
                result = Proof(s, reason.instance)
                break
            if not node.children:
                return None
            try:
                children = calc.expand(s, node.instance)
            except RuleNotApplicable:
                node = node.children[0]
                continue
            if len(children) == 1:
                chain.append((s, node.instance))
                s, node = children[0], node.children[0]
                continue
            subproofs = []
            for child, sub in zip(children, node.children):
                p = self._transplant(sub, child)
                if p is None:
                    return None
                subproofs.append(p)
            result = Proof(s, node.instance, subproofs)
            break
        for conc, inst in reversed(chain):
            result = Proof(conc, inst, (result,))
        return result

    #
    # one strategy step
    #

    def _step(self, s, state):
        for attempt in (self._unify, self._logical, self._pairs,
                        self._saturate, self._em):
            found = attempt(s, state)
            if found is not None:
                return found
        raise OpenBranch(s, state)

    def _premises(self, s, inst):
        children, subs = self.calc.expand_full(s, inst)
        return inst, children, subs

    def _unify(self, s, state):
        g = (s.rel, s.eqs, s.neqs)
        last = state.last_g
        if last is not None and all(a is b for a, b in zip(g, last)):
            return None
        calc = self.calc
        for rule in calc.unifying:
            for binding in calc.match_structural(rule, s):
                if self.subst:
                    inst = calc.structural_instance(rule, binding)
                    found = self._premises(s, inst)
                    if found[1][0] != s:
                        return found
                elif not calc.redundant(rule, binding, s):
                    inst = calc.structural_instance(rule, binding)
                    return self._premises(s, inst)
        state.last_g = g
        return None

    def _logical(self, s, state):
        calc = self.calc
        alloc = self.alloc
        for item in s.gamma:
            if isinstance(item[1], (And, Not, Emp, Star)):
                return self._apply_logical(s, calc.logical_instance('L', item))
        for item in s.delta:
            if isinstance(item[1], (Imp, Not, Or, Wand)):
                return self._apply_logical(s, calc.logical_instance('R', item))
        for item in s.delta:
            if isinstance(item[1], And):
                return self._apply_logical(s, calc.logical_instance('R', item))
        for item in s.gamma:
            if isinstance(item[1], (Or, Imp)):
                return self._apply_logical(s, calc.logical_instance('L', item))
        return None

    def _apply_logical(self, s, inst):
        if inst.rule in ('starL', 'wandR'):
            fresh = (self.alloc.fresh(), self.alloc.fresh())
            inst = inst._replace(fresh=fresh)
        return self._premises(s, inst)

    def _pair_candidates(self, s, label, pos):
        if self.subst:
            return s.index().get((pos, label), ())
        same = s.eq.query
        return [a for a in s.sorted_rel() if same(a[pos], label)]

    def _memo_key(self, s, side, l, f, atom):
        if self.subst:
            return (side, l, f, atom)
        find = s.eq.find
        return (side, find(l), f, Ternary(*[find(t) for t in atom]))

    def _untried(self, s, state, side, l, f):
        """Atoms not yet used with principal (side, l, f) on this branch."""
        out = []
        pos = 2 if side == 'R' else 1
        for atom in self._pair_candidates(s, l, pos):
            key = self._memo_key(s, side, l, f, atom)
            if key in state.applied:
                continue
            if side == 'R':
                useless = s.in_delta((atom[0], f.left)) or \
                    s.in_delta((atom[1], f.right))
            else:
                useless = s.in_delta((atom[0], f.left)) or \
                    s.in_gamma((atom[2], f.right))
            if useless:
                # contraction of an earlier application
                state.applied.add(key)
                continue
            out.append(atom)
        return out

    def _pairs(self, s, state):
        pending = []
        for l, f in s.delta:
            if isinstance(f, Star):
                atoms = self._untried(s, state, 'R', l, f)
                if atoms:
                    pending.append(('R', (l, f), atoms))
        for l, f in s.gamma:
            if isinstance(f, Wand):
                atoms = self._untried(s, state, 'L', l, f)
                if atoms:
                    pending.append(('L', (l, f), atoms))
        if not pending:
            return None
        if self.heuristics:
            same = None if self.subst else s.eq.query
            for side, item, atoms in pending:
                if side != 'R':
                    continue
                for atom in heuristic_hint(s, item[0], item[1], same):
                    if atom in atoms:
                        return self._apply_pair(s, state, side, item, atom)
        side, item, atoms = pending[0]
        return self._apply_pair(s, state, side, item, atoms[0])

    def _apply_pair(self, s, state, side, item, atom):
        l, f = item
        state.applied.add(self._memo_key(s, side, l, f, atom))
        return self._premises(s, self.calc.logical_instance(side, item, atom))

    def _try_structural(self, s, state, rule, binding):
        key = _done_key(rule, binding)
        if key in state.done:
            return None
        state.done.add(key)
        if self.calc.redundant(rule, binding, s):
            return None
        fresh = tuple(self.alloc.fresh() for _ in rule.fresh)
        inst = self.calc.structural_instance(rule, binding, fresh)
        try:
            found = self._premises(s, inst)
        except RuleNotApplicable:
            return None
        state.round_changed = True
        return found

    def _saturate(self, s, state):
        calc = self.calc
        while True:
            for rule in calc.closing:
                for binding in calc.match_structural(rule, s):
                    found = self._try_structural(s, state, rule, binding)
                    if found is not None:
                        return found
            if state.phase == 'a':
                state.phase = 'b'
                state.queue = [(rule, binding) for rule in calc.creating
                               for binding in calc.match_structural(rule, s)]
            if state.phase == 'b':
                while state.queue:
                    rule, binding = state.queue.pop(0)
                    found = self._try_structural(s, state, rule, binding)
                    if found is not None:
                        return found
                state.phase = 'c'
                state.queue = None
            for rule in calc.identity:
                for binding in calc.match_structural(rule, s):
                    found = self._try_structural(s, state, rule, binding)
                    if found is not None:
                        return found
            self.stats['rounds'] += 1
            state.phase = 'a'
            if not state.round_changed:
                return None
            state.round_changed = False

    def _em(self, s, state):
        if not self.config.em:
            return None
        labels = set([EPSILON])
        for atom in s.g:
            labels.update(atom)
        labels = sorted(labels)
        if self.subst:
            def decided(x, y):
                return s.has_atom(Neq(x, y)) or s.has_atom(Neq(y, x))
        else:
            find = s.eq.find

            def decided(x, y):
                if find(x) == find(y):
                    return True
                return any(set((find(a), find(b))) == set((find(x), find(y)))
                           for a, b in s.neqs)
        for i, x in enumerate(labels):
            for y in labels[i + 1:]:
                pair = (x, y)
                if pair in state.em_done or decided(x, y):
                    continue
                state.em_done.add(pair)
                return self._premises(s, self.calc.em_instance(x, y))
        return None


def prove(f, config=None, budget=None, **options):
    """Run one proof attempt for f and return a Verdict."""
    return Prover(config, budget, **options).prove(f)


def check_proof(proof, config):
    """
    True iff every inner node's premises regenerate from its rule instance
    and every leaf is closed by a zero-premise rule.
    """
    calc = Calculus(config)
    stack = [proof]
    while stack:
        node = stack.pop()
        if not node.children:
            if calc.close_check(node.sequent) is None:
                return False
            continue
        try:
            children = calc.expand(node.sequent, node.instance)
        except RuleNotApplicable as e:
            log.debug('replay failed at %s: %s', node.rule, e.reason)
            return False
        if len(children) != len(node.children):
            return False
        for expected, child in zip(children, node.children):
            if expected != child.sequent:
                return False
        stack.extend(node.children)
    return True


def extract_model(branch, config):
    """
    The candidate counter-model of an open branch: label classes as worlds,
    ternary atoms as the relation, antecedent atoms as the valuation.
    """
    calc = Calculus(config)
    if calc.close_check(branch) is not None:
        raise NotSaturated('the branch is closed')
    if config.use_substitution_calculus:
        def find(l):
            return l
    else:
        find = branch.eq.find
    labels = set(branch.labels())
    labels.add(EPSILON)
    rho = dict((l, label_name(find(l))) for l in labels)
    worlds = sorted(set(rho.values()), key=lambda w: (w != 'e', len(w), w))
    rel = set((rho[a], rho[b], rho[c]) for a, b, c in branch.rel)
    valuation = {}
    for l, f in branch.gamma:
        if isinstance(f, Atom):
            valuation.setdefault(f.name, set()).add(rho[l])
    return semantics.KripkeModel(worlds, rho[EPSILON], rel, valuation, rho,
                                 name='extracted')


def find_countermodel(f, config, samples=None, seed=0, check=None):
    """
    Search the small concrete frames that satisfy the active axioms of
    config for a valuation falsifying f. Returns (model, world) or None.
    ``check`` is called before every valuation tried and may raise to stop
    the search.
    """
    axioms = config.active_axioms()
    for frame in semantics.small_frames():
        if semantics.check_frame(frame, axioms):
            continue
        found = semantics.countermodel_in(frame, f, samples, seed,
                                          check=check)
        if found is not None:
            return found
    return None
