import sys
import unittest
from unittest import mock

from hypothesis import given, settings, strategies as st

from separata.exceptions import NotSaturated, BudgetExceeded
from separata.formula import Atom, Star, parse
from separata.sequents import EPSILON, Ternary, Eq, Sequent
from separata.axioms import builtin_system
from separata.calculus import RuleInstance
from separata.hilbert import GenParams, gen_suite
from separata.bench import table2
from separata import semantics
from separata.prover import (Prover, Budget, Proof, Proved, Unknown, prove,
                             check_proof, extract_model, find_countermodel,
                             heuristic_hint)
from separata.tests import slow

a, b, c = Atom('a'), Atom('b'), Atom('c')

ROW_1 = parse('(a -* b) & (T * (emp & a)) -> b')
ROW_15 = parse('~(emp & (a & (b * ~(c -* (emp -> a)))))')
ROW_18 = parse('(~(T -* ~emp) * ~(T -* ~emp)) -> ~(T -* ~emp)')
ROW_19 = parse('(emp & (a * b)) -> a')
STAR_COMM = parse('a * b -> b * a')


def paths(proof):
    """Root-to-leaf lists of proof nodes."""
    stack = [(proof, [proof])]
    while stack:
        node, path = stack.pop()
        if not node.children:
            yield path
        for child in node.children:
            stack.append((child, path + [child]))


def quick(system='pasl+d', **options):
    return Prover(builtin_system(system), Budget(timeout=30), **options)


class TestProve(unittest.TestCase):
    def test_row_1(self):
        verdict = quick().prove(ROW_1)
        self.assertTrue(verdict.proved)
        self.assertTrue(check_proof(verdict.proof, builtin_system('pasl+d')))
        self.assertIn('wandL', verdict.proof.rules())

    def test_disjointness(self):
        verdict = quick().prove(ROW_19)
        self.assertTrue(verdict.proved)
        self.assertIn('IU', verdict.proof.rules())

    def test_commutativity_in_bbi(self):
        verdict = quick('bbi-nd').prove(STAR_COMM)
        self.assertTrue(verdict.proved)
        self.assertIn('starR', verdict.proof.rules())

    def test_options_agree(self):
        for f in (ROW_1, ROW_19, STAR_COMM):
            for options in ({'backjumping': False},
                            {'heuristics': False},
                            {'engine': 'eq'}):
                verdict = quick(**options).prove(f)
                self.assertTrue(verdict.proved, '%s %s' % (f, options))

    def test_module_function(self):
        verdict = prove(STAR_COMM, builtin_system('pasl'), Budget(timeout=30))
        self.assertTrue(verdict.proved)
        self.assertEqual(sorted(verdict.stats),
                         ['backjumps', 'labels', 'rounds', 'steps',
                          'transplants'])

    def test_proofs_are_sound(self):
        for f in (ROW_1, ROW_19, STAR_COMM):
            self.assertTrue(quick().prove(f).proved)
            for frame in (semantics.heap_frame(1, 1),
                          semantics.heap_frame(2, 1)):
                self.assertIsNone(semantics.countermodel_in(frame, f))

    def test_budget(self):
        prover = Prover(builtin_system('pasl+d'),
                        Budget(timeout=None, max_steps=2))
        verdict = prover.prove(ROW_1)
        self.assertTrue(verdict.unknown)
        self.assertEqual(verdict.reason, 'budget')
        self.assertEqual(verdict.to_dict()['reason'], 'budget')

    def test_bad_budget(self):
        self.assertRaises(ValueError, Budget, None, None, None)
        self.assertRaises(ValueError, Unknown, 'bored')

    def test_irrelevant_split_is_dropped(self):
        verdict = quick().prove(STAR_COMM)
        self.assertTrue(verdict.proved)
        used = [n.instance.atoms for n in verdict.proof.nodes()
                if n.rule == 'starR']
        self.assertEqual(used, [(Ternary(3, 2, 1),)])
        self.assertTrue(check_proof(verdict.proof, builtin_system('pasl+d')))
        kept = quick(backjumping=False).prove(STAR_COMM)
        self.assertGreater(len([n for n in kept.proof.nodes()
                                if n.rule == 'starR']), 1)

    def test_recursion_limit_is_restored(self):
        before = sys.getrecursionlimit()
        quick().prove(STAR_COMM)
        self.assertEqual(sys.getrecursionlimit(), before)

    def test_pairs_are_used_once_per_branch(self):
        verdict = quick('bbi-nd', engine='eq').prove(STAR_COMM)
        self.assertTrue(verdict.proved)
        for path in paths(verdict.proof):
            used = [(n.rule, n.instance.principal, n.instance.atoms)
                    for n in path if n.rule in ('starR', 'wandL')]
            self.assertEqual(len(used), len(set(used)))


class TestRefute(unittest.TestCase):
    def test_finite_countermodel(self):
        config = builtin_system('pasl')
        verdict = Prover(config, Budget(timeout=30),
                         extract_model=True).prove(ROW_19)
        self.assertTrue(verdict.refuted)
        self.assertEqual(verdict.source, 'finite-search')
        self.assertEqual(verdict.model.name, 'Z2')
        self.assertEqual(semantics.check_frame(verdict.model,
                                               config.active_axioms()), [])
        self.assertFalse(semantics.eval(verdict.model, verdict.world, ROW_19))

    def test_no_countermodel_for_theorems(self):
        self.assertIsNone(find_countermodel(ROW_19, builtin_system('pasl+d')))

    def test_countermodel_search_checks_budget(self):
        calls = []

        def check():
            calls.append(1)
            raise BudgetExceeded('timeout')
        self.assertRaises(BudgetExceeded, find_countermodel, ROW_19,
                          builtin_system('pasl'), check=check)
        self.assertEqual(len(calls), 1)

    def test_countermodel_search_counts_against_timeout(self):
        with mock.patch.object(Budget, 'check',
                               side_effect=BudgetExceeded('timeout')):
            verdict = Prover(builtin_system('pasl'), Budget(timeout=30),
                             extract_model=True).prove(ROW_19)
        self.assertTrue(verdict.unknown)
        self.assertEqual(verdict.reason, 'timeout')

    def test_saturated_branch(self):
        with mock.patch('separata.prover.find_countermodel',
                        return_value=None):
            verdict = Prover(builtin_system('pasl'), Budget(timeout=30),
                             extract_model=True).prove(a)
        self.assertTrue(verdict.refuted)
        self.assertEqual(verdict.source, 'saturation')
        self.assertFalse(semantics.eval(verdict.model, verdict.world, a))
        self.assertEqual(verdict.to_dict()['world'], verdict.world)

    def test_unvalidated_without_extraction(self):
        verdict = quick('pasl').prove(a)
        self.assertTrue(verdict.unknown)
        self.assertEqual(verdict.reason, 'saturation-unvalidated')

    def test_extract_model(self):
        config = builtin_system('pasl')
        s = Sequent(rel=[Ternary(1, 2, EPSILON)], gamma=[(1, a)],
                    delta=[(2, a)])
        m = extract_model(s, config)
        self.assertEqual(m.rho[1], 'a1')
        self.assertEqual(m.epsilon, 'e')
        self.assertIn(('a1', 'a2', 'e'), m.rel)
        self.assertTrue(semantics.falsifiable(m, s))

    def test_extract_model_merges_equal_labels(self):
        config = builtin_system('pasl').with_engine('eq')
        s = Sequent(rel=[Ternary(1, 2, 3)], gamma=[(2, a)],
                    eqs=[Eq(2, EPSILON)])
        m = extract_model(s, config)
        self.assertEqual(m.rho[2], m.epsilon)
        self.assertEqual(m.valuation['a'], frozenset(['e']))

    def test_closed_branch(self):
        s = Sequent(gamma=[(1, a)], delta=[(1, a)])
        self.assertRaises(NotSaturated, extract_model, s,
                          builtin_system('pasl'))


class TestProofs(unittest.TestCase):
    def setUp(self):
        self.config = builtin_system('pasl+d')
        self.proof = quick().prove(ROW_1).proof

    def test_replay_detects_changes(self):
        root = self.proof
        child = root.children[0]
        bad = Proof(root.sequent, root.instance,
                    [Proof(Sequent(delta=[(1, a)]), child.instance,
                           child.children)])
        self.assertFalse(check_proof(bad, self.config))

    def test_unclosed_leaf(self):
        leaf = Proof(Sequent(delta=[(1, a)]),
                     RuleInstance('id', ('L', 1, a)))
        self.assertFalse(check_proof(leaf, self.config))

    def test_to_dict(self):
        d = self.proof.to_dict()
        self.assertEqual(d['rule'], 'impR')
        self.assertEqual(sorted(d), ['atoms', 'children', 'fresh',
                                     'principal', 'rule', 'sequent'])
        self.assertEqual(d['principal'], 'R a1:%s' % ROW_1)
        self.assertEqual(d['sequent'], str(self.proof.sequent))

    def test_render(self):
        lines = self.proof.render().splitlines()
        self.assertEqual(len(lines), self.proof.size())
        self.assertTrue(lines[0].startswith('impR'))
        self.assertTrue(lines[1].startswith('  andL'))

    def test_verdict_dict(self):
        verdict = Proved(self.proof, 1.23456)
        self.assertEqual(verdict.to_dict(proof=False),
                         {'verdict': 'proved', 'seconds': 1.2346})
        self.assertIn('proof', verdict.to_dict())


class TestHeuristic(unittest.TestCase):
    def test_direct_split(self):
        s = Sequent(rel=[Ternary(1, 2, 3), Ternary(4, 5, 3)],
                    gamma=[(4, a), (5, b)], delta=[(3, Star(a, b))])
        self.assertEqual(heuristic_hint(s, 3, Star(a, b)),
                         [Ternary(4, 5, 3)])

    def test_nested_split(self):
        f = Star(a, Star(b, c))
        s = Sequent(rel=[Ternary(1, 4, 5), Ternary(2, 3, 4)],
                    gamma=[(1, a), (2, b), (3, c)], delta=[(5, f)])
        self.assertEqual(heuristic_hint(s, 5, f),
                         [Ternary(1, 4, 5), Ternary(2, 3, 4)])

    def test_no_hint(self):
        s = Sequent(rel=[Ternary(1, 2, 3)], gamma=[(1, a)],
                    delta=[(3, Star(a, b))])
        self.assertEqual(heuristic_hint(s, 3, Star(a, b)), [])
        self.assertEqual(heuristic_hint(s, 3, a), [])

    def test_hint_modulo_equalities(self):
        s = Sequent(rel=[Ternary(1, 2, 6)], gamma=[(1, a), (2, b)],
                    delta=[(3, Star(a, b))]).assert_eq(3, 6)
        self.assertEqual(heuristic_hint(s, 3, Star(a, b), s.eq.query),
                         [Ternary(1, 2, 6)])


class TestAcceptance(unittest.TestCase):
    def test_partial_determinism(self):
        verdict = quick('pasl').prove(ROW_18)
        self.assertTrue(verdict.proved)
        self.assertTrue(check_proof(verdict.proof, builtin_system('pasl')))
        verdict = Prover(builtin_system('bbi-nd'),
                         Budget(timeout=5)).prove(ROW_18)
        self.assertTrue(verdict.unknown)

    def test_non_deterministic_derivation_replays(self):
        config = builtin_system('bbi-nd')
        verdict = Prover(config, Budget(timeout=30)).prove(ROW_15)
        self.assertTrue(verdict.proved)
        self.assertTrue(check_proof(verdict.proof, config))

    def test_random_theorems_smoke(self):
        for f in gen_suite(GenParams(n=3, i=2, seed=1, count=5)):
            verdict = Prover(builtin_system('pasl+d'),
                             Budget(timeout=5)).prove(f)
            self.assertFalse(verdict.refuted, str(f))
            if verdict.proved:
                self.assertIsNone(semantics.countermodel_in(
                    semantics.heap_frame(1, 1), f))

    @slow
    def test_table2(self):
        config = builtin_system('pasl+d')
        for i, text in enumerate(table2(), 1):
            timeout = 600 if i in (16, 17) else 60
            prover = Prover(config, Budget(timeout=timeout))
            verdict = prover.prove(parse(text))
            self.assertTrue(verdict.proved, 'row %d: %r' % (i, verdict))

    @slow
    def test_associativity_rows(self):
        rows = table2()
        for engine in ('subst', 'eq'):
            config = builtin_system('pasl+d').with_engine(engine)
            for i in (9, 10, 11, 12, 13, 14, 17):
                timeout = 600 if i == 17 else 60
                verdict = Prover(config, Budget(timeout=timeout)).prove(
                    parse(rows[i - 1]))
                self.assertTrue(verdict.proved,
                                'row %d %s: %r' % (i, engine, verdict))

    @slow
    def test_table2_engines_agree(self):
        subst = builtin_system('pasl+d')
        eq = subst.with_engine('eq')
        for i, text in enumerate(table2()[:15], 1):
            f = parse(text)
            expected = Prover(subst, Budget(timeout=120)).prove(f)
            verdict = Prover(eq, Budget(timeout=120)).prove(f)
            self.assertTrue(expected.proved, 'row %d' % i)
            self.assertEqual(verdict.proved, expected.proved, 'row %d' % i)

    @slow
    def test_random_theorems(self):
        formulas = gen_suite(GenParams(n=10, i=20, seed=1, count=100))
        proved = 0
        for f in formulas:
            verdict = Prover(builtin_system('bbi-nd'),
                             Budget(timeout=200)).prove(f)
            self.assertFalse(verdict.refuted, str(f))
            proved += verdict.proved
        self.assertGreaterEqual(proved, 60)

    @slow
    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32),
           st.sampled_from(['bbi-nd', 'pasl', 'pasl+d']))
    def test_soundness(self, seed, system):
        from separata.hilbert import rng_for, random_formula
        f = random_formula(rng_for(seed, 0), 5, ('a', 'b'))
        verdict = Prover(builtin_system(system),
                         Budget(timeout=2)).prove(f)
        if verdict.proved:
            for frame in (semantics.heap_frame(1, 1),
                          semantics.heap_frame(2, 1)):
                self.assertIsNone(semantics.countermodel_in(frame, f))


if __name__ == '__main__':
    unittest.main()
