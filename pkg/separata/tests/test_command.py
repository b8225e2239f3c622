import io
import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from separata import (Separata, get_prover, SeparataException,
                      UnknownSystem, cache)
from separata.command import (main, EXIT_PROVED, EXIT_REFUTED, EXIT_UNKNOWN,
                              EXIT_USAGE)
from separata.semantics import make_zn, dump_model, load_model

ROW_19 = '(emp & (a * b)) -> a'


class CommandTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()
        self.addCleanup(shutil.rmtree, self.tmp)

    def path(self, name):
        return os.path.join(self.tmp, name)

    def run_main(self, *argv):
        with mock.patch('sys.stdout', new_callable=io.StringIO) as out:
            status = main(list(argv))
        return status, out.getvalue()


class TestProveCommand(CommandTestCase):
    def test_proved(self):
        status, out = self.run_main('prove', '-s', 'pasl+d', '-f', ROW_19)
        self.assertEqual(status, EXIT_PROVED)
        self.assertTrue(out.startswith('proved'))

    def test_json_with_proof(self):
        status, out = self.run_main('prove', '-s', 'pasl+d', '-f', ROW_19,
                                    '--json', '--proof')
        self.assertEqual(status, EXIT_PROVED)
        data = json.loads(out)
        self.assertEqual(data['verdict'], 'proved')
        self.assertEqual(data['proof']['rule'], 'impR')
        self.assertIn('steps', data['stats'])

    def test_refuted_writes_model(self):
        model = self.path('cm.json')
        status, out = self.run_main('prove', '-s', 'pasl', '-f', ROW_19,
                                    '--saturate', '--model', model)
        self.assertEqual(status, EXIT_REFUTED)
        self.assertIn('falsified at world', out)
        self.assertEqual(load_model(model).worlds, ('0', '1'))

    def test_formula_file(self):
        path = self.path('f.txt')
        with open(path, 'w') as fh:
            fh.write('\n' + ROW_19 + '\n')
        status, _ = self.run_main('prove', '--file', path)
        self.assertEqual(status, EXIT_PROVED)

    def test_unknown(self):
        status, out = self.run_main('prove', '-s', 'pasl', '-f', 'a',
                                    '--max-steps', '50')
        self.assertEqual(status, EXIT_UNKNOWN)
        self.assertTrue(out.startswith('unknown'))

    def test_usage_errors(self):
        self.assertEqual(self.run_main('prove', '-f', 'a *')[0], EXIT_USAGE)
        self.assertEqual(self.run_main('prove', '-s', 'sl', '-f', 'a')[0],
                         EXIT_USAGE)
        self.assertEqual(self.run_main('prove')[0], EXIT_USAGE)
        with mock.patch('sys.stderr', new_callable=io.StringIO):
            self.assertRaises(SystemExit, main, ['bench'])


class TestCheckModelCommand(CommandTestCase):
    def setUp(self):
        super(TestCheckModelCommand, self).setUp()
        self.model = self.path('z2.json')
        dump_model(make_zn(2).with_valuation({'a': ['1'], 'b': ['1']}),
                   self.model)

    def test_falsified(self):
        status, out = self.run_main('check-model', self.model, '-f', ROW_19)
        self.assertEqual(status, EXIT_REFUTED)
        self.assertIn('falsified at world 0', out)

    def test_true(self):
        status, out = self.run_main('check-model', self.model, '-f', 'top')
        self.assertEqual(status, EXIT_PROVED)
        status, _ = self.run_main('check-model', self.model, '-f', ROW_19,
                                  '--world', '1')
        self.assertEqual(status, EXIT_PROVED)

    def test_frame(self):
        status, out = self.run_main('check-model', self.model, '-f', 'top',
                                    '--frame', 'pasl+d')
        self.assertIn('frame: axiom D fails', out)

    def test_bad_model(self):
        with open(self.model, 'w') as fh:
            fh.write('{"worlds": ["0"]}')
        self.assertEqual(self.run_main('check-model', self.model,
                                       '-f', 'top')[0], EXIT_USAGE)


class TestOtherCommands(CommandTestCase):
    def test_synth(self):
        status, out = self.run_main('synth', '-s', 'pasl')
        self.assertEqual(status, 0)
        lines = out.splitlines()
        self.assertEqual(len(lines), 6)
        self.assertEqual(lines[2], 'Com: (x,y > z) => (y,x > z)')

    def test_synth_subst(self):
        status, out = self.run_main('synth', '-s', 'pasl+d', '--subst')
        names = [line.split(':')[0] for line in out.splitlines()]
        self.assertEqual(names,
                         ['E1', 'E2', 'U', 'Com', 'A', 'C', 'P', 'D', 'IU'])

    def test_synth_rejects_bad_axioms(self):
        path = self.path('bad.axioms')
        with open(path, 'w') as fh:
            fh.write('A: forall u y x v w. [] [(u,y > x); (v,w > y)] '
                     '=> exists z. [(z,w > x); (u,v > z)]\n')
        self.assertEqual(self.run_main('synth', '--axioms', path)[0],
                         EXIT_USAGE)

    def test_gen(self):
        status, out = self.run_main('gen', '--count', '5', '--seed', '3')
        self.assertEqual(status, 0)
        self.assertEqual(len(out.splitlines()), 5)
        self.assertEqual(out, self.run_main('gen', '--count', '5',
                                            '--seed', '3')[1])

    def test_bench_baseline(self):
        status, out = self.run_main('bench', 'random', '--count', '2',
                                    '--n', '2', '--i', '1', '--timeout', '10',
                                    '--json')
        self.assertIn(status, (0, 1))
        report = json.loads(out)
        self.assertEqual(len(report['rows']), 2)
        for r in report['rows']:
            r['result']['verdict'] = 'proved'
        baseline = self.path('baseline.json')
        with open(baseline, 'w') as fh:
            json.dump(report, fh)

        proved = json.loads(out)['summary']['proved']
        status, _ = self.run_main('bench', 'random', '--count', '2',
                                  '--n', '2', '--i', '1', '--timeout', '10',
                                  '--baseline', baseline)
        self.assertEqual(status, 0 if proved == 2 else 1)


class TestFacade(unittest.TestCase):
    def test_prove_is_cached(self):
        verdicts = cache.DictionaryCache()
        separata = Separata('pasl+d', timeout=30, cache=verdicts)
        first = separata.prove(ROW_19)
        self.assertTrue(first.proved)
        self.assertTrue(separata.check(first))
        self.assertIs(separata.prove(ROW_19), first)
        self.assertEqual(verdicts.verdicts_hits, 1)
        self.assertIsNot(separata.prove(ROW_19, force_update=True), first)

    def test_options(self):
        separata = Separata('pasl', timeout=30, extract_model=True)
        verdict = separata.prove(ROW_19)
        self.assertTrue(verdict.refuted)
        self.assertEqual(separata.query()['extract_model'], True)

    def test_config(self):
        separata = Separata('pasl+d', engine='eq', timeout=5)
        self.assertEqual(separata.config['SYSTEM'], 'pasl+d')
        self.assertEqual(separata.system.engine, 'eq')
        self.assertEqual(repr(separata), '<Separata pasl+d eq 5s>')
        self.assertRaises(SeparataException, Separata, engine='smt')
        self.assertRaises(UnknownSystem, Separata, 'sl')

    def test_environment(self):
        env = {'SEPARATA_SYSTEM': 'bbi-nd', 'SEPARATA_TIMEOUT': '7',
               'SEPARATA_ENGINE': 'eq'}
        with mock.patch.dict(os.environ, env):
            separata = get_prover()
        self.assertEqual(separata.config['SYSTEM'], 'bbi-nd')
        self.assertEqual(separata.config['TIMEOUT'], 7.0)
        self.assertEqual(separata.config['ENGINE'], 'eq')
        with mock.patch.dict(os.environ, {'SEPARATA_TIMEOUT': 'soon'}):
            self.assertRaises(SeparataException, get_prover)


if __name__ == '__main__':
    unittest.main()
