import unittest
from datetime import datetime

import pytz

from separata import cache, filters, utils
from separata.bench import table2, suite_formulas, run_suite, make_report, \
    render_report
from separata.formula import parse
from separata.hilbert import GenParams


def row(index, verdict, seconds=0.5, **extra):
    result = dict(verdict=verdict, seconds=seconds, **extra)
    return {'index': index, 'formula': 'f%d' % index, 'result': result}


class TestDictionaryCache(unittest.TestCase):
    def setUp(self):
        self.cache = cache.DictionaryCache()
        self.query = {'engine': 'subst', 'timeout': 60.0}

    def test_save_and_get(self):
        f = parse('a * b -> b * a')
        self.assertIsNone(self.cache.get_verdict(f, 'pasl', self.query))
        self.cache.save_verdict(f, 'pasl', 'proved!', self.query)
        self.assertEqual(self.cache.get_verdict(f, 'pasl', self.query),
                         'proved!')
        self.assertIsNone(self.cache.get_verdict(f, 'bbi-nd', self.query))
        self.assertIsNone(self.cache.get_verdict(
            f, 'pasl', {'engine': 'eq', 'timeout': 60.0}))
        self.assertEqual(self.cache.get_stats(),
                         {'verdict_gets': 4, 'verdict_hits': 1})

    def test_text_and_formula_share_keys(self):
        self.cache.save_verdict(parse('a*b'), 'pasl', 1, self.query)
        self.assertEqual(self.cache.get_verdict('a * b', 'pasl', self.query),
                         1)

    def test_remove(self):
        self.cache.save_verdict('a', 'pasl', 1, self.query)
        self.assertTrue(self.cache.remove_verdict('a', 'pasl', self.query))
        self.assertFalse(self.cache.remove_verdict('a', 'pasl', self.query))

    def test_log(self):
        self.cache.save_verdict('a', 'pasl', 1, self.query)
        self.cache.save_verdict('b', 'pasl+d', 1, self.query)
        self.assertEqual(self.cache.log_ls('verdict'),
                         set(['pasl', 'pasl+d']))
        self.assertEqual(self.cache.log_ls('verdict', 'pasl'), [self.query])
        self.assertIsNone(self.cache.log_ls('verdict', 'bbi-nd'))
        self.cache.clear()
        self.assertEqual(self.cache.log_ls('verdict'), set())

    def test_keys(self):
        self.assertEqual(self.cache.make_key('verdict', 'pasl'),
                         'separata:verdict:pasl')
        self.assertEqual(self.cache.query_to_key(None), '')

    def test_no_cache(self):
        nocache = cache.NoCache()
        nocache.save_verdict('a', 'pasl', 1)
        self.assertIsNone(nocache.get_verdict('a', 'pasl'))


class TestUtils(unittest.TestCase):
    def test_dict_to_qs(self):
        self.assertEqual(
            utils.dict_to_qs({'timeout': 5.0, 'engine': 'eq',
                              'flags': ['d', 'iu'], 'budget': {'steps': 9}}),
            'budget[steps]=9&engine=eq&flags[]=d&flags[]=iu&timeout=5.0')
        self.assertRaises(TypeError, utils.dict_to_qs, {'x': object()})

    def test_dates(self):
        d = datetime(2024, 3, 1, 12, 30, 5, tzinfo=pytz.utc)
        self.assertEqual(utils.formatdate(d), '2024-03-01T12:30:05Z')
        self.assertEqual(utils.parsedate('2024-03-01T12:30:05Z'), d)
        self.assertEqual(utils.parsedate('2024-03-01').day, 1)

    def test_reports(self):
        report = {'timestamp': '2024-03-01T12:30:05Z',
                  'rows': [{'formula': 'a * b'}]}
        parsed = utils.parse_report(report)
        self.assertIsInstance(parsed['timestamp'], datetime)
        self.assertEqual(parsed['rows'][0]['formula'], 'a * b')
        again = utils.prepare_report(parsed)
        self.assertEqual(again['timestamp'], '2024-03-01T12:30:05Z')


class TestFilters(unittest.TestCase):
    def test_status(self):
        self.assertEqual(filters.get_status(row(1, 'proved')), 'proved')
        self.assertEqual(filters.get_status(
            {'verdict': 'unknown', 'reason': 'timeout'}), 'unknown (timeout)')
        self.assertEqual(filters.get_time(row(1, 'proved', 2.0)), 2.0)

    def test_truncate(self):
        self.assertEqual(filters.truncate_formula('a  *\n b'), 'a * b')
        self.assertEqual(filters.truncate_formula('a' * 100, width=10),
                         'aaaaaaa...')

    def test_proof_rules(self):
        proof = {'rule': 'impR', 'children': [
            {'rule': 'id', 'children': []}, {'rule': 'id', 'children': []}]}
        self.assertEqual(filters.proof_rules(proof), {'impR': 1, 'id': 2})
        self.assertEqual(filters.proof_size(proof), 3)

    def test_summarize(self):
        rows = [row(1, 'proved', 1.0), row(2, 'proved', 3.0),
                row(3, 'unknown', 60.0, reason='timeout'),
                row(4, 'refuted', 0.1)]
        summary = filters.summarize(rows)
        self.assertEqual(summary['count'], 4)
        self.assertEqual(summary['proved'], 2)
        self.assertEqual(summary['proved_rate'], 0.5)
        self.assertEqual(summary['average_time'], 2.0)
        self.assertEqual(filters.summarize([])['proved_rate'], 0.0)

    def test_regressions(self):
        before = [row(1, 'proved'), row(2, 'proved'), row(3, 'unknown')]
        after = [row(1, 'proved'), row(2, 'unknown'), row(3, 'proved')]
        self.assertEqual(filters.regressions(after, before), [2])


class TestBench(unittest.TestCase):
    def test_table2(self):
        rows = table2()
        self.assertEqual(len(rows), 19)
        for text in rows:
            parse(text)

    def test_suites(self):
        self.assertEqual(suite_formulas('table2'), table2())
        formulas = suite_formulas('random', GenParams(count=3))
        self.assertEqual(len(formulas), 3)
        self.assertRaises(ValueError, suite_formulas, 'tptp')

    def test_run_suite(self):
        verdicts = cache.DictionaryCache()
        formulas = ['a * b -> b * a', '(emp & (a * b)) -> a']
        rows = run_suite(formulas, system='pasl+d', timeout=30,
                         cache=verdicts)
        self.assertEqual([r['index'] for r in rows], [1, 2])
        self.assertTrue(all(filters.is_proved(r) for r in rows))
        self.assertIn('steps', rows[0]['result']['stats'])

        again = run_suite(formulas, system='pasl+d', timeout=30,
                          cache=verdicts)
        self.assertEqual(again, rows)
        self.assertEqual(verdicts.verdicts_hits, 2)

        report = make_report('custom', rows, 'pasl+d', 30, 'subst')
        self.assertEqual(report['summary']['proved'], 2)
        text = render_report(report)
        self.assertIn('proved 2/2 (100%)', text)
        self.assertEqual(len(text.splitlines()), 4)


if __name__ == '__main__':
    unittest.main()
