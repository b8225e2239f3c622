'''
Benchmark suites: the fixed Table 2 formulas and seeded random theorems.
'''
import os
from concurrent.futures import ProcessPoolExecutor

from .axioms import builtin_system
from .formula import parse
from .hilbert import GenParams, gen_suite
from .prover import Prover, Budget
from . import filters, utils

import logging
log = logging.getLogger('separata')

TABLE2 = os.path.join(os.path.dirname(__file__), 'data', 'table2.txt')

SUITES = ('table2', 'random')


def table2():
    """The 19 Table 2 formulas as text, in order."""
    with open(TABLE2) as fh:
        return [line.strip() for line in fh if line.strip()]


def suite_formulas(name, params=None):
    if name == 'table2':
        return table2()
    if name == 'random':
        return [str(f) for f in gen_suite(params or GenParams())]
    raise ValueError('unknown suite %r' % name)


def attempt(index, text, system='pasl+d', timeout=60.0, engine='subst',
            options=None):
    """One proof attempt, returned as a bench row."""
    options = options or {}
    config = builtin_system(system)
    prover = Prover(config, Budget(timeout=timeout,
                                   max_labels=options.get('max_labels'),
                                   max_steps=options.get('max_steps')),
                    engine=engine,
                    backjumping=options.get('backjumping', True),
                    heuristics=options.get('heuristics', True),
                    extract_model=options.get('extract_model', False))
    verdict = prover.prove(parse(text))
    if verdict.proved:
        result = verdict.to_dict(proof=False)
    else:
        result = verdict.to_dict()
    result['stats'] = verdict.stats
    return {'index': index, 'formula': text, 'result': result}


def _attempt(job):
    return attempt(*job)


def run_suite(formulas, system='pasl+d', timeout=60.0, engine='subst',
              jobs=1, cache=None, options=None):
    """
    Rows for every formula, ordered by index. With ``jobs`` > 1 attempts
    run in worker processes.
    """
    options = options or {}
    query = dict(options, engine=engine, timeout=timeout)
    rows = {}
    pending = []
    for index, text in enumerate(formulas, 1):
        cached = cache.get_verdict(text, system, query) if cache else None
        if cached is not None:
            rows[index] = cached
        else:
            pending.append((index, text, system, timeout, engine, options))

    if jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_attempt, pending))
    else:
        done = [_attempt(job) for job in pending]

    for row in done:
        log.info('%3d %-20s %8.3fs %s', row['index'], filters.get_status(row),
                 filters.get_time(row), filters.truncate_formula(row['formula']))
        rows[row['index']] = row
        if cache:
            cache.save_verdict(row['formula'], system, row, query)
    return [rows[i] for i in sorted(rows)]


def make_report(suite, rows, system, timeout, engine):
    return {
        'suite': suite,
        'system': system,
        'engine': engine,
        'timeout': timeout,
        'timestamp': utils.formatdate(),
        'summary': filters.summarize(rows),
        'rows': rows,
    }


def render_report(report):
    lines = ['%s on %s (%s engine, timeout %ss), %s' % (
        report['suite'], report['system'], report['engine'],
        report['timeout'], report['timestamp'])]
    for row in report['rows']:
        lines.append('%3d  %-24s %9.3f  %s' % (
            row['index'], filters.get_status(row), filters.get_time(row),
            filters.truncate_formula(row['formula'])))
    s = report['summary']
    lines.append('proved %d/%d (%.0f%%), refuted %d, unknown %d, '
                 'mean proof time %.3fs' % (
                     s['proved'], s['count'], 100 * s['proved_rate'],
                     s['refuted'], s['unknown'], s['average_time']))
    return '\n'.join(lines)
