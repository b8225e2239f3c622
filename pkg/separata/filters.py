"""
Helpers for presenting verdict dicts and bench rows.
"""
import re

_whitespace = re.compile(r'\s+')


def find_verdict(row):
    """
    Bench rows wrap the verdict dict in 'result'; plain verdict dicts are
    returned as they are.
    """
    if 'result' in row:
        return row['result']
    else:
        return row


def get_status(row):
    verdict = find_verdict(row)
    if verdict['verdict'] == 'unknown':
        return 'unknown (%s)' % verdict.get('reason', '?')
    return verdict['verdict']


def get_time(row):
    return find_verdict(row).get('seconds', 0.0)


def is_proved(row):
    return find_verdict(row)['verdict'] == 'proved'


def truncate_formula(text, width=60, suffix='...'):
    text = _whitespace.sub(' ', text).strip()
    if len(text) <= width:
        return text
    return text[:width - len(suffix)] + suffix


def proof_rules(proof):
    """Rule name -> number of uses in a proof dict."""
    counts = {}
    stack = [proof]
    while stack:
        node = stack.pop()
        counts[node['rule']] = counts.get(node['rule'], 0) + 1
        stack.extend(node['children'])
    return counts


def proof_size(proof):
    return sum(proof_rules(proof).values())


def summarize(rows):
    """Counts per verdict, the proved rate and the mean time of proofs."""
    counts = {'proved': 0, 'refuted': 0, 'unknown': 0}
    proved_time = 0.0
    for row in rows:
        verdict = find_verdict(row)['verdict']
        counts[verdict] += 1
        if verdict == 'proved':
            proved_time += get_time(row)
    total = len(rows)
    return {
        'count': total,
        'proved': counts['proved'],
        'refuted': counts['refuted'],
        'unknown': counts['unknown'],
        'proved_rate': float(counts['proved']) / total if total else 0.0,
        'average_time': proved_time / counts['proved']
        if counts['proved'] else 0.0,
    }


def regressions(rows, baseline):
    """Indices proved in ``baseline`` but not in ``rows``."""
    before = dict((r['index'], r) for r in baseline)
    lost = []
    for row in rows:
        old = before.get(row['index'])
        if old is not None and is_proved(old) and not is_proved(row):
            lost.append(row['index'])
    return lost
