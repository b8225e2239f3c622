import iso8601
import re
import pytz
from datetime import datetime
from dateutil.parser import parse

_iso8601_full_date = re.compile(r'^\d{4}-\d{2}-\d{2}.\d{2}:\d{2}.*$')
_iso8601_part_date = re.compile(r'^\d{4}-\d{2}-\d{2}$')


def dict_to_qs(dictionary):
    """
    Takes a dictionary of options and returns a stable query string, keys
    sorted, for use in cache keys.
    """
    qs = list()

    for k, v in sorted(dictionary.items()):
        if isinstance(v, dict):
            for k2, v2 in sorted(v.items()):
                if v2 is None or isinstance(v2, (str, int, float, bool)):
                    qs.append("%s[%s]=%s" % (k, k2, v2))
                else:
                    raise TypeError('cannot encode %r' % (v2,))
        elif v is None or isinstance(v, (str, int, float, bool)):
            qs.append("%s=%s" % (k, v))
        elif isinstance(v, (list, tuple)):
            for v2 in v:
                qs.append("%s[]=%s" % (k, v2))
        else:
            raise TypeError('cannot encode %r' % (v,))

    return "&".join(qs)


def parse_report(report):
    """
    Recurse through a bench report loaded from JSON and convert date
    strings to datetime objects.
    """
    if isinstance(report, str):
        if (_iso8601_full_date.match(report) is not None
                or _iso8601_part_date.match(report) is not None):
            return parsedate(report)
    elif isinstance(report, dict):
        for k, v in report.items():
            report[k] = parse_report(v)
    elif isinstance(report, list):
        for i in range(len(report)):
            report[i] = parse_report(report[i])

    return report


def prepare_report(data):
    """
    Recurse through a bench report and make it JSON-friendly.
    """
    if isinstance(data, datetime):
        return formatdate(data)
    elif isinstance(data, dict):
        for k, v in data.items():
            data[k] = prepare_report(v)
    elif isinstance(data, list):
        for i in range(len(data)):
            data[i] = prepare_report(data[i])

    return data


def formatdate(d=None):
    if d is None:
        d = datetime.now(pytz.utc)
    try:
        return d.astimezone(pytz.utc).strftime('%Y-%m-%dT%H:%M:%SZ')
    except (ValueError, AttributeError):
        return d.strftime('%Y-%m-%dT%H:%M:%SZ')


def parsedate(d):
    if _iso8601_full_date.match(d) is not None:
        return iso8601.parse_date(d).astimezone(pytz.utc)
    else:
        return parse(d)
