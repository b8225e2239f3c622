from . import utils


class BaseCache(object):
    """
    Base cache object for proof attempts. All caching objects need to
    extend this class and implement get, set and clear.

    Keys combine the system name, the query (engine, budget, options) and
    the rendered formula, so a cached Unknown is only reused under the same
    budget.
    """
    verdicts_hits = 0
    verdicts_gets = 0

    def __init__(self, prefix='separata'):
        self.prefix = prefix

    def get_verdict(self, formula, system, query=None):
        self.verdicts_gets += 1

        key = self.make_key('verdict', system, self.query_to_key(query),
                            str(formula))
        ret = self.get(key)
        if ret is not None:
            self.verdicts_hits += 1
        return ret

    def save_verdict(self, formula, system, verdict, query=None):
        key = self.make_key('verdict', system, self.query_to_key(query),
                            str(formula))
        self.set(key, verdict)

        # Log our query
        self.log_key('verdict', system, query)

    def remove_verdict(self, formula, system, query=None):
        raise NotImplementedError

    def get_stats(self):
        return {
            "verdict_gets": self.verdicts_gets,
            "verdict_hits": self.verdicts_hits,
        }

    def get(self, key):
        """
        Get data from a cache key
        """
        raise NotImplementedError()

    def set(self, key, data):
        """
        Save data to a cache key
        """
        raise NotImplementedError()

    def log_key(self, type, id, query):
        """
        Remember which queries have been cached for a system, so that a
        cache can list them.
        """
        pass

    def log_ls(self, type, id=None):
        raise NotImplementedError()

    def clear(self):
        """
        Clear the entire cache
        """
        raise NotImplementedError()

    def query_to_key(self, query):
        """
        Take a query in the form of a dictionary and turn it into something
        that can be used in a cache key
        """
        if query is None:
            return ''

        return utils.dict_to_qs(query)

    def make_key(self, *args):
        """
        Take any number of arguments and return a key string
        """
        return ':'.join([self.prefix] + list(args))


class DictionaryCache(BaseCache):
    """
    Cache that stores verdicts in a dictionary. Essentially a local memory
    cache. Verdicts are immutable, so nothing is copied.
    """
    def __init__(self, prefix='separata'):
        super(DictionaryCache, self).__init__(prefix)
        self.cache = dict()
        self.log = dict()

    def get(self, key):
        return self.cache.get(key)

    def set(self, key, data):
        self.cache[key] = data

    def remove_verdict(self, formula, system, query=None):
        key = self.make_key('verdict', system, self.query_to_key(query),
                            str(formula))
        return self.cache.pop(key, None) is not None

    def log_key(self, type, id, query):
        keyname = self.make_key(type, id)
        if keyname not in self.log:
            self.log[keyname] = dict()
        self.log[keyname][self.query_to_key(query)] = query

    def log_ls(self, type, id=None):
        if id is None:
            prefix = self.make_key(type) + ':'
            return set(k[len(prefix):] for k in self.log
                       if k.startswith(prefix))
        keyname = self.make_key(type, id)
        return list(self.log[keyname].values()) if keyname in self.log \
            else None

    def clear(self):
        self.cache.clear()
        self.log.clear()


class NoCache(BaseCache):
    """
    Cache that doesn't cache anything. The default.
    """
    def get_verdict(self, formula, system, query=None):
        return None

    def save_verdict(self, formula, system, verdict, query=None):
        pass

    def clear(self):
        pass


try:
    import redis
    import pickle

    class RedisCache(BaseCache):
        """
        Cache that stores pickled verdicts in Redis, shared by every process
        that points at the same database.
        """
        def __init__(self, prefix='separata', host='localhost', port=6379,
                     db=0):
            super(RedisCache, self).__init__(prefix)
            self.r = redis.StrictRedis(host=host, port=port, db=db)

        def remove_verdict(self, formula, system, query=None):
            key = self.make_key('verdict', system, self.query_to_key(query),
                                str(formula))
            return bool(self.r.delete(key))

        def get(self, key):
            ret = self.r.get(key)
            return pickle.loads(ret) if ret else None

        def set(self, key, data):
            self.r.set(key, pickle.dumps(data))

        def log_key(self, type, id, query):
            self.r.sadd(self.make_key(type), id)
            self.r.sadd(self.make_key(type, id), pickle.dumps(query))

        def log_ls(self, type, id=None):
            if id is None:
                return set(m.decode('utf-8') if isinstance(m, bytes) else m
                           for m in self.r.smembers(self.make_key(type)))
            return [pickle.loads(q)
                    for q in self.r.smembers(self.make_key(type, id))]

        def clear(self):
            self.r.flushdb()

except ImportError:
    pass
