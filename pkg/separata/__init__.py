'''
Separata: a labelled sequent prover for propositional abstract separation
logic and its extensions.

'''
import os

from .cache import NoCache
from .exceptions import (SeparataException, FormulaSyntaxError,
                         AxiomSyntaxError, InvalidAxiom, UnknownSystem)
from .formula import Formula, parse, render
from .axioms import builtin_system, custom_system, load_axioms
from .prover import Prover, Budget, check_proof

import logging
log = logging.getLogger('separata')

__version__ = '1.0'

PROVER_OPTIONS = ('backjumping', 'heuristics', 'extract_model')


def get_prover():
    """
    Get a Separata object configured from your shell environment::

        # Optional
        export SEPARATA_SYSTEM=pasl+d     # system name, see builtin_system
        export SEPARATA_TIMEOUT=60        # seconds per attempt
        export SEPARATA_ENGINE=subst      # or eq
        export SEPARATA_DEBUG=plz         # log every attempt

    If you need to pass in your config, just create a new Separata object.
    """
    timeout = os.environ.get('SEPARATA_TIMEOUT', '60')
    try:
        timeout = float(timeout)
    except ValueError:
        raise SeparataException('SEPARATA_TIMEOUT must be a number of '
                                'seconds, not %r' % timeout)
    return Separata(
        system=os.environ.get('SEPARATA_SYSTEM', 'pasl+d'),
        timeout=timeout,
        engine=os.environ.get('SEPARATA_ENGINE', 'subst'),
        debug=os.environ.get('SEPARATA_DEBUG', False),
    )


class Separata(object):
    """
    Prove formulas in one proof system::

        separata = Separata('pasl+d', timeout=10)
        verdict = separata.prove('emp & (a * b) -> a')

    A Separata object can cache its verdicts. Pass a cache object with the
    cache keyword::

        separata = Separata('pasl', cache=DictionaryCache())

    Use ``axioms`` to prove in a system given by an axiom file instead of a
    built-in system name.
    """
    def __init__(self, system='pasl+d', timeout=60.0, engine='subst',
                 axioms=None, debug=False, cache=None, **options):
        if engine not in ('subst', 'eq'):
            raise SeparataException('unknown engine %r' % engine)
        if axioms is not None:
            config = custom_system(load_axioms(axioms),
                                   name=os.path.basename(axioms))
        else:
            config = builtin_system(system)
        self.config = {
            'SYSTEM': config.name,
            'TIMEOUT': timeout,
            'ENGINE': engine,
            'AXIOMS': axioms,
        }
        self.system = config.with_engine(engine)
        self.options = options
        self.debug = debug
        self.cache = cache if cache is not None else NoCache()

    def budget(self):
        return Budget(timeout=self.config['TIMEOUT'],
                      max_labels=self.options.get('max_labels'),
                      max_steps=self.options.get('max_steps'))

    def query(self):
        query = dict(self.options)
        query.update(engine=self.config['ENGINE'],
                     timeout=self.config['TIMEOUT'])
        return query

    def prove(self, formula, force_update=False):
        """
        Prove a formula, given as text or as a Formula. Use
        ``force_update=True`` to ignore a cached verdict.
        """
        if not isinstance(formula, Formula):
            formula = parse(formula)

        verdict = None
        if not force_update:
            verdict = self.cache.get_verdict(formula, self.config['SYSTEM'],
                                             self.query())
        if verdict is None:
            prover = Prover(self.system, self.budget(), **dict(
                (k, v) for k, v in self.options.items()
                if k in PROVER_OPTIONS))
            verdict = prover.prove(formula)
            self.cache.save_verdict(formula, self.config['SYSTEM'], verdict,
                                    self.query())
        if self.debug:
            log.debug('%s: %r', render(formula), verdict)
        return verdict

    def check(self, verdict):
        """Replay the derivation of a Proved verdict."""
        return check_proof(verdict.proof, self.system)

    def __repr__(self):
        return '<Separata %(SYSTEM)s %(ENGINE)s %(TIMEOUT)ss>' % self.config
