import os
import unittest

from hypothesis import strategies as st

from separata.formula import Atom, Not, And, Or, Imp, Star, Wand, TOP, BOT, EMP

slow = unittest.skipUnless(os.environ.get('SEPARATA_SLOW'),
                           'set SEPARATA_SLOW to run the long suites')

leaves = st.one_of(
    st.sampled_from(['a', 'b', 'c', "p'", 'q_1']).map(Atom),
    st.sampled_from([TOP, BOT, EMP]))


def _grow(children):
    return st.one_of(
        children.map(Not),
        st.tuples(st.sampled_from([And, Or, Imp, Star, Wand]),
                  children, children).map(lambda t: t[0](t[1], t[2])))


formulas = st.recursive(leaves, _grow, max_leaves=12)

small_formulas = st.recursive(
    st.sampled_from(['a', 'b']).map(Atom) | st.just(EMP), _grow,
    max_leaves=5)
