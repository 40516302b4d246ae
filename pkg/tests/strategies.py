"""Hypothesis strategies for small polynomials, derivations and germs."""

from fractions import Fraction

from hypothesis import strategies as st

from germdet import Derivation, FieldDesc, Poly, QQ
from germdet.ring_core import monomials_up_to

VARS2 = ("x", "y")

small_coeff = st.integers(-3, 3).map(Fraction)


def polys(vars=VARS2, field=QQ, min_deg=0, max_deg=3, max_terms=4):
    mons = [e for e in monomials_up_to(len(vars), max_deg) if sum(e) >= min_deg]
    return st.dictionaries(st.sampled_from(mons), small_coeff, max_size=max_terms).map(
        lambda d: Poly({e: field(c) for e, c in d.items()}, vars, field))


def derivations(vars=VARS2, min_order=2, max_deg=3):
    return st.lists(polys(vars, min_deg=min_order, max_deg=max_deg, max_terms=3),
                    min_size=len(vars), max_size=len(vars)).map(Derivation)


def prime_fields():
    return st.sampled_from([FieldDesc(5), FieldDesc(7), FieldDesc(11)])
