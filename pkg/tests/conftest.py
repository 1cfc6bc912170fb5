from fractions import Fraction

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qstirling.exact_poly import SYMBOLS, Poly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SYM = sympy.symbols("q p Q X lam")


def to_sympy(poly: Poly):
    """Independent view of a Poly for cross-checking."""
    total = sympy.Integer(0)
    for exps, c in poly.terms():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        for s, e in zip(SYM, exps):
            term *= s**e
        total += term
    return sympy.expand(total)


def same(poly: Poly, expr) -> bool:
    return sympy.expand(to_sympy(poly) - expr) == 0


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
exponent = st.integers(min_value=-3, max_value=3)


@st.composite
def polys(draw, symbols=("q", "p", "lam"), max_terms=4, nonneg=False):
    lo = 0 if nonneg else -3
    n = draw(st.integers(min_value=0, max_value=max_terms))
    terms = []
    for _ in range(n):
        exps = {s: draw(st.integers(min_value=lo, max_value=3)) for s in symbols}
        vec = tuple(exps.get(s, 0) for s in SYMBOLS)
        terms.append((vec, draw(rationals)))
    return Poly.from_terms(terms)
