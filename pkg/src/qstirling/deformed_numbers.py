"""Deformed integers [x]_M, [x]_P, [x]_G and the objects built from them.

[x]_G is the two-parameter form (q^x - p^x)/(q - p).  It is always computed
as the finite sum sum_j q^j p^(x-1-j); the M and P brackets are its
specializations p -> 1 and p -> 1/q.  Negative arguments use
[-b]_G = -(pq)^(-b) [b]_G.
"""

from __future__ import annotations

import enum
from math import comb

from .errors import UnknownIdentity
from .exact_poly import ONE, Poly, ZERO, lam, p, q
from .report import VerificationReport


class BracketKind(enum.Enum):
    M = "M"
    P = "P"
    G = "G"

    @classmethod
    def parse(cls, value) -> BracketKind:
        if isinstance(value, cls):
            return value
        return cls(str(value).upper())

    def p_value(self) -> Poly:
        """What the symbol p becomes for this kind."""
        if self is BracketKind.M:
            return ONE
        if self is BracketKind.P:
            return q ** -1
        return p

    def specialize(self, expr: Poly) -> Poly:
        """Apply the kind's p-specialization to a G-form polynomial."""
        if self is BracketKind.G:
            return expr
        return expr.substitute("p", self.p_value())


def g_bracket(x: int, qv: Poly = q, pv: Poly = p) -> Poly:
    """[x] for the pair (pv, qv): sum_j qv^j pv^(x-1-j), continued to x < 0.

    ``qv`` and ``pv`` may be any Laurent polynomials for x >= 0; for x < 0
    their product must be a monomial.
    """
    if x < 0:
        return -((pv * qv) ** x) * g_bracket(-x, qv, pv)
    total = ZERO
    for j in range(x):
        total = total + qv ** j * pv ** (x - 1 - j)
    return total


def bracket(x: int, kind=BracketKind.G) -> Poly:
    return BracketKind.parse(kind).specialize(g_bracket(x))


def bracket_quotient(x: int, kind=BracketKind.G) -> Poly:
    """[x] from the quotient definition, by exact division. Independent check path."""
    kind = BracketKind.parse(kind)
    pv = kind.p_value()
    return (q ** x - pv ** x).divexact(q - pv)


def bracket_factorial(k: int, kind=BracketKind.G) -> Poly:
    if k < 0:
        raise ValueError("factorial of a negative integer")
    result = ONE
    for j in range(1, k + 1):
        result = result * bracket(j, kind)
    return result


def g_binomial(l: int, i: int, kind=BracketKind.G) -> Poly:
    """[l]!/([i]![l-i]!); the division is checked to be exact."""
    if not 0 <= i <= l:
        raise ValueError(f"need 0 <= i <= l, got l={l}, i={i}")
    den = bracket_factorial(i, kind) * bracket_factorial(l - i, kind)
    return bracket_factorial(l, kind).divexact(den)


def g_pochhammer(l: int, x_value=ONE, kind=BracketKind.G) -> Poly:
    """(lam; x)^(l) = prod_{j<l} (p^j lam + q^j x)."""
    kind = BracketKind.parse(kind)
    pv = kind.p_value()
    x_value = Poly.coerce(x_value)
    result = ONE
    for j in range(l):
        result = result * (pv ** j * lam + q ** j * x_value)
    return result


def g_binomial_expansion(l: int, x_value=ONE, kind=BracketKind.G) -> Poly:
    """Right-hand side of the G-binomial theorem for (lam; x)^(l)."""
    kind = BracketKind.parse(kind)
    pv = kind.p_value()
    x_value = Poly.coerce(x_value)
    total = ZERO
    for i in range(l + 1):
        total = total + (
            g_binomial(l, i, kind)
            * pv ** (i * (i - 1) // 2)
            * q ** ((l - i) * (l - i - 1) // 2)
            * lam ** i
            * x_value ** (l - i)
        )
    return total


# --------------------------------------------------------------------------
# bracket identities


def _eq5_pm(x):
    lhs = bracket(x, "P")
    rhs = q ** (1 - x) * bracket(x, "M").substitute("q", q ** 2)
    return lhs, rhs


def _eq5_gm(x):
    lhs = bracket(x, "G")
    rhs = p ** (x - 1) * bracket(x, "M").substitute("q", q * p ** -1)
    return lhs, rhs


def _eq5_gp(x):
    # both sides pulled back through the injective map q -> q^2, p -> p^2,
    # which turns sqrt(pq) into pq and sqrt(q/p) into q/p
    lhs = bracket(x, "G").subs({"q": q ** 2, "p": p ** 2})
    rhs = (p * q) ** (x - 1) * bracket(x, "P").substitute("q", q * p ** -1)
    return lhs, rhs


def _shift_m(a, b):
    return bracket(a, "M") - bracket(b, "M"), q ** b * bracket(a - b, "M")


def _g_sub(a, b):
    return bracket(a - b), q ** -b * (bracket(a) - p ** (a - b) * bracket(b))


def _g_add(a, b):
    return bracket(a + b), q ** b * bracket(a) + p ** a * bracket(b)


def _g_neg(b):
    return bracket_quotient(-b), -((p * q) ** -b) * bracket(b)


def _power_sub(k, m):
    lhs = bracket(m).subs({"q": q ** k, "p": p ** k}) * bracket(k)
    return lhs, bracket(k * m)


def _km_expand(k, m):
    rhs = ZERO
    bm = bracket(m)
    for i in range(1, k + 1):
        rhs = rhs + comb(k, i) * (q - p) ** (i - 1) * bm ** i * p ** (m * (k - i))
    return bracket(k * m), rhs


BRACKET_IDENTITIES = {
    "EQ5_PM": (_eq5_pm, ("x",)),
    "EQ5_GM": (_eq5_gm, ("x",)),
    "EQ5_GP": (_eq5_gp, ("x",)),
    "SHIFT_M": (_shift_m, ("a", "b")),
    "G_SUB": (_g_sub, ("a", "b")),
    "G_ADD": (_g_add, ("a", "b")),
    "G_NEG": (_g_neg, ("b",)),
    "POWER_SUB": (_power_sub, ("k", "m")),
    "KM_EXPAND": (_km_expand, ("k", "m")),
}


def check_bracket_identity(name: str, args) -> VerificationReport:
    """Evaluate both sides of a named bracket identity at integer ``args``.

    Passes iff LHS - RHS is the zero polynomial; the difference is kept as
    the witness.
    """
    try:
        fn, arg_names = BRACKET_IDENTITIES[name]
    except KeyError:
        raise UnknownIdentity(name) from None
    args = tuple(args)
    if len(args) != len(arg_names):
        raise ValueError(f"{name} takes {len(arg_names)} arguments {arg_names}, got {args}")
    lhs, rhs = fn(*args)
    witness = lhs - rhs
    return VerificationReport(
        id=name,
        params=dict(zip(arg_names, args)),
        passed=witness.is_zero(),
        witness=witness,
    )
