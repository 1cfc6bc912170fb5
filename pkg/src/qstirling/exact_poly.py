"""Exact multivariate Laurent polynomials over the rationals.

Every scalar in the package lives in the ring Q[q^±1, p^±1, Q^±1, X^±1, lam^±1].
Terms are stored in a dict keyed by a packed exponent vector; the packing
keeps lexicographic order (q most significant), so sorting keys sorts terms
canonically and equality is plain dict equality.

Text format (the contract for CLI output and golden files)::

    -1/2*q^-1*p^2 + 1

Terms ascend in lexicographic exponent order, factors are joined by ``*``,
the coefficient 1 is omitted in front of a monomial and the zero polynomial
renders as ``0``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from numbers import Rational

from . import _kernels
from .errors import DivisionNotExact, NonInvertible

SYMBOLS = ("q", "p", "Q", "X", "lam")
_INDEX = {name: i for i, name in enumerate(SYMBOLS)}
_ALIASES = {"λ": "lam", "lambda": "lam", "L": "lam"}

_WIDTH = 24
_FIELD_BIAS = 1 << (_WIDTH - 1)
_MASK = (1 << _WIDTH) - 1
_NSYM = len(SYMBOLS)
_SHIFTS = tuple(_WIDTH * (_NSYM - 1 - i) for i in range(_NSYM))
ZERO_KEY = sum(_FIELD_BIAS << s for s in _SHIFTS)


def symbol_index(name: str) -> int:
    name = _ALIASES.get(name, name)
    try:
        return _INDEX[name]
    except KeyError:
        raise ValueError(f"unknown symbol {name!r}; expected one of {SYMBOLS}") from None


def pack(exps) -> int:
    key = 0
    for e, s in zip(exps, _SHIFTS):
        if not -_FIELD_BIAS < e < _FIELD_BIAS:
            raise OverflowError(f"exponent {e} out of range")
        key |= (e + _FIELD_BIAS) << s
    return key


def unpack(key: int) -> tuple[int, ...]:
    return tuple(((key >> s) & _MASK) - _FIELD_BIAS for s in _SHIFTS)


def _delta(index: int, e: int) -> int:
    """Key offset that multiplies a term by symbol[index]**e."""
    return e << _SHIFTS[index]


def as_rational(c):
    """Coerce to the canonical coefficient type (int, or Fraction if not integral)."""
    if isinstance(c, bool):
        c = int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        c = Fraction(c)
        return c.numerator if c.denominator == 1 else c
    raise TypeError(f"not an exact rational: {c!r}")


def _render_rational(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


class Poly:
    """Immutable Laurent polynomial with rational coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict[int, object] | None = None):
        # `terms` must already be canonical: packed keys, no zero coefficients
        self._terms = terms if terms is not None else {}
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, c) -> Poly:
        c = as_rational(c)
        return cls({ZERO_KEY: c} if c else {})

    @classmethod
    def monomial(cls, coeff=1, **exps: int) -> Poly:
        c = as_rational(coeff)
        if not c:
            return cls()
        vec = [0] * _NSYM
        for name, e in exps.items():
            vec[symbol_index(name)] = e
        return cls({pack(vec): c})

    @classmethod
    def symbol(cls, name: str) -> Poly:
        return cls.monomial(1, **{_ALIASES.get(name, name): 1})

    @classmethod
    def from_terms(cls, terms) -> Poly:
        """Build from ``{exponent tuple: coeff}`` or an iterable of such pairs."""
        items = terms.items() if isinstance(terms, dict) else terms
        out: dict[int, object] = {}
        for exps, c in items:
            exps = tuple(exps) + (0,) * (_NSYM - len(exps))
            k = pack(exps)
            out[k] = out.get(k, 0) + as_rational(c)
        return cls({k: as_rational(c) for k, c in out.items() if c})

    @staticmethod
    def coerce(value) -> Poly:
        if isinstance(value, Poly):
            return value
        return Poly.constant(value)

    # inspection ---------------------------------------------------------

    def terms(self) -> list[tuple[tuple[int, ...], object]]:
        """Terms in canonical order as ``(exponents, coefficient)`` pairs."""
        return [(unpack(k), self._terms[k]) for k in sorted(self._terms)]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ZERO_KEY in self._terms)

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self._terms.get(ZERO_KEY, 0)

    def exponents(self, name: str) -> set[int]:
        i = symbol_index(name)
        return {unpack(k)[i] for k in self._terms}

    def degree(self, name: str) -> int:
        """Largest exponent of ``name``; raises on the zero polynomial."""
        return max(self.exponents(name))

    def min_degree(self, name: str) -> int:
        return min(self.exponents(name))

    def coefficients(self) -> list:
        return [self._terms[k] for k in sorted(self._terms)]

    # ring operations ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        try:
            return self._terms == Poly.constant(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __neg__(self) -> Poly:
        return Poly({k: -c for k, c in self._terms.items()})

    def __pos__(self) -> Poly:
        return self

    def __add__(self, other) -> Poly:
        if not isinstance(other, (Poly, Rational)):
            return NotImplemented
        other = Poly.coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        return Poly(_kernels.add_terms(self._terms, other._terms, 1))

    __radd__ = __add__

    def __sub__(self, other) -> Poly:
        if not isinstance(other, (Poly, Rational)):
            return NotImplemented
        other = Poly.coerce(other)
        if not other._terms:
            return self
        return Poly(_kernels.add_terms(self._terms, other._terms, -1))

    def __rsub__(self, other) -> Poly:
        return Poly.coerce(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            if not isinstance(other, Rational):
                return NotImplemented
            c = as_rational(other)
            if not c or not self._terms:
                return Poly()
            return Poly(_kernels.scale_terms(self._terms, c, 0))
        if not self._terms or not other._terms:
            return Poly()
        if len(other._terms) == 1:
            (k, c), = other._terms.items()
            return Poly(_kernels.scale_terms(self._terms, c, k - ZERO_KEY))
        if len(self._terms) == 1:
            (k, c), = self._terms.items()
            return Poly(_kernels.scale_terms(other._terms, c, k - ZERO_KEY))
        return Poly(_kernels.mul_terms(self._terms, other._terms, ZERO_KEY))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> Poly:
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if len(self._terms) == 1:
            (k, c), = self._terms.items()
            return Poly({ZERO_KEY + (k - ZERO_KEY) * e: as_rational(Fraction(c) ** e)})
        result = Poly.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> Poly:
        """Inverse of a monomial; only monomials are units in a Laurent ring."""
        if len(self._terms) != 1:
            raise NonInvertible(f"cannot invert {self}")
        (k, c), = self._terms.items()
        return Poly({2 * ZERO_KEY - k: as_rational(1 / Fraction(c))})

    def __truediv__(self, other) -> Poly:
        """Division by a rational scalar or a monomial. See :meth:`divexact`."""
        if isinstance(other, Poly):
            return self * other.inverse()
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division by zero")
        return self * as_rational(1 / Fraction(c))

    def divexact(self, divisor: Poly) -> Poly:
        """Exact quotient; raises DivisionNotExact if ``divisor`` does not divide.

        Lexicographic order on Z^n is a group order, so the lowest term of a
        product is the product of lowest terms.  That bounds the quotient's
        terms from below and makes the long division terminate.
        """
        divisor = Poly.coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if len(divisor._terms) == 1:
            return self / divisor
        if not self._terms:
            return Poly()
        lead_d = max(divisor._terms)
        lead_c = Fraction(divisor._terms[lead_d])
        floor_key = min(self._terms) - min(divisor._terms) + ZERO_KEY
        remainder = dict(self._terms)
        quotient: dict[int, object] = {}
        while remainder:
            lead_r = max(remainder)
            qk = lead_r - lead_d + ZERO_KEY
            if qk < floor_key:
                raise DivisionNotExact(f"{divisor} does not divide {self}")
            qc = as_rational(Fraction(remainder[lead_r]) / lead_c)
            quotient[qk] = qc
            remainder = _kernels.add_terms(
                remainder, _kernels.scale_terms(divisor._terms, qc, qk - ZERO_KEY), -1
            )
        return Poly(quotient)

    # substitution and extraction -----------------------------------------

    def substitute(self, name: str, value) -> Poly:
        """Replace ``name`` by ``value`` everywhere."""
        return self.subs({name: value})

    def subs(self, mapping: dict) -> Poly:
        """Simultaneous substitution ``{symbol: value}``.

        Negative exponents of a substituted symbol need an invertible
        (monomial) value, otherwise NonInvertible is raised.
        """
        if not mapping or not self._terms:
            return self
        plan = [(symbol_index(n), Poly.coerce(v)) for n, v in mapping.items()]
        powers: dict[tuple[int, int], Poly] = {}
        out = Poly()
        for key, c in self._terms.items():
            exps = unpack(key)
            rest = list(exps)
            factor = Poly.constant(c)
            for i, value in plan:
                e = exps[i]
                if e == 0:
                    continue
                rest[i] = 0
                pw = powers.get((i, e))
                if pw is None:
                    pw = value ** e
                    powers[(i, e)] = pw
                factor = factor * pw
            out = out + factor * Poly({pack(rest): 1})
        return out

    def coefficient(self, name: str, exponent: int) -> Poly:
        """Coefficient of ``name**exponent``, a polynomial in the other symbols."""
        i = symbol_index(name)
        shift = _delta(i, exponent)
        out = {}
        for k, c in self._terms.items():
            if unpack(k)[i] == exponent:
                out[k - shift] = c
        return Poly(out)

    def evaluate(self, values: dict):
        """Evaluate at numbers (Fraction, int or float) for every symbol present."""
        idx = {symbol_index(n): v for n, v in values.items()}
        total = 0
        for k, c in self._terms.items():
            term = c
            for i, e in enumerate(unpack(k)):
                if e:
                    if i not in idx:
                        raise ValueError(f"no value given for {SYMBOLS[i]}")
                    term = term * idx[i] ** e
            total = total + term
        return total

    # text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for n, (exps, c) in enumerate(self.terms()):
            factors = []
            for name, e in zip(SYMBOLS, exps):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            if n and c < 0:
                sep, c = " - ", -c
            else:
                sep = " + " if n else ""
            if not factors:
                body = _render_rational(c)
            elif c == 1:
                body = "*".join(factors)
            else:
                body = _render_rational(c) + "*" + "*".join(factors)
            parts.append(sep + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


_FACTOR = re.compile(r"^(?:(\d+)(?:/(\d+))?|([A-Za-zλ]+)(?:\^(-?\d+))?)$")


def parse_poly(text: str) -> Poly:
    """Parse the canonical text format (whitespace-insensitive)."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty polynomial text")
    chunks = []
    start = 0
    for i in range(1, len(s)):
        if s[i] in "+-" and s[i - 1] not in "^*":
            chunks.append(s[start:i])
            start = i
    chunks.append(s[start:])
    total = Poly()
    for chunk in chunks:
        sign = 1
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                sign = -sign
            chunk = chunk[1:]
        if not chunk:
            raise ValueError(f"malformed polynomial text: {text!r}")
        term = Poly.constant(sign)
        for factor in chunk.split("*"):
            m = _FACTOR.match(factor)
            if not m:
                raise ValueError(f"malformed factor {factor!r} in {text!r}")
            num, den, name, exp = m.groups()
            if num is not None:
                term = term * Fraction(int(num), int(den) if den else 1)
            else:
                term = term * Poly.symbol(name) ** (int(exp) if exp else 1)
        total = total + term
    return total


ZERO = Poly()
ONE = Poly.constant(1)
q = Poly.symbol("q")
p = Poly.symbol("p")
Q = Poly.symbol("Q")
X = Poly.symbol("X")
lam = Poly.symbol("lam")


def poly_arith(lhs: Poly, rhs: Poly, op: str) -> Poly:
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    raise ValueError(f"unknown op {op!r}")


# --------------------------------------------------------------------------
# truncated bivariate power series in (s, t)


class PowerSeries2:
    """Power series in ``s`` and ``t`` truncated at total degree ``order``."""

    __slots__ = ("order", "_terms")

    def __init__(self, order: int, terms: dict[tuple[int, int], object] | None = None):
        if order < 0:
            raise ValueError("order must be non-negative")
        self.order = order
        self._terms = {
            (a, b): as_rational(c)
            for (a, b), c in (terms or {}).items()
            if c and a + b <= order
        }

    @classmethod
    def constant(cls, c, order: int) -> PowerSeries2:
        return cls(order, {(0, 0): c})

    @classmethod
    def variable(cls, which: str, order: int) -> PowerSeries2:
        return cls(order, {_unit(which): 1})

    def coefficient(self, a: int, b: int):
        return self._terms.get((a, b), 0)

    def terms(self) -> list[tuple[tuple[int, int], object]]:
        return sorted(self._terms.items())

    def homogeneous(self, degree: int) -> PowerSeries2:
        """The total-degree ``degree`` part."""
        return PowerSeries2(self.order, {k: c for k, c in self._terms.items() if sum(k) == degree})

    def truncate(self, order: int) -> PowerSeries2:
        return PowerSeries2(min(order, self.order), self._terms)

    def _coerce(self, other) -> PowerSeries2:
        if isinstance(other, PowerSeries2):
            return other
        return PowerSeries2.constant(other, self.order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries2):
            other = self._coerce(other)
        return self.order == other.order and self._terms == other._terms

    def __hash__(self):
        return hash((self.order, frozenset(self._terms.items())))

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other) -> PowerSeries2:
        other = self._coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return PowerSeries2(min(self.order, other.order), out)

    __radd__ = __add__

    def __neg__(self) -> PowerSeries2:
        return PowerSeries2(self.order, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other) -> PowerSeries2:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> PowerSeries2:
        return self._coerce(other) - self

    def __mul__(self, other) -> PowerSeries2:
        if not isinstance(other, PowerSeries2):
            c = as_rational(other)
            return PowerSeries2(self.order, {k: v * c for k, v in self._terms.items()})
        order = min(self.order, other.order)
        out: dict[tuple[int, int], object] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                if a1 + b1 + a2 + b2 <= order:
                    k = (a1 + a2, b1 + b2)
                    out[k] = out.get(k, 0) + c1 * c2
        return PowerSeries2(order, out)

    __rmul__ = __mul__

    def at_t_equals_minus_s(self) -> PowerSeries2:
        """Restrict to the line t = -s; the result has only pure ``s`` terms."""
        out: dict[tuple[int, int], object] = {}
        for (a, b), c in self._terms.items():
            k = (a + b, 0)
            out[k] = out.get(k, 0) + (-c if b % 2 else c)
        return PowerSeries2(self.order, out)

    def to_json(self) -> dict[str, str]:
        return {f"s^{a} t^{b}": _render_rational(c) for (a, b), c in self.terms()}

    @classmethod
    def from_json(cls, data: dict[str, str], order: int) -> PowerSeries2:
        out = {}
        for key, value in data.items():
            sa, tb = key.split()
            out[(int(sa[2:]), int(tb[2:]))] = Fraction(value)
        return cls(order, out)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for n, ((a, b), c) in enumerate(self.terms()):
            factors = []
            for name, e in (("s", a), ("t", b)):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            if n and c < 0:
                sep, c = " - ", -c
            else:
                sep = " + " if n else ""
            if not factors:
                body = _render_rational(c)
            elif c == 1:
                body = "*".join(factors)
            else:
                body = _render_rational(c) + "*" + "*".join(factors)
            parts.append(sep + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"PowerSeries2(order={self.order}, {str(self)!r})"


def _unit(which: str) -> tuple[int, int]:
    if which == "s":
        return (1, 0)
    if which == "t":
        return (0, 1)
    raise ValueError(f"series variable must be 's' or 't', got {which!r}")


def series_exp_linear(c, which: str, order: int) -> PowerSeries2:
    """Truncated ``exp(c*s)`` or ``exp(c*t)``."""
    if order < 0:
        raise ValueError("order must be non-negative")
    c = Fraction(as_rational(c))
    a, b = _unit(which)
    return PowerSeries2(order, {(a * j, b * j): c ** j / factorial(j) for j in range(order + 1)})
