"""Symbolic layer for deformed bosons.

Coefficients that depend on the number operator are finite sums
``sum c * q^(alpha*n) * p^(beta*n)`` (:class:`NExpExpr`).  With a symbolic
commutator parameter Q the coefficients carry a common denominator
``den_base ** den_power``; for the usual choice Q = q it cancels.

Conventions follow the normal-ordered form

    [n]^m = sum_k (a+)^k  S(m, k, n)  a^k

with the coefficient placed *between* the operator strings, and the inverse

    (a+)^k a^k = sum_m s(k, m, n) [n]^m

with the coefficient on the left.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache

from .deformed_numbers import BracketKind, bracket, g_bracket
from .errors import DivisionNotExact, FactorizationFailed
from .exact_poly import ONE, ZERO, Poly, Q, p, parse_poly, q
from .report import VerificationReport, merge
from .stirling import F, build_table


class QChoice(enum.Enum):
    SYMBOLIC = "symbolic_Q"
    Q_EQUALS_Q = "Q_equals_q"
    Q_EQUALS_P = "Q_equals_p"
    Q_EQUALS_ONE = "Q_equals_one"

    @classmethod
    def parse(cls, value) -> QChoice:
        if isinstance(value, cls):
            return value
        short = {"symbolic": cls.SYMBOLIC, "Q": cls.SYMBOLIC, "q": cls.Q_EQUALS_Q, "p": cls.Q_EQUALS_P, "1": cls.Q_EQUALS_ONE}
        if value in short:
            return short[value]
        return cls(value)

    def value_for(self, kind: BracketKind) -> Poly:
        """The commutator parameter after the kind's p-specialization."""
        if self is QChoice.SYMBOLIC:
            return Q
        if self is QChoice.Q_EQUALS_Q:
            return q
        if self is QChoice.Q_EQUALS_P:
            return kind.p_value()
        return ONE


def _base_of(name: str, value: Poly) -> tuple[int, int]:
    """(a, b) such that ``value == q^a p^b``, for substituting an exponential base."""
    if not value.is_monomial():
        raise ValueError(f"cannot substitute {name} -> {value} inside {name}^n")
    (exps, c), = value.terms()
    if c != 1 or any(exps[2:]):
        raise ValueError(f"cannot substitute {name} -> {value} inside {name}^n")
    return exps[0], exps[1]


class NExpExpr:
    """Immutable ``sum c(q,p,Q) q^(alpha n) p^(beta n)``, optionally over ``den_base^den_power``."""

    __slots__ = ("_terms", "den_base", "den_power", "_values")

    def __init__(self, terms=None, den_base: Poly = ONE, den_power: int = 0, *, normalize=True):
        self._terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}
        self.den_base = den_base if den_power else ONE
        self.den_power = den_power
        self._values = {}
        if normalize and den_power:
            self._cancel()

    def _cancel(self):
        while self.den_power:
            try:
                reduced = {k: c.divexact(self.den_base) for k, c in self._terms.items()}
            except DivisionNotExact:
                return
            self._terms = reduced
            self.den_power -= 1
        self.den_base = ONE

    # construction -----------------------------------------------------------

    @classmethod
    def constant(cls, c) -> NExpExpr:
        return cls({(0, 0): Poly.coerce(c)})

    @classmethod
    def exp(cls, alpha: int = 0, beta: int = 0, coeff=ONE) -> NExpExpr:
        return cls({(alpha, beta): Poly.coerce(coeff)})

    # inspection ------------------------------------------------------------------

    def terms(self) -> list[tuple[Poly, int, int]]:
        return [(self._terms[k], k[0], k[1]) for k in sorted(self._terms)]

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return self.den_power == 0 and set(self._terms) <= {(0, 0)}

    def constant_value(self) -> Poly:
        if not self.is_constant():
            raise ValueError(f"{self} depends on n")
        return self._terms.get((0, 0), ZERO)

    # arithmetic -----------------------------------------------------------------

    def _aligned(self, other: NExpExpr):
        if not other.den_power or not self.den_power:
            base = self.den_base if self.den_power else other.den_base
        elif self.den_base != other.den_base:
            raise ValueError("cannot combine expressions with different denominators")
        else:
            base = self.den_base
        power = max(self.den_power, other.den_power)
        a = {k: c * base ** (power - self.den_power) for k, c in self._terms.items()}
        b = {k: c * base ** (power - other.den_power) for k, c in other._terms.items()}
        return a, b, base, power

    @staticmethod
    def _coerce(other) -> NExpExpr:
        if isinstance(other, NExpExpr):
            return other
        return NExpExpr.constant(other)

    def __add__(self, other) -> NExpExpr:
        a, b, base, power = self._aligned(self._coerce(other))
        for k, c in b.items():
            a[k] = a.get(k, ZERO) + c
        return NExpExpr(a, base, power)

    __radd__ = __add__

    def __neg__(self) -> NExpExpr:
        return NExpExpr({k: -c for k, c in self._terms.items()}, self.den_base, self.den_power, normalize=False)

    def __sub__(self, other) -> NExpExpr:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> NExpExpr:
        return self._coerce(other) - self

    def __mul__(self, other) -> NExpExpr:
        if not isinstance(other, NExpExpr):
            c = Poly.coerce(other)
            return NExpExpr({k: v * c for k, v in self._terms.items()}, self.den_base, self.den_power)
        if self.den_power and other.den_power and self.den_base != other.den_base:
            raise ValueError("cannot combine expressions with different denominators")
        out: dict[tuple[int, int], Poly] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (a1 + a2, b1 + b2)
                out[k] = out.get(k, ZERO) + c1 * c2
        base = self.den_base if self.den_power else other.den_base
        return NExpExpr(out, base, self.den_power + other.den_power)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, NExpExpr):
            try:
                other = NExpExpr.constant(other)
            except TypeError:
                return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(frozenset((k, c) for k, c in self._terms.items()))

    # n-dependence ----------------------------------------------------------------

    def n_shift(self, delta: int) -> NExpExpr:
        """Substitute n -> n + delta."""
        return NExpExpr(
            {(a, b): c * q ** (a * delta) * p ** (b * delta) for (a, b), c in self._terms.items()},
            self.den_base,
            self.den_power,
            normalize=False,
        )

    def evaluate(self, n: int) -> Poly:
        """Value at the integer n; the denominator must divide exactly."""
        if n in self._values:
            return self._values[n]
        total = ZERO
        for (a, b), c in self._terms.items():
            total = total + c * q ** (a * n) * p ** (b * n)
        if self.den_power:
            total = total.divexact(self.den_base ** self.den_power)
        self._values[n] = total
        return total

    def subs(self, mapping: dict) -> NExpExpr:
        """Substitute symbols in coefficients and, for q and p, in the exponential bases."""
        bases = {"q": (1, 0), "p": (0, 1)}
        for name in ("q", "p"):
            if name in mapping:
                bases[name] = _base_of(name, Poly.coerce(mapping[name]))
        out: dict[tuple[int, int], Poly] = {}
        for (a, b), c in self._terms.items():
            qa, qb = bases["q"]
            pa, pb = bases["p"]
            k = (a * qa + b * pa, a * qb + b * pb)
            out[k] = out.get(k, ZERO) + c.subs(mapping)
        return NExpExpr(out, self.den_base.subs(mapping), self.den_power)

    def specialize(self, kind: BracketKind) -> NExpExpr:
        if kind is BracketKind.G:
            return self
        return self.subs({"p": kind.p_value()})

    # text ---------------------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for c, a, b in self.terms():
            factors = []
            if a:
                factors.append(f"q^({a}*n)")
            if b:
                factors.append(f"p^({b}*n)")
            body = str(c)
            if factors and len(c) > 1:
                body = f"({body})"
            parts.append(" * ".join(factors + [body]))
        text = " + ".join(parts)
        if self.den_power:
            text = f"[{text}] / ({self.den_base})^{self.den_power}"
        return text

    def __repr__(self) -> str:
        return f"NExpExpr({str(self)!r})"

    def to_json(self) -> dict:
        out = {"terms": [{"coeff": str(c), "alpha": a, "beta": b} for c, a, b in self.terms()]}
        if self.den_power:
            out["den_base"] = str(self.den_base)
            out["den_power"] = self.den_power
        return out

    @classmethod
    def from_json(cls, data: dict) -> NExpExpr:
        terms = {(t["alpha"], t["beta"]): parse_poly(t["coeff"]) for t in data["terms"]}
        if data.get("den_power"):
            return cls(terms, parse_poly(data["den_base"]), data["den_power"], normalize=False)
        return cls(terms)


# --------------------------------------------------------------------------
# commutator functions


def big_phi(k: int, q_choice=QChoice.Q_EQUALS_Q, kind=BracketKind.G) -> NExpExpr:
    """Phi(k, n) in [a^k, a+]_{Q^k} = Phi(k, n) a^(k-1).

    Built in the general two-parameter form with a symbolic Q, then Q and p
    are specialized.  For x >= 0, (q - Q)[k]_{G(Q,q)} = q^k - Q^k is kept as
    a polynomial so only the overall 1/(q - p) is a true denominator.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    kind = BracketKind.parse(kind)
    q_choice = QChoice.parse(q_choice)
    general = NExpExpr(
        {
            (1, 0): (q - Q) * g_bracket(k, qv=q, pv=Q),
            (0, 1): (Q - p) * g_bracket(k, qv=p, pv=Q),
        },
        q - p,
        1,
        normalize=False,
    )
    if q_choice is QChoice.Q_EQUALS_P:
        general = general.subs({"Q": p})
    elif q_choice is not QChoice.SYMBOLIC:
        general = general.subs({"Q": q_choice.value_for(kind)})
    return general.specialize(kind)


def phi(q_choice=QChoice.Q_EQUALS_Q, kind=BracketKind.G) -> NExpExpr:
    return big_phi(1, q_choice, kind)


def n_shift(e: NExpExpr, delta: int) -> NExpExpr:
    return e.n_shift(delta)


# --------------------------------------------------------------------------
# operator-valued Stirling numbers


@lru_cache(maxsize=None)
def _second_kind_rows(m_max: int, q_choice: QChoice, kind: BracketKind) -> tuple:
    qv = q_choice.value_for(kind)
    phis = {k: big_phi(k, q_choice, kind) for k in range(1, m_max + 1)}
    zero = NExpExpr()
    rows = [(NExpExpr.constant(ONE),)]
    for m in range(1, m_max):
        prev = rows[-1]
        row = []
        for k in range(1, m + 2):
            left = prev[k - 2] if k >= 2 else zero
            same = prev[k - 1] if k <= m else zero
            row.append(qv ** (k - 1) * left.n_shift(1) + same * phis[k])
        rows.append(tuple(row))
    return tuple(rows)


def shat_second_kind(m: int, k: int, q_choice=QChoice.Q_EQUALS_Q, kind=BracketKind.G) -> NExpExpr:
    """S(m, k, n) from the normal-ordering recurrence, zero outside 1 <= k <= m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if not 1 <= k <= m:
        return NExpExpr()
    rows = _second_kind_rows(m, QChoice.parse(q_choice), BracketKind.parse(kind))
    return rows[m - 1][k - 1]


@lru_cache(maxsize=None)
def _first_kind_rows(k_max: int) -> tuple:
    zero = NExpExpr()
    rows = [(NExpExpr.constant(ONE),)]
    for k in range(1, k_max):
        prev = rows[-1]
        # p^(n-k) [k]_G
        damp = NExpExpr.exp(0, 1, p ** -k * bracket(k))
        row = []
        for m in range(1, k + 2):
            left = prev[m - 2] if m >= 2 else zero
            same = prev[m - 1] if m <= k else zero
            row.append((left - damp * same) * q ** -k)
        rows.append(tuple(row))
    return tuple(rows)


def shat_first_kind(k: int, m: int, kind=BracketKind.G) -> NExpExpr:
    """s(k, m, n) from its recurrence (derived for Q = q), specialized to ``kind``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 1 <= m <= k:
        return NExpExpr()
    return _first_kind_rows(k)[k - 1][m - 1].specialize(BracketKind.parse(kind))


def falling_product_operator(k: int) -> dict[int, NExpExpr]:
    """Expand prod_{i<k} [n - i]_G in powers of X = [n]_G.

    Each factor is rewritten as q^-i (X - p^(n-i) [i]_G).  The coefficient of
    X^m is an independent route to s_G(k, m, n).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    poly: dict[int, NExpExpr] = {0: NExpExpr.constant(ONE)}
    for i in range(k):
        lead = q ** -i
        tail = NExpExpr.exp(0, 1, -(q ** -i) * p ** -i * bracket(i))
        nxt: dict[int, NExpExpr] = {}
        for d, c in poly.items():
            nxt[d + 1] = nxt.get(d + 1, NExpExpr()) + c * lead
            nxt[d] = nxt.get(d, NExpExpr()) + c * tail
        poly = {d: c for d, c in nxt.items() if not c.is_zero()}
    return poly


def extract_reduced_factor(e: NExpExpr, row: int, col: int, which: str = "second_kind") -> Poly:
    """Strip the q^(+-k(k-1)/2) p^(+-(m-k) n) factor and return the reduced scalar.

    ``row, col`` are the entry's indices in table order: (m, k) for
    S(m, k, n) -> Xi(m, k), and (k, m) for s(k, m, n) -> xi(k, m).
    """
    if which == "second_kind":
        beta, qpow = row - col, col * (col - 1) // 2
    elif which == "first_kind":
        beta, qpow = row - col, -(row * (row - 1) // 2)
    else:
        raise ValueError(f"which must be 'second_kind' or 'first_kind', got {which!r}")
    terms = e.terms()
    if e.den_power or len(terms) != 1:
        raise FactorizationFailed(f"expected a single exponential term, got {e}")
    c, a, b = terms[0]
    if a != 0 or b != beta:
        raise FactorizationFailed(f"expected p^({beta}*n), got q^({a}*n) p^({b}*n)")
    return c * q ** -qpow


# --------------------------------------------------------------------------
# normal forms


@dataclass
class NormalForm:
    power_m: int
    kind: BracketKind
    q_choice: QChoice
    coeffs: dict[int, NExpExpr]
    placement: str = "between"

    def to_text(self) -> str:
        return " ; ".join(f"k={k}: {self.coeffs[k]}" for k in sorted(self.coeffs))

    def to_dict(self) -> dict:
        return {
            "m": self.power_m,
            "kind": self.kind.value,
            "Q": self.q_choice.value,
            "placement": self.placement,
            "coeffs": {str(k): self.coeffs[k].to_json() for k in sorted(self.coeffs)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> NormalForm:
        d = json.loads(text)
        return cls(
            d["m"],
            BracketKind(d["kind"]),
            QChoice(d.get("Q", QChoice.Q_EQUALS_Q.value)),
            {int(k): NExpExpr.from_json(v) for k, v in d["coeffs"].items()},
            d.get("placement", "between"),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, NormalForm):
            return NotImplemented
        return (
            (self.power_m, self.kind, self.q_choice, self.placement)
            == (other.power_m, other.kind, other.q_choice, other.placement)
            and self.coeffs.keys() == other.coeffs.keys()
            and all(self.coeffs[k] == other.coeffs[k] for k in self.coeffs)
        )


@dataclass
class InverseForm:
    order_k: int
    kind: BracketKind
    coeffs: dict[int, NExpExpr] = field(default_factory=dict)

    def to_text(self) -> str:
        return " ; ".join(f"m={m}: {self.coeffs[m]}" for m in sorted(self.coeffs))

    def to_dict(self) -> dict:
        return {
            "k": self.order_k,
            "kind": self.kind.value,
            "coeffs": {str(m): self.coeffs[m].to_json() for m in sorted(self.coeffs)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> InverseForm:
        d = json.loads(text)
        return cls(d["k"], BracketKind(d["kind"]), {int(m): NExpExpr.from_json(v) for m, v in d["coeffs"].items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, InverseForm):
            return NotImplemented
        return (
            (self.order_k, self.kind) == (other.order_k, other.kind)
            and self.coeffs.keys() == other.coeffs.keys()
            and all(self.coeffs[m] == other.coeffs[m] for m in self.coeffs)
        )


def normal_order_power(m: int, kind=BracketKind.G, q_choice=QChoice.Q_EQUALS_Q) -> NormalForm:
    kind, q_choice = BracketKind.parse(kind), QChoice.parse(q_choice)
    if m < 1:
        raise ValueError("m must be >= 1")
    coeffs = {k: shat_second_kind(m, k, q_choice, kind) for k in range(1, m + 1)}
    return NormalForm(m, kind, q_choice, coeffs)


def inverse_normal_form(k: int, kind=BracketKind.G) -> InverseForm:
    kind = BracketKind.parse(kind)
    if k < 1:
        raise ValueError("k must be >= 1")
    return InverseForm(k, kind, {m: shat_first_kind(k, m, kind) for m in range(1, k + 1)})


def reorder_right(nf: NormalForm) -> NormalForm:
    """Move each coefficient to the right of a^k: S(m, k, n) -> S(m, k, n - k).

    With Q = q the shifted coefficient must equal pv^(k(k-m)) S(m, k, n),
    where pv is the kind's value of p; for G-type the reduced factor of the
    shifted coefficient must also match Xi'(m, k) = p^(k(k-m)) Xi(m, k).
    """
    if nf.placement != "between":
        raise ValueError("normal form is already right-placed")
    m = nf.power_m
    shifted = {k: c.n_shift(-k) for k, c in nf.coeffs.items()}
    if nf.q_choice is QChoice.Q_EQUALS_Q:
        pv = nf.kind.p_value()
        for k, c in nf.coeffs.items():
            if shifted[k] != c * pv ** (k * (k - m)):
                raise FactorizationFailed(f"shift factor fails at m={m}, k={k}")
        if nf.kind is BracketKind.G:
            xi_prime = build_table(F.REDUCED_SECOND_XIPRIME, m)
            for k, c in shifted.items():
                if extract_reduced_factor(c, m, k) != xi_prime[m, k]:
                    raise FactorizationFailed(f"Xi'({m},{k}) mismatch")
    return NormalForm(m, nf.kind, nf.q_choice, shifted, placement="right")


def reduced_tables(n_max: int) -> tuple[dict, dict]:
    """Xi' and xi read off the operator-valued numbers (not the scalar recurrences)."""
    xi_prime, xi = {}, {}
    for m in range(1, n_max + 1):
        right = reorder_right(normal_order_power(m, BracketKind.G))
        for k, c in right.coeffs.items():
            xi_prime[m, k] = extract_reduced_factor(c, m, k)
    for k in range(1, n_max + 1):
        for m in range(1, k + 1):
            xi[k, m] = extract_reduced_factor(shat_first_kind(k, m), k, m, which="first_kind")
    return xi_prime, xi


def verify_biorthogonality(n_max: int) -> VerificationReport:
    """Xi' and xi, taken from the operator-valued numbers, are mutually inverse."""
    xi_prime, xi = reduced_tables(n_max)
    reports = []
    for i in range(1, n_max + 1):
        for j in range(1, n_max + 1):
            delta = ONE if i == j else ZERO
            a = sum((xi.get((i, m), ZERO) * xi_prime.get((m, j), ZERO) for m in range(1, n_max + 1)), ZERO) - delta
            b = sum((xi_prime.get((i, k), ZERO) * xi.get((k, j), ZERO) for k in range(1, n_max + 1)), ZERO) - delta
            reports.append(VerificationReport("xi*XiPrime", {"k": i, "k'": j}, a.is_zero(), witness=a))
            reports.append(VerificationReport("XiPrime*xi", {"m": i, "m'": j}, b.is_zero(), witness=b))
    return merge("biorthogonality", reports, params={"n_max": n_max})


def verify_reduced_factors(m_max: int) -> VerificationReport:
    """Both operator-valued families peel down to the scalar Xi and xi tables."""
    Xi = build_table(F.REDUCED_SECOND_XI, m_max)
    xi = build_table(F.REDUCED_FIRST_XI, m_max)
    reports = []
    for r in range(1, m_max + 1):
        for c in range(1, r + 1):
            for which, op, table in (
                ("second_kind", shat_second_kind(r, c), Xi),
                ("first_kind", shat_first_kind(r, c), xi),
            ):
                try:
                    d = extract_reduced_factor(op, r, c, which) - table[r, c]
                except FactorizationFailed as exc:
                    reports.append(
                        VerificationReport(which, {"row": r, "col": c}, False, counterexample={"error": str(exc)})
                    )
                    continue
                reports.append(VerificationReport(which, {"row": r, "col": c}, d.is_zero(), witness=d))
    return merge("reduced_factors", reports, params={"m_max": m_max})


def check_q_limit_consistency(m_max: int) -> VerificationReport:
    """Symbolic-Q tables specialized at Q = q equal the Q = q tables."""
    reports = []
    for kind in BracketKind:
        for k in range(1, m_max + 1):
            d = big_phi(k, QChoice.SYMBOLIC, kind).subs({"Q": q}) - big_phi(k, QChoice.Q_EQUALS_Q, kind)
            reports.append(VerificationReport("big_phi", {"k": k, "kind": kind}, d.is_zero()))
        for m in range(1, m_max + 1):
            for k in range(1, m + 1):
                d = shat_second_kind(m, k, QChoice.SYMBOLIC, kind).subs({"Q": q}) - shat_second_kind(m, k, QChoice.Q_EQUALS_Q, kind)
                reports.append(VerificationReport("shat", {"m": m, "k": k, "kind": kind}, d.is_zero()))
    return merge("symbolic_Q_consistency", reports, params={"m_max": m_max})


def falling_product_inverse_check(k_max: int) -> VerificationReport:
    """The recurrence for s(k, m, n) agrees with the direct product expansion."""
    reports = []
    for k in range(1, k_max + 1):
        expansion = falling_product_operator(k)
        for m in range(1, k + 1):
            d = expansion.get(m, NExpExpr()) - shat_first_kind(k, m)
            reports.append(VerificationReport("entry", {"k": k, "m": m}, d.is_zero()))
    return merge("first_kind_two_paths", reports, params={"k_max": k_max})


__all__ = [
    "QChoice",
    "NExpExpr",
    "NormalForm",
    "InverseForm",
    "phi",
    "big_phi",
    "n_shift",
    "shat_second_kind",
    "shat_first_kind",
    "falling_product_operator",
    "extract_reduced_factor",
    "normal_order_power",
    "inverse_normal_form",
    "reorder_right",
    "reduced_tables",
    "verify_biorthogonality",
    "verify_reduced_factors",
    "check_q_limit_consistency",
    "falling_product_inverse_check",
]
