"""Scalar Stirling families built by their recurrences.

Tables are 1-based and triangular; every entry outside 1 <= col <= row is
zero.  First-kind tables are indexed (k, m) and second-kind tables (m, k),
matching the order in which each family's recurrence advances.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from dataclasses import dataclass

from .deformed_numbers import bracket
from .errors import MismatchedTables
from .exact_poly import ONE, X, ZERO, Poly, p, parse_poly, q
from .report import VerificationReport, merge


class StirlingFamily(enum.Enum):
    CLASSICAL_FIRST = "classical_first"
    CLASSICAL_SECOND = "classical_second"
    Q_FIRST = "q_first"
    Q_SECOND = "q_second"
    TILDE_FIRST = "tilde_first"
    TILDE_SECOND = "tilde_second"
    WACHS_WHITE_SECOND = "wachs_white_second"
    REDUCED_SECOND_XI = "reduced_second_Xi"
    REDUCED_FIRST_XI = "reduced_first_xi"
    REDUCED_SECOND_XIPRIME = "reduced_second_XiPrime"

    @classmethod
    def parse(cls, value) -> StirlingFamily:
        if isinstance(value, cls):
            return value
        for member in cls:
            if member.value == value:
                return member
        raise ValueError(f"unknown Stirling family {value!r}")

    @property
    def first_kind(self) -> bool:
        return self.value.endswith("first") or self is StirlingFamily.REDUCED_FIRST_XI


F = StirlingFamily

# matched (first kind, second kind) pairs that obey the duality relations
DUAL_PAIRS = {
    (F.CLASSICAL_FIRST, F.CLASSICAL_SECOND),
    (F.Q_FIRST, F.Q_SECOND),
    (F.TILDE_FIRST, F.TILDE_SECOND),
    (F.REDUCED_FIRST_XI, F.REDUCED_SECOND_XIPRIME),
}


@dataclass(frozen=True)
class StirlingTable:
    family: StirlingFamily
    n_max: int
    entries: tuple[tuple[Poly, ...], ...]

    def __getitem__(self, index: tuple[int, int]) -> Poly:
        r, c = index
        if 1 <= c <= r <= self.n_max:
            return self.entries[r - 1][c - 1]
        if r > self.n_max:
            raise IndexError(f"row {r} beyond n_max={self.n_max}")
        return ZERO

    def rows(self):
        for r in range(1, self.n_max + 1):
            for c in range(1, r + 1):
                yield r, c, self[r, c]

    def map(self, fn, family=None) -> StirlingTable:
        return StirlingTable(
            family or self.family,
            self.n_max,
            tuple(tuple(fn(e) for e in row) for row in self.entries),
        )

    def specialize(self, **values) -> StirlingTable:
        return self.map(lambda e: e.subs(values))

    # serialization ---------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {
                "family": self.family.value,
                "n_max": self.n_max,
                "entries": [[str(e) for e in row] for row in self.entries],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> StirlingTable:
        data = json.loads(text)
        return cls(
            F.parse(data["family"]),
            data["n_max"],
            tuple(tuple(parse_poly(e) for e in row) for row in data["entries"]),
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for r, c, e in self.rows():
            writer.writerow([r, c, str(e)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, family) -> StirlingTable:
        cells = {}
        for r, c, e in csv.reader(io.StringIO(text)):
            cells[int(r), int(c)] = parse_poly(e)
        n_max = max(r for r, _ in cells)
        return cls(
            F.parse(family),
            n_max,
            tuple(tuple(cells[r, c] for c in range(1, r + 1)) for r in range(1, n_max + 1)),
        )

    def to_text(self) -> str:
        return "\n".join(f"({r},{c}) {e}" for r, c, e in self.rows()) + "\n"


def _step(family: StirlingFamily, r: int, c: int, left: Poly, same: Poly) -> Poly:
    """Entry (r+1, c) from the row-r entries (r, c-1) -> left and (r, c) -> same."""
    if family is F.CLASSICAL_FIRST:
        return left - r * same
    if family is F.CLASSICAL_SECOND:
        return left + c * same
    if family is F.Q_FIRST:
        return q ** -r * (left - bracket(r, "M") * same)
    if family is F.Q_SECOND:
        return q ** (c - 1) * left + bracket(c, "M") * same
    if family is F.TILDE_FIRST:
        return left - bracket(r, "M") * same
    if family is F.TILDE_SECOND:
        return left + bracket(c, "M") * same
    if family is F.WACHS_WHITE_SECOND:
        return p ** (c - 1) * left + bracket(c, "G") * same
    if family is F.REDUCED_SECOND_XI:
        return p ** (r - c + 1) * left + bracket(c, "G") * same
    if family is F.REDUCED_FIRST_XI:
        return left - p ** -r * bracket(r, "G") * same
    raise ValueError(f"{family} has no direct recurrence")


def build_table(family, n_max: int) -> StirlingTable:
    family = F.parse(family)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if family is F.REDUCED_SECOND_XIPRIME:
        xi = build_table(F.REDUCED_SECOND_XI, n_max)
        rows = tuple(
            tuple(p ** (c * (c - r)) * xi[r, c] for c in range(1, r + 1))
            for r in range(1, n_max + 1)
        )
        return StirlingTable(family, n_max, rows)
    rows = [(ONE,)]
    for r in range(1, n_max):
        prev = rows[-1]

        def at(c, prev=prev):
            return prev[c - 1] if 1 <= c <= r else ZERO

        rows.append(tuple(_step(family, r, c, at(c - 1), at(c)) for c in range(1, r + 2)))
    return StirlingTable(family, n_max, tuple(rows))


def to_classical(table: StirlingTable) -> StirlingTable:
    """Specialize q = p = 1 and relabel with the classical family of the same kind."""
    fam = F.CLASSICAL_FIRST if table.family.first_kind else F.CLASSICAL_SECOND
    return table.map(lambda e: e.subs({"q": 1, "p": 1}), family=fam)


# --------------------------------------------------------------------------
# defining relations


def falling_product_expand(family: str, k: int) -> Poly:
    """Expand a descending product of order ``k`` as a polynomial in X.

    ``classical``: prod (X - i), X standing for x.
    ``M_bracket_diff``: prod (X - [i]_M), X standing for [x]_M.
    ``M_shifted``: prod [x - i]_M with each factor rewritten as
    q^-i (X - [i]_M).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    result = ONE
    for i in range(k):
        if family == "classical":
            factor = X - i
        elif family == "M_bracket_diff":
            factor = X - bracket(i, "M")
        elif family == "M_shifted":
            factor = q ** -i * (X - bracket(i, "M"))
        else:
            raise ValueError(f"unknown falling-product family {family!r}")
        result = result * factor
    return result


_RELATION_FAMILIES = {
    "classical": ("classical", F.CLASSICAL_FIRST, F.CLASSICAL_SECOND),
    "q": ("M_shifted", F.Q_FIRST, F.Q_SECOND),
    "tilde": ("M_bracket_diff", F.TILDE_FIRST, F.TILDE_SECOND),
}


def verify_defining_relations(family: str, n_max: int) -> VerificationReport:
    """Check a family pair against its defining expansions in X.

    First kind: the expanded falling product of order k has coefficients
    s(k, m).  Second kind: X^m = sum_k S(m, k) * (falling product of order k).
    """
    try:
        product_family, first, second = _RELATION_FAMILIES[family]
    except KeyError:
        raise ValueError(f"no defining relations for family {family!r}") from None
    s_tab = build_table(first, n_max)
    S_tab = build_table(second, n_max)
    products = {k: falling_product_expand(product_family, k) for k in range(1, n_max + 1)}
    reports = []
    for k, prod in products.items():
        expected = sum((s_tab[k, m] * X ** m for m in range(1, k + 1)), ZERO)
        reports.append(
            VerificationReport("first_kind_expansion", {"k": k}, (prod - expected).is_zero(), witness=prod - expected)
        )
    for m in range(1, n_max + 1):
        rhs = sum((S_tab[m, k] * products[k] for k in range(1, m + 1)), ZERO)
        residual = X ** m - rhs
        reports.append(VerificationReport("second_kind_inversion", {"m": m}, residual.is_zero(), witness=residual))
    return merge("defining_relations", reports, params={"family": family, "n_max": n_max})


def verify_duality(first: StirlingTable, second: StirlingTable) -> VerificationReport:
    """sum_m s(k,m) S(m,k') = delta(k,k') and sum_k S(m,k) s(k,m') = delta(m,m')."""
    if first.n_max != second.n_max:
        raise MismatchedTables(f"n_max differs: {first.n_max} vs {second.n_max}")
    if (first.family, second.family) not in DUAL_PAIRS:
        raise MismatchedTables(f"{first.family.value} and {second.family.value} are not a dual pair")
    n = first.n_max
    reports = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            delta = ONE if i == j else ZERO
            left = sum((first[i, m] * second[m, j] for m in range(1, n + 1)), ZERO) - delta
            right = sum((second[i, k] * first[k, j] for k in range(1, n + 1)), ZERO) - delta
            reports.append(VerificationReport("s*S", {"k": i, "k'": j}, left.is_zero(), witness=left))
            reports.append(VerificationReport("S*s", {"m": i, "m'": j}, right.is_zero(), witness=right))
    return merge(
        "duality",
        reports,
        params={"first": first.family.value, "second": second.family.value, "n_max": n},
    )


def check_tilde_relation(n_max: int) -> VerificationReport:
    """Tilde tables are the q-tables rescaled by q^(+-k(k-1)/2)."""
    s_q, S_q = build_table(F.Q_FIRST, n_max), build_table(F.Q_SECOND, n_max)
    s_t, S_t = build_table(F.TILDE_FIRST, n_max), build_table(F.TILDE_SECOND, n_max)
    reports = []
    for r, c, _ in s_q.rows():
        k = r
        d1 = s_t[r, c] - q ** (k * (k - 1) // 2) * s_q[r, c]
        reports.append(VerificationReport("first", {"k": r, "m": c}, d1.is_zero(), witness=d1))
        k = c
        d2 = S_t[r, c] - q ** (-k * (k - 1) // 2) * S_q[r, c]
        reports.append(VerificationReport("second", {"m": r, "k": c}, d2.is_zero(), witness=d2))
    return merge("tilde_relation", reports, params={"n_max": n_max})


def check_wachs_white_reduction(n_max: int) -> VerificationReport:
    ww = build_table(F.WACHS_WHITE_SECOND, n_max).specialize(p=1)
    tilde = build_table(F.TILDE_SECOND, n_max)
    reports = [
        VerificationReport("entry", {"m": r, "k": c}, (e - tilde[r, c]).is_zero(), witness=e - tilde[r, c])
        for r, c, e in ww.rows()
    ]
    return merge("wachs_white_reduction", reports, params={"n_max": n_max})


# --------------------------------------------------------------------------
# classical limits


def set_partitions(n: int):
    """Yield restricted growth strings of length n; block count is max + 1."""
    if n == 0:
        yield ()
        return

    def grow(prefix, top):
        if len(prefix) == n:
            yield prefix
            return
        for b in range(top + 2):
            yield from grow(prefix + (b,), max(top, b))

    yield from grow((0,), 0)


def count_set_partitions(n: int, k: int) -> int:
    return sum(1 for rgs in set_partitions(n) if (max(rgs) + 1 if rgs else 0) == k)


def verify_classical_limits(n_max: int, brute_max: int = 7) -> VerificationReport:
    """Every deformed family at q = p = 1 reproduces the classical numbers.

    The classical tables are themselves checked against an explicit
    enumeration of set partitions and the expanded falling factorial.
    """
    classical = {
        True: build_table(F.CLASSICAL_FIRST, n_max),
        False: build_table(F.CLASSICAL_SECOND, n_max),
    }
    reports = []
    for fam in F:
        if fam in (F.CLASSICAL_FIRST, F.CLASSICAL_SECOND):
            continue
        limit = to_classical(build_table(fam, n_max))
        ref = classical[fam.first_kind]
        for r, c, e in limit.rows():
            d = e - ref[r, c]
            reports.append(VerificationReport(fam.value, {"row": r, "col": c}, d.is_zero(), witness=d))
    for n in range(1, min(n_max, brute_max) + 1):
        expanded = falling_product_expand("classical", n)
        for k in range(1, n + 1):
            d = classical[False][n, k] - count_set_partitions(n, k)
            reports.append(VerificationReport("set_partitions", {"n": n, "k": k}, d.is_zero(), witness=d))
            d = classical[True][n, k] - expanded.coefficient("X", k)
            reports.append(VerificationReport("falling_factorial", {"n": n, "k": k}, d.is_zero(), witness=d))
    return merge("stirling_limits", reports, params={"n_max": n_max})
