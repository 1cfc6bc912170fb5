"""Truncated Fock-space oracle with exact matrix entries.

The ladder operators use the asymmetric normalization

    A |l> = [l] |l-1>,   Adag |l> = |l+1>,   N |l> = l |l>.

The usual normalization with entries sqrt([l]) is related to this one by the
diagonal similarity S|l> = ([l]!)^(-1/2) |l>: conjugating by S maps
sqrt([l]) entries on both ladder operators to [l] on A and 1 on Adag, and
leaves every function of N unchanged.  A polynomial identity in A, Adag and
N therefore holds in one representation exactly when it holds in the other,
while this choice keeps all entries inside the Laurent ring (no square
roots).  :func:`corroborate_symmetric` re-checks the identities numerically
in the sqrt representation as a backstop.

Truncation at dimension D kills Adag |D-1>; each identity declares how many
raising steps it takes so that only states unaffected by the cutoff are
compared.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

import numpy as np

from .boson_algebra import (
    QChoice,
    big_phi,
    normal_order_power,
    reorder_right,
    shat_first_kind,
    shat_second_kind,
)
from .deformed_numbers import (
    BracketKind,
    bracket,
    bracket_factorial,
    check_bracket_identity,
    g_binomial_expansion,
    g_pochhammer,
)
from .errors import DivisionNotExact, EmptySafeRange, InconsistentSystem, SingularSystem, UnknownIdentity
from .exact_poly import ONE, ZERO, Poly, lam, q
from .report import VerificationReport, merge
from .stirling import F, build_table


class FockMatrix:
    """Sparse D x D matrix with Poly entries, stored as {row: {col: entry}}."""

    __slots__ = ("dim", "rows")

    def __init__(self, dim: int, rows: dict[int, dict[int, Poly]] | None = None):
        self.dim = dim
        self.rows = {i: {j: v for j, v in r.items() if not v.is_zero()} for i, r in (rows or {}).items()}
        self.rows = {i: r for i, r in self.rows.items() if r}

    @classmethod
    def diagonal(cls, values) -> FockMatrix:
        values = list(values)
        return cls(len(values), {i: {i: Poly.coerce(v)} for i, v in enumerate(values)})

    @classmethod
    def identity(cls, dim: int) -> FockMatrix:
        return cls.diagonal([ONE] * dim)

    def __getitem__(self, index: tuple[int, int]) -> Poly:
        i, j = index
        return self.rows.get(i, {}).get(j, ZERO)

    def column(self, j: int) -> dict[int, Poly]:
        return {i: r[j] for i, r in self.rows.items() if j in r}

    def __matmul__(self, other: FockMatrix) -> FockMatrix:
        out: dict[int, dict[int, Poly]] = {}
        for i, row in self.rows.items():
            acc: dict[int, Poly] = {}
            for j, a in row.items():
                for k, b in other.rows.get(j, {}).items():
                    acc[k] = acc.get(k, ZERO) + a * b
            out[i] = acc
        return FockMatrix(self.dim, out)

    def __add__(self, other: FockMatrix) -> FockMatrix:
        out = {i: dict(r) for i, r in self.rows.items()}
        for i, r in other.rows.items():
            tgt = out.setdefault(i, {})
            for j, v in r.items():
                tgt[j] = tgt.get(j, ZERO) + v
        return FockMatrix(self.dim, out)

    def __neg__(self) -> FockMatrix:
        return FockMatrix(self.dim, {i: {j: -v for j, v in r.items()} for i, r in self.rows.items()})

    def __sub__(self, other: FockMatrix) -> FockMatrix:
        return self + (-other)

    def __mul__(self, c) -> FockMatrix:
        return FockMatrix(self.dim, {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> FockMatrix:
        result = FockMatrix.identity(self.dim)
        for _ in range(e):
            result = result @ self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockMatrix):
            return NotImplemented
        return self.dim == other.dim and self.rows == other.rows


@dataclass(frozen=True)
class FockRep:
    dim: int
    kind: BracketKind
    A: FockMatrix
    Adag: FockMatrix
    N: FockMatrix

    # the small ring interface shared with the numeric representation
    def diag(self, fn) -> FockMatrix:
        return FockMatrix.diagonal(fn(l) for l in range(self.dim))

    def scalar(self, value) -> Poly:
        return Poly.coerce(value)

    def power(self, M: FockMatrix, e: int) -> FockMatrix:
        return M ** e

    def zero(self) -> FockMatrix:
        return FockMatrix(self.dim)


def build_fock_rep(dim: int, kind=BracketKind.G) -> FockRep:
    if dim < 2:
        raise ValueError("Fock dimension must be >= 2")
    kind = BracketKind.parse(kind)
    A = FockMatrix(dim, {l - 1: {l: bracket(l, kind)} for l in range(1, dim)})
    Adag = FockMatrix(dim, {l + 1: {l: ONE} for l in range(dim - 1)})
    N = FockMatrix.diagonal(range(dim))
    return FockRep(dim, kind, A, Adag, N)


def safe_dim(expr_max_shift: int, dim: int) -> range:
    """Basis states l < dim - shift, on which truncation cannot interfere."""
    if expr_max_shift >= dim:
        raise EmptySafeRange(f"raising shift {expr_max_shift} leaves no safe state at D={dim}")
    return range(0, dim - expr_max_shift)


# --------------------------------------------------------------------------
# identities, written once against the representation interface


def _falling(kind, l, k):
    result = ONE
    for i in range(k):
        result = result * bracket(l - i, kind)
    return result


def _id_commutator(rep, k, kind, q_choice):
    Qv = rep.scalar(q_choice.value_for(kind) ** k)
    Ak = rep.power(rep.A, k)
    lhs = Ak @ rep.Adag - (rep.Adag @ Ak) * Qv
    Phi = big_phi(k, q_choice, kind)
    rhs = rep.diag(lambda l: rep.scalar(Phi.evaluate(l))) @ rep.power(rep.A, k - 1)
    return lhs, rhs, 1


def _id_falling(rep, k, kind):
    lhs = rep.diag(lambda l: rep.scalar(_falling(kind, l, k)))
    rhs = rep.power(rep.Adag, k) @ rep.power(rep.A, k)
    return lhs, rhs, 0


def _id_bracket_falling(rep, k, kind):
    # prod_i ([n] - pv^(n-i) [i]) = q^(k(k-1)/2) (a+)^k a^k; pv = 1 for M-type
    pv = kind.p_value()

    def diff(l):
        result = ONE
        for i in range(k):
            result = result * (bracket(l, kind) - pv ** (l - i) * bracket(i, kind))
        return rep.scalar(result)

    lhs = rep.diag(diff)
    rhs = (rep.power(rep.Adag, k) @ rep.power(rep.A, k)) * rep.scalar(q ** (k * (k - 1) // 2))
    return lhs, rhs, 0


def _number_power(rep, m):
    return rep.power(rep.Adag @ rep.A, m)


def _id_normal_order_m(rep, m, kind):
    if kind is not BracketKind.M:
        raise ValueError("scalar normal ordering holds for M-type bosons only")
    S_q = build_table(F.Q_SECOND, m)
    S_t = build_table(F.TILDE_SECOND, m)
    lhs = _number_power(rep, m)
    rhs_q = rep.zero()
    rhs_t = rep.zero()
    for k in range(1, m + 1):
        string = rep.power(rep.Adag, k) @ rep.power(rep.A, k)
        rhs_q = rhs_q + string * rep.scalar(S_q[m, k])
        rhs_t = rhs_t + string * rep.scalar(S_t[m, k] * q ** (k * (k - 1) // 2))
    return [(lhs, rhs_q), (lhs, rhs_t)], 0


def _id_inverse(rep, k, kind):
    lhs = rep.power(rep.Adag, k) @ rep.power(rep.A, k)
    pairs = []
    rhs = rep.zero()
    for m in range(1, k + 1):
        s_hat = shat_first_kind(k, m, kind)
        rhs = rhs + rep.diag(lambda l, s_hat=s_hat: rep.scalar(s_hat.evaluate(l))) @ _number_power(rep, m)
    pairs.append((lhs, rhs))
    if kind is BracketKind.M:
        s_q = build_table(F.Q_FIRST, k)
        scalar_rhs = rep.zero()
        for m in range(1, k + 1):
            scalar_rhs = scalar_rhs + _number_power(rep, m) * rep.scalar(s_q[k, m])
        pairs.append((lhs, scalar_rhs))
    return pairs, 0


def _id_general_normal(rep, m, kind, q_choice):
    nf = normal_order_power(m, kind, q_choice)
    lhs = _number_power(rep, m)
    rhs = rep.zero()
    for k, c in nf.coeffs.items():
        middle = rep.diag(lambda l, c=c: rep.scalar(c.evaluate(l)))
        rhs = rhs + rep.power(rep.Adag, k) @ middle @ rep.power(rep.A, k)
    return lhs, rhs, 0


@lru_cache(maxsize=None)
def _right_form(m, kind, q_choice):
    return reorder_right(normal_order_power(m, kind, q_choice))


def _id_right_form(rep, m, kind, q_choice):
    right = _right_form(m, kind, q_choice)
    lhs = _number_power(rep, m)
    rhs = rep.zero()
    for k, c in right.coeffs.items():
        after = rep.diag(lambda l, c=c: rep.scalar(c.evaluate(l)))
        rhs = rhs + rep.power(rep.Adag, k) @ rep.power(rep.A, k) @ after
    return lhs, rhs, 0


def _id_genfun(rep, k_max, kind):
    pv = kind.p_value()
    lhs = rep.zero()
    for k in range(k_max + 1):
        string = rep.power(rep.Adag, k) @ rep.power(rep.A, k)
        fact = bracket_factorial(k, kind)
        weights = rep.diag(
            lambda l, k=k: pv ** (k * (k - 1) // 2) * q ** ((l - k) * (l - k - 1) // 2) * lam ** k
        )
        lhs = lhs + _divide_entries(weights @ string, fact)
    rhs = rep.diag(lambda l: g_pochhammer(l, ONE, kind))
    # the operator sum is truncated at k_max, exact for l <= k_max
    return lhs, rhs, range(0, min(rep.dim, k_max + 1))


def _divide_entries(M: FockMatrix, d: Poly) -> FockMatrix:
    return FockMatrix(M.dim, {i: {j: v.divexact(d) for j, v in r.items()} for i, r in M.rows.items()})


IDENTITIES = {
    "E24_COMMUTATOR": ("k", _id_commutator, True),
    "E28_FALLING": ("k", _id_falling, False),
    "E31_BRACKET_FALLING": ("k", _id_bracket_falling, False),
    "E30_NORMAL_ORDER": ("m", _id_normal_order_m, False),
    "E33_INVERSE": ("k", _id_inverse, False),
    "E34_GENERAL_NORMAL": ("m", _id_general_normal, True),
    "E45_RIGHT_FORM": ("m", _id_right_form, True),
    "E51_GENFUN": ("k", _id_genfun, False),
}


def _build(rep, id, n, kind, q_choice):
    try:
        _, fn, uses_q = IDENTITIES[id]
    except KeyError:
        raise UnknownIdentity(id) from None
    out = fn(rep, n, kind, q_choice) if uses_q else fn(rep, n, kind)
    if isinstance(out[0], list):
        pairs, shift = out
    else:
        pairs, shift = [(out[0], out[1])], out[2]
    return pairs, shift


def verify_operator_identity(
    id: str,
    params: dict,
    dim: int,
    *,
    include_edge: bool = False,
) -> VerificationReport:
    """Compare both sides of an operator identity column by column on |l>.

    ``params`` holds ``k`` or ``m``, ``kind`` and optionally ``Q`` (a
    :class:`QChoice`, default Q = q).  ``include_edge`` also checks the
    states the truncation corrupts; it exists as a negative control.
    """
    if id not in IDENTITIES:
        raise UnknownIdentity(id)
    index_name, _, uses_q = IDENTITIES[id]
    kind = BracketKind.parse(params.get("kind", "G"))
    q_choice = QChoice.parse(params.get("Q", QChoice.Q_EQUALS_Q))
    n = params[index_name]
    rep = build_fock_rep(dim, kind)
    pairs, shift = _build(rep, id, n, kind, q_choice)
    states = shift if isinstance(shift, range) else safe_dim(shift, dim)
    if include_edge:
        states = range(dim)
    counter = None
    for lhs, rhs in pairs:
        for l in states:
            a, b = lhs.column(l), rhs.column(l)
            for i in sorted(set(a) | set(b)):
                diff = a.get(i, ZERO) - b.get(i, ZERO)
                if not diff.is_zero():
                    counter = {"l": l, "row": i, "residual_polynomial": str(diff)}
                    break
            if counter:
                break
        if counter:
            break
    report_params = {index_name: n, "kind": kind.value}
    if uses_q:
        report_params["Q"] = q_choice.value
    return VerificationReport(
        id=id,
        params=report_params,
        passed=counter is None,
        dim=dim,
        counterexample=counter,
        checks=len(pairs) * len(states),
    )


# --------------------------------------------------------------------------
# independent coefficient oracle and generating function


def oracle_normal_coeffs(m: int, kind=BracketKind.G, dim: int = 10) -> dict[tuple[int, int], Poly]:
    """Normal-ordering coefficients c_k(n) fitted on Fock states, Q = q.

    The coefficient of (a+)^k ... a^k is taken of the form
    C_k * pv^((m-k) n), with pv the kind's value of p (so constant for
    M-type).  The diagonal of (Adag A)^m at l = 1..m fixes C_1..C_m one at a
    time; every remaining state l < dim must then agree, otherwise
    InconsistentSystem is raised.  Returns {(k, n): c_k(n)} for 0 <= n < dim - k.
    """
    kind = BracketKind.parse(kind)
    if dim <= m:
        raise ValueError("dimension must exceed m")
    rep = build_fock_rep(dim, kind)
    pv = kind.p_value()
    power = _number_power(rep, m)
    strings = {}
    string = FockMatrix.identity(dim)
    for k in range(1, m + 1):
        string = rep.Adag @ string @ rep.A
        strings[k] = string

    def c(k, n, consts):
        return consts[k] * pv ** ((m - k) * n)

    consts: dict[int, Poly] = {}
    for l in range(1, m + 1):
        known = sum((c(k, l - k, consts) * strings[k][l, l] for k in range(1, l)), ZERO)
        pivot = strings[l][l, l]
        if pivot.is_zero():
            raise SingularSystem(f"zero pivot at l={l}")
        try:
            consts[l] = (power[l, l] - known).divexact(pivot)
        except DivisionNotExact as exc:
            raise InconsistentSystem(f"no polynomial coefficient at l={l}") from exc
    for l in range(dim):
        total = sum((c(k, l - k, consts) * strings[k][l, l] for k in range(1, min(m, l) + 1)), ZERO)
        if total != power[l, l]:
            raise InconsistentSystem(f"fitted coefficients fail at l={l}")
    return {(k, n): c(k, n, consts) for k in range(1, m + 1) for n in range(dim - k)}


def verify_two_paths(m: int, kind=BracketKind.G, dim: int = 10) -> VerificationReport:
    """Fock-fitted coefficients equal the recurrence-built S(m, k, n) pointwise."""
    kind = BracketKind.parse(kind)
    oracle = oracle_normal_coeffs(m, kind, dim)
    counter = None
    for (k, n), value in sorted(oracle.items()):
        diff = value - shat_second_kind(m, k, QChoice.Q_EQUALS_Q, kind).evaluate(n)
        if not diff.is_zero():
            counter = {"k": k, "n": n, "residual_polynomial": str(diff)}
            break
    return VerificationReport(
        "two_path_normal_coeffs",
        {"m": m, "kind": kind.value},
        counter is None,
        dim=dim,
        counterexample=counter,
        checks=len(oracle),
    )


def verify_genfun(k_max: int, dim: int, kind=BracketKind.G) -> VerificationReport:
    """Extract the lam^k coefficient of (lam; 1)^(l) and rebuild (a+)^k a^k on |l>.

    The k-th derivative at lam = 0 is k! times that coefficient, so the
    k!/k! factors cancel and only [k]! p^(-k(k-1)/2) q^(-(l-k)(l-k-1)/2)
    remains.
    """
    kind = BracketKind.parse(kind)
    if dim < k_max + 1:
        raise ValueError("need dim >= k_max + 1")
    rep = build_fock_rep(dim, kind)
    pv = kind.p_value()
    reports = []
    strings = {0: FockMatrix.identity(dim)}
    for k in range(1, k_max + 1):
        strings[k] = rep.Adag @ strings[k - 1] @ rep.A
    for l in range(dim):
        poch = g_pochhammer(l, ONE, kind)
        expanded = g_binomial_expansion(l, ONE, kind)
        reports.append(
            VerificationReport("binomial_theorem", {"l": l}, (poch - expanded).is_zero(), witness=poch - expanded)
        )
        for k in range(k_max + 1):
            coef = poch.coefficient("lam", k)
            rebuilt = bracket_factorial(k, kind) * pv ** (-(k * (k - 1) // 2)) * q ** (-((l - k) * (l - k - 1) // 2)) * coef
            diff = rebuilt - strings[k][l, l]
            reports.append(
                VerificationReport("coefficient", {"l": l, "k": k}, diff.is_zero(), witness=diff)
            )
    if kind is BracketKind.G:
        for k in range(1, k_max + 1):
            for m in range(1, k_max + 1):
                reports.append(check_bracket_identity("POWER_SUB", (k, m)))
                reports.append(check_bracket_identity("KM_EXPAND", (k, m)))
    return merge("E52_GENFUN", reports, params={"k_max": k_max, "kind": kind.value}, dim=dim)


# --------------------------------------------------------------------------
# floating-point corroboration in the sqrt([l]) normalization


class _SymmetricRep:
    """Numeric representation with A|l> = sqrt([l]) |l-1>, Adag = A^T."""

    def __init__(self, dim, kind, values):
        self.dim = dim
        self.kind = kind
        self.values = {k: float(v) for k, v in values.items()}
        self._seen = {}
        entries = [float(bracket(l, kind).evaluate(self.values)) for l in range(dim)]
        self.A = np.zeros((dim, dim))
        for l in range(1, dim):
            self.A[l - 1, l] = math.sqrt(entries[l])
        self.Adag = self.A.T.copy()

    def diag(self, fn):
        return np.diag([fn(l) for l in range(self.dim)])

    def scalar(self, value) -> float:
        value = Poly.coerce(value)
        if value not in self._seen:
            self._seen[value] = float(value.evaluate(self.values))
        return self._seen[value]

    def power(self, M, e):
        return np.linalg.matrix_power(M, e)

    def zero(self):
        return np.zeros((self.dim, self.dim))


CORROBORATED = (
    "E24_COMMUTATOR",
    "E28_FALLING",
    "E31_BRACKET_FALLING",
    "E30_NORMAL_ORDER",
    "E33_INVERSE",
    "E34_GENERAL_NORMAL",
    "E45_RIGHT_FORM",
)


def corroborate_symmetric(qv, pv, Qv=None, *, dim: int = 10, n_max: int = 5, ids=CORROBORATED) -> VerificationReport:
    """Re-check operator identities numerically in the sqrt normalization.

    The residual of column l is ||(L - R)|l>|| divided by the larger
    Frobenius norm of L and R over the safe columns.  The worst value over
    all identities, kinds, Q choices and parameters 1..n_max is reported in
    ``counterexample['max_relative_residual']``; passes below 1e-9.
    """
    values = {"q": Fraction(qv), "p": Fraction(pv), "Q": Fraction(Qv if Qv is not None else qv)}
    worst = 0.0
    worst_at = None
    checks = 0
    for kind in BracketKind:
        rep = _SymmetricRep(dim, kind, values)
        for id in ids:
            _, _, uses_q = IDENTITIES[id]
            choices = list(QChoice) if uses_q else [QChoice.Q_EQUALS_Q]
            if id == "E30_NORMAL_ORDER" and kind is not BracketKind.M:
                continue
            for q_choice in choices:
                for n in range(1, n_max + 1):
                    pairs, shift = _build(rep, id, n, kind, q_choice)
                    states = safe_dim(shift, dim)
                    cols = list(states)
                    for lhs, rhs in pairs:
                        # columns that vanish exactly leave only rounding noise, so the
                        # residual is measured against the operator's overall size
                        scale = max(np.linalg.norm(lhs[:, cols]), np.linalg.norm(rhs[:, cols]), 1e-300)
                        for l in cols:
                            rel = float(np.linalg.norm(lhs[:, l] - rhs[:, l]) / scale)
                            checks += 1
                            if rel > worst:
                                worst, worst_at = rel, (id, kind.value, q_choice.value, n, l)
    return VerificationReport(
        "similarity_corroboration",
        {"q": str(values["q"]), "p": str(values["p"]), "Q": str(values["Q"])},
        worst < 1e-9,
        dim=dim,
        counterexample={"max_relative_residual": worst, "at": worst_at},
        checks=checks,
    )


def random_rational_pairs(count: int, seed: int = 0, lo: float = 0.5, hi: float = 2.0):
    """``count`` random rationals (q, p, Q) in (lo, hi) with modest denominators."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        triple = tuple(Fraction(rng.uniform(lo, hi)).limit_denominator(97) for _ in range(3))
        out.append(triple)
    return out
