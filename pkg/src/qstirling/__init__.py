"""Exact deformed Stirling numbers, boson normal ordering and a Fock-space oracle."""

from ._kernels import BACKEND
from .boson_algebra import (
    InverseForm,
    NExpExpr,
    NormalForm,
    QChoice,
    big_phi,
    extract_reduced_factor,
    inverse_normal_form,
    normal_order_power,
    phi,
    reorder_right,
    shat_first_kind,
    shat_second_kind,
)
from .deformed_numbers import BracketKind, bracket, check_bracket_identity, g_bracket
from .errors import (
    DivisionNotExact,
    EmptySafeRange,
    FactorizationFailed,
    InconsistentSystem,
    MismatchedTables,
    NonInvertible,
    SingularSystem,
    UnknownIdentity,
)
from .exact_poly import PowerSeries2, Poly, parse_poly
from .fock_oracle import (
    build_fock_rep,
    corroborate_symmetric,
    oracle_normal_coeffs,
    safe_dim,
    verify_genfun,
    verify_operator_identity,
    verify_two_paths,
)
from .report import VerificationReport
from .series_expansion import commutator_series, hamiltonian_series
from .stirling import StirlingFamily, StirlingTable, build_table, verify_defining_relations, verify_duality
from .suite import SuiteConfig, run_suite

__version__ = "0.1.0"
