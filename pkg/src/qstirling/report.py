"""Verification reports shared by every checker."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .exact_poly import Poly


@dataclass
class VerificationReport:
    id: str
    params: dict = field(default_factory=dict)
    passed: bool = True
    dim: int | None = None
    counterexample: dict | None = None
    witness: Poly | None = None
    checks: int = 1

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        params = {k: (v.value if hasattr(v, "value") else v) for k, v in self.params.items()}
        out = {
            "id": self.id,
            "params": params,
            "dim": self.dim,
            "pass": self.passed,
            "counterexample": self.counterexample,
        }
        if self.witness is not None:
            out["witness"] = str(self.witness)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def line(self) -> str:
        params = " ".join(f"{k}={v.value if hasattr(v, 'value') else v}" for k, v in self.params.items())
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.id} {params}".rstrip()


def merge(id: str, reports, params=None, dim=None) -> VerificationReport:
    """Combine sub-reports; the first failure supplies the counterexample."""
    reports = list(reports)
    failed = next((r for r in reports if not r.passed), None)
    counter = None
    if failed is not None:
        counter = dict(failed.counterexample or {})
        counter.setdefault("check", failed.id)
        counter.setdefault("params", {k: str(v) for k, v in failed.params.items()})
        if failed.witness is not None:
            counter.setdefault("residual_polynomial", str(failed.witness))
    return VerificationReport(
        id=id,
        params=dict(params or {}),
        passed=failed is None,
        dim=dim,
        counterexample=counter,
        checks=sum(r.checks for r in reports),
    )
