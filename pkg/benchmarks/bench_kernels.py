"""Compiled vs pure-Python term kernels.

Two views:

* micro: the raw ``mul_terms`` / ``add_terms`` calls on term dictionaries
  taken from real workloads (both backends called directly, same process);
* end to end: a few library workloads timed in fresh interpreters, once
  with the compiled kernels and once with ``QSTIRLING_PURE_PYTHON=1``.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

WORKLOADS = {
    "G bracket power [9]^40": "from qstirling.deformed_numbers import bracket; bracket(9) ** 40",
    "Fock E34 m=5, all Q, D=10": (
        "from qstirling.fock_oracle import verify_operator_identity as v\n"
        "for Q in ('symbolic', 'q', 'p', '1'):\n"
        "    assert v('E34_GENERAL_NORMAL', {'m': 5, 'kind': 'G', 'Q': Q}, 10).passed"
    ),
    "duality tables n_max=14": (
        "from qstirling.stirling import F, build_table, verify_duality\n"
        "assert verify_duality(build_table(F.Q_FIRST, 14), build_table(F.Q_SECOND, 14)).passed"
    ),
    "biorthogonality n_max=9": (
        "from qstirling.boson_algebra import verify_biorthogonality\n"
        "assert verify_biorthogonality(9).passed"
    ),
}


def micro(repeat: int) -> None:
    from qstirling import _pykernels
    from qstirling.deformed_numbers import bracket
    from qstirling.exact_poly import ZERO_KEY

    try:
        from qstirling import _ckernels
    except ImportError:
        print("compiled kernels not built; micro benchmark skipped")
        return
    a = (bracket(7) ** 4)._terms
    b = (bracket(5) ** 3)._terms
    print(f"micro: |a|={len(a)} terms, |b|={len(b)} terms")
    rows = [
        ("mul_terms", lambda k: k.mul_terms(a, b, ZERO_KEY)),
        ("add_terms", lambda k: k.add_terms(a, b, -1)),
    ]
    for name, fn in rows:
        py = min(timeit.repeat(lambda: fn(_pykernels), number=20, repeat=repeat)) / 20
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=20, repeat=repeat)) / 20
        print(f"  {name:<12} python {py * 1e3:8.3f} ms   cython {cy * 1e3:8.3f} ms   speedup {py / cy:5.2f}x")


def _time_in_subprocess(code: str, pure: bool, repeat: int) -> float:
    env = dict(os.environ)
    env.pop("QSTIRLING_PURE_PYTHON", None)
    if pure:
        env["QSTIRLING_PURE_PYTHON"] = "1"
    # import cost is paid in setup so only the workload is timed
    script = (
        "import timeit, qstirling\n"
        f"print(min(timeit.repeat({code!r}, setup='import qstirling', number=1, repeat={repeat})))"
    )
    out = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True, text=True, check=True)
    return float(out.stdout.strip())


def end_to_end(repeat: int) -> None:
    print("end to end (fresh interpreter per backend; caches cold on the first repeat):")
    for name, code in WORKLOADS.items():
        py = _time_in_subprocess(code, True, repeat)
        cy = _time_in_subprocess(code, False, repeat)
        print(f"  {name:<28} python {py:7.3f} s   cython {cy:7.3f} s   speedup {py / cy:5.2f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    micro(args.repeat)
    end_to_end(args.repeat)


if __name__ == "__main__":
    main()
