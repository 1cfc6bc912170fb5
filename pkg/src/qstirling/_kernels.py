"""Select the term kernels: compiled if importable, pure Python otherwise.

Set ``QSTIRLING_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
mul_terms = _pykernels.mul_terms
add_terms = _pykernels.add_terms
scale_terms = _pykernels.scale_terms

if not os.environ.get("QSTIRLING_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        mul_terms = _ckernels.mul_terms
        add_terms = _ckernels.add_terms
        scale_terms = _ckernels.scale_terms
