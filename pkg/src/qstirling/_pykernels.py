"""Pure-Python term kernels for :class:`qstirling.exact_poly.Poly`.

A term dictionary maps a packed exponent key to a nonzero coefficient
(``int`` or ``Fraction``).  Packed keys add like exponent vectors once the
per-field bias is subtracted, so the product key is ``ka + kb - zero_key``.
"""

from fractions import Fraction


def _tidy(c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def mul_terms(a, b, zero_key):
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    items_b = list(b.items())
    for ka, ca in a.items():
        base = ka - zero_key
        for kb, cb in items_b:
            k = base + kb
            out[k] = get(k, 0) + ca * cb
    return {k: _tidy(c) for k, c in out.items() if c}


def add_terms(a, b, sign):
    """Return ``a + sign*b`` with ``sign`` in {1, -1}."""
    out = dict(a)
    get = out.get
    if sign == 1:
        for k, c in b.items():
            out[k] = get(k, 0) + c
    else:
        for k, c in b.items():
            out[k] = get(k, 0) - c
    return {k: _tidy(c) for k, c in out.items() if c}


def scale_terms(a, c, shift):
    """Multiply every coefficient by the scalar ``c`` and every key by ``shift``."""
    if shift:
        return {k + shift: _tidy(v * c) for k, v in a.items()}
    return {k: _tidy(v * c) for k, v in a.items()}
