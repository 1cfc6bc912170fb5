# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``_pykernels``; identical contracts."""

from fractions import Fraction

from cpython.dict cimport PyDict_GetItem, PyDict_SetItem
from cpython.object cimport PyObject


cdef inline object _tidy(object c):
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


cdef inline bint _small(object c):
    # both factors fit in 31 bits, so their product fits in a C long long
    return type(c) is int and -2147483648 < c < 2147483648


def mul_terms(dict a, dict b, object zero_key):
    cdef dict out = {}
    cdef list keys_b, coef_b
    cdef Py_ssize_t j, nb
    cdef object ka, ca, k, cb, base
    cdef PyObject* prev
    cdef long long ia, ib
    cdef bint small_a
    if len(a) < len(b):
        a, b = b, a
    keys_b = list(b.keys())
    coef_b = list(b.values())
    nb = len(keys_b)
    small_b = [_small(c) for c in coef_b]
    for ka, ca in a.items():
        base = ka - zero_key
        small_a = _small(ca)
        if small_a:
            ia = ca
        for j in range(nb):
            k = base + keys_b[j]
            cb = coef_b[j]
            if small_a and small_b[j]:
                ib = cb
                prod = ia * ib
            else:
                prod = ca * cb
            prev = PyDict_GetItem(out, k)
            if prev is NULL:
                PyDict_SetItem(out, k, prod)
            else:
                PyDict_SetItem(out, k, <object>prev + prod)
    return {k: _tidy(c) for k, c in out.items() if c}


def add_terms(dict a, dict b, int sign):
    cdef dict out = dict(a)
    cdef PyObject* prev
    cdef object k, c
    for k, c in b.items():
        if sign != 1:
            c = -c
        prev = PyDict_GetItem(out, k)
        if prev is NULL:
            PyDict_SetItem(out, k, c)
        else:
            PyDict_SetItem(out, k, <object>prev + c)
    return {k: _tidy(c) for k, c in out.items() if c}


def scale_terms(dict a, object c, object shift):
    cdef object k, v
    if shift:
        return {k + shift: _tidy(v * c) for k, v in a.items()}
    return {k: _tidy(v * c) for k, v in a.items()}
