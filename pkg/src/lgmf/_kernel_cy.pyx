# cython: language_level=3
"""Cython twin of ``_kernel_py``: same four functions, same semantics.

Coefficients stay exact Python Fractions; the speedup comes from typed loop
plumbing around dict and tuple traffic, which dominates at desk scale.
"""

BACKEND = "cython"


def terms_add(dict a, dict b):
    cdef dict out = dict(a)
    cdef tuple exp
    for exp, c in b.items():
        s = out.get(exp)
        if s is None:
            out[exp] = c
        else:
            s = s + c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def terms_mul(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, exp
    cdef Py_ssize_t i, n
    if len(a) > len(b):
        a, b = b, a
    for ea, ca in a.items():
        n = len(ea)
        for eb, cb in b.items():
            exp = tuple([ea[i] + eb[i] for i in range(n)])
            c = ca * cb
            s = out.get(exp)
            if s is None:
                out[exp] = c
            else:
                s = s + c
                if s:
                    out[exp] = s
                else:
                    del out[exp]
    return out


def terms_scale(dict a, c):
    cdef dict out = {}
    cdef tuple exp
    if not c:
        return out
    for exp, ca in a.items():
        out[exp] = ca * c
    return out


def terms_mul_term(dict a, tuple exp, c):
    cdef dict out = {}
    cdef tuple ea
    cdef Py_ssize_t i, n = len(exp)
    if not c:
        return out
    for ea, ca in a.items():
        out[tuple([ea[i] + exp[i] for i in range(n)])] = ca * c
    return out
