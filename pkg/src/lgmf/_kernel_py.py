"""Pure-Python sparse-term kernels.

Terms are dicts mapping exponent tuples to nonzero Fractions.  These three
functions are the hot loops of the whole library (Groebner reduction, matrix
composites, residue numerators); a compiled twin lives in ``_kernel_cy.pyx``
with identical semantics and is preferred at import when available.
"""

from fractions import Fraction

BACKEND = "python"


def terms_add(a, b):
    """Sum of two term dicts, zero coefficients dropped."""
    out = dict(a)
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


def terms_mul(a, b):
    """Product of two term dicts."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            exp = tuple(x + y for x, y in zip(ea, eb))
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


def terms_scale(a, c):
    """Scalar multiple of a term dict."""
    if not c:
        return {}
    return {exp: ca * c for exp, ca in a.items()}


def terms_mul_term(a, exp, c):
    """Multiply a term dict by a single monomial term c * x^exp."""
    if not c:
        return {}
    return {tuple(x + y for x, y in zip(ea, exp)): ca * c for ea, ca in a.items()}
