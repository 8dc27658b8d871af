"""Exact multivariate polynomial arithmetic over Q.

Provides ordered variable contexts (including doubled alphabets x, x'),
sparse polynomials with Fraction coefficients, a small expression parser,
and the difference quotient operators together with their variable-ordering
variants.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .kernel import terms_add, terms_mul, terms_mul_term, terms_scale

PRIME_SUFFIX = "'"


def primed_name(name: str) -> str:
    """The canonical primed partner of a variable name."""
    return name + PRIME_SUFFIX


class ContextMismatch(ValueError):
    pass


class UnknownVariable(KeyError):
    pass


@dataclass(frozen=True)
class Variable:
    """A named variable together with its position in its context."""

    name: str
    index: int


class RingContext:
    """An ordered tuple of variable names; the carrier ring Q[names].

    Contexts compare and hash by their name tuple.  ``primed_pairs`` lists the
    (unprimed index, primed index) pairs detected by the quote-suffix
    convention; doubled contexts always append the primed block after the
    unprimed block.
    """

    __slots__ = ("names", "_lookup", "primed_pairs")

    def __init__(self, names):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_lookup", {n: i for i, n in enumerate(names)})
        pairs = tuple(
            (i, self._lookup[primed_name(n)])
            for i, n in enumerate(names)
            if primed_name(n) in self._lookup
        )
        object.__setattr__(self, "primed_pairs", pairs)

    def __setattr__(self, *a):  # immutable
        raise AttributeError("RingContext is immutable")

    def __eq__(self, other):
        return isinstance(other, RingContext) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"RingContext{self.names}"

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._lookup[name]
        except KeyError:
            raise UnknownVariable(f"{name!r} not in context {self.names}") from None

    def var(self, name: str) -> Variable:
        return Variable(name, self.index(name))

    @property
    def variables(self):
        return tuple(Variable(n, i) for i, n in enumerate(self.names))

    def contains(self, name: str) -> bool:
        return name in self._lookup

    def extend(self, extra_names) -> "RingContext":
        new = [n for n in extra_names if n not in self._lookup]
        return RingContext(self.names + tuple(new))

    def doubled(self, subset=None) -> "RingContext":
        """Append primed partners of ``subset`` (default: all names)."""
        subset = self.names if subset is None else tuple(subset)
        for n in subset:
            self.index(n)
        return self.extend(primed_name(n) for n in subset)

    def merge(self, other: "RingContext") -> "RingContext":
        return self.extend(other.names)

    def poly(self, terms) -> "Poly":
        return Poly(self, terms)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly(self, {})
        return Poly(self, {(0,) * len(self.names): c})

    def gen(self, name: str) -> "Poly":
        exp = [0] * len(self.names)
        exp[self.index(name)] = 1
        return Poly(self, {tuple(exp): Fraction(1)})


def grlex_key(exp):
    """Graded-lexicographic sort key (largest first when reverse-sorted)."""
    return (sum(exp), exp)


class Poly:
    """A sparse multivariate polynomial over Q in a fixed context.

    Immutable value type; terms map exponent tuples to nonzero Fractions.
    """

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: RingContext, terms):
        clean = {}
        width = len(ctx.names)
        for exp, c in terms.items():
            c = c if isinstance(c, Fraction) else Fraction(c)
            if len(exp) != width:
                raise ValueError(f"exponent {exp} has wrong arity for {ctx}")
            if c:
                clean[tuple(exp)] = c
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("Poly is immutable")

    # -- basic predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(exp) for exp in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ctx.index(name)
        if not self.terms:
            return -1
        return max(exp[i] for exp in self.terms)

    # -- arithmetic ---------------------------------------------------------
    def _check(self, other: "Poly"):
        if self.ctx != other.ctx:
            raise ContextMismatch(f"{self.ctx} vs {other.ctx}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        self._check(other)
        return Poly(self.ctx, terms_add(self.terms, other.terms))

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ctx, terms_scale(self.terms, Fraction(-1)))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(self.ctx, terms_scale(self.terms, Fraction(other)))
        self._check(other)
        return Poly(self.ctx, terms_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        out = self.ctx.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.ctx.names, tuple(sorted(self.terms.items()))))
            object.__setattr__(self, "_hash", h)
        return h

    # -- structure ----------------------------------------------------------
    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def coefficient_of(self, exps_by_name: dict) -> "Poly":
        """Extract the coefficient of prod v^e over the named variables.

        The named variables are removed from the monomials matched exactly;
        the result still lives in the same context (with zero exponents on
        the extracted variables).
        """
        idx = {self.ctx.index(n): e for n, e in exps_by_name.items()}
        out = {}
        for exp, c in self.terms.items():
            if all(exp[i] == e for i, e in idx.items()):
                new = tuple(0 if i in idx else e for i, e in enumerate(exp))
                out[new] = out.get(new, Fraction(0)) + c
        return Poly(self.ctx, out)

    def __repr__(self):
        return format_poly(self)


# -- context-changing maps --------------------------------------------------

def embed(p: Poly, ctx: RingContext) -> Poly:
    """Reinterpret p in a larger (or reordered) context, matching by name."""
    if p.ctx == ctx:
        return p
    positions = [ctx.index(n) for n in p.ctx.names]
    width = len(ctx.names)
    out = {}
    for exp, c in p.terms.items():
        new = [0] * width
        for pos, e in zip(positions, exp):
            new[pos] = e
        out[tuple(new)] = c
    return Poly(ctx, out)


def rename(p: Poly, mapping, target_ctx: RingContext | None = None) -> Poly:
    """Injective variable renaming (the variable-changing maps ^t).

    ``mapping`` sends old names to new names; unmapped variables keep their
    name.  The target context defaults to the source context (which must then
    contain every image name).
    """
    mapping = {
        (k.name if isinstance(k, Variable) else k): (v.name if isinstance(v, Variable) else v)
        for k, v in mapping.items()
    }
    images = [mapping.get(n, n) for n in p.ctx.names]
    if len(set(images)) != len(images):
        raise ValueError(f"rename map not injective on {p.ctx.names}: {mapping}")
    ctx = target_ctx if target_ctx is not None else p.ctx
    positions = [ctx.index(n) for n in images]
    width = len(ctx.names)
    out = {}
    for exp, c in p.terms.items():
        new = [0] * width
        for pos, e in zip(positions, exp):
            new[pos] = e
        out[tuple(new)] = c
    return Poly(ctx, out)


def substitute(p: Poly, mapping, target_ctx: RingContext | None = None) -> Poly:
    """Variable-for-variable substitution, merges allowed (e.g. x' -> x)."""
    mapping = {k: v for k, v in mapping.items()}
    images = [mapping.get(n, n) for n in p.ctx.names]
    ctx = target_ctx if target_ctx is not None else p.ctx
    positions = [ctx.index(n) for n in images]
    width = len(ctx.names)
    out = {}
    for exp, c in p.terms.items():
        new = [0] * width
        for pos, e in zip(positions, exp):
            new[pos] += e
        key = tuple(new)
        out[key] = out.get(key, Fraction(0)) + c
    return Poly(ctx, out)


def partial_derivative(p: Poly, v) -> Poly:
    """Formal partial derivative with respect to a variable."""
    name = v.name if isinstance(v, Variable) else v
    i = p.ctx.index(name)
    out = {}
    for exp, c in p.terms.items():
        e = exp[i]
        if e:
            new = exp[:i] + (e - 1,) + exp[i + 1:]
            out[new] = out.get(new, Fraction(0)) + c * e
    return Poly(p.ctx, out)


def exact_div_linear(p: Poly, uname: str, pname: str) -> Poly:
    """Exact division of p by (u - u'), u = uname, u' = pname.

    Univariate division in u with polynomial coefficients; raises if the
    remainder (p at u := u') is nonzero.
    """
    ui = p.ctx.index(uname)
    pi = p.ctx.index(pname)
    q: dict = {}
    rem = dict(p.terms)
    while True:
        best = None
        for exp in rem:
            if exp[ui] > 0 and (best is None or exp[ui] > best[ui] or
                                (exp[ui] == best[ui] and exp > best)):
                best = exp
        if best is None:
            break
        c = rem[best]
        qexp = list(best)
        qexp[ui] -= 1
        qexp = tuple(qexp)
        q[qexp] = q.get(qexp, Fraction(0)) + c
        # subtract c * x^qexp * (u - u')
        del rem[best]
        shifted = list(qexp)
        shifted[pi] += 1
        shifted = tuple(shifted)
        prev = rem.get(shifted, Fraction(0)) + c
        if prev:
            rem[shifted] = prev
        elif shifted in rem:
            del rem[shifted]
    if rem:
        raise ValueError(f"{p} is not divisible by ({uname} - {pname})")
    return Poly(p.ctx, q)


def _default_pairs(ctx: RingContext):
    if not ctx.primed_pairs:
        raise ValueError(f"context {ctx.names} has no primed pairs")
    return [(ctx.names[i], ctx.names[j]) for i, j in ctx.primed_pairs]


def divided_difference(p: Poly, i: int, pairs=None) -> Poly:
    """The difference quotient: prime variables 1..i-1 resp. 1..i, divide.

    ``pairs`` lists (unprimed, primed) names in the operator's order; defaults
    to the context's primed pairs in context order.  ``i`` is 1-based.
    """
    pairs = _default_pairs(p.ctx) if pairs is None else list(pairs)
    if not 1 <= i <= len(pairs):
        raise IndexError(f"divided difference index {i} out of range 1..{len(pairs)}")
    left = substitute(p, {u: pr for u, pr in pairs[: i - 1]})
    right = substitute(p, {u: pr for u, pr in pairs[:i]})
    return exact_div_linear(left - right, pairs[i - 1][0], pairs[i - 1][1])


def divided_difference_ordered(p: Poly, i: int, sigma, pairs=None) -> Poly:
    """The modified difference quotient for a permutation of the pair order.

    ``sigma`` is a sequence with sigma[k-1] = sigma(k), 1-based values into
    ``pairs``; reduces to divided_difference for the identity.
    """
    pairs = _default_pairs(p.ctx) if pairs is None else list(pairs)
    sigma = list(sigma)
    if sorted(sigma) != list(range(1, len(pairs) + 1)):
        raise ValueError(f"{sigma} is not a permutation of 1..{len(pairs)}")
    perm = [pairs[s - 1] for s in sigma]
    pos = sigma.index(i) + 1       # where variable i sits in the sigma order
    return divided_difference(p, pos, pairs=perm)


# -- printing and parsing ---------------------------------------------------

def format_poly(p: Poly) -> str:
    if not p.terms:
        return "0"
    parts = []
    for exp, c in p.sorted_terms():
        factors = []
        for name, e in zip(p.ctx.names, exp):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        if not mono:
            body = str(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class ParseError(ValueError):
    pass


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            tokens.append(("var", text[i:j]))
            i = j
        elif ch in "+-*^/()":
            tokens.append((ch, ch))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r} at position {i}")
    tokens.append(("end", ""))
    return tokens


def parse_poly(text: str, ctx: RingContext) -> Poly:
    """Parse the CLI polynomial grammar: signed sums of c * v1^e1 * ... terms.

    Also accepts parentheses and rational coefficients p/q.
    """
    tokens = _tokenize(text)
    pos = [0]

    def peek():
        return tokens[pos[0]][0]

    def take(kind=None):
        k, v = tokens[pos[0]]
        if kind is not None and k != kind:
            raise ParseError(f"expected {kind}, found {v!r} (token {pos[0]})")
        pos[0] += 1
        return v

    def parse_atom() -> Poly:
        k = peek()
        if k == "int":
            num = int(take())
            if peek() == "/":
                take()
                den = int(take("int"))
                return ctx.const(Fraction(num, den))
            return ctx.const(num)
        if k == "var":
            name = take()
            if not ctx.contains(name):
                raise ParseError(f"unknown variable {name!r} in context {ctx.names}")
            return ctx.gen(name)
        if k == "(":
            take()
            p = parse_sum()
            take(")")
            return p
        raise ParseError(f"unexpected token {tokens[pos[0]][1]!r}")

    def parse_power() -> Poly:
        base = parse_atom()
        if peek() == "^":
            take()
            neg = False
            if peek() == "-":
                raise ParseError("negative exponents are not supported")
            e = int(take("int"))
            base = base ** e
            if neg:
                raise ParseError("negative exponents are not supported")
        return base

    def parse_product() -> Poly:
        p = parse_power()
        while peek() in ("*", "var", "("):
            if peek() == "*":
                take()
            p = p * parse_power()
        return p

    def parse_sum() -> Poly:
        sign = 1
        while peek() in ("+", "-"):
            if take() == "-":
                sign = -sign
        p = parse_product() * sign
        while peek() in ("+", "-"):
            sign = 1
            while peek() in ("+", "-"):
                if take() == "-":
                    sign = -sign
            p = p + parse_product() * sign
        return p

    out = parse_sum()
    if peek() != "end":
        raise ParseError(f"trailing input at token {tokens[pos[0]][1]!r}")
    return out
