"""Z2-graded matrix factorisations and their morphisms.

A factorisation is stored as one square odd matrix d over its context with a
parity vector for the basis (even block first for freshly constructed ones,
interleaved for tensor products), satisfying d^2 = potential * Id.  Morphisms
are parity-homogeneous polynomial matrices; homotopies are found by exact
degree-bounded linear solves over Q.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg, polymat
from .ideal import groebner, normal_form, quotient_monomial_basis
from .ring import ContextMismatch, Poly, RingContext, embed, partial_derivative, rename


class FactorisationError(ValueError):
    pass


class MatrixFactorisation:
    """A finite-rank Z2-graded free module with odd differential d, d^2 = W."""

    def __init__(self, ctx: RingContext, potential: Poly, parity, d,
                 labels=None, validate: bool = True, factors=None):
        self.ctx = ctx
        self.potential = embed(potential, ctx)
        self.parity = tuple(parity)
        self.d = [[embed(e, ctx) for e in row] for row in d]
        r = len(self.parity)
        if len(self.d) != r or any(len(row) != r for row in self.d):
            raise FactorisationError("differential shape does not match rank")
        self.labels = tuple(labels) if labels is not None else tuple(
            f"e{i}" for i in range(r))
        self.factors = factors  # (Y, X) for tensor products, else None
        if validate:
            failures = self.validation_failures()
            if failures:
                sample = "; ".join(
                    f"(d^2 - W)[{i}][{j}] = {p}" for i, j, p in failures[:4])
                raise FactorisationError(f"d^2 != W*Id: {sample}")

    # -- structure ----------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.parity)

    @property
    def rank_even(self) -> int:
        return sum(1 for p in self.parity if p == 0)

    @property
    def rank_odd(self) -> int:
        return sum(1 for p in self.parity if p == 1)

    def even_indices(self):
        return [i for i, p in enumerate(self.parity) if p == 0]

    def odd_indices(self):
        return [i for i, p in enumerate(self.parity) if p == 1]

    @property
    def d0(self):
        """The even-to-odd block (rows odd, columns even)."""
        return [[self.d[i][j] for j in self.even_indices()] for i in self.odd_indices()]

    @property
    def d1(self):
        """The odd-to-even block (rows even, columns odd)."""
        return [[self.d[i][j] for j in self.odd_indices()] for i in self.even_indices()]

    def validation_failures(self):
        """Offending entries of d^2 - W*Id (empty iff valid)."""
        out = []
        dd = polymat.mat_mul(self.d, self.d)
        for i in range(self.rank):
            for j in range(self.rank):
                want = self.potential if i == j else self.ctx.zero()
                if dd[i][j] != want:
                    out.append((i, j, dd[i][j] - want))
        for i in range(self.rank):
            for j in range(self.rank):
                if self.parity[i] == self.parity[j] and not self.d[i][j].is_zero():
                    out.append((i, j, self.d[i][j]))
        return out

    def max_entry_degree(self) -> int:
        return max((e.total_degree() for row in self.d for e in row), default=0)

    def identity(self) -> "Morphism":
        return Morphism(self, self, 0, polymat.identity(self.ctx, self.rank))

    def __repr__(self):
        return (f"MatrixFactorisation(rank {self.rank_even}+{self.rank_odd} "
                f"over {self.ctx.names}, W = {self.potential})")


def new_mf(ctx: RingContext, W: Poly, d0, d1, labels=None) -> MatrixFactorisation:
    """Build a factorisation from its two blocks (even basis listed first)."""
    d0 = [[embed(p, ctx) for p in row] for row in d0]
    d1 = [[embed(p, ctx) for p in row] for row in d1]
    re = len(d0[0]) if d0 else (len(d1) if d1 else 0)
    ro = len(d0)
    parity = (0,) * re + (1,) * ro
    d = polymat.zeros(ctx, re + ro, re + ro)
    for a in range(ro):
        for b in range(re):
            d[re + a][b] = d0[a][b]
    for a in range(re):
        for b in range(ro):
            d[a][re + b] = d1[a][b]
    return MatrixFactorisation(ctx, W, parity, d, labels=labels)


def trivial_mf(ctx: RingContext) -> MatrixFactorisation:
    """The rank-(1,0) factorisation of 0 with d = 0 (the ring itself)."""
    return MatrixFactorisation(ctx, ctx.zero(), (0,), [[ctx.zero()]])


@dataclass
class Morphism:
    """A parity-homogeneous map of factorisations (matrix on basis columns).

    Entries live in the merged context of source and target; source entries
    are embedded as needed.
    """

    source: MatrixFactorisation
    target: MatrixFactorisation
    parity: int
    mat: list

    def __post_init__(self):
        ctx = self.target.ctx.merge(self.source.ctx)
        self.ctx = ctx
        self.mat = [[embed(e, ctx) for e in row] for row in self.mat]
        if len(self.mat) != self.target.rank or any(
                len(r) != self.source.rank for r in self.mat):
            raise ValueError("morphism shape mismatch")

    def boundary(self) -> "Morphism":
        """delta(f) = d_T f - (-1)^{|f|} f d_S (zero iff f is closed)."""
        ctx = self.ctx
        dT = [[embed(e, ctx) for e in row] for row in self.target.d]
        dS = [[embed(e, ctx) for e in row] for row in self.source.d]
        out = polymat.mat_sub(
            polymat.mat_mul(dT, self.mat),
            polymat.mat_scale(polymat.mat_mul(self.mat, dS),
                              Fraction(-1) ** self.parity))
        return Morphism(self.source, self.target, self.parity ^ 1, out)

    def is_closed(self) -> bool:
        return polymat.is_zero_matrix(self.boundary().mat)

    def is_zero(self) -> bool:
        return polymat.is_zero_matrix(self.mat)

    def __add__(self, other: "Morphism") -> "Morphism":
        assert self.parity == other.parity
        return Morphism(self.source, self.target, self.parity,
                        polymat.mat_add(self.mat, other.mat))

    def __sub__(self, other: "Morphism") -> "Morphism":
        assert self.parity == other.parity
        return Morphism(self.source, self.target, self.parity,
                        polymat.mat_sub(self.mat, other.mat))

    def __neg__(self) -> "Morphism":
        return self.scale(Fraction(-1))

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, self.parity,
                        polymat.mat_scale(self.mat, c))

    def compose(self, other: "Morphism") -> "Morphism":
        """self after other (other: A -> B, self: B -> C)."""
        a = [[embed(e, self.ctx.merge(other.ctx)) for e in row] for row in self.mat]
        b = [[embed(e, self.ctx.merge(other.ctx)) for e in row] for row in other.mat]
        return Morphism(other.source, self.target,
                        (self.parity + other.parity) % 2, polymat.mat_mul(a, b))

    def __eq__(self, other):
        return (isinstance(other, Morphism)
                and self.parity == other.parity
                and polymat.mat_eq(
                    [[embed(e, self.ctx.merge(other.ctx)) for e in r] for r in self.mat],
                    [[embed(e, self.ctx.merge(other.ctx)) for e in r] for r in other.mat]))


def identity_morphism(X: MatrixFactorisation) -> Morphism:
    return X.identity()


def supertrace(phi) -> Poly:
    """Supertrace of an even endomorphism (Morphism or (matrix, parity))."""
    if isinstance(phi, Morphism):
        if phi.source is not phi.target and phi.source.parity != phi.target.parity:
            raise ValueError("supertrace needs an endomorphism")
        if phi.parity != 0:
            raise ValueError("supertrace needs an even morphism")
        mat, parity = phi.mat, phi.source.parity
    else:
        mat, parity = phi
    acc = None
    for i, p in enumerate(parity):
        t = mat[i][i] if p == 0 else -mat[i][i]
        acc = t if acc is None else acc + t
    return acc


def str_matrix(mat, parity) -> Poly:
    return supertrace((mat, parity))


# -- functors ----------------------------------------------------------------

def dual(X: MatrixFactorisation) -> MatrixFactorisation:
    """The dual factorisation of -W on the dual basis e_i^*."""
    d = [[(X.d[j][i] if X.parity[i] == 0 else -X.d[j][i])
          for j in range(X.rank)] for i in range(X.rank)]
    return MatrixFactorisation(
        X.ctx, -X.potential, X.parity, d,
        labels=tuple(f"{l}*" for l in X.labels))


def dual_morphism(phi: Morphism) -> Morphism:
    """The dual of a morphism: phi^v(nu) = (-1)^{|phi||nu|} nu o phi."""
    rows = phi.source.rank
    cols = phi.target.rank
    mat = [[phi.mat[j][i] * (Fraction(-1) ** (phi.parity * phi.target.parity[j]))
            for j in range(cols)] for i in range(rows)]
    return Morphism(dual(phi.target), dual(phi.source), phi.parity, mat)


def shift(X: MatrixFactorisation, k: int = 1) -> MatrixFactorisation:
    """Parity flip with negated differential, applied k mod 2 times."""
    if k % 2 == 0:
        return MatrixFactorisation(X.ctx, X.potential, X.parity, X.d,
                                   labels=X.labels, validate=False,
                                   factors=X.factors)
    return MatrixFactorisation(
        X.ctx, X.potential, tuple(p ^ 1 for p in X.parity),
        polymat.mat_scale(X.d, Fraction(-1)), labels=X.labels, validate=False)


def mf_rename(X: MatrixFactorisation, mapping) -> MatrixFactorisation:
    """Rename the context variables of a factorisation (injective by name)."""
    new_names = [mapping.get(n, n) for n in X.ctx.names]
    ctx = RingContext(new_names)
    d = [[rename(e, mapping, target_ctx=ctx) for e in row] for row in X.d]
    pot = rename(X.potential, mapping, target_ctx=ctx)
    return MatrixFactorisation(ctx, pot, X.parity, d, labels=X.labels,
                               validate=False)


def embed_mf(X: MatrixFactorisation, ctx: RingContext) -> MatrixFactorisation:
    return MatrixFactorisation(ctx, embed(X.potential, ctx), X.parity,
                               [[embed(e, ctx) for e in row] for row in X.d],
                               labels=X.labels, validate=False, factors=X.factors)


def tensor(Y: MatrixFactorisation, X: MatrixFactorisation,
           validate: bool = False) -> MatrixFactorisation:
    """Tensor product factorisation with Koszul signs.

    Basis is the flat row-major pair basis (a, b) -> a * rank(X) + b with
    parity sums; shared middle variables are identified by name through the
    merged context; the potential is the sum of the two potentials.
    """
    ctx = Y.ctx.merge(X.ctx)
    ry, rx = Y.rank, X.rank
    parity = tuple((Y.parity[a] + X.parity[b]) % 2
                   for a in range(ry) for b in range(rx))
    dY = [[embed(e, ctx) for e in row] for row in Y.d]
    dX = [[embed(e, ctx) for e in row] for row in X.d]
    d = polymat.zeros(ctx, ry * rx, ry * rx)
    for a in range(ry):
        for b in range(rx):
            col = a * rx + b
            for i in range(ry):
                if not dY[i][a].is_zero():
                    d[i * rx + b][col] = d[i * rx + b][col] + dY[i][a]
            sgn = Fraction(-1) ** Y.parity[a]
            for j in range(rx):
                if not dX[j][b].is_zero():
                    d[a * rx + j][col] = d[a * rx + j][col] + dX[j][b] * sgn
    pot = embed(Y.potential, ctx) + embed(X.potential, ctx)
    labels = tuple(f"{ly}(x){lx}" for ly in Y.labels for lx in X.labels)
    return MatrixFactorisation(ctx, pot, parity, d, labels=labels,
                               validate=validate, factors=(Y, X))


def tensor_morphism(f: Morphism, g: Morphism) -> Morphism:
    """(f (x) g)(y (x) x) = (-1)^{|g||y|} f(y) (x) g(x)."""
    S = tensor(f.source, g.source)
    T = tensor(f.target, g.target)
    ctx = T.ctx.merge(S.ctx).merge(f.ctx).merge(g.ctx)
    rxs, rxt = g.source.rank, g.target.rank
    mat = polymat.zeros(ctx, T.rank, S.rank)
    for a in range(f.source.rank):
        sgn = Fraction(-1) ** (g.parity * f.source.parity[a])
        for i in range(f.target.rank):
            fe = embed(f.mat[i][a], ctx)
            if fe.is_zero():
                continue
            for b in range(rxs):
                for j in range(rxt):
                    ge = embed(g.mat[j][b], ctx)
                    if ge.is_zero():
                        continue
                    mat[i * rxt + j][a * rxs + b] = (
                        mat[i * rxt + j][a * rxs + b] + fe * ge * sgn)
    return Morphism(S, T, (f.parity + g.parity) % 2, mat)


# -- homotopies ---------------------------------------------------------------

@dataclass
class Homotopy:
    source: MatrixFactorisation
    target: MatrixFactorisation
    parity: int
    mat: list
    degree_bound: int

    def as_morphism(self) -> Morphism:
        return Morphism(self.source, self.target, self.parity, self.mat)

    def verifies(self, phi: Morphism) -> bool:
        """Exact check d h + (-1)^{|h|+1} ... i.e. boundary(h) == phi."""
        return self.as_morphism().boundary() == phi


def _monomials_up_to(ctx: RingContext, bound: int):
    n = len(ctx.names)
    if n == 0:
        return [()] if bound >= 0 else []
    out = []
    for exp in itertools.product(range(bound + 1), repeat=n):
        if sum(exp) <= bound:
            out.append(exp)
    out.sort()
    return out


def default_homotopy_bound(phi: Morphism) -> int:
    degs = [phi.source.potential.total_degree(), 0,
            phi.source.max_entry_degree(), phi.target.max_entry_degree(),
            max((e.total_degree() for row in phi.mat for e in row), default=0)]
    return max(degs[0], 0) + max(degs[1:])


def null_homotopy_search(phi: Morphism, degree_bound: int | None = None):
    """Exact witness h with boundary(h) = phi, entry degrees <= bound, or None.

    The linear system on the unknown coefficients is solved over Q; a found
    witness is re-verified exactly before being returned.
    """
    if degree_bound is None:
        degree_bound = default_homotopy_bound(phi)
    ctx = phi.ctx
    S, T = phi.source, phi.target
    hpar = phi.parity ^ 1
    monos = _monomials_up_to(ctx, degree_bound)
    slots = [(i, j) for i in range(T.rank) for j in range(S.rank)
             if (T.parity[i] + S.parity[j]) % 2 == hpar]
    unknowns = [(i, j, m) for (i, j) in slots for m in monos]
    if not unknowns:
        return None if not phi.is_zero() else Homotopy(
            S, T, hpar, polymat.zeros(ctx, T.rank, S.rank), degree_bound)

    dT = [[embed(e, ctx) for e in row] for row in T.d]
    dS = [[embed(e, ctx) for e in row] for row in S.d]
    sgn = Fraction(-1) ** hpar

    # For unknown slot (i, j): boundary contribution to entry (r, j) via
    # dT[r][i], and to entry (i, c) via -(-1)^{|h|} dS[j][c].
    rows_index = {}
    columns = []
    for (i, j, m) in unknowns:
        col = {}
        for r in range(T.rank):
            e = dT[r][i]
            for exp, c in e.terms.items():
                key = (r, j, tuple(x + y for x, y in zip(exp, m)))
                col[key] = col.get(key, Fraction(0)) + c
        for c_ in range(S.rank):
            e = dS[j][c_]
            for exp, cc in e.terms.items():
                key = (i, c_, tuple(x + y for x, y in zip(exp, m)))
                col[key] = col.get(key, Fraction(0)) - sgn * cc
        columns.append(col)
        for key in col:
            rows_index.setdefault(key, len(rows_index))
    rhs_entries = {}
    for i in range(T.rank):
        for j in range(S.rank):
            for exp, c in phi.mat[i][j].terms.items():
                key = (i, j, exp)
                rhs_entries[key] = c
                rows_index.setdefault(key, len(rows_index))
    nrows = len(rows_index)
    matrix = [[Fraction(0)] * len(unknowns) for _ in range(nrows)]
    for k, col in enumerate(columns):
        for key, c in col.items():
            matrix[rows_index[key]][k] = c
    rhs = [Fraction(0)] * nrows
    for key, c in rhs_entries.items():
        rhs[rows_index[key]] = c
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        return None
    hmat = polymat.zeros(ctx, T.rank, S.rank)
    for val, (i, j, m) in zip(sol, unknowns):
        if val:
            hmat[i][j] = hmat[i][j] + Poly(ctx, {m: val})
    h = Homotopy(S, T, hpar, hmat, degree_bound)
    assert h.verifies(phi), "homotopy witness failed exact re-verification"
    return h


def homotopic(f: Morphism, g: Morphism, degree_bound: int | None = None):
    """A homotopy witness for f - g, or None."""
    return null_homotopy_search(f - g, degree_bound)


@dataclass
class NullHomotopySet:
    """Per-variable odd endomorphisms with [d, lambda_v] = sign * dW_v * Id."""

    mf: MatrixFactorisation
    side: str                    # 'source' or 'target'
    entries: dict                # name -> Morphism (odd endomorphism)
    order: tuple = ()            # variable names in operator order

    def product(self):
        """The composite Lambda = lambda_1 o ... o lambda_n as a matrix."""
        ctx = self.mf.ctx
        out = polymat.identity(ctx, self.mf.rank)
        for name in self.order:
            out = polymat.mat_mul(out, self.entries[name].mat)
        return out

    def permuted_product(self, sigma):
        """Lambda with factors permuted: lambda_{sigma(1)} ... lambda_{sigma(n)}."""
        ctx = self.mf.ctx
        out = polymat.identity(ctx, self.mf.rank)
        for s in sigma:
            out = polymat.mat_mul(out, self.entries[self.order[s - 1]].mat)
        return out


def default_null_homotopies(X: MatrixFactorisation, var_names,
                            side: str = "source") -> NullHomotopySet:
    """lambda_v = -d/dv(d_X) for source-side vars, +d/dv(d_X) for target-side.

    Each entry is verified exactly: [d, lambda_v] = -(resp +) d/dv(potential).
    """
    if side not in ("source", "target"):
        raise ValueError("side must be 'source' or 'target'")
    sgn = Fraction(-1) if side == "source" else Fraction(1)
    entries = {}
    for name in var_names:
        lam = polymat.mat_scale(
            polymat.mat_map(lambda e: partial_derivative(e, name), X.d), sgn)
        m = Morphism(X, X, 1, lam)
        comm = polymat.mat_add(polymat.mat_mul(X.d, lam),
                               polymat.mat_mul(lam, X.d))
        want = partial_derivative(X.potential, name) * sgn
        for i in range(X.rank):
            for j in range(X.rank):
                expect = want if i == j else X.ctx.zero()
                if comm[i][j] != expect:
                    raise FactorisationError(
                        f"[d, lambda_{name}] != {sgn}*dW/d{name}*Id at ({i},{j})")
        entries[name] = m
    return NullHomotopySet(mf=X, side=side, entries=entries,
                           order=tuple(var_names))


# -- finite-rank reduction ----------------------------------------------------

def finite_rank_reduction(Z: MatrixFactorisation, fs,
                          homotopies=None, degree_bound: int | None = None,
                          check: bool = True):
    """Z (x) R/(fs): basis = standard monomials x basis of Z, entries reduced.

    Requires the quotient by (fs) to be finite-dimensional and (when check is
    set) each f to act null-homotopically on Z, via supplied or searched
    homotopies.  Returns (Zbar, reduction_info).
    """
    ctx = Z.ctx
    fs = [embed(f, ctx) for f in fs]
    gb = groebner(fs)
    qb = quotient_monomial_basis(gb)
    if not qb.finite:
        raise FactorisationError(
            f"quotient by (fs) infinite (unbounded variable {qb.witness})")
    if check:
        for f in fs:
            phi = Morphism(Z, Z, 0, polymat.mat_scale(
                polymat.identity(ctx, Z.rank), f))
            if homotopies is not None and f in homotopies:
                h = homotopies[f]
                if not (h.as_morphism().boundary() == phi):
                    raise FactorisationError(
                        f"supplied homotopy for {f} fails verification")
            else:
                if null_homotopy_search(phi, degree_bound) is None:
                    raise FactorisationError(
                        f"{f} does not act null-homotopically up to the bound")
    monos = qb.monomials
    mono_pos = {m: a for a, m in enumerate(monos)}
    r = Z.rank
    qctx = RingContext(())
    rank = len(monos) * r
    parity = tuple(Z.parity[i] for _a in monos for i in range(r))
    dbar = polymat.zeros(qctx, rank, rank)
    for a, m in enumerate(monos):
        g_a = Poly(ctx, {m: Fraction(1)})
        for i in range(r):
            for j in range(r):
                if Z.d[j][i].is_zero():
                    continue
                nf = normal_form(g_a * Z.d[j][i], gb)
                for exp, c in nf.terms.items():
                    if exp not in mono_pos:
                        raise FactorisationError(
                            "normal form left the standard-monomial basis")
                    b = mono_pos[exp]
                    dbar[b * r + j][a * r + i] = dbar[b * r + j][a * r + i] + qctx.const(c)
    potbar = normal_form(Z.potential, gb)
    if not potbar.is_constant():
        raise FactorisationError(
            f"potential does not reduce to a constant: {potbar}")
    zbar = MatrixFactorisation(qctx, qctx.const(potbar.constant_value()),
                               parity, dbar, validate=True)
    info = {"monomials": monos, "ideal": [str(f) for f in fs],
            "source_rank": r}
    return zbar, info
