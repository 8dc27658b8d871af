"""Topological invariants of Landau-Ginzburg models.

Jacobi rings of bulk fields, defect operators with field insertions, quantum
dimensions and Chern characters, the bulk and boundary (Kapustin-Li)
pairings, truncated morphism cohomology, the Cardy identity, and the shadow
and generalised boundary-bulk maps.  Everything is exact over the rationals.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg, polymat, signs
from .adjunction import AdjointData, _project, evaluate_residue_entry
from .ideal import (GRLEX, GroebnerBasis, QuotientBasis, groebner,
                    normal_form, quotient_monomial_basis)
from .mf import (MatrixFactorisation, Morphism, str_matrix, _monomials_up_to)
from .ring import Poly, RingContext, embed, partial_derivative


class ParityWarning(UserWarning):
    """The closed defect formulas are asserted only for even variable counts;
    the raw residue is still computed and flagged."""


# -- Jacobi rings ------------------------------------------------------------

class JacobiRing:
    """k[x]/(dW/dx_1, ..., dW/dx_n) with its standard-monomial basis."""

    def __init__(self, W: Poly, order=GRLEX):
        self.potential = W
        self.ctx = W.ctx
        self.order = order
        self.partials = tuple(partial_derivative(W, name)
                              for name in self.ctx.names)
        if self.partials:
            self.gb = groebner(list(self.partials), order)
            self.basis = quotient_monomial_basis(self.gb)
            if not self.basis.finite:
                raise ValueError(
                    f"Jacobi ideal has infinite colength "
                    f"(unbounded in {self.basis.witness})")
        else:
            self.gb = None
            self.basis = QuotientBasis([()])

    @property
    def dimension(self) -> int:
        return self.basis.dimension

    def reduce(self, p) -> "JacobiElement":
        if isinstance(p, JacobiElement):
            if p.ring.ctx != self.ctx:
                raise ValueError("element of a different Jacobi ring")
            p = p.rep
        p = embed(p, self.ctx) if p.ctx != self.ctx else p
        rep = p if self.gb is None else normal_form(p, self.gb)
        return JacobiElement(self, rep)

    def one(self) -> "JacobiElement":
        return JacobiElement(self, self.ctx.one())

    def zero(self) -> "JacobiElement":
        return JacobiElement(self, self.ctx.zero())

    def coordinates(self, el: "JacobiElement"):
        """Coefficient vector of a (normal-form) element over the basis."""
        vec = []
        seen = dict(el.rep.terms)
        for mono in self.basis.monomials:
            vec.append(seen.pop(mono, Fraction(0)))
        if seen:
            raise ValueError("representative is not in normal form")
        return vec

    def basis_elements(self):
        return [JacobiElement(self, self.ctx.poly({m: Fraction(1)}))
                for m in self.basis.monomials]

    def __eq__(self, other):
        return (isinstance(other, JacobiRing)
                and self.ctx == other.ctx
                and self.potential == other.potential)

    def __repr__(self):
        return (f"JacobiRing({self.potential!r}, dim={self.dimension})")


@dataclass(frozen=True)
class JacobiElement:
    """A bulk field: the normal form of a polynomial modulo (dW)."""

    ring: JacobiRing
    rep: Poly

    def __add__(self, other):
        return self.ring.reduce(self.rep + _rep(other, self.ring))

    def __sub__(self, other):
        return self.ring.reduce(self.rep - _rep(other, self.ring))

    def __neg__(self):
        return JacobiElement(self.ring, -self.rep)

    def __mul__(self, other):
        return self.ring.reduce(self.rep * _rep(other, self.ring))

    def scale(self, c):
        return JacobiElement(self.ring, self.rep * Fraction(c))

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def __eq__(self, other):
        if isinstance(other, JacobiElement):
            return self.ring == other.ring and self.rep == other.rep
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring.ctx), tuple(sorted(self.rep.terms.items()))))

    def __repr__(self):
        return f"[{self.rep!r}]"


def _rep(other, ring: JacobiRing) -> Poly:
    if isinstance(other, JacobiElement):
        return other.rep
    if isinstance(other, Poly):
        return other
    return ring.ctx.const(Fraction(other))


def jacobi_class(p: Poly, W) -> JacobiElement:
    """The class of p in k[x]/(dW); W may be a potential or a JacobiRing."""
    ring = W if isinstance(W, JacobiRing) else JacobiRing(W)
    return ring.reduce(p)


# -- defect operators --------------------------------------------------------

@dataclass
class DefectOperator:
    """A linear map Jac(source) -> Jac(target), stored by basis images."""

    source: JacobiRing
    target: JacobiRing
    images: list  # JacobiElement per source basis monomial

    def apply(self, el) -> JacobiElement:
        if isinstance(el, Poly) or not isinstance(el, JacobiElement):
            el = self.source.reduce(el if isinstance(el, Poly)
                                    else self.source.ctx.const(Fraction(el)))
        coords = self.source.coordinates(self.source.reduce(el))
        acc = self.target.zero()
        for c, img in zip(coords, self.images):
            if c:
                acc = acc + img.scale(c)
        return acc

    def __call__(self, el) -> JacobiElement:
        return self.apply(el)

    def matrix(self):
        """Columns over the source basis, rows over the target basis."""
        return polymat_transpose(
            [self.target.coordinates(img) for img in self.images])

    def compose(self, other: "DefectOperator") -> "DefectOperator":
        """self after other."""
        if other.target != self.source:
            raise ValueError("operators are not composable")
        return DefectOperator(other.source, self.target,
                              [self.apply(img) for img in other.images])

    def scale(self, c) -> "DefectOperator":
        return DefectOperator(self.source, self.target,
                              [img.scale(c) for img in self.images])

    def is_identity(self) -> bool:
        """Identity under the canonical identification of the quotient bases
        (the source may live in renamed copies of the target variables)."""
        if self.source.basis.monomials != self.target.basis.monomials:
            return False
        ident = [[Fraction(1) if i == j else Fraction(0)
                  for j in range(self.source.dimension)]
                 for i in range(self.target.dimension)]
        return self.matrix() == ident

    def __eq__(self, other):
        return (isinstance(other, DefectOperator)
                and self.source == other.source
                and self.target == other.target
                and [i.rep for i in self.images] == [i.rep for i in other.images])


def polymat_transpose(rows):
    if not rows:
        return []
    return [[rows[i][j] for i in range(len(rows))]
            for j in range(len(rows[0]))]


def identity_operator(ring: JacobiRing) -> DefectOperator:
    return DefectOperator(ring, ring, ring.basis_elements())


def _insertion_matrix(data: AdjointData, Phi):
    ctx = data.base.ctx
    if Phi is None:
        return polymat.identity(ctx, data.base.rank)
    if isinstance(Phi, Morphism):
        if Phi.parity != 0:
            raise ValueError("field insertion must be even")
        Phi = Phi.mat
    return [[embed(e, ctx) for e in row] for row in Phi]


def defect_supertrace(data: AdjointData, Phi=None) -> Poly:
    """str(Phi dd/dx_1 ... dd/dx_n dd/dz_1 ... dd/dz_m) over the joint ring."""
    prod = _insertion_matrix(data, Phi)
    for name in data.source_names + data.target_names:
        D = [[partial_derivative(e, name) for e in row] for row in data.base.d]
        prod = polymat.mat_mul(prod, D)
    return str_matrix(prod, data.base.parity)


def _parity_warn(data: AdjointData):
    if data.n % 2 or data.m % 2:
        warnings.warn(
            f"defect operator evaluated with odd variable count "
            f"(n={data.n}, m={data.m}); the closed formula is asserted "
            f"only for even counts", ParityWarning, stacklevel=3)


def _defect_rings(data: AdjointData):
    return JacobiRing(data.source_potential), JacobiRing(data.target_potential)


def defect_operator_right(data: AdjointData, Phi=None,
                          rings=None) -> DefectOperator:
    """Wrapping the defect around a source bulk insertion: Jac(W) -> Jac(V)."""
    _parity_warn(data)
    src, tgt = rings if rings is not None else _defect_rings(data)
    integrand = defect_supertrace(data, Phi)
    sign = signs.minus_one_to(signs.binom2(data.m + 1))
    dens = [embed(p, data.base.ctx) for p in src.partials]
    images = []
    for b in src.basis_elements():
        num = embed(b.rep, data.base.ctx) * integrand
        res = evaluate_residue_entry(num, data.source_names, dens)
        images.append(tgt.reduce(_project(res, tgt.ctx) * Fraction(sign)))
    return DefectOperator(src, tgt, images)


def defect_operator_left(data: AdjointData, Phi=None,
                         rings=None) -> DefectOperator:
    """The mirrored wrap on target bulk insertions: Jac(V) -> Jac(W)."""
    _parity_warn(data)
    src, tgt = rings if rings is not None else _defect_rings(data)
    integrand = defect_supertrace(data, Phi)
    sign = signs.minus_one_to(signs.binom2(data.n + 1))
    dens = [embed(p, data.base.ctx) for p in tgt.partials]
    images = []
    for b in tgt.basis_elements():
        num = embed(b.rep, data.base.ctx) * integrand
        res = evaluate_residue_entry(num, data.target_names, dens)
        images.append(src.reduce(_project(res, src.ctx) * Fraction(sign)))
    return DefectOperator(tgt, src, images)


def defect_action_right(data: AdjointData, psi, Phi=None) -> JacobiElement:
    return defect_operator_right(data, Phi).apply(psi)


def defect_action_left(data: AdjointData, phi, Phi=None) -> JacobiElement:
    return defect_operator_left(data, Phi).apply(phi)


def quantum_dim(data: AdjointData, side: str = "right") -> JacobiElement:
    """The image of 1 under the chosen defect action."""
    if side == "right":
        op = defect_operator_right(data)
    elif side == "left":
        op = defect_operator_left(data)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return op.apply(op.source.one())


def dual_defect(data: AdjointData) -> AdjointData:
    """The dual factorisation read as a defect in the opposite direction."""
    from .mf import dual
    return AdjointData(dual(data.base), data.target_potential,
                       data.source_potential, validate=False)


def shifted_defect(data: AdjointData, k: int = 1) -> AdjointData:
    from .mf import shift
    return AdjointData(shift(data.base, k), data.source_potential,
                       data.target_potential, validate=False)


# -- boundary-bulk and bulk-boundary -----------------------------------------

def boundary_bulk(X: MatrixFactorisation, psi, ring=None) -> JacobiElement:
    """The boundary-bulk map: (-1)^{C(n+1,2)} str(psi dd/dx_1...dd/dx_n)."""
    ring = JacobiRing(X.potential) if ring is None else ring
    n = len(ring.ctx.names)
    if isinstance(psi, Morphism):
        mat = [[embed(e, X.ctx) for e in row] for row in psi.mat]
    else:
        mat = [[embed(e, X.ctx) for e in row] for row in psi]
    prod = mat
    for name in ring.ctx.names:
        D = [[partial_derivative(e, name) for e in row] for row in X.d]
        prod = polymat.mat_mul(prod, D)
    sign = signs.minus_one_to(signs.binom2(n + 1))
    return ring.reduce(str_matrix(prod, X.parity) * Fraction(sign))


def chern_character(X: MatrixFactorisation, ring=None) -> JacobiElement:
    return boundary_bulk(X, X.identity(), ring=ring)


def bulk_boundary(X: MatrixFactorisation, phi) -> Morphism:
    """phi . Id_X: a bulk field acting as a central boundary endomorphism."""
    rep = phi.rep if isinstance(phi, JacobiElement) else phi
    rep = embed(rep, X.ctx)
    mat = polymat.mat_scale(polymat.identity(X.ctx, X.rank), Fraction(1))
    mat = [[e * rep for e in row] for row in mat]
    return Morphism(X, X, 0, mat)


# -- pairings ----------------------------------------------------------------

def _constant(p: Poly) -> Fraction:
    if p.is_zero():
        return Fraction(0)
    if not p.is_constant():
        raise ValueError(f"residue did not evaluate to a scalar: {p!r}")
    return p.constant_value()


def bulk_pairing(phi1, phi2, W) -> Fraction:
    """The two-point bulk correlator Res[phi1 phi2 dx / dW]."""
    ring = W if isinstance(W, JacobiRing) else JacobiRing(W)
    p = _rep(phi1, ring) * embed(_rep(phi2, ring), ring.ctx)
    dens = list(ring.partials)
    if not dens:
        return _constant(p)
    res = evaluate_residue_entry(embed(p, ring.ctx), ring.ctx.names, dens)
    return _constant(res)


def kapustin_li_pairing(psi1, psi2, X: MatrixFactorisation,
                        ring=None) -> Fraction:
    """The boundary correlator Res[str(psi1 psi2 dd...dd) dx / dW]."""
    ring = JacobiRing(X.potential) if ring is None else ring
    m1 = psi1.mat if isinstance(psi1, Morphism) else psi1
    m2 = psi2.mat if isinstance(psi2, Morphism) else psi2
    ctx = X.ctx
    prod = polymat.mat_mul([[embed(e, ctx) for e in r] for r in m1],
                           [[embed(e, ctx) for e in r] for r in m2])
    for name in ring.ctx.names:
        D = [[partial_derivative(e, name) for e in row] for row in X.d]
        prod = polymat.mat_mul(prod, D)
    num = str_matrix(prod, X.parity)
    dens = list(ring.partials)
    if not dens:
        return _constant(num)
    res = evaluate_residue_entry(embed(num, ctx), ring.ctx.names, dens)
    return _constant(res)


def bulk_gram_matrix(W) -> list:
    """The bulk pairing on the monomial basis of the Jacobi ring."""
    ring = W if isinstance(W, JacobiRing) else JacobiRing(W)
    els = ring.basis_elements()
    return [[bulk_pairing(a, b, ring) for b in els] for a in els]


# -- morphism cohomology -----------------------------------------------------

@dataclass
class HomCohomology:
    """Even/odd cohomology of the morphism complex, truncated by degree."""

    X: MatrixFactorisation
    Y: MatrixFactorisation
    bound: int
    h0: list                    # list of closed even Morphisms
    h1: list                    # list of closed odd Morphisms
    stable: bool                # dimensions agree at bound + 1
    _coords: dict = field(default_factory=dict, repr=False)

    @property
    def dimensions(self):
        return (len(self.h0), len(self.h1))


def _positions(X, Y, parity):
    return [(i, j) for i in range(Y.rank) for j in range(X.rank)
            if (Y.parity[i] + X.parity[j]) % 2 == parity]


def _vectorise_columns(X, Y, parity, bound, ctx):
    """The boundary map on degree-bounded parity-homogeneous matrices.

    Returns (domain basis [(i, j, exp)], list of output coefficient dicts
    keyed by (a, b, exp)).
    """
    monos = _monomials_up_to(ctx, bound)
    dom = [(i, j, mu) for (i, j) in _positions(X, Y, parity) for mu in monos]
    dY = [[embed(e, ctx) for e in row] for row in Y.d]
    dX = [[embed(e, ctx) for e in row] for row in X.d]
    sgn = Fraction(-1) ** parity
    cols = []
    for (i, j, mu) in dom:
        mono = ctx.poly({mu: Fraction(1)})
        out = {}
        for a in range(Y.rank):
            p = dY[a][i] * mono
            for exp, c in p.terms.items():
                key = (a, j, exp)
                out[key] = out.get(key, Fraction(0)) + c
        for b in range(X.rank):
            p = mono * dX[j][b]
            for exp, c in p.terms.items():
                key = (i, b, exp)
                out[key] = out.get(key, Fraction(0)) - sgn * c
        cols.append({k: v for k, v in out.items() if v})
    return dom, cols


def _nullspace_of_columns(dom, cols):
    keys = sorted({k for col in cols for k in col})
    index = {k: r for r, k in enumerate(keys)}
    matrix = [[Fraction(0)] * len(dom) for _ in keys]
    for c, col in enumerate(cols):
        for k, v in col.items():
            matrix[index[k]][c] = v
    return linalg.nullspace(matrix, n=len(dom))


def _morphism_vector(phi: Morphism, ctx):
    out = {}
    for i, row in enumerate(phi.mat):
        for j, e in enumerate(row):
            for exp, c in embed(e, ctx).terms.items():
                out[(i, j, exp)] = c
    return out


def _dicts_to_vectors(dicts):
    keys = sorted({k for d in dicts for k in d})
    index = {k: r for r, k in enumerate(keys)}
    vecs = []
    for d in dicts:
        v = [Fraction(0)] * len(keys)
        for k, c in d.items():
            v[index[k]] = c
        vecs.append(v)
    return keys, vecs


def _cohomology_at(X, Y, parity, bound, ctx):
    """Harvest cocycle/coboundary data for one parity at one degree bound."""
    dom, cols = _vectorise_columns(X, Y, parity, bound, ctx)
    cocycles = _nullspace_of_columns(dom, cols)
    dom1, cols1 = _vectorise_columns(X, Y, parity ^ 1, bound, ctx)
    reps = []
    for vec in cocycles:
        d = {}
        for (i, j, mu), c in zip(dom, vec):
            if c:
                d[(i, j, mu)] = d.get((i, j, mu), Fraction(0)) + c
        reps.append(d)
    return reps, cols1, dom


def _select_classes(reps, coboundaries):
    keys, vecs = _dicts_to_vectors(list(coboundaries) + list(reps))
    span = linalg.Span(len(keys))
    for v in vecs[:len(coboundaries)]:
        span.add(v)
    chosen = []
    for d, v in zip(reps, vecs[len(coboundaries):]):
        if span.add(v):
            chosen.append(d)
    return chosen


def _dict_to_morphism(d, X, Y, parity, ctx):
    mat = [[ctx.zero() for _ in range(X.rank)] for _ in range(Y.rank)]
    for (i, j, exp), c in d.items():
        mat[i][j] = mat[i][j] + ctx.poly({exp: c})
    return Morphism(X, Y, parity, mat)


def _dims_at(X, Y, bound, ctx):
    out = []
    for parity in (0, 1):
        reps, cob, _ = _cohomology_at(X, Y, parity, bound, ctx)
        out.append(len(_select_classes(reps, cob)))
    return tuple(out)


def default_cohomology_bound(X: MatrixFactorisation) -> int:
    return 2 * max(1, X.potential.total_degree())


def hom_cohomology(X: MatrixFactorisation, Y: MatrixFactorisation,
                   degree_bound: int | None = None) -> HomCohomology:
    """Cocycles modulo coboundaries on entries of degree <= degree_bound."""
    if X.potential != Y.potential:
        raise ValueError("factorisations of different potentials")
    bound = default_cohomology_bound(X) if degree_bound is None else degree_bound
    ctx = Y.ctx.merge(X.ctx)
    classes = {}
    for parity in (0, 1):
        reps, cob, _ = _cohomology_at(X, Y, parity, bound, ctx)
        classes[parity] = _select_classes(reps, cob)
    stable = ((len(classes[0]), len(classes[1]))
              == _dims_at(X, Y, bound + 1, ctx))
    h0 = [_dict_to_morphism(d, X, Y, 0, ctx) for d in classes[0]]
    h1 = [_dict_to_morphism(d, X, Y, 1, ctx) for d in classes[1]]
    return HomCohomology(X=X, Y=Y, bound=bound, h0=h0, h1=h1, stable=stable)


# -- the Cardy identity ------------------------------------------------------

@dataclass
class CardyReport:
    lhs: Fraction
    rhs: Fraction
    equal: bool
    stable: bool
    bound: int
    dimensions: tuple


def _cohomology_supertrace(coh: HomCohomology, phi: Morphism,
                           psi: Morphism) -> Fraction:
    """Supertrace of alpha -> psi o alpha o phi on the truncated cohomology."""
    X, Y = coh.X, coh.Y
    ctx = Y.ctx.merge(X.ctx)
    total = Fraction(0)
    for parity, basis in ((0, coh.h0), (1, coh.h1)):
        if not basis:
            continue
        # coboundary columns at the bound itself do not always contain the
        # composite's class; recompute them at the composite's degree
        deg = max([coh.bound]
                  + [e.total_degree()
                     for b in basis
                     for row in psi.compose(b).compose(phi).mat
                     for e in row if not e.is_zero()])
        _, cob, _ = _cohomology_at(X, Y, parity, deg, ctx)
        images = [psi.compose(b).compose(phi) for b in basis]
        dicts = (list(cob)
                 + [_morphism_vector(b, ctx) for b in basis]
                 + [_morphism_vector(im, ctx) for im in images])
        keys, vecs = _dicts_to_vectors(dicts)
        span = linalg.Span(len(keys))
        for v in vecs[:len(cob)]:
            span.add(v)
        bas = [span.reduce(v) for v in vecs[len(cob):len(cob) + len(basis)]]
        ims = [span.reduce(v) for v in vecs[len(cob) + len(basis):]]
        matrix = polymat_transpose(bas)
        for k, im in enumerate(ims):
            sol = linalg.solve(matrix, im)
            if sol is None:
                raise ValueError("composite class escapes the truncated basis")
            total += (Fraction(1) if parity == 0 else Fraction(-1)) * sol[k]
    return total


def cardy_check(X: MatrixFactorisation, Y: MatrixFactorisation,
                phi: Morphism | None = None, psi: Morphism | None = None,
                degree_bound: int | None = None) -> CardyReport:
    """Both sides of the Cardy condition for the pair (X, Y).

    lhs: the supertrace of alpha -> psi o alpha o phi on the cohomology of
    the morphism complex.  rhs: (-1)^{C(n+1,2)} Res[beta_X(phi) beta_Y(psi)
    dx / dW].
    """
    phi = X.identity() if phi is None else phi
    psi = Y.identity() if psi is None else psi
    ring = JacobiRing(X.potential)
    n = len(ring.ctx.names)
    coh = hom_cohomology(X, Y, degree_bound)
    lhs = _cohomology_supertrace(coh, phi, psi)
    bx = boundary_bulk(X, phi, ring=ring)
    by = boundary_bulk(Y, psi, ring=ring)
    sign = signs.minus_one_to(signs.binom2(n + 1))
    rhs = Fraction(sign) * bulk_pairing(bx, by, ring)
    return CardyReport(lhs=lhs, rhs=rhs, equal=(lhs == rhs),
                       stable=coh.stable, bound=coh.bound,
                       dimensions=coh.dimensions)


# -- shadows and the generalised boundary-bulk map ---------------------------

@dataclass
class ShadowDescription:
    """The shadow of the unit: the Jacobi ring placed in parity n mod 2."""

    ring: JacobiRing
    parity: int

    @property
    def dimension(self) -> int:
        return self.ring.dimension

    @property
    def monomials(self):
        return self.ring.basis.monomials


def shadow_of_unit(W: Poly) -> ShadowDescription:
    ring = W if isinstance(W, JacobiRing) else JacobiRing(W)
    return ShadowDescription(ring=ring, parity=len(ring.ctx.names) % 2)


def generalized_boundary_bulk(data: AdjointData, psi) -> JacobiElement:
    """(-1)^{C(m+1,2)} Res_z[str(psi dd/dx...dd/dz...) dz / dV] in Jac(W)."""
    ring = JacobiRing(data.source_potential)
    target_ring = JacobiRing(data.target_potential)
    if isinstance(psi, Morphism):
        Phi = psi
    else:
        Phi = Morphism(data.base, data.base, 0, psi)
    prod = [[embed(e, data.base.ctx) for e in row] for row in Phi.mat]
    for name in data.source_names + data.target_names:
        D = [[partial_derivative(e, name) for e in row] for row in data.base.d]
        prod = polymat.mat_mul(prod, D)
    num = str_matrix(prod, data.base.parity)
    sign = signs.minus_one_to(signs.binom2(data.m + 1))
    dens = [embed(p, data.base.ctx) for p in target_ring.partials]
    if data.m:
        res = evaluate_residue_entry(num, data.target_names, dens)
    else:
        res = num
    return ring.reduce(_project(res, ring.ctx) * Fraction(sign))
