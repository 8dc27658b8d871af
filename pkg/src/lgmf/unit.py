"""The Koszul stabilised diagonal Delta_W and its structure maps.

Contains the unit factorisation (including its variable-ordering variants),
the stabilisation map pi, the unit actions lambda/rho with their explicit
inverses, the comparison maps Psi/Phi/epsilon, lifting of maps-to-R through
the stabilisation, and the permutation isomorphism between stabilisations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import polymat, signs
from .ideal import check_potential
from .mf import (FactorisationError, MatrixFactorisation, Morphism, mf_rename,
                 tensor)
from .ring import (Poly, RingContext, divided_difference,
                   divided_difference_ordered, embed, primed_name, rename,
                   substitute)


class KoszulUnit(MatrixFactorisation):
    """The stabilised diagonal: exterior algebra on theta-generators.

    Basis: subsets of the variable set ordered by (cardinality, lex), parity
    the subset size mod 2; differential delta_+ + delta_- built from the
    (optionally permuted) difference quotients of W and the linear forms
    x_i - x_i'.
    """

    def __init__(self, W, base_names, prime_names, sigma, ctx, parity, d,
                 subsets):
        super().__init__(ctx, embed(W, ctx) - substitute(
            embed(W, ctx), dict(zip(base_names, prime_names))),
            parity, d, validate=True)
        self.W = W
        self.base_names = tuple(base_names)
        self.prime_names = tuple(prime_names)
        self.sigma = sigma
        self.subsets = subsets

    @property
    def n(self) -> int:
        return len(self.base_names)

    @property
    def pairs(self):
        return list(zip(self.base_names, self.prime_names))

    def subset_index(self, subset) -> int:
        return self.subsets.index(tuple(subset))

    def renamed(self, mapping) -> "KoszulUnit":
        plain = mf_rename(self, mapping)
        u = KoszulUnit.__new__(KoszulUnit)
        MatrixFactorisation.__init__(
            u, plain.ctx, plain.potential, plain.parity, plain.d,
            validate=False)
        u.W = self.W
        u.base_names = tuple(mapping.get(n, n) for n in self.base_names)
        u.prime_names = tuple(mapping.get(n, n) for n in self.prime_names)
        u.sigma = self.sigma
        u.subsets = self.subsets
        return u


def _divided(p: Poly, i: int, pairs, sigma):
    """The unit's difference quotient: permuted pair order when sigma is set."""
    if sigma is None:
        return divided_difference(p, i, pairs=pairs)
    return divided_difference_ordered(p, i, sigma, pairs=pairs)


def koszul_unit(W: Poly, sigma=None, require_potential: bool = True) -> KoszulUnit:
    """Build Delta_W over the doubled context of W's variables.

    ``sigma`` (1-based permutation sequence) selects the variable ordering
    used in the difference quotients, producing the alternative unit.
    """
    base = W.ctx.names
    n = len(base)
    if require_potential and n > 0:
        cert = check_potential(W)
        if not cert.is_potential:
            raise FactorisationError(
                f"W = {W} is not a potential (unbounded monomials in "
                f"{cert.quotient.witness})")
    dctx = W.ctx.doubled()
    primes = tuple(primed_name(nm) for nm in base)
    pairs = list(zip(base, primes))
    Wd = embed(W, dctx)
    subsets = signs.subsets_ordered(n)
    pos = {s: k for k, s in enumerate(subsets)}
    parity = tuple(len(s) % 2 for s in subsets)
    w = [_divided(Wd, i + 1, pairs, sigma) for i in range(n)]
    lin = [dctx.gen(u) - dctx.gen(p) for u, p in pairs]
    d = polymat.zeros(dctx, len(subsets), len(subsets))
    for col, S in enumerate(subsets):
        for i in range(n):
            ins = signs.wedge_insert(i, S)
            if ins is not None:
                sgn, T = ins
                d[pos[T]][col] = d[pos[T]][col] + w[i] * sgn
            con = signs.contract(i, S)
            if con is not None:
                sgn, T = con
                d[pos[T]][col] = d[pos[T]][col] + lin[i] * sgn
    return KoszulUnit(W, base, primes, sigma, dctx, parity, d, subsets)


def delta_plus_minus(unit: KoszulUnit):
    """The two halves of the unit differential as separate matrices."""
    dctx = unit.ctx
    n = unit.n
    subsets = unit.subsets
    pos = {s: k for k, s in enumerate(subsets)}
    Wd = embed(unit.W, dctx)
    w = [_divided(Wd, i + 1, unit.pairs, unit.sigma) for i in range(n)]
    lin = [dctx.gen(u) - dctx.gen(p) for u, p in unit.pairs]
    dp = polymat.zeros(dctx, len(subsets), len(subsets))
    dm = polymat.zeros(dctx, len(subsets), len(subsets))
    for col, S in enumerate(subsets):
        for i in range(n):
            ins = signs.wedge_insert(i, S)
            if ins is not None:
                sgn, T = ins
                dp[pos[T]][col] = dp[pos[T]][col] + w[i] * sgn
            con = signs.contract(i, S)
            if con is not None:
                sgn, T = con
                dm[pos[T]][col] = dm[pos[T]][col] + lin[i] * sgn
    return dp, dm


# -- KoszulElement and the comparison maps -----------------------------------

class KoszulElement(dict):
    """Finitely supported map from theta-subsets to coefficients in k[x,x']."""

    @staticmethod
    def from_items(items):
        el = KoszulElement()
        for subset, coeff in items:
            el.accumulate(tuple(subset), coeff)
        return el

    def accumulate(self, subset, coeff):
        subset = tuple(subset)
        if subset in self:
            s = self[subset] + coeff
        else:
            s = coeff
        if isinstance(s, Poly) and s.is_zero():
            self.pop(subset, None)
        else:
            self[subset] = s


def stab_pi(unit: KoszulUnit):
    """The stabilisation map: project to theta-degree 0, then set x' = x.

    Returns a function on KoszulElements (or on vectors over the unit basis)
    with values in k[x].
    """
    contraction = dict(zip(unit.prime_names, unit.base_names))

    def pi(el):
        if isinstance(el, KoszulElement) or isinstance(el, dict):
            coeff = el.get((), None)
            if coeff is None:
                return unit.ctx.zero()
            return substitute(embed(coeff, unit.ctx), contraction)
        # vector over the unit basis
        return substitute(embed(el[0], unit.ctx), contraction)

    return pi


def psi(word, unit: KoszulUnit) -> KoszulElement:
    """Psi(df_1 ... df_p) = sum over increasing subsets of the quotient products."""
    dctx = unit.ctx
    for f in word:
        dctx = dctx.merge(f.ctx)
    word = [embed(f, dctx) for f in word]
    p = len(word)
    el = KoszulElement()
    if p > unit.n:
        return el
    # divided differences of each word entry at each position
    for subset in itertools.combinations(range(unit.n), p):
        coeff = None
        for k, i in enumerate(subset):
            dk = _divided(word[k], i + 1, unit.pairs, unit.sigma)
            coeff = dk if coeff is None else coeff * dk
        if coeff is None:
            coeff = dctx.one()
        if not coeff.is_zero():
            el.accumulate(subset, coeff)
    return el


def phi(el, unit: KoszulUnit):
    """Phi: theta-subset elements to alternating sums of bar words.

    Returns a list of (coefficient, [f_1, ..., f_p]) pairs.
    """
    words = []
    for subset, coeff in el.items():
        gens = [unit.ctx.gen(unit.base_names[i]) for i in subset]
        for perm in itertools.permutations(range(len(subset))):
            sgn = signs.perm_sign(perm)
            words.append((coeff * Fraction(sgn), [gens[k] for k in perm]))
    return words


def psi_of_words(words, unit: KoszulUnit) -> KoszulElement:
    """Apply Psi to a formal sum of coefficient-carrying words."""
    out = KoszulElement()
    for coeff, word in words:
        part = psi(word, unit)
        for subset, c in part.items():
            out.accumulate(subset, embed(coeff, unit.ctx) * c)
    return out


def epsilon(el, unit: KoszulUnit) -> Poly:
    """Coefficient of the top wedge theta_1 ... theta_n."""
    top = tuple(range(unit.n))
    coeff = el.get(top)
    return unit.ctx.zero() if coeff is None else embed(coeff, unit.ctx)


# -- unit actions and their inverses -----------------------------------------

def psi_phi_is_identity(unit: KoszulUnit) -> bool:
    """Psi o Phi fixes every theta-basis element exactly."""
    for subset in unit.subsets:
        el = KoszulElement()
        el.accumulate(tuple(subset), unit.ctx.one())
        out = psi_of_words(phi(el, unit), unit)
        a = {k: v for k, v in el.items() if not v.is_zero()}
        b = {k: v for k, v in out.items() if not v.is_zero()}
        if a != b:
            return False
    return True


def fresh_names(names, taken):
    """Prime-suffix names until they avoid everything in ``taken``."""
    out = []
    taken = set(taken)
    for n in names:
        cand = primed_name(n)
        while cand in taken:
            cand = primed_name(cand)
        out.append(cand)
        taken.add(cand)
    return tuple(out)


@dataclass
class UnitAction:
    """lambda (side='left': Delta (x) X -> X) or rho (side='right': X (x) Delta -> X).

    The action selects the theta-degree-0 component of the unit factor and
    identifies the contracted primed variables with their partners; it is
    linear over the contracted ring, so it is represented as an operation on
    morphisms (and on element vectors), not as a single polynomial matrix.
    """

    side: str
    X: MatrixFactorisation
    unit_mf: MatrixFactorisation     # the unit factor as used inside the tensor
    tensor_mf: MatrixFactorisation
    contraction: dict                # substitution applied to coefficients

    def _component(self, vec_index):
        """(x_index, subset_index) of a flat tensor basis index."""
        if self.side == "right":
            nsub = self.unit_mf.rank
            return vec_index // nsub, vec_index % nsub
        rx = self.X.rank
        return vec_index % rx, vec_index // rx

    def apply_matrix(self, mat):
        """Contract a (tensor_rank x c) matrix of coefficients to (X.rank x c)."""
        cols = len(mat[0]) if mat else 0
        ctx = self.X.ctx.merge(self.tensor_mf.ctx)
        out = polymat.zeros(ctx, self.X.rank, cols)
        for r in range(self.tensor_mf.rank):
            xi, si = self._component(r)
            if si != 0:      # theta-degree > 0 components die
                continue
            for c in range(cols):
                if not mat[r][c].is_zero():
                    out[xi][c] = out[xi][c] + substitute(
                        embed(mat[r][c], ctx), self.contraction)
        # re-embed into the X context when possible
        return [[_try_restrict(e, self.X.ctx) for e in row] for row in out]

    def compose(self, g: Morphism) -> Morphism:
        """The composite (unit action) o g for g: M -> tensor_mf."""
        if g.target is not self.tensor_mf and g.target.rank != self.tensor_mf.rank:
            raise ValueError("morphism does not land in the unit tensor")
        return Morphism(g.source, self.X, g.parity, self.apply_matrix(g.mat))

    def is_closed(self) -> bool:
        """Exact closedness: action o d_tensor = d_X o action on the basis."""
        lhs = self.apply_matrix(self.tensor_mf.d)
        colctx = self.X.ctx
        rhs = polymat.zeros(colctx, self.X.rank, self.tensor_mf.rank)
        for c in range(self.tensor_mf.rank):
            xi, si = self._component(c)
            if si != 0:
                continue
            for r in range(self.X.rank):
                rhs[r][c] = self.X.d[r][xi]
        ctx = self.X.ctx.merge(self.tensor_mf.ctx)
        return polymat.is_zero_matrix(
            polymat.mat_sub([[embed(e, ctx) for e in row] for row in lhs],
                            [[embed(e, ctx) for e in row] for row in rhs]))


def _try_restrict(p: Poly, ctx: RingContext) -> Poly:
    """Project into ``ctx`` if no absent variable actually occurs, else return p."""
    extra = [i for i, n in enumerate(p.ctx.names) if not ctx.contains(n)]
    if any(exp[i] for exp in p.terms for i in extra):
        return p
    width = len(ctx.names)
    positions = [ctx.index(n) if ctx.contains(n) else None
                 for n in p.ctx.names]
    out = {}
    for exp, c in p.terms.items():
        new = [0] * width
        for pos, e in zip(positions, exp):
            if pos is not None:
                new[pos] = e
        out[tuple(new)] = c
    return Poly(ctx, out)


def unit_action_right(X: MatrixFactorisation, unit: KoszulUnit) -> UnitAction:
    """rho_X: X (x) Delta_V -> X for X with source potential V.

    X's copy of the unit variables is renamed to fresh middles (shared with the
    unit's base block); the unit's primed block becomes the retained source
    variables, so the middle potential cancels and the tensor has the same
    potential as X.  The action selects theta-degree 0 and contracts the
    middles back onto the source variables.
    """
    mids = fresh_names(unit.base_names, X.ctx.names)
    Xr = mf_rename(X, dict(zip(unit.base_names, mids)))
    mapping = dict(zip(unit.base_names, mids))
    mapping.update(dict(zip(unit.prime_names, unit.base_names)))
    umf = unit.renamed(mapping)
    T = tensor(Xr, umf)
    return UnitAction(side="right", X=X, unit_mf=umf, tensor_mf=T,
                      contraction=dict(zip(mids, unit.base_names)))


def unit_action_left(X: MatrixFactorisation, unit: KoszulUnit) -> UnitAction:
    """lambda_X: Delta_V (x) X -> X, contracting through the unit's primed block."""
    mids = fresh_names(unit.base_names, X.ctx.names)
    umf = unit.renamed(dict(zip(unit.prime_names, mids)))
    Xr = mf_rename(X, dict(zip(unit.base_names, mids)))
    T = tensor(umf, Xr)
    return UnitAction(side="left", X=X, unit_mf=umf, tensor_mf=T,
                      contraction=dict(zip(mids, unit.base_names)))


def _divided_matrix(X: MatrixFactorisation, ctx, pairs, sigma, i):
    """Entrywise difference quotient of d_X in the given doubled context."""
    return [[_divided(embed(e, ctx), i, pairs, sigma) for e in row]
            for row in X.d]


def rho_inverse(X: MatrixFactorisation, unit: KoszulUnit,
                action: UnitAction | None = None) -> Morphism:
    """The explicit section of rho: X -> X (x) Delta_W.

    rho o rho_inverse = Id exactly; the subset-l term carries the sign
    (-1)^(binom(l,2) + l|e_i|) and the ascending product of difference
    quotients of d_X in the unit's variables.
    """
    act = action if action is not None else unit_action_right(X, unit)
    T = act.tensor_mf
    umf = act.unit_mf
    ctx = T.ctx
    # interpolate d_X between the shared middles (the unit's base block after
    # renaming) and the retained source variables (the unit's primed block)
    Xr = T.factors[0]
    pairs = list(zip(umf.base_names, umf.prime_names))
    D = [None] + [
        _divided_matrix(Xr, ctx, pairs, unit.sigma, i + 1)
        for i in range(unit.n)
    ]
    nsub = umf.rank
    mat = polymat.zeros(ctx, T.rank, X.rank)
    for s, S in enumerate(unit.subsets):
        l = len(S)
        prod = polymat.identity(ctx, X.rank)
        for i in S:
            prod = polymat.mat_mul(prod, D[i + 1])
        for i in range(X.rank):
            sgn = signs.minus_one_to(signs.binom2(l) + l * X.parity[i])
            for j in range(X.rank):
                if not prod[j][i].is_zero():
                    mat[j * nsub + s][i] = prod[j][i] * Fraction(sgn)
    return Morphism(X, T, 0, mat)


def lambda_inverse(X: MatrixFactorisation, unit: KoszulUnit,
                   action: UnitAction | None = None) -> Morphism:
    """The explicit section of lambda: X -> Delta_V (x) X.

    No binomial sign; the product of difference quotients is taken in
    descending subset order.
    """
    act = action if action is not None else unit_action_left(X, unit)
    T = act.tensor_mf
    umf = act.unit_mf
    ctx = T.ctx
    pairs = list(zip(unit.base_names, umf.prime_names))
    D = [None] + [
        _divided_matrix(X, ctx, pairs, unit.sigma, i + 1)
        for i in range(unit.n)
    ]
    rx = X.rank
    mat = polymat.zeros(ctx, T.rank, X.rank)
    for s, S in enumerate(unit.subsets):
        prod = polymat.identity(ctx, rx)
        for i in reversed(S):
            prod = polymat.mat_mul(prod, D[i + 1])
        for i in range(rx):
            for j in range(rx):
                if not prod[j][i].is_zero():
                    mat[s * rx + j][i] = prod[j][i]
    return Morphism(X, T, 0, mat)


# -- lifting through the stabilisation ---------------------------------------

def lift_to_diagonal(phi_values, Y: MatrixFactorisation,
                     unit: KoszulUnit) -> Morphism:
    """Lift a closed map Y -> R to a morphism Y -> Delta_W.

    ``phi_values`` lists phi(e_j) in k[x] per basis column of Y.  Column j of
    the lift accumulates, over index words (j_1, ..., j_l), the Psi-image of
    the word of differentials times the primed phi-value, with the sign
    (-1)^(l|e_j| + l).
    """
    ctx = unit.ctx.merge(Y.ctx)
    prime_map = dict(zip(unit.base_names, unit.prime_names))
    pos = {s: k for k, s in enumerate(unit.subsets)}
    mat = polymat.zeros(ctx, len(unit.subsets), Y.rank)
    r = Y.rank
    for j in range(r):
        acc = KoszulElement()
        stack = [(j, [], 0)]    # (last index, word so far, length)
        while stack:
            last, word, l = stack.pop()
            val = embed(phi_values[last], ctx)
            if not val.is_zero():
                tail = substitute(val, prime_map, target_ctx=ctx)
                el = psi(word, unit)
                sgn = signs.minus_one_to(l * Y.parity[j] + l)
                for subset, c in el.items():
                    acc.accumulate(subset, embed(c, ctx) * tail * Fraction(sgn))
            if l < unit.n:
                for nxt in range(r):
                    e = embed(Y.d[nxt][last], ctx)
                    if not e.is_zero():
                        stack.append((nxt, word + [e], l + 1))
        for subset, c in acc.items():
            mat[pos[subset]][j] = embed(c, ctx)
    return Morphism(Y, unit, 0, mat)


def permute_unit(sigma, W: Poly):
    """The comparison xi: Delta_W -> Delta_W^sigma (rho o lambda-inverse).

    Returns (xi, unit, unit_sigma); xi is closed and a homotopy equivalence.
    """
    unit = koszul_unit(W)
    unit_sigma = koszul_unit(W, sigma=tuple(sigma))
    act = unit_action_left(unit, unit_sigma)
    li = lambda_inverse(unit, unit_sigma, action=act)
    # contract the right-hand Delta_W factor of Delta^sigma (x) Delta_W
    T = act.tensor_mf
    umf = act.unit_mf          # Delta^sigma with middle prime names
    # rho_{Delta_W}: select theta-degree-0 of the right factor, identify its
    # free primed block with the middle names.
    rx = unit.rank
    nsub = umf.rank
    ctx = T.ctx
    # T basis index = s * rx + j  (s over Delta^sigma subsets, j over Delta_W)
    # Delta_W's free block inside T: its prime_names were renamed? The left
    # action renamed Delta_W's base (unprimed) block to the middles; its primed
    # block is untouched.  rho contracts Delta_W: theta-degree 0 means j = 0,
    # and its free primed block x' is identified with its shared block (mids).
    mids = umf.prime_names
    contraction = dict(zip(unit.prime_names, mids))
    mat = polymat.zeros(ctx, nsub, rx)
    for s in range(nsub):
        for i in range(rx):
            entry = li.mat[s * rx + 0][i]
            if not entry.is_zero():
                mat[s][i] = substitute(embed(entry, ctx), contraction)
    # express in the standard (x, x') slots of Delta^sigma: umf has slots
    # (base, mids); rename mids back to the standard primes.
    back = dict(zip(mids, unit_sigma.prime_names))
    xi_mat = [[substitute(e, back, target_ctx=ctx) for e in row] for row in mat]
    xi_mat = [[_try_restrict(e, unit_sigma.ctx) for e in row] for row in xi_mat]
    xi = Morphism(unit, unit_sigma, 0, xi_mat)
    return xi, unit, unit_sigma
