"""Adjoints, evaluation/coevaluation maps and the Zorro moves."""

from fractions import Fraction

import pytest

from lgmf import polymat
from lgmf.adjunction import (AdjointData, ev, ev_coev_maps, ev_tilde,
                             kernel_homotopy_search, kvm_difference,
                             left_dual_morphism, right_dual_morphism,
                             zorro_check)
from lgmf.mf import (Morphism, NullHomotopySet, default_null_homotopies,
                     identity_morphism)
from lgmf.ring import RingContext, embed

from conftest import boundary_defect, corpus_boundary_mfs, line_defect


def _defects():
    return {
        "boundary x^3": boundary_defect(corpus_boundary_mfs()["x^3:(x,x^2)"]),
        "line y^2->x^2": line_defect(2),
        "line y^3->x^3": line_defect(3),
    }


@pytest.fixture(params=["boundary x^3", "line y^2->x^2", "line y^3->x^3"])
def defect(request):
    return _defects()[request.param]


# -- adjoint objects ----------------------------------------------------------

def test_adjoints_are_valid_factorisations(defect):
    for adj in (defect.right_adjoint, defect.left_adjoint):
        assert not adj.validation_failures()
    # right adjoint factors the negated, swapped potential
    ctx = defect.right_adjoint.ctx
    want = embed(defect.source_potential, ctx) - embed(
        defect.target_potential, ctx)
    assert defect.right_adjoint.potential == want
    assert defect.left_adjoint.potential == want


def test_all_four_structure_maps_are_closed(defect):
    maps = ev_coev_maps(defect)
    for kvm in (maps.coev_tilde, maps.coev, maps.ev_tilde, maps.ev):
        assert kvm.is_closed()


def test_coevaluations_have_polynomial_matrices(defect):
    maps = ev_coev_maps(defect)
    for kvm in (maps.coev_tilde, maps.coev):
        assert not kvm.residue_valued
        assert kvm.as_morphism().is_closed()
    # evaluations integrate over the contracted variables, when there are any
    assert maps.ev_tilde.residue_valued == bool(defect.source_names)
    assert maps.ev.residue_valued == bool(defect.target_names)
    for kvm in (maps.ev_tilde, maps.ev):
        if kvm.residue_valued:
            with pytest.raises(ValueError):
                kvm.as_morphism()


def test_boundary_coev_tilde_starts_with_signed_inclusion():
    data = boundary_defect(corpus_boundary_mfs()["x^3:(x,x^2)"])
    kvm = ev_coev_maps(data).coev_tilde
    col = [row[0] for row in kvm.mat]
    assert col[0].is_constant() and col[0].constant_value() == Fraction(1)
    assert col[3].is_constant() and col[3].constant_value() == Fraction(-1)
    assert col[1].is_zero() and col[2].is_zero()


# -- Zorro moves --------------------------------------------------------------

def test_zorro_moves_hold(defect):
    report = zorro_check(defect)
    assert report["ok"]
    for side in ("right", "left"):
        r = report[side]
        assert r["ok"]
        assert r["exact"] or r["witness"] is not None


def test_zorro_composites_have_identity_class(defect):
    report = zorro_check(defect)
    for side in ("right", "left"):
        comp = report[side]["matrix"]
        assert comp.parity == 0
        if report[side]["exact"]:
            assert comp == identity_morphism(comp.source)


# -- independence of the homotopy choices -------------------------------------

def test_ev_tilde_independent_of_homotopy_choice():
    data = line_defect(3)
    X = data.base
    ctx = X.ctx
    base_hs = default_null_homotopies(X, data.source_names, side="source")
    # perturb lambda_y by a boundary: lambda'_y = lambda_y + [d, alpha]
    alpha_mat = polymat.zeros(ctx, X.rank, X.rank)
    alpha_mat[0][0] = ctx.gen("y")
    alpha = Morphism(X, X, 0, alpha_mat)
    bump = alpha.boundary()
    name = data.source_names[0]
    entries = dict(base_hs.entries)
    entries[name] = Morphism(X, X, 1, polymat.mat_add(
        entries[name].mat, bump.mat))
    perturbed = NullHomotopySet(mf=X, side="source", entries=entries,
                                order=base_hs.order)
    a = ev_tilde(data, base_hs)
    b = ev_tilde(data, perturbed)
    diff = kvm_difference(a, b)
    assert diff.is_closed()
    wit = kernel_homotopy_search(diff)
    assert wit is not None


def test_invalid_homotopies_are_rejected():
    data = line_defect(2)
    X = data.base
    hs = default_null_homotopies(X, data.source_names, side="source")
    wrong = {name: Morphism(X, X, 1, polymat.zeros(X.ctx, X.rank, X.rank))
             for name in hs.entries}
    bad = NullHomotopySet(mf=X, side="source", entries=wrong, order=hs.order)
    with pytest.raises(ValueError):
        ev_tilde(data, bad)


# -- dual morphisms -----------------------------------------------------------

def _two_line_defects():
    d2 = line_defect(3)
    X = d2.base
    ctx = X.ctx
    x, y = ctx.gen("x"), ctx.gen("y")
    # an even endomorphism of the line defect: multiplication by x + y
    mat = polymat.identity(ctx, X.rank)
    mat = [[e * (x + y) for e in row] for row in mat]
    phi = Morphism(X, X, 0, mat)
    assert phi.is_closed()
    return d2, phi


def test_dual_morphisms_are_closed_and_functorial():
    data, phi = _two_line_defects()
    for mk in (right_dual_morphism, left_dual_morphism):
        dphi = mk(phi, data, data)
        assert dphi.is_closed()
        did = mk(identity_morphism(data.base), data, data)
        assert did == identity_morphism(did.source)
        # contravariant functoriality on the composable pair (phi, phi)
        dcomp = mk(phi.compose(phi), data, data)
        assert dcomp == dphi.compose(dphi)


# -- construction errors ------------------------------------------------------

def test_adjoint_data_rejects_potential_mismatch():
    d = line_defect(2)
    wrong = d.base.ctx.gen("x") ** 3
    with pytest.raises(ValueError):
        AdjointData(d.base, d.source_potential, wrong)
