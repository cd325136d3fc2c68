"""Exterior algebra core: products, duality, contraction, restriction."""

from fractions import Fraction

import numpy as np
import pytest

from cayley8.multivec import (DegeneratePlaneError, DegreeError,
                              DimensionError, KForm, OrientedPlane, Vector,
                              contract, exact_sqrt, flat, hodge, inner,
                              merge_blades, random_form, random_vector,
                              restrict, sharp, sort_blade, wedge)
from cayley8.spin7 import PHI0_TERMS, phi0

E = [Vector.basis(8, i) for i in range(1, 9)]


def test_sort_blade_parity():
    assert sort_blade((2, 1)) == ((1, 2), -1)
    assert sort_blade((3, 1, 2)) == ((1, 2, 3), 1)
    assert sort_blade((1, 1)) == ((1, 1), 0)


def test_merge_blades_sign():
    assert merge_blades((1, 3), (2, 4)) == ((1, 2, 3, 4), -1)
    assert merge_blades((1, 2), (2, 3)) == ((), 0)


def test_wedge_basis_blades():
    dx1 = KForm.monomial(8, 1)
    dx2 = KForm.monomial(8, 2)
    assert wedge(dx1, dx2).coeffs == {(1, 2): 1}
    dx12 = KForm.monomial(8, 1, 2)
    assert wedge(dx12, dx12).is_zero()


def test_wedge_phi0_squared_is_14_vol():
    # independent oracle: sum the pairings of complementary blades directly
    expected = 0
    for blade_a, ca in PHI0_TERMS.items():
        for blade_b, cb in PHI0_TERMS.items():
            merged, sign = merge_blades(blade_a, blade_b)
            if sign:
                expected += sign * ca * cb
    assert expected == 14
    phi = phi0()
    assert wedge(phi, phi).approx_equal(14 * KForm.volume(8))


def test_wedge_errors():
    with pytest.raises(DimensionError):
        wedge(KForm.monomial(8, 1), KForm.monomial(7, 1))
    with pytest.raises(DegreeError):
        wedge(phi0(), KForm.volume(8))


def test_hodge_complementary_blade():
    assert hodge(KForm.monomial(8, 1, 2, 3, 4)).coeffs == {(5, 6, 7, 8): 1}


def test_hodge_phi0_self_dual():
    assert hodge(phi0()).approx_equal(phi0())


def test_hodge_involution_on_4forms():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = random_form(rng, 8, 4)
        assert hodge(hodge(a)).approx_equal(a)


def test_hodge_isometry():
    rng = np.random.default_rng(2)
    for _ in range(200):
        a = random_form(rng, 8, 3, exact=True)
        b = random_form(rng, 8, 3, exact=True)
        assert inner(hodge(a), hodge(b)) == inner(a, b)


def test_orientation_reversal_negates_hodge():
    a = KForm.monomial(8, 1, 2)
    assert hodge(a, orientation=-1).approx_equal(-1 * hodge(a))


def test_contract_basics():
    assert contract(E[0], KForm.monomial(8, 1, 2)).coeffs == {(2,): 1}
    assert contract(E[4], KForm.monomial(8, 1, 2, 3, 4)).is_zero()


def test_contract_phi0_seven_unit_blades():
    c = contract(E[0], phi0())
    assert c.blade_count() == 7
    assert all(abs(v) == 1 for v in c.coeffs.values())


def test_contract_antiderivation():
    rng = np.random.default_rng(3)
    for _ in range(100):
        v = random_vector(rng, 8, exact=True)
        a = random_form(rng, 8, 2, exact=True)
        b = random_form(rng, 8, 3, exact=True)
        lhs = contract(v, wedge(a, b))
        rhs = wedge(contract(v, a), b) + wedge(a, contract(v, b))
        assert lhs.approx_equal(rhs)


def test_contract_degree_zero_errors():
    with pytest.raises(DegreeError):
        contract(E[0], KForm(8, 0, {(): 1}))


def test_contract_adjoint_to_wedge():
    rng = np.random.default_rng(4)
    for _ in range(200):
        v = random_vector(rng, 8, exact=True)
        a = random_form(rng, 8, 3, exact=True)
        b = random_form(rng, 8, 2, exact=True)
        assert inner(contract(v, a), b) == inner(a, wedge(flat(v), b))


def test_inner_examples():
    dx12 = KForm.monomial(8, 1, 2)
    assert inner(dx12, dx12) == 1
    assert inner(phi0(), phi0()) == 14  # 14 unit blades


def test_musical_roundtrip():
    assert sharp(flat(E[2])).components == E[2].components
    rng = np.random.default_rng(5)
    v = random_vector(rng, 8, exact=True)
    assert sharp(flat(v)).components == v.components


def test_restrict_examples():
    phi = phi0()
    assert restrict(phi, OrientedPlane(E[:4])) == 1
    assert restrict(phi, OrientedPlane([E[0], E[1], E[2], E[4]])) == 0
    assert restrict(KForm.monomial(8, 1, 2), OrientedPlane([E[1], E[0]])) == -1


def test_restrict_degenerate_plane():
    with pytest.raises(DegeneratePlaneError, match="degenerate"):
        restrict(KForm.monomial(8, 1, 2),
                 OrientedPlane([E[0], E[0]]))


def test_restrict_orientation_equivariance():
    rng = np.random.default_rng(6)
    for _ in range(50):
        a = random_form(rng, 8, 4)
        vs = [random_vector(rng, 8) for _ in range(4)]
        p1 = OrientedPlane(vs)
        p2 = OrientedPlane([vs[1], vs[0], vs[2], vs[3]])
        assert abs(restrict(a, p1) + restrict(a, p2)) < 1e-10


def test_wedge_associative_graded_anticommutative_exact():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a = random_form(rng, 8, 2, exact=True, span=5)
        b = random_form(rng, 8, 1, exact=True, span=5)
        c = random_form(rng, 8, 1, exact=True, span=5)
        assert wedge(wedge(a, b), c).approx_equal(wedge(a, wedge(b, c)))
        assert wedge(b, c).approx_equal(-1 * wedge(c, b))
        assert wedge(a, b).approx_equal(wedge(b, a))


def test_exact_mode_stays_exact():
    phi = phi0()
    assert all(isinstance(c, Fraction) for c in phi.coeffs.values())
    c = contract(Vector([Fraction(1, 2)] + [0] * 7), phi)
    assert all(isinstance(v, Fraction) for v in c.coeffs.values())


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert isinstance(exact_sqrt(2), float)


def test_float_mode_agrees_with_exact():
    rng = np.random.default_rng(8)
    for _ in range(50):
        a = random_form(rng, 8, 2, exact=True, span=7)
        b = random_form(rng, 8, 2, exact=True, span=7)
        exact_val = inner(wedge(a, b).hodge(), wedge(a, b).hodge())
        float_val = inner(wedge(a.as_float(), b.as_float()).hodge(),
                          wedge(a.as_float(), b.as_float()).hodge())
        assert abs(float(exact_val) - float_val) < 1e-12 * max(1.0, abs(float(exact_val)))


def test_hodge_degree_extremes():
    one = KForm(8, 0, {(): 1})
    assert one.hodge().approx_equal(KForm.volume(8))
    assert KForm.volume(8).hodge().coeffs == {(): 1}


def test_kform_validation():
    with pytest.raises(DimensionError):
        KForm(9, 1, {})
    with pytest.raises(DegreeError):
        KForm(8, 9, {})
    with pytest.raises(ValueError, match="strictly increasing"):
        KForm(8, 2, {(2, 1): 1})
    with pytest.raises(DimensionError):
        KForm(4, 2, {(1, 5): 1})
    with pytest.raises(DegreeError):
        KForm(8, 2, {(1, 2, 3): 1})


def test_from_terms_normalizes_signs():
    a = KForm.from_terms(8, 2, {(2, 1): 1, (1, 2): 2})
    assert a.coeffs == {(1, 2): 1}
    assert KForm.from_terms(8, 2, {(1, 1): 5}).is_zero()


def test_plane_contains_and_pullback():
    from cayley8.multivec import pullback_to_plane
    plane = OrientedPlane([E[0], E[1], E[2], E[3]])
    assert plane.contains(Vector([1, 2, 0, -1, 0, 0, 0, 0]))
    assert not plane.contains(E[4])
    om = KForm(8, 2, {(1, 2): 1, (5, 6): 3})
    pulled = pullback_to_plane(om, plane)
    assert pulled.coeffs == {(1, 2): 1}  # the (5,6) blade dies on the plane


def test_evaluate_agrees_with_dense_tensor():
    rng = np.random.default_rng(9)
    a = random_form(rng, 8, 3)
    T = a.to_dense()
    for _ in range(20):
        u, v, w = (random_vector(rng, 8) for _ in range(3))
        direct = a.evaluate(u, v, w)
        dense = np.einsum('ijk,i,j,k->', T, u.to_array(), v.to_array(), w.to_array())
        assert abs(direct - dense) < 1e-10
