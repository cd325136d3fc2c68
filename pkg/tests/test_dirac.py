"""Point models, principal symbols, Clifford structure, intertwinings."""

from fractions import Fraction

import numpy as np
import pytest

from cayley8 import calib, dirac, g2, spin7
from cayley8.multivec import KForm, OrientedPlane, Vector

E = [Vector.basis(8, i) for i in range(1, 9)]
E7 = [Vector.basis(7, i) for i in range(1, 8)]
M = spin7.standard_model(exact=True)
MF = spin7.standard_model(exact=False)
CPM = dirac.build_cayley_model(M, OrientedPlane(E[:4]))


def test_build_cayley_model_standard_plane():
    assert len(CPM.e_basis) == 4
    assert [v.components for v in CPM.normal_frame] == [v.components for v in E[4:]]
    # E is spanned by the tangent-normal cross products e1 x e_j
    for j in range(4, 8):
        c = spin7.cross2(M, E[0], E[j])
        coords = CPM.e_coords(c)
        recon = sum((x * f for x, f in zip(coords, CPM.e_basis)), KForm.zero(8, 2))
        assert recon.approx_equal(c)


def test_build_cayley_model_rejects_non_cayley():
    with pytest.raises(dirac.NonCayleyPlaneError) as err:
        dirac.build_cayley_model(M, OrientedPlane([E[0], E[1], E[2], E[4]]))
    assert float(err.value.tau_norm) > 0.1


def test_asd_embedding_dimension_and_orthogonality():
    report = dirac.asd_embedding_report(CPM)
    assert report.passed, report
    # dimension of the embedded image is 3
    asd = dirac.plane_asd_basis()
    images = [2 * spin7.proj2_7(M, dirac.embed_plane_form(CPM, a)) for a in asd]
    gram = np.array([[float(x.inner(y)) for y in images] for x in images])
    assert np.linalg.matrix_rank(gram) == 3


def test_dim_E_at_random_cayley_planes():
    rng = np.random.default_rng(30)
    for _ in range(5):
        frame = spin7.random_spin7_frame(MF, rng)
        plane = OrientedPlane(list(frame.vectors[:4]))
        cpm = dirac.build_cayley_model(MF, plane)
        assert len(cpm.e_basis) == 4
        assert dirac.asd_embedding_report(cpm, tol=1e-8).passed


def test_cross_products_respect_the_splitting():
    # at the calibrated plane the 3-fold product maps tangent/normal type
    # (T,T,T)->T, (T,T,N)->N, (T,N,N)->T, (N,N,N)->N
    rng = np.random.default_rng(34)

    def component(v, frame):
        return sum(float(v.dot(u)) ** 2 for u in frame)

    for _ in range(20):
        t1, t2 = (sum((float(c) * t for c, t in
                       zip(rng.standard_normal(4), CPM.tangent_frame)),
                      Vector([0.0] * 8)) for _ in range(2))
        n1, n2, n3 = (sum((float(c) * n for c, n in
                           zip(rng.standard_normal(4), CPM.normal_frame)),
                          Vector([0.0] * 8)) for _ in range(3))
        t3 = sum((float(c) * t for c, t in
                  zip(rng.standard_normal(4), CPM.tangent_frame)),
                 Vector([0.0] * 8))
        cases = [((t1, t2, t3), CPM.tangent_frame),
                 ((t1, t2, n1), CPM.normal_frame),
                 ((t1, n1, n2), CPM.tangent_frame),
                 ((n1, n2, n3), CPM.normal_frame)]
        for args, target in cases:
            out = spin7.cross3(M, *args)
            residual = float(out.norm_sq()) - component(out, target)
            assert abs(residual) < 1e-18 or abs(residual) / max(float(out.norm_sq()), 1e-30) < 1e-12


def test_symbol_examples():
    xi = KForm(4, 1, {(1,): Fraction(1)})
    sig = np.array(dirac.symbol_D(CPM, xi), dtype=float)
    # first normal direction maps to e1 x e5, the first E basis vector
    expected = np.array([float(x) for x in
                         CPM.e_coords(spin7.cross2(M, E[0], E[4]))])
    assert np.allclose(sig[:, 0], expected)
    zero = np.array(dirac.symbol_D(CPM, KForm.zero(4, 1)), dtype=float)
    assert np.all(zero == 0)


def test_symbol_invertible_for_nonzero_covectors():
    rng = np.random.default_rng(31)
    for _ in range(20):
        xi = KForm(4, 1, {(i,): float(x)
                          for i, x in zip(range(1, 5), rng.standard_normal(4))})
        sig = np.array(dirac.symbol_D(CPM, xi), dtype=float)
        norm = float(xi.norm())
        assert abs(abs(np.linalg.det(sig)) - norm ** 4) < 1e-10


def test_clifford_check_basis_cases():
    e1 = KForm(4, 1, {(1,): Fraction(1)})
    e2 = KForm(4, 1, {(2,): Fraction(1)})
    s1 = np.array(dirac.symbol_D(CPM, e1), dtype=float)
    s2 = np.array(dirac.symbol_D(CPM, e2), dtype=float)
    assert np.allclose(s1.T @ s1 + s1.T @ s1, 2 * np.eye(4))
    assert np.allclose(s1.T @ s2 + s2.T @ s1, np.zeros((4, 4)))
    report = dirac.clifford_check(CPM, trials=16, seed=0)
    assert report.passed and report.max_residual < 1e-10


def test_symbol_isometry():
    assert dirac.symbol_isometry_report(CPM, trials=16, seed=1).passed


def test_bev_clifford_examples():
    s, two = dirac.bev_clifford(Vector([1, 0, 0]), 1, KForm.zero(3, 2))
    assert s == 0 and two.coeffs == {(2, 3): -1}
    s, two = dirac.bev_clifford(Vector([0, 0, 0]), 1.5, KForm.monomial(3, 1, 2))
    assert s == 0 and two.is_zero()


def test_bev_clifford_square_is_minus_norm():
    rng = np.random.default_rng(32)
    for _ in range(50):
        v = Vector(float(x) for x in rng.standard_normal(3))
        f = float(rng.standard_normal())
        alpha = KForm(3, 2, {b: float(c) for b, c in
                             zip(((1, 2), (1, 3), (2, 3)), rng.standard_normal(3))})
        s1, t1 = dirac.bev_clifford(v, f, alpha)
        s2, t2 = dirac.bev_clifford(v, s1, t1)
        assert abs(s2 + v.norm_sq() * f) < 1e-12
        assert (t2 + v.norm_sq() * alpha).is_zero(1e-12)


def test_bev_clifford_relation_on_basis_pairs():
    basis = [Vector.basis(3, i) for i in range(1, 4)]
    pairs = [(1, KForm.zero(3, 2))] + [
        (0, KForm.monomial(3, i, j)) for (i, j) in ((1, 2), (1, 3), (2, 3))]
    for v in basis:
        for w in basis:
            for f, alpha in pairs:
                s1, t1 = dirac.bev_clifford(w, f, alpha)
                s1, t1 = dirac.bev_clifford(v, s1, t1)
                s2, t2 = dirac.bev_clifford(v, f, alpha)
                s2, t2 = dirac.bev_clifford(w, s2, t2)
                assert s1 + s2 == -2 * v.dot(w) * f
                assert (t1 + t2 + 2 * v.dot(w) * alpha).is_zero()


APM = dirac.build_associative_model(g2.build_g2(exact=True),
                                    OrientedPlane(E7[:3]))


def test_h_iso_examples():
    assert (dirac.h_iso(APM, 1, KForm.zero(3, 2)) - APM.s).norm_sq() == 0
    got = dirac.h_iso(APM, 0, KForm.monomial(3, 2, 3))
    expected = g2.cross_g2(APM.g2model, APM.s, E7[0])
    assert (got - expected).norm_sq() == 0


def test_h_iso_isometry():
    basis = [(1, KForm.zero(3, 2))] + [
        (0, KForm.monomial(3, i, j)) for (i, j) in ((1, 2), (1, 3), (2, 3))]
    gram = [[dirac.h_iso(APM, *a).dot(dirac.h_iso(APM, *b)) for b in basis]
            for a in basis]
    assert gram == [[1 if i == j else 0 for j in range(4)] for i in range(4)]


def test_h_equivariance_exact_and_random_sections():
    report = dirac.h_equivariance_check(APM)
    assert report.passed and report.max_residual == 0.0
    # the identity persists for every unit normal choice of s
    rng = np.random.default_rng(33)
    g2m = g2.build_g2(exact=False)
    for _ in range(5):
        raw = rng.standard_normal(4)
        raw /= np.linalg.norm(raw)
        s = sum((float(c) * n for c, n in zip(raw, APM.normal_frame)),
                Vector([0.0] * 7))
        apm = dirac.build_associative_model(
            g2m, OrientedPlane([v.to_array() for v in E7[:3]]), s=s)
        assert dirac.h_equivariance_check(apm).passed


def test_sl_symbol_intertwine():
    m_sl = spin7.build_model(calib.sl_model_form())
    report = dirac.sl_symbol_intertwine(m_sl, trials=16, seed=2)
    assert report.passed and report.max_residual < 1e-10
    with pytest.raises(ValueError):
        dirac.sl_symbol_intertwine(M)


def test_coassoc_symbol_intertwine():
    report = dirac.coassoc_symbol_intertwine(M, trials=16, seed=3)
    assert report.passed and report.max_residual < 1e-10
    m_sl = spin7.build_model(calib.sl_model_form())
    with pytest.raises(ValueError):
        dirac.coassoc_symbol_intertwine(m_sl)
