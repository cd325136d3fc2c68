"""Structure form, cross products, splittings, frames, certificate."""

from fractions import Fraction

import numpy as np
import pytest

from cayley8 import calib, spin7
from cayley8.multivec import (KForm, Vector, blades, contract, flat,
                              random_vector, wedge)

E = [Vector.basis(8, i) for i in range(1, 9)]
M = spin7.standard_model(exact=True)
MF = spin7.standard_model(exact=False)


def test_phi0_coefficients():
    phi = spin7.phi0()
    assert phi[(1, 2, 3, 4)] == 1
    assert phi[(1, 2, 7, 8)] == -1
    assert phi.blade_count() == 14
    assert all(abs(c) == 1 for c in phi.coeffs.values())


def test_build_model_spectrum_and_dims():
    assert M.lambda2_eigenvalues() == {-3.0: 7, 1.0: 21}
    assert M.lambda4_dims == (1, 7, 27, 35)
    assert MF.lambda4_dims == (1, 7, 27, 35)
    # independent check: trace of the projection pi7 = (id - L)/4 equals 7
    op = np.array([[float(x) for x in row] for row in M.lambda2_op])
    assert abs((np.eye(28) - op).trace() / 4 - 7) < 1e-12
    evals = np.linalg.eigvalsh(op)
    assert np.allclose(sorted(evals)[:7], -3, atol=1e-10)
    assert np.allclose(sorted(evals)[7:], 1, atol=1e-10)


def test_lambda4_summands_pairwise_orthogonal():
    forms = {k: M.lambda4_forms(k) for k in (1, 7, 27, 35)}
    keys = list(forms)
    for i, ki in enumerate(keys):
        for kj in keys[i + 1:]:
            for a in forms[ki]:
                for b in forms[kj]:
                    assert a.inner(b) == 0


def test_build_model_rejects_decomposable_form():
    with pytest.raises(spin7.Spin7StructureError) as err:
        spin7.build_model(KForm.monomial(8, 1, 2, 3, 4))
    failing = [c.name for c in err.value.certificate.failing()]
    assert "lambda2 spectrum" in failing


def test_proj2_7_matches_cross2():
    a = KForm.monomial(8, 1, 5)
    assert (2 * spin7.proj2_7(M, a)).approx_equal(
        spin7.cross2(M, E[0], E[4]))


def test_projections_idempotent_and_resolve():
    rng = np.random.default_rng(10)
    from cayley8.multivec import random_form
    for _ in range(50):
        a = random_form(rng, 8, 2, exact=True)
        p7 = spin7.proj2_7(M, a)
        p21 = spin7.proj2_21(M, a)
        assert spin7.proj2_7(M, p7).approx_equal(p7)
        assert spin7.proj2_21(M, p21).approx_equal(p21)
        assert (p7 + p21).approx_equal(a)
        assert p7.inner(p21) == 0


def test_cross2_table_all_twelve_equalities():
    table = [
        ((1, 5), [(1, (2, 6)), (1, (3, 7)), (1, (4, 8))]),
        ((1, 6), [(-1, (2, 5)), (1, (3, 8)), (-1, (4, 7))]),
        ((1, 7), [(-1, (2, 8)), (-1, (3, 5)), (1, (4, 6))]),
        ((1, 8), [(1, (2, 7)), (-1, (3, 6)), (-1, (4, 5))]),
    ]
    phi = M.phi
    count = 0
    for (i, j), rhs in table:
        lead = spin7.cross2(M, E[i - 1], E[j - 1])
        for sign, (k, l) in rhs:
            other = spin7.cross2(M, E[k - 1], E[l - 1])
            assert lead.approx_equal(sign * other)
            # sign rule: e_i x e_j = s e_k x e_l iff phi(ei,ej,ek,el) = -s
            assert phi.evaluate(E[i - 1], E[j - 1], E[k - 1], E[l - 1]) == -sign
            count += 1
    assert count == 12


def test_cross2_antisymmetric_and_norm():
    rng = np.random.default_rng(11)
    for _ in range(60):
        v, w = random_vector(rng, 8, exact=True), random_vector(rng, 8, exact=True)
        assert spin7.cross2(M, v, v).is_zero()
        c = spin7.cross2(M, v, w)
        assert c.norm_sq() == wedge(flat(v), flat(w)).norm_sq()


def test_inner_cross2_identity_exact():
    rng = np.random.default_rng(12)
    for _ in range(300):
        a, b, c, d = (random_vector(rng, 8, exact=True) for _ in range(4))
        lhs = spin7.cross2(M, a, b).inner(spin7.cross2(M, c, d))
        rhs = (-M.phi.evaluate(a, b, c, d) + a.dot(c) * b.dot(d)
               - a.dot(d) * b.dot(c))
        assert lhs == rhs


def test_inner_cross2_identity_vectorized_1000():
    sweep = calib.CayleySweep(MF)
    rng = np.random.default_rng(13)
    vs = rng.standard_normal((1000, 4, 8))
    a, b, c, d = (vs[:, k, :] for k in range(4))
    wab = sweep._wedge(a, b)
    wcd = sweep._wedge(c, d)
    # cross2 = 2 pi7(wedge); pi7 self-adjoint idempotent, so
    # <cross2(a,b), cross2(c,d)> = 4 <pi7 wab, pi7 wcd> = 4 <wab, pi7 wcd>
    lhs = 4 * np.einsum('nk,kl,nl->n', wab, sweep.p7, wcd)
    phi_v = np.einsum('ijkl,ni,nj,nk,nl->n', sweep.T4, a, b, c, d)

    def g(x, y):
        return np.einsum('ni,ni->n', x, y)

    rhs = -phi_v + g(a, c) * g(b, d) - g(a, d) * g(b, c)
    assert np.abs(lhs - rhs).max() < 1e-10


def test_cross3_frame_identities():
    assert (-1 * spin7.cross3(M, E[0], E[1], E[2])).components == E[3].components
    assert spin7.cross3(M, E[0], E[0], E[1]).norm_sq() == 0


def test_cross3_norm_and_alternating():
    rng = np.random.default_rng(14)
    for _ in range(60):
        u, v, w = (random_vector(rng, 8, exact=True) for _ in range(3))
        c = spin7.cross3(M, u, v, w)
        triple = wedge(wedge(flat(u), flat(v)), flat(w))
        assert c.norm_sq() == triple.norm_sq()
        assert (spin7.cross3(M, v, u, w) + c).norm_sq() == 0


def test_tau_examples():
    assert spin7.tau(M, E[0], E[1], E[2], E[3]).is_zero()
    assert not spin7.tau(M, E[0], E[1], E[2], E[4]).is_zero()


def test_tau_alternating_and_inner_identity():
    rng = np.random.default_rng(15)
    for _ in range(40):
        a, b, c, d, v, w = (random_vector(rng, 8, exact=True) for _ in range(6))
        t = spin7.tau(M, a, b, c, d)
        assert (spin7.tau(M, b, a, c, d) + t).is_zero()
        lhs = t.inner(spin7.cross2(M, v, w))
        rhs = (flat(w).wedge(contract(v, M.phi))
               - flat(v).wedge(contract(w, M.phi))).evaluate(a, b, c, d)
        assert lhs == rhs


def test_lambda4_7_generators_self_dual_and_in_summand():
    basis4 = blades(8, 4)
    seven = M.lambda4_forms(7)
    rng = np.random.default_rng(16)
    for _ in range(10):
        v, w = random_vector(rng, 8, exact=True), random_vector(rng, 8, exact=True)
        gen = flat(w).wedge(contract(v, M.phi)) - flat(v).wedge(contract(w, M.phi))
        assert gen.hodge().approx_equal(gen)
        # expansion in the 7-summand basis reproduces the generator
        rows = [[f.coeffs.get(b, 0) for b in basis4] for f in seven]
        target = [gen.coeffs.get(b, 0) for b in basis4]
        grams = [[sum(x * y for x, y in zip(r1, r2)) for r2 in rows] for r1 in rows]
        rhs = [sum(x * y for x, y in zip(r, target)) for r in rows]
        from cayley8._linalg import rref
        aug = [row + [val] for row, val in zip(grams, rhs)]
        sol_rows, pivots = rref(aug)
        coeffs = [Fraction(0)] * 7
        for r, p in enumerate(pivots):
            coeffs[p] = sol_rows[r][-1]
        recon = [sum(c * rows[k][i] for k, c in enumerate(coeffs))
                 for i in range(len(basis4))]
        assert recon == target


def test_cross2_image_has_zero_21_component():
    rng = np.random.default_rng(17)
    for _ in range(40):
        v, w = random_vector(rng, 8, exact=True), random_vector(rng, 8, exact=True)
        assert spin7.proj2_21(M, spin7.cross2(M, v, w)).is_zero()


def test_is_spin7_frame_examples():
    frame = spin7.Frame8(tuple(E))
    assert spin7.is_spin7_frame(M, frame)[0]
    swapped = spin7.Frame8((E[1], E[0]) + tuple(E[2:]))
    assert not spin7.is_spin7_frame(M, swapped)[0]
    scaled = spin7.Frame8((2 * E[0],) + tuple(E[1:]))
    assert not spin7.is_spin7_frame(M, scaled)[0]


def test_complete_frame_standard():
    frame = spin7.complete_frame(M, E[0], E[1], E[2], E[4])
    for got, expect in zip(frame.vectors, E):
        assert got.components == expect.components


def test_complete_frame_random_admissible():
    rng = np.random.default_rng(18)
    for _ in range(5):
        frame = spin7.random_spin7_frame(MF, rng)
        ok, report = spin7.is_spin7_frame(MF, frame)
        assert ok, report


def test_complete_frame_rejects_bad_e5():
    with pytest.raises(spin7.FramePreconditionError, match="e1 x e2 x e3"):
        spin7.complete_frame(M, E[0], E[1], E[2], E[3])
    with pytest.raises(spin7.FramePreconditionError, match="unit"):
        spin7.complete_frame(M, 2 * E[0], E[1], E[2], E[4])


def test_is_spin7_form_certificates():
    assert spin7.is_spin7_form(spin7.phi0()).passed
    assert spin7.is_spin7_form(calib.sl_model_form()).passed
    assert spin7.is_spin7_form(calib.coassoc_model_form()).passed
    bad = spin7.is_spin7_form(KForm.monomial(8, 1, 2, 3, 4))
    assert not bad.passed


def test_stabilizer_algebra_annihilates_phi():
    for beta in M.lambda2_21_forms():
        assert spin7.infinitesimal_action(M.phi, beta).is_zero()
    for beta in M.lambda2_7_forms():
        assert not spin7.infinitesimal_action(M.phi, beta).is_zero()


def test_certificate_invariant_under_rotations():
    # the rotation orbit of the structure form stays certified; a small
    # generic perturbation breaks self-duality and must fail
    from scipy.linalg import expm
    rng = np.random.default_rng(77)
    for _ in range(3):
        A = rng.standard_normal((8, 8))
        R = expm(A - A.T)
        pulled = spin7.pullback_through_frame(
            MF.phi, spin7.Frame8(tuple(Vector(R[:, j]) for j in range(8))))
        cert = spin7.is_spin7_form(pulled, tol=1e-9)
        assert cert.passed, cert.as_dict()
        model = spin7.build_model(pulled, tol=1e-9)
        assert model.lambda4_dims == (1, 7, 27, 35)
    perturbed = MF.phi + 0.05 * KForm.monomial(8, 1, 2, 3, 5, coeff=1.0)
    assert not spin7.is_spin7_form(perturbed, tol=1e-9).passed


def test_stabilizer_rotations_preserve_pullback():
    from scipy.linalg import expm
    rng = np.random.default_rng(19)
    basis21 = MF.lambda2_21_forms()
    for _ in range(5):
        coeffs = rng.standard_normal(len(basis21))
        beta = sum((float(c) * f for c, f in zip(coeffs, basis21)),
                   KForm.zero(8, 2))
        B = np.array([[beta[(i, j)] for j in range(1, 9)] for i in range(1, 9)],
                     dtype=float)
        R = expm(0.3 * B)
        frame = spin7.Frame8(tuple(Vector(R[:, j]) for j in range(8)))
        ok, report = spin7.is_spin7_frame(MF, frame, tol=1e-8)
        assert ok, report
