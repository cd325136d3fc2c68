"""Pointwise operator algebra of the Cayley deformation operator.

At a calibrated 4-plane the 7-dimensional 2-form summand splits into the
plane's anti-self-dual forms and a rank-4 piece E (the forms vanishing on
the plane); the principal symbol of the deformation operator sends a
normal vector s to ``xi_sharp x s`` in E and satisfies the Clifford
relation.  This module builds that splitting, the symbol matrices, the
even-form Clifford module on a 3-manifold cross-section, the isomorphism
``h(f, alpha) = f s + s x (star alpha)^sharp`` onto the normal space of an
associative plane, and the two symbol intertwinings that identify the
operator with classical complexes in the reduced-holonomy models.

First-order symbol conventions are pinned as ``sigma(d)(xi) = xi ^ .`` and
``sigma(delta)(xi) = -xi . (contraction)``; symbol comparisons are made up
to one global unit scalar fixed at the probe covector ``e^1``.

Frozen isomorphism normalizations (derived once so the intertwinings hold
exactly, then fixed):

* special Lagrangian: ``Lambda^0 + Lambda^2_+ -> E`` maps ``f`` to
  ``-f omega / 2`` (the Kaehler form has norm 2, so this is a unit
  section) and a 2-form ``beta`` to ``(1/2) sum beta_ij (t_i x J t_j -
  t_j x J t_i)``; the tangent-to-normal map is J.
* coassociative: a plane ASD form ``alpha`` maps to the unique R^7-normal
  ``n`` with ``(n . phi)|_X = alpha`` (coefficient 1), the plane volume
  form maps to the circle direction, and 3-forms map to E through
  ``gamma -> (star gamma)^sharp x dtheta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import calib, g2 as g2mod
from ._linalg import orthogonalize
from .multivec import (KForm, OrientedPlane, Vector, blades, exact_sqrt,
                       is_zero, sharp)
from .spin7 import Spin7Model, cross2, phi0, proj2_7, tau

#: Gate on |tau| for accepting a plane as Cayley (floating mode).
CAYLEY_GATE = 1e-9


class NonCayleyPlaneError(ValueError):
    """The plane fails the tau gate; carries the offending norm."""

    def __init__(self, tau_norm):
        self.tau_norm = tau_norm
        super().__init__(f"plane is not Cayley: |tau| = {float(tau_norm):.3e}")


@dataclass(frozen=True)
class Report:
    """Outcome of a verification sweep: worst residual against a tolerance."""

    name: str
    passed: bool
    max_residual: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "max_residual": self.max_residual, "detail": self.detail}


def _orthonormal_complement(vectors: Sequence[Vector], dim: int) -> List[Vector]:
    """Deterministic orthonormal complement: sweep the standard basis in order."""
    exact = all(isinstance(c, (int, Fraction)) for v in vectors for c in v.components)
    basis = list(vectors)
    out = []
    for i in range(1, dim + 1):
        w = Vector.basis(dim, i, exact=exact)
        for u in basis:
            w = w - u.dot(w) * u
        nsq = w.norm_sq()
        if is_zero(nsq, 1e-18):
            continue
        w = w * (1 / exact_sqrt(nsq))
        basis.append(w)
        out.append(w)
        if len(basis) == dim:
            break
    return out


@dataclass(frozen=True)
class CayleyPointModel:
    """The splitting R^8 = T + N at a Cayley plane with the rank-4 bundle fibre E."""

    model: Spin7Model
    tangent_frame: Tuple[Vector, ...]
    normal_frame: Tuple[Vector, ...]
    e_basis: Tuple[KForm, ...]

    def tangent_vector(self, xi: KForm) -> Vector:
        """Raise an intrinsic tangent covector to an ambient vector."""
        if xi.dim != 4 or xi.degree != 1:
            raise ValueError("xi must be a 1-form on the 4-dimensional tangent plane")
        zero = Vector([0] * 8)
        return sum((xi.coeffs.get((i + 1,), 0) * t
                    for i, t in enumerate(self.tangent_frame)), zero)

    def e_coords(self, form: KForm):
        return [form.inner(ek) for ek in self.e_basis]


def _plane_restriction_rows(forms: Sequence[KForm], onb: Sequence[Vector]):
    pairs = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    return [[f.evaluate(onb[a], onb[b]) for f in forms] for a, b in pairs]


def build_cayley_model(m: Spin7Model, plane: OrientedPlane,
                       tau_tol: float = CAYLEY_GATE) -> CayleyPointModel:
    """Assemble the point model at a Cayley 4-plane.

    E is the kernel of the restriction map on the 7-dimensional 2-form
    summand; its dimension must be 4, it must coincide with the span of
    the tangent-normal cross products, and the embedded plane ASD forms
    must fill the orthogonal complement (conformally, with factor
    sqrt(2)).  A failing tau gate raises :class:`NonCayleyPlaneError`.
    """
    if plane.degree != 4 or plane.dim != 8:
        raise ValueError("expected a 4-plane in R^8")
    onb = plane.orthonormal_basis
    tnorm = tau(m, *onb).norm()
    if not is_zero(tnorm, tau_tol):
        raise NonCayleyPlaneError(tnorm)

    normal = _orthonormal_complement(onb, 8)
    if len(normal) != 4:
        raise NonCayleyPlaneError(tnorm)

    basis2 = blades(8, 2)
    l27 = m.lambda2_7_forms()
    rows = _plane_restriction_rows(l27, onb)
    exact = m.exact and all(
        isinstance(c, (int, Fraction)) for v in onb for c in v.components)

    if exact:
        from ._linalg import nullspace
        kernel = nullspace(rows)
    else:
        mat = np.array([[float(x) for x in row] for row in rows])
        _, svals, vh = np.linalg.svd(mat)
        small = [i for i in range(vh.shape[0])
                 if i >= len(svals) or svals[i] <= 1e-9]
        kernel = [vh[i] for i in small]
    if len(kernel) != 4:
        raise NonCayleyPlaneError(tnorm)

    gens = [cross2(m, t, n) for t in onb for n in normal]
    gen_rows = [[g.coeffs.get(b, 0) for b in basis2] for g in gens]
    if exact:
        ortho = orthogonalize(gen_rows)
    else:
        mat = np.array([[float(x) for x in r] for r in gen_rows])
        _, svals, vh = np.linalg.svd(mat)
        ortho = [vh[i] for i in range(len(svals)) if svals[i] > 1e-9]
    if len(ortho) != 4:
        raise NonCayleyPlaneError(tnorm)
    e_basis = []
    for row in ortho:
        nrm = exact_sqrt(sum(x * x for x in row))
        e_basis.append(KForm(8, 2, {b: c / nrm for b, c in zip(basis2, row) if c != 0}))

    # cross products must land in the kernel of the restriction
    for g in gens:
        for a in range(4):
            for b in range(a + 1, 4):
                if not is_zero(g.evaluate(onb[a], onb[b]), 1e-9):
                    raise NonCayleyPlaneError(tnorm)

    return CayleyPointModel(model=m, tangent_frame=tuple(onb),
                            normal_frame=tuple(normal), e_basis=tuple(e_basis))


def plane_asd_basis(exact: bool = True) -> List[KForm]:
    """Intrinsic anti-self-dual 2-forms of an oriented 4-plane."""
    one = Fraction(1) if exact else 1.0
    return [
        KForm(4, 2, {(1, 2): one, (3, 4): -one}),
        KForm(4, 2, {(1, 3): one, (2, 4): one}),
        KForm(4, 2, {(1, 4): one, (2, 3): -one}),
    ]


def plane_sd_basis(exact: bool = True) -> List[KForm]:
    """Intrinsic self-dual 2-forms of an oriented 4-plane."""
    one = Fraction(1) if exact else 1.0
    return [
        KForm(4, 2, {(1, 2): one, (3, 4): one}),
        KForm(4, 2, {(1, 3): one, (2, 4): -one}),
        KForm(4, 2, {(1, 4): one, (2, 3): one}),
    ]


def embed_plane_form(cpm: CayleyPointModel, alpha: KForm) -> KForm:
    """Extend an intrinsic 2-form of the plane to R^8 by zero contraction."""
    onb = cpm.tangent_frame
    ambient = KForm.zero(8, 2)
    for (a, b), c in alpha.coeffs.items():
        u, v = onb[a - 1], onb[b - 1]
        term = {}
        for i in range(1, 9):
            for j in range(i + 1, 9):
                val = c * (u[i] * v[j] - u[j] * v[i])
                if val != 0:
                    term[(i, j)] = val
        ambient = ambient + KForm(8, 2, term)
    return ambient


def asd_embedding_report(cpm: CayleyPointModel, tol: float = 1e-9) -> Report:
    """Conformality and orthogonality of ``alpha -> 2 pi7(alpha)`` on plane ASD forms.

    The image lies in the 7-dimensional summand, orthogonal to E, scales
    the Gram matrix by the fixed factor 2 (a sqrt(2)-conformal embedding),
    and restricts back to the original form on the plane.
    """
    m = cpm.model
    exact = m.exact
    asd = plane_asd_basis(exact)
    images = []
    worst = 0.0
    for alpha in asd:
        ambient = embed_plane_form(cpm, alpha)
        img = 2 * proj2_7(m, ambient)
        images.append(img)
        for ek in cpm.e_basis:
            worst = max(worst, abs(float(img.inner(ek))))
        back = [img.evaluate(cpm.tangent_frame[a - 1], cpm.tangent_frame[b - 1])
                for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]]
        expect = [alpha[(a, b)] for (a, b) in [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]]
        worst = max(worst, max(abs(float(x - y)) for x, y in zip(back, expect)))
    for i, ai in enumerate(asd):
        for j, aj in enumerate(asd):
            gram_img = images[i].inner(images[j])
            gram_src = ai.inner(aj)
            worst = max(worst, abs(float(gram_img - 2 * gram_src)))
    passed = worst <= tol
    return Report("asd-embedding", passed, worst,
                  "2 pi7 is a sqrt(2)-conformal embedding orthogonal to E")


# -- principal symbol --------------------------------------------------------------


def symbol_D(cpm: CayleyPointModel, xi: KForm) -> np.ndarray:
    """Matrix of ``s -> xi_sharp x s`` from the normal frame to the E basis.

    ``xi`` is an intrinsic covector of the tangent plane (degree 1 on the
    4-dimensional plane).  Linear in xi; exact entries in exact mode
    (dtype=object), floats otherwise.
    """
    xs = cpm.tangent_vector(xi)
    cols = []
    for n in cpm.normal_frame:
        c2 = cross2(cpm.model, xs, n)
        cols.append(cpm.e_coords(c2))
    if cpm.model.exact and all(
            isinstance(x, (int, Fraction)) for col in cols for x in col):
        return np.array(cols, dtype=object).T
    return np.array([[float(x) for x in col] for col in cols]).T


def clifford_check(cpm: CayleyPointModel, trials: int = 16,
                   seed: int = 0, tol: float = 1e-10) -> Report:
    """Verify the Clifford relation of the symbol on basis and random covectors.

    ``sigma(xi)^T sigma(xi') + sigma(xi')^T sigma(xi) = 2 <xi, xi'> Id``.
    """
    rng = np.random.default_rng(seed)
    exact = cpm.model.exact
    covs = []
    for i in range(1, 5):
        covs.append(KForm(4, 1, {(i,): Fraction(1) if exact else 1.0}))
    for _ in range(trials):
        covs.append(KForm(4, 1, {(i,): float(x)
                                 for i, x in zip(range(1, 5), rng.standard_normal(4))}))
    worst = 0.0
    for a in covs:
        sa = np.array(symbol_D(cpm, a), dtype=float)
        for b in covs:
            sb = np.array(symbol_D(cpm, b), dtype=float)
            lhs = sa.T @ sb + sb.T @ sa
            rhs = 2.0 * float(a.inner(b)) * np.eye(4)
            worst = max(worst, float(abs(lhs - rhs).max()))
    return Report("clifford", worst <= tol, worst,
                  "sigma(xi)^T sigma(xi') + sigma(xi')^T sigma(xi) = 2<xi,xi'> Id")


def symbol_isometry_report(cpm: CayleyPointModel, trials: int = 16,
                           seed: int = 0, tol: float = 1e-10) -> Report:
    """sigma(xi) is an isometry N -> E for unit xi (Gram matrix check)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        raw = rng.standard_normal(4)
        raw /= np.linalg.norm(raw)
        xi = KForm(4, 1, {(i,): float(x) for i, x in zip(range(1, 5), raw)})
        s = np.array(symbol_D(cpm, xi), dtype=float)
        worst = max(worst, float(abs(s.T @ s - np.eye(4)).max()))
    return Report("symbol-isometry", worst <= tol, worst,
                  "Gram(sigma(xi)) = Id for |xi| = 1")


# -- even-form Clifford module on a 3-manifold ---------------------------------------


def bev_clifford(v: Vector, f, alpha: KForm) -> Tuple[object, KForm]:
    """Clifford multiplication on scalars+2-forms of an oriented 3-space.

    ``v . (f, alpha) = (v . star(alpha), -f star(v_flat) - v_flat ^
    star(alpha))``; satisfies ``v . (v . (f, alpha)) = -|v|^2 (f, alpha)``.
    """
    if v.dim != 3 or alpha.dim != 3 or alpha.degree != 2:
        raise ValueError("bev_clifford lives on an oriented 3-space")
    star_alpha = alpha.hodge()
    scalar = star_alpha.evaluate(v)
    from .multivec import flat
    vf = flat(v)
    two = -f * vf.hodge() - vf.wedge(star_alpha)
    return scalar, two


@dataclass(frozen=True)
class AssociativePointModel:
    """Orthonormal frames at an associative 3-plane in R^7 with a unit normal s."""

    g2model: g2mod.G2Model
    tangent_frame: Tuple[Vector, ...]
    normal_frame: Tuple[Vector, ...]
    s: Vector

    def tangent_ambient(self, v: Vector) -> Vector:
        """Intrinsic R^3 coordinates to an ambient R^7 vector."""
        zero = Vector([0] * 7)
        return sum((v[i + 1] * t for i, t in enumerate(self.tangent_frame)), zero)


def build_associative_model(g2m: g2mod.G2Model, plane: OrientedPlane,
                            s: Optional[Vector] = None,
                            tol: float = 1e-9) -> AssociativePointModel:
    """Frames at an associative plane; ``s`` defaults to the first normal."""
    if plane.degree != 3 or plane.dim != 7:
        raise ValueError("expected a 3-plane in R^7")
    onb = plane.orthonormal_basis
    from .multivec import restrict as restrict_form
    lam = restrict_form(g2m.phi3, plane)
    if not is_zero(lam - 1, tol):
        raise ValueError(
            f"plane is not positively associative (phi restricts to {float(lam)})")
    normal = _orthonormal_complement(onb, 7)
    if s is None:
        s = normal[0]
    else:
        if not is_zero(s.norm_sq() - 1, tol):
            raise ValueError("s must be a unit vector")
        for t in onb:
            if not is_zero(s.dot(t), tol):
                raise ValueError("s must be normal to the plane")
    return AssociativePointModel(g2model=g2m, tangent_frame=tuple(onb),
                                 normal_frame=tuple(normal), s=s)


def h_iso(apm: AssociativePointModel, f, alpha: KForm) -> Vector:
    """``h(f, alpha) = f s + s x (star alpha)^sharp`` into the normal space.

    ``alpha`` is an intrinsic 2-form of the plane; the star is the plane's
    own Hodge star.  An exact isometry with ``h(1, 0) = s``.
    """
    if alpha.dim != 3 or alpha.degree != 2:
        raise ValueError("alpha must be a 2-form on the 3-plane")
    w_int = alpha.hodge()
    w = apm.tangent_ambient(sharp_vector3(w_int))
    return f * apm.s + g2mod.cross_g2(apm.g2model, apm.s, w)


def sharp_vector3(a: KForm) -> Vector:
    if a.dim != 3 or a.degree != 1:
        raise ValueError("expected a 1-form on R^3")
    return Vector(a.coeffs.get((i,), 0) for i in range(1, 4))


def h_equivariance_check(apm: AssociativePointModel, trials: int = 8,
                         seed: int = 0, tol: float = 1e-10) -> Report:
    """``h(v . (f, alpha)) = v x h(f, alpha)`` over the full basis sweep.

    Exact (residual 0) in exact mode; random covectors extend the sweep in
    floating mode.
    """
    g2m = apm.g2model
    exact = g2m.exact and all(isinstance(c, (int, Fraction))
                              for v in apm.tangent_frame for c in v.components)
    one = Fraction(1) if exact else 1.0
    pairs = [(one, KForm.zero(3, 2))]
    for blade in ((1, 2), (1, 3), (2, 3)):
        pairs.append((0, KForm(3, 2, {blade: one})))
    vs = [Vector.basis(3, i, exact=exact) for i in range(1, 4)]
    if exact:
        trials = 0  # the basis sweep is already exhaustive and exact
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        vs.append(Vector(float(x) for x in rng.standard_normal(3)))
        pairs.append((float(rng.standard_normal()),
                      KForm(3, 2, {b: float(c) for b, c in
                                   zip(((1, 2), (1, 3), (2, 3)), rng.standard_normal(3))})))
    worst = 0
    for v in vs:
        v_amb = apm.tangent_ambient(v)
        for f, alpha in pairs:
            scalar, two = bev_clifford(v, f, alpha)
            lhs = h_iso(apm, scalar, two)
            rhs = g2mod.cross_g2(g2m, v_amb, h_iso(apm, f, alpha))
            worst = max(worst, float(max(abs(x) for x in (lhs - rhs).components)))
    return Report("h-equivariance", worst <= tol, float(worst),
                  "h(v.(f,alpha)) = v x h(f,alpha)")


# -- symbol intertwinings ----------------------------------------------------------------


def _matrix_ratio(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """Global scalar c minimizing |lhs - c rhs| (Frobenius)."""
    denom = float((rhs * rhs).sum())
    if denom == 0:
        raise ValueError("degenerate probe: target symbol vanishes")
    return float((lhs * rhs).sum()) / denom


def _covector_set(count: int, seed: int) -> List[KForm]:
    covs = [KForm(4, 1, {(i,): 1.0}) for i in range(1, 5)]
    rng = np.random.default_rng(seed)
    for _ in range(count):
        covs.append(KForm(4, 1, {(i,): float(x)
                                 for i, x in zip(range(1, 5), rng.standard_normal(4))}))
    return covs


def sl_symbol_intertwine(m: Spin7Model, trials: int = 16, seed: int = 0,
                         tol: float = 1e-10) -> Report:
    """Identify the symbol with the special Lagrangian complex symbol.

    At the plane of real directions in C^4, under J on the normal side and
    the frozen ``(f, beta) -> -f omega/2 + (1/2) sum beta_ij (t_i x J t_j -
    t_j x J t_i)`` on the E side, the symbol corresponds to ``alpha ->
    (-xi . alpha, (xi ^ alpha + star(xi ^ alpha)) / 2)`` up to one global
    unit scalar fixed at the probe ``xi = e^1``.
    """
    if not m.phi.approx_equal(calib.sl_model_form(exact=m.exact), 1e-9):
        raise ValueError("model must carry the Calabi-Yau structure form")
    exact = m.exact
    e = [Vector.basis(8, i, exact=exact) for i in range(1, 9)]
    tangent = [e[0], e[2], e[4], e[6]]
    plane = OrientedPlane(tangent)
    cpm = build_cayley_model(m, plane)
    jn = [calib.complex_structure(t) for t in tangent]
    # permutation from the deterministic normal frame to (J t_i)
    jmat = np.array([[float(n.dot(v)) for v in cpm.normal_frame] for n in jn])

    omega = calib.kaehler_form(exact)
    half = Fraction(1, 2) if exact else 0.5
    sd = plane_sd_basis(exact)
    cross_antisym = {}
    for k, beta in enumerate(sd):
        img = KForm.zero(8, 2)
        for (i, j), c in beta.coeffs.items():
            term = cross2(m, tangent[i - 1], jn[j - 1]) \
                - cross2(m, tangent[j - 1], jn[i - 1])
            img = img + (half * c) * term
        cross_antisym[k] = np.array([float(x) for x in cpm.e_coords(img)])
    f_image = np.array([float(x) for x in cpm.e_coords((-half) * omega)])
    B = np.column_stack([f_image] + [cross_antisym[k] for k in range(3)])

    def target_matrix(xi: KForm) -> np.ndarray:
        cols = []
        for a in range(1, 5):
            alpha = KForm(4, 1, {(a,): 1.0})
            f = -float(xi.inner(alpha))
            two = xi.wedge(alpha)
            sd_part = 0.5 * (two + two.hodge()).as_float()
            coords = [f] + [float(sd_part[blade]) for blade in ((1, 2), (1, 3), (1, 4))]
            cols.append(coords)
        return np.array(cols).T

    def lhs_matrix(xi: KForm) -> np.ndarray:
        sig = np.array(symbol_D(cpm, xi), dtype=float)
        return sig @ jmat.T

    def rhs_matrix(xi: KForm) -> np.ndarray:
        t = target_matrix(xi)
        return B @ t

    probe = KForm(4, 1, {(1,): 1.0})
    scalar = _matrix_ratio(lhs_matrix(probe), rhs_matrix(probe))
    worst = 0.0
    for xi in _covector_set(trials, seed):
        worst = max(worst, float(abs(lhs_matrix(xi) - scalar * rhs_matrix(xi)).max()))
    passed = worst <= tol and abs(abs(scalar) - 1) <= tol
    return Report("sl-intertwine", passed, worst,
                  f"global scalar {scalar:+.6f}")


def coassoc_symbol_intertwine(m: Spin7Model, trials: int = 16, seed: int = 0,
                              tol: float = 1e-10) -> Report:
    """Identify the symbol with ``(alpha, beta) -> xi ^ alpha - xi . beta``.

    At the product of the circle direction with the standard coassociative
    plane, the normal bundle is matched by interior product with the
    3-form (plane ASD forms) plus the circle direction (plane volume), and
    E is matched with the tangent space through the cross product with the
    circle direction; one global unit scalar is fixed at ``xi = e^1``.
    """
    if not m.phi.approx_equal(phi0(exact=m.exact), 1e-9):
        raise ValueError("model must carry the product structure form")
    exact = m.exact
    e = [Vector.basis(8, i, exact=exact) for i in range(1, 9)]
    tangent = [e[4], e[5], e[6], e[7]]
    theta = e[0]
    plane = OrientedPlane(tangent)
    cpm = build_cayley_model(m, plane)

    g2m = g2mod.build_g2(exact=exact)
    r7_normals = [g2mod.project_vector(v) for v in (e[1], e[2], e[3])]
    asd = plane_asd_basis(exact)
    # n_k: the R^8 normal whose phi-contraction restricts to asd[k]
    amb_for_asd: List[Vector] = []
    pairs6 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    for k, alpha in enumerate(asd):
        target = np.array([float(alpha[p]) for p in pairs6])
        sol = None
        for cand8, cand7 in zip((e[1], e[2], e[3]), r7_normals):
            got = g2m.phi3.contract(cand7)
            comp = np.array([[float(got.evaluate(
                g2mod.project_vector(tangent[a - 1]),
                g2mod.project_vector(tangent[b - 1]))) for (a, b) in pairs6]])
            if np.allclose(comp[0], target, atol=1e-9):
                sol = cand8
                break
        if sol is None:
            raise RuntimeError("no normal direction matches the ASD form")
        amb_for_asd.append(sol)

    nmat_cols = [np.array([float(v.dot(nf)) for nf in cpm.normal_frame])
                 for v in amb_for_asd + [theta]]
    A = np.column_stack(nmat_cols)

    l3 = blades(4, 3)

    def b_map() -> np.ndarray:
        cols = []
        for blade in l3:
            gamma = KForm(4, 3, {blade: Fraction(1) if exact else 1.0})
            v_int = gamma.hodge()
            v = cpm.tangent_vector(v_int)
            img = cross2(m, v, theta)
            cols.append([float(x) for x in cpm.e_coords(img)])
        return np.array(cols).T

    B = b_map()
    vol4 = KForm.volume(4, exact=exact)

    def target_matrix(xi: KForm) -> np.ndarray:
        cols = []
        for k in range(4):
            if k < 3:
                out = xi.wedge(asd[k].as_float())
            else:
                out = -1.0 * vol4.as_float().contract(sharp(xi))
            cols.append([float(out.coeffs.get(b, 0)) for b in l3])
        return np.array(cols).T

    def lhs_matrix(xi: KForm) -> np.ndarray:
        sig = np.array(symbol_D(cpm, xi), dtype=float)
        return sig @ A

    probe = KForm(4, 1, {(1,): 1.0})
    scalar = _matrix_ratio(lhs_matrix(probe), B @ target_matrix(probe))
    worst = 0.0
    for xi in _covector_set(trials, seed):
        worst = max(worst, float(abs(lhs_matrix(xi) - scalar * (B @ target_matrix(xi))).max()))
    passed = worst <= tol and abs(abs(scalar) - 1) <= tol
    return Report("coassoc-intertwine", passed, worst,
                  f"global scalar {scalar:+.6f}")
