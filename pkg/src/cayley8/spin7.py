"""The pointwise Spin(7) structure on R^8.

The model 4-form has the 14-term normal form

    e^1234 + e^1256 - e^1278 + e^1357 + e^1368 + e^1458 - e^1467
    - e^2358 + e^2367 + e^2457 + e^2468 - e^3456 + e^3478 + e^5678

in any adapted ("Spin(7)-") frame.  The structure determines a 2-fold and
a 3-fold cross product, a vector-valued 4-form tau whose vanishing on a
4-plane characterizes calibrated (Cayley) 4-planes, and decompositions of
2- and 4-forms into irreducible pieces of dimensions (7, 21) and
(1, 7, 27, 35).

Sign conventions are pinned by the frame identity ``e4 = -e1 x e2 x e3``
together with the first-slot interior product of :mod:`cayley8.multivec`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import _linalg
from .multivec import (DEFAULT_TOL, KForm, Vector, blades, contract, flat,
                       is_zero, sharp)

#: Eigenvalue clustering tolerance for the floating 28x28 eigensolver.
EIGEN_CLUSTER_TOL = 1e-8

#: The 14 blades of the model form with their signs.
PHI0_TERMS: Dict[Tuple[int, ...], int] = {
    (1, 2, 3, 4): 1, (1, 2, 5, 6): 1, (1, 2, 7, 8): -1,
    (1, 3, 5, 7): 1, (1, 3, 6, 8): 1, (1, 4, 5, 8): 1,
    (1, 4, 6, 7): -1, (2, 3, 5, 8): -1, (2, 3, 6, 7): 1,
    (2, 4, 5, 7): 1, (2, 4, 6, 8): 1, (3, 4, 5, 6): -1,
    (3, 4, 7, 8): 1, (5, 6, 7, 8): 1,
}

#: Expected eigenstructure of a -> star(a ^ phi) on 2-forms.
LAMBDA2_SPECTRUM = {Fraction(-3): 7, Fraction(1): 21}

#: Expected dimensions of the 4-form summands.
LAMBDA4_DIMS = (1, 7, 27, 35)


class Spin7StructureError(ValueError):
    """A form failed the structure certificate; carries the report."""

    def __init__(self, certificate: "Spin7Certificate"):
        self.certificate = certificate
        failed = ", ".join(c.name for c in certificate.checks if not c.passed)
        super().__init__(f"not a Spin(7) structure form; failed: {failed}")


class FramePreconditionError(ValueError):
    """A frame-completion precondition is violated."""


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class Spin7Certificate:
    """Pass/fail report of the necessary structure conditions.

    The four checks (self-duality, squared norm 14, 2-form spectrum,
    4-form summand dimensions) are necessary for membership in the orbit
    of the model form; sufficiency is not claimed.
    """

    passed: bool
    checks: Tuple[CheckResult, ...]

    def failing(self) -> Tuple[CheckResult, ...]:
        return tuple(c for c in self.checks if not c.passed)

    def as_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
        }


@dataclass(frozen=True)
class Frame8:
    """An 8-tuple of vectors in R^8, candidate adapted frame."""

    vectors: Tuple[Vector, ...]

    def __post_init__(self):
        if len(self.vectors) != 8 or any(v.dim != 8 for v in self.vectors):
            raise ValueError("Frame8 needs exactly 8 vectors in R^8")

    def __iter__(self):
        return iter(self.vectors)

    def __getitem__(self, i: int) -> Vector:
        """1-based access."""
        return self.vectors[i - 1]


def phi0(exact: bool = True) -> KForm:
    """The model 4-form on R^8 (14 blades, coefficients +-1)."""
    cast = (lambda c: Fraction(c)) if exact else float
    return KForm(8, 4, {b: cast(c) for b, c in PHI0_TERMS.items()})


@dataclass(frozen=True)
class Spin7Model:
    """A validated structure form with cached derived operators.

    ``lambda2_op`` is the matrix of ``a -> star(a ^ phi)`` on the 28
    lexicographic 2-blades.  Basis lists hold coefficient vectors over
    the lexicographic blade bases: orthonormal numpy rows in floating
    mode, orthogonal Fraction rows in exact mode.
    """

    phi: KForm
    exact: bool
    lambda2_op: object = field(repr=False)
    lambda2_7_basis: object = field(repr=False)
    lambda2_21_basis: object = field(repr=False)
    lambda4_bases: Dict[int, object] = field(repr=False)

    @property
    def lambda4_dims(self) -> Tuple[int, ...]:
        return tuple(len(self.lambda4_bases[k]) for k in (1, 7, 27, 35))

    def lambda2_eigenvalues(self) -> Dict[float, int]:
        return {-3.0: len(self.lambda2_7_basis), 1.0: len(self.lambda2_21_basis)}

    def lambda2_7_forms(self) -> List[KForm]:
        return _rows_to_forms(self.lambda2_7_basis, 8, 2)

    def lambda2_21_forms(self) -> List[KForm]:
        return _rows_to_forms(self.lambda2_21_basis, 8, 2)

    def lambda4_forms(self, which: int) -> List[KForm]:
        return _rows_to_forms(self.lambda4_bases[which], 8, 4)


def _rows_to_forms(rows, dim: int, degree: int) -> List[KForm]:
    basis = blades(dim, degree)
    forms = []
    for row in rows:
        coeffs = {b: c for b, c in zip(basis, row) if c != 0}
        forms.append(KForm(dim, degree, coeffs))
    return forms


def _lambda2_matrix(phi: KForm, exact: bool):
    """Matrix of a -> star(a ^ phi) over the lexicographic 2-blades."""
    basis2 = blades(8, 2)
    columns = []
    for b in basis2:
        col_form = KForm(8, 2, {b: Fraction(1) if exact else 1.0}).wedge(phi).hodge()
        columns.append([col_form.coeffs.get(bb, 0) for bb in basis2])
    if exact:
        return [[columns[j][i] for j in range(28)] for i in range(28)]
    return np.array(columns).T


def _check_lambda2_spectrum(op, exact: bool):
    """Return (ok, detail, basis7, basis21) for the 2-form operator."""
    if exact:
        n = 28
        # minimal polynomial check: (L + 3)(L - 1) = 0
        prod = [[sum((op[i][k] + (3 if i == k else 0)) * (op[k][j] - (1 if k == j else 0))
                     for k in range(n)) for j in range(n)] for i in range(n)]
        if any(prod[i][j] != 0 for i in range(n) for j in range(n)):
            evals = np.linalg.eigvalsh(np.array(op, dtype=float))
            return False, f"spectrum not {{-3, +1}}: eigenvalues {np.round(evals, 6)}", None, None
        plus3 = [[op[i][j] + (3 if i == j else 0) for j in range(n)] for i in range(n)]
        minus1 = [[op[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
        basis7 = _linalg.orthogonalize(_linalg.nullspace(plus3))
        basis21 = _linalg.orthogonalize(_linalg.nullspace(minus1))
        if (len(basis7), len(basis21)) != (7, 21):
            return False, f"eigenspace dims ({len(basis7)}, {len(basis21)}) != (7, 21)", None, None
        return True, "eigenvalues (-3 x7, +1 x21)", basis7, basis21
    evals, evecs = np.linalg.eigh(op)
    near7 = np.abs(evals + 3) <= EIGEN_CLUSTER_TOL
    near21 = np.abs(evals - 1) <= EIGEN_CLUSTER_TOL
    if near7.sum() != 7 or near21.sum() != 21 or (near7 | near21).sum() != 28:
        return False, f"spectrum not (-3 x7, +1 x21): {np.round(evals, 6)}", None, None
    return True, "eigenvalues (-3 x7, +1 x21)", list(evecs[:, near7].T), list(evecs[:, near21].T)


def _lambda4_7_generators(phi: KForm) -> List[KForm]:
    """Spanning set ``w_flat ^ (v . phi) - v_flat ^ (w . phi)`` over basis pairs."""
    gens = []
    exact = _form_is_exact(phi)
    for i in range(1, 9):
        for j in range(i + 1, 9):
            v = Vector.basis(8, i, exact=exact)
            w = Vector.basis(8, j, exact=exact)
            gen = flat(w).wedge(contract(v, phi)) - flat(v).wedge(contract(w, phi))
            if not gen.is_zero():
                gens.append(gen)
    return gens


def _form_is_exact(a: KForm) -> bool:
    return all(isinstance(c, (int, Fraction)) for c in a.coeffs.values())


def _self_dual_split(exact: bool):
    """Bases of self-dual and anti-self-dual 4-forms as coefficient rows."""
    basis4 = blades(8, 4)
    index = {b: i for i, b in enumerate(basis4)}
    one = Fraction(1) if exact else 1.0
    sd, asd = [], []
    seen = set()
    for b in basis4:
        if b in seen:
            continue
        form = KForm(8, 4, {b: one})
        star = form.hodge()
        [(comp, sign)] = star.coeffs.items()
        seen.add(b)
        seen.add(comp)
        for target, flip in ((sd, 1), (asd, -1)):
            row = [Fraction(0) if exact else 0.0] * 70
            row[index[b]] = one
            row[index[comp]] = flip * sign * one
            target.append(row)
    return sd, asd


def _build_lambda4(phi: KForm, exact: bool):
    """Assemble the (1, 7, 27, 35) summand bases; returns (ok, detail, bases)."""
    basis4 = blades(8, 4)
    phi_row = [phi.coeffs.get(b, 0) for b in basis4]
    gens = _lambda4_7_generators(phi)
    gen_rows = [[g.coeffs.get(b, 0) for b in basis4] for g in gens]
    sd_rows, asd_rows = _self_dual_split(exact)

    if exact:
        idx = _linalg.independent_rows(gen_rows)
        seven = _linalg.orthogonalize([gen_rows[i] for i in idx])
        if len(seven) != 7:
            return False, f"rank of the 7-dim generator family is {len(seven)}", None
        # 27-part: self-dual forms orthogonal to phi and to the 7 generators
        constraints = [phi_row] + seven
        sd_coords = _linalg.nullspace(
            [[sum(c * s for c, s in zip(con, sd)) for sd in sd_rows] for con in constraints])
        twenty7 = _linalg.orthogonalize(
            [[sum(x * sd_rows[k][c] for k, x in enumerate(vec)) for c in range(70)]
             for vec in sd_coords])
        bases = {1: [phi_row], 7: seven, 27: twenty7, 35: asd_rows}
        dims = tuple(len(bases[k]) for k in (1, 7, 27, 35))
        if dims != LAMBDA4_DIMS:
            return False, f"summand dims {dims} != {LAMBDA4_DIMS}", None
        return True, "summand dims (1, 7, 27, 35)", bases

    phi_vec = np.array([float(x) for x in phi_row])
    phi_unit = phi_vec / np.linalg.norm(phi_vec)
    gen_mat = np.array([[float(x) for x in row] for row in gen_rows]).T
    seven_cols = _linalg.orthonormal_columns(gen_mat)
    if seven_cols.shape[1] != 7:
        return False, f"rank of the 7-dim generator family is {seven_cols.shape[1]}", None
    sd_mat = np.array([[float(x) for x in row] for row in sd_rows]).T / np.sqrt(2.0)
    asd_mat = np.array([[float(x) for x in row] for row in asd_rows]).T / np.sqrt(2.0)
    sub = np.column_stack([phi_unit, seven_cols])
    twenty7_cols = _linalg.complement_in_span(sd_mat, sub)
    bases = {1: [phi_unit], 7: list(seven_cols.T), 27: list(twenty7_cols.T),
             35: list(asd_mat.T)}
    dims = tuple(len(bases[k]) for k in (1, 7, 27, 35))
    if dims != LAMBDA4_DIMS:
        return False, f"summand dims {dims} != {LAMBDA4_DIMS}", None
    return True, "summand dims (1, 7, 27, 35)", bases


def certify(phi: KForm, tol: float = DEFAULT_TOL):
    """Run the structure checks; returns (certificate, model ingredients)."""
    checks: List[CheckResult] = []
    if phi.dim != 8 or phi.degree != 4:
        checks.append(CheckResult("shape", False, "need a degree-4 form on R^8"))
        return Spin7Certificate(False, tuple(checks)), None
    exact = _form_is_exact(phi)

    sd_ok = phi.hodge().approx_equal(phi, tol)
    checks.append(CheckResult("self-dual", sd_ok,
                              "star(phi) == phi" if sd_ok else "star(phi) != phi"))
    nrm = phi.norm_sq()
    nrm_ok = is_zero(nrm - 14, 100 * tol)
    checks.append(CheckResult("norm", nrm_ok, f"<phi, phi> = {nrm}"))

    op = _lambda2_matrix(phi, exact)
    spec_ok, detail, b7, b21 = _check_lambda2_spectrum(op, exact)
    checks.append(CheckResult("lambda2 spectrum", spec_ok, detail))

    l4_ok, l4_detail, l4_bases = (False, "skipped (spectrum failed)", None)
    if sd_ok and spec_ok:
        l4_ok, l4_detail, l4_bases = _build_lambda4(phi, exact)
    checks.append(CheckResult("lambda4 dims", l4_ok, l4_detail))

    passed = all(c.passed for c in checks)
    cert = Spin7Certificate(passed, tuple(checks))
    if not passed:
        return cert, None
    return cert, (exact, op, b7, b21, l4_bases)


def is_spin7_form(phi: KForm, tol: float = DEFAULT_TOL) -> Spin7Certificate:
    """Certificate of the necessary structure conditions (never raises)."""
    cert, _ = certify(phi, tol)
    return cert


def build_model(phi: KForm, tol: float = DEFAULT_TOL) -> Spin7Model:
    """Validate ``phi`` and cache its derived operators.

    Raises :class:`Spin7StructureError` carrying the certificate when the
    eigenstructure does not match the (7, 21) / (1, 7, 27, 35) pattern.
    """
    cert, ingredients = certify(phi, tol)
    if ingredients is None:
        raise Spin7StructureError(cert)
    exact, op, b7, b21, l4 = ingredients
    return Spin7Model(phi=phi, exact=exact, lambda2_op=op,
                      lambda2_7_basis=b7, lambda2_21_basis=b21,
                      lambda4_bases=l4)


@lru_cache(maxsize=2)
def standard_model(exact: bool = True) -> Spin7Model:
    """The cached model of the 14-term normal form."""
    return build_model(phi0(exact=exact))


def unchecked_model(phi: KForm) -> Spin7Model:
    """Wrap a form without validating it (for diagnostics and mutation tests).

    Only the operations that read ``phi`` directly (cross products, tau,
    projections) are usable; the basis fields are empty.
    """
    return Spin7Model(phi=phi, exact=_form_is_exact(phi), lambda2_op=None,
                      lambda2_7_basis=(), lambda2_21_basis=(), lambda4_bases={})


# -- projections and cross products ---------------------------------------------


def proj2_7(m: Spin7Model, a: KForm) -> KForm:
    """Projection of a 2-form onto the 7-dimensional summand."""
    quarter = Fraction(1, 4) if _form_is_exact(a) and m.exact else 0.25
    return quarter * (a - a.wedge(m.phi).hodge())


def proj2_21(m: Spin7Model, a: KForm) -> KForm:
    """Projection of a 2-form onto the 21-dimensional summand."""
    return a - proj2_7(m, a)


def cross2(m: Spin7Model, v: Vector, w: Vector) -> KForm:
    """2-fold cross product, a 2-form in the 7-dimensional summand.

    ``v x w = (v_flat ^ w_flat - star(v_flat ^ w_flat ^ phi)) / 2``;
    satisfies ``|v x w| = |v ^ w|``.
    """
    vw = flat(v).wedge(flat(w))
    half = Fraction(1, 2) if _form_is_exact(vw) and m.exact else 0.5
    return half * (vw - vw.wedge(m.phi).hodge())


def cross3(m: Spin7Model, u: Vector, v: Vector, w: Vector) -> Vector:
    """3-fold cross product ``(u . (v . (w . phi)))^sharp``.

    Alternating, with ``|u x v x w| = |u ^ v ^ w|`` and
    ``e1 x e2 x e3 = -e4`` on the standard frame.
    """
    return sharp(contract(u, contract(v, contract(w, m.phi))))


def tau(m: Spin7Model, a: Vector, b: Vector, c: Vector, d: Vector) -> KForm:
    """The 4-fold cross product, valued in the 7-dimensional 2-form summand.

    ``tau(a,b,c,d) = -a x (b x c x d) + g(a,b) c x d + g(a,c) d x b
    + g(a,d) b x c``, where the first product pairs the vector ``a`` with
    the vector value ``b x c x d`` through the 2-fold cross product (the
    only typing under which the expression closes).  Vanishing of tau on
    a 4-plane characterizes Cayley planes.
    """
    result = -1 * cross2(m, a, cross3(m, b, c, d))
    gab, gac, gad = a.dot(b), a.dot(c), a.dot(d)
    if gab != 0:
        result = result + gab * cross2(m, c, d)
    if gac != 0:
        result = result + gac * cross2(m, d, b)
    if gad != 0:
        result = result + gad * cross2(m, b, c)
    return result


def tau_norm(m: Spin7Model, plane_vectors: Sequence[Vector]):
    """Norm of tau evaluated on the four given vectors."""
    t = tau(m, *plane_vectors)
    return t.norm()


# -- frames -----------------------------------------------------------------------


def pullback_through_frame(phi: KForm, frame: Frame8) -> KForm:
    """The form with coefficients ``phi(f_i, f_j, f_k, f_l)`` on increasing tuples."""
    coeffs = {}
    vecs = frame.vectors
    for blade in blades(8, phi.degree):
        val = phi.evaluate(*(vecs[i - 1] for i in blade))
        if val != 0:
            coeffs[blade] = val
    return KForm(8, phi.degree, coeffs)


def is_spin7_frame(m: Spin7Model, frame: Frame8, tol: float = 1e-9):
    """True iff the frame pullback of phi equals the 14-term normal form.

    Returns (verdict, report) where the report carries the largest
    coefficient deviation.
    """
    pulled = pullback_through_frame(m.phi, frame)
    diff = pulled - phi0(exact=True)
    dev = max((abs(c) for c in diff.coeffs.values()), default=0)
    ok = is_zero(dev, tol)
    return ok, {"max_deviation": dev, "ok": ok}


def complete_frame(m: Spin7Model, e1: Vector, e2: Vector, e3: Vector,
                   e5: Vector, tol: float = 1e-9) -> Frame8:
    """Complete an admissible quadruple to an adapted frame.

    Preconditions: ``e1, e2, e3`` orthonormal, ``e5`` a unit vector
    orthogonal to them and to ``e1 x e2 x e3``.  The remaining vectors
    are ``e4 = -e1 x e2 x e3``, ``e6 = -e1 x e2 x e5``,
    ``e7 = -e1 x e3 x e5``, ``e8 = e2 x e3 x e5``.
    """
    named = {"e1": e1, "e2": e2, "e3": e3, "e5": e5}
    for name, v in named.items():
        if not is_zero(v.norm_sq() - 1, tol):
            raise FramePreconditionError(f"{name} is not a unit vector")
    pairs = [("e1", "e2"), ("e1", "e3"), ("e2", "e3"),
             ("e1", "e5"), ("e2", "e5"), ("e3", "e5")]
    for na, nb in pairs:
        if not is_zero(named[na].dot(named[nb]), tol):
            raise FramePreconditionError(f"{na} is not orthogonal to {nb}")
    c123 = cross3(m, e1, e2, e3)
    if not is_zero(e5.dot(c123), tol):
        raise FramePreconditionError("e5 is not orthogonal to e1 x e2 x e3")
    e4 = -c123
    e6 = -cross3(m, e1, e2, e5)
    e7 = -cross3(m, e1, e3, e5)
    e8 = cross3(m, e2, e3, e5)
    frame = Frame8((e1, e2, e3, e4, e5, e6, e7, e8))
    ok, report = is_spin7_frame(m, frame, tol=max(tol, 1e-9))
    if not ok:
        raise FramePreconditionError(
            f"completion failed the frame check (max deviation {report['max_deviation']})")
    return frame


def random_spin7_frame(m: Spin7Model, rng: np.random.Generator) -> Frame8:
    """A random adapted frame via completion of a random admissible quadruple."""
    while True:
        raw = [Vector(float(x) for x in rng.standard_normal(8)) for _ in range(4)]
        try:
            basis = []
            for v in raw[:3]:
                w = v
                for u in basis:
                    w = w - u.dot(w) * u
                basis.append(w.normalized())
            e1, e2, e3 = basis
            w = raw[3]
            for u in (e1, e2, e3, cross3(m, e1, e2, e3)):
                w = w - (u.dot(w) / u.norm_sq()) * u
            e5 = w.normalized()
            return complete_frame(m, e1, e2, e3, e5)
        except (FramePreconditionError, ValueError):
            continue


def infinitesimal_action(phi: KForm, generator: KForm) -> KForm:
    """Derivative of the rotation pullback of ``phi`` along a 2-form generator.

    The generator corresponds to the skew map ``B`` with ``B_ij = beta(e_i,
    e_j)``; the result is ``sum_slots phi(..., B v, ...)``.  It vanishes
    exactly when the generator lies in the 21-dimensional summand (the
    stabilizer algebra).
    """
    if generator.degree != 2 or generator.dim != phi.dim:
        raise ValueError("generator must be a 2-form on the same space")
    n = phi.dim
    exact = _form_is_exact(phi) and _form_is_exact(generator)
    B = [[generator[(i, j)] for j in range(1, n + 1)] for i in range(1, n + 1)]
    Bcols = [Vector([B[i][j] for i in range(n)]) for j in range(n)]
    coeffs = {}
    for blade in blades(n, phi.degree):
        total = 0
        for pos, i in enumerate(blade):
            vecs = [Vector.basis(n, k, exact=exact) for k in blade]
            vecs[pos] = Bcols[i - 1]
            total += phi.evaluate(*vecs)
        if total != 0:
            coeffs[blade] = total
    return KForm(n, phi.degree, coeffs)
