"""The pointwise G2 structure on R^7 induced by slicing the model 4-form.

Splitting R^8 = R e_1 + R^7 (ambient slots 2..8 mapped to 1..7, the single
index convention shared by the whole package) and contracting the model
4-form with e_1 yields the associative 3-form

    phi = e^123 + e^145 - e^167 + e^246 + e^257 + e^347 - e^356

whose Hodge dual is the coassociative 4-form psi.  The model 4-form then
factors as ``dtheta ^ phi + psi`` with theta the first coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from .multivec import (KForm, OrientedPlane, Vector, blades, is_zero,
                       restrict)
from .spin7 import phi0


class G2ConsistencyError(RuntimeError):
    """Internal slice consistency failed (must not occur)."""


def lower_index_form(a: KForm, drop: int = 1) -> KForm:
    """Reindex a form on R^8 not involving ``drop`` to R^7 (slots shift down)."""
    coeffs = {}
    for blade, c in a.coeffs.items():
        if drop in blade:
            raise ValueError(f"blade {blade} involves the dropped slot {drop}")
        coeffs[tuple(i - 1 if i > drop else i for i in blade)] = c
    return KForm(7, a.degree, coeffs)


def raise_index_form(a: KForm, insert: int = 1) -> KForm:
    """Reindex a form on R^7 to R^8, skipping the slot ``insert``."""
    coeffs = {}
    for blade, c in a.coeffs.items():
        coeffs[tuple(i + 1 if i >= insert else i for i in blade)] = c
    return KForm(8, a.degree, coeffs)


def lift_vector(v: Vector, insert: int = 1, exact: bool = True) -> Vector:
    """Embed an R^7 vector into R^8 with zero in the ``insert`` slot."""
    zero = 0 if exact else 0.0
    comps = list(v.components)
    return Vector(comps[:insert - 1] + [zero] + comps[insert - 1:])


def project_vector(v: Vector, drop: int = 1) -> Vector:
    comps = list(v.components)
    del comps[drop - 1]
    return Vector(comps)


@dataclass(frozen=True)
class G2Model:
    """The slice 3-form and its dual 4-form on R^7."""

    phi3: KForm
    psi4: KForm
    exact: bool


def build_g2(exact: bool = True) -> G2Model:
    """Extract the 3- and 4-form from the model 4-form by slicing.

    Verifies ``psi = star_7(phi)`` and ``<phi, phi> = 7``; failure of
    either is an internal error.
    """
    big = phi0(exact=exact)
    e1 = Vector.basis(8, 1, exact=exact)
    phi3 = lower_index_form(big.contract(e1))
    theta_part = KForm.monomial(8, 1, coeff=Fraction(1) if exact else 1.0)
    psi4 = lower_index_form(big - theta_part.wedge(big.contract(e1)))
    if not psi4.approx_equal(phi3.hodge()):
        raise G2ConsistencyError("psi != star_7(phi)")
    if not is_zero(phi3.norm_sq() - 7):
        raise G2ConsistencyError("<phi, phi> != 7")
    return G2Model(phi3=phi3, psi4=psi4, exact=exact)


def cross_g2(m: G2Model, v: Vector, w: Vector) -> Vector:
    """Cross product on R^7, defined metrically: ``g(u, v x w) = phi(u, v, w)``."""
    if v.dim != 7 or w.dim != 7:
        raise ValueError("cross_g2 expects vectors in R^7")
    return Vector(
        m.phi3.evaluate(Vector.basis(7, i, exact=m.exact), v, w)
        for i in range(1, 8))


def associator(m: G2Model, u: Vector, v: Vector, w: Vector) -> Vector:
    """The vector-valued 3-form ``-u x (v x w) - g(u,v) w + g(u,w) v``.

    Alternating; vanishes exactly on associative triples.
    """
    return -1 * cross_g2(m, u, cross_g2(m, v, w)) - u.dot(v) * w + u.dot(w) * v


def is_associative(m: G2Model, plane: OrientedPlane,
                   tol: float = 1e-9) -> bool:
    """True iff the 3-form restricts to +-volume on the 3-plane."""
    if plane.degree != 3 or plane.dim != 7:
        raise ValueError("associative test expects a 3-plane in R^7")
    lam = restrict(m.phi3, plane)
    return is_zero(abs(lam) - 1, tol)


def is_coassociative(m: G2Model, plane: OrientedPlane,
                     tol: float = 1e-9) -> bool:
    """True iff the 3-form restricts to zero on every 3-subframe of the 4-plane."""
    if plane.degree != 4 or plane.dim != 7:
        raise ValueError("coassociative test expects a 4-plane in R^7")
    onb = plane.orthonormal_basis
    for blade in blades(4, 3):
        if not is_zero(m.phi3.evaluate(*(onb[i - 1] for i in blade)), tol):
            return False
    return True
