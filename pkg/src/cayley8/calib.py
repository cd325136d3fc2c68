"""Calibration evaluation, Cayley testing, and comass estimation.

The comass of a degree-p form is its maximum over oriented p-planes.  It
is estimated by random restarts of Riemannian gradient ascent on the
orthonormal-frame (Stiefel) manifold: project the Euclidean gradient onto
the tangent space, take a backtracking line-search step, re-orthonormalize
by QR.  Runs are deterministic for a fixed seed.

Also hosts the standard Calabi-Yau data on C^4 = R^8 in interleaved
coordinates (x1, y1, ..., x4, y4): the Kaehler 2-form, the holomorphic
volume form, and the complex structure J, normalized so that
``omega^4 = 3/2 Omega ^ conj(Omega)``.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .multivec import (KForm, OrientedPlane, Vector, blades, is_zero,
                       pullback_to_plane, restrict)
from .spin7 import Spin7Model, phi0, tau
from . import g2 as g2mod

#: Default gate on |tau| below which a 4-plane counts as Cayley.
TAU_TOL = 1e-9

#: Default comass optimizer tolerance and the criterion-agreement tolerance.
COMASS_TOL = 1e-6
AGREEMENT_TOL = 1e-6

BUILTIN_FORMS = ("spin7", "wirtinger2", "re-omega", "g2-assoc", "g2-coassoc")


@dataclass(frozen=True)
class CalibrationForm:
    """A candidate calibration: a form with a label (pointwise data only)."""

    form: KForm
    name: str = "custom"

    @property
    def dim(self) -> int:
        return self.form.dim

    @property
    def degree(self) -> int:
        return self.form.degree


# -- standard C^4 data -------------------------------------------------------------


def kaehler_form(exact: bool = True) -> KForm:
    """omega = sum_i dx_i ^ dy_i in interleaved coordinates."""
    one = Fraction(1) if exact else 1.0
    return KForm(8, 2, {(2 * i - 1, 2 * i): one for i in range(1, 5)})


def _omega_parts(exact: bool = True) -> Tuple[KForm, KForm]:
    """(Re, Im) of (dx1 + i dy1) ^ ... ^ (dx4 + i dy4)."""
    re: dict = {}
    im: dict = {}
    one = Fraction(1) if exact else 1.0
    for ys in itertools.chain.from_iterable(
            itertools.combinations(range(1, 5), k) for k in range(5)):
        blade = tuple(2 * i if i in ys else 2 * i - 1 for i in range(1, 5))
        k = len(ys) % 4
        if k == 0:
            re[blade] = one
        elif k == 1:
            im[blade] = one
        elif k == 2:
            re[blade] = -one
        else:
            im[blade] = -one
    return KForm(8, 4, re), KForm(8, 4, im)


def re_omega(exact: bool = True) -> KForm:
    return _omega_parts(exact)[0]


def im_omega(exact: bool = True) -> KForm:
    return _omega_parts(exact)[1]


def complex_structure(v: Vector) -> Vector:
    """J in interleaved coordinates: dx_i -> dy_i, dy_i -> -dx_i."""
    if v.dim != 8:
        raise ValueError("J acts on R^8")
    out = []
    for i in range(1, 5):
        x, y = v[2 * i - 1], v[2 * i]
        out.extend((-y, x))
    return Vector(out)


def sl_model_form(exact: bool = True) -> KForm:
    """The structure form of a Calabi-Yau 4-fold: -omega^2/2 + Re(Omega)."""
    om = kaehler_form(exact)
    half = Fraction(1, 2) if exact else 0.5
    return -half * om.wedge(om) + re_omega(exact)


def coassoc_model_form(exact: bool = True) -> KForm:
    """dtheta ^ phi + psi built from the R^7 slice data (equals the model form)."""
    g2m = g2mod.build_g2(exact=exact)
    one = Fraction(1) if exact else 1.0
    dtheta = KForm.monomial(8, 1, coeff=one)
    return dtheta.wedge(g2mod.raise_index_form(g2m.phi3)) \
        + g2mod.raise_index_form(g2m.psi4)


def builtin_form(name: str, exact: bool = True) -> CalibrationForm:
    """Look up a named calibration; raises KeyError for unknown names."""
    if name == "spin7":
        return CalibrationForm(phi0(exact), "spin7")
    if name == "wirtinger2":
        om = kaehler_form(exact)
        half = Fraction(1, 2) if exact else 0.5
        return CalibrationForm(half * om.wedge(om), "wirtinger2")
    if name == "re-omega":
        return CalibrationForm(re_omega(exact), "re-omega")
    if name == "g2-assoc":
        return CalibrationForm(g2mod.build_g2(exact).phi3, "g2-assoc")
    if name == "g2-coassoc":
        return CalibrationForm(g2mod.build_g2(exact).psi4, "g2-coassoc")
    raise KeyError(f"unknown builtin form {name!r}; known: {BUILTIN_FORMS}")


# -- pointwise tests ----------------------------------------------------------------


def calibration_value(c: CalibrationForm, plane: OrientedPlane):
    """The scalar lambda with ``form|_V = lambda vol_V``."""
    return restrict(c.form, plane)


@dataclass(frozen=True)
class CayleyVerdict:
    verdict: str  # "cayley+", "cayley-", "not-cayley"
    tau_norm: float
    value: float
    criteria_agree: bool

    def as_dict(self) -> dict:
        return {"verdict": self.verdict, "tau_norm": self.tau_norm,
                "value": self.value, "criteria_agree": self.criteria_agree}


def cayley_test(m: Spin7Model, plane: OrientedPlane, tau_tol: float = TAU_TOL,
                value_tol: float = AGREEMENT_TOL) -> CayleyVerdict:
    """Classify a 4-plane by tau-vanishing, with the calibration value as sign.

    The tau criterion and the |value| = 1 criterion must agree; the
    verdict carries the agreement flag.
    """
    if plane.degree != 4 or plane.dim != 8:
        raise ValueError("cayley test expects a 4-plane in R^8")
    onb = plane.orthonormal_basis
    t = tau(m, *onb)
    tnorm = t.norm()
    value = m.phi.evaluate(*onb)
    is_cayley = is_zero(tnorm, tau_tol)
    value_says = is_zero(abs(value) - 1, value_tol)
    verdict = "not-cayley"
    if is_cayley:
        verdict = "cayley+" if value > 0 else "cayley-"
    return CayleyVerdict(verdict=verdict, tau_norm=float(tnorm),
                         value=float(value), criteria_agree=is_cayley == value_says)


def sl_test(plane: OrientedPlane, tol: float = 1e-9) -> bool:
    """Special Lagrangian: omega and Im(Omega) both restrict to zero."""
    if plane.degree != 4 or plane.dim != 8:
        raise ValueError("special Lagrangian test expects a 4-plane in R^8")
    exact = all(isinstance(c, (int, Fraction))
                for u in plane.orthonormal_basis for c in u.components)
    if not pullback_to_plane(kaehler_form(exact), plane).is_zero(tol):
        return False
    return is_zero(restrict(im_omega(exact), plane), tol)


def complex_test(plane: OrientedPlane, tol: float = 1e-9) -> bool:
    """True iff the 4-plane is invariant under the complex structure J."""
    if plane.degree != 4 or plane.dim != 8:
        raise ValueError("complex test expects a 4-plane in R^8")
    onb = plane.orthonormal_basis
    for u in onb:
        w = complex_structure(u)
        for v in onb:
            w = w - v.dot(w) * v
        if not is_zero(w.norm_sq(), tol * tol):
            return False
    return True


# -- batched Cayley sweep (floating) -------------------------------------------------


class CayleySweep:
    """Vectorized tau-norm and calibration value over batches of 4-planes.

    Uses the 28x28 matrix of ``a -> star(a ^ phi)`` so that the 2-fold
    cross product is a single matrix product; agrees with the sparse path
    to machine precision.
    """

    def __init__(self, model: Spin7Model):
        if model.exact:
            op = np.array([[float(x) for x in row] for row in model.lambda2_op])
        else:
            op = np.asarray(model.lambda2_op, dtype=float)
        self.p7 = 0.25 * (np.eye(28) - op)
        self.T4 = model.phi.as_float().to_dense()
        basis2 = blades(8, 2)
        self.idx_i = np.array([b[0] - 1 for b in basis2])
        self.idx_j = np.array([b[1] - 1 for b in basis2])

    def _wedge(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x[:, self.idx_i] * y[:, self.idx_j]
                - x[:, self.idx_j] * y[:, self.idx_i])

    def _cross3(self, u, v, w) -> np.ndarray:
        # (u . (v . (w . phi)))^sharp = phi(w, v, u, .)
        return np.einsum('ijkz,Ni,Nj,Nk->Nz', self.T4, w, v, u, optimize=True)

    def __call__(self, frames: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """frames: (N, 4, 8) orthonormal rows; returns (tau_norms, values)."""
        a, b, c, d = (frames[:, k, :] for k in range(4))
        p = self._cross3(b, c, d)
        gab = np.einsum('Ni,Ni->N', a, b)[:, None]
        gac = np.einsum('Ni,Ni->N', a, c)[:, None]
        gad = np.einsum('Ni,Ni->N', a, d)[:, None]
        combo = (-self._wedge(a, p) + gab * self._wedge(c, d)
                 + gac * self._wedge(d, b) + gad * self._wedge(b, c))
        tau_coords = 2.0 * combo @ self.p7.T
        tau_norms = np.linalg.norm(tau_coords, axis=1)
        values = np.einsum('ijkl,Ni,Nj,Nk,Nl->N', self.T4, a, b, c, d,
                           optimize=True)
        return tau_norms, values


def random_orthonormal_frames(rng: np.random.Generator, count: int,
                              degree: int, dim: int) -> np.ndarray:
    """(count, degree, dim) stacks of orthonormalized Gaussian frames."""
    raw = rng.standard_normal((count, dim, degree))
    q, r = np.linalg.qr(raw)
    # fix sign so the frame depends continuously on the seed draw
    signs = np.sign(np.einsum('nii->ni', r))
    signs[signs == 0] = 1.0
    return np.transpose(q * signs[:, None, :], (0, 2, 1))


# -- comass optimization ---------------------------------------------------------------


@dataclass
class ComassResult:
    value: float
    plane: OrientedPlane
    restarts: int
    best_restart: int
    iterations: int
    converged: bool
    warning: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax": [[c for c in u.components] for u in self.plane.orthonormal_basis],
            "restarts": self.restarts,
            "best_restart": self.best_restart,
            "iterations": self.iterations,
            "converged": self.converged,
            "warning": self.warning,
        }


def _dense_value_grad(T: np.ndarray, X: np.ndarray) -> Tuple[float, np.ndarray]:
    p = X.shape[0]
    grad = np.empty_like(X)
    for m in range(p):
        out = T
        for r in range(p - 1, m, -1):
            out = np.tensordot(out, X[r], axes=(out.ndim - 1, 0))
        for r in range(m):
            out = np.tensordot(X[r], out, axes=(0, 0))
        grad[m] = out
    value = float(X[0] @ grad[0])
    return value, grad


def _retract(X: np.ndarray) -> np.ndarray:
    """Re-orthonormalize rows (QR with positive diagonal)."""
    q, r = np.linalg.qr(X.T)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return (q * signs).T


def _ascend(T: np.ndarray, X: np.ndarray, tol: float,
            max_iter: int = 500, max_halvings: int = 40):
    """Projected gradient ascent with backtracking; returns (X, value, iters, converged).

    The sufficient-increase constant 1/2 rejects overshooting full steps,
    so halving lands near the quadratic-model optimum and the ascent
    converges linearly instead of crawling.
    """
    value, grad = _dense_value_grad(T, X)
    if value < 0:
        X = X.copy()
        X[0] = -X[0]
        value, grad = _dense_value_grad(T, X)
    step = 1.0
    for it in range(max_iter):
        sym = X @ grad.T
        riem = grad - 0.5 * (sym + sym.T) @ X
        gnorm = float(np.linalg.norm(riem))
        if gnorm < tol:
            return X, value, it, True
        t = step
        for _ in range(max_halvings):
            Xn = _retract(X + t * riem)
            vn, gn = _dense_value_grad(T, Xn)
            if vn > value + 0.5 * t * gnorm * gnorm:
                X, value, grad = Xn, vn, gn
                step = min(2.0 * t, 1.0)
                break
            t *= 0.5
        else:
            return X, value, it + 1, False
    return X, value, max_iter, False


def comass_estimate(c: CalibrationForm, restarts: int = 50,
                    tol: float = COMASS_TOL, seed: int = 0,
                    jobs: int = 1) -> ComassResult:
    """Estimate max over oriented p-planes of the calibration value.

    Random orthonormal starts (one independent substream per restart),
    projected gradient ascent, deterministic max-merge with ties broken
    by the lowest restart index.  Degrees above n/2 are optimized through
    the Hodge dual, which has the same comass.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    form = c.form
    dualized = form.degree > form.dim - form.degree
    work = form.hodge() if dualized else form
    T = work.as_float().to_dense()
    p, n = work.degree, work.dim

    def run(i: int):
        rng = np.random.default_rng([seed, i])
        X0 = random_orthonormal_frames(rng, 1, p, n)[0]
        return _ascend(T, X0, tol)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, range(restarts)))
    else:
        outcomes = [run(i) for i in range(restarts)]

    best_i = 0
    for i in range(1, restarts):
        if outcomes[i][1] > outcomes[best_i][1] + 1e-15:
            best_i = i
    X, value, iters, converged = outcomes[best_i]

    if dualized:
        X = _complement_frame(X, form)
        check = restrict(form, OrientedPlane([Vector(r) for r in X]))
        if check < 0:
            X = X.copy()
            X[0] = -X[0]
        value = float(abs(check))
    plane = OrientedPlane([Vector(float(x) for x in row) for row in X])
    warning = None if converged else "iteration cap reached before gradient tolerance"
    return ComassResult(value=float(value), plane=plane, restarts=restarts,
                        best_restart=best_i, iterations=iters,
                        converged=converged, warning=warning)


def _complement_frame(X: np.ndarray, form: KForm) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the rows of X."""
    n = X.shape[1]
    _, _, vh = np.linalg.svd(X)
    return vh[X.shape[0]:n]


# -- JSON interfaces ---------------------------------------------------------------------


def _parse_scalar(x):
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, bool):
        raise ValueError("boolean is not a coefficient")
    return x


def load_plane(obj: dict) -> OrientedPlane:
    """Plane input: {"dim": n, "degree": p, "vectors": [[...], ...]}."""
    try:
        dim, degree = int(obj["dim"]), int(obj["degree"])
        vectors = obj["vectors"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed plane object: {exc}") from exc
    if len(vectors) != degree:
        raise ValueError(f"expected {degree} vectors, got {len(vectors)}")
    rows = []
    for row in vectors:
        if len(row) != dim:
            raise ValueError(f"vector length {len(row)} != dim {dim}")
        rows.append(Vector(_parse_scalar(x) for x in row))
    return OrientedPlane(rows)


def load_form(obj: dict) -> CalibrationForm:
    """Form input: {"dim": n, "degree": k, "terms": [{"blade": [...], "coeff": ...}]}."""
    try:
        dim, degree = int(obj["dim"]), int(obj["degree"])
        terms = obj["terms"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed form object: {exc}") from exc
    coeffs: dict = {}
    for term in terms:
        blade = tuple(int(i) for i in term["blade"])
        coeffs[blade] = coeffs.get(blade, 0) + _parse_scalar(term["coeff"])
    form = KForm.from_terms(dim, degree, coeffs)
    return CalibrationForm(form, str(obj.get("name", "custom")))


def load_form_file(path: str) -> CalibrationForm:
    with open(path) as fh:
        return load_form(json.load(fh))


def load_plane_file(path: str) -> OrientedPlane:
    with open(path) as fh:
        return load_plane(json.load(fh))
