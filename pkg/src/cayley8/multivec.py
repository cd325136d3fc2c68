"""Exterior algebra over R^n (n <= 8) with the Euclidean metric.

A degree-k form is stored sparsely over the lexicographic blade basis:
a map from strictly increasing k-tuples of 1-based indices to
coefficients.  Coefficients may be exact (``int``/``fractions.Fraction``)
or ``float``; arithmetic follows Python's coercion rules, so exact inputs
stay exact through every operation that does not take a square root, and
square roots themselves stay exact when the radicand is a perfect-square
rational.

Conventions (fixed for the whole package):

* blades are ordered lexicographically; all signs are explicit
  permutation parities,
* interior product uses the first slot: ``(v . a)(x1, ...) = a(v, x1, ...)``,
* Hodge star satisfies ``a ^ star(b) = <a, b> vol`` for the standard
  orientation ``e^1 ^ ... ^ e^n``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

import numpy as np

Blade = Tuple[int, ...]

#: Comparison tolerance for floating coefficients.  Exact coefficients
#: compare exactly.
DEFAULT_TOL = 1e-12

#: Pivot tolerance for modified Gram-Schmidt on floating frames.
GRAM_SCHMIDT_TOL = 1e-10


class DimensionError(ValueError):
    """Operands live on different spaces or exceed the supported range."""


class DegreeError(ValueError):
    """A degree precondition is violated (overflow, mismatch, ...)."""


class DegeneratePlaneError(ValueError):
    """Spanning vectors of a plane are linearly dependent."""


def exact_sqrt(x):
    """Square root that stays exact for perfect-square rationals.

    Returns a Fraction when ``x`` is a rational whose numerator and
    denominator are perfect squares, otherwise ``math.sqrt(x)``.
    """
    if isinstance(x, (int, Fraction)):
        f = Fraction(x)
        if f < 0:
            raise ValueError("negative radicand")
        pn, pd = math.isqrt(f.numerator), math.isqrt(f.denominator)
        if pn * pn == f.numerator and pd * pd == f.denominator:
            return Fraction(pn, pd)
    return math.sqrt(x)


def is_zero(x, tol: float = DEFAULT_TOL) -> bool:
    """Zero test: exact for int/Fraction, |x| <= tol for floats."""
    if isinstance(x, (int, Fraction)):
        return x == 0
    return abs(x) <= tol


def sort_blade(indices: Sequence[int]) -> Tuple[Blade, int]:
    """Sort indices into a canonical blade, returning (blade, sign).

    The sign is the permutation parity; a repeated index yields sign 0.
    """
    idx = list(indices)
    sign = 1
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for a, b in zip(idx, idx[1:]):
        if a == b:
            return tuple(idx), 0
    return tuple(idx), sign


def merge_blades(a: Blade, b: Blade) -> Tuple[Blade, int]:
    """Merge two increasing blades, returning (merged, sign); sign 0 on overlap."""
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] == b[j]:
            return (), 0
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining len(a) - i entries of a
            if (len(a) - i) % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


def blades(dim: int, degree: int) -> Tuple[Blade, ...]:
    """All degree-`degree` blades on R^dim in lexicographic order."""
    return tuple(itertools.combinations(range(1, dim + 1), degree))


@dataclass(frozen=True)
class Vector:
    """A vector in R^dim with Euclidean metric."""

    components: Tuple

    def __init__(self, components: Iterable):
        object.__setattr__(self, "components", tuple(components))

    @property
    def dim(self) -> int:
        return len(self.components)

    def __getitem__(self, i: int):
        """1-based component access, matching blade indices."""
        return self.components[i - 1]

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(a + b for a, b in zip(self.components, other.components))

    def __sub__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector(a - b for a, b in zip(self.components, other.components))

    def __neg__(self) -> "Vector":
        return Vector(-a for a in self.components)

    def __mul__(self, scalar) -> "Vector":
        return Vector(a * scalar for a in self.components)

    __rmul__ = __mul__

    def dot(self, other: "Vector"):
        self._check(other)
        return sum(a * b for a, b in zip(self.components, other.components))

    def norm_sq(self):
        return self.dot(self)

    def norm(self):
        return exact_sqrt(self.norm_sq())

    def normalized(self) -> "Vector":
        n = self.norm()
        if is_zero(n, GRAM_SCHMIDT_TOL):
            raise DegeneratePlaneError("cannot normalize a (near-)zero vector")
        return Vector(a / n for a in self.components)

    def to_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.components])

    def _check(self, other: "Vector") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"vector dims differ: {self.dim} vs {other.dim}")

    @staticmethod
    def basis(dim: int, i: int, exact: bool = True) -> "Vector":
        one = 1 if exact else 1.0
        zero = 0 if exact else 0.0
        return Vector(one if j == i else zero for j in range(1, dim + 1))

    @staticmethod
    def from_array(arr) -> "Vector":
        return Vector(float(x) for x in arr)


@dataclass(frozen=True)
class KForm:
    """A degree-k alternating form on R^dim over the lexicographic blade basis.

    Only blades with strictly increasing indices are stored; absent blades
    are zero.  Values are immutable; all operations return new forms.
    """

    dim: int
    degree: int
    coeffs: Dict[Blade, object] = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.dim <= 8:
            raise DimensionError(f"dim must be in 1..8, got {self.dim}")
        if not 0 <= self.degree <= self.dim:
            raise DegreeError(f"degree must be in 0..{self.dim}, got {self.degree}")
        clean = {}
        for blade, c in self.coeffs.items():
            blade = tuple(blade)
            if len(blade) != self.degree:
                raise DegreeError(f"blade {blade} has wrong length for degree {self.degree}")
            if any(not 1 <= i <= self.dim for i in blade):
                raise DimensionError(f"blade {blade} out of range for dim {self.dim}")
            if any(a >= b for a, b in zip(blade, blade[1:])):
                raise ValueError(f"blade {blade} is not strictly increasing")
            if c != 0:
                clean[blade] = c
        object.__setattr__(self, "coeffs", clean)

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def zero(dim: int, degree: int) -> "KForm":
        return KForm(dim, degree, {})

    @staticmethod
    def from_terms(dim: int, degree: int, terms: Dict[Blade, object]) -> "KForm":
        """Build a form from possibly unsorted blades, normalizing signs."""
        coeffs: Dict[Blade, object] = {}
        for blade, c in terms.items():
            sorted_blade, sign = sort_blade(blade)
            if sign == 0 or c == 0:
                continue
            coeffs[sorted_blade] = coeffs.get(sorted_blade, 0) + sign * c
        return KForm(dim, degree, coeffs)

    @staticmethod
    def monomial(dim: int, *indices: int, coeff=1) -> "KForm":
        """The basis blade e^{i1...ik} (indices may be unsorted)."""
        return KForm.from_terms(dim, len(indices), {tuple(indices): coeff})

    @staticmethod
    def volume(dim: int, exact: bool = True) -> "KForm":
        one = 1 if exact else 1.0
        return KForm(dim, dim, {tuple(range(1, dim + 1)): one})

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "KForm") -> "KForm":
        self._check_same_space(other)
        coeffs = dict(self.coeffs)
        for blade, c in other.coeffs.items():
            coeffs[blade] = coeffs.get(blade, 0) + c
        return KForm(self.dim, self.degree, coeffs)

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __neg__(self) -> "KForm":
        return KForm(self.dim, self.degree, {b: -c for b, c in self.coeffs.items()})

    def __mul__(self, scalar) -> "KForm":
        return KForm(self.dim, self.degree, {b: c * scalar for b, c in self.coeffs.items()})

    __rmul__ = __mul__

    def __getitem__(self, blade: Sequence[int]):
        sorted_blade, sign = sort_blade(blade)
        return sign * self.coeffs.get(sorted_blade, 0)

    def is_zero(self, tol: float = DEFAULT_TOL) -> bool:
        return all(is_zero(c, tol) for c in self.coeffs.values())

    def approx_equal(self, other: "KForm", tol: float = DEFAULT_TOL) -> bool:
        return (self - other).is_zero(tol)

    # -- products and duality ------------------------------------------------

    def wedge(self, other: "KForm") -> "KForm":
        """Exterior product; graded-anticommutative, associative."""
        self._check_same_dim(other)
        if self.degree + other.degree > self.dim:
            raise DegreeError(
                f"wedge degree overflow: {self.degree} + {other.degree} > dim {self.dim}")
        coeffs: Dict[Blade, object] = {}
        for ba, ca in self.coeffs.items():
            for bb, cb in other.coeffs.items():
                merged, sign = merge_blades(ba, bb)
                if sign == 0:
                    continue
                coeffs[merged] = coeffs.get(merged, 0) + sign * ca * cb
        return KForm(self.dim, self.degree + other.degree, coeffs)

    def hodge(self, orientation: int = 1) -> "KForm":
        """Hodge star for the Euclidean metric and given orientation (+-1).

        Satisfies ``a ^ star(a) = <a, a> vol`` and ``star(star(a)) =
        (-1)^(k(n-k)) a``.
        """
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        n = self.dim
        coeffs: Dict[Blade, object] = {}
        for blade, c in self.coeffs.items():
            comp = tuple(i for i in range(1, n + 1) if i not in blade)
            _, sign = merge_blades(blade, comp)
            coeffs[comp] = orientation * sign * c
        return KForm(n, n - self.degree, coeffs)

    def contract(self, v: Vector) -> "KForm":
        """Interior product ``(v . a)(x1, ...) = a(v, x1, ...)`` (first slot)."""
        if v.dim != self.dim:
            raise DimensionError(f"vector dim {v.dim} != form dim {self.dim}")
        if self.degree == 0:
            raise DegreeError("cannot contract a 0-form")
        coeffs: Dict[Blade, object] = {}
        for blade, c in self.coeffs.items():
            for pos, i in enumerate(blade):
                vi = v[i]
                if vi == 0:
                    continue
                rest = blade[:pos] + blade[pos + 1:]
                sign = -1 if pos % 2 else 1
                coeffs[rest] = coeffs.get(rest, 0) + sign * vi * c
        return KForm(self.dim, self.degree - 1, coeffs)

    def inner(self, other: "KForm"):
        """Euclidean inner product (blades are orthonormal)."""
        self._check_same_space(other)
        small, large = self.coeffs, other.coeffs
        if len(large) < len(small):
            small, large = large, small
        return sum(c * large[b] for b, c in small.items() if b in large)

    def norm_sq(self):
        return self.inner(self)

    def norm(self):
        return exact_sqrt(self.norm_sq())

    def evaluate(self, *vectors: Vector):
        """Evaluate the form on degree-many vectors."""
        if len(vectors) != self.degree:
            raise DegreeError(f"need {self.degree} vectors, got {len(vectors)}")
        result = self
        for v in vectors:
            result = result.contract(v)
        return result.coeffs.get((), 0)

    # -- numpy bridges ---------------------------------------------------------

    def coeff_vector(self) -> np.ndarray:
        """Coefficients over the lexicographic blade list, as floats."""
        basis = blades(self.dim, self.degree)
        out = np.zeros(len(basis))
        for pos, blade in enumerate(basis):
            c = self.coeffs.get(blade)
            if c is not None:
                out[pos] = float(c)
        return out

    @staticmethod
    def from_coeff_vector(dim: int, degree: int, vec, tol: float = 0.0) -> "KForm":
        basis = blades(dim, degree)
        coeffs = {}
        for blade, c in zip(basis, vec):
            c = float(c)
            if abs(c) > tol:
                coeffs[blade] = c
        return KForm(dim, degree, coeffs)

    def to_dense(self) -> np.ndarray:
        """Full antisymmetric evaluation tensor T[i1,...,ik] = a(e_i1,...,e_ik).

        0-based numpy indices; only sensible for small degree (k <= 5).
        """
        shape = (self.dim,) * self.degree
        T = np.zeros(shape)
        for blade, c in self.coeffs.items():
            c = float(c)
            for perm in itertools.permutations(range(self.degree)):
                sign = _perm_parity(perm)
                idx = tuple(blade[p] - 1 for p in perm)
                T[idx] = sign * c
        return T

    # -- misc ------------------------------------------------------------------

    def blade_count(self) -> int:
        return len(self.coeffs)

    def map_coeffs(self, fn) -> "KForm":
        return KForm(self.dim, self.degree, {b: fn(c) for b, c in self.coeffs.items()})

    def as_float(self) -> "KForm":
        return self.map_coeffs(float)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for blade in sorted(self.coeffs):
            c = self.coeffs[blade]
            name = "e^{" + "".join(str(i) for i in blade) + "}" if blade else "1"
            parts.append(f"{c}*{name}")
        return " + ".join(parts)

    def _check_same_dim(self, other: "KForm") -> None:
        if self.dim != other.dim:
            raise DimensionError(f"form dims differ: {self.dim} vs {other.dim}")

    def _check_same_space(self, other: "KForm") -> None:
        self._check_same_dim(other)
        if self.degree != other.degree:
            raise DegreeError(f"form degrees differ: {self.degree} vs {other.degree}")


def _perm_parity(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


# -- module-level operations (spec surface) -------------------------------------


def wedge(a: KForm, b: KForm) -> KForm:
    return a.wedge(b)


def hodge(a: KForm, orientation: int = 1) -> KForm:
    return a.hodge(orientation)


def contract(v: Vector, a: KForm) -> KForm:
    return a.contract(v)


def inner(a: KForm, b: KForm):
    return a.inner(b)


def flat(v: Vector) -> KForm:
    """Musical isomorphism: vector to 1-form (Euclidean metric)."""
    return KForm(v.dim, 1, {(i,): v[i] for i in range(1, v.dim + 1) if v[i] != 0})


def sharp(a: KForm) -> Vector:
    """Musical isomorphism: 1-form to vector (Euclidean metric)."""
    if a.degree != 1:
        raise DegreeError("sharp expects a 1-form")
    return Vector(a.coeffs.get((i,), 0) for i in range(1, a.dim + 1))


class OrientedPlane:
    """An oriented p-plane in R^n given by spanning vectors.

    The orientation is the order of the spanning vectors.  An orthonormal
    basis is computed once by modified Gram-Schmidt (pivot tolerance
    ``GRAM_SCHMIDT_TOL``) and cached.
    """

    def __init__(self, spans: Sequence[Vector]):
        spans = [v if isinstance(v, Vector) else Vector(v) for v in spans]
        if not spans:
            raise DegeneratePlaneError("empty spanning set")
        dims = {v.dim for v in spans}
        if len(dims) != 1:
            raise DimensionError("spanning vectors have mixed dimensions")
        self.dim = spans[0].dim
        self.degree = len(spans)
        if self.degree > self.dim:
            raise DegeneratePlaneError("more spanning vectors than dimensions")
        self.spans = tuple(spans)
        self._onb = None

    @property
    def orthonormal_basis(self) -> Tuple[Vector, ...]:
        if self._onb is None:
            basis = []
            for v in self.spans:
                w = v
                for u in basis:
                    w = w - u.dot(w) * u
                nsq = w.norm_sq()
                if is_zero(nsq, GRAM_SCHMIDT_TOL ** 2):
                    raise DegeneratePlaneError("degenerate plane")
                basis.append(w * (1 / exact_sqrt(nsq)))
            self._onb = tuple(basis)
        return self._onb

    def matrix(self) -> np.ndarray:
        """Orthonormal basis as rows of a (degree x dim) float array."""
        return np.array([u.to_array() for u in self.orthonormal_basis])

    def contains(self, v: Vector, tol: float = DEFAULT_TOL) -> bool:
        w = v
        for u in self.orthonormal_basis:
            w = w - u.dot(w) * u
        return is_zero(w.norm_sq(), tol)

    @staticmethod
    def span(*vectors) -> "OrientedPlane":
        return OrientedPlane([v if isinstance(v, Vector) else Vector(v) for v in vectors])


def restrict(a: KForm, plane: OrientedPlane):
    """The scalar lambda with ``a|_V = lambda vol_V``.

    Evaluates ``a`` on an oriented orthonormal basis of the plane.
    """
    if plane.degree != a.degree:
        raise DegreeError(
            f"plane degree {plane.degree} != form degree {a.degree}")
    if plane.dim != a.dim:
        raise DimensionError(f"plane dim {plane.dim} != form dim {a.dim}")
    return a.evaluate(*plane.orthonormal_basis)


def pullback_to_plane(a: KForm, plane: OrientedPlane) -> KForm:
    """Pull a form back to the plane's intrinsic coordinates.

    Index i of the result corresponds to the i-th orthonormal basis
    vector of the plane.
    """
    if a.dim != plane.dim:
        raise DimensionError("ambient dimensions differ")
    if a.degree > plane.degree:
        raise DegreeError("form degree exceeds plane dimension")
    onb = plane.orthonormal_basis
    coeffs = {}
    for blade in itertools.combinations(range(1, plane.degree + 1), a.degree):
        val = a.evaluate(*(onb[i - 1] for i in blade))
        if val != 0:
            coeffs[blade] = val
    return KForm(plane.degree, a.degree, coeffs)


def random_form(rng: np.random.Generator, dim: int, degree: int,
                exact: bool = False, span: int = 9) -> KForm:
    """Random form for property tests; exact mode draws small integers."""
    basis = blades(dim, degree)
    coeffs = {}
    for blade in basis:
        if exact:
            c = int(rng.integers(-span // 2, span // 2 + 1))
        else:
            c = float(rng.standard_normal())
        if c != 0:
            coeffs[blade] = c
    return KForm(dim, degree, coeffs)


def random_vector(rng: np.random.Generator, dim: int, exact: bool = False,
                  span: int = 9) -> Vector:
    if exact:
        return Vector(int(rng.integers(-span // 2, span // 2 + 1)) for _ in range(dim))
    return Vector(float(x) for x in rng.standard_normal(dim))
