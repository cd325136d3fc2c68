"""Integer bookkeeping of topological invariants under cut-and-paste moves.

Tracks Euler characteristic, signature, and (optionally) Betti numbers
through gluing, connected sums, branched double covers, free graph
quotients, and products with a circle.  Signatures add under gluing by
Novikov additivity, which the caller asserts (the interface-homology
hypothesis is recorded, not checked).  Euler characteristics of
non-compact pieces must be supplied explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple


class SurgeryError(ValueError):
    """Unsupported move or violated precondition."""


@dataclass(frozen=True)
class TopInvariants:
    """Integer invariants of a piece: chi always, sigma when meaningful."""

    dim: int
    chi: int
    sigma: Optional[int] = None
    betti: Optional[Tuple[int, ...]] = None
    label: str = ""

    def __post_init__(self):
        if self.betti is not None:
            object.__setattr__(self, "betti", tuple(self.betti))
            if len(self.betti) != self.dim + 1:
                raise SurgeryError(
                    f"betti needs {self.dim + 1} entries for dim {self.dim}")
            if sum((-1) ** k * b for k, b in enumerate(self.betti)) != self.chi:
                raise SurgeryError("betti numbers contradict chi")

    def as_dict(self) -> dict:
        out = {"dim": self.dim, "chi": self.chi, "label": self.label}
        out["sigma"] = self.sigma if self.sigma is not None else "n/a"
        if self.betti is not None:
            out["betti"] = list(self.betti)
        return out


@dataclass(frozen=True)
class Graph:
    """A finite graph carrying only the counts that matter for chi."""

    vertices: int
    edges: int
    connected: bool = True

    def __post_init__(self):
        if self.connected and self.vertices < 1:
            raise SurgeryError("a connected graph needs at least one vertex")

    @property
    def chi(self) -> int:
        return self.vertices - self.edges

    @property
    def b1(self) -> Optional[int]:
        return 1 - self.chi if self.connected else None


def glue(a: TopInvariants, b: TopInvariants, along: TopInvariants,
         novikov_ok: bool = True) -> TopInvariants:
    """Glue two pieces along an interface.

    chi adds with the interface chi subtracted; sigma adds when the caller
    asserts Novikov additivity applies (otherwise the result has no
    sigma).  The interface is either one dimension lower or an interface
    piece of the same dimension whose chi is subtracted as given.
    """
    if a.dim != b.dim:
        raise SurgeryError(f"cannot glue dim {a.dim} to dim {b.dim}")
    if along.dim not in (a.dim - 1, a.dim):
        raise SurgeryError(
            f"interface dim {along.dim} incompatible with piece dim {a.dim}")
    chi = a.chi + b.chi - along.chi
    sigma = None
    if novikov_ok and a.sigma is not None and b.sigma is not None:
        sigma = a.sigma + b.sigma
    label = f"({a.label or '?'} u {b.label or '?'})"
    return TopInvariants(dim=a.dim, chi=chi, sigma=sigma, label=label)


def connected_sum(a: TopInvariants, b: TopInvariants) -> TopInvariants:
    """Connected sum of closed 4-manifolds: chi adds minus 2, sigma adds."""
    if a.dim != 4 or b.dim != 4:
        raise SurgeryError("connected sum supported for dim 4 only")
    if a.sigma is None or b.sigma is None:
        raise SurgeryError("connected sum needs sigma on both pieces")
    return TopInvariants(dim=4, chi=a.chi + b.chi - 2, sigma=a.sigma + b.sigma,
                         label=f"({a.label or '?'} # {b.label or '?'})")


def connected_sum_many(pieces: Sequence[Tuple[int, TopInvariants]]) -> TopInvariants:
    """n-fold connected sums, e.g. ``[(13, CP2), (29, CP2bar)]``."""
    total = None
    for count, piece in pieces:
        for _ in range(count):
            total = piece if total is None else connected_sum(total, piece)
    if total is None:
        raise SurgeryError("empty connected sum")
    return total


def riemann_hurwitz(degree: int, chi_base: int, branch_points: int) -> int:
    """chi of a branched cover of a surface with simple branch points.

    Supports unbranched covers of any degree and branched double covers:
    ``chi = degree * chi_base - branch_points``.
    """
    if branch_points < 0:
        raise SurgeryError("negative branch point count")
    if branch_points > 0 and degree != 2:
        raise SurgeryError("branched covers supported for degree 2 only")
    return degree * chi_base - branch_points


def surface_genus(chi: int) -> int:
    """Genus of the closed orientable surface with the given chi."""
    if chi > 2 or chi % 2 != 0:
        raise SurgeryError(f"no closed orientable surface has chi = {chi}")
    return (2 - chi) // 2


def graph_quotient(g: Graph, group_order: int) -> Graph:
    """Quotient of a graph by a free action: counts divide exactly."""
    if group_order < 1:
        raise SurgeryError("group order must be positive")
    if g.vertices % group_order or g.edges % group_order:
        raise SurgeryError("action cannot be free: counts not divisible")
    return Graph(vertices=g.vertices // group_order,
                 edges=g.edges // group_order, connected=g.connected)


def product_with_circle(a: TopInvariants) -> TopInvariants:
    """Cross with a circle: chi vanishes; Betti numbers by the Kuenneth rule."""
    betti = None
    if a.betti is not None:
        old = (0,) + a.betti + (0,)
        betti = tuple(old[k] + old[k + 1] for k in range(a.dim + 2))
    return TopInvariants(dim=a.dim + 1, chi=0, sigma=None, betti=betti,
                         label=f"S1 x {a.label or '?'}")


def closed_double_genus(b1_half: int) -> int:
    """Genus of the closed double of a piece with first Betti number b1_half.

    The double's boundary has first Betti number ``2 b1_half``, so it is
    the closed orientable surface of genus ``b1_half``.
    """
    if b1_half < 0:
        raise SurgeryError("negative Betti number")
    return b1_half


# -- surgery expression trees ---------------------------------------------------------


def _leaf_from_dict(obj: dict) -> TopInvariants:
    sigma = obj.get("sigma")
    if sigma == "n/a":
        sigma = None
    return TopInvariants(dim=int(obj["dim"]), chi=int(obj["chi"]),
                         sigma=None if sigma is None else int(sigma),
                         betti=obj.get("betti"), label=str(obj.get("label", "")))


def evaluate_surgery(tree: dict) -> Tuple[TopInvariants, List[dict]]:
    """Evaluate a surgery expression tree bottom-up.

    Nodes: {"op": "leaf", "invariants": {...}} |
           {"op": "glue", "parts": [a, b], "along": {...}, "novikov_ok": bool} |
           {"op": "connected_sum", "parts": [a, b]} |
           {"op": "product_s1", "parts": [a]}.
    Returns the root invariants and a derivation table, one row per node.
    """
    rows: List[dict] = []

    def walk(node: dict) -> TopInvariants:
        if not isinstance(node, dict) or "op" not in node:
            raise SurgeryError("malformed surgery node: missing op")
        op = node["op"]
        if op == "leaf":
            result = _leaf_from_dict(node["invariants"])
        elif op == "glue":
            parts = [walk(child) for child in node["parts"]]
            if len(parts) != 2:
                raise SurgeryError("glue takes exactly two parts")
            along = _leaf_from_dict(node["along"])
            result = glue(parts[0], parts[1], along,
                          novikov_ok=bool(node.get("novikov_ok", True)))
        elif op == "connected_sum":
            parts = [walk(child) for child in node["parts"]]
            if len(parts) != 2:
                raise SurgeryError("connected_sum takes exactly two parts")
            result = connected_sum(parts[0], parts[1])
        elif op == "product_s1":
            parts = [walk(child) for child in node["parts"]]
            if len(parts) != 1:
                raise SurgeryError("product_s1 takes exactly one part")
            result = product_with_circle(parts[0])
        else:
            raise SurgeryError(f"unknown op {op!r}")
        rows.append({"op": op, **result.as_dict()})
        return result

    root = walk(tree)
    return root, rows
