"""The runnable identity suite behind ``cayley8 verify``.

Each check returns a named outcome with its worst residual; exact inputs
give residual 0 on pass.  With an injected structure form, only the
form-dependent checks run (a corrupted form then fails with the violated
identity named); otherwise the model-level checks (splittings, slices,
symbols, intertwinings) run as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from . import calib, dirac, g2 as g2mod, spin7
from .multivec import (KForm, OrientedPlane, Vector, contract, flat,
                       random_form, random_vector, restrict, sharp)

#: Residual bound for floating-mode checks.
FLOAT_TOL = 1e-10


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    residual: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "residual": self.residual, "detail": self.detail}


def _residual(value) -> float:
    return float(abs(value))


def _form_residual(a: KForm) -> float:
    return max((float(abs(c)) for c in a.coeffs.values()), default=0.0)


class _Suite:
    def __init__(self, exact: bool, seed: int, trials: int, tol: float):
        self.exact = exact
        self.rng = np.random.default_rng(seed)
        self.trials = trials
        self.tol = 0.0 if exact else tol
        self.outcomes: List[CheckOutcome] = []

    def record(self, name: str, residual, detail: str = "",
               floating: bool = False):
        """Record an outcome; ``floating`` checks always use the float bound."""
        residual = float(residual)
        bound = FLOAT_TOL if floating else self.tol
        self.outcomes.append(CheckOutcome(
            name=name, passed=residual <= bound, residual=residual,
            detail=detail))

    def vectors(self, count: int, dim: int = 8):
        return [random_vector(self.rng, dim, exact=self.exact) for _ in range(count)]

    def forms(self, count: int, dim: int, degree: int):
        return [random_form(self.rng, dim, degree, exact=self.exact)
                for _ in range(count)]


def _check_structure_form(s: _Suite, phi: KForm):
    """Identities that depend only on the candidate structure form."""
    raw = spin7.unchecked_model(phi)
    e = [Vector.basis(8, i, exact=s.exact) for i in range(1, 9)]

    s.record("star(phi) == phi", _form_residual(phi.hodge() - phi))
    vol = KForm.volume(8, exact=s.exact)
    s.record("phi ^ phi == 14 vol", _form_residual(phi.wedge(phi) - 14 * vol))
    s.record("<phi, phi> == 14", _residual(phi.norm_sq() - 14))

    completion = [
        ("e4 == -e1 x e2 x e3", e[3], -1, (e[0], e[1], e[2])),
        ("e6 == -e1 x e2 x e5", e[5], -1, (e[0], e[1], e[4])),
        ("e7 == -e1 x e3 x e5", e[6], -1, (e[0], e[2], e[4])),
        ("e8 == e2 x e3 x e5", e[7], 1, (e[1], e[2], e[4])),
    ]
    for name, target, sign, triple in completion:
        got = sign * spin7.cross3(raw, *triple)
        s.record(name, max(abs(x) for x in (got - target).components))

    # the 12 equalities of the cross-product table, with the sign rule
    table = [
        ((1, 5), [(1, (2, 6)), (1, (3, 7)), (1, (4, 8))]),
        ((1, 6), [(-1, (2, 5)), (1, (3, 8)), (-1, (4, 7))]),
        ((1, 7), [(-1, (2, 8)), (-1, (3, 5)), (1, (4, 6))]),
        ((1, 8), [(1, (2, 7)), (-1, (3, 6)), (-1, (4, 5))]),
    ]
    worst = 0.0
    rule_worst = 0.0
    for (i, j), rhs in table:
        lead = spin7.cross2(raw, e[i - 1], e[j - 1])
        for sign, (k, l) in rhs:
            other = spin7.cross2(raw, e[k - 1], e[l - 1])
            worst = max(worst, _form_residual(lead - sign * other))
            # e_i x e_j = +-e_k x e_l iff phi(e_i,e_j,e_k,e_l) = -+1
            val = phi.evaluate(e[i - 1], e[j - 1], e[k - 1], e[l - 1])
            rule_worst = max(rule_worst, _residual(val + sign))
    s.record("cross-product table (12 equalities)", worst)
    s.record("table sign rule phi(ei,ej,ek,el) == -sign", rule_worst)

    worst = 0.0
    for _ in range(s.trials):
        a, b, c, d = s.vectors(4)
        lhs = spin7.cross2(raw, a, b).inner(spin7.cross2(raw, c, d))
        rhs = -phi.evaluate(a, b, c, d) + a.dot(c) * b.dot(d) - a.dot(d) * b.dot(c)
        worst = max(worst, _residual(lhs - rhs))
    s.record("inner-cross-2", worst, f"{s.trials} random quadruples")

    worst = 0.0
    for _ in range(max(3, s.trials // 4)):
        a, b, c, d, v, w = s.vectors(6)
        lhs = spin7.tau(raw, a, b, c, d).inner(spin7.cross2(raw, v, w))
        rhs = (flat(w).wedge(contract(v, phi))
               - flat(v).wedge(contract(w, phi))).evaluate(a, b, c, d)
        worst = max(worst, _residual(lhs - rhs))
    s.record("inner-tau", worst, f"{max(3, s.trials // 4)} random inputs")

    worst = 0.0
    for _ in range(s.trials):
        u, v, w = s.vectors(3)
        c2 = spin7.cross2(raw, v, w)
        worst = max(worst, _residual(c2.norm_sq() - flat(v).wedge(flat(w)).norm_sq()))
        c3 = spin7.cross3(raw, u, v, w)
        triple = flat(u).wedge(flat(v)).wedge(flat(w))
        worst = max(worst, _residual(c3.norm_sq() - triple.norm_sq()))
    s.record("|vxw| == |v^w| and |uxvxw| == |u^v^w|", worst)

    cert = spin7.is_spin7_form(phi)
    s.record("structure certificate", 0.0 if cert.passed else 1.0,
             "; ".join(f"{c.name}: {'ok' if c.passed else c.detail}"
                       for c in cert.checks))
    return cert


def _check_exterior_algebra(s: _Suite):
    worst = 0.0
    for _ in range(s.trials):
        a = random_form(s.rng, 8, 2, exact=s.exact)
        b = random_form(s.rng, 8, 1, exact=s.exact)
        c = random_form(s.rng, 8, 1, exact=s.exact)
        assoc = (a.wedge(b)).wedge(c) - a.wedge(b.wedge(c))
        anti = a.wedge(b) - b.wedge(a)  # even-odd degrees commute
        grade = b.wedge(c) + c.wedge(b)  # odd-odd anticommute
        worst = max(worst, _form_residual(assoc), _form_residual(anti),
                    _form_residual(grade))
    s.record("wedge associative and graded-anticommutative", worst,
             f"{s.trials} random triples")

    worst = 0.0
    for _ in range(s.trials):
        a = random_form(s.rng, 8, 3, exact=s.exact)
        b = random_form(s.rng, 8, 3, exact=s.exact)
        worst = max(worst, _residual(a.hodge().inner(b.hodge()) - a.inner(b)))
        worst = max(worst, _form_residual(a.hodge().hodge() - (-1) ** (3 * 5) * a))
    s.record("hodge isometry and involution sign", worst)

    worst = 0.0
    for _ in range(s.trials):
        v = random_vector(s.rng, 8, exact=s.exact)
        a = random_form(s.rng, 8, 3, exact=s.exact)
        b = random_form(s.rng, 8, 2, exact=s.exact)
        worst = max(worst, _residual(
            contract(v, a).inner(b) - a.inner(flat(v).wedge(b))))
    s.record("contraction adjoint to wedge", worst)

    worst = 0.0
    for _ in range(s.trials):
        v = random_vector(s.rng, 8, exact=s.exact)
        worst = max(worst, max(abs(x) for x in (sharp(flat(v)) - v).components))
    s.record("sharp(flat(v)) == v", worst)

    worst = 0.0
    for _ in range(max(3, s.trials // 4)):
        a = random_form(s.rng, 8, 4, exact=False)
        vs = [random_vector(s.rng, 8, exact=False) for _ in range(4)]
        try:
            p1 = OrientedPlane(vs)
            p2 = OrientedPlane([vs[1], vs[0], vs[2], vs[3]])
            worst = max(worst, _residual(restrict(a, p1) + restrict(a, p2)))
        except ValueError:
            continue
    s.record("restrict orientation equivariance", worst,
             "floating planes (orthonormalization takes square roots)",
             floating=True)


def _check_model_level(s: _Suite, trials_light: int):
    m = spin7.standard_model(exact=s.exact)
    evals = m.lambda2_eigenvalues()
    s.record("lambda2 eigenvalues (-3 x7, +1 x21)",
             0.0 if evals == {-3.0: 7, 1.0: 21} else 1.0)
    s.record("lambda4 dims (1, 7, 27, 35)",
             0.0 if m.lambda4_dims == (1, 7, 27, 35) else 1.0)

    worst = 0.0
    for _ in range(trials_light):
        a = random_form(s.rng, 8, 2, exact=s.exact)
        p7 = spin7.proj2_7(m, a)
        p21 = spin7.proj2_21(m, a)
        worst = max(worst, _form_residual(spin7.proj2_7(m, p7) - p7))
        worst = max(worst, _form_residual(p7 + p21 - a))
        worst = max(worst, _residual(p7.inner(p21)))
    s.record("projections idempotent, orthogonal, resolve identity", worst)

    worst = 0.0
    for _ in range(trials_light):
        v, w = s.vectors(2)
        worst = max(worst, _form_residual(spin7.proj2_21(m, spin7.cross2(m, v, w))))
    s.record("cross2 image has zero 21-component", worst)

    worst = 0.0
    for gen in m.lambda4_forms(7):
        worst = max(worst, _form_residual(gen.hodge() - gen))
    s.record("7-summand generators are self-dual", worst)

    worst = 0.0
    for beta in m.lambda2_21_forms()[:7]:
        worst = max(worst, _form_residual(spin7.infinitesimal_action(m.phi, beta)))
    s.record("stabilizer algebra annihilates phi", worst,
             "21-summand generators act trivially")

    g2m = g2mod.build_g2(exact=s.exact)
    s.record("slice: psi == star7(phi3)", _form_residual(g2m.psi4 - g2m.phi3.hodge()))
    e7 = [Vector.basis(7, i, exact=s.exact) for i in range(1, 8)]
    s.record("slice: standard associative/coassociative planes",
             0.0 if (g2mod.is_associative(g2m, OrientedPlane(e7[:3]))
                     and g2mod.is_coassociative(g2m, OrientedPlane(e7[3:]))) else 1.0)

    mf = spin7.standard_model(exact=False)
    sweep = calib.CayleySweep(mf)
    frames = calib.random_orthonormal_frames(s.rng, 2000, 4, 8)
    tn, vals = sweep(frames)
    disagree = int(((tn <= calib.TAU_TOL)
                    != (np.abs(np.abs(vals) - 1) <= calib.AGREEMENT_TOL)).sum())
    s.record("cayley criteria agree on random planes", float(disagree),
             "tau gate vs calibration value, 2000 planes")

    e = [Vector.basis(8, i, exact=s.exact) for i in range(1, 9)]
    cpm = dirac.build_cayley_model(m, OrientedPlane(e[:4]))
    rep = dirac.clifford_check(cpm, trials=0 if s.exact else 8,
                               seed=int(s.rng.integers(2**31)))
    s.record("clifford relation of the symbol", rep.max_residual,
             "basis covectors only" if s.exact else "basis and random covectors")
    rep = dirac.asd_embedding_report(cpm)
    s.record("plane ASD forms embed conformally opposite E", rep.max_residual)

    apm = dirac.build_associative_model(g2mod.build_g2(exact=s.exact),
                                        OrientedPlane(e7[:3]))
    rep = dirac.h_equivariance_check(apm)
    s.record("h intertwines the Clifford actions", rep.max_residual)

    m_sl = spin7.build_model(calib.sl_model_form(exact=s.exact))
    rep = dirac.sl_symbol_intertwine(m_sl, trials=6, seed=7)
    s.record("special Lagrangian symbol intertwining", rep.max_residual, rep.detail)
    rep = dirac.coassoc_symbol_intertwine(m, trials=6, seed=7)
    s.record("coassociative symbol intertwining", rep.max_residual, rep.detail)


def run_suite(exact: bool = True, seed: int = 0, trials: int = 60,
              form: Optional[KForm] = None,
              tol: float = FLOAT_TOL) -> Tuple[List[CheckOutcome], dict]:
    """Run the identity suite; returns (outcomes, summary).

    ``form``: run the form-dependent identities against this candidate
    instead of the model form (the model-level checks are skipped).
    """
    s = _Suite(exact=exact, seed=seed, trials=trials, tol=tol)
    phi = form if form is not None else spin7.phi0(exact=exact)
    _check_structure_form(s, phi)
    _check_exterior_algebra(s)
    if form is None:
        _check_model_level(s, trials_light=max(5, trials // 10))
    failed = [o for o in s.outcomes if not o.passed]
    summary = {
        "mode": "exact" if exact else "float",
        "checks": len(s.outcomes),
        "passed": len(s.outcomes) - len(failed),
        "failed": len(failed),
        "failed_names": [o.name for o in failed],
        "max_residual": max((o.residual for o in s.outcomes), default=0.0),
    }
    return s.outcomes, summary
