"""Annihilator ideals of the tangent quotients R^p / T_G f, K-finiteness, Milnor and Tjurina numbers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

from .decision import Decision, Hypothesis
from .linalg import Echelon
from .ring_core import IdealHandle, Poly, PreconditionError, local_key, monomials_up_to
from .std_basis import (
    JetQuotient,
    colon,
    ideal_colon,
    ideal_times_free,
    minors_ideal,
    quotient_dimension,
    radical_contains,
)
from .tangent import (
    MapGerm,
    default_jet_degree,
    mixed_containment,
    t_K,
    t_R,
    t_R_generators,
    _t_L_elements,
)

__all__ = [
    "AnnihilatorReport",
    "ann_R",
    "ann_K",
    "ann_A_jet",
    "k_finite",
    "milnor_tjurina",
    "KFiniteness",
    "MilnorTjurina",
    "a_A_candidate",
]

INF = float("inf")


@dataclass(frozen=True)
class AnnihilatorReport:
    group: str
    ideal: IdealHandle
    exact: bool
    certificate: Decision
    sandwich: tuple[Hypothesis, ...] = ()

    def to_json(self) -> dict:
        return {
            "ideal": self.ideal.serialize(),
            "exact": self.exact,
            "certificate": self.certificate.to_json(),
            "sandwich": [h.to_json() for h in self.sandwich],
        }


def _membership_decision(I: IdealHandle, B, f: MapGerm, label: str) -> Decision:
    for v in ideal_times_free(I, f.p):
        if not B.contains(v):  # pragma: no cover  (colon ideals are exact)
            return Decision.fails([f"{v} not in {label}"], witness=v)
    return Decision.holds([f"colon ideal computed by elimination; all generators times e_i lie in {label}"])


def _contain_hyp(big: IdealHandle, small: IdealHandle, text: str) -> Hypothesis:
    if big.contains_ideal(small):
        return Hypothesis(text, Decision.holds(["standard-basis membership"]))
    bad = next(g for g in small.generators if not big.contains(g))
    return Hypothesis(text, Decision.fails([f"{bad} is missing"], witness=bad))


def ann_R(f: MapGerm) -> AnnihilatorReport:
    """Ann(R^p / Der(f)); the Jacobian ideal when p = 1."""
    B = t_R(f)
    a = colon(B)
    cert = _membership_decision(a, B, f, "T_R f")
    minors = minors_ideal(f.jacobian(), f.p)
    sandwich = [_contain_hyp(a, minors, "maximal minors of the Jacobian ⊆ a_R")]
    return AnnihilatorReport("R", a, True, cert, tuple(sandwich))


def ann_K(f: MapGerm, nmax: int = 32) -> AnnihilatorReport:
    """Ann(R^p / T_K f), sandwiched between a_R + (f) and its radical."""
    B = t_K(f)
    a = colon(B)
    cert = _membership_decision(a, B, f, "T_K f")
    aR = colon(t_R(f))
    lower = aR + IdealHandle(list(f.components), f.vars, f.field)
    sandwich = [_contain_hyp(a, lower, "a_R + (f) ⊆ a_K"),
                Hypothesis("a_K ⊆ √(a_R + (f))", radical_contains(lower, a, nmax))]
    return AnnihilatorReport("K", a, True, cert, tuple(sandwich))


class KFiniteness(NamedTuple):
    finite: bool
    k_dim: Union[int, None]


def k_finite(f: MapGerm) -> KFiniteness:
    """Whether R/a_K is finite dimensional, with that dimension."""
    qd = quotient_dimension(ann_K(f).ideal)
    if qd.krull_dim <= 0:
        return KFiniteness(True, int(qd.k_dim))
    return KFiniteness(False, None)


class MilnorTjurina(NamedTuple):
    mu: Union[int, float]
    tau: Union[int, float]


def milnor_tjurina(f: MapGerm) -> MilnorTjurina:
    """dim R/Jac(f) and dim R/(Jac(f) + (f)) for a function germ."""
    if f.p != 1:
        raise PreconditionError("Milnor and Tjurina numbers need a function germ (p = 1)")
    g = f.components[0]
    jac = IdealHandle([g.diff(i) for i in range(f.n)], f.vars, f.field)
    tj = jac + IdealHandle([g], f.vars, f.field)
    return MilnorTjurina(quotient_dimension(jac).k_dim, quotient_dimension(tj).k_dim)


# ---------------------------------------------------------------------------
# A-annihilator candidate


def _closed_ideal_in_jets(f: MapGerm, D: int) -> tuple[list[tuple[int, ...]], list[dict]]:
    """Basis of the largest ideal V of R/m^{D+1} with V·R^p ⊆ T_A f + m^{D+1}R^p.

    Returned as (monomial columns, basis vectors over those columns).
    """
    F = f.field
    jq = JetQuotient(t_R(f), D)
    lam = Echelon(F)
    for v in _t_L_elements(f, -1, D):
        r = jq.reduce(v)
        if r:
            lam.add(r)
    mons = monomials_up_to(f.n, D)  # sorted largest first in the local order
    col = {e: k for k, e in enumerate(mons)}
    # U_0 = kernel of q -> (q e_i mod T_R + T_L + m^{D+1})_i
    images = []
    width = jq.dim
    for e in mons:
        img = {}
        for i in range(f.p):
            r = lam.reduce(jq.reduce({(e, i): F.one}))
            for k, c in r.items():
                img[i * width + k] = c
        images.append(img)
    ech = Echelon(F, track=True)
    basis = []
    for k, img in enumerate(images):
        row, rel = ech.add_tracked(img, k)
        if row is None:
            basis.append(rel)
    # shrink to the largest subspace closed under multiplication by each variable
    n = f.n
    while True:
        U = Echelon(F)
        for b in basis:
            U.add(b)
        conds = []
        for b in basis:
            cols = {}
            for l in range(n):
                prod = {}
                for k, c in b.items():
                    e = list(mons[k])
                    e[l] += 1
                    e = tuple(e)
                    if sum(e) <= D:
                        prod[col[e]] = c
                rem = U.reduce(prod)
                for k, c in rem.items():
                    cols[l * len(mons) + k] = c
            conds.append(cols)
        ker = Echelon(F, track=True)
        new_basis = []
        for s, cvec in enumerate(conds):
            row, rel = ker.add_tracked(cvec, s)
            if row is None:
                vec = {}
                for t, a in rel.items():
                    for k, c in basis[t].items():
                        val = F.add(vec.get(k, F.zero), F.mul(a, c))
                        if val == 0:
                            vec.pop(k, None)
                        else:
                            vec[k] = val
                if vec:
                    new_basis.append(vec)
        if len(new_basis) == len(basis):
            return mons, basis
        basis = new_basis


def _minimal_generators(f: MapGerm, mons, basis, max_deg: int) -> list[Poly]:
    F = f.field
    ech = Echelon(F)
    for b in basis:
        ech.add(b)
    pivots = {mons[k]: k for k in ech.pivots()}
    lead = sorted(pivots, key=lambda e: (sum(e), tuple(-x for x in local_key(e))))
    minimal = []
    for e in lead:
        if any(all(a <= b for a, b in zip(m, e)) for m in minimal):
            continue
        minimal.append(e)
    out = []
    for e in minimal:
        if sum(e) > max_deg:
            continue
        row = ech.fully_reduced(pivots[e])
        out.append(Poly({mons[k]: c for k, c in row.items()}, f.vars, F))
    return out


def a_A_candidate(f: MapGerm, D: int) -> IdealHandle:
    """Jet-level candidate for a_A built at degree D, keeping generators of degree <= D/2."""
    mons, basis = _closed_ideal_in_jets(f, D)
    gens = _minimal_generators(f, mons, basis, D // 2)
    return IdealHandle(gens, f.vars, f.field)


def ann_A_jet(f: MapGerm, D: int | None = None) -> AnnihilatorReport:
    """Certified candidate for Ann(R^p / T_A f) from degree-D jets (exact = False)."""
    if D is None:
        D = default_jet_degree(f)
    cand = a_A_candidate(f, D)
    check = a_A_candidate(f, D + 2)
    sandwich = []
    stable = cand.same_as(check)
    sandwich.append(Hypothesis(
        f"candidate at jet {D} agrees with jet {D + 2}",
        Decision.holds([f"same ideal at jets {D} and {D + 2}"], jet_degree=D + 2) if stable else
        Decision.inconclusive([f"jets {D} and {D + 2} give {cand} and {check}"], D + 2)))
    if not stable:
        cert = Decision.inconclusive(["jet candidate has not stabilised"], D + 2)
        return AnnihilatorReport("A", cand, False, cert, tuple(sandwich))
    kf = k_finite(f)
    if cand.is_zero():
        cert = Decision.holds(["the zero ideal annihilates trivially"], jet_degree=D)
    else:
        cert = mixed_containment(f, ideal_times_free(cand, f.p), t_R_generators(f, -1), -1, D)
        if cert.is_holds:
            cert = Decision.holds(("candidate·R^p ⊆ T_A f",) + cert.certificate, jet_degree=D)
    if not kf.finite and not cert.is_fails:
        cert = Decision.inconclusive(
            ("f is not K-finite; the candidate is not certified maximal",) + cert.certificate, D)
    return AnnihilatorReport("A", cand, False, cert, tuple(sandwich))


def a_R_colon_m(f: MapGerm) -> IdealHandle:
    """a_R : m, the upper end of the function-germ sandwich for a_A."""
    return ideal_colon(ann_R(f).ideal, IdealHandle.maximal(f.vars, f.field))
