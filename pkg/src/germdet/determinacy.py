"""Orbit-inclusion criteria: implicit-function-type theorems for R, K and A,
filtration criteria with characteristic guards, determinacy orders and the
constructive splitting lemma."""

from __future__ import annotations

from typing import NamedTuple, Union

from .annihilator import ann_K, ann_R, milnor_tjurina
from .decision import CriterionReport, Decision, Hypothesis
from .linalg import Echelon
from .ring_core import IdealHandle, Poly, PreconditionError, substitute
from .std_basis import (
    ideal_times_free,
    quotient_dimension,
    radical_contains,
    saturation,
    std_basis,
)
from .tangent import (
    MapGerm,
    contains_power,
    default_jet_degree,
    mixed_containment,
    t_R_generators,
)

__all__ = [
    "r_ift_check",
    "k_ift_check",
    "a_ift_check",
    "filtration_criterion",
    "determinacy_order",
    "DeterminacyOrder",
    "morse_split",
    "MorseSplit",
    "char_guard",
]

INF = float("inf")


def _ideal_name(a: IdealHandle) -> str:
    if a.is_zero():
        return "(0)"
    m = IdealHandle.maximal(a.vars, a.field)
    k = min(g.ord() for g in a.generators)
    if 1 <= k <= 8 and a.same_as(m ** k):
        return "m" if k == 1 else f"m^{k}"
    return str(a)


def _ideal_contains(big: IdealHandle, small: IdealHandle, text: str) -> Hypothesis:
    for g in small.generators:
        if not big.contains(g):
            return Hypothesis(text, Decision.fails([f"{g} is missing"], witness=g))
    return Hypothesis(text, Decision.holds(["standard-basis membership"]))


def _module_contains(gens_big, targets, f: MapGerm, text: str) -> Hypothesis:
    B = std_basis(list(gens_big), rank=f.p, vars=f.vars, field=f.field)
    for v in targets:
        if not B.contains(v):
            return Hypothesis(text, Decision.fails([f"{v} is not in the right-hand side"], witness=v))
    return Hypothesis(text, Decision.holds([f"standard-basis membership of {len(targets)} generators"]))


def _scaled(gens, ideal: IdealHandle):
    return [v * g for v in gens for g in ideal.generators]


def _preconditions(f: MapGerm, a: IdealHandle) -> list[Hypothesis]:
    m = IdealHandle.maximal(f.vars, f.field)
    return [_ideal_contains(m ** 2, a, "a ⊆ m^2"),
            _ideal_contains(f.filtration, a, "a ⊆ I")]


def _order_power(f: MapGerm) -> IdealHandle:
    """I^{ord(f)-2}, read as R when ord(f) <= 2 or I = R."""
    o = f.ord
    if o == INF or f.filtration.is_unit() or o <= 2:
        return IdealHandle.unit(f.vars, f.field)
    return f.filtration ** int(o - 2)


def _finish(theorem: str, hyps: list[Hypothesis], conclusion: str, guard=None, guard_value=None,
            notes=()) -> CriterionReport:
    ok = all(h.decision.is_holds for h in hyps)
    return CriterionReport(theorem, tuple(hyps), conclusion if ok else None, guard, guard_value,
                           tuple(notes))


def r_ift_check(f: MapGerm, a: IdealHandle) -> CriterionReport:
    """Check a²·I^{ord f - 2}·R^p ⊆ m·a·T_R f, which yields {f} + a·T_R f ⊆ R f."""
    hyps = _preconditions(f, a)
    m = IdealHandle.maximal(f.vars, f.field)
    lhs = ideal_times_free((a ** 2) * _order_power(f) if not a.is_zero() else a, f.p)
    rhs = _scaled(t_R_generators(f, -1), m * a) if not a.is_zero() else []
    hyps.append(_module_contains(rhs, lhs, f, "a^2·I^(ord f-2)·R^p ⊆ m·a·T_R f"))
    if f.p == 1:
        jac = IdealHandle([f.components[0].diff(i) for i in range(f.n)], f.vars, f.field)
        conclusion = f"R f ⊇ {{f}}+{_ideal_name(a)}·{jac}"
    else:
        conclusion = f"R f ⊇ {{f}}+{_ideal_name(a)}·T_R f"
    notes = []
    if not a.is_zero() and not hyps[-1].decision.is_holds and f.ord != INF and f.ord >= 2:
        variant = ideal_times_free((a ** 2) * (f.filtration ** int(f.ord - 1)), f.p)
        alt = _module_contains(rhs, variant, f, "")
        notes.append("with I^(ord f-1) in place of I^(ord f-2) the containment "
                     + ("holds" if alt.decision.is_holds else "fails as well"))
    return _finish("R-IFT", hyps, conclusion, notes=notes)


def k_ift_check(f: MapGerm, a: IdealHandle) -> CriterionReport:
    """Check a²·I^{ord f - 2}·R^p ⊆ m·a·T_R f + m·(f)·R^p, which yields
    {f} + (a·a_R + m·(f))·R^p ⊆ K f."""
    hyps = _preconditions(f, a)
    m = IdealHandle.maximal(f.vars, f.field)
    fid = IdealHandle(list(f.components), f.vars, f.field)
    lhs = ideal_times_free((a ** 2) * _order_power(f) if not a.is_zero() else a, f.p)
    rhs = (_scaled(t_R_generators(f, -1), m * a) if not a.is_zero() else []) + \
        ideal_times_free(m * fid, f.p)
    hyps.append(_module_contains(rhs, lhs, f, "a^2·I^(ord f-2)·R^p ⊆ m·a·T_R f + m·(f)·R^p"))
    if f.p == 1:
        jac = IdealHandle([f.components[0].diff(i) for i in range(f.n)], f.vars, f.field)
        conclusion = f"K f ⊇ {{f}}+{_ideal_name(a)}·{jac}+m·(f)"
    else:
        conclusion = f"K f ⊇ {{f}}+({_ideal_name(a)}·a_R+m·(f))·R^p"
    return _finish("K-IFT", hyps, conclusion)


def _component_condition(f: MapGerm, a: IdealHandle, aR: IdealHandle, nmax: int) -> tuple[Hypothesis, str]:
    qR = quotient_dimension(aR)
    info = ""
    if qR.krull_dim <= 0:
        return Hypothesis("Crit(f) is the origin", Decision.holds(
            [f"R/a_R has Krull dimension {qR.krull_dim}"])), info
    qa = quotient_dimension(aR + a)
    info = f"dim R/(a_R+a) = {qa.krull_dim}, dim R/a_R = {qR.krull_dim}"
    # components of Crit(f) not inside V(a) are cut out by a_R : a^infinity
    sat = saturation(aR, a)
    dec = radical_contains(aR, sat, nmax)
    text = "V(a) contains no irreducible component of Crit(f)"
    if dec.is_holds:
        return Hypothesis(text, Decision.holds(
            ["√(a_R : a^∞) = √a_R, so every component of Crit(f) meets the complement of V(a)"]
            + list(dec.certificate) + [info])), info
    if dec.is_fails:
        return Hypothesis(text, Decision.fails(
            [f"a_R : a^∞ = {sat} is not inside √a_R, so V(a) contains a component of Crit(f)", info],
            witness=dec.witness)), info
    return Hypothesis(text, Decision.inconclusive(  # pragma: no cover
        [f"a_R : a^∞ = {sat}; radical comparison undecided", info], nmax)), info


def a_ift_check(f: MapGerm, a: IdealHandle, D: int | None = None, *, unipotent: bool = False,
                nmax: int = 32) -> CriterionReport:
    """Check the A-criterion a²·R^p ⊆ a·m·T_R f + T_{L^(1)} f (or a·T_R f with a ⊆ m² when
    ``unipotent``), together with the conditions on a and on Crit(f)."""
    if D is None:
        D = default_jet_degree(f)
    m = IdealHandle.maximal(f.vars, f.field)
    aR = ann_R(f).ideal
    hyps = [_ideal_contains(a, m * aR, "m·a_R ⊆ a"), _ideal_contains(m, a, "a ⊆ m")]
    if unipotent:
        hyps.append(_ideal_contains(m ** 2, a, "a ⊆ m^2"))
    comp, info = _component_condition(f, a, aR, nmax)
    hyps.append(comp)
    mult = a if unipotent else a * m
    N = _scaled(t_R_generators(f, -1), mult) if not a.is_zero() else []
    M = ideal_times_free(a ** 2, f.p) if not a.is_zero() else []
    label = "a^2·R^p ⊆ a·T_R f + T_L^(1) f" if unipotent else "a^2·R^p ⊆ a·m·T_R f + T_L^(1) f"
    hyps.append(Hypothesis(label, mixed_containment(f, M, N, 1, D)))
    name = _ideal_name(a)
    if f.field.characteristic == 0:
        conclusion = f"A f ⊇ {{f}}+{name}^2·R^{f.p}+T_L^(1) f"
        guard = "infinite field: strong form"
    else:
        conclusion = f"A f ⊇ {{f}}+(f)·{name}^2·R^{f.p}+T_L^(1) f (finite-field caveat: local-ring form)"
        guard = "finite field: only the local-ring form is licensed"
    notes = [info] if info else []
    return _finish("A-IFT" + (" (unipotent)" if unipotent else ""), hyps, conclusion, guard,
                   notes=notes)


# ---------------------------------------------------------------------------
# filtration criteria


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def char_guard(f: MapGerm, group: str, j: int, d: int) -> tuple[int, bool]:
    """The bound N for the characteristic condition char(k) > N, and whether it passes."""
    o = int(f.ord)
    if group == "A":
        N = _ceil_div(2 * d - 1 - o, j) + 1
    else:
        N = _ceil_div(d - o, j)
    N = max(N, 0)
    c = f.field.characteristic
    return N, (c == 0 or c > N)


def filtration_criterion(f: MapGerm, group: str, j: int, d: int, D: int | None = None,
                         nmax: int = 32) -> CriterionReport:
    """Decide G^(j) f ⊇ {f} + I^d·R^p through T_{G^(j)} f ⊇ I^d·R^p."""
    group = group.upper()
    if group not in ("R", "K", "A"):
        raise ValueError("group must be R, K or A")
    if not 1 <= j < d:
        raise ValueError("need 1 <= j < d")
    N, ok = char_guard(f, group, j, d)
    c = f.field.characteristic
    guard = f"char {c} {'>' if ok else '<='} {N}" + ("" if ok else " (guard fails)")
    if c == 0:
        guard = f"char 0 > {N}"
    hyps = [Hypothesis(f"T_{group}^({j}) f ⊇ I^{d}·R^p", contains_power(f, group, j, d, D))]
    notes = []
    if group == "A":
        aK = ann_K(f, nmax).ideal
        dec = radical_contains(aK, f.filtration, nmax)
        hyps.append(Hypothesis("V(I) ⊇ V(a_K)", dec))
        notes.append("V(I) ⊇ V(a_K) is checked in place of the preimage condition")
    if ok:
        conclusion = f"{group}^({j}) f ⊇ {{f}}+I^{d}·R^p"
    elif c != 2:
        o = int(f.ord)
        conclusion = f"{group}^({d - j - o}) f ⊇ {{f}}+I^{2 * d - 2 * j - o}·R^p (weak form, guard failed)"
    else:
        conclusion = None
        hyps.append(Hypothesis("characteristic guard", Decision.fails([guard])))
    if group == "K" and f.p == 1:
        notes.append("K-order of determinacy ≤ τ+1")
    if group == "R" and f.p == 1:
        notes.append("R-order of determinacy ≤ μ+1")
    return _finish(f"{group}-filtration", hyps, conclusion, guard, N, notes)


class DeterminacyOrder(NamedTuple):
    d_min: Union[int, float]
    classical_bound: Union[int, float]


def determinacy_order(f: MapGerm, group: str = "R") -> DeterminacyOrder:
    """Least d with T_{G^(1)} f ⊇ m^d, next to the classical bound μ+1 (R) or τ+1 (K)."""
    group = group.upper()
    if f.p != 1:
        raise PreconditionError("determinacy orders are computed for function germs")
    if group not in ("R", "K"):
        raise ValueError("group must be R or K")
    mu, tau = milnor_tjurina(f)
    num = mu if group == "R" else tau
    if num == INF:
        return DeterminacyOrder(INF, INF)
    bound = num + 1
    top = int(num) + int(f.m_ord) + 2
    for d in range(2, top + 1):
        if contains_power(f, group, 1, d).is_holds:
            # the search convention (f + m^d) sits one step above the classical k-jet convention
            if d > bound + 1 and char_guard(f, group, 1, d)[1]:
                raise AssertionError(f"d_min {d} exceeds the classical bound {bound}")
            return DeterminacyOrder(d, bound)
    return DeterminacyOrder(INF, bound)


# ---------------------------------------------------------------------------
# splitting lemma


class MorseSplit(NamedTuple):
    rank: int
    quadratic: Poly
    residual: Poly
    coordinate_change: tuple[Poly, ...]


def _quadratic_matrix(Q: Poly, n: int, F) -> list[list]:
    A = [[F.zero] * n for _ in range(n)]
    half = F.inv(F(2))
    for e, c in Q.terms.items():
        idx = [i for i, a in enumerate(e) for _ in range(a)]
        i, k = idx
        if i == k:
            A[i][i] = F.add(A[i][i], c)
        else:
            v = F.mul(c, half)
            A[i][k] = F.add(A[i][k], v)
            A[k][i] = F.add(A[k][i], v)
    return A


def _solve(A: list[list], b: list, F) -> list:
    """Solve A x = b for invertible A (Gauss-Jordan over the field)."""
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        inv = F.inv(M[col][col])
        M[col] = [F.mul(x, inv) for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                fac = M[r][col]
                M[r] = [F.sub(x, F.mul(fac, y)) for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def _solve_poly(A: list[list], rhs: list[Poly], F) -> list[Poly]:
    """Solve A·δ = rhs for polynomial right-hand sides (coefficientwise)."""
    n = len(A)
    vars = rhs[0].vars
    out = [dict() for _ in range(n)]
    mons = set()
    for r in rhs:
        mons.update(r.terms)
    for e in mons:
        sol = _solve(A, [r.terms.get(e, F.zero) for r in rhs], F)
        for i, c in enumerate(sol):
            if c != 0:
                out[i][e] = c
    return [Poly(o, vars, F) for o in out]


def morse_split(f: MapGerm, D: int = 6) -> MorseSplit:
    """Coordinates with f∘Φ ≡ Q(x_1..x_r) + f̃(x_{r+1}..x_n) mod degree > D, f̃ of order >= 3."""
    if f.p != 1:
        raise PreconditionError("the splitting lemma is for function germs")
    F = f.field
    if F.characteristic == 2:
        raise PreconditionError("completing squares needs 2 to be invertible")
    g = f.components[0]
    if g.ord() < 2:
        raise PreconditionError("f must lie in m^2")
    n, vars = f.n, f.vars
    A = _quadratic_matrix(g.homogeneous_part(2), n, F)
    # kernel of the Hessian and a complementary set of coordinate vectors
    ech = Echelon(F, track=True)
    kernel = []
    for i in range(n):
        row, rel = ech.add_tracked({k: A[i][k] for k in range(n) if A[i][k] != 0}, i)
        if row is None:
            kernel.append(rel)
    r = n - len(kernel)
    span = Echelon(F)
    for kv in kernel:
        span.add(kv)
    comp = []
    for i in range(n):
        if len(comp) == r:
            break
        if span.add({i: F.one}) is not None:
            comp.append(i)
    # old coordinates expressed through new ones: x_old = Σ u_a e_{comp a} + Σ v_b kernel_b
    xs = Poly.gens(vars, F)
    lin = [Poly.zero(vars, F) for _ in range(n)]
    for a, i in enumerate(comp):
        lin[i] = lin[i] + xs[a]
    for b, kv in enumerate(kernel):
        for i, c in kv.items():
            lin[i] = lin[i] + xs[r + b].scale(c)
    phi = tuple(lin)
    h = substitute(g, list(phi), D)
    Q = h.homogeneous_part(2)
    Ar = [row[:r] for row in _quadratic_matrix(Q, n, F)[:r]]
    for _ in range(D + 1):
        tail = h - Q
        mixed = {e: c for e, c in tail.terms.items() if any(e[:r])}
        if not mixed:
            break
        parts = [dict() for _ in range(r)]
        for e, c in mixed.items():
            i = next(k for k in range(r) if e[k])
            e2 = list(e)
            e2[i] -= 1
            parts[i][tuple(e2)] = c
        a = [Poly(p, vars, F) for p in parts]
        half = F.neg(F.inv(F(2)))
        delta = [d.scale(half) for d in _solve_poly(Ar, a, F)]
        step = [xs[i] + delta[i] if i < r else xs[i] for i in range(n)]
        h = substitute(h, step, D)
        phi = tuple(substitute(c, step, D) for c in phi)
    Q = h.homogeneous_part(2)
    residual = h - Q
    if any(any(e[:r]) for e in residual.terms):
        raise RuntimeError("splitting did not converge within the jet")  # pragma: no cover
    return MorseSplit(r, Q.untruncated(), residual.untruncated(), tuple(c.untruncated() for c in phi))
