"""Filtered tangent spaces of map germs and containment decisions.

T_R and T_K are submodules of R^p and are handled by standard bases.  The
left and left-right spaces T_L, T_A are only modules over the target ring,
so at a finite jet they are stored as k-linear subspaces (``JetSpace``).
Containments of an R-module in "R-module + T_L" are decided by
:func:`mixed_containment`, which uses the Nakayama-type reduction
M ⊆ N + T_L + (f)·M  ⇒  M ⊆ N + T_L.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .decision import Decision
from .linalg import Echelon
from .ring_core import (
    QQ,
    FieldDesc,
    IdealHandle,
    Poly,
    PreconditionError,
    StructuralError,
    local_key,
    monomials_up_to,
    ord_wrt_ideal,
    parse_poly,
)
from .std_basis import (
    JetQuotient,
    ModuleElement,
    SubmoduleBasis,
    ideal_times_free,
    std_basis,
)

__all__ = [
    "MapGerm",
    "JetSpace",
    "t_R",
    "t_K",
    "t_R_generators",
    "t_K_generators",
    "t_L_jet",
    "t_A_jet",
    "mixed_containment",
    "contains_power",
    "contains_ideal_free",
    "default_jet_degree",
    "filtration_power",
]


@dataclass(frozen=True, eq=False)
class MapGerm:
    """A polynomial map germ (k^n,0) -> (k^p,0) with a filtration ideal I ⊇ (f)."""

    components: tuple[Poly, ...]
    filtration: IdealHandle | None = None

    def __post_init__(self) -> None:
        comps = tuple(c.untruncated() for c in self.components)
        if not comps:
            raise StructuralError("a map germ needs at least one component")
        for c in comps:
            comps[0]._check(c)
            if c.constant_term() != 0:
                raise PreconditionError(f"component {c} does not vanish at the origin")
        object.__setattr__(self, "components", comps)
        I = self.filtration
        if I is None:
            I = IdealHandle.maximal(comps[0].vars, comps[0].field)
            object.__setattr__(self, "filtration", I)
        else:
            if I.vars != comps[0].vars or I.field != comps[0].field:
                raise StructuralError("filtration ideal lives in a different ring")
            if any(g.constant_term() != 0 for g in I.generators):
                raise PreconditionError("the filtration ideal must lie in the maximal ideal")
            for c in comps:
                if c.terms and not I.contains(c):
                    raise PreconditionError(f"component {c} is not in the filtration ideal")

    @classmethod
    def from_strings(cls, comps: Sequence[str], vars: Sequence[str], field: FieldDesc = QQ,
                     filtration: Sequence[str] | None = None) -> "MapGerm":
        polys = tuple(parse_poly(c, vars, field) for c in comps)
        I = IdealHandle.from_strings(filtration, vars, field) if filtration is not None else None
        return cls(polys, I)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.components[0].vars

    @property
    def field(self) -> FieldDesc:
        return self.components[0].field

    @property
    def n(self) -> int:
        return len(self.vars)

    @property
    def p(self) -> int:
        return len(self.components)

    @property
    def ord(self):
        """I-order of f (componentwise minimum)."""
        return ord_wrt_ideal(list(self.components), self.filtration)

    @property
    def m_ord(self):
        return min(c.ord() for c in self.components)

    def filtration_is_maximal(self) -> bool:
        return ord_wrt_ideal(Poly.var(0, self.vars, self.field), self.filtration) == 1 and \
            all(self.filtration.contains(x) for x in Poly.gens(self.vars, self.field))

    def jacobian(self) -> list[list[Poly]]:
        """p x n matrix of partial derivatives."""
        return [[c.diff(i) for i in range(self.n)] for c in self.components]

    def partials(self) -> list[ModuleElement]:
        """The vectors ∂f/∂x_i in R^p."""
        return [ModuleElement([c.diff(i) for c in self.components]) for i in range(self.n)]

    def as_element(self) -> ModuleElement:
        return ModuleElement(self.components)

    def unit_vectors(self) -> list[ModuleElement]:
        return [ModuleElement.unit(i, self.p, self.vars, self.field) for i in range(self.p)]

    def zero_vector(self) -> ModuleElement:
        return ModuleElement.zero(self.p, self.vars, self.field)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"MapGerm{self} over {self.field}"


def default_jet_degree(f: MapGerm, d: int = 0) -> int:
    import os
    env = os.environ.get("GERMDET_JET_ORDER")
    base = max(2 * d, 3 * int(f.m_ord) if f.m_ord != float("inf") else 0, 12)
    if env:
        try:
            return max(base, int(env))
        except ValueError:
            pass
    return base


def filtration_power(f: MapGerm, k: int) -> IdealHandle:
    """I^k with the conventions I^0 = I^{-1} = R."""
    if k <= 0:
        return IdealHandle.unit(f.vars, f.field)
    return f.filtration ** k


# ---------------------------------------------------------------------------
# module tangent spaces


def t_R_generators(f: MapGerm, j: int) -> list[ModuleElement]:
    if j < -1:
        raise ValueError("j must be at least -1")
    mults = filtration_power(f, j + 1).generators
    out = []
    for v in f.partials():
        if v.is_zero():
            continue
        for g in mults:
            out.append(v * g)
    return out


def t_K_generators(f: MapGerm, j: int) -> list[ModuleElement]:
    out = t_R_generators(f, j)
    mults = filtration_power(f, j).generators
    for c in f.components:
        if not c.terms:
            continue
        for g in mults:
            out.extend(ideal_times_free([g * c], f.p))
    return out


def _basis_of(gens: list[ModuleElement], f: MapGerm) -> SubmoduleBasis:
    return std_basis(gens, rank=f.p, vars=f.vars, field=f.field)


def t_R(f: MapGerm, j: int = -1) -> SubmoduleBasis:
    """Standard basis of I^{j+1}·Der(f) (I^0 = R)."""
    return _basis_of(t_R_generators(f, j), f)


def t_K(f: MapGerm, j: int = -1) -> SubmoduleBasis:
    """Standard basis of T_{R^(j)} f + I^j·(f)·R^p (I^{-1} = R)."""
    return _basis_of(t_K_generators(f, j), f)


# ---------------------------------------------------------------------------
# jet spaces


class JetSpace:
    """A k-linear subspace of the degree-<=D jets of R^p, kept in row-echelon form.

    Columns are the terms x^a·e_i of degree <= D, ordered from the largest
    term in the local module ordering, so a pivot is a leading term.
    """

    def __init__(self, D: int, p: int, vars: Sequence[str], field: FieldDesc):
        self.D = D
        self.p = p
        self.vars = tuple(vars)
        self.field = field
        terms = [(e, c) for e in monomials_up_to(len(self.vars), D) for c in range(p)]
        terms.sort(key=lambda t: local_key(t[0]) + (-t[1],), reverse=True)
        self.columns = terms
        self.col_index = {t: i for i, t in enumerate(terms)}
        self.echelon = Echelon(field)

    @property
    def ambient_dim(self) -> int:
        return len(self.columns)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.rank

    def coordinates(self, v) -> dict[int, object]:
        if isinstance(v, ModuleElement):
            v = v.to_vec()
        elif isinstance(v, Poly):
            v = {(e, 0): c for e, c in v.terms.items()}
        idx = self.col_index
        D = self.D
        return {idx[t]: c for t, c in v.items() if sum(t[0]) <= D and c != 0}

    def add(self, v) -> bool:
        return self.echelon.add(self.coordinates(v)) is not None

    def extend(self, vs: Iterable) -> None:
        for v in vs:
            self.add(v)

    def contains(self, v) -> bool:
        return self.echelon.contains(self.coordinates(v))

    def contains_space(self, other: "JetSpace") -> bool:
        return all(self.contains(r) for r in other.rows())

    def rows(self) -> list[ModuleElement]:
        out = []
        for row in self.echelon.rows.values():
            vec = {self.columns[k]: c for k, c in row.items()}
            out.append(ModuleElement.from_vec(vec, self.p, self.vars, self.field))
        return out

    def missing_terms(self) -> list[ModuleElement]:
        """Unit terms x^a·e_i spanning a complement (the non-pivot columns)."""
        piv = set(self.echelon.rows)
        out = []
        for k, t in enumerate(self.columns):
            if k not in piv:
                out.append(ModuleElement.from_vec({t: self.field.one}, self.p, self.vars, self.field))
        return out

    def copy(self) -> "JetSpace":
        out = JetSpace.__new__(JetSpace)
        out.D, out.p, out.vars, out.field = self.D, self.p, self.vars, self.field
        out.columns, out.col_index = self.columns, self.col_index
        out.echelon = Echelon(self.field)
        out.echelon.rows = dict(self.echelon.rows)
        return out

    def __repr__(self) -> str:
        return f"JetSpace(D={self.D}, rank={self.rank}, ambient={self.ambient_dim})"


def _powers_of_f(f: MapGerm, min_len: int, D: int) -> list[Poly]:
    """All nonzero jets f^β with |β| >= min_len, truncated at D."""
    comps = [c.truncate(D) for c in f.components]
    vars, F = f.vars, f.field
    one = Poly.one(vars, F, trunc=D)
    out = []
    layer = {(0,) * f.p: one}
    if min_len <= 0:
        out.append(one)
    length = 0
    while layer:
        length += 1
        nxt = {}
        for beta, val in layer.items():
            last = max([i for i, b in enumerate(beta) if b] or [0])
            for q in range(last, f.p):
                if not comps[q].terms:
                    continue
                prod = val.mul_trunc(comps[q], D)
                if not prod.terms:
                    continue
                nb = tuple(b + (1 if i == q else 0) for i, b in enumerate(beta))
                nxt[nb] = prod
        layer = nxt
        if length >= min_len:
            out.extend(layer.values())
    return out


def _t_L_elements(f: MapGerm, j: int, D: int) -> list[ModuleElement]:
    out = []
    zero = Poly.zero(f.vars, f.field)
    for q in _powers_of_f(f, j + 1, D):
        for i in range(f.p):
            out.append(ModuleElement([q if k == i else zero for k in range(f.p)]))
    return out


def t_L_jet(f: MapGerm, j: int, D: int) -> JetSpace:
    """Span of f^β·e_i with |β| >= j+1, modulo degree > D."""
    sp = JetSpace(D, f.p, f.vars, f.field)
    sp.extend(_t_L_elements(f, j, D))
    return sp


def _module_jet_span(gens: Sequence[ModuleElement], D: int) -> Iterable[ModuleElement]:
    if not gens:
        return
    n = len(gens[0].vars)
    mons = monomials_up_to(n, D)
    for g in gens:
        o = g.ord()
        if o > D:
            continue
        gt = g.truncate(D)
        for e in mons:
            if sum(e) + o > D:
                continue
            yield ModuleElement([c.mul_monomial(e).truncate(D) for c in gt])


def t_A_jet(f: MapGerm, j: int, D: int) -> JetSpace:
    """Degree-D jet of T_{R^(j)} f + T_{L^(j)} f as a k-linear subspace."""
    sp = t_L_jet(f, j, D)
    sp.extend(_module_jet_span(t_R_generators(f, j), D))
    return sp


def module_jet_space(gens: Sequence[ModuleElement], D: int, p: int, vars, field) -> JetSpace:
    """Degree-D jet of the R-module generated by ``gens``."""
    sp = JetSpace(D, p, vars, field)
    sp.extend(_module_jet_span(list(gens), D))
    return sp


# ---------------------------------------------------------------------------
# mixed containment M ⊆ N + T_{L^(j)} f


def _max_ideal_power_in(f: MapGerm) -> int | None:
    """Least r with m^r ⊆ (f_1..f_p), or None if (f) is not m-primary."""
    I = IdealHandle(list(f.components), f.vars, f.field)
    qd = I.basis.quotient_dimension()
    if qd.krull_dim != 0:
        return None
    return qd.max_degree + 1


def _find_weights(f: MapGerm, vectors: Sequence[ModuleElement], max_weight: int = 6):
    """Positive weights making every vector homogeneous for deg(x^a e_i) = w·a - deg f_i."""
    n = f.n
    candidates = sorted(itertools.product(range(1, max_weight + 1), repeat=n),
                        key=lambda w: (sum(w), w))
    for w in candidates:
        shifts = []
        ok = True
        for c in f.components:
            d = c.is_weighted_homogeneous(w)
            if d is None:
                ok = False
                break
            shifts.append(d)
        if not ok:
            continue
        degs = []
        for v in vectors:
            vals = {sum(a * b for a, b in zip(w, e)) - shifts[i] for (e, i) in v.to_vec()}
            if len(vals) != 1:
                ok = False
                break
            degs.append(vals.pop())
        if ok:
            return w, shifts, degs
    return None


def _monomials_of_weight(w: Sequence[int], t: int) -> list[tuple[int, ...]]:
    n = len(w)
    out = []

    def rec(i, rem, acc):
        if i == n - 1:
            if rem % w[i] == 0:
                out.append(tuple(acc + [rem // w[i]]))
            return
        for a in range(rem // w[i] + 1):
            rec(i + 1, rem - a * w[i], acc + [a])

    if t >= 0:
        rec(0, t, [])
    return out


class _TermIndex:
    def __init__(self):
        self.index = {}

    def __call__(self, v: dict) -> dict:
        idx = self.index
        out = {}
        for t, c in v.items():
            k = idx.get(t)
            if k is None:
                k = idx[t] = len(idx)
            out[k] = c
        return out


def _graded_route(f: MapGerm, M: list[ModuleElement], N: list[ModuleElement],
                  j: int) -> Decision | None:
    r = _max_ideal_power_in(f)
    if r is None:
        return None
    found = _find_weights(f, list(M) + list(N))
    if found is None:
        return None
    w, shifts, degs = found
    mdeg, ndeg = degs[:len(M)], degs[len(M):]
    wmax = max(w)
    top = max(mdeg) + (r - 1) * wmax
    F = f.field
    p = f.p
    vars = f.vars
    # f^β e_i has weighted degree Σβ_q·deg f_q - deg f_i
    certificate = [f"graded by weights {w} (component shifts {shifts}); m^{r} ⊆ (f)"]
    for delta in range(min(mdeg), top + 1):
        tix = _TermIndex()
        ech = Echelon(F)

        def add(vec):
            ech.add(tix(vec))

        for g, dg in zip(N, ndeg):
            for a in _monomials_of_weight(w, delta - dg):
                add(ModuleElement([c.mul_monomial(a) for c in g]).to_vec())
        for g, dg in zip(M, mdeg):
            for q, fq in enumerate(f.components):
                t = delta - dg - shifts[q]
                if not fq.terms:
                    continue
                for a in _monomials_of_weight(w, t):
                    add(ModuleElement([(c * fq).mul_monomial(a) for c in g]).to_vec())
        # left part: f^β e_i of degree delta
        for i in range(p):
            target = delta + shifts[i]
            if target < 0:
                continue
            for beta in _monomials_of_weight(shifts, target):
                if sum(beta) < j + 1:
                    continue
                val = Poly.one(vars, F)
                for q, b in enumerate(beta):
                    if b:
                        val = val * (f.components[q] ** b)
                add({(e, i): c for e, c in val.terms.items()})
        for g, dg in zip(M, mdeg):
            for a in _monomials_of_weight(w, delta - dg):
                if sum(a) >= r:
                    continue
                v = ModuleElement([c.mul_monomial(a) for c in g])
                if ech.reduce(tix(v.to_vec())):  # unseen terms get fresh, non-pivot columns
                    return Decision.fails(
                        [f"weighted degree {delta}: {v} is not in N + T_L + (f)·M"],
                        witness=v)
    certificate.append(f"every weighted degree up to {top} checked; higher degrees lie in (f)·M")
    certificate.append("graded Nakayama: M ⊆ N + T_L + (f)·M implies M ⊆ N + T_L")
    return Decision.holds(certificate)


def mixed_containment(f: MapGerm, M: Sequence[ModuleElement], N: Sequence[ModuleElement],
                      j: int = -1, D: int | None = None) -> Decision:
    """Decide M ⊆ N + T_{L^(j)} f for R-modules M, N given by generators.

    Uses the reduction modulo S = N + (f)·M: when R^p/S is finite dimensional
    the criterion becomes finite linear algebra in R^p/S (exact).  Otherwise a
    positive grading making everything homogeneous is searched for; failing
    that the answer is Inconclusive at the given jet degree.
    """
    M = [v for v in M if not v.is_zero()]
    N = [v for v in N if not v.is_zero()]
    if D is None:
        D = default_jet_degree(f)
    if not M:
        return Decision.holds(["M is zero"])
    gens_S = list(N)
    for g in M:
        for c in f.components:
            if c.terms:
                gens_S.append(g * c)
    S = _basis_of(gens_S, f)
    qd = S.quotient_dimension()
    if qd.krull_dim == -1:
        return Decision.holds(["N + (f)·M = R^p", "Nakayama over the target ring gives M ⊆ N"],
                              jet_degree=0)
    if qd.krull_dim == 0:
        DS = qd.max_degree
        if DS > D:
            return Decision.inconclusive(
                [f"R^p/(N+(f)M) needs jet degree {DS} > {D}"], D)
        jq = JetQuotient(S)
        lam = Echelon(f.field)
        for v in _t_L_elements(f, j, DS):
            red = jq.reduce(v)
            if red:
                lam.add(red)
        for g in M:
            for v in _module_jet_span([g], DS):
                red = jq.reduce(v)
                if red and lam.reduce(red):
                    return Decision.fails(
                        [f"{v} maps outside the image of T_L in R^p/(N+(f)·M) (dim {jq.dim})"],
                        jet_degree=DS, witness=v)
        return Decision.holds(
            [f"M ⊆ N + T_L + (f)·M checked in R^p/(N+(f)·M) of dimension {jq.dim} "
             f"(highest standard degree {DS})",
             "Nakayama over the target ring: M ⊆ N + T_L"],
            jet_degree=DS)
    graded = _graded_route(f, list(M), list(N), j)
    if graded is not None:
        return graded
    return Decision.inconclusive(
        [f"R^p/(N+(f)·M) has Krull dimension {qd.krull_dim} and no grading applies"], D)


# ---------------------------------------------------------------------------
# contains_power


def _target_vectors(c: IdealHandle, f: MapGerm) -> list[ModuleElement]:
    return ideal_times_free(c, f.p)


def contains_ideal_free(f: MapGerm, space: str, j: int, c: IdealHandle, D: int | None = None) -> Decision:
    """Decide c·R^p ⊆ T_{G^(j)} f for G in {R, K, A}."""
    space = space.upper()
    targets = _target_vectors(c, f)
    if space in ("R", "K"):
        B = t_R(f, j) if space == "R" else t_K(f, j)
        for v in targets:
            if not B.contains(v):
                return Decision.fails([f"{v} is not in T_{space}^({j}) f"], witness=v)
        return Decision.holds([f"standard-basis membership of all {len(targets)} generators in T_{space}^({j}) f"])
    if space == "A":
        if D is None:
            D = default_jet_degree(f)
        return mixed_containment(f, targets, t_R_generators(f, j), j, D)
    raise ValueError(f"unknown group {space!r}")


def contains_power(f: MapGerm, space: str, j: int, d: int, D: int | None = None) -> Decision:
    """Decide I^d·R^p ⊆ T_{G^(j)} f."""
    if d < 1:
        raise ValueError("d must be positive")
    if D is None:
        D = default_jet_degree(f, d)
    return contains_ideal_free(f, space, j, f.filtration ** d, D)
