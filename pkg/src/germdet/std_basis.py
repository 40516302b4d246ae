"""Mora standard bases for ideals and submodules of R^p, R = k[x] localized at 0.

Internally a vector of R^p is a dictionary ``(exponents, component) -> coeff``.
Two module orderings are available, both local on monomials:

* ``"top"``: term over position (compare monomials first, then components);
* ``"pot"``: position over term (lower component index first), used for
  elimination of components in colon and intersection computations.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .linalg import Echelon
from .ring_core import (
    QQ,
    FieldDesc,
    IdealHandle,
    Poly,
    StructuralError,
    local_key,
)

__all__ = [
    "ModuleElement",
    "SubmoduleBasis",
    "std_basis",
    "normal_form",
    "module_contains",
    "colon",
    "colon_element",
    "ideal_ops",
    "ideal_colon",
    "saturation",
    "minors_ideal",
    "QuotientDim",
    "quotient_dimension",
    "radical_contains",
    "JetQuotient",
    "canonical_ideal_generators",
    "ideal_times_free",
]

Term = tuple  # (exps, comp)
Vec = dict


# ---------------------------------------------------------------------------
# module elements


class ModuleElement:
    """Element of R^p given by its p component polynomials."""

    __slots__ = ("components",)

    def __init__(self, components: Sequence[Poly]):
        comps = tuple(components)
        if not comps:
            raise StructuralError("module elements need at least one component")
        for c in comps:
            comps[0]._check(c)
        self.components = comps

    @classmethod
    def unit(cls, i: int, p: int, vars: Sequence[str], field: FieldDesc = QQ) -> "ModuleElement":
        return cls([Poly.one(vars, field) if k == i else Poly.zero(vars, field) for k in range(p)])

    @classmethod
    def zero(cls, p: int, vars: Sequence[str], field: FieldDesc = QQ) -> "ModuleElement":
        return cls([Poly.zero(vars, field) for _ in range(p)])

    @property
    def rank(self) -> int:
        return len(self.components)

    @property
    def vars(self) -> tuple[str, ...]:
        return self.components[0].vars

    @property
    def field(self) -> FieldDesc:
        return self.components[0].field

    def __getitem__(self, i: int) -> Poly:
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(not c.terms for c in self.components)

    def __add__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement([a + b for a, b in zip(self.components, other.components)])

    def __sub__(self, other: "ModuleElement") -> "ModuleElement":
        return ModuleElement([a - b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> "ModuleElement":
        return ModuleElement([-a for a in self.components])

    def __mul__(self, q) -> "ModuleElement":
        if isinstance(q, Poly):
            return ModuleElement([q * a for a in self.components])
        return ModuleElement([a.scale(q) for a in self.components])

    __rmul__ = __mul__

    def mul_trunc(self, q: Poly, D: int | None) -> "ModuleElement":
        return ModuleElement([a.mul_trunc(q, D) for a in self.components])

    def truncate(self, D: int | None) -> "ModuleElement":
        return ModuleElement([a.truncate(D) for a in self.components])

    def ord(self):
        return min(c.ord() for c in self.components)

    def degree(self) -> int:
        return max(c.degree() for c in self.components)

    def to_vec(self) -> Vec:
        out = {}
        for i, c in enumerate(self.components):
            for e, a in c.terms.items():
                out[(e, i)] = a
        return out

    @classmethod
    def from_vec(cls, vec: Vec, p: int, vars: Sequence[str], field: FieldDesc) -> "ModuleElement":
        comps: list[dict] = [{} for _ in range(p)]
        for (e, i), a in vec.items():
            comps[i][e] = a
        return cls([Poly(c, vars, field, _clean=True) for c in comps])

    def __eq__(self, other) -> bool:
        return isinstance(other, ModuleElement) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __str__(self) -> str:
        if len(self.components) == 1:
            return str(self.components[0])
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"ModuleElement{self}"


def _as_element(v) -> ModuleElement:
    if isinstance(v, ModuleElement):
        return v
    if isinstance(v, Poly):
        return ModuleElement([v])
    return ModuleElement(list(v))


def ideal_times_free(I: Union[IdealHandle, Sequence[Poly]], p: int) -> list[ModuleElement]:
    """Generators g·e_i of I·R^p."""
    gens = I.generators if isinstance(I, IdealHandle) else list(I)
    out = []
    for g in gens:
        zero = Poly.zero(g.vars, g.field)
        for i in range(p):
            out.append(ModuleElement([g if k == i else zero for k in range(p)]))
    return out


# ---------------------------------------------------------------------------
# orderings and the Mora kernel


class _Order:
    def __init__(self, kind: str):
        if kind not in ("top", "pot"):
            raise ValueError(f"unknown module ordering {kind!r}")
        self.kind = kind
        self._cache: dict[Term, tuple] = {}

    def key(self, t: Term) -> tuple:
        k = self._cache.get(t)
        if k is None:
            e, c = t
            if self.kind == "top":
                k = local_key(e) + (-c,)
            else:
                k = (-c,) + local_key(e)
            self._cache[t] = k
        return k

    def lead(self, v: Vec) -> Term:
        return max(v, key=self.key)


class _Elt:
    __slots__ = ("vec", "lm", "lexp", "lcomp", "ldeg", "ecart", "nterms")

    def __init__(self, vec: Vec, order: _Order, F: FieldDesc, monic: bool = True):
        lm = order.lead(vec)
        if monic and vec[lm] != 1:
            inv = F.inv(vec[lm])
            vec = {t: F.mul(c, inv) for t, c in vec.items()}
        self.vec = vec
        self.lm = lm
        self.lexp = lm[0]
        self.lcomp = lm[1]
        self.ldeg = sum(lm[0])
        self.ecart = max(sum(e) for e, _ in vec) - self.ldeg
        self.nterms = len(vec)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _sub_multiple(h: Vec, c, shift, gvec: Vec, F: FieldDesc) -> Vec:
    """h - c * x^shift * g."""
    p = F.characteristic
    out = dict(h)
    for (e, i), a in gvec.items():
        t = (tuple(x + y for x, y in zip(e, shift)), i)
        val = out.get(t, 0) - c * a
        if p:
            val %= p
        if val == 0:
            out.pop(t, None)
        else:
            out[t] = val
    return out


def _nf_mora(f: Vec, basis: Sequence[_Elt], order: _Order, F: FieldDesc) -> Vec:
    """Weak normal form with ecart-driven reducer choice.

    Returns h with u*f - h in the submodule for some unit u, and either h = 0
    or the leading term of h divisible by no leading term of the basis.
    """
    h = f
    T = list(basis)
    while h:
        lm = order.lead(h)
        le, lc = lm
        best = None
        for g in T:
            if g.lcomp == lc and _divides(g.lexp, le):
                if best is None or g.ecart < best.ecart or (
                        g.ecart == best.ecart and g.nterms < best.nterms):
                    best = g
                    if g.ecart == 0 and g.nterms == 1:
                        break
        if best is None:
            break
        eh = max(sum(e) for e, _ in h) - sum(le)
        if best.ecart > eh:
            T.append(_Elt(h, order, F, monic=False))
        coef = F.div(h[lm], best.vec[best.lm])
        shift = tuple(x - y for x, y in zip(le, best.lexp))
        h = _sub_multiple(h, coef, shift, best.vec, F)
    return h


def _spoly(a: _Elt, b: _Elt, F: FieldDesc) -> Vec:
    lcm = tuple(max(x, y) for x, y in zip(a.lexp, b.lexp))
    sa = tuple(x - y for x, y in zip(lcm, a.lexp))
    sb = tuple(x - y for x, y in zip(lcm, b.lexp))
    va = _sub_multiple({}, F.neg(F.inv(a.vec[a.lm])), sa, a.vec, F)
    return _sub_multiple(va, F.inv(b.vec[b.lm]), sb, b.vec, F)


def _standard(gens: Iterable[Vec], order: _Order, F: FieldDesc, rank: int) -> list[_Elt]:
    S: list[_Elt] = []
    seen = set()
    for g in gens:
        if not g:
            continue
        key = frozenset(g.items())
        if key in seen:
            continue
        seen.add(key)
        S.append(_Elt(dict(g), order, F))
    heap: list = []
    counter = itertools.count()

    def push_pairs(j: int) -> None:
        b = S[j]
        for i in range(j):
            a = S[i]
            if a.lcomp != b.lcomp:
                continue
            lcm = tuple(max(x, y) for x, y in zip(a.lexp, b.lexp))
            heapq.heappush(heap, (sum(lcm), next(counter), i, j))

    for j in range(len(S)):
        push_pairs(j)
    while heap:
        _, _, i, j = heapq.heappop(heap)
        a, b = S[i], S[j]
        if rank == 1 and all(x == 0 or y == 0 for x, y in zip(a.lexp, b.lexp)):
            continue  # coprime leading monomials: S-polynomial reduces to zero
        lcm = tuple(max(x, y) for x, y in zip(a.lexp, b.lexp))
        if _chain_skip(S, i, j, lcm, heap_pairs=None):
            continue
        s = _spoly(a, b, F)
        h = _nf_mora(s, S, order, F)
        if h:
            S.append(_Elt(h, order, F))
            push_pairs(len(S) - 1)
    return S


def _chain_skip(S, i, j, lcm, heap_pairs) -> bool:
    # A cheap variant of the chain criterion is unsafe without pair bookkeeping;
    # every pair is processed.
    return False


def _minimize(S: list[_Elt]) -> list[_Elt]:
    order = sorted(range(len(S)), key=lambda k: (S[k].ldeg, S[k].nterms, k))
    kept: list[_Elt] = []
    for k in order:
        g = S[k]
        if any(h.lcomp == g.lcomp and _divides(h.lexp, g.lexp) for h in kept):
            continue
        kept.append(g)
    return kept


# ---------------------------------------------------------------------------
# public basis object


class SubmoduleBasis:
    """Standard basis of a finitely generated submodule of R^p."""

    def __init__(self, elements: list[_Elt], generators: tuple[ModuleElement, ...], rank: int,
                 vars: tuple[str, ...], field: FieldDesc, ordering: str, reduced: bool = True):
        self._elts = elements
        self.generators = generators
        self.rank = rank
        self.vars = vars
        self.field = field
        self.ordering = ordering
        self.reduced = reduced
        self._order = _Order(ordering)
        self._qdim = None

    @property
    def elements(self) -> list[ModuleElement]:
        return [ModuleElement.from_vec(g.vec, self.rank, self.vars, self.field) for g in self._elts]

    def __len__(self) -> int:
        return len(self._elts)

    def leading_terms(self) -> list[Term]:
        return [g.lm for g in self._elts]

    def leading_module(self) -> list[list[tuple[int, ...]]]:
        """Per component, the monomial generators of the leading module."""
        out: list[list] = [[] for _ in range(self.rank)]
        for g in self._elts:
            out[g.lcomp].append(g.lexp)
        return out

    def is_zero(self) -> bool:
        return not self._elts

    def is_full(self) -> bool:
        zero = (0,) * len(self.vars)
        comps = {g.lcomp for g in self._elts if g.lexp == zero}
        return len(comps) == self.rank

    def nf_vec(self, v: Vec) -> Vec:
        return _nf_mora(v, self._elts, self._order, self.field)

    def normal_form(self, v) -> ModuleElement:
        v = _as_element(v)
        h = self.nf_vec(v.to_vec())
        return ModuleElement.from_vec(h, self.rank, self.vars, self.field)

    def contains_vec(self, v: Vec) -> bool:
        return not self.nf_vec(v)

    def contains(self, v) -> bool:
        v = _as_element(v)
        if v.rank != self.rank:
            raise StructuralError("rank mismatch")
        return self.contains_vec(v.to_vec())

    def contains_all(self, vs: Iterable) -> bool:
        return all(self.contains(v) for v in vs)

    def term_in_leading(self, t: Term) -> bool:
        e, c = t
        return any(g.lcomp == c and _divides(g.lexp, e) for g in self._elts)

    def quotient_dimension(self) -> "QuotientDim":
        if self._qdim is None:
            self._qdim = _quotient_dim_from_leading(self.leading_module(), len(self.vars))
        return self._qdim

    def __repr__(self) -> str:
        return f"SubmoduleBasis(rank={self.rank}, size={len(self._elts)}, ordering={self.ordering})"


def std_basis(gens: Sequence, rank: int | None = None, vars: Sequence[str] | None = None,
              field: FieldDesc | None = None, ordering: str = "top") -> SubmoduleBasis:
    """Standard basis of the submodule spanned by ``gens`` under the local ordering."""
    elems = [_as_element(g) for g in gens]
    if elems:
        rank = elems[0].rank if rank is None else rank
        vars = elems[0].vars
        field = elems[0].field
        for e in elems:
            if e.rank != rank or e.vars != vars or e.field != field:
                raise StructuralError("generators of inconsistent shape")
    elif rank is None or vars is None:
        raise StructuralError("an empty generator list needs rank and variables")
    field = field if field is not None else QQ
    order = _Order(ordering)
    S = _standard((e.to_vec() for e in elems), order, field, rank)
    S = _minimize(S)
    return SubmoduleBasis(S, tuple(elems), rank, tuple(vars), field, ordering)


def normal_form(v, B: SubmoduleBasis) -> ModuleElement:
    """Weak normal form: u*v - NF(v) lies in the submodule for a unit u (u = 1 whenever
    no intermediate remainder had to join the reducer set)."""
    return B.normal_form(v)


def module_contains(A: Sequence, B: Sequence) -> bool:
    """True iff every element of B lies in the submodule generated by A."""
    A = [_as_element(a) for a in A]
    B = [_as_element(b) for b in B]
    if not B:
        return True
    if not A:
        return all(b.is_zero() for b in B)
    basis = std_basis(A)
    return all(basis.contains(b) for b in B)


# ---------------------------------------------------------------------------
# colon ideals, intersections, saturation


def _ring_of(M) -> tuple[int, tuple[str, ...], FieldDesc]:
    if isinstance(M, SubmoduleBasis):
        return M.rank, M.vars, M.field
    raise StructuralError("expected a SubmoduleBasis")


def _gens_vecs(M) -> list[Vec]:
    if isinstance(M, SubmoduleBasis):
        return [g.vec for g in M._elts]
    return [_as_element(g).to_vec() for g in M]


def _eliminate_last(vecs: list[Vec], rank: int, F: FieldDesc) -> list[dict]:
    """Generators of the intersection of span(vecs) with the last coordinate axis."""
    basis = _standard(vecs, _Order("pot"), F, rank)
    basis = _minimize(basis)
    last = rank - 1
    out = []
    for g in basis:
        if g.lcomp == last:
            out.append({e: c for (e, i), c in g.vec.items()})
    return out


def _finite_quotient(M) -> "JetQuotient | None":
    """Exact coordinates on R^p/M when that quotient is finite dimensional."""
    if not isinstance(M, SubmoduleBasis) or M.ordering != "top":
        return None
    if M.quotient_dimension().krull_dim > 0:
        return None
    return JetQuotient(M)


def _kernel_ideal(jqs: list, images, vars, F) -> IdealHandle:
    """Kernel of q -> (images(q) reduced in each quotient), plus m^(s+1).

    Every quotient is killed by m^(s+1), where s is the largest top degree,
    so the kernel is decided on polynomials of degree <= s.
    """
    from .ring_core import monomials_up_to
    s = max(jq.D for jq in jqs)
    n = len(vars)
    mons = monomials_up_to(n, s) if s >= 0 else []
    ech = Echelon(F, track=True)
    gens = []
    for k, e in enumerate(mons):
        img = {}
        off = 0
        for jq, vec in zip(jqs, images(e)):
            for i, c in jq.reduce_vec(vec).items():
                img[off + i] = c
            off += jq.dim
        row, rel = ech.add_tracked(img, k)
        if row is None:
            gens.append(Poly({mons[t]: c for t, c in rel.items()}, vars, F))
    gens.extend(Poly({e: F.one}, vars, F) for e in _monomials_of_degree(n, s + 1))
    return IdealHandle(gens, vars, F)


def _monomials_of_degree(n: int, d: int) -> list[tuple[int, ...]]:
    return [e for e in itertools.product(range(d + 1), repeat=n) if sum(e) == d]


def colon_element(M, v, vars: Sequence[str] | None = None, field: FieldDesc | None = None,
                  rank: int | None = None) -> IdealHandle:
    """The ideal {q : q*v in M}."""
    if isinstance(M, SubmoduleBasis):
        rank, vars, field = M.rank, M.vars, M.field
    v = _as_element(v)
    rank = v.rank if rank is None else rank
    vars = v.vars if vars is None else tuple(vars)
    field = v.field if field is None else field
    if v.is_zero():
        return IdealHandle.unit(vars, field)
    jq = _finite_quotient(M)
    if jq is not None:
        w0 = v.to_vec()

        def images(e):
            return [{(tuple(a + b for a, b in zip(e, t)), i): c for (t, i), c in w0.items()}]
        return _kernel_ideal([jq], images, vars, field)
    tag = rank
    vecs = [dict(g) for g in _gens_vecs(M)]
    w = v.to_vec()
    w[((0,) * len(vars), tag)] = field.one
    vecs.append(w)
    polys = _eliminate_last(vecs, rank + 1, field)
    return IdealHandle([Poly(p, vars, field, _clean=True) for p in polys], vars, field)


def colon(M, target: str = "full-module") -> IdealHandle:
    """{q : q*e_i in M for every unit vector e_i}, the annihilator of R^p/M."""
    if target != "full-module":
        raise ValueError("only the full module is supported as target")
    if not isinstance(M, SubmoduleBasis):
        M = std_basis(list(M))
    p, vars, F = M.rank, M.vars, M.field
    if p == 1:
        gens = [Poly({e: c for (e, i), c in g.vec.items()}, vars, F, _clean=True) for g in M._elts]
        return IdealHandle(gens, vars, F)
    if M.is_full():
        return IdealHandle.unit(vars, F)
    result = None
    for i in range(p):
        ci = colon_element(M, ModuleElement.unit(i, p, vars, F))
        result = ci if result is None else ideal_ops(result, ci, "intersect")
        if result.is_zero():
            break
    return result


def _intersect(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    vars, F = I.vars, I.field
    if I.is_zero() or J.is_zero():
        return IdealHandle.zero(vars, F)
    jqs = [_finite_quotient(I.basis), _finite_quotient(J.basis)]
    if all(q is not None for q in jqs):
        return _kernel_ideal(jqs, lambda e: [{(e, 0): F.one}] * 2, vars, F)
    vecs = []
    for g in I.generators:
        v = {(e, 0): c for e, c in g.terms.items()}
        v.update({(e, 1): c for e, c in g.terms.items()})
        vecs.append(v)
    for h in J.generators:
        vecs.append({(e, 0): c for e, c in h.terms.items()})
    polys = _eliminate_last(vecs, 2, F)
    return IdealHandle([Poly(p, vars, F, _clean=True) for p in polys], vars, F)


def ideal_ops(I: IdealHandle, J: IdealHandle | None, op: str, k: int | None = None) -> IdealHandle:
    """Product, k-th power (of I), sum or intersection of ideals."""
    if op == "product":
        return I * J
    if op in ("power", "power-k"):
        if k is None:
            raise ValueError("power needs k")
        return I ** k
    if op == "sum":
        return I + J
    if op == "intersect":
        return _intersect(I, J)
    raise ValueError(f"unknown ideal operation {op!r}")


def ideal_colon(I: IdealHandle, J: IdealHandle) -> IdealHandle:
    """I : J = {q : q*J ⊆ I}."""
    result = IdealHandle.unit(I.vars, I.field)
    for g in J.generators:
        result = _intersect(result, colon_element(I.basis, ModuleElement([g]))) \
            if not result.is_unit() else colon_element(I.basis, ModuleElement([g]))
    return result


def saturation(I: IdealHandle, J: IdealHandle, max_steps: int = 64) -> IdealHandle:
    """I : J^infinity by iterated colon."""
    cur = I
    for _ in range(max_steps):
        nxt = ideal_colon(cur, J)
        if cur.contains_ideal(nxt):
            return cur
        cur = nxt
    raise RuntimeError("saturation did not stabilise")  # pragma: no cover


# ---------------------------------------------------------------------------
# determinantal ideals


def _det(rows: list[list[Poly]]) -> Poly:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for j in range(n):
        if not rows[0][j].terms:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc if acc is not None else rows[0][0] - rows[0][0]


def minors_ideal(M: Sequence[Sequence[Poly]], size: int) -> IdealHandle:
    """Ideal of all size x size minors (zero ideal when no such minors exist)."""
    rows = [list(r) for r in M]
    some = rows[0][0]
    vars, F = some.vars, some.field
    if size <= 0:
        return IdealHandle.unit(vars, F)
    if size > min(len(rows), len(rows[0])):
        return IdealHandle.zero(vars, F)
    gens = []
    for ri in itertools.combinations(range(len(rows)), size):
        for ci in itertools.combinations(range(len(rows[0])), size):
            d = _det([[rows[r][c] for c in ci] for r in ri])
            if d.terms:
                gens.append(d)
    return IdealHandle(gens, vars, F)


# ---------------------------------------------------------------------------
# dimension counts


@dataclass(frozen=True)
class QuotientDim:
    """Krull dimension of the support of R^p/M (-1 for empty support), k-dimension
    (``inf`` when the support is positive dimensional) and the largest degree of a
    standard monomial (None unless the quotient is finite)."""

    krull_dim: int
    k_dim: Union[int, float]
    max_degree: int | None = None

    def __iter__(self):
        return iter((self.krull_dim, self.k_dim))


def _monomial_ideal_dim(gens: list[tuple[int, ...]], n: int) -> int:
    if any(sum(g) == 0 for g in gens):
        return -1
    supports = [frozenset(i for i, a in enumerate(g) if a) for g in gens]
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            s = frozenset(S)
            if all(not sup <= s for sup in supports):
                return size
    return 0  # pragma: no cover


def _standard_monomials(gens: list[tuple[int, ...]], n: int) -> list[tuple[int, ...]]:
    bounds = [None] * n
    for g in gens:
        sup = [i for i, a in enumerate(g) if a]
        if len(sup) == 1:
            i = sup[0]
            bounds[i] = g[i] if bounds[i] is None else min(bounds[i], g[i])
    if any(b is None for b in bounds):
        raise ValueError("quotient is not finite dimensional")
    out = []
    for e in itertools.product(*[range(b) for b in bounds]):
        if not any(_divides(g, e) for g in gens):
            out.append(tuple(e))
    return out


def _quotient_dim_from_leading(lead: list[list[tuple[int, ...]]], n: int) -> QuotientDim:
    dims = [_monomial_ideal_dim(g, n) for g in lead]
    kd = max(dims) if dims else -1
    if kd == -1:
        return QuotientDim(-1, 0, None)
    if kd > 0:
        return QuotientDim(kd, float("inf"), None)
    count, top = 0, 0
    for g in lead:
        if any(sum(x) == 0 for x in g):
            continue
        mons = _standard_monomials(g, n)
        count += len(mons)
        top = max([top] + [sum(m) for m in mons])
    return QuotientDim(0, count, top)


def quotient_dimension(M) -> QuotientDim:
    """(krull_dim, k_dim) of R^p/M read off the leading module."""
    if isinstance(M, IdealHandle):
        M = M.basis
    elif not isinstance(M, SubmoduleBasis):
        M = std_basis(list(M))
    return M.quotient_dimension()


# ---------------------------------------------------------------------------
# radical containment


def radical_contains(I: IdealHandle, J: IdealHandle, nmax: int = 32):
    """Decide J ⊆ sqrt(I).

    Per generator g of J the least N <= nmax with g^N in I is searched; when
    none exists, g lies in sqrt(I) exactly when the saturation I : g^∞ is the
    unit ideal, which settles the question either way.
    """
    from .decision import Decision

    found = []
    for g in J.generators:
        power = Poly.one(g.vars, g.field)
        ok = None
        for N in range(1, nmax + 1):
            power = power * g
            if I.contains(power):
                ok = N
                break
        if ok is not None:
            found.append(f"({g})^{ok} in I")
            continue
        try:
            sat = saturation(I, IdealHandle([g], g.vars, g.field))
        except RuntimeError:  # pragma: no cover
            return Decision.inconclusive(
                [f"no power g^N with N <= {nmax} of g = {g} lies in {I}"], nmax)
        if sat.is_unit():
            found.append(f"I : ({g})^∞ is the unit ideal, so {g} is in sqrt(I)")
            continue
        return Decision.fails([f"I : ({g})^∞ = {sat} is proper, so {g} is not in sqrt(I)"],
                              jet_degree=nmax, witness=g)
    if not found:
        return Decision.holds(["J is the zero ideal"])
    return Decision.holds(found)


# ---------------------------------------------------------------------------
# finite-dimensional quotients and jets


class JetQuotient:
    """k-linear coordinates on R^p / (S + m^(D+1) R^p).

    Built from a term-over-position standard basis of S.  When ``D`` is None
    the quotient R^p/S must be finite dimensional and D is taken as the top
    degree of a standard monomial, so the coordinates describe R^p/S itself.
    Reduction cancels leading terms from the largest down; every reduction
    step is exact modulo S plus terms of degree > D.
    """

    def __init__(self, basis: SubmoduleBasis, D: int | None = None):
        if basis.ordering != "top":
            raise ValueError("jet quotients need a term-over-position basis")
        self.basis = basis
        self.F = basis.field
        self.rank = basis.rank
        self.n = len(basis.vars)
        if D is None:
            qd = basis.quotient_dimension()
            if qd.krull_dim > 0:
                raise ValueError("quotient is not finite dimensional")
            D = qd.max_degree if qd.max_degree is not None else -1
            self.exact = True
        else:
            qd = basis.quotient_dimension()
            self.exact = qd.krull_dim <= 0 and (qd.max_degree is None or qd.max_degree <= D)
        self.D = D
        self._order = _Order("top")
        self._trunc = [
            (g, {t: c for t, c in g.vec.items() if sum(t[0]) <= D})
            for g in basis._elts if g.ldeg <= D
        ]
        self._reducer_cache: dict[Term, object] = {}
        from .ring_core import monomials_up_to
        mons = monomials_up_to(self.n, max(D, 0)) if D >= 0 else []
        terms = [(e, c) for e in mons for c in range(self.rank)]
        terms.sort(key=self._order.key, reverse=True)
        self.standard = [t for t in terms if not basis.term_in_leading(t)]
        self.index = {t: i for i, t in enumerate(self.standard)}

    @property
    def dim(self) -> int:
        return len(self.standard)

    def _reducer(self, t: Term):
        r = self._reducer_cache.get(t, False)
        if r is False:
            best = None
            e, c = t
            for g, tv in self._trunc:
                if g.lcomp == c and _divides(g.lexp, e):
                    if best is None or len(tv) < len(best[1]):
                        best = (g, tv)
            r = best
            self._reducer_cache[t] = r
        return r

    def reduce_vec(self, v: Vec) -> dict[int, object]:
        F = self.F
        p = F.characteristic
        D = self.D
        key = self._order.key
        w = {t: c for t, c in v.items() if sum(t[0]) <= D and c != 0}
        heap = [(tuple(-k for k in key(t)), t) for t in w]
        heapq.heapify(heap)
        out: dict[int, object] = {}
        while heap:
            _, t = heapq.heappop(heap)
            c = w.pop(t, None)
            if c is None:
                continue
            r = self._reducer(t)
            if r is None:
                out[self.index[t]] = c
                continue
            g, tv = r
            shift = tuple(x - y for x, y in zip(t[0], g.lexp))
            ds = sum(shift)
            for (ge, gc), a in tv.items():
                if (ge, gc) == g.lm:
                    continue
                if sum(ge) + ds > D:
                    continue
                nt = (tuple(x + y for x, y in zip(ge, shift)), gc)
                val = w.get(nt, 0) - c * a
                if p:
                    val %= p
                if val == 0:
                    w.pop(nt, None)
                else:
                    if nt not in w:
                        heapq.heappush(heap, (tuple(-k for k in key(nt)), nt))
                    w[nt] = val
        return out

    def reduce(self, v) -> dict[int, object]:
        if isinstance(v, dict):
            return self.reduce_vec(v)
        return self.reduce_vec(_as_element(v).to_vec())

    def lift(self, coords: dict[int, object]) -> ModuleElement:
        vec = {self.standard[i]: c for i, c in coords.items() if c != 0}
        return ModuleElement.from_vec(vec, self.rank, self.basis.vars, self.F)


def canonical_ideal_generators(I: IdealHandle) -> list[Poly]:
    """Deterministic generators: reduced standard basis for finite colength,
    otherwise the minimal monic standard basis with monomial-times-unit elements
    replaced by the monomial."""
    if I.is_zero():
        return []
    B = I.basis
    vars, F = I.vars, I.field
    if B.is_full():
        return [Poly.one(vars, F)]
    qd = B.quotient_dimension()
    out = []
    if qd.krull_dim == 0:
        jq = JetQuotient(B)
        for g in B._elts:
            mono = Poly.monomial(g.lexp, vars, F)
            if g.ldeg > jq.D:
                out.append(mono)
                continue
            r = jq.lift(jq.reduce({(g.lexp, 0): F.one}))
            out.append(mono - r.components[0])
    else:
        for g in B._elts:
            poly = Poly({e: c for (e, i), c in g.vec.items()}, vars, F, _clean=True)
            if all(_divides(g.lexp, e) for e in poly.terms):
                poly = Poly.monomial(g.lexp, vars, F)
            out.append(poly)
    out.sort(key=lambda q: local_key(q.leading_term()[0]), reverse=True)
    return out


def echelon_of_vectors(vectors: Iterable[dict], F: FieldDesc) -> Echelon:
    ech = Echelon(F)
    for v in vectors:
        ech.add(v)
    return ech
