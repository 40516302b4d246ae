"""Sparse exact row reduction over Q or F_p.

Rows are dictionaries ``column -> coefficient`` with integer column indices.
A row stored under pivot ``c`` is monic at ``c`` and has no entries left of
``c``; that is all membership and rank tests need.
"""

from __future__ import annotations

import heapq
from typing import Hashable, Iterable, Mapping

from .ring_core import FieldDesc

Row = dict


class Echelon:
    """Incrementally built row-echelon basis of a subspace of k^N."""

    def __init__(self, field: FieldDesc, track: bool = False):
        self.field = field
        self.rows: dict[int, Row] = {}
        self.track = track
        self.combos: dict[int, dict[Hashable, object]] = {}

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, v: Mapping[int, object], combo: dict | None = None) -> Row:
        F = self.field
        p = F.characteristic
        v = {k: c for k, c in v.items() if c != 0}
        rows = self.rows
        heap = [k for k in v if k in rows]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            a = v.get(c)
            if a is None:
                continue
            row = rows[c]
            for k, b in row.items():
                val = v.get(k, 0) - a * b
                if p:
                    val %= p
                if val == 0:
                    v.pop(k, None)
                else:
                    if k not in v and k in rows and k != c:
                        heapq.heappush(heap, k)
                    v[k] = val
            v.pop(c, None)
            if combo is not None:
                for tag, b in self.combos[c].items():
                    val = combo.get(tag, 0) - a * b
                    if p:
                        val %= p
                    if val == 0:
                        combo.pop(tag, None)
                    else:
                        combo[tag] = val
        return v

    def reduce(self, v: Mapping[int, object]) -> Row:
        """Remainder of v after eliminating every pivot column."""
        return self._reduce(v)

    def contains(self, v: Mapping[int, object]) -> bool:
        return not self._reduce(v)

    def add(self, v: Mapping[int, object], tag: Hashable = None) -> Row | None:
        """Insert v; returns the new stored row, or None when v was dependent.

        With tracking enabled, dependent inputs return None and the relation
        found is available from :meth:`add_tracked`.
        """
        return self.add_tracked(v, tag)[0]

    def add_tracked(self, v: Mapping[int, object], tag: Hashable = None):
        """Insert v and return (new_row_or_None, relation_or_None).

        The relation is the combination of tags that vanishes when v reduces
        to zero (only meaningful with ``track=True``).
        """
        F = self.field
        combo = {tag: F.one} if self.track else None
        r = self._reduce(v, combo)
        if not r:
            return None, combo
        piv = min(r)
        inv = F.inv(r[piv])
        r = {k: F.mul(c, inv) for k, c in r.items()}
        self.rows[piv] = r
        if self.track:
            self.combos[piv] = {t: F.mul(c, inv) for t, c in combo.items()}
        return r, None

    def extend(self, vs: Iterable[Mapping[int, object]]) -> None:
        for v in vs:
            self.add(v)

    def pivots(self) -> list[int]:
        return sorted(self.rows)

    def fully_reduced(self, pivot: int) -> Row:
        """The stored row with every other pivot column cleared (reduced echelon form)."""
        row = self.rows[pivot]
        tail = {k: c for k, c in row.items() if k != pivot}
        saved = self.rows.pop(pivot)
        try:
            tail = self._reduce(tail)
        finally:
            self.rows[pivot] = saved
        tail[pivot] = self.field.one
        return tail

    def contains_space(self, other: "Echelon") -> bool:
        return all(self.contains(r) for r in other.rows.values())


def kernel(field: FieldDesc, vectors: list[Mapping[int, object]]) -> list[dict[int, object]]:
    """Basis of {a : sum_i a_i vectors[i] = 0}, as dictionaries index -> coefficient."""
    ech = Echelon(field, track=True)
    out = []
    for i, v in enumerate(vectors):
        row, rel = ech.add_tracked(v, i)
        if row is None:
            out.append(rel)
    return out
