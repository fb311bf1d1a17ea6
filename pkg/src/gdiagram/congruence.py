"""Ground congruence closure over a finite term set.

Union-find with a signature table: whenever two classes merge, parent terms
whose argument classes now coincide are merged as well, to a fixpoint. The
closure runs over the subterm closure of the inputs; the returned mapping is
restricted to the terms the caller asked about, with the earliest given term
of each class as its representative.
"""
from __future__ import annotations

from typing import Sequence

from .errors import SortError
from .signature import Term, Variable


class UnionFind:
    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        return True


def congruence_close(
    equations: Sequence[tuple[Term, Term]],
    terms: Sequence[Term],
) -> dict[Term, Term]:
    """Smallest congruence containing `equations`, restricted to `terms`.

    Returns a map from each given term to its class representative (the
    earliest given term of the class, in list order).
    """
    for lhs, rhs in equations:
        if isinstance(lhs.head, Variable) or isinstance(rhs.head, Variable):
            raise SortError("congruence closure requires ground equations")
        if lhs.sort != rhs.sort:
            raise SortError(
                f"equation relates different sorts: {lhs} : {lhs.sort} vs {rhs} : {rhs.sort}"
            )

    ids: dict[Term, int] = {}
    ordered: list[Term] = []

    def intern(t: Term) -> int:
        if t in ids:
            return ids[t]
        for a in t.args:
            intern(a)
        ids[t] = len(ordered)
        ordered.append(t)
        return ids[t]

    for t in terms:
        intern(t)
    for lhs, rhs in equations:
        intern(lhs)
        intern(rhs)

    n = len(ordered)
    uf = UnionFind(n)
    parents: list[list[int]] = [[] for _ in range(n)]
    for i, t in enumerate(ordered):
        for a in t.args:
            parents[ids[a]].append(i)

    def canon(i: int) -> tuple:
        t = ordered[i]
        return (t.head, tuple(uf.find(ids[a]) for a in t.args))

    work: list[tuple[int, int]] = [(ids[l], ids[r]) for l, r in equations]
    sig_table: dict[tuple, int] = {}
    for i, t in enumerate(ordered):
        if t.args:
            key = canon(i)
            if key in sig_table:
                work.append((i, sig_table[key]))
            else:
                sig_table[key] = i

    while work:
        a, b = work.pop()
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            continue
        touched = parents[ra] + parents[rb]
        uf.union(ra, rb)
        root = uf.find(ra)
        merged = parents[ra] + parents[rb]
        parents[root] = merged
        for p in touched:
            key = canon(p)
            prev = sig_table.get(key)
            if prev is None:
                sig_table[key] = p
            elif uf.find(prev) != uf.find(p):
                work.append((prev, p))

    # Representative: earliest *given* term of the class.
    given_index: dict[Term, int] = {}
    for k, t in enumerate(terms):
        if t not in given_index:
            given_index[t] = k
    reps: dict[int, Term] = {}
    for t in terms:
        root = uf.find(ids[t])
        best = reps.get(root)
        if best is None or given_index[t] < given_index[best]:
            reps[root] = t
    return {t: reps[uf.find(ids[t])] for t in terms}


def class_groups(mapping: dict[Term, Term]) -> list[list[Term]]:
    """Group a term->representative map into classes, representative first."""
    grouped: dict[Term, list[Term]] = {}
    for t, r in mapping.items():
        grouped.setdefault(r, []).append(t)
    out = []
    for r, members in grouped.items():
        rest = [m for m in members if m != r]
        out.append([r, *rest])
    return out
