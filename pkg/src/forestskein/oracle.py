"""Exact bounded decision procedures by stratum saturation.

Every skein relation has equal leaf counts on both sides, so rewriting
preserves (root count, caret count).  The congruence classes of forests in
a fixed stratum are therefore finite: enumerate the stratum, apply every
relation at every occurrence, and close with a union-find.  The resulting
tables are the ground truth against which the reversing engine is checked,
and they power the bounded left-cancellativity, Ore, and mcm queries.

Absent/no-failure answers here are evidence up to the stated bound, never
proofs; callers must carry the bound along with the verdict.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .config import OracleBudget
from .forest import (
    Forest,
    Tree,
    caret,
    caret_count,
    compose,
    divide,
    find_occurrences,
    forest_caret_count,
    forest_key,
    forest_leaf_count,
    forests_with_carets,
    render_forest,
    rewrite_at,
)
from .presentation import SkeinPresentation


class BudgetExceeded(RuntimeError):
    """A stratum is larger than the configured budget allows."""


@dataclass
class CongruenceTable:
    presentation: SkeinPresentation
    roots: int
    caret_bound: int
    class_of: dict = field(repr=False)          # forest -> class id
    classes: list = field(repr=False)           # class id -> sorted member list
    canonical: list = field(repr=False)         # class id -> canonical representative

    def class_id(self, f: Forest) -> int:
        try:
            return self.class_of[f]
        except KeyError:
            raise KeyError(f"forest {render_forest(f)} outside stratum "
                           f"({self.roots} roots, <= {self.caret_bound} carets)")

    def members(self, f: Forest) -> list:
        return self.classes[self.class_id(f)]

    def representative(self, f: Forest) -> Forest:
        return self.canonical[self.class_id(f)]


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x: int, y: int):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


_tables: dict = {}
_tables_lock = threading.Lock()


def saturate(p: SkeinPresentation, roots: int, carets: int,
             budget: OracleBudget | None = None) -> CongruenceTable:
    """Congruence table for the stratum (roots, <= carets).  Memoized, thread-safe."""
    budget = budget or OracleBudget()
    if carets > budget.caret_cap:
        raise BudgetExceeded(
            f"caret bound {carets} exceeds the oracle budget {budget.caret_cap}")
    key = (p, roots, carets)
    with _tables_lock:
        cached = _tables.get(key)
        if cached is not None:
            return cached
        table = _build(p, roots, carets, budget)
        _tables[key] = table
        return table


def _build(p: SkeinPresentation, roots: int, carets: int,
           budget: OracleBudget) -> CongruenceTable:
    all_forests: list = []
    for k in range(carets + 1):
        all_forests.extend(forests_with_carets(p.colours, roots, k))
        if len(all_forests) > budget.class_cap:
            raise BudgetExceeded(
                f"stratum ({roots} roots, <= {carets} carets) exceeds "
                f"{budget.class_cap} forests")
    index = {f: i for i, f in enumerate(all_forests)}
    uf = _UnionFind(len(all_forests))
    for f in all_forests:
        i = index[f]
        for lhs, rhs in p.relations:
            for occ in find_occurrences(f, lhs):
                uf.union(i, index[rewrite_at(f, occ, lhs, rhs)])
    rank = p.colour_rank
    groups: dict = {}
    for f in all_forests:
        groups.setdefault(uf.find(index[f]), []).append(f)
    members = sorted(
        (sorted(g, key=lambda x: forest_key(x, rank)) for g in groups.values()),
        key=lambda g: forest_key(g[0], rank),
    )
    class_of = {}
    for cid, g in enumerate(members):
        for f in g:
            class_of[f] = cid
    return CongruenceTable(
        presentation=p, roots=roots, caret_bound=carets,
        class_of=class_of, classes=members,
        canonical=[g[0] for g in members],
    )


def equivalent(p: SkeinPresentation, f: Forest, g: Forest,
               budget: OracleBudget | None = None) -> bool:
    if len(f) != len(g) or forest_leaf_count(f) != forest_leaf_count(g):
        return False
    if f == g:
        return True
    table = saturate(p, len(f), forest_caret_count(f), budget)
    return table.class_id(f) == table.class_id(g)


def class_leq(p: SkeinPresentation, f: Forest, g: Forest,
              budget: OracleBudget | None = None):
    """A forest h with compose(f, h) ~ g, or None.  Requires equal root counts."""
    if len(f) != len(g):
        return None
    if forest_caret_count(f) > forest_caret_count(g):
        return None
    table = saturate(p, len(g), forest_caret_count(g), budget)
    for member in table.members(g):
        h = divide(f, member)
        if h is not None:
            return h
    return None


@dataclass(frozen=True)
class LcCounterexample:
    f: Forest
    g: Forest
    h: Forest

    def render(self) -> dict:
        return {
            "f": render_forest(self.f),
            "g": render_forest(self.g),
            "h": render_forest(self.h),
        }


def refute_left_cancellative(p: SkeinPresentation, caret_bound: int,
                             budget: OracleBudget | None = None):
    """Search for Y_c . g ~ Y_c . h with g !~ h; None means none at this bound.

    Left multiplication by single carets suffices: a category is
    left-cancellative iff every 2-leaf tree multiplies injectively.
    """
    for k in range(2, caret_bound + 1):
        try:
            two_root = saturate(p, 2, k - 1, budget)
            one_root = saturate(p, 1, k, budget)
        except BudgetExceeded:
            return None
        for c in p.colours:
            yc = (caret(c),)
            composed: dict = {}
            for g in (cls[0] for cls in two_root.classes
                      if forest_caret_count(cls[0]) == k - 1):
                cid = one_root.class_id(compose(yc, g))
                if cid in composed:
                    other = composed[cid]
                    if two_root.class_id(g) != two_root.class_id(other):
                        return LcCounterexample(yc, other, g)
                else:
                    composed[cid] = g
    return None


@dataclass
class OreReport:
    pair_bound: int
    search_bound: int
    failures: list                     # pairs of tree representatives with no common bound
    pairs_checked: int

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "bounds": {"pair_bound": self.pair_bound,
                       "search_bound": self.search_bound},
            "pairs_checked": self.pairs_checked,
            "failures": [list(pair) for pair in self.failures],
            "verdict": "no-failures-at-bound" if self.ok else "failures",
        }


def check_ore_bounded(p: SkeinPresentation, pair_bound: int, search_bound: int,
                      budget: OracleBudget | None = None) -> OreReport:
    """Look for a common upper bound for every pair of small trees.

    One pass over the big stratum records, for each small representative,
    the set of classes it divides; a pair fails when those sets are disjoint.
    """
    if pair_bound > search_bound:
        raise ValueError("pair_bound must be <= search_bound")
    small = saturate(p, 1, pair_bound, budget)
    big = saturate(p, 1, search_bound, budget)
    reps = [cls[0] for cls in small.classes if cls[0][0] is not None]
    above: list = [set() for _ in reps]
    for cid, members in enumerate(big.classes):
        for member in members:
            for k, x in enumerate(reps):
                if cid not in above[k] and divide(x, member) is not None:
                    above[k].add(cid)
    failures = []
    checked = 0
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            checked += 1
            if not (above[i] & above[j]):
                failures.append((render_forest(reps[i]), render_forest(reps[j])))
    return OreReport(pair_bound, search_bound, failures, checked)


def mcm_bounded(p: SkeinPresentation, x: Tree, y: Tree, bound: int,
                budget: OracleBudget | None = None) -> list:
    """Minimal common upper-bound classes of two trees, within the caret bound.

    Returns canonical representatives, pairwise incomparable.  Minimality is
    absolute for anything at or below the bound; multiples beyond it are
    invisible.
    """
    if equivalent(p, (x,), (y,), budget):
        raise ValueError("mcm is defined for distinct classes")
    table = saturate(p, 1, bound, budget)
    commons = []
    for cls in table.classes:
        z = cls[0]
        if caret_count(z[0]) < max(caret_count(x), caret_count(y)):
            continue
        if class_leq(p, (x,), z, budget) is not None and \
           class_leq(p, (y,), z, budget) is not None:
            commons.append(z)
    minimal = []
    for z in commons:
        if any(w != z and class_leq(p, w, z, budget) is not None for w in commons):
            continue
        minimal.append(z)
    return minimal
