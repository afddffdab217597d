"""The canonical totally ordered set of tree-with-leaf classes and its action.

A point is a class [t, j] of a tree with a distinguished leaf, modulo
growth: (t, j) ~ (t . f, j^f) where j^f is the first leaf of the j-th block
of f.  Points are stored in normal form, the least representative reachable
by pruning carets away from the distinguished leaf and rewriting inside the
congruence class.  Comparison grows two points onto a common tree and
compares leaf indices; the result is growth-invariant.

Group elements with a permutation layer act on points.  Permutations are
stored bottom-to-top: perm[i] is the strand position above slot i+1.  The
defining case is act((s, pi, t), [t, j]) = [s, pi(j)]; the general case
grows the triple, pushing the permutation through the growth forest with
the block exchange implemented by `zappa_szep`.  Products compose the
permutation parts as functions, making `act` a left action.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .config import OracleBudget, SearchBounds
from .forest import (
    Forest,
    Tree,
    caret_count,
    compose,
    leaf_count,
    leaf_starts,
    parse_tree,
    random_tree,
    render_tree,
    tree_key,
    trees_with_carets,
)
from .presentation import SkeinPresentation
from . import fractions, oracle

Perm = tuple


def identity_perm(n: int) -> Perm:
    return tuple(range(1, n + 1))


def rotation(n: int, k: int) -> Perm:
    """i -> i + k (mod n), as a bottom-to-top strand map."""
    return tuple((i - 1 + k) % n + 1 for i in range(1, n + 1))


def is_rotation(perm: Perm) -> bool:
    n = len(perm)
    k = perm[0] - 1
    return all(perm[i] == (i + k) % n + 1 for i in range(n))


def compose_perms(alpha: Perm, beta: Perm) -> Perm:
    """(alpha . beta)(i) = alpha(beta(i)) — apply beta first."""
    return tuple(alpha[b - 1] for b in beta)


def invert_perm(perm: Perm) -> Perm:
    out = [0] * len(perm)
    for i, v in enumerate(perm, start=1):
        out[v - 1] = i
    return tuple(out)


def leaf_image(f: Forest, j: int) -> int:
    """j^f: the first leaf of the j-th block after growing by f."""
    starts = leaf_starts(f)
    return starts[j - 1] + 1


def zappa_szep(perm: Perm, f: Forest) -> tuple:
    """(f^tau, tau^f) with tau . f = f^tau . tau^f as diagrams.

    f^tau lists the trees of f in permuted order, (f^tau)_i = f_{tau(i)};
    tau^f is the induced block bijection sending the leaves of (f^tau)_i
    order-preservingly onto the leaves of block tau(i) of f.
    """
    n = len(f)
    if len(perm) != n:
        raise ValueError(f"permutation on {len(perm)} strands against {n} roots")
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError("not a bijection")
    f_tau = tuple(f[perm[i] - 1] for i in range(n))
    starts_f = leaf_starts(f)
    starts_ft = leaf_starts(f_tau)
    out = [0] * sum(leaf_count(t) for t in f)
    for i in range(n):
        width = leaf_count(f_tau[i])
        for o in range(width):
            out[starts_ft[i] + o] = starts_f[perm[i] - 1] + o + 1
    return f_tau, tuple(out)


def _push_through(perm: Perm, f: Forest) -> tuple:
    """(f shuffled so block j lands at slot perm(j), the induced leaf map).

    Growing a triple (s, perm, t) by f on the denominator side grows the
    numerator by the shuffled forest g with g_{perm(j)} = f_j; the new
    permutation maps block j of f onto block perm(j) of g, order-preserved.
    """
    n = len(f)
    inv = invert_perm(perm)
    g = tuple(f[inv[i] - 1] for i in range(n))
    starts_f = leaf_starts(f)
    starts_g = leaf_starts(g)
    out = [0] * sum(leaf_count(t) for t in f)
    for j in range(n):
        width = leaf_count(f[j])
        for o in range(width):
            out[starts_f[j] + o] = starts_g[perm[j] - 1] + o + 1
    return g, tuple(out)


# ---------------------------------------------------------------------------
# Points

@dataclass(frozen=True)
class OrderedPoint:
    tree: Tree
    leaf: int
    presentation: SkeinPresentation

    def render(self) -> str:
        return f"{render_tree(self.tree)}:{self.leaf}"


def _prunable_sites(t: Tree) -> list:
    """(first leaf position, colour) of carets with two leaf children."""
    out = []

    def walk(node, start):
        if node is None:
            return start + 1
        c, l, r = node
        if l is None and r is None:
            out.append((start, c))
            return start + 2
        mid = walk(l, start)
        return walk(r, mid)

    walk(t, 1)
    return out


def _strip_site(t: Tree, pos: int) -> Tree:
    def walk(node, start):
        if node is None:
            return None, start + 1
        c, l, r = node
        if l is None and r is None and start == pos:
            return None, start + 2
        nl, mid = walk(l, start)
        nr, end = walk(r, mid)
        return (c, nl, nr), end

    new, _ = walk(t, 1)
    return new


def raw_points_equal(p: SkeinPresentation, a: tuple, b: tuple,
                     bound: int | None = None) -> Optional[bool]:
    """Equality of raw (tree, leaf) pairs as points, via a common growth.

    On complemented complete presentations the witness is the minimal
    common multiple and growth maps are injective on leaf indices, so index
    agreement there decides equality exactly.
    """
    bound = bound or SearchBounds().fraction_bound
    try:
        f, f2 = fractions.common_multiple_witness(p, a[0], b[0], bound)
    except fractions.Unresolved:
        return None
    return leaf_image(f, a[1]) == leaf_image(f2, b[1])


def _shrink_point(p: SkeinPresentation, t: Tree, j: int,
                  budget: OracleBudget) -> tuple:
    """Descend by pruning and in-class rewriting; least pair reached."""
    rank = p.colour_rank
    seen = {(t, j)}
    frontier = [(t, j)]
    best = (t, j)

    def key(pair):
        return (caret_count(pair[0]), tree_key(pair[0], rank), pair[1])

    while frontier:
        cur_t, cur_j = frontier.pop()
        if key((cur_t, cur_j)) < key(best):
            best = (cur_t, cur_j)
        variants = [cur_t]
        if p.relations and caret_count(cur_t) <= budget.caret_cap:
            try:
                table = oracle.saturate(p, 1, caret_count(cur_t), budget)
                variants = [m[0] for m in table.members((cur_t,))]
            except oracle.BudgetExceeded:
                pass
        for v in variants:
            pair = (v, cur_j)
            if pair not in seen:
                seen.add(pair)
                frontier.append(pair)
            for pos, _colour in _prunable_sites(v):
                if cur_j == pos + 1:
                    continue          # the distinguished leaf is the right leaf
                nj = cur_j if cur_j <= pos else cur_j - 1
                reduced = (_strip_site(v, pos), nj)
                if reduced not in seen:
                    seen.add(reduced)
                    frontier.append(reduced)
    return best


_EXACT_SCAN_CAP = 6


def normalize_point(p: SkeinPresentation, t: Tree, j: int,
                    oracle_budget: OracleBudget | None = None) -> OrderedPoint:
    """The least (carets, canonical word, leaf) representative of the class.

    Pruning and in-class rewriting shrink the pair first.  On complemented
    complete presentations the result is then made canonical by scanning
    candidate trees in key order and taking the first pair that is
    point-equal, which the reversing join decides exactly; elsewhere the
    shrunken pair is returned (descents can miss representatives reachable
    only through a detour, so it is canonical only up to that caveat).
    """
    if not 1 <= j <= leaf_count(t):
        raise ValueError(f"leaf {j} out of range 1..{leaf_count(t)}")
    budget = oracle_budget or OracleBudget()
    best_t, best_j = _shrink_point(p, t, j, budget)
    k = caret_count(best_t)
    if k == 0 or not fractions.uses_reversing(p) or k > _EXACT_SCAN_CAP:
        return OrderedPoint(best_t, best_j, p)
    rank = p.colour_rank
    for carets in range(k + 1):
        for cand in sorted(trees_with_carets(p.colours, carets),
                           key=lambda s: tree_key(s, rank)):
            if carets == k and tree_key(cand, rank) > tree_key(best_t, rank):
                break
            for leaf in range(1, leaf_count(cand) + 1):
                if (cand, leaf) == (best_t, best_j):
                    return OrderedPoint(best_t, best_j, p)
                if raw_points_equal(p, (cand, leaf), (best_t, best_j)) is True:
                    return OrderedPoint(cand, leaf, p)
    return OrderedPoint(best_t, best_j, p)


def grow_point(p: SkeinPresentation, x: OrderedPoint, f: Forest) -> tuple:
    """Raw grown representative (tree, leaf) of x under f; not normalized."""
    if len(f) != leaf_count(x.tree):
        raise ValueError("growth forest root count must match the leaf count")
    return compose((x.tree,), f)[0], leaf_image(f, x.leaf)


def point(p: SkeinPresentation, text: str) -> OrderedPoint:
    """Parse `tree-literal:leaf` into a normalized point."""
    tree_text, _, leaf_text = text.rpartition(":")
    return normalize_point(p, parse_tree(tree_text), int(leaf_text))


def compare(x: OrderedPoint, y: OrderedPoint, bound: int | None = None) -> Optional[str]:
    """'LT' | 'EQ' | 'GT', or None when no common growth is found in bound."""
    if x.presentation != y.presentation:
        raise ValueError("points live over different presentations")
    bound = bound or SearchBounds().fraction_bound
    try:
        f, f2 = fractions.common_multiple_witness(
            x.presentation, x.tree, y.tree, bound)
    except fractions.Unresolved:
        return None
    a = leaf_image(f, x.leaf)
    b = leaf_image(f2, y.leaf)
    return "LT" if a < b else "GT" if a > b else "EQ"


# ---------------------------------------------------------------------------
# Elements with a permutation layer

@dataclass(frozen=True)
class PermutationElement:
    numerator: Tree
    perm: Perm
    denominator: Tree
    presentation: SkeinPresentation

    def __post_init__(self):
        n = leaf_count(self.numerator)
        if leaf_count(self.denominator) != n or len(self.perm) != n:
            raise ValueError("leaf counts and permutation width must agree")
        if sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError("not a bijection")

    @property
    def flavour(self) -> str:
        if self.perm == identity_perm(len(self.perm)):
            return "F"
        return "T" if is_rotation(self.perm) else "V"

    def render(self) -> str:
        return (f"[{render_tree(self.numerator)} ; "
                f"({','.join(map(str, self.perm))}) ; "
                f"{render_tree(self.denominator)}]")


def from_fraction(g: fractions.GroupElement) -> PermutationElement:
    return PermutationElement(
        g.numerator, identity_perm(leaf_count(g.numerator)),
        g.denominator, g.presentation)


def perm_identity(p: SkeinPresentation) -> PermutationElement:
    return PermutationElement(None, (1,), None, p)


def perm_invert(g: PermutationElement) -> PermutationElement:
    return PermutationElement(g.denominator, invert_perm(g.perm),
                              g.numerator, g.presentation)


def _grow_triple(g: PermutationElement, f: Forest) -> PermutationElement:
    """Grow the denominator by f, shuffling f onto the numerator side."""
    shuffled, lifted = _push_through(g.perm, f)
    return PermutationElement(
        compose((g.numerator,), shuffled)[0],
        lifted,
        compose((g.denominator,), f)[0],
        g.presentation,
    )


def perm_multiply(g: PermutationElement, h: PermutationElement,
                  bound: int | None = None) -> PermutationElement:
    """g . h, applying h first; permutation parts compose as functions."""
    if g.presentation != h.presentation:
        raise ValueError("elements live over different presentations")
    bound = bound or SearchBounds().fraction_bound
    p, q = fractions.common_multiple_witness(
        g.presentation, g.denominator, h.numerator, bound)
    g2 = _grow_triple(g, p)
    # grow h's numerator by q: pick f with its shuffle equal to q
    f = tuple(q[h.perm[j] - 1] for j in range(len(q)))
    h2 = _grow_triple(h, f)
    return PermutationElement(
        g2.numerator,
        compose_perms(g2.perm, h2.perm),
        h2.denominator,
        g.presentation,
    )


def act(g: PermutationElement, x: OrderedPoint,
        bound: int | None = None) -> OrderedPoint:
    """Left action on points: act((s, pi, t), [t, j]) = [s, pi(j)], extended
    by growing the triple along an Ore witness.  Raises Unresolved when no
    witness fits the bound."""
    if g.presentation != x.presentation:
        raise ValueError("element and point live over different presentations")
    bound = bound or SearchBounds().fraction_bound
    p, p2 = fractions.common_multiple_witness(
        g.presentation, x.tree, g.denominator, bound)
    grown = _grow_triple(g, p2)
    j = leaf_image(p, x.leaf)
    return normalize_point(g.presentation, grown.numerator, grown.perm[j - 1])


# ---------------------------------------------------------------------------
# Flavour evidence

@dataclass
class FlavourReport:
    exact: str
    samples: int
    order_violations: list       # sampled chains whose image order broke
    cyclic_violations: list      # sampled chains broken even up to rotation
    unresolved: int

    @property
    def violations(self) -> list:
        """Chains contradicting the exact flavour's guarantee."""
        if self.exact == "F":
            return self.order_violations
        if self.exact == "T":
            return self.cyclic_violations
        return []


def _sample_points(p: SkeinPresentation, rng, count: int, carets: int = 3) -> list:
    out = []
    for _ in range(count):
        t = random_tree(rng, p.colours, rng.randrange(1, carets + 1))
        out.append(normalize_point(p, t, rng.randrange(1, leaf_count(t) + 1)))
    return out


def flavour_check(g: PermutationElement, rng, sample_bound: int = 20,
                  bound: int | None = None) -> FlavourReport:
    """Exact flavour from the permutation, plus sampled chain evidence.

    Samples ordered chains of points and records which chains break order
    preservation and which break it even up to a cyclic rotation; a chain in
    `violations` refutes the exact flavour's guarantee.
    """
    bound = bound or SearchBounds().fraction_bound
    exact = g.flavour
    order_violations = []
    cyclic_violations = []
    unresolved = 0
    samples = 0
    for _ in range(sample_bound):
        pts = _sample_points(g.presentation, rng, 3)
        try:
            pts.sort(key=_chain_key(pts, bound))
            images = [act(g, x, bound) for x in pts]
        except (fractions.Unresolved, _UnresolvedChain):
            unresolved += 1
            continue
        samples += 1
        order = _chain_order(images, bound)
        if order is None:
            unresolved += 1
            continue
        if order != sorted(order):
            order_violations.append([x.render() for x in pts])
            if not _is_cyclic_shift(order):
                cyclic_violations.append([x.render() for x in pts])
    return FlavourReport(exact, samples, order_violations,
                         cyclic_violations, unresolved)


class _UnresolvedChain(RuntimeError):
    pass


def _chain_key(pts, bound):
    import functools

    def cmp(a, b):
        c = compare(a, b, bound)
        if c is None:
            raise _UnresolvedChain()
        return {"LT": -1, "EQ": 0, "GT": 1}[c]

    return functools.cmp_to_key(cmp)


def _chain_order(images, bound):
    """Rank order of the image points; None when a comparison is unresolved."""
    idx = list(range(len(images)))
    for i in range(len(images)):
        for j in range(i + 1, len(images)):
            if compare(images[i], images[j], bound) is None:
                return None
    import functools

    def cmp(a, b):
        c = compare(images[a], images[b], bound)
        return {"LT": -1, "EQ": 0, "GT": 1}[c]

    return [idx.index(k) for k in sorted(idx, key=functools.cmp_to_key(cmp))]


def _is_cyclic_shift(order) -> bool:
    k = len(order)
    for shift in range(k):
        if all(order[(i + shift) % k] == i for i in range(k)):
            return True
    return False


# ---------------------------------------------------------------------------
# Transitivity and stabilizers

def co_represent(pts, bound: int | None = None) -> tuple:
    """Grow a list of distinct points onto one tree: (tree, marks)."""
    bound = bound or SearchBounds().fraction_bound
    p = pts[0].presentation
    z, marks = pts[0].tree, [pts[0].leaf]
    for x in pts[1:]:
        f, f2 = fractions.common_multiple_witness(p, z, x.tree, bound)
        marks = [leaf_image(f, m) for m in marks]
        z = compose((z,), f)[0]
        marks.append(leaf_image(f2, x.leaf))
    if len(set(marks)) != len(marks):
        raise ValueError("points are not pairwise distinct")
    return z, marks


def _pad_at(p, z: Tree, marks: list, slot: int, extra_leaves: int) -> tuple:
    """Grow z by a vine at leaf `slot`, shifting marks past it."""
    vine = fractions.right_vine(p, p.colours[0], extra_leaves + 1)
    f = tuple(vine if i == slot - 1 else None for i in range(leaf_count(z)))
    new_marks = [m if m <= slot else m + extra_leaves for m in marks]
    return compose((z,), f)[0], new_marks


def transitivity_witness(A, B, bound: int | None = None):
    """A cyclic-flavour element g with g . A = B, verified by act, or None.

    Both sets are co-represented, rotated so their least points sit on leaf
    one, and padded with vines until the mark patterns agree; the witness is
    the composite of the two rotations around the middle fraction.
    """
    bound = bound or SearchBounds().fraction_bound
    if len(A) != len(B) or not A:
        raise ValueError("need equal-size nonempty point sets")
    p = A[0].presentation
    try:
        zA, marksA = co_represent(A, bound)
        zB, marksB = co_represent(B, bound)
        marksA.sort()
        marksB.sort()
        nA, nB = leaf_count(zA), leaf_count(zB)
        cA = PermutationElement(zA, rotation(nA, 1 - marksA[0]), zA, p)
        cB = PermutationElement(zB, rotation(nB, 1 - marksB[0]), zB, p)
        marksA = sorted(rotation(nA, 1 - marksA[0])[m - 1] for m in marksA)
        marksB = sorted(rotation(nB, 1 - marksB[0])[m - 1] for m in marksB)
        guard = 0
        while True:
            guard += 1
            if guard > bound:
                return None
            for q in range(1, len(marksA)):
                delta = marksB[q] - marksA[q]
                if delta > 0:
                    zA, marksA = _pad_at(p, zA, marksA, marksA[q] - 1, delta)
                    break
                if delta < 0:
                    zB, marksB = _pad_at(p, zB, marksB, marksB[q] - 1, -delta)
                    break
            else:
                nA, nB = leaf_count(zA), leaf_count(zB)
                if nA < nB:
                    zA, marksA = _pad_at(p, zA, marksA, nA, nB - nA)
                elif nB < nA:
                    zB, marksB = _pad_at(p, zB, marksB, nB, nA - nB)
                else:
                    break
        middle = PermutationElement(zB, identity_perm(leaf_count(zA)), zA, p)
        g = perm_multiply(perm_invert(cB), perm_multiply(middle, cA, bound), bound)
    except fractions.Unresolved:
        return None
    image = set()
    for x in A:
        y = act(g, x, bound)
        image.add((y.tree, y.leaf))
    if image != {(y.tree, y.leaf) for y in B}:
        return None
    return g


@dataclass
class StabilizerDescription:
    tree: Tree
    k: int
    cyclic: PermutationElement
    presentation: SkeinPresentation

    def points(self) -> list:
        return [normalize_point(self.presentation, self.tree, j)
                for j in range(1, self.k + 1)]


def stabilizer_generators(p: SkeinPresentation, t: Tree) -> StabilizerDescription:
    """Stabilizer data for the point set {[t, 1], ..., [t, k]}, k = leaves of t.

    Fixing elements are t.f.(t.h)^-1 with the leaf profiles of f and h equal
    slot by slot; the cyclic part is t . rho . t^-1 with rho the rotation by
    one.  Use `sample_fixer` for verified random fixing elements.
    """
    k = leaf_count(t)
    cyclic = PermutationElement(t, rotation(k, 1), t, p)
    return StabilizerDescription(t, k, cyclic, p)


def make_fixer(p: SkeinPresentation, t: Tree, f: Forest, h: Forest) -> PermutationElement:
    """t.f.(t.h)^-1 as a plain element; rejects mismatched leaf profiles."""
    if len(f) != leaf_count(t) or len(h) != leaf_count(t):
        raise ValueError("forests must have one tree per leaf of t")
    profile_f = [leaf_count(x) for x in f]
    profile_h = [leaf_count(x) for x in h]
    if profile_f != profile_h:
        raise ValueError(f"leaf profiles differ: {profile_f} vs {profile_h}")
    return from_fraction(fractions.GroupElement(
        compose((t,), f)[0], compose((t,), h)[0], p))


def sample_fixer(p: SkeinPresentation, t: Tree, rng,
                 max_carets: int = 2) -> PermutationElement:
    k = leaf_count(t)
    f, h = [], []
    for _ in range(k):
        leaves = rng.randrange(1, max_carets + 2)
        f.append(random_tree(rng, p.colours, leaves - 1))
        h.append(random_tree(rng, p.colours, leaves - 1))
    return make_fixer(p, t, tuple(f), tuple(h))
