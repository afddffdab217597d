"""Fraction-group arithmetic: pairs [t, s] of equal-arity trees modulo common growth.

Multiplication needs Ore witnesses: forests p, p' growing two trees into a
common congruence class.  Two interchangeable strategies provide them:

  * reversing, when the presentation is complemented and complete — the
    complement (s\\s', s'\\s) is a witness pair and equality of trees is
    decided by reversing a quotient word to the empty word;
  * the congruence oracle, by scanning saturated strata for a common upper
    bound.  Exact but bounded; the two strategies are cross-checked in the
    test suite.

Witness searches are semidecidable, so a bound exhaustion surfaces as the
`Unresolved` exception rather than a false answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config import OracleBudget, ReversingBudget, SearchBounds
from .forest import (
    LEAF,
    Forest,
    Tree,
    caret_count,
    compose,
    elementary,
    forest_from_word,
    leaf_count,
    render_tree,
    tree_key,
    word_from_tree,
)
from .presentation import SkeinPresentation
from . import oracle, reversing


class Unresolved(RuntimeError):
    """A witness search exhausted its bound; not a mathematical verdict."""


@dataclass(frozen=True)
class GroupElement:
    numerator: Tree
    denominator: Tree
    presentation: SkeinPresentation

    def __post_init__(self):
        if leaf_count(self.numerator) != leaf_count(self.denominator):
            raise ValueError("fraction sides must have equal leaf counts")

    def render(self) -> str:
        return f"[{render_tree(self.numerator)} ; {render_tree(self.denominator)}]"

    @property
    def carets(self) -> int:
        return caret_count(self.numerator)


def identity(p: SkeinPresentation) -> GroupElement:
    return GroupElement(LEAF, LEAF, p)


def invert(g: GroupElement) -> GroupElement:
    return GroupElement(g.denominator, g.numerator, g.presentation)


_fast_path: dict = {}


def uses_reversing(p: SkeinPresentation) -> bool:
    """Complemented + complete presentations get the reversing fast path."""
    cached = _fast_path.get(p)
    if cached is None:
        from .presentation import is_complemented
        cached = is_complemented(p) and reversing.is_complete(p).verdict == "complete"
        _fast_path[p] = cached
    return cached


def trees_equivalent(p: SkeinPresentation, t: Tree, s: Tree, bound: int,
                     rev_budget: ReversingBudget | None = None) -> bool:
    if leaf_count(t) != leaf_count(s):
        return False
    if t == s:
        return True
    if uses_reversing(p):
        ans = reversing.words_equal(p, word_from_tree(t), word_from_tree(s), rev_budget)
        if ans == "unknown":
            raise Unresolved("tree equivalence check exceeded the reversing budget")
        return ans == "yes"
    if caret_count(t) > bound:
        raise Unresolved(f"trees with {caret_count(t)} carets exceed the oracle bound {bound}")
    return oracle.equivalent(p, (t,), (s,))


def common_multiple_witness(p: SkeinPresentation, t: Tree, s: Tree, bound: int,
                            rev_budget: ReversingBudget | None = None) -> tuple:
    """Forests (f, f') with t . f ~ s . f', or raise Unresolved."""
    if uses_reversing(p):
        out = reversing.reverse(
            p,
            reversing.inverse_word(reversing.positive_word(word_from_tree(t)))
            + reversing.positive_word(word_from_tree(s)),
            rev_budget,
        )
        if out.terminated:
            f = forest_from_word(out.result[0], leaf_count(t))
            f2 = forest_from_word(out.result[1], leaf_count(s))
            return f, f2
        if out.status == "blocked":
            raise Unresolved("no common multiple: reversal blocked (Ore fails here)")
        raise Unresolved("witness reversal exceeded its budget")
    base = max(caret_count(t), caret_count(s))
    for k in range(base, bound + 1):
        try:
            table = oracle.saturate(p, 1, k)
        except oracle.BudgetExceeded:
            break
        for cls in table.classes:
            z = cls[0]
            if caret_count(z[0]) != k:
                continue
            f = oracle.class_leq(p, (t,), z)
            if f is None:
                continue
            f2 = oracle.class_leq(p, (s,), z)
            if f2 is not None:
                return f, f2
    raise Unresolved(f"no common multiple of {render_tree(t)} and {render_tree(s)} "
                     f"within caret bound {bound}")


def multiply(g: GroupElement, h: GroupElement, bound: int | None = None) -> GroupElement:
    if g.presentation is not h.presentation and g.presentation != h.presentation:
        raise ValueError("elements live over different presentations")
    bound = bound or SearchBounds().fraction_bound
    f, f2 = common_multiple_witness(g.presentation, g.denominator, h.numerator, bound)
    return GroupElement(
        compose((g.numerator,), f)[0],
        compose((h.denominator,), f2)[0],
        g.presentation,
    )


def equals(g: GroupElement, h: GroupElement, bound: int | None = None):
    """True / False / None(unknown) under fraction equivalence."""
    if g.presentation != h.presentation:
        raise ValueError("elements live over different presentations")
    bound = bound or SearchBounds().fraction_bound
    p = g.presentation
    try:
        f, f2 = common_multiple_witness(p, g.denominator, h.denominator, bound)
        num_g = compose((g.numerator,), f)[0]
        num_h = compose((h.numerator,), f2)[0]
        return trees_equivalent(p, num_g, num_h, bound)
    except Unresolved:
        return None


def is_identity(g: GroupElement, bound: int | None = None):
    bound = bound or SearchBounds().fraction_bound
    try:
        return trees_equivalent(g.presentation, g.numerator, g.denominator, bound)
    except Unresolved:
        return None


# ---------------------------------------------------------------------------
# Normal form: minimal pair reachable by stripping common carets, with
# class rewrites interleaved when the strata are small enough to saturate.

def _prunable(t: Tree) -> list:
    """(leaf position, colour) of carets whose children are both leaves."""
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


def _strip(t: Tree, pos: int) -> Tree:
    """Remove the prunable caret whose leaves sit at (pos, pos+1)."""
    def walk(node, start):
        if node is None:
            return None, start + 1
        c, l, r = node
        if l is None and r is None and start == pos:
            return LEAF, start + 2
        nl, mid = walk(l, start)
        nr, end = walk(r, mid)
        return (c, nl, nr), end
    new, _ = walk(t, 1)
    return new


def normal_form(g: GroupElement, bound: int | None = None,
                oracle_budget: OracleBudget | None = None) -> GroupElement:
    """Minimal-caret representative pair; ties broken by canonical word order.

    Explores every pair reachable by rewriting either side inside its
    congruence class and stripping common carets, and takes the least.
    Strata too large to saturate fall back to structural stripping only, in
    which case the result may not be globally minimal.
    """
    p = g.presentation
    budget = oracle_budget or OracleBudget()
    rank = p.colour_rank
    seen = set()
    start = (g.numerator, g.denominator)
    frontier = [start]
    seen.add(start)
    best = start

    def key(pair):
        return (caret_count(pair[0]), tree_key(pair[0], rank), tree_key(pair[1], rank))

    while frontier:
        t, s = frontier.pop()
        if key((t, s)) < key(best):
            best = (t, s)
        variants = [(t, s)]
        if caret_count(t) <= budget.caret_cap and p.relations:
            try:
                tab = oracle.saturate(p, 1, caret_count(t), budget)
                variants = [(tv[0], sv[0])
                            for tv in tab.members((t,)) for sv in tab.members((s,))]
            except oracle.BudgetExceeded:
                pass
        for tv, sv in variants:
            pair = (tv, sv)
            if pair not in seen:
                seen.add(pair)
                frontier.append(pair)
            strip_t = dict(_prunable(tv))
            for pos, colour in _prunable(sv):
                if strip_t.get(pos) == colour:
                    reduced = (_strip(tv, pos), _strip(sv, pos))
                    if reduced not in seen:
                        seen.add(reduced)
                        frontier.append(reduced)
    return GroupElement(best[0], best[1], p)


# ---------------------------------------------------------------------------
# The vine-based evaluation of group-presentation words.

def right_vine(p: SkeinPresentation, colour: str, leaves: int) -> Tree:
    """t_n = a_{1,1} a_{2,2} ... a_{n-1,n-1}, the right vine with `leaves` leaves."""
    t = (LEAF,)
    for n in range(1, leaves):
        t = compose(t, elementary(colour, n, n))
    return t[0]


def generator_element(p: SkeinPresentation, base_colour: str, colour: str,
                      index: int, hatted: bool) -> GroupElement:
    """b_j -> [t_{j+1} b_{j,j+1}, t_{j+2}];  b^_j -> [t_j b_{j,j}, t_{j+1}]."""
    j = index
    if hatted:
        num = compose((right_vine(p, base_colour, j),), elementary(colour, j, j))[0]
        return GroupElement(num, right_vine(p, base_colour, j + 1), p)
    num = compose((right_vine(p, base_colour, j + 1),), elementary(colour, j, j + 1))[0]
    return GroupElement(num, right_vine(p, base_colour, j + 2), p)


def word_to_element(letters, base_colour: str, p: SkeinPresentation,
                    bound: int | None = None) -> GroupElement:
    """Evaluate a signed word of (colour, index, hatted, sign) letters in G."""
    bound = bound or SearchBounds().fraction_bound
    out = identity(p)
    for colour, index, hatted, sign in letters:
        if colour not in p.colours:
            raise ValueError(f"unknown colour {colour!r}")
        e = generator_element(p, base_colour, colour, index, hatted)
        if sign < 0:
            e = invert(e)
        out = multiply(out, e, bound)
    return out
