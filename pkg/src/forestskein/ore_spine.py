"""Ore certification, spine computation, F-infinity certificates, and the
monochromatic-pair family of presentations.

Ore's property is certified three ways, in decreasing strength:

  * closed generator family: every pair of distinct colours shares one
    length-two relation, so the elementary generators are closed under
    reversing and common multiples always exist;
  * cofinal monochromatic tree: a tree t whose class contains an
    all-one-colour representative for every colour absorbs every tree into
    its iterates (attach a copy of t at each leaf, repeatedly), giving a
    cofinal sequence; a bounded absorption check replays the argument;
  * bounded evidence: every small pair of trees gets a common upper bound
    within a search bound.  Never reported as proved.

The spine starts from the one-caret classes and repeatedly takes minimal
common multiples of distinct members.  A finite spine combined with
left-cancellativity and Ore's property yields the F-infinity certificate,
which covers the plain, cyclic, symmetric, and braided fraction groups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import OracleBudget, ReversingBudget, SearchBounds, SpineBounds
from .forest import (
    Tree,
    caret,
    caret_count,
    compose,
    forest_from_word,
    leaf_count,
    render_tree,
    tree_colours,
    tree_key,
    word_from_tree,
)
from .presentation import PresentationError, SkeinPresentation
from . import fractions, oracle, reversing


@dataclass
class OreCertificate:
    kind: str                    # closed_family | cofinal_monochromatic | bounded_evidence
    confidence: str              # proved | evidence
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "confidence": self.confidence, "data": self.data}


@dataclass
class OreSearch:
    verdict: str                 # proved | evidence | refuted | unknown
    certificate: OreCertificate | None
    failures: list = field(default_factory=list)
    bounds: dict = field(default_factory=dict)


def _join_word(p, u, v, budget):
    """Word of a common multiple u(u\\v) of positive words u, v, or None."""
    out = reversing.reverse(
        p,
        reversing.inverse_word(reversing.positive_word(u))
        + reversing.positive_word(v),
        budget,
    )
    if out.terminated:
        return tuple(u) + out.result[0]
    return None


def iterate_tree(t: Tree, depth: int) -> Tree:
    """t_1 = t, t_{k+1} = t_k with a copy of t attached at every leaf."""
    out = t
    for _ in range(depth - 1):
        out = compose((out,), (t,) * leaf_count(out))[0]
    return out


def _monochromatic_candidate(p: SkeinPresentation, budget, oracle_budget):
    """A tree whose class contains an all-c representative for each colour c.

    Built as the iterated join of the colour carets; checked against the
    saturated stratum, which also yields the per-colour representatives.
    """
    word = ((p.colours[0], 1),)
    for c in p.colours[1:]:
        word = _join_word(p, word, ((c, 1),), budget)
        if word is None:
            return None, {}
    t = forest_from_word(word, 1)[0]
    try:
        table = oracle.saturate(p, 1, caret_count(t), oracle_budget)
    except oracle.BudgetExceeded:
        return t, {}
    mono = {}
    for member in table.members((t,)):
        cols = tree_colours(member[0])
        if len(cols) == 1:
            mono.setdefault(next(iter(cols)), member[0])
    return t, mono


def cofinal_search(p: SkeinPresentation,
                   bound: int | None = None,
                   iterate_depth: int | None = None,
                   budget: ReversingBudget | None = None,
                   oracle_budget: OracleBudget | None = None) -> OreSearch:
    defaults = SearchBounds()
    bound = bound or defaults.absorption_bound
    iterate_depth = iterate_depth or defaults.iterate_depth
    budget = budget or ReversingBudget()
    bounds = {"absorption_bound": bound, "iterate_depth": iterate_depth}

    closed = reversing.ore_via_closed_family(p, budget)
    if closed.verdict == "yes":
        return OreSearch("proved",
                         OreCertificate("closed_family", "proved",
                                        closed.detail | {"criterion": closed.criterion}),
                         bounds=bounds)

    if reversing.is_complete(p, budget).verdict == "complete":
        t, mono = _monochromatic_candidate(p, budget, oracle_budget)
        if t is not None:
            # t is a common multiple of every colour caret by construction;
            # a monochromatic representative of its class in every colour is
            # what makes the iterated-attachment sequence cofinal, so those
            # two exact facts prove Ore and the absorption run replays it
            absorbed, tested = _absorption_check(p, t, bound, iterate_depth,
                                                 budget, oracle_budget)
            data = {
                "base_tree": render_tree(t),
                "monochromatic_representatives":
                    {c: render_tree(m) for c, m in mono.items()},
                "trees_absorbed": tested,
                "absorption_replay": "ok" if absorbed else "bound exhausted",
            }
            if set(mono) == set(p.colours):
                return OreSearch("proved",
                                 OreCertificate("cofinal_monochromatic", "proved", data),
                                 bounds=bounds)
            if absorbed:
                return OreSearch("evidence",
                                 OreCertificate("cofinal_monochromatic", "evidence", data),
                                 bounds=bounds)

    pair_bound = min(defaults.ore_pair_bound, bound)
    try:
        report = oracle.check_ore_bounded(p, pair_bound, defaults.ore_search_bound,
                                          oracle_budget)
    except oracle.BudgetExceeded:
        return OreSearch("unknown", None, bounds=bounds)
    bounds |= {"pair_bound": report.pair_bound, "search_bound": report.search_bound}
    if report.failures:
        # bounded failure is a genuine refutation only in the free case,
        # where classes are singletons and divisibility is structural
        verdict = "refuted" if not p.relations else "unknown"
        return OreSearch(verdict, None, failures=report.failures, bounds=bounds)
    return OreSearch("evidence",
                     OreCertificate("bounded_evidence", "evidence",
                                    {"pairs_checked": report.pairs_checked}),
                     failures=[], bounds=bounds)


def _absorption_check(p, t, bound, depth, budget, oracle_budget):
    """Every class representative with <= bound carets divides some iterate of t."""
    iterates = [word_from_tree(iterate_tree(t, d)) for d in range(1, depth + 1)]
    # iterate words carry large indices, so widen the reversing ceiling
    top = max(i for w in iterates for _, i in w)
    wide = ReversingBudget(steps=max(budget.steps, 50 * len(iterates[-1])),
                           index_ceiling=max(budget.index_ceiling, 2 * top + 8),
                           branch_cap=budget.branch_cap)
    try:
        table = oracle.saturate(p, 1, bound, oracle_budget)
        reps = [cls[0][0] for cls in table.classes]
    except oracle.BudgetExceeded:
        reps = list(caret(c) for c in p.colours)
    tested = 0
    for s in reps:
        if s is None:
            continue
        ws = word_from_tree(s)
        if not any(reversing.left_divides(p, ws, it, wide) == "yes"
                   for it in iterates if len(it) >= len(ws)):
            return False, tested
        tested += 1
    return True, tested


# ---------------------------------------------------------------------------
# Spine

@dataclass
class SpineReport:
    stages: list                  # lists of tree representatives
    stabilized: bool
    caret_bound: int
    stage_bound: int
    strategy: str                 # exact | reversing-evidence
    lc_warning: str | None = None
    bound_hit: bool = False

    @property
    def classes(self) -> list:
        out: list = []
        for stage in self.stages:
            out.extend(stage)
        return out

    @property
    def size(self) -> int:
        return len(self.classes)


def _mcm_trees(p: SkeinPresentation, x: Tree, y: Tree, caret_bound: int,
               budget, oracle_budget) -> list:
    """Minimal common multiples of two tree classes, as tree representatives."""
    wx, wy = word_from_tree(x), word_from_tree(y)
    if fractions.uses_reversing(p):
        w = _join_word(p, wx, wy, budget)
        if w is None or len(w) > caret_bound:
            return []
        return [forest_from_word(w, 1)[0]]
    # explore every reversal branch; each terminating branch is a common
    # multiple, minimality is filtered by divisibility
    out = reversing.reverse(
        p,
        reversing.inverse_word(reversing.positive_word(wx))
        + reversing.positive_word(wy),
        budget,
    )
    results = out.branches or ([out.result] if out.terminated else [])
    candidates = []
    for res in results:
        if res is None:
            continue
        w = tuple(wx) + res[0]
        if len(w) <= caret_bound:
            z = forest_from_word(w, 1)[0]
            if not any(reversing.words_equal(p, word_from_tree(z), word_from_tree(c),
                                             budget) == "yes" for c in candidates):
                candidates.append(z)
    minimal = []
    for z in candidates:
        wz = word_from_tree(z)
        dominated = False
        for other in candidates:
            if other is z:
                continue
            wo = word_from_tree(other)
            if len(wo) < len(wz) and reversing.left_divides(p, wo, wz, budget) == "yes":
                dominated = True
                break
        if not dominated:
            minimal.append(z)
    return minimal


def _dedupe(p, trees, budget) -> list:
    out: list = []
    for t in trees:
        if not any(leaf_count(t) == leaf_count(u)
                   and reversing.words_equal(p, word_from_tree(t), word_from_tree(u),
                                             budget) == "yes"
                   for u in out):
            out.append(t)
    rank = p.colour_rank
    out.sort(key=lambda t: tree_key(t, rank))
    return out


def _same_stage(p, a, b, budget) -> bool:
    if len(a) != len(b):
        return False
    if sorted(map(caret_count, a)) != sorted(map(caret_count, b)):
        return False
    return all(any(reversing.words_equal(p, word_from_tree(x), word_from_tree(y),
                                         budget) == "yes" for y in b) for x in a)


def spine(p: SkeinPresentation,
          caret_bound: int | None = None,
          stage_bound: int | None = None,
          budget: ReversingBudget | None = None,
          oracle_budget: OracleBudget | None = None) -> SpineReport:
    defaults = SpineBounds()
    caret_bound = caret_bound or defaults.caret_bound
    stage_bound = stage_bound or defaults.stage_bound
    budget = budget or ReversingBudget()

    lc = reversing.decide_left_cancellative(p, budget)
    warning = None if lc.verdict == "yes" else \
        f"left-cancellativity is {lc.verdict}; spine classes may be unreliable"
    strategy = "exact" if fractions.uses_reversing(p) else "reversing-evidence"

    stage = _dedupe(p, [caret(c) for c in p.colours], budget)
    stages = [stage]
    stabilized = False
    bound_hit = False
    for _ in range(stage_bound):
        nxt: list = []
        cur = stages[-1]
        for i, x in enumerate(cur):
            for y in cur[i + 1:]:
                nxt.extend(_mcm_trees(p, x, y, caret_bound, budget, oracle_budget))
        nxt = _dedupe(p, nxt, budget)
        if not nxt:
            stabilized = True
            break
        if any(_same_stage(p, nxt, old, budget) for old in stages):
            stabilized = True
            break
        if max(caret_count(t) for t in nxt) >= caret_bound:
            bound_hit = True
            stages.append(nxt)
            break
        stages.append(nxt)
    report = SpineReport(stages, stabilized, caret_bound, stage_bound,
                         strategy, warning, bound_hit)
    return report


def spine_classes_deduped(p: SkeinPresentation, report: SpineReport,
                          budget: ReversingBudget | None = None) -> list:
    all_trees: list = []
    for stage in report.stages:
        all_trees.extend(stage)
    return _dedupe(p, all_trees, budget or ReversingBudget())


# ---------------------------------------------------------------------------
# F-infinity

FINITE_SPINE_FACT = (
    "a left-cancellative forest category with directed tree order and finite "
    "spine has fraction groups of type F-infinity, in the plain, cyclic, "
    "symmetric, and braided versions alike"
)


@dataclass
class FInfinityCertificate:
    spine_size: int
    spine_classes: list
    lc_criterion: str
    ore_kind: str
    covers: tuple = ("F", "T", "V", "BV")
    theorem_citation: str = FINITE_SPINE_FACT

    def to_json(self) -> dict:
        return {
            "property": "type F-infinity",
            "verdict": "proved",
            "kind": "finite-spine",
            "witness": {
                "spine_size": self.spine_size,
                "spine": [render_tree(t) for t in self.spine_classes],
                "lc_criterion": self.lc_criterion,
                "ore_kind": self.ore_kind,
            },
            "covers": list(self.covers),
            "theorem_citation": self.theorem_citation,
        }


def f_infinity_certificate(p: SkeinPresentation,
                           spine_report: SpineReport | None = None,
                           ore: OreSearch | None = None,
                           budget: ReversingBudget | None = None,
                           oracle_budget: OracleBudget | None = None):
    """Certificate that the fraction groups are of type F-infinity, or None.

    Needs left-cancellativity, an Ore certificate stronger than bounded
    evidence, and a stabilized finite spine.
    """
    budget = budget or ReversingBudget()
    lc = reversing.decide_left_cancellative(p, budget)
    if lc.verdict != "yes":
        return None
    ore = ore or cofinal_search(p, budget=budget, oracle_budget=oracle_budget)
    if ore.verdict != "proved" or ore.certificate is None:
        return None
    spine_report = spine_report or spine(p, budget=budget, oracle_budget=oracle_budget)
    if not spine_report.stabilized:
        return None
    classes = spine_classes_deduped(p, spine_report, budget)
    return FInfinityCertificate(
        spine_size=len(classes),
        spine_classes=classes,
        lc_criterion=lc.criterion,
        ore_kind=ore.certificate.kind,
    )


# ---------------------------------------------------------------------------
# The monochromatic-pair construction

def recolour(t: Tree, colour: str) -> Tree:
    if t is None:
        return None
    return (colour, recolour(t[1], colour), recolour(t[2], colour))


@dataclass
class FTauResult:
    presentation: SkeinPresentation
    lc: reversing.Certificate
    ore: OreSearch
    spine_report: SpineReport
    f_infinity: FInfinityCertificate | None


def build_f_tau(tau: dict, name: str = "",
                budget: ReversingBudget | None = None,
                oracle_budget: OracleBudget | None = None) -> FTauResult:
    """Presentation with relations (recoloured tau_ref = recoloured tau_b).

    tau maps colour names to monochromatic tree shapes, all with the same
    leaf count; the reference colour is the first key.  The construction is
    always left-cancellative and Ore with spine inside {colours} + one tree;
    the returned certificates replay those facts with bounded checks.
    """
    if not tau:
        raise PresentationError("tau needs at least one colour")
    shapes = list(tau.items())
    for colour, shape in shapes:
        if shape is None:
            raise PresentationError(f"tau[{colour}] must be a nontrivial tree")
        if len(tree_colours(shape)) > 1:
            raise PresentationError(f"tau[{colour}] must be monochromatic")
    leaves = {leaf_count(shape) for _, shape in shapes}
    if len(leaves) != 1:
        raise PresentationError(f"tau trees must share a leaf count, got {sorted(leaves)}")
    colours = tuple(c for c, _ in shapes)
    ref_colour, ref_shape = shapes[0]
    if leaf_count(ref_shape) == 2:
        # two-leaf shapes identify all colours with the reference caret;
        # the category is the free monochromatic one
        relations = tuple((caret(ref_colour), caret(b)) for b, _ in shapes[1:])
    else:
        lhs = recolour(ref_shape, ref_colour)
        relations = tuple((lhs, recolour(shape, b)) for b, shape in shapes[1:])
    p = SkeinPresentation(colours, relations, name or "f_tau")
    lc = reversing.decide_left_cancellative(p, budget)
    ore = cofinal_search(p, budget=budget, oracle_budget=oracle_budget)
    report = spine(p, budget=budget, oracle_budget=oracle_budget)
    cert = f_infinity_certificate(p, report, ore, budget, oracle_budget)
    return FTauResult(p, lc, ore, report, cert)
