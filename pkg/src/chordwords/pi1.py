"""Loops as traces over the chords of a spanning tree.

A loop is represented only by its trace, the word of chords it runs
through.  Two loops are homotopic iff their traces agree in ``F*``, so
homotopy testing is levelwise reduction; realizability is refuted by
finding long alternations between two far-apart regions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .families import (
    DEFAULT_DEPTH,
    WordFamily,
    eq_up_to,
    family_concat,
    family_inverse,
    star_of,
)
from .graphs import (
    CORE,
    ComponentThread,
    GraphError,
    GraphLevels,
    SubspaceMask,
    TreeLevels,
    components_outside,
    end_threads,
    trivial_end_check,
)
from .verdict import Verdict
from .words import Letter

DEFAULT_RADIUS = 3
DEFAULT_THRESHOLD = 6


class TableMismatch(ValueError):
    pass


@dataclass(frozen=True)
class TraceWord:
    family: WordFamily
    tree: TreeLevels
    mask: SubspaceMask | None = None

    def level(self, n: int) -> tuple[Letter, ...]:
        return self.family.level(n)

    @property
    def graph(self) -> GraphLevels:
        return self.tree.graph


def _same_table(u: TraceWord, v: TraceWord) -> None:
    if u.tree is v.tree:
        return
    a, b = u.tree, v.tree
    default = a._pred is None and b._pred is None
    if not (default and a.graph.name == b.graph.name and a.graph.params == b.graph.params):
        raise TableMismatch("traces read their letters through different chord tables")


def empty_trace(tree: TreeLevels) -> TraceWord:
    return TraceWord(WordFamily.empty(), tree)


def validate_trace(w: TraceWord, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Every letter up to ``depth`` must name a chord of the table."""
    from .graphs import UndiscoveredChord

    for n in range(depth + 1):
        for a in w.level(n):
            try:
                w.tree.chord(a.index)
            except UndiscoveredChord:
                return Verdict("ViolationAt", depth=depth, level=n, witness=str(a), detail={"reason": "unknown chord"})
    return Verdict("CoherentUpTo", depth=depth)


def _require(g: GraphLevels, *names: str) -> None:
    if g.name not in names:
        raise GraphError(f"expected graph family {' or '.join(names)}, got {g.name}")


def ladder_loop_trace(g: GraphLevels, tree: TreeLevels | None = None) -> TraceWord:
    """Run out along the bottom side and straight back: ``e0 .. en En .. E0``."""
    _require(g, "ladder")

    def gen(n):
        return [Letter(i, True) for i in range(n + 1)] + [Letter(i, False) for i in range(n, -1, -1)]

    return TraceWord(WordFamily(gen, tag="ladder loop"), tree or TreeLevels(g))


def t2_width(n: int) -> int:
    # chords at tree depth n: the 2^(n+1) - 2 edges of the binary tree T_n
    return (1 << (n + 1)) - 2


def t2_loop_trace(g: GraphLevels, tree: TreeLevels | None = None) -> TraceWord:
    """Depth-first tour of the binary tree, each edge down then straight back up.

    Chord ``e<c-2>`` is the original tree edge into heap vertex ``c``.
    """
    _require(g, "t2_doubled_tree")

    def gen(n):
        out: list[Letter] = []
        stack = [(1, 0, False)]
        # iterative tour; (vertex, depth, closing)
        while stack:
            v, d, closing = stack.pop()
            if closing:
                out.append(Letter(v - 2, False))
                continue
            if v != 1:
                out.append(Letter(v - 2, True))
                stack.append((v, d, True))
            if d < n:
                stack.append((2 * v + 1, d + 1, False))
                stack.append((2 * v, d + 1, False))
        return out

    return TraceWord(WordFamily(gen, width=t2_width, tag="t2 loop"), tree or TreeLevels(g))


def monotone_trace(g: GraphLevels, tree: TreeLevels | None = None) -> TraceWord:
    """The word ``e0 e1 e2 ...`` over ``g``'s chords."""
    return TraceWord(
        WordFamily(lambda n: [Letter(i, True) for i in range(n + 1)], tag="e0 e1 e2 ..."),
        tree or TreeLevels(g),
    )


def pi1_mul(u: TraceWord, v: TraceWord) -> TraceWord:
    _same_table(u, v)
    return TraceWord(family_concat(u.family, v.family), u.tree, u.mask)


def pi1_inv(u: TraceWord) -> TraceWord:
    return TraceWord(family_inverse(u.family), u.tree, u.mask)


def homotopic_up_to(u: TraceWord, v: TraceWord, depth: int = DEFAULT_DEPTH) -> Verdict:
    _same_table(u, v)
    return eq_up_to(star_of(u.family), star_of(v.family), depth)


def adjacent_cancellation_certificate(w: TraceWord, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Each adjacent inverse pair below ``depth`` must get a letter wedged between it.

    Pairs at level ``depth`` itself could only be separated later; they are
    counted in ``detail["frontier"]`` and do not fail the certificate.
    """
    fam = w.family
    checked = 0
    frontier = 0
    for n in range(depth + 1):
        word = fam.level(n)
        pairs = [
            i for i in range(len(word) - 1)
            if word[i].index == word[i + 1].index and word[i].forward != word[i + 1].forward
        ]
        if n == depth:
            frontier = len(pairs)
            break
        for i in pairs:
            checked += 1
            a, b = i, i + 1
            for m in range(n + 1, depth + 1):
                ins = fam.insertion(m)
                a, b = ins[a], ins[b]
                if b - a > 1:
                    break
            else:
                return Verdict(
                    "UnseparatedAt", depth=depth, level=n, position=i,
                    witness=f"{word[i]} {word[i + 1]}",
                )
    return Verdict("SeparatedUpTo", depth=depth, count=checked, detail={"frontier": frontier})


# -- realizability ------------------------------------------------------------------


def alternation_length(labels: list, a, b) -> int:
    """Longest subsequence alternating between labels ``a`` and ``b``.

    Over two symbols this is the number of maximal runs once every other
    label is dropped.
    """
    runs = 0
    last = None
    for x in labels:
        if (x == a or x == b) and x != last:
            runs += 1
            last = x
    return runs


def position_labels(w: TraceWord, depth: int, radius: int) -> list:
    """Component of ``L_D - B_radius`` for each letter of level ``depth``.

    ``D`` is deep enough to contain every chord the level uses.
    """
    word = w.level(depth)
    t, g = w.tree, w.graph
    need = max((t.chord(a.index).level for a in word), default=0)
    D = max(depth, need, radius + 1)
    comps = components_outside(g, radius, D)
    where = {}
    for cid, members in comps.items():
        for x in members:
            where[x] = cid
    out = []
    for a in word:
        c = t.chord(a.index)
        lu, lv = where.get(c.tail), where.get(c.head)
        out.append(lu if lu is not None and lu == lv else CORE)
    return out


def best_alternation(labels: list) -> tuple[int, tuple | None]:
    names = sorted({x for x in labels if x != CORE}, key=repr)
    best, pair = 0, None
    for a, b in combinations(names, 2):
        k = alternation_length(labels, a, b)
        if k > best:
            best, pair = k, (a, b)
    return best, pair


def realizability_scan(
    w: TraceWord,
    depth: int = DEFAULT_DEPTH,
    radius: int = DEFAULT_RADIUS,
    threshold: int = DEFAULT_THRESHOLD,
    trajectory: bool = True,
) -> Verdict:
    """Look for a monotonic subword bouncing between two components.

    A subword that alternates ever more often between two regions far from
    the base cannot converge, so no loop has this trace.
    """
    if radius >= depth:
        raise ValueError(f"radius {radius} must be below depth {depth}")
    count, pair = best_alternation(position_labels(w, depth, radius))
    detail = {}
    if trajectory:
        detail["trajectory"] = tuple(
            best_alternation(position_labels(w, d, radius))[0] for d in range(radius + 1, depth + 1)
        )
    if count >= threshold:
        return Verdict("NonConvergentWitness", depth=depth, level=radius, count=count, witness=pair, detail=detail)
    return Verdict("NoWitnessUpTo", depth=depth, level=radius, count=count, detail=detail)


# -- classification -------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationReport:
    verdict: str
    depth: int
    rank: int | None
    ends: tuple[tuple[ComponentThread, Verdict], ...] = field(repr=False)
    chord_counts: tuple[int, ...] = field(repr=False)
    stabilized_at: int | None = None

    @property
    def nontrivial(self) -> int:
        return sum(1 for _, v in self.ends if v.kind != "TrivialAt")

    def __str__(self) -> str:
        return f"FreeOfRank({self.rank})" if self.verdict == "FreeOfRank" else self.verdict

    def record(self) -> dict:
        out = {"verdict": str(self), "depth": self.depth, "ends": len(self.ends), "nontrivial": self.nontrivial}
        if self.rank is not None:
            out["rank"] = self.rank
        out["chords"] = "stable" if self.stabilized_at is not None else "growing"
        out["count"] = self.chord_counts[-1]
        return out


def classify(g: GraphLevels, t: TreeLevels | None = None, depth: int = DEFAULT_DEPTH) -> ClassificationReport:
    """Free of finite rank, the infinite-word group, wild, or undecided at ``depth``.

    Chords count as stable when the second half of the levels added none.
    """
    t = t or TreeLevels(g)
    counts = tuple(t.width_at(n) for n in range(depth + 1))
    stabilized_at = None
    if counts[depth // 2] == counts[-1]:
        stabilized_at = next(n for n in range(depth + 1) if counts[n] == counts[-1])
    ends = tuple((th, trivial_end_check(g, t, th, depth)) for th in end_threads(g, depth))
    nontrivial = sum(1 for _, v in ends if v.kind != "TrivialAt")
    rank = None
    if nontrivial == 0 and stabilized_at is not None:
        verdict, rank = "FreeOfRank", counts[-1]
    elif nontrivial == 1:
        verdict = "FInfinity"
    elif nontrivial >= 2:
        verdict = "Wild"
    else:
        verdict = "Inconclusive"
    return ClassificationReport(verdict, depth, rank, ends, counts, stabilized_at)
