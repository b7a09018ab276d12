"""Finite words over oriented chords and their reductions.

A letter is an oriented chord ``e<i>`` (natural orientation) or ``E<i>``
(reversed).  A finite word is a plain tuple of letters; the empty tuple is
the group identity.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

ORACLE_BOUND = 10

_LETTER_RE = re.compile(r"([eE])(\d+)")


class WordError(ValueError):
    pass


class OracleBoundExceeded(WordError):
    pass


class InvalidReduction(WordError):
    pass


class Letter(NamedTuple):
    index: int
    forward: bool = True

    def inverse(self) -> "Letter":
        return Letter(self.index, not self.forward)

    def __str__(self) -> str:
        return f"{'e' if self.forward else 'E'}{self.index}"

    def __repr__(self) -> str:
        return str(self)


FiniteWord = tuple  # tuple[Letter, ...]


def e(i: int) -> Letter:
    return Letter(i, True)


def E(i: int) -> Letter:
    return Letter(i, False)


def letters(text: str) -> tuple[Letter, ...]:
    """Parse a whitespace-separated list like ``"e0 E1 e0"``; ``eps`` is empty."""
    out = []
    for tok in text.split():
        if tok == "eps":
            continue
        m = _LETTER_RE.fullmatch(tok)
        if m is None:
            raise WordError(f"bad letter {tok!r}")
        out.append(Letter(int(m.group(2)), m.group(1) == "e"))
    return tuple(out)


def render(w: Sequence[Letter]) -> str:
    return " ".join(map(str, w)) if w else "eps"


def reduce(w: Sequence[Letter]) -> tuple[Letter, ...]:
    """Free reduction by a single left-to-right stack pass."""
    stack: list[Letter] = []
    for a in w:
        if stack and stack[-1].index == a.index and stack[-1].forward != a.forward:
            stack.pop()
        else:
            stack.append(a)
    return tuple(stack)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(
        not (a.index == b.index and a.forward != b.forward) for a, b in zip(w, w[1:])
    )


def restrict(w: Sequence[Letter], indices: Iterable[int] | range) -> tuple[Letter, ...]:
    keep = indices if isinstance(indices, (range, set, frozenset)) else set(indices)
    return tuple(a for a in w if a.index in keep)


def restrict_below(w: Sequence[Letter], width: int) -> tuple[Letter, ...]:
    """Restriction to the prefix index set ``{0, ..., width-1}``."""
    return tuple(a for a in w if a.index < width)


def free_inv(w: Sequence[Letter]) -> tuple[Letter, ...]:
    return tuple(a.inverse() for a in reversed(w))


def free_mul(u: Sequence[Letter], v: Sequence[Letter]) -> tuple[Letter, ...]:
    return reduce(tuple(u) + tuple(v))


def letter_counts(w: Sequence[Letter], index: int) -> tuple[int, int]:
    """Occurrences of ``(e<index>, E<index>)`` in ``w``."""
    fwd = sum(1 for a in w if a.index == index and a.forward)
    bwd = sum(1 for a in w if a.index == index and not a.forward)
    return fwd, bwd


# -- reductions ---------------------------------------------------------------


@dataclass(frozen=True)
class Reduction:
    """Cancelling position pairs ``(s, t)``, ``s < t``, in cancellation order."""

    pairs: tuple[tuple[int, int], ...] = ()

    def deleted(self) -> frozenset[int]:
        return frozenset(p for pair in self.pairs for p in pair)

    def __len__(self) -> int:
        return len(self.pairs)


def validate_reduction(w: Sequence[Letter], R: Reduction) -> None:
    """Raise :class:`InvalidReduction` unless ``R`` is a reduction of ``w``."""
    alive = list(range(len(w)))
    seen: set[int] = set()
    for k, (s, t) in enumerate(R.pairs):
        if not (0 <= s < t < len(w)):
            raise InvalidReduction(f"pair #{k} {(s, t)} out of range")
        if s in seen or t in seen:
            raise InvalidReduction(f"pair #{k} {(s, t)} reuses a cancelled position")
        a, b = w[s], w[t]
        if a.index != b.index or a.forward == b.forward:
            raise InvalidReduction(f"pair #{k} {(s, t)} does not carry inverse letters")
        i = alive.index(s)
        if i + 1 >= len(alive) or alive[i + 1] != t:
            raise InvalidReduction(f"pair #{k} {(s, t)} not adjacent after earlier cancellations")
        del alive[i : i + 2]
        seen.update((s, t))


def _check_bound(w: Sequence[Letter], bound: int) -> None:
    if len(w) > bound:
        raise OracleBoundExceeded(f"word of length {len(w)} exceeds oracle bound {bound}")


def enumerate_reductions(w: Sequence[Letter], bound: int = ORACLE_BOUND) -> set[Reduction]:
    """All reductions of ``w`` by exhaustive search, empty reduction included."""
    _check_bound(w, bound)
    w = tuple(w)
    found: set[Reduction] = set()

    def walk(alive: tuple[int, ...], done: tuple[tuple[int, int], ...]) -> None:
        found.add(Reduction(done))
        for i in range(len(alive) - 1):
            s, t = alive[i], alive[i + 1]
            a, b = w[s], w[t]
            if a.index == b.index and a.forward != b.forward:
                walk(alive[:i] + alive[i + 2 :], done + ((s, t),))

    walk(tuple(range(len(w))), ())
    return found


def deletable_bruteforce(w: Sequence[Letter], bound: int = ORACLE_BOUND) -> frozenset[int]:
    """Positions deleted by some reduction, by search over reachable states.

    Every reduction is a path through the states "set of surviving positions",
    so the union of the complements of all reachable states is exactly the
    set of positions some reduction deletes.
    """
    _check_bound(w, bound)
    n = len(w)
    full = (1 << n) - 1
    seen = {full}
    todo = [full]
    gone = 0
    while todo:
        mask = todo.pop()
        gone |= full & ~mask
        alive = [i for i in range(n) if mask >> i & 1]
        for s, t in zip(alive, alive[1:]):
            a, b = w[s], w[t]
            if a.index == b.index and a.forward != b.forward:
                nxt = mask & ~(1 << s) & ~(1 << t)
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
    return frozenset(i for i in range(n) if gone >> i & 1)


def _prefix_nodes(w: Sequence[Letter]) -> list[int]:
    """Id of the reduced form of each prefix ``w[:k]``, for ``k = 0..len(w)``.

    Reduced words are nodes of a trie, so two prefixes get the same id
    exactly when they are equal in the free group.
    """
    child: dict[tuple[int, Letter], int] = {}
    parent = [-1]
    last = [None]  # letter on the edge into each node
    node = 0
    out = [0]
    for a in w:
        top = last[node]
        if top is not None and top.index == a.index and top.forward != a.forward:
            node = parent[node]
        else:
            key = (node, a)
            nxt = child.get(key)
            if nxt is None:
                nxt = len(parent)
                child[key] = nxt
                parent.append(node)
                last.append(a)
            node = nxt
        out.append(node)
    return out


def deletable_positions(w: Sequence[Letter]) -> frozenset[int]:
    """Positions some reduction deletes.

    ``s`` is deletable iff some ``t`` carries the inverse letter and the
    factor strictly between them reduces to the empty word.  The factor
    ``w[s+1:t]`` is trivial iff prefixes ``w[:s+1]`` and ``w[:t]`` reduce to
    the same element, so matching prefix ids turns the scan into a lookup.
    """
    nodes = _prefix_nodes(w)
    # openers[(node, letter)] -> positions s with nodes[s+1] == node, w[s] == letter
    openers: dict[tuple[int, Letter], list[int]] = {}
    out: set[int] = set()
    for t, a in enumerate(w):
        partners = openers.get((nodes[t], a.inverse()))
        if partners:
            out.add(t)
            out.update(partners)
        openers.setdefault((nodes[t + 1], a), []).append(t)
    return frozenset(out)


def is_deletable(w: Sequence[Letter], s: int) -> bool:
    if not 0 <= s < len(w):
        raise IndexError(f"position {s} out of range for word of length {len(w)}")
    return s in deletable_positions(w)


def permanent_positions(w: Sequence[Letter]) -> frozenset[int]:
    return frozenset(range(len(w))) - deletable_positions(w)


# -- nesting and cancellation order ---------------------------------------------


@dataclass(frozen=True)
class NestingSchedule:
    """Nesting forest of a reduction's pairs and a linear cancellation order.

    ``parent`` maps each pair to the innermost pair strictly surrounding it.
    ``chains`` are the maximal chains in extraction order; ``order`` lists
    the pairs in cancellation order (inner before outer, later chains first).
    """

    pairs: tuple[tuple[int, int], ...]
    parent: dict = field(compare=False)
    chains: tuple[tuple[tuple[int, int], ...], ...]
    order: tuple[tuple[int, int], ...]

    def precedes(self, p: tuple[int, int], q: tuple[int, int]) -> bool:
        return self.order.index(p) <= self.order.index(q)

    def ancestors(self, p: tuple[int, int]) -> list[tuple[int, int]]:
        out = []
        while (p := self.parent.get(p)) is not None:
            out.append(p)
        return out


def _surrounds(q: tuple[int, int], p: tuple[int, int]) -> bool:
    return q[0] < p[0] and p[1] < q[1]


def reduction_schedule(w: Sequence[Letter], R: Reduction) -> NestingSchedule:
    validate_reduction(w, R)
    pairs = tuple(sorted(R.pairs))
    parent: dict[tuple[int, int], tuple[int, int]] = {}
    children: dict[tuple[int, int] | None, list[tuple[int, int]]] = {None: []}
    # sorted by left end, so an enclosing pair is still on the stack
    stack: list[tuple[int, int]] = []
    for p in pairs:
        while stack and not _surrounds(stack[-1], p):
            stack.pop()
        up = stack[-1] if stack else None
        if up is not None:
            parent[p] = up
        children.setdefault(up, []).append(p)
        children.setdefault(p, [])
        stack.append(p)

    # Chain M_i: the first remaining pair in (left, right) order is a root of
    # the remaining forest (upward-closed removal); extend it downwards
    # through first remaining children to a leaf.
    remaining = set(pairs)
    chains = []
    for p in pairs:
        if p not in remaining:
            continue
        chain = [p]
        while True:
            kids = [c for c in children[chain[-1]] if c in remaining]
            if not kids:
                break
            chain.append(kids[0])
        remaining.difference_update(chain)
        chains.append(tuple(chain))

    order: list[tuple[int, int]] = []
    for chain in reversed(chains):
        order.extend(reversed(chain))
    return NestingSchedule(pairs, parent, tuple(chains), tuple(order))
