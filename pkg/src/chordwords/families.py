"""Infinite words as coherent towers of finite restrictions, and ``F*``.

A :class:`WordFamily` is given level by level.  Level ``n`` is the
restriction of the infinite word to the chords ``0 .. width(n)-1``; going
from level ``n-1`` to ``n`` only inserts letters with the new indices, and
the insertion map records where the old positions went.  The default
schedule ``width(n) = n + 1`` adds one chord per level.

A :class:`StarElement` is an element of the inverse limit of the free
groups: one reduced word per level, compatible under restrict-and-reduce.
"""
from __future__ import annotations

import random
import threading
from typing import Callable, NamedTuple, Sequence

from .verdict import Verdict
from .words import (
    Letter,
    free_inv,
    free_mul,
    is_reduced,
    letter_counts,
    permanent_positions,
    reduce,
    restrict_below,
)

DEFAULT_DEPTH = 12


class Level(NamedTuple):
    word: tuple[Letter, ...]
    insertion: tuple[int, ...]


class LevelError(RuntimeError):
    def __init__(self, level: int, cause: BaseException):
        super().__init__(f"generator failed at level {level}: {cause}")
        self.level = level
        self.cause = cause


def default_width(n: int) -> int:
    return n + 1


def _derived_insertion(word: Sequence[Letter], old_width: int) -> tuple[int, ...]:
    return tuple(i for i, a in enumerate(word) if a.index < old_width)


class _Levels:
    """Thread-safe memo of a deterministic level generator."""

    def __init__(self, gen: Callable[[int], object]):
        self._gen = gen
        self._cache: dict[int, object] = {}
        self._lock = threading.RLock()

    def __call__(self, n: int):
        if n < 0:
            raise ValueError(f"level must be >= 0, got {n}")
        hit = self._cache.get(n)
        if hit is not None:
            return hit
        with self._lock:
            hit = self._cache.get(n)
            if hit is None:
                try:
                    hit = self._gen(n)
                except LevelError:
                    raise
                except Exception as exc:
                    raise LevelError(n, exc) from exc
                self._cache[n] = hit
        return hit


class WordFamily:
    """An infinite word presented by its finite prefix restrictions.

    ``gen(n)`` returns either the level-``n`` word or a :class:`Level`
    ``(word, insertion)`` where ``insertion[j]`` is the level-``n`` position of
    position ``j`` of level ``n-1``.  Without an explicit map the positions
    of old-index letters are used, which is right whenever the generator is
    coherent.
    """

    def __init__(
        self,
        gen: Callable[[int], object],
        width: Callable[[int], int] = default_width,
        tag: str | None = None,
        stable_from: int | None = None,
    ):
        self.width = width
        self.tag = tag
        # level from which no new letters appear, when known
        self.stable_from = stable_from
        self._levels = _Levels(self._wrap(gen))

    def _wrap(self, gen):
        def build(n: int) -> Level:
            got = gen(n)
            if isinstance(got, Level):
                return Level(tuple(got.word), tuple(got.insertion))
            word = tuple(got)
            return Level(word, _derived_insertion(word, self.width(n - 1) if n > 0 else 0))

        return build

    def __repr__(self) -> str:
        return f"WordFamily({self.tag or '?'})"

    def level(self, n: int) -> tuple[Letter, ...]:
        return self._levels(n)[0]

    def insertion(self, n: int) -> tuple[int, ...]:
        return self._levels(n)[1]

    def lineage(self, n: int, m: int) -> tuple[int, ...]:
        """Where each level-``n`` position sits at level ``m >= n``."""
        pos = tuple(range(len(self.level(n))))
        for k in range(n + 1, m + 1):
            ins = self.insertion(k)
            pos = tuple(ins[p] for p in pos)
        return pos

    def at_width(self, k: int) -> tuple[Letter, ...]:
        """Raw restriction to chords ``< k``, read off the first wide-enough level."""
        n = _level_for_width(self.width, k)
        return restrict_below(self.level(n), k)

    @classmethod
    def constant(cls, word: Sequence[Letter], tag: str | None = None) -> "WordFamily":
        word = tuple(word)
        top = max((a.index for a in word), default=-1)
        return cls(lambda n: restrict_below(word, n + 1), tag=tag, stable_from=max(top, 0))

    @classmethod
    def empty(cls) -> "WordFamily":
        return cls.constant((), tag="eps")


def _level_for_width(width: Callable[[int], int], k: int, limit: int = 1 << 16) -> int:
    n = 0
    while width(n) < k:
        n += 1
        if n > limit:
            raise ValueError(f"width schedule never reaches {k}")
    return n


def validate_coherence(w: WordFamily, depth: int = DEFAULT_DEPTH) -> Verdict:
    prev: tuple[Letter, ...] = ()
    for n in range(depth + 1):
        lo = w.width(n - 1) if n > 0 else 0
        hi = w.width(n)
        word, ins = w.level(n), w.insertion(n)

        def bad(why: str) -> Verdict:
            return Verdict("ViolationAt", depth=depth, level=n, detail={"reason": why})

        if hi < lo:
            return bad("width schedule decreased")
        if len(ins) != len(prev):
            return bad(f"insertion map has {len(ins)} entries for {len(prev)} old positions")
        if any(b <= a for a, b in zip(ins, ins[1:])) or any(not 0 <= p < len(word) for p in ins):
            return bad("insertion map not order-preserving into the level")
        if any(word[p] != prev[j] for j, p in enumerate(ins)):
            return bad("inserted level does not carry the old letters at the mapped positions")
        mapped = set(ins)
        for i, a in enumerate(word):
            if i not in mapped and not lo <= a.index < hi:
                return bad(f"new position {i} carries {a}, outside chords {lo}..{hi - 1}")
        prev = word
    return Verdict("CoherentUpTo", depth=depth)


def is_reduced_up_to(w: WordFamily, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Every position must become permanent at some level ``<= depth``.

    Permanence only grows with the level, so the last level decides: a
    position deletable there has no witness within ``depth``.  The negative
    answer is only conclusive when the family is known to be stable.
    """
    top = w.level(depth)
    perm = permanent_positions(top)
    if len(perm) == len(top):
        return Verdict("ReducedUpTo", depth=depth)
    # report the offending position at the level it was born
    for n in range(depth + 1):
        line = w.lineage(n, depth)
        old = set(w.insertion(n)) if n > 0 else set()
        for i, p in enumerate(line):
            if i not in old and p not in perm:
                stable = w.stable_from is not None and w.stable_from <= depth
                return Verdict(
                    "NonPermanentWitness", depth=depth, level=n, position=i, exact=stable
                )
    raise AssertionError("unreachable: deletable position without a birth level")


# -- F* -----------------------------------------------------------------------


class StarElement:
    """A coherent sequence of reduced words, level ``n`` over chords ``< width(n)``."""

    def __init__(
        self,
        gen: Callable[[int], Sequence[Letter]],
        width: Callable[[int], int] = default_width,
        tag: str | None = None,
        stable_from: int | None = None,
    ):
        self.width = width
        self.tag = tag
        self.stable_from = stable_from
        self._levels = _Levels(lambda n: tuple(gen(n)))

    def __repr__(self) -> str:
        return f"StarElement({self.tag or '?'})"

    def level(self, n: int) -> tuple[Letter, ...]:
        return self._levels(n)

    def at_width(self, k: int) -> tuple[Letter, ...]:
        n = _level_for_width(self.width, k)
        word = self.level(n)
        return word if self.width(n) == k else reduce(restrict_below(word, k))

    @classmethod
    def identity(cls) -> "StarElement":
        return cls(lambda n: (), tag="id", stable_from=0)

    @classmethod
    def constant(cls, word: Sequence[Letter], tag: str | None = None) -> "StarElement":
        word = reduce(word)
        top = max((a.index for a in word), default=0)
        return cls(lambda n: reduce(restrict_below(word, n + 1)), tag=tag, stable_from=top)


def star_of(w: WordFamily) -> StarElement:
    return StarElement(
        lambda n: reduce(w.level(n)), width=w.width, tag=w.tag, stable_from=w.stable_from
    )


def is_star_coherent_up_to(a: StarElement, depth: int = DEFAULT_DEPTH) -> Verdict:
    for n in range(depth + 1):
        word = a.level(n)
        if not is_reduced(word) or any(x.index >= a.width(n) for x in word):
            return Verdict("ViolationAt", depth=depth, level=n, detail={"reason": "not reduced"})
        if n and reduce(restrict_below(word, a.width(n - 1))) != a.level(n - 1):
            return Verdict("ViolationAt", depth=depth, level=n, detail={"reason": "incoherent"})
    return Verdict("CoherentUpTo", depth=depth)


def _joint_width(a, b) -> Callable[[int], int]:
    if a.width is b.width:
        return a.width
    return lambda n: min(a.width(n), b.width(n))


def _same_width(a, b, n: int) -> tuple[tuple[Letter, ...], tuple[Letter, ...]]:
    if a.width is b.width:
        return a.level(n), b.level(n)
    k = min(a.width(n), b.width(n))
    return a.at_width(k), b.at_width(k)


def _both_stable(a, b, depth: int) -> bool:
    return (
        a.stable_from is not None
        and b.stable_from is not None
        and max(a.stable_from, b.stable_from) <= depth
    )


def eq_up_to(a: StarElement, b: StarElement, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Compare prefix projections; any finite index set sits inside some prefix."""
    for n in range(depth + 1):
        x, y = _same_width(a, b, n)
        if x != y:
            return Verdict("DistinctAt", depth=depth, level=n, witness=(x, y))
    return Verdict("EqualUpTo", depth=depth, exact=_both_stable(a, b, depth))


def star_mul(a: StarElement, b: StarElement) -> StarElement:
    def gen(n):
        x, y = _same_width(a, b, n)
        return free_mul(x, y)

    stable = None if a.stable_from is None or b.stable_from is None else max(a.stable_from, b.stable_from)
    return StarElement(gen, width=_joint_width(a, b), stable_from=stable)


def star_inv(a: StarElement) -> StarElement:
    return StarElement(lambda n: free_inv(a.level(n)), width=a.width, stable_from=a.stable_from)


def bounded_check(a: StarElement, index: int, bound: int, depth: int = DEFAULT_DEPTH) -> Verdict:
    """Least level where ``e<index>`` or ``E<index>`` occurs more than ``bound`` times."""
    peak = 0
    for n in range(depth + 1):
        fwd, bwd = letter_counts(a.level(n), index)
        peak = max(peak, fwd, bwd)
        if max(fwd, bwd) > bound:
            return Verdict("ExceededAt", depth=depth, level=n, count=max(fwd, bwd))
    return Verdict("BoundedUpTo", depth=depth, count=peak)


def unbounded_element() -> StarElement:
    """Level ``n`` is ``e1 e0 e1 E0 ... en e0 en E0``: reduced, coherent, unbounded in ``e0``."""

    def gen(n):
        out: list[Letter] = []
        for i in range(1, n + 1):
            out += [Letter(i, True), Letter(0, True), Letter(i, True), Letter(0, False)]
        return out

    return StarElement(gen, tag="unbounded")


# -- family combinators -----------------------------------------------------------


def family_concat(u: WordFamily, v: WordFamily) -> WordFamily:
    if u.width is v.width:
        gen = lambda n: u.level(n) + v.level(n)
        width = u.width
    else:
        width = _joint_width(u, v)
        gen = lambda n: u.at_width(width(n)) + v.at_width(width(n))
    stable = None if u.stable_from is None or v.stable_from is None else max(u.stable_from, v.stable_from)
    return WordFamily(gen, width=width, stable_from=stable)


def family_inverse(u: WordFamily) -> WordFamily:
    return WordFamily(lambda n: free_inv(u.level(n)), width=u.width, stable_from=u.stable_from)


def random_family(seed: int | str, max_new: int = 3, p_new: float = 0.7) -> WordFamily:
    """Reproducible random coherent family: each level inserts up to
    ``max_new`` letters of the new chord at random slots."""
    memo: dict[int, tuple[Letter, ...]] = {}

    def gen(n):
        if n in memo:
            return memo[n]
        prev = list(gen(n - 1)) if n else []
        rng = random.Random(f"{seed}:{n}")
        k = sum(1 for _ in range(max_new) if rng.random() < p_new)
        for _ in range(k):
            prev.insert(rng.randint(0, len(prev)), Letter(n, rng.random() < 0.5))
        memo[n] = tuple(prev)
        return memo[n]

    return WordFamily(gen, tag=f"random:{seed}")
