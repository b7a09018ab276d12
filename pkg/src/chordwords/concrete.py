"""Finite syntax for infinite words: letters, concatenation, omega-blocks, inverses.

``OmegaCat`` stands for the concatenation of blocks ``k = 0, 1, 2, ...``.
The blocks must use ever larger chords: a block generator promises that
block ``k`` only uses chords ``>= k - lag``.  The promise is checked as
levels are computed and a broken one raises :class:`DivergenceViolation`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

from .families import WordFamily
from .words import Letter, WordError, free_inv


class DivergenceViolation(WordError):
    def __init__(self, level: int, msg: str = ""):
        super().__init__(msg or f"omega block repeats chord {level} forever")
        self.level = level


class PatternLetter(NamedTuple):
    """Letter ``e{coef*k + offset}`` (or ``E{...}``) of an omega block."""

    coef: int
    offset: int
    forward: bool = True

    def at(self, k: int) -> Letter:
        i = self.coef * k + self.offset
        if i < 0:
            raise WordError(f"pattern {render_pattern_letter(self)} gives negative chord at k={k}")
        return Letter(i, self.forward)


class Expr:
    """Base class of the expression tree."""


@dataclass(frozen=True)
class Empty(Expr):
    pass


@dataclass(frozen=True)
class Lit(Expr):
    letter: Letter


@dataclass(frozen=True)
class Cat(Expr):
    parts: tuple[Expr, ...]


@dataclass(frozen=True)
class Inverse(Expr):
    inner: Expr


@dataclass(frozen=True)
class OmegaCat(Expr):
    pattern: tuple[PatternLetter, ...] = ()
    block: Callable[[int], tuple[Letter, ...]] | None = field(default=None, compare=False)
    lag: int | None = field(default=None, compare=False)

    def block_at(self, k: int) -> tuple[Letter, ...]:
        if self.block is not None:
            return tuple(self.block(k))
        return tuple(p.at(k) for p in self.pattern)

    def effective_lag(self) -> int:
        if self.lag is not None:
            return self.lag
        # e{a*k+b} with a >= 1 is >= k + b; constant letters break the promise
        # and are caught lazily
        offs = [p.offset for p in self.pattern if p.coef >= 1]
        return max(0, -min(offs)) if offs else 0


def _letters(x: Expr, n: int) -> list[Letter]:
    if isinstance(x, Empty):
        return []
    if isinstance(x, Lit):
        return [x.letter] if x.letter.index <= n else []
    if isinstance(x, Cat):
        out: list[Letter] = []
        for part in x.parts:
            out += _letters(part, n)
        return out
    if isinstance(x, Inverse):
        return list(free_inv(_letters(x.inner, n)))
    if isinstance(x, OmegaCat):
        lag = x.effective_lag()
        out = []
        for k in range(n + lag + 2):
            block = x.block_at(k)
            # block k must avoid every chord its scanning level would miss
            if block and k > lag:
                low = min(a.index for a in block)
                if low < k - lag:
                    raise DivergenceViolation(
                        low, f"omega block {k} uses chord {low}, missed by level {low}"
                    )
            if k <= n + lag:
                out += [a for a in block if a.index <= n]
        return out
    raise TypeError(f"not an expression: {x!r}")


def _has_omega(x: Expr) -> bool:
    if isinstance(x, OmegaCat):
        return True
    if isinstance(x, Cat):
        return any(_has_omega(p) for p in x.parts)
    if isinstance(x, Inverse):
        return _has_omega(x.inner)
    return False


def finite_letters(x: Expr) -> tuple[Letter, ...]:
    """All letters of an omega-free expression."""
    if _has_omega(x):
        raise WordError("expression is infinite")
    return tuple(_letters(x, 1 << 62))


def compile_concrete(x: Expr, tag: str | None = None) -> WordFamily:
    stable = None
    if not _has_omega(x):
        stable = max((a.index for a in finite_letters(x)), default=0)
    return WordFamily(lambda n: _letters(x, n), tag=tag or render_expr(x), stable_from=stable)


# -- rendering -----------------------------------------------------------------


def render_pattern_letter(p: PatternLetter) -> str:
    head = "e" if p.forward else "E"
    if p.coef == 0:
        return f"{head}{p.offset}"
    lin = "k" if p.coef == 1 else f"{p.coef}k"
    if p.offset > 0:
        lin += f"+{p.offset}"
    elif p.offset < 0:
        lin += f"-{-p.offset}"
    return f"{head}{{{lin}}}"


def render_expr(x: Expr) -> str:
    if isinstance(x, Empty):
        return "eps"
    if isinstance(x, Lit):
        return str(x.letter)
    if isinstance(x, Cat):
        return " ".join(render_expr(p) for p in x.parts) if x.parts else "eps"
    if isinstance(x, Inverse):
        return f"inv({render_expr(x.inner)})"
    if isinstance(x, OmegaCat):
        if x.block is not None and not x.pattern:
            return "omega(k -> <block>)"
        body = " ".join(render_pattern_letter(p) for p in x.pattern) or "eps"
        return f"omega(k -> {body})"
    raise TypeError(f"not an expression: {x!r}")
