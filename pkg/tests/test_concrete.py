import pytest

from chordwords.concrete import (
    Cat,
    DivergenceViolation,
    Empty,
    Inverse,
    Lit,
    OmegaCat,
    PatternLetter,
    compile_concrete,
    finite_letters,
    render_expr,
)
from chordwords.families import validate_coherence
from chordwords.words import WordError, e, letters

RAY = OmegaCat((PatternLetter(1, 1),))
LADDER = Cat((Lit(e(0)), RAY, Inverse(RAY), Lit(letters("E0")[0])))


def test_ladder_expression_levels():
    w = compile_concrete(LADDER)
    assert w.level(0) == letters("e0 E0")
    assert w.level(2) == letters("e0 e1 e2 E2 E1 E0")
    assert validate_coherence(w, 8).kind == "CoherentUpTo"
    assert w.stable_from is None


def test_finite_expression_is_stable():
    x = Cat((Lit(e(2)), Inverse(Cat((Lit(e(0)), Lit(e(1)))))))
    assert finite_letters(x) == letters("e2 E1 E0")
    assert compile_concrete(x).stable_from == 2
    with pytest.raises(WordError):
        finite_letters(LADDER)


def test_negative_pattern_index():
    with pytest.raises(WordError):
        PatternLetter(1, -2).at(0)


def test_repeated_chord_is_rejected():
    x = OmegaCat((PatternLetter(1, 1), PatternLetter(0, 0)))
    with pytest.raises(Exception) as info:
        compile_concrete(x).level(3)
    cause = getattr(info.value, "cause", info.value)
    assert isinstance(cause, DivergenceViolation) and cause.level == 0


def test_lagged_block_is_fine():
    # block k reaches back to chord k-1, which a lag of 1 allows
    x = OmegaCat(block=lambda k: (e(k + 1), e(max(k - 1, 0))), lag=1)
    w = compile_concrete(Cat((Lit(e(0)), x)))
    assert w.level(2) == letters("e0 e1 e0 e2 e0 e1 e2")
    assert validate_coherence(w, 6).kind == "CoherentUpTo"


def test_render():
    assert render_expr(LADDER) == "e0 omega(k -> e{k+1}) inv(omega(k -> e{k+1})) E0"
    assert render_expr(OmegaCat((PatternLetter(2, -1, False), PatternLetter(0, 3)))) == "omega(k -> E{2k-1} e3)"
    assert render_expr(Empty()) == "eps"
