import pytest
from hypothesis import given
from hypothesis import strategies as st

from chordwords.concrete import Cat, Empty, Inverse, Lit, OmegaCat, PatternLetter, compile_concrete, render_expr
from chordwords.graphs import TreeLevels, end_threads
from chordwords.parsing import ParseError, parse_expr, parse_graph, parse_word
from chordwords.words import Letter, letters, render


def test_word_examples():
    assert parse_word("e0 E0 e0") == letters("e0 E0 e0")
    assert parse_word("eps") == ()
    assert parse_word("inv(e0 e1) e2") == letters("E1 E0 e2")
    x = parse_word("e0 omega(k -> e{k+1}) inv(omega(k -> e{k+1})) E0")
    assert compile_concrete(x).level(2) == letters("e0 e1 e2 E2 E1 E0")


def test_pattern_forms():
    x = parse_expr("omega(j -> e{2j-1} E{ 3 * j + 2 } e4 E{j})")
    assert x == OmegaCat((PatternLetter(2, -1), PatternLetter(3, 2, False), PatternLetter(0, 4), PatternLetter(1, 0, False)))
    assert parse_expr("omega(k -> eps)") == OmegaCat(())


@pytest.mark.parametrize("text,offset", [
    ("e0 (", 3), ("e0 $", 3), ("x1", 0), ("inv(e0", 6), ("omega(k -> )", 11),
    ("omega(k e1)", 8), ("", 0), ("e{k}", 0), ("omega(k -> e{-k})", 15),
])
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse_word(text)
    assert info.value.offset == offset


def test_index_overflow():
    parse_word(f"e{2**31 - 1}")
    with pytest.raises(ParseError):
        parse_word(f"e{2**31}")
    with pytest.raises(ParseError):
        parse_word(f"omega(k -> e{{k+{2**31}}})")


letter = st.builds(Letter, st.integers(0, 40), st.booleans())
pattern = st.lists(st.builds(PatternLetter, st.integers(0, 3), st.integers(0, 5), st.booleans()), min_size=1, max_size=3)
exprs = st.recursive(
    st.one_of(st.just(Empty()), st.builds(Lit, letter), st.builds(lambda p: OmegaCat(tuple(p)), pattern)),
    lambda inner: st.one_of(
        st.builds(Inverse, inner),
        st.lists(inner.filter(lambda x: not isinstance(x, Cat)), min_size=2, max_size=4).map(lambda ps: Cat(tuple(ps))),
    ),
    max_leaves=8,
)


@given(exprs)
def test_render_parse_roundtrip(x):
    text = render_expr(x)
    assert parse_expr(text) == x
    assert render_expr(parse_expr(text)) == text


@given(st.lists(letter, max_size=12).map(tuple))
def test_finite_roundtrip(w):
    assert parse_word(render(w)) == w


def test_graph_families():
    assert parse_graph("family ladder").name == "ladder"
    assert parse_graph("family t2").name == "t2_doubled_tree"
    assert parse_graph("family star_of_rays 4").params == (4,)
    g = parse_graph("family finite\nedge 0 a b\nedge 1 b c\nedge 2 c a\nbase a")
    assert g.base == "a" and len(TreeLevels(g).chord_table(3)) == 1


def test_graph_with_levels():
    text = "base 0; edge 0 0 1 @level 1; edge 1 0 2 @level 1; edge 2 1 2 @level 1; edge 3 2 3 @level 2  # tail"
    g = parse_graph(text, validate_depth=4)
    assert len(g.level(1).edges) == 3 and len(g.level(5).edges) == 4
    assert end_threads(g, 6) == []


@pytest.mark.parametrize("text,line", [
    ("family", 1), ("base a\nfrob 1", 2), ("edge 0 a", 1), ("edge 0 a a", 1),
    ("edge 0 a b\nedge 0 b c", 2), ("edge 0 a b @level x", 1), ("vertex 1 @level 2 3", 1),
])
def test_graph_errors_carry_lines(text, line):
    with pytest.raises(ParseError) as info:
        parse_graph(text)
    assert info.value.line == line


def test_graph_semantic_errors():
    with pytest.raises(ParseError):
        parse_graph("family ladder\nedge 0 a b")
    with pytest.raises(ParseError):
        parse_graph("family banana")
    with pytest.raises(ParseError):
        parse_graph("edge 0 0 1 @level 1")  # no base
    with pytest.raises(ParseError) as info:
        parse_graph("base 0; edge 0 0 1 @level 1; edge 1 1 2 @level 2; edge 2 2 0 @level 2", validate_depth=4)
    assert "level 1" in str(info.value)
