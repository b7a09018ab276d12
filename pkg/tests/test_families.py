import threading

import pytest
from hypothesis import given
from hypothesis import strategies as st

from chordwords.families import (
    Level,
    LevelError,
    StarElement,
    WordFamily,
    bounded_check,
    eq_up_to,
    family_concat,
    family_inverse,
    is_reduced_up_to,
    is_star_coherent_up_to,
    random_family,
    star_inv,
    star_mul,
    star_of,
    unbounded_element,
    validate_coherence,
)
from chordwords.words import E, Letter, e, letters, reduce, restrict_below

from oracles import naive_reduce


def ladder_family():
    return WordFamily(lambda n: [e(i) for i in range(n + 1)] + [E(i) for i in range(n, -1, -1)])


def test_constant_family_levels():
    w = WordFamily.constant(letters("e0 e2 E0"))
    assert w.level(0) == letters("e0 E0")
    assert w.level(1) == letters("e0 E0")
    assert w.level(2) == letters("e0 e2 E0")
    assert w.insertion(2) == (0, 2)
    assert w.lineage(0, 3) == (0, 2)


def test_explicit_level_insertion():
    w = WordFamily(lambda n: Level((e(0),) * (n + 1) if n == 0 else (e(0), e(1)), (0,) if n else ()))
    assert w.level(1) == (e(0), e(1)) and w.insertion(1) == (0,)


def test_coherence_detects_bad_generators():
    assert validate_coherence(ladder_family(), 6).kind == "CoherentUpTo"
    bad = WordFamily(lambda n: letters("e0") if n < 2 else letters("E0"))
    v = validate_coherence(bad, 4)
    assert v.kind == "ViolationAt" and v.level == 2
    late = WordFamily(lambda n: letters("e0") if n < 3 else letters("e0 e1"))
    assert validate_coherence(late, 4).level == 3


def test_generator_failure_is_wrapped():
    def gen(n):
        if n == 2:
            raise RuntimeError("boom")
        return ()

    w = WordFamily(gen)
    with pytest.raises(LevelError) as info:
        w.level(2)
    assert info.value.level == 2


def test_memo_is_thread_safe():
    calls = []

    def gen(n):
        calls.append(n)
        return [e(i) for i in range(n + 1)]

    w = WordFamily(gen)
    ts = [threading.Thread(target=w.level, args=(5,)) for _ in range(8)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    assert calls.count(5) == 1


def test_ladder_reduces_to_identity_but_is_not_reduced():
    w = ladder_family()
    s = star_of(w)
    assert all(s.level(n) == () for n in range(10))
    v = is_reduced_up_to(w, 6)
    assert v.kind == "NonPermanentWitness" and not v.conclusive


def test_nonpermanent_in_stable_family_is_exact():
    v = is_reduced_up_to(WordFamily.constant(letters("e0 E0 e1")), 4)
    assert v.kind == "NonPermanentWitness" and v.exact and v.level == 0
    assert is_reduced_up_to(WordFamily.constant(letters("e0 e1 E0")), 4).kind == "ReducedUpTo"


def test_eq_up_to():
    a = StarElement.constant(letters("e0"))
    v = eq_up_to(a, StarElement.identity(), 5)
    assert v.kind == "DistinctAt" and v.level == 0
    v = eq_up_to(StarElement.identity(), star_of(WordFamily.empty()), 5)
    assert v.kind == "EqualUpTo" and v.exact and v.conclusive
    v = eq_up_to(star_of(ladder_family()), StarElement.identity(), 8)
    assert v.kind == "EqualUpTo" and not v.exact


def test_mismatched_widths_compare_on_common_prefix():
    wide = StarElement(lambda n: reduce(restrict_below(letters("e0 e3"), 2 * n + 1)), width=lambda n: 2 * n + 1)
    narrow = StarElement.constant(letters("e0 e3"))
    assert eq_up_to(wide, narrow, 6).kind == "EqualUpTo"


def test_unbounded_element():
    u = unbounded_element()
    v = bounded_check(u, 0, 3, 6)
    assert (v.kind, v.level, v.count) == ("ExceededAt", 4, 4)
    assert is_star_coherent_up_to(u, 8).kind == "CoherentUpTo"
    assert bounded_check(StarElement.constant(letters("e0 e1 e0")), 0, 3, 6).kind == "BoundedUpTo"


def test_random_family_is_reproducible_and_coherent():
    a, b = random_family(3), random_family(3)
    assert [a.level(n) for n in range(8)] == [b.level(n) for n in range(8)]
    assert validate_coherence(a, 8).kind == "CoherentUpTo"


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_star_levels_are_coherent(s1, s2):
    a, b = star_of(random_family(s1)), star_of(random_family(s2))
    for x in (a, b, star_mul(a, b), star_inv(a)):
        assert is_star_coherent_up_to(x, 6).kind == "CoherentUpTo"


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_family_concat_and_inverse(s1, s2):
    u, v = random_family(s1), random_family(s2)
    uv = family_concat(u, v)
    for n in range(6):
        assert uv.level(n) == u.level(n) + v.level(n)
        assert naive_reduce(family_inverse(u).level(n) + u.level(n)) == ()
    assert validate_coherence(uv, 6).kind == "CoherentUpTo"
