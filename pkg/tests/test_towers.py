from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from subrigid.errors import ExactModeUnavailable, RejectedInput
from subrigid.language import DirectiveSequence, constant_sequence
from subrigid.measures import build_measure_table
from subrigid.morphisms import Morphism, builtin_family
from subrigid.towers import (
    class_mass,
    equiv_key,
    heights,
    level_measure_table,
    subtower_mass,
    tower_intersection_mass,
)
from subrigid.words import abelianize, alphabet_of_size, occurrences

TM = builtin_family("thue_morse")
Z6 = builtin_family("zeta", l=6)
BIN = alphabet_of_size(2)
TM_SEQ = constant_sequence(TM)


def test_heights_examples():
    assert heights(TM_SEQ, 0) == (1, 1)
    for n in range(1, 8):
        assert heights(TM_SEQ, n) == (2**n, 2**n)
    z_seq = constant_sequence(Z6)
    for n in range(1, 5):
        assert heights(z_seq, n) == (6**n, 6**n)


def test_heights_recursion():
    seq = DirectiveSequence(prefix=(Z6,), tail=(TM,))
    for n in range(0, 6):
        h = heights(seq, n)
        sigma = seq.morphism(n)
        nxt = heights(seq, n + 1)
        for a in range(sigma.source.size):
            assert nxt[a] == sum(
                occurrences((b,), sigma.images[a]) * h[b]
                for b in range(sigma.target.size)
            )


def test_equiv_key_constant_length():
    h = heights(TM_SEQ, 3)
    for m in (2, 3, 4):
        word = (0,) * m
        assert equiv_key(h, word) == (m - 1) * 8
    assert equiv_key(h, (0, 1, 0)) == equiv_key(h, (1, 0, 1))


def test_equiv_key_uneven_heights():
    assert equiv_key((2, 3), (0, 1, 0)) == 5
    assert equiv_key((2, 3), (1, 0, 1)) == 5
    with pytest.raises(RejectedInput):
        equiv_key((2, 3), (0, 1))


@given(
    st.lists(st.integers(0, 1), min_size=0, max_size=6),
    st.lists(st.integers(0, 1), min_size=0, max_size=6),
    st.integers(0, 1),
    st.tuples(st.integers(1, 9), st.integers(1, 9)),
)
def test_abelianization_criterion(body_u, body_w, close, hs):
    # Equal letter counts on all-but-last imply equal keys.
    u = (close, *body_u, close)
    w = (close, *body_w, close)
    if abelianize(u[:-1], 2) == abelianize(w[:-1], 2):
        assert equiv_key(hs, u) == equiv_key(hs, w)


def test_subtower_masses_thue_morse():
    table = build_measure_table(TM)
    for n in (1, 2, 3):
        assert subtower_mass(TM_SEQ, n, (0, 1, 0, 0)) == table.measure((0, 1, 0, 0))
        assert sum(subtower_mass(TM_SEQ, n, (a,)) for a in (0, 1)) == 1
    assert subtower_mass(TM_SEQ, 1, (0, 0, 0)) == 0  # off language


def test_class_mass_thue_morse():
    cls4 = class_mass(TM_SEQ, 2, (0, 1, 0, 0))
    assert cls4.mass == Fraction(2, 3)
    assert cls4.complete_enumeration
    assert len(cls4.members) == 6
    cls2 = class_mass(TM_SEQ, 2, (0, 0))
    assert cls2.mass == Fraction(1, 3)
    assert set(cls2.members) == {(0, 0), (1, 1)}


def test_class_mass_monotone_in_cap():
    seq = DirectiveSequence(prefix=(Morphism(BIN, BIN, ((0, 1), (0, 1, 1))),), tail=(TM,))
    assert heights(seq, 1) == (2, 3)
    rep = (0, 1, 0)  # key 5 at level 1
    masses = []
    for cap in (2, 3, 4, 8):
        cls = class_mass(seq, 1, rep, length_cap=cap)
        masses.append(cls.mass)
    assert masses == sorted(masses)
    full = class_mass(seq, 1, rep)
    assert full.complete_enumeration
    assert set(full.members) == {(0, 1, 0), (1, 0, 1)}
    assert 0 < full.mass < 1
    # Constant once complete.
    assert class_mass(seq, 1, rep, length_cap=50).mass == full.mass


def test_class_mass_by_key():
    cls = class_mass(TM_SEQ, 1, 6)  # key 6 at level 1: complete words of length 4
    assert cls.mass == Fraction(2, 3)


def test_level_measures_need_tail():
    seq = DirectiveSequence(prefix=(Z6,), tail=(TM,))
    with pytest.raises(ExactModeUnavailable):
        level_measure_table(seq, 0)
    table = level_measure_table(seq, 1)
    assert table.substitution.images == TM.images


@pytest.mark.parametrize("sigma", [Z6, builtin_family("sigma_j", j=2, d=2)], ids=["zeta6", "sigma2"])
def test_tower_intersection_inequality(sigma):
    # mass(T_bb within next-level tower of a) >= (|sigma(a)|_bb / |sigma(a)|_b) * mass(T_b within it)
    seq = constant_sequence(sigma)
    for n in (0, 1):
        for a in range(2):
            image = sigma.images[a]
            for b in range(2):
                single = occurrences((b,), image)
                if single == 0:
                    continue
                lhs = tower_intersection_mass(seq, n, (b, b), a)
                base = tower_intersection_mass(seq, n, (b,), a)
                assert lhs >= Fraction(occurrences((b, b), image), single) * base


def test_tower_intersection_partitions_letters():
    seq = constant_sequence(TM)
    # Summing single-letter intersections over all next-level towers gives the
    # letter's own subtower mass.
    for b in range(2):
        total = sum(tower_intersection_mass(seq, 0, (b,), a) for a in range(2))
        assert total == subtower_mass(seq, 0, (b,))


def test_tower_intersection_requires_constant_length():
    fib = Morphism(BIN, BIN, ((0, 1), (0,)))
    with pytest.raises(ExactModeUnavailable):
        tower_intersection_mass(constant_sequence(fib), 0, (0, 0), 0)
