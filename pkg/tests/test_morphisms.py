import pytest
from hypothesis import given, settings, strategies as st

from subrigid.errors import RejectedInput
from subrigid.morphisms import (
    FiniteAbelianGroup,
    Morphism,
    builtin_family,
    classify,
    compose,
    family_group_seed,
    is_positive,
    matmul,
    max_consecutivity,
    tm_substitution,
)
from subrigid.words import alphabet_of_size

TM = builtin_family("thue_morse")
BIN = alphabet_of_size(2)


def morphisms(d_source=2, d_target=2, max_image=3):
    image = st.lists(
        st.integers(0, d_target - 1), min_size=1, max_size=max_image
    ).map(tuple)
    return st.tuples(*([image] * d_source)).map(
        lambda images: Morphism(alphabet_of_size(d_source), alphabet_of_size(d_target), images)
    )


def test_apply_examples():
    assert TM.apply((0, 1)) == (0, 1, 1, 0)
    assert TM.apply(()) == ()
    z6 = builtin_family("zeta", l=6)
    assert z6.apply((0,)) == (0, 1, 1, 1, 1, 1)
    with pytest.raises(RejectedInput):
        TM.apply((2,))


def test_compose_examples():
    tm2 = compose(TM, TM)
    assert tm2.images == ((0, 1, 1, 0), (1, 0, 0, 1))
    assert tm2.incidence_matrix() == ((2, 2), (2, 2))
    sigma = Morphism(BIN, BIN, ((0, 1), (0,)))
    with pytest.raises(RejectedInput):
        compose(sigma, Morphism(alphabet_of_size(3), alphabet_of_size(3), ((0,), (1,), (2,))))


@settings(max_examples=50)
@given(morphisms(), morphisms(), st.lists(st.integers(0, 1), max_size=50).map(tuple))
def test_homomorphism_law(tau, sigma, w):
    assert compose(tau, sigma).apply(w) == tau.apply(sigma.apply(w))


@settings(max_examples=50)
@given(morphisms(), morphisms())
def test_incidence_of_composition_is_product(tau, sigma):
    assert compose(tau, sigma).incidence_matrix() == matmul(
        tau.incidence_matrix(), sigma.incidence_matrix()
    )


@given(morphisms(d_source=3, d_target=3))
def test_incidence_column_sums_are_image_lengths(sigma):
    matrix = sigma.incidence_matrix()
    for a in range(3):
        assert sum(matrix[b][a] for b in range(3)) == len(sigma.images[a])


def test_incidence_examples():
    assert TM.incidence_matrix() == ((1, 1), (1, 1))
    assert builtin_family("zeta", l=6).incidence_matrix() == ((1, 5), (5, 1))
    assert builtin_family("sigma_j", j=2, d=2).incidence_matrix() == ((2, 2), (2, 2))


def test_classify_thue_morse():
    profile = classify(TM)
    assert profile.constant_length == 2
    assert profile.positive and profile.primitive
    assert not profile.proper
    assert profile.max_consecutivity == 1


def test_classify_sigma_j():
    sigma = builtin_family("sigma_j", j=3, d=2)
    assert sigma.images == ((0, 0, 0, 1, 1, 1), (1, 1, 1, 0, 0, 0))
    profile = classify(sigma)
    assert profile.max_consecutivity == 3
    assert profile.constant_length == 6


def test_classify_periodic_example_is_still_primitive():
    sigma = Morphism(BIN, BIN, ((0, 1, 0), (1, 0, 1)))
    profile = classify(sigma)
    assert profile.primitive and not profile.proper


def test_classify_reducible_not_primitive():
    sigma = Morphism(BIN, BIN, ((0, 1), (1,)))
    assert not classify(sigma).primitive


@settings(max_examples=50)
@given(morphisms(d_source=3, d_target=3))
def test_positive_implies_primitive(sigma):
    profile = classify(sigma)
    if profile.positive:
        assert profile.primitive


def test_erasing_rejected():
    with pytest.raises(RejectedInput):
        Morphism(BIN, BIN, ((0, 1), ()))


def test_tm_substitution_examples():
    group = FiniteAbelianGroup((2,))
    assert tm_substitution(group, (0, 1)).images == TM.images
    ternary = tm_substitution(FiniteAbelianGroup((3,)), (0, 1, 0, 0))
    assert ternary.images == ((0, 1, 0, 0), (1, 2, 1, 1), (2, 0, 2, 2))
    identity = tm_substitution(group, (0,))
    assert identity.images == ((0,), (1,))
    assert not classify(identity).primitive
    with pytest.raises(RejectedInput):
        tm_substitution(group, ())


@settings(max_examples=30)
@given(
    st.lists(st.integers(0, 2), min_size=1, max_size=4).map(tuple),
    st.lists(st.integers(0, 2), min_size=1, max_size=4).map(tuple),
)
def test_tm_family_closed_under_composition(u, v):
    group = FiniteAbelianGroup((3,))
    su, sv = tm_substitution(group, u), tm_substitution(group, v)
    assert compose(sv, su).images == tm_substitution(group, sv.apply(u)).images


def test_builtin_families():
    z = builtin_family("zeta", l=6)
    assert z.images == ((0, 1, 1, 1, 1, 1), (1, 0, 0, 0, 0, 0))
    s = builtin_family("sigma_j", j=2, d=3)
    assert s.images == ((0, 0, 1, 1), (1, 1, 2, 2), (2, 2, 0, 0))
    group, seed = family_group_seed("sigma_j", j=2, d=3)
    assert tm_substitution(group, seed).images == s.images
    with pytest.raises(RejectedInput):
        builtin_family("zeta", l=1)
    with pytest.raises(RejectedInput):
        builtin_family("unknown")


def test_finite_abelian_group():
    group = FiniteAbelianGroup((2, 2))
    assert group.size == 4
    assert group.elements() == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert group.add(1, 2) == 3
    assert group.add(3, 3) == 0
    assert group.neg(3) == 3
    assert group.alphabet().symbols == ("0.0", "0.1", "1.0", "1.1")
    with pytest.raises(RejectedInput):
        FiniteAbelianGroup((0,))


def test_max_consecutivity_unit_runs():
    assert max_consecutivity(TM) == 1
    assert max_consecutivity(builtin_family("sigma_j", j=4, d=2)) == 4


def test_constant_length_implies_norm_equals_min():
    profile = classify(builtin_family("zeta", l=7))
    assert profile.constant_length == 7
    assert profile.norm == profile.min_image_length == 7


def test_is_positive():
    assert is_positive(TM.incidence_matrix())
    assert not is_positive(((1, 0), (1, 1)))
