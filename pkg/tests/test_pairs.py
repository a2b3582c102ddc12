import itertools

import pytest
from hypothesis import given, strategies as st

from expdeg.errors import ClassOverflow, ValidationError
from expdeg.pairs import (Decoration, UnbrokenPair, all_pairs, common_refinement, embed_pair,
                          is_unbroken, pair_from_json)
from oracles import unbroken_by_thresholds


def P(n, A, B):
    return UnbrokenPair(n, frozenset(A), frozenset(B))


def test_mixed_and_pure_example_is_unbroken():
    assert is_unbroken({1, 2}, {3}, 2)


@pytest.mark.parametrize("n", range(1, 8))
def test_standard_pair_is_unbroken(n):
    assert is_unbroken(range(1, n + 1), range(2, n + 2), n)


def test_non_prefix_a_is_broken():
    assert not is_unbroken({1, 3}, {2}, 2)


@pytest.mark.parametrize("A,B,n", [(set(), {2}, 1), ({1}, set(), 1), ({0}, {2}, 1), ({1}, {5}, 2)])
def test_malformed_input_is_a_validation_error(A, B, n):
    with pytest.raises(ValidationError):
        is_unbroken(A, B, n)


def test_bad_n_rejected():
    with pytest.raises(ValidationError):
        is_unbroken({1}, {2}, 0)


def test_constructor_rejects_broken_pairs():
    with pytest.raises(ValidationError):
        P(2, {1, 2, 3}, {3})


@pytest.mark.parametrize("n", range(1, 7))
def test_threshold_form_agrees_on_all_subsets(n):
    idx = range(1, n + 2)
    subsets = [set(c) for r in range(1, n + 2) for c in itertools.combinations(idx, r)]
    for A in subsets:
        for B in subsets:
            assert is_unbroken(A, B, n) == unbroken_by_thresholds(A, B, n), (A, B)


def test_embedding_small_into_larger_a():
    e = embed_pair(P(1, {1}, {2}), P(2, {1, 2}, {3}))
    assert e.as_dict() == {1: 1, 2: 3}
    assert e.padding() == [2]
    assert e.push(("x", "y")) == ("x", 1, "y")


def test_embedding_identity():
    p = P(3, {1, 2, 3}, {3, 4})
    assert embed_pair(p, p).as_dict() == {1: 1, 2: 2, 3: 3, 4: 4}


def test_embedding_into_pair_with_shared_block():
    # the target with one shared index pads between the A-only and B-only blocks
    e = embed_pair(P(1, {1}, {2}), P(2, {1, 2}, {2, 3}))
    assert e.as_dict() == {1: 1, 2: 3}


def test_embedding_into_longer_b_only_block():
    # no shared block: the B-only index goes to the front of the B-only block
    e = embed_pair(P(1, {1}, {2}), P(2, {1}, {2, 3}))
    assert e.as_dict() == {1: 1, 2: 2}
    assert e.padding() == [3]


def test_embedding_overflow():
    with pytest.raises(ClassOverflow):
        embed_pair(P(2, {1, 2}, {3}), P(1, {1}, {2}))


def test_refinement_examples():
    assert common_refinement(P(1, {1}, {2}), P(2, {1, 2}, {3})) == P(2, {1, 2}, {3})
    p = P(3, {1, 2}, {2, 3, 4})
    assert common_refinement(p, p) == p
    r = common_refinement(P(2, {1, 2}, {2, 3}), P(2, {1, 2}, {3}))
    assert r.class_sizes == (2, 1, 1)
    assert r == P(3, {1, 2, 3}, {3, 4})
    assert common_refinement(P(2, {1}, {2, 3}), P(2, {1, 2}, {3})) == P(3, {1, 2}, {3, 4})


@pytest.mark.parametrize("n", range(1, 6))
def test_embedding_preserves_classes_exhaustively(n):
    pairs = [p for m in range(1, n + 1) for p in all_pairs(m)]
    for small in pairs:
        for big in all_pairs(n):
            if any(a > b for a, b in zip(small.class_sizes, big.class_sizes)):
                with pytest.raises(ClassOverflow):
                    embed_pair(small, big)
                continue
            e = embed_pair(small, big)
            image = [e(i) for i in range(1, small.size + 1)]
            assert image == sorted(image) and len(set(image)) == len(image)
            for i in range(1, small.size + 1):
                assert small.decoration(i) is big.decoration(e(i))


pair_strategy = st.tuples(st.integers(1, 4), st.integers(0, 4), st.integers(1, 4)).map(
    lambda t: UnbrokenPair.from_sizes(*t)).filter(lambda p: p.n <= 8)


@given(pair_strategy, pair_strategy)
def test_refinement_accepts_both_embeddings(p1, p2):
    r = common_refinement(p1, p2)
    embed_pair(p1, r)
    embed_pair(p2, r)
    assert r == common_refinement(p2, p1)


@given(pair_strategy, pair_strategy, pair_strategy)
def test_composition_of_embeddings(p1, p2, p3):
    mid = common_refinement(p1, p2)
    top = common_refinement(mid, p3)
    direct = embed_pair(p1, top)
    assert embed_pair(p1, mid).then(embed_pair(mid, top)) == direct


def test_json_round_trip():
    p = P(3, {1, 2, 3}, {3, 4})
    assert p.to_json() == {"n": 3, "A": [1, 2, 3], "B": [3, 4]}
    assert pair_from_json(p.to_json()) == p


def test_decorations_and_thresholds():
    p = P(3, {1, 2, 3}, {3, 4})
    assert [p.decoration(i) for i in range(1, 5)] == [
        Decoration.ONLY_A, Decoration.ONLY_A, Decoration.BOTH, Decoration.ONLY_B]
    a, b = p.thresholds()
    assert 1 < b < a < p.n + 1
    assert {i for i in range(1, 5) if i < a} == p.A and {i for i in range(1, 5) if i > b} == p.B
