import pytest
from hypothesis import given, settings, strategies as st

from splicekit.monodromy import (BraidWord, FreeGroupEndo, artin_action, braids_equal,
                                 free_probe, free_probe_detail, h_infinity, local_monodromies,
                                 permutation, product_of_local)


def test_local_monodromy_words():
    assert [h.to_list() for h in local_monodromies(1)] == [[1, 1]]
    assert local_monodromies(2)[1].to_list() == [1, 2, 2, -1]
    assert local_monodromies(3)[2].to_list() == [1, 2, 3, 3, -2, -1]
    assert h_infinity(1).to_list() == [1, 1]
    assert h_infinity(2).to_list() == [1, 2, 2, 1]


def test_artin_action_examples():
    assert artin_action(BraidWord(3)).is_identity()
    assert artin_action(BraidWord(2, (1,))).images == ((1, 2, -1), (1,))
    assert artin_action(BraidWord(2, (1, 1))).images == ((1, 2, 1, -2, -1), (1, 2, -1))
    assert artin_action(BraidWord(2, (-1, 1))).is_identity()


def test_braid_relation():
    assert braids_equal(BraidWord(3, (1, 2, 1)), BraidWord(3, (2, 1, 2)))
    assert not braids_equal(BraidWord(3, (1, 2)), BraidWord(3, (2, 1)))
    assert braids_equal(BraidWord(4, (1, 3)), BraidWord(4, (3, 1)))


def test_h_infinity_r2():
    h1, h2 = local_monodromies(2)
    assert braids_equal(h2 * h1, BraidWord(3, (1, 2, 2, 1)))


@pytest.mark.parametrize("r", range(1, 9))
def test_h_infinity_identity(r):
    assert braids_equal(product_of_local(r), h_infinity(r))


@pytest.mark.parametrize("r", range(1, 9))
def test_local_monodromies_are_pure(r):
    for h in local_monodromies(r):
        assert permutation(h) == tuple(range(r + 1))


def test_permutation_of_a_generator():
    assert permutation(BraidWord(3, (1,))) == (1, 0, 2)
    assert permutation(h_infinity(3)) == (0, 1, 2, 3)


words = st.lists(st.integers(1, 3).flatmap(lambda i: st.sampled_from([i, -i])), max_size=8)


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_action_is_an_antihomomorphism_of_composition(w1, w2):
    a, b = BraidWord(4, w1), BraidWord(4, w2)
    assert artin_action(a * b) == artin_action(a).then(artin_action(b))


@settings(max_examples=100, deadline=None)
@given(words)
def test_inverse_word_inverts_action(w):
    b = BraidWord(4, w)
    assert artin_action(b * b.inverse()).is_identity()
    assert artin_action(b.inverse() * b).is_identity()


def test_bad_braid_words():
    with pytest.raises(ValueError):
        BraidWord(2, (2,))
    with pytest.raises(ValueError):
        BraidWord(2, (0,))
    with pytest.raises(ValueError):
        BraidWord(2) * BraidWord(3)


@pytest.mark.parametrize("r, maxlen", [(2, 1), (2, 4), (3, 3)])
def test_free_probe_examples(r, maxlen):
    assert free_probe(r, maxlen)


def test_free_probe_counts():
    res = free_probe_detail(2, 4)
    # 4 letters, 3 continuations each: 4 + 12 + 36 + 108
    assert res.ok and res.words_checked == 160


def test_free_probe_preconditions():
    with pytest.raises(ValueError):
        free_probe(1, 3)
    with pytest.raises(ValueError):
        free_probe(2, 0)


def test_endo_dict():
    e = artin_action(BraidWord(2, (1,)))
    assert e.to_dict() == {"n": 2, "images": [[1, 2, -1], [1]]}
    assert FreeGroupEndo.identity(2).apply([1, 2, -1]) == (1, 2, -1)
