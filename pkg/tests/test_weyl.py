import pytest

from uhecke.weyl import (SignedPermutation, block_representative, enumerate_group, generator,
                         generators, length, length_bfs, parabolic_double_cosets, reduced_word,
                         word_to_element)


def test_parse_and_str_roundtrip():
    w = SignedPermutation.parse("[-2, 1, 3]")
    assert str(w) == "[-2, 1, 3]"
    assert w(1) == -2 and w(-2) == -1


def test_rejects_non_permutation():
    with pytest.raises(ValueError):
        SignedPermutation((1, 1))


def test_generators_are_involutions():
    for r in (1, 2, 3):
        for s in generators(r):
            g = generator(r, s)
            assert (g * g).is_identity()
            assert length(g) == 1


def test_bad_generator():
    with pytest.raises(ValueError):
        generator(2, "A2")


@pytest.mark.parametrize("r", [1, 2, 3])
def test_length_matches_bfs(r):
    dist = length_bfs(r)
    assert len(dist) == 2 ** r * [1, 1, 2, 6][r]
    assert all(length(w) == d for w, d in dist.items())


@pytest.mark.parametrize("r", [1, 2, 3])
def test_length_changes_by_one(r):
    for w, _ in enumerate_group(r):
        for s in generators(r):
            assert abs(length(generator(r, s) * w) - length(w)) == 1


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_reduced_words_evaluate_back(r):
    for w, word in enumerate_group(r):
        assert word_to_element(r, word) == w
        assert len(word) == length(w)
        assert reduced_word(w) == word


def test_longest_element():
    w0 = SignedPermutation((-1, -2))
    assert length(w0) == 4
    assert max(length(w) for w, _ in enumerate_group(3)) == 9


def test_enumerate_bound():
    with pytest.raises(ValueError):
        enumerate_group(7)
    assert len(enumerate_group(7, bound=7)) == 2 ** 7 * 5040


@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_double_cosets_partition(r):
    blocks = parabolic_double_cosets(r)
    assert len(blocks) == r + 1
    assert sum(map(len, blocks)) == 2 ** r * len(list(__import__("itertools").permutations(range(r))))
    mins = [min(map(length, b)) for b in blocks]
    assert mins == sorted(set(mins))
    for i, b in enumerate(blocks):
        assert block_representative(r, i) in b


def test_block_sizes():
    assert [len(b) for b in parabolic_double_cosets(2)] == [2, 4, 2]
    assert [len(b) for b in parabolic_double_cosets(3)] == [6, 18, 18, 6]


def test_inverse():
    w = SignedPermutation((3, -1, 2))
    assert (w * w.inverse()).is_identity()
