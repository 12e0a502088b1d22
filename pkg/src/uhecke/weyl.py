"""The hyperoctahedral group W_r = {+-1}^r x| S_r as signed permutations.

An element is stored as the tuple of signed images of 1..r.  Composition
is right-to-left, ``(a*b)(i) = a(b(i))``.  The generators are

* ``C``   the sign change of coordinate 1,
* ``A_i`` the transposition of coordinates i and i+1.

>>> w1 = SignedPermutation((-1, 2))
>>> (w1 * w1).is_identity()
True
>>> length(SignedPermutation((-1, -2)))
4
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product

__all__ = [
    "SignedPermutation", "generator", "generators", "compose", "length",
    "length_bfs", "enumerate_group", "parabolic_double_cosets", "word_to_element",
    "block_representative", "reduced_word", "DEFAULT_BOUND",
]

DEFAULT_BOUND = 6


@dataclass(frozen=True, order=True)
class SignedPermutation:
    images: tuple[int, ...]

    def __post_init__(self):
        r = len(self.images)
        if sorted(abs(x) for x in self.images) != list(range(1, r + 1)):
            raise ValueError(f"not a signed permutation: {self.images}")

    @classmethod
    def _trusted(cls, images: tuple[int, ...]) -> "SignedPermutation":
        obj = object.__new__(cls)
        object.__setattr__(obj, "images", images)
        return obj

    @property
    def rank(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, r: int) -> "SignedPermutation":
        return cls(tuple(range(1, r + 1)))

    def is_identity(self) -> bool:
        return all(x == i + 1 for i, x in enumerate(self.images))

    def __call__(self, i: int) -> int:
        x = self.images[abs(i) - 1]
        return x if i > 0 else -x

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        return compose(self, other)

    def inverse(self) -> "SignedPermutation":
        out = [0] * self.rank
        for i, x in enumerate(self.images, start=1):
            out[abs(x) - 1] = i if x > 0 else -i
        return SignedPermutation(tuple(out))

    def __str__(self) -> str:
        return "[" + ", ".join(str(x) for x in self.images) + "]"

    @classmethod
    def parse(cls, text: str) -> "SignedPermutation":
        body = text.strip().strip("[]")
        return cls(tuple(int(t) for t in body.split(",") if t.strip()))


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} vs {b.rank}")
    ai = a.images
    return SignedPermutation._trusted(tuple(ai[x - 1] if x > 0 else -ai[-x - 1] for x in b.images))


def generator(r: int, letter: str) -> SignedPermutation:
    """``"C"`` or ``"A<i>"`` (1 <= i < r) as an element of W_r."""
    img = list(range(1, r + 1))
    if letter == "C":
        img[0] = -1
    elif letter.startswith("A"):
        i = int(letter[1:])
        if not 1 <= i < r:
            raise ValueError(f"{letter} is not a generator of rank {r}")
        img[i - 1], img[i] = img[i], img[i - 1]
    else:
        raise ValueError(f"unknown generator {letter!r}")
    return SignedPermutation(tuple(img))


def generators(r: int) -> list[str]:
    return ["C"] + [f"A{i}" for i in range(1, r)]


def word_to_element(r: int, word) -> SignedPermutation:
    w = SignedPermutation.identity(r)
    for letter in word:
        w = w * generator(r, letter)
    return w


def length(w: SignedPermutation) -> int:
    """Coxeter length for the generators C, A_1..A_{r-1}.

    Inversions of the one-line notation, plus ``|w(j)|`` for every negative
    entry (moving a value to the front and flipping it costs that much).
    """
    img = w.images
    inv = sum(1 for i in range(len(img)) for j in range(i + 1, len(img)) if img[i] > img[j])
    return inv - sum(x for x in img if x < 0)


def length_bfs(r: int) -> dict[SignedPermutation, int]:
    """Word lengths by breadth-first search of the Cayley graph."""
    start = SignedPermutation.identity(r)
    gens = [generator(r, s) for s in generators(r)]
    dist = {start: 0}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for g in gens:
            v = w * g
            if v not in dist:
                dist[v] = dist[w] + 1
                queue.append(v)
    return dist


@lru_cache(maxsize=None)
def _enumerate(r: int) -> tuple[tuple[SignedPermutation, tuple[str, ...]], ...]:
    out = []
    for perm in permutations(range(1, r + 1)):
        for signs in product((1, -1), repeat=r):
            w = SignedPermutation(tuple(s * x for s, x in zip(signs, perm)))
            out.append((w, reduced_word(w)))
    out.sort(key=lambda t: (length(t[0]), t[0].images))
    return tuple(out)


def enumerate_group(r: int, *, bound: int | None = None) -> list[tuple[SignedPermutation, tuple[str, ...]]]:
    """All 2^r r! elements, by length, each paired with a reduced word."""
    bound = DEFAULT_BOUND if bound is None else bound
    if r < 1 or r > bound:
        raise ValueError(f"rank {r} outside 1..{bound}")
    return list(_enumerate(r))


def reduced_word(w: SignedPermutation) -> tuple[str, ...]:
    """A reduced word for ``w`` found by peeling off right descents.

    ``w*C`` is shorter iff ``w(1) < 0``; ``w*A_i`` is shorter iff
    ``w(i) > w(i+1)``.
    """
    img = list(w.images)
    word: list[str] = []
    while True:
        if img[0] < 0:
            img[0] = -img[0]
            word.append("C")
            continue
        for i in range(len(img) - 1):
            if img[i] > img[i + 1]:
                img[i], img[i + 1] = img[i + 1], img[i]
                word.append(f"A{i + 1}")
                break
        else:
            break
    return tuple(reversed(word))


def block_representative(r: int, i: int) -> SignedPermutation:
    """``w_1 w_2 ... w_i``: negate the first i coordinates."""
    return SignedPermutation(tuple(-(j + 1) if j < i else j + 1 for j in range(r)))


def parabolic_double_cosets(r: int) -> list[frozenset[SignedPermutation]]:
    """The double cosets S_r w S_r, ordered by the number of sign changes.

    Each block is built as an honest two-sided orbit of the permutation
    subgroup acting on its representative.
    """
    perms = [SignedPermutation(p) for p in permutations(range(1, r + 1))]
    blocks = []
    for i in range(r + 1):
        rep = block_representative(r, i)
        blocks.append(frozenset(a * rep * b for a in perms for b in perms))
    total = set().union(*blocks)
    if len(total) != 2 ** r * len(perms) or sum(map(len, blocks)) != len(total):
        raise ArithmeticError("double cosets do not partition the group")
    return blocks
