"""Words in the free group F_n and maps between them.

A letter is a nonzero int: ``i`` stands for the generator x_i and ``-i`` for
its inverse.  A word is a tuple of letters, kept freely reduced.  Maps act on
the left, so ``f * g`` applies ``g`` first.

>>> reduce([1, 2, -2, 3])
(1, 3)
>>> f = rho(1, 2, 2)
>>> f((1, -2))
(1,)
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

Word = tuple  # tuple[int, ...]


def reduce(raw: Iterable[int]) -> Word:
    """Freely reduce a sequence of letters (single stack pass)."""
    out: list[int] = []
    for letter in raw:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def multiply(*words: Sequence[int]) -> Word:
    return reduce(x for w in words for x in w)


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    """``[u, v] = u v u^-1 v^-1``."""
    return multiply(u, v, inverse(u), inverse(v))


def cyclically_reduce(w: Sequence[int]) -> tuple[Word, Word]:
    """Split a reduced word as ``conjugator . core . conjugator^-1``.

    >>> cyclically_reduce((1, 2, 3, -2, -1))
    ((3,), (1, 2))
    """
    w = tuple(w)
    k = 0
    while 2 * k + 1 < len(w) and w[k] == -w[len(w) - 1 - k]:
        k += 1
    return w[k:len(w) - k], w[:k]


def is_reduced(w: Sequence[int]) -> bool:
    return all(w[k] != -w[k + 1] for k in range(len(w) - 1))


def _check_word(w: Sequence[int], n: int) -> None:
    for x in w:
        if not isinstance(x, (int, np.integer)) or x == 0 or abs(x) > n:
            raise ValueError(f"letter {x!r} is not a generator of F_{n}")


@dataclass(frozen=True)
class EndoMap:
    """An endomorphism of F_n, stored as the images of x_1, ..., x_n."""

    images: tuple

    def __post_init__(self):
        n = len(self.images)
        fixed = []
        for w in self.images:
            _check_word(w, n)
            fixed.append(reduce(w))
        object.__setattr__(self, "images", tuple(fixed))

    @classmethod
    def identity(cls, n: int) -> "EndoMap":
        return cls(tuple((i,) for i in range(1, n + 1)))

    @property
    def rank(self) -> int:
        return len(self.images)

    def image(self, letter: int) -> Word:
        w = self.images[abs(letter) - 1]
        return w if letter > 0 else inverse(w)

    def __call__(self, w: Sequence[int]) -> Word:
        _check_word(w, self.rank)
        return reduce(x for letter in w for x in self.image(letter))

    def __mul__(self, other: "EndoMap") -> "EndoMap":
        if not isinstance(other, EndoMap):
            return NotImplemented
        if other.rank != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {other.rank}")
        return EndoMap(tuple(self(w) for w in other.images))

    def is_identity(self) -> bool:
        return all(w == (i,) for i, w in enumerate(self.images, 1))

    def word_length(self) -> int:
        return sum(len(w) for w in self.images)

    def __str__(self):
        return ", ".join(f"x{i}->{format_word(w)}" for i, w in enumerate(self.images, 1))


def apply(f: EndoMap, w: Sequence[int]) -> Word:
    return f(w)


def compose(*maps: EndoMap) -> EndoMap:
    """``compose(f, g, h) = f * g * h``; the rightmost map is applied first."""
    if not maps:
        raise ValueError("compose needs at least one map")
    out = maps[-1]
    for f in reversed(maps[:-1]):
        out = f * out
    return out


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return " ".join(f"x{x}" if x > 0 else f"x{-x}^-1" for x in w)


# --- Whitehead automorphisms -------------------------------------------------

@dataclass(frozen=True)
class TypeTwo:
    """The Whitehead automorphism (A, a).

    Every generator other than a^{+-1} goes to ``a^alpha x_j a^-beta`` where
    alpha (beta) records whether x_j (x_j^-1) lies in A.
    """

    A: frozenset
    a: int

    def __post_init__(self):
        object.__setattr__(self, "A", frozenset(self.A))
        if self.a not in self.A:
            raise ValueError(f"a={self.a} must lie in A")
        if -self.a in self.A:
            raise ValueError(f"a^-1={-self.a} must not lie in A")
        if 0 in self.A:
            raise ValueError("0 is not a letter")

    def to_map(self, n: int) -> EndoMap:
        for x in self.A:
            if abs(x) > n:
                raise ValueError(f"letter {x} outside rank {n}")
        a = self.a
        images = []
        for j in range(1, n + 1):
            if j == abs(a):
                images.append((j,))
                continue
            w = [j]
            if j in self.A:
                w.insert(0, a)
            if -j in self.A:
                w.append(-a)
            images.append(tuple(w))
        return EndoMap(tuple(images))

    def is_identity(self) -> bool:
        return self.A == {self.a}

    def inverse(self) -> "TypeTwo":
        return TypeTwo((self.A - {self.a}) | {-self.a}, -self.a)

    def __str__(self):
        letters = sorted(self.A, key=lambda x: (abs(x), x < 0))
        return "(A={%s}, a=%s)" % (", ".join(format_word((x,)) for x in letters),
                                   format_word((self.a,)))


@dataclass(frozen=True)
class Permutation:
    """Signed permutation ``x_i -> x_{sigma(i)}^{signs[i]}`` (indices 1-based)."""

    sigma: tuple
    signs: tuple

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        n = len(self.sigma)
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError(f"sigma={self.sigma} is not a permutation of 1..{n}")
        if len(self.signs) != n or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad signs {self.signs}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)), (1,) * n)

    @property
    def rank(self) -> int:
        return len(self.sigma)

    def to_map(self, n: int | None = None) -> EndoMap:
        if n is not None and n != self.rank:
            raise ValueError(f"rank mismatch: {self.rank} vs {n}")
        return EndoMap(tuple((s * e,) for s, e in zip(self.sigma, self.signs)))

    def is_identity(self) -> bool:
        return self.to_map().is_identity()

    def inverse(self) -> "Permutation":
        n = self.rank
        sigma = [0] * n
        signs = [0] * n
        for i, (s, e) in enumerate(zip(self.sigma, self.signs), 1):
            sigma[s - 1] = i
            signs[s - 1] = e
        return Permutation(tuple(sigma), tuple(signs))

    def __str__(self):
        if self.is_identity():
            return "identity"
        return str(self.to_map())


def whitehead_apply(W: TypeTwo | Permutation, n: int) -> EndoMap:
    return W.to_map(n)


def as_permutation(f: EndoMap) -> Permutation | None:
    """Return f as an element of W_n, or None if it is not one."""
    sigma, signs = [], []
    for w in f.images:
        if len(w) != 1:
            return None
        sigma.append(abs(w[0]))
        signs.append(1 if w[0] > 0 else -1)
    if sorted(sigma) != list(range(1, f.rank + 1)):
        return None
    return Permutation(tuple(sigma), tuple(signs))


# --- Nielsen generators ------------------------------------------------------

def _distinct(n: int, *idx: int) -> None:
    if len(set(idx)) != len(idx):
        raise ValueError(f"indices {idx} must be distinct")
    for i in idx:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} outside 1..{n}")


def _replace(n: int, i: int, w: Sequence[int]) -> EndoMap:
    images = [(k,) for k in range(1, n + 1)]
    images[i - 1] = tuple(w)
    return EndoMap(tuple(images))


def rho(i: int, j: int, n: int) -> EndoMap:
    """Right Nielsen map x_i -> x_i x_j."""
    _distinct(n, i, j)
    return _replace(n, i, (i, j))


def K(i: int, j: int, n: int) -> EndoMap:
    """Partial conjugation x_i -> x_j x_i x_j^-1."""
    _distinct(n, i, j)
    return _replace(n, i, (j, i, -j))


def S(i: int, n: int) -> EndoMap:
    """Inversion x_i -> x_i^-1."""
    _distinct(n, i)
    return _replace(n, i, (-i,))


def K3(i: int, j: int, k: int, n: int) -> EndoMap:
    """Magnus generator x_i -> x_i [x_j, x_k]."""
    _distinct(n, i, j, k)
    return _replace(n, i, multiply((i,), commutator((j,), (k,))))


_NIELSEN = {"rho": rho, "K": K, "S": S, "K3": K3}


def nielsen(kind: str, *indices: int, n: int) -> EndoMap:
    """Named Nielsen/Magnus generator; ``kind`` is rho, K, S or K3."""
    try:
        build = _NIELSEN[kind]
    except KeyError:
        raise ValueError(f"unknown generator kind {kind!r}") from None
    return build(*indices, n)


# --- abelianization ----------------------------------------------------------

def exponent_vector(w: Sequence[int], n: int) -> np.ndarray:
    v = np.zeros(n, dtype=np.int64)
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def abelianize(f: EndoMap) -> np.ndarray:
    """Integer matrix whose i-th column is the exponent vector of f(x_i)."""
    n = f.rank
    return np.column_stack([exponent_vector(w, n) for w in f.images]) if n else \
        np.zeros((0, 0), dtype=np.int64)


def fixes_up_to_conjugacy(f: EndoMap, j: int) -> bool:
    core, _ = cyclically_reduce(f.images[j - 1])
    return core == (j,)
