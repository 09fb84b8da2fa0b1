"""Permutation combinatorics: lengths, reduced words, shuffle sets and parabolic cosets.

Permutations act on positions 1..n and compose as (σ·τ)(i) = σ(τ(i)).
t_i is the adjacent transposition of i and i+1.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Sequence

from src.errors import PermutationError


@dataclass(frozen=True)
class Permutation:
    """One-line notation: images[i-1] = σ(i)."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise PermutationError(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @staticmethod
    def of(images: Iterable[int]) -> Permutation:
        return Permutation(tuple(int(i) for i in images))

    @staticmethod
    def identity(n: int) -> Permutation:
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def transposition(i: int, n: int) -> Permutation:
        if not 1 <= i < n:
            raise PermutationError(f"t_{i} is not a generator of S_{n}")
        images: list[int] = list(range(1, n + 1))
        images[i - 1], images[i] = images[i], images[i - 1]
        return Permutation(tuple(images))

    @staticmethod
    def from_word(word: Sequence[int], n: int) -> Permutation:
        """t_{w1}·t_{w2}⋯t_{wk}"""
        result: Permutation = Permutation.identity(n)
        for i in word:
            result = result * Permutation.transposition(i, n)
        return result

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if self.n != other.n:
            raise PermutationError(f"cannot compose permutations of degree {self.n} and {other.n}")
        return Permutation(tuple(self.images[j - 1] for j in other.images))

    def inverse(self) -> Permutation:
        images: list[int] = [0] * self.n
        for i, v in enumerate(self.images, start=1):
            images[v - 1] = i
        return Permutation(tuple(images))

    @property
    def length(self) -> int:
        return length(self)

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))

    def __repr__(self) -> str:
        return f"Permutation{self.images}"


@dataclass(frozen=True)
class Composition:
    """Consecutive blocks of sizes k₁, …, k_s; empty blocks are allowed."""

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(k < 0 for k in self.parts):
            raise PermutationError(f"composition parts must be non-negative, got {self.parts}")

    @staticmethod
    def of(parts: Composition | Iterable[int]) -> Composition:
        if isinstance(parts, Composition):
            return parts
        return Composition(tuple(int(k) for k in parts))

    @property
    def total(self) -> int:
        return sum(self.parts)

    def blocks(self) -> list[range]:
        """Positions (1-based) of each block."""
        result: list[range] = []
        start: int = 1
        for k in self.parts:
            result.append(range(start, start + k))
            start += k
        return result

    def nonzero(self) -> Composition:
        return Composition(tuple(k for k in self.parts if k > 0))


def length(sigma: Permutation) -> int:
    images = sigma.images
    return sum(1 for i, j in itertools.combinations(range(len(images)), 2) if images[i] > images[j])


def reduced_word(sigma: Permutation) -> list[int]:
    """Canonical reduced word: largest misplaced values are bubbled right first.

    Each swap removes one inversion, so the word has length(σ) letters and
    Permutation.from_word(word, n) == σ.
    """
    images: list[int] = list(sigma.images)
    swaps: list[int] = []
    for value in range(sigma.n, 0, -1):
        pos: int = images.index(value)
        while pos < value - 1:
            images[pos], images[pos + 1] = images[pos + 1], images[pos]
            swaps.append(pos + 1)
            pos += 1
    return swaps[::-1]


@functools.lru_cache(maxsize=4096)
def _reduced_words(images: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    sigma = Permutation(images)
    descents: list[int] = [i for i in range(1, sigma.n) if sigma(i) > sigma(i + 1)]
    if not descents:
        return ((),)
    words: list[tuple[int, ...]] = []
    for i in descents:
        shorter: Permutation = sigma * Permutation.transposition(i, sigma.n)
        words.extend(w + (i,) for w in _reduced_words(shorter.images))
    return tuple(words)


def words_of(sigma: Permutation) -> list[list[int]]:
    """Every reduced word of σ."""
    return [list(w) for w in _reduced_words(sigma.images)]


def symmetric_group(n: int) -> Iterator[Permutation]:
    for images in itertools.permutations(range(1, n + 1)):
        yield Permutation(images)


def multinomial(parts: Sequence[int]) -> int:
    result: int = math.factorial(sum(parts))
    for k in parts:
        result //= math.factorial(k)
    return result


def enumerate_V(c: Composition | Iterable[int]) -> list[Permutation]:
    """All σ ∈ S_n that are increasing on each block of c."""
    c = Composition.of(c)
    n: int = c.total
    if n == 0:
        return [Permutation(())]

    result: list[Permutation] = []

    def assign(block: int, remaining: tuple[int, ...], images: list[int]) -> None:
        if block == len(c.parts):
            result.append(Permutation(tuple(images)))
            return
        for chosen in itertools.combinations(remaining, c.parts[block]):
            rest = tuple(v for v in remaining if v not in chosen)
            assign(block + 1, rest, images + list(chosen))

    assign(0, tuple(range(1, n + 1)), [])
    return result


def is_increasing_on_blocks(sigma: Permutation, c: Composition | Iterable[int]) -> bool:
    return all(
        all(sigma(i) < sigma(i + 1) for i in block[:-1]) for block in Composition.of(c).blocks() if len(block) > 1
    )


def is_block_preserving(sigma: Permutation, c: Composition | Iterable[int]) -> bool:
    return all(set(sigma(i) for i in block) == set(block) for block in Composition.of(c).blocks())


def coset_decompose(sigma: Permutation, c: Composition | Iterable[int]) -> tuple[Permutation, Permutation]:
    """σ = σ_C·σ₀ with σ_C ∈ V_c the minimal element of σ·S_c and σ₀ ∈ S_c."""
    c = Composition.of(c)
    if c.total != sigma.n:
        raise PermutationError(f"composition of {c.total} does not match degree {sigma.n}")
    images: list[int] = []
    for block in c.blocks():
        images.extend(sorted(sigma(i) for i in block))
    sigma_c = Permutation(tuple(images))
    return sigma_c, sigma_c.inverse() * sigma


def shuffle_sigma(k: int, l: int) -> Permutation:
    """σ_{k,l}(i) = i + l for i ≤ k, i − k otherwise."""
    if k < 0 or l < 0 or k + l < 1:
        raise PermutationError(f"shuffle_sigma needs k, l >= 0 with k + l >= 1, got ({k}, {l})")
    return Permutation(tuple(i + l if i <= k else i - k for i in range(1, k + l + 1)))


def cross(sigma1: Permutation, sigma2: Permutation) -> Permutation:
    """σ₁ × σ₂ acting on the first n₁ and the last n₂ points."""
    return Permutation(sigma1.images + tuple(v + sigma1.n for v in sigma2.images))


def _cross_all(*sigmas: Permutation) -> Permutation:
    result: Permutation = Permutation(())
    for sigma in sigmas:
        result = cross(result, sigma)
    return result


def reversal(n: int) -> Permutation:
    """γ(i) = n − i + 1"""
    return Permutation(tuple(range(n, 0, -1)))


class LemmaTerm(NamedTuple):
    l: int
    sigma1: Permutation
    sigma2: Permutation
    assembled: Permutation


def lemma_decompose(n: int, k: int, m: int) -> list[LemmaTerm]:
    """Splits V_{n+k,m} as the disjoint union over l of
    (V_{n−l,l} × V_{k+l,m−l})·(id_{n−l} × σ_{k+l,l} × id_{m−l}).
    """
    if n < 0 or m < 1 or n + k < 0 or m + k < 0:
        raise PermutationError(f"lemma_decompose needs n >= 0, m >= 1, n + k >= 0 and m + k >= 0, got ({n}, {k}, {m})")

    terms: list[LemmaTerm] = []
    for l in range(max(-k, 0), min(n, m) + 1):
        if k + l == 0 and l == 0:
            shuffle = Permutation(())
        else:
            shuffle = shuffle_sigma(k + l, l)
        right: Permutation = _cross_all(Permutation.identity(n - l), shuffle, Permutation.identity(m - l))
        lefts: list[Permutation] = enumerate_V((n - l, l))
        rights: list[Permutation] = enumerate_V((k + l, m - l))
        for sigma1, sigma2 in itertools.product(lefts, rights):
            terms.append(LemmaTerm(l, sigma1, sigma2, cross(sigma1, sigma2) * right))
    return terms
