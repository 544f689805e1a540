"""Shuffle algebra on words over {x, y} and its evaluation on compositions.

The shuffle product interleaves two words in all order-preserving ways:

    1 sh w = w sh 1 = w
    (u w1) sh (v w2) = u (w1 sh w2) + v ((u w1) sh w2)

with u, v single letters.  Evaluating a word sum term by term on the
corresponding compositions (the Z map) is an algebra homomorphism into the
reals; that multiplicativity is checked numerically elsewhere, never assumed.
All coefficients are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

from .compositions import Composition, composition_from_word, is_admissible_word
from .errors import DomainError, WordEncodingError

_LETTERS = {"x", "y"}


def _check_word(w: str) -> str:
    if set(w) - _LETTERS:
        raise DomainError(f"word {w!r} uses letters outside {{x, y}}")
    return w


@dataclass(frozen=True)
class FormalWordSum:
    """Finite rational linear combination of words, zero coefficients dropped.

    Terms are stored sorted by word (lexicographic), so iteration order and
    equality are canonical.
    """

    terms: tuple[tuple[str, Fraction], ...]

    def __init__(self, terms: Mapping[str, Fraction] | Iterable[tuple[str, Fraction]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[str, Fraction] = {}
        for word, coeff in items:
            _check_word(word)
            q = Fraction(coeff)
            if q:
                acc[word] = acc.get(word, Fraction(0)) + q
        clean = tuple(sorted((w, q) for w, q in acc.items() if q))
        object.__setattr__(self, "terms", clean)

    @classmethod
    def of(cls, word: str, coeff: Fraction | int = 1) -> "FormalWordSum":
        return cls([(word, Fraction(coeff))])

    def coefficient(self, word: str) -> Fraction:
        for w, q in self.terms:
            if w == word:
                return q
        return Fraction(0)

    def words(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.terms)

    def __iter__(self) -> Iterator[tuple[str, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: "FormalWordSum") -> "FormalWordSum":
        return FormalWordSum(list(self.terms) + list(other.terms))

    def __sub__(self, other: "FormalWordSum") -> "FormalWordSum":
        return self + other.scaled(-1)

    def scaled(self, q: Fraction | int) -> "FormalWordSum":
        q = Fraction(q)
        return FormalWordSum([(w, c * q) for w, c in self.terms])

    def total_mass(self) -> Fraction:
        return sum((q for _, q in self.terms), Fraction(0))

    def to_json(self) -> dict[str, str]:
        return {w: str(q) for w, q in self.terms}


@lru_cache(maxsize=None)
def _shuffle_words(w1: str, w2: str) -> tuple[tuple[str, int], ...]:
    if not w1:
        return ((w2, 1),)
    if not w2:
        return ((w1, 1),)
    acc: dict[str, int] = {}
    for tail, n in _shuffle_words(w1[1:], w2):
        word = w1[0] + tail
        acc[word] = acc.get(word, 0) + n
    for tail, n in _shuffle_words(w1, w2[1:]):
        word = w2[0] + tail
        acc[word] = acc.get(word, 0) + n
    return tuple(sorted(acc.items()))


def shuffle(w1: str, w2: str) -> FormalWordSum:
    """Shuffle product of two plain words (integer coefficients)."""
    _check_word(w1)
    _check_word(w2)
    return FormalWordSum([(w, Fraction(n)) for w, n in _shuffle_words(w1, w2)])


def shuffle_sum(a: FormalWordSum, b: FormalWordSum) -> FormalWordSum:
    """Bilinear extension of the shuffle product to word sums."""
    acc: list[tuple[str, Fraction]] = []
    for w1, c1 in a:
        for w2, c2 in b:
            c = c1 * c2
            acc.extend((w, c * n) for w, n in _shuffle_words(w1, w2))
    return FormalWordSum(acc)


@dataclass(frozen=True)
class ZImage:
    """Evaluation of a word sum: a rational constant (from the empty word)
    plus a rational combination of admissible compositions.

    Iterating yields the (Composition, coefficient) terms sorted by parts.
    """

    constant: Fraction
    terms: tuple[tuple[Composition, Fraction], ...]

    def __iter__(self) -> Iterator[tuple[Composition, Fraction]]:
        return iter(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def to_json(self) -> dict:
        return {
            "constant": str(self.constant),
            "terms": [{"composition": c.to_json(), "coeff": str(q)} for c, q in self.terms],
        }


def z_map(a: FormalWordSum | str) -> ZImage:
    """Map each word to its composition; the empty word maps to the scalar 1.

    Every word in the sum must be admissible (empty, or y...x); a
    non-admissible word raises WordEncodingError naming the offender.
    """
    if isinstance(a, str):
        a = FormalWordSum.of(a)
    constant = Fraction(0)
    collect: dict[Composition, Fraction] = {}
    for w, q in a:
        if not is_admissible_word(w):
            raise WordEncodingError(f"word {w!r} is non-admissible (y...x) and has no value")
        if w == "":
            constant += q
            continue
        c = composition_from_word(w)
        collect[c] = collect.get(c, Fraction(0)) + q
    terms = tuple(sorted(((c, q) for c, q in collect.items() if q), key=lambda t: t[0].parts))
    return ZImage(constant, terms)
