"""Integer compositions, convergence domain tests, and the word encoding.

A composition (k_1, ..., k_r) indexes the iterated tail integral

    zeta_C(k_1, ..., k_r) = int_{[1,oo)^r} dx_1...dx_r /
                            (x_1^{k_1} (x_1+x_2)^{k_2} ... (x_1+...+x_r)^{k_r}),

which converges exactly when the last part is >= 2 ("admissible").  For real
exponent tuples the region of absolute convergence is cut out by strict
conditions on every suffix sum.  Compositions are also encoded as words over
the alphabet {x, y}: each part k contributes the block "y" + "x"*(k-1), so
admissible compositions correspond to words that start with y and end with x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DomainError, WordEncodingError

# Real exponent tuples are plain tuples of finite floats.
RealTuple = tuple[float, ...]


@dataclass(frozen=True, order=True)
class Composition:
    """A nonempty tuple of positive integers."""

    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int]):
        parts = tuple(parts)
        if not parts:
            raise DomainError("composition must have at least one part")
        for p in parts:
            if not isinstance(p, int) or isinstance(p, bool) or p < 1:
                raise DomainError(f"composition parts must be integers >= 1, got {p!r}")
        object.__setattr__(self, "parts", parts)

    @property
    def weight(self) -> int:
        return sum(self.parts)

    @property
    def depth(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"

    def to_json(self) -> list[int]:
        return list(self.parts)


def is_admissible(c: Composition) -> bool:
    """True when the defining integral converges, i.e. the last part is >= 2."""
    return c.parts[-1] >= 2


def _checked_reals(s: Sequence[float]) -> tuple[float, ...]:
    t = tuple(float(v) for v in s)
    if not t:
        raise DomainError("exponent tuple must be nonempty")
    if not all(math.isfinite(v) for v in t):
        raise DomainError(f"exponent tuple must be finite, got {t}")
    return t


def in_convergence_domain(s: Sequence[float]) -> bool:
    """Strict suffix conditions for absolute convergence.

    (s_1, ..., s_r) qualifies iff for every j: s_j + ... + s_r > r - j + 1.
    The comparisons are strict with no epsilon slack; boundary tuples fail.
    """
    t = _checked_reals(s)
    acc = 0.0
    for count, v in enumerate(reversed(t), start=1):
        acc += v
        if not acc > count:
            return False
    return True


def convergence_bound(s: Sequence[float]) -> float:
    """Product upper bound prod_j 1/(s_j + ... + s_r - (r - j + 1)).

    Only defined inside the open convergence domain; the true integral is
    strictly below this bound.
    """
    t = _checked_reals(s)
    if not in_convergence_domain(t):
        raise DomainError(f"{t} is outside the open convergence domain")
    bound = 1.0
    acc = 0.0
    for count, v in enumerate(reversed(t), start=1):
        acc += v
        bound /= acc - count
    return bound


def word_from_composition(c: Composition) -> str:
    """Encode (k_1, ..., k_r) as the word y x^{k_1-1} y x^{k_2-1} ... y x^{k_r-1}.

    Defined for every composition; only evaluation (the Z map) requires the
    admissible shape "starts with y, ends with x".
    """
    return "".join("y" + "x" * (k - 1) for k in c.parts)


def composition_from_word(w: str) -> Composition:
    """Decode a word produced by word_from_composition.

    Accepts any nonempty word over {x, y} that starts with y (each y opens a
    new part, each x increments the current part).  Anything else cannot be a
    composition encoding and raises WordEncodingError.
    """
    if not w:
        raise WordEncodingError("empty word encodes no composition")
    if set(w) - {"x", "y"}:
        raise WordEncodingError(f"word {w!r} uses letters outside {{x, y}}")
    if w[0] != "y":
        raise WordEncodingError(f"word {w!r} does not start with y")
    parts: list[int] = []
    for ch in w:
        if ch == "y":
            parts.append(1)
        else:
            parts[-1] += 1
    return Composition(parts)


def is_admissible_word(w: str) -> bool:
    """Words evaluable by the Z map: empty, or starting with y and ending with x."""
    if w == "":
        return True
    return not (set(w) - {"x", "y"}) and w[0] == "y" and w[-1] == "x"


def admissible_compositions(weight: int) -> Iterator[Composition]:
    """All compositions of the given weight whose last part is >= 2."""
    if weight < 2:
        return
    for c in compositions_of(weight):
        if c.parts[-1] >= 2:
            yield c


def compositions_of(total: int) -> Iterator[Composition]:
    """All 2^(total-1) compositions of a positive integer, lexicographic."""
    if total < 1:
        raise DomainError(f"need a positive total, got {total}")

    def rec(rest: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield tuple(acc)
            return
        for first in range(1, rest + 1):
            acc.append(first)
            yield from rec(rest - first, acc)
            acc.pop()

    for parts in rec(total, []):
        yield Composition(parts)
