"""Candidate pole hyperplanes of the continued multi-variable integral.

Permuting the integration variables and integrating one at a time shows the
analytic continuation in (s_1,...,s_r) can only have poles on the affine
hyperplanes

    m_1 s_1 + ... + m_i s_i = (i + 1) - k,    1 <= i <= r,  k >= 1,

where (m_1,...,m_i) is a prefix of the running minima of some permutation of
1..r.  Only the candidates are enumerable; which of them carry genuine poles
is not decided here.  The depth-1 case is exact: the function is 1/(s-1),
with its single pole s = 1 among the candidates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .errors import CapacityError, DomainError

_MAX_R = 8  # r! permutations; factorial growth cap


@dataclass(frozen=True)
class Hyperplane:
    """The locus m_1 s_1 + ... + m_i s_i = constant.

    Coefficients are positive, non-increasing integers (running minima of a
    permutation are non-increasing).
    """

    coefficients: tuple[int, ...]
    constant: int

    def __init__(self, coefficients: Sequence[int], constant: int):
        ct = tuple(int(m) for m in coefficients)
        if not ct:
            raise DomainError("a hyperplane needs at least one coefficient")
        if any(m < 1 for m in ct):
            raise DomainError(f"coefficients must be positive, got {ct}")
        if any(a < b for a, b in zip(ct, ct[1:])):
            raise DomainError(f"coefficients must be non-increasing, got {ct}")
        object.__setattr__(self, "coefficients", ct)
        object.__setattr__(self, "constant", int(constant))

    def __str__(self) -> str:
        lhs = " + ".join(
            f"s{i}" if m == 1 else f"{m}*s{i}" for i, m in enumerate(self.coefficients, start=1)
        )
        return f"{lhs} = {self.constant}"

    def evaluate(self, point: Sequence[float]) -> float:
        """Left side minus right side at the given point (0 means on the plane)."""
        if len(point) < len(self.coefficients):
            raise DomainError(
                f"need at least {len(self.coefficients)} coordinates, got {len(point)}"
            )
        return sum(m * x for m, x in zip(self.coefficients, point)) - self.constant

    def to_json(self) -> dict:
        return {"coeffs": list(self.coefficients), "constant": self.constant}


def perm_min_sequence(sigma: Sequence[int]) -> tuple[int, ...]:
    """Running minima (min of the first i entries) of a permutation of 1..r.

    The result is non-increasing and always ends at 1.
    """
    r = len(sigma)
    if r == 0 or sorted(sigma) != list(range(1, r + 1)):
        raise DomainError(f"{tuple(sigma)} is not a permutation of 1..r for any r >= 1")
    out = []
    cur = sigma[0]
    for v in sigma:
        cur = min(cur, v)
        out.append(cur)
    return tuple(out)


def pole_hyperplanes(r: int, k_max: int) -> frozenset[Hyperplane]:
    """All candidate pole hyperplanes at depth r with constants down to (i+1)-k_max.

    Union over every permutation sigma of 1..r, every prefix length i, and
    every k in 1..k_max of the plane with coefficients perm_min_sequence(sigma)[:i]
    and constant (i+1)-k.  Identical planes from different permutations are
    deduplicated.
    """
    if r < 1:
        raise DomainError(f"depth must be >= 1, got {r}")
    if k_max < 1:
        raise DomainError(f"k_max must be >= 1, got {k_max}")
    if r > _MAX_R:
        raise CapacityError(f"depth {r} exceeds the permutation enumeration cap {_MAX_R}")
    out = set()
    for sigma in permutations(range(1, r + 1)):
        mins = perm_min_sequence(sigma)
        for i in range(1, r + 1):
            for k in range(1, k_max + 1):
                out.add(Hyperplane(mins[:i], (i + 1) - k))
    return frozenset(out)


def depth1_value(s):
    """Exact depth-1 tail integral: int_1^oo x^(-s) dx = 1/(s-1) for s > 1.

    Exact over the rationals when given int or Fraction, float otherwise.
    """
    if isinstance(s, (int, Fraction)):
        if s <= 1:
            raise DomainError(f"requires s > 1, got {s}")
        return 1 / (Fraction(s) - 1)
    s = float(s)
    if not s > 1:
        raise DomainError(f"requires s > 1, got {s}")
    return 1.0 / (s - 1.0)
