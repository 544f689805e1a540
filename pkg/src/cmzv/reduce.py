"""Exact reduction of iterated tail integrals to a depth-graded basis.

A GenTerm is a rational multiple of an iterated integral over v_i in
[m_i, oo), i = 1..s, whose integrand is a product of factors

    (c + v_1 + ... + v_i)^(-a)        encoded as (index i, shift c, exponent a).

The standard value zeta_C(k_1,...,k_r) is the GenTerm with unit bounds and
one shift-0 factor (i, 0, k_i) per index.  Repeated integration by parts on
the leftmost index with exponent >= 2 rewrites any admissible term, exactly
over Q, into the span of

    1                                      (depth-0 rationals),
    log p  for primes p                    (from the one-variable tails), and
    B_(m_1,...,m_s) = zeta_{m_1,...,m_s}(1,...,1,2), s >= 3  (opaque basis).

Depth-2 terms resolve in closed form: zeta_{m1,m2}(1,2) = (1/m2) log((m1+m2)/m1).
Logs are stored factored over primes, so e.g. log 4 and 2 log 2 are identical.

One step of the rewrite, at position p (sole factor (p, 0, a), a >= 2):

    boundary:   variable p is integrated out at its lower bound; every deeper
                factor's shift grows by m_p, and (for p >= 2) a new factor
                (p-1, m_p, a-1) appears; coefficient gains m_p^(1-a)/(a-1)
                when p = 1, else 1/(a-1).
    derivative: one term per deeper factor j, with exponent a-1 at p,
                a_j + 1 at j, and coefficient factor -a_j/(a - 1).

Boundary terms acquire one index carrying two factors; an exact partial
fraction expansion splits it again.  At the last index, where exponent-1
pieces would individually diverge, matched pairs 1/(w+c) - 1/(w+c') are
instead converted exactly via

    1/((w+c)(w+c')) = int_{c'-c}^oo (w + c + t)^(-2) dt      (c < c')

into one-variable-longer all-ones-then-2 terms, which is precisely how the
basis elements arise.  Every intermediate term stays convergent and the
total bound mass sum(m_i) is conserved, which is why basis ids emitted for a
depth-r input always satisfy sum(m_i) = r.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .compositions import Composition, compositions_of, is_admissible
from .errors import CapacityError, DivergenceError, DomainError, RewriteError

Factor = tuple[int, Fraction, int]  # (index, shift, exponent)


@dataclass(frozen=True)
class GenTerm:
    """coeff times a convergent iterated tail integral (see module docstring).

    Invariants enforced here: bounds positive; shifts >= 0; exponents >= 1;
    every variable index carries at least one factor; and the suffix
    conditions sum(exponents at indices >= j) > s - j + 1 hold for every j,
    so the represented integral converges.
    """

    coeff: Fraction
    bounds: tuple[Fraction, ...]
    factors: tuple[Factor, ...]

    def __init__(
        self,
        coeff: Fraction | int,
        bounds: Sequence[Fraction | int],
        factors: Sequence[tuple[int, Fraction | int, int]],
    ):
        coeff = Fraction(coeff)
        bt = tuple(Fraction(b) for b in bounds)
        ft = tuple(sorted((int(i), Fraction(c), int(a)) for i, c, a in factors))
        s = len(bt)
        if any(b <= 0 for b in bt):
            raise DomainError(f"lower bounds must be positive, got {bt}")
        seen = set()
        for i, c, a in ft:
            if not 1 <= i <= s:
                raise DomainError(f"factor index {i} outside 1..{s}")
            if c < 0:
                raise DomainError(f"factor shift must be >= 0, got {c}")
            if a < 1:
                raise DomainError(f"factor exponent must be >= 1, got {a}")
            seen.add(i)
        if len(seen) != s:
            raise DomainError("every variable index needs at least one factor")
        for j in range(1, s + 1):
            suffix = sum(a for i, _, a in ft if i >= j)
            if not suffix > s - j + 1:
                raise DivergenceError(
                    f"suffix exponent sum {suffix} at index {j} needs > {s - j + 1}; "
                    "the represented integral diverges"
                )
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "bounds", bt)
        object.__setattr__(self, "factors", ft)

    @classmethod
    def from_composition(
        cls, c: Composition, bounds: Sequence[Fraction | int] | None = None
    ) -> "GenTerm":
        if bounds is None:
            bounds = (Fraction(1),) * c.depth
        return cls(Fraction(1), bounds, [(i + 1, Fraction(0), k) for i, k in enumerate(c.parts)])

    @property
    def depth(self) -> int:
        return len(self.bounds)

    @property
    def weight(self) -> int:
        return sum(a for _, _, a in self.factors)

    def scaled(self, q: Fraction | int) -> "GenTerm":
        return GenTerm(self.coeff * Fraction(q), self.bounds, self.factors)

    def pure_exponents(self) -> tuple[int, ...] | None:
        """Exponent vector when this is a plain shifted value: one factor per
        index, all shifts zero.  None otherwise."""
        if len(self.factors) != self.depth:
            return None
        exps = []
        for pos, (i, c, a) in enumerate(self.factors, start=1):
            if i != pos or c != 0:
                return None
            exps.append(a)
        return tuple(exps)


@dataclass(frozen=True)
class SymbolicConstant:
    """Exact value: rational + sum(q_p log p) + sum(q_m B_m).

    logs are keyed by prime so equal reals have equal representations;
    basis ids are the bound tuples of all-ones-then-2 generators of depth >= 3.
    """

    rational: Fraction
    logs: tuple[tuple[int, Fraction], ...]
    basis: tuple[tuple[tuple[Fraction, ...], Fraction], ...]

    def __init__(
        self,
        rational: Fraction | int = 0,
        logs: Mapping[int, Fraction] | Sequence[tuple[int, Fraction]] = (),
        basis: Mapping[tuple, Fraction] | Sequence[tuple[tuple, Fraction]] = (),
    ):
        log_items = logs.items() if isinstance(logs, Mapping) else logs
        basis_items = basis.items() if isinstance(basis, Mapping) else basis
        lacc: dict[int, Fraction] = {}
        for p, q in log_items:
            q = Fraction(q)
            if q:
                lacc[int(p)] = lacc.get(int(p), Fraction(0)) + q
        bacc: dict[tuple[Fraction, ...], Fraction] = {}
        for ids, q in basis_items:
            q = Fraction(q)
            key = tuple(Fraction(m) for m in ids)
            if any(m <= 0 for m in key):
                raise DomainError(f"basis ids must be positive, got {key}")
            if q:
                bacc[key] = bacc.get(key, Fraction(0)) + q
        object.__setattr__(self, "rational", Fraction(rational))
        object.__setattr__(self, "logs", tuple(sorted((p, q) for p, q in lacc.items() if q)))
        object.__setattr__(self, "basis", tuple(sorted((k, q) for k, q in bacc.items() if q)))

    def __add__(self, other: "SymbolicConstant") -> "SymbolicConstant":
        return SymbolicConstant(
            self.rational + other.rational,
            tuple(self.logs) + tuple(other.logs),
            tuple(self.basis) + tuple(other.basis),
        )

    def scaled(self, q: Fraction | int) -> "SymbolicConstant":
        q = Fraction(q)
        return SymbolicConstant(
            self.rational * q,
            [(p, c * q) for p, c in self.logs],
            [(k, c * q) for k, c in self.basis],
        )

    def evaluate(self, basis_values=None) -> float:
        """Float value; basis_values maps an id tuple to a float and is only
        needed when opaque basis terms are present."""
        total = float(self.rational)
        for p, q in self.logs:
            total += float(q) * math.log(p)
        for ids, q in self.basis:
            if basis_values is None:
                raise DomainError(f"no evaluator supplied for basis id {ids}")
            total += float(q) * basis_values(ids)
        return total

    def to_json(self) -> dict:
        return {
            "rational": str(self.rational),
            "logs": {str(p): str(q) for p, q in self.logs},
            "basis": {",".join(str(m) for m in ids): str(q) for ids, q in self.basis},
        }


def _factored_log(value: Fraction) -> list[tuple[int, Fraction]]:
    """log(value) as a Z-combination of logs of primes; value must be > 0."""
    if value <= 0:
        raise DomainError(f"log argument must be positive, got {value}")
    out: dict[int, Fraction] = {}
    for n, sign in ((value.numerator, 1), (value.denominator, -1)):
        d = 2
        while d * d <= n:
            while n % d == 0:
                out[d] = out.get(d, Fraction(0)) + sign
                n //= d
            d += 1
        if n > 1:
            out[n] = out.get(n, Fraction(0)) + sign
    return list(out.items())


def absorb_shifts(t: GenTerm) -> GenTerm:
    """Push the minimal shift at each index into the lower bounds.

    Substitutes y_i = v_i + d_i - d_{i-1} with d_i = min shift at index i,
    which lowers every shift at index i by d_i and moves the difference into
    the bounds.  Applied only when all resulting bounds stay positive;
    otherwise the term is returned unchanged.
    """
    s = t.depth
    if s == 0:
        return t
    d = [Fraction(0)] * (s + 1)
    for i in range(1, s + 1):
        d[i] = min(c for idx, c, _ in t.factors if idx == i)
    if all(di == 0 for di in d):
        return t
    new_bounds = tuple(t.bounds[i - 1] + d[i] - d[i - 1] for i in range(1, s + 1))
    if any(b <= 0 for b in new_bounds):
        return t
    new_factors = [(i, c - d[i], a) for i, c, a in t.factors]
    return GenTerm(t.coeff, new_bounds, new_factors)


def _ibp_at(t: GenTerm, p: int) -> tuple[GenTerm, ...]:
    """One integration-by-parts step on variable p (see module docstring).

    Requires index p to carry exactly one factor, with shift 0 and exponent
    >= 2.  Factors at indices < p do not involve v_p and ride along; every
    factor at an index > p contributes one derivative term.  Returns the
    boundary term (shift-absorbed) followed by the derivative terms.
    """
    s = t.depth
    if not 1 <= p <= s:
        raise RewriteError(f"no variable {p} in a depth-{s} term")
    at_p = [(i, c, a) for i, c, a in t.factors if i == p]
    if len(at_p) != 1:
        raise RewriteError(f"index {p} must carry exactly one factor, has {len(at_p)}")
    _, shift_p, a_p = at_p[0]
    if shift_p != 0:
        raise RewriteError(f"factor at index {p} must have shift 0, has {shift_p}")
    if a_p < 2:
        raise RewriteError(f"factor at index {p} needs exponent >= 2, has {a_p}")
    m_p = t.bounds[p - 1]
    scale = Fraction(1, a_p - 1)

    boundary_factors: list[tuple[int, Fraction, int]] = []
    for i, c, a in t.factors:
        if i < p:
            boundary_factors.append((i, c, a))
        elif i > p:
            boundary_factors.append((i - 1, c + m_p, a))
    boundary_coeff = t.coeff * scale
    if p == 1:
        boundary_coeff *= m_p ** (1 - a_p)
    else:
        boundary_factors.append((p - 1, m_p, a_p - 1))
    boundary_bounds = t.bounds[: p - 1] + t.bounds[p:]
    boundary = absorb_shifts(GenTerm(boundary_coeff, boundary_bounds, boundary_factors))

    derivatives = []
    base = [(i, c, a) for i, c, a in t.factors if i != p]
    for j, (i, c, a) in enumerate(base):
        if i <= p:
            continue
        new_factors = list(base)
        new_factors[j] = (i, c, a + 1)
        new_factors.append((p, Fraction(0), a_p - 1))
        derivatives.append(GenTerm(t.coeff * scale * (-a), t.bounds, new_factors))
    return (boundary, *derivatives)


def ibp_step(t: GenTerm) -> tuple[GenTerm, ...]:
    """Integration by parts on the first variable.

    Precondition: the first variable carries a single shift-0 factor with
    exponent a_1 >= 2.  Returns the boundary term (bound m_1 merged into its
    successor after shift absorption, coefficient m_1^(1-a_1)/(a_1-1)) plus
    one derivative term per remaining factor (exponent a_1 - 1 at index 1,
    a_j + 1 at factor j, coefficient scaled by -a_j/(a_1-1)).
    """
    return _ibp_at(t, 1)


def partial_fractions(
    factors: Sequence[tuple[Fraction | int, int]],
) -> tuple[tuple[Fraction, int, Fraction], ...]:
    """Exact expansion of prod 1/(u+c_i)^{a_i} into sum beta/(u+c)^e pieces.

    Repeated shifts are merged (exponents added) first.  Returns
    (shift, exponent, coefficient) triples sorted by shift then exponent.
    """
    merged: dict[Fraction, int] = {}
    for c, a in factors:
        c = Fraction(c)
        a = int(a)
        if a < 1:
            raise DomainError(f"exponents must be >= 1, got {a}")
        merged[c] = merged.get(c, 0) + a
    if not merged:
        raise DomainError("need at least one factor")
    if len(merged) == 1:
        ((c, a),) = merged.items()
        return ((c, a, Fraction(1)),)

    out: list[tuple[Fraction, int, Fraction]] = []
    for c_i, a_i in merged.items():
        # Coefficients at shift c_i come from the Taylor expansion, in
        # t = u + c_i, of prod_{j != i} (t + (c_j - c_i))^(-a_j) up to t^(a_i-1).
        series = [Fraction(0)] * a_i
        series[0] = Fraction(1)
        for c_j, a_j in merged.items():
            if c_j == c_i:
                continue
            d = c_j - c_i
            expand = [
                Fraction((-1) ** n * math.comb(a_j + n - 1, n), 1) / d ** (a_j + n)
                for n in range(a_i)
            ]
            series = [
                sum(series[k] * expand[n - k] for k in range(n + 1)) for n in range(a_i)
            ]
        for e in range(1, a_i + 1):
            beta = series[a_i - e]
            if beta:
                out.append((c_i, e, beta))
    return tuple(sorted(out))


def integrate_tail(
    pieces: Sequence[tuple[Fraction | int, int, Fraction | int]], m: Fraction | int
) -> SymbolicConstant:
    """Exact integral over [m, oo) of sum beta/(u+c)^e.

    Exponent-1 coefficients must cancel exactly (otherwise the tail
    diverges); their combined contribution is -sum beta log(m+c), stored
    factored over primes.  Exponents >= 2 integrate to rationals
    beta (m+c)^(1-e)/(e-1).
    """
    m = Fraction(m)
    if m <= 0:
        raise DomainError(f"lower bound must be positive, got {m}")
    rational = Fraction(0)
    logs: list[tuple[int, Fraction]] = []
    residue = Fraction(0)
    for c, e, beta in pieces:
        c = Fraction(c)
        beta = Fraction(beta)
        e = int(e)
        if e == 1:
            residue += beta
            logs.extend((p, -beta * mult) for p, mult in _factored_log(m + c))
        else:
            rational += beta * (m + c) ** (1 - e) / (e - 1)
    if residue != 0:
        raise DivergenceError(
            f"exponent-1 coefficients sum to {residue}, not 0; the tail integral diverges"
        )
    return SymbolicConstant(rational, logs)


def depth_embedding(c: Composition) -> tuple[Composition, Composition]:
    """The exact identity zeta(k_1..k_r) = zeta(..., k_r - 1, 2) + zeta(..., k_r, 2).

    Both right-hand targets are admissible, one depth higher.
    """
    if not is_admissible(c):
        raise DivergenceError(f"{c} is not admissible")
    k = c.parts
    return (
        Composition(k[:-1] + (k[-1] - 1, 2)),
        Composition(k + (2,)),
    )


def basis_ids(depth: int) -> Iterator[tuple[int, ...]]:
    """All 2^(depth-1) bound tuples (m_1,...,m_s), sum m_i = depth, that can
    label a generator zeta_{m_1..m_s}(1,..,1,2) at this depth."""
    for c in compositions_of(depth):
        yield c.parts


def depth2_closed_form(m1: Fraction | int, m2: Fraction | int) -> SymbolicConstant:
    """zeta_{m1,m2}(1,2) = (1/m2) log((m1+m2)/m1), factored over primes."""
    m1 = Fraction(m1)
    m2 = Fraction(m2)
    if m1 <= 0 or m2 <= 0:
        raise DomainError("bounds must be positive")
    return SymbolicConstant(0, [(p, Fraction(mult, 1) / m2) for p, mult in _factored_log((m1 + m2) / m1)])


_REDUCE_CACHE: dict[tuple, SymbolicConstant] = {}
_reduce_lock = threading.Lock()


def clear_caches() -> None:
    with _reduce_lock:
        _REDUCE_CACHE.clear()


def _split_multi_factor(t: GenTerm) -> tuple[list[GenTerm], SymbolicConstant]:
    """Resolve the unique index of t carrying two or more factors.

    Inner indices split by plain partial fractions (every piece converges on
    its own).  If the multi-factor index is the last one, exponent-1 pieces
    are pairwise combined into one-variable-longer all-ones-then-2 terms as
    described in the module docstring.  Depth-1 terms integrate out exactly.
    Returns (terms to keep rewriting, immediately resolved constant part).
    """
    s = t.depth
    multi = [i for i in range(1, s + 1) if sum(1 for f in t.factors if f[0] == i) > 1]
    if len(multi) != 1:
        raise RewriteError(f"expected exactly one multi-factor index, found {multi}")
    q_idx = multi[0]
    group = [(c, a) for i, c, a in t.factors if i == q_idx]
    rest = [f for f in t.factors if f[0] != q_idx]
    pieces = partial_fractions(group)

    if s == 1:
        return [], integrate_tail(pieces, t.bounds[0]).scaled(t.coeff)

    out: list[GenTerm] = []
    if q_idx < s:
        for c, e, beta in pieces:
            out.append(
                absorb_shifts(
                    GenTerm(t.coeff * beta, t.bounds, rest + [(q_idx, c, e)])
                )
            )
        return out, SymbolicConstant()

    # Last index: exponent >= 2 pieces stand alone; exponent-1 pieces would
    # diverge individually and telescope into paired differences instead.
    singles = sorted((c, beta) for c, e, beta in pieces if e == 1)
    for c, e, beta in pieces:
        if e >= 2:
            out.append(
                absorb_shifts(GenTerm(t.coeff * beta, t.bounds, rest + [(q_idx, c, e)]))
            )
    if singles:
        if sum(beta for _, beta in singles) != 0:
            raise RewriteError("unpaired exponent-1 pieces at the last index")
        running = Fraction(0)
        for (c_lo, beta), (c_hi, _) in zip(singles, singles[1:]):
            running += beta
            if running == 0:
                continue
            # 1/((w+c_lo)(w+c_hi)) = int_{c_hi-c_lo}^oo (w + c_lo + v)^(-2) dv
            out.append(
                absorb_shifts(
                    GenTerm(
                        t.coeff * running * (c_hi - c_lo),
                        t.bounds + (c_hi - c_lo,),
                        rest + [(q_idx, c_lo, 1), (q_idx + 1, c_lo, 2)],
                    )
                )
            )
    return out, SymbolicConstant()


def reduce_to_basis(
    c: Composition,
    bounds: Sequence[Fraction | int] | None = None,
    *,
    step_budget: int = 10_000,
    depth_cap: int = 6,
) -> SymbolicConstant:
    """Exact value of an admissible iterated tail integral in the graded basis.

    Rewrites by integration by parts at the leftmost exponent >= 2 until
    every term is rational, a prime log, or an all-ones-then-2 generator of
    depth >= 3.  The step budget bounds the number of terms processed.
    """
    if not isinstance(c, Composition):
        c = Composition(c)
    if not is_admissible(c):
        raise DivergenceError(f"{c} is not admissible; nothing to reduce")
    if c.depth > depth_cap:
        raise CapacityError(f"depth {c.depth} exceeds the configured cap {depth_cap}")
    initial = GenTerm.from_composition(c, bounds)

    key = (initial.bounds, c.parts)
    with _reduce_lock:
        hit = _REDUCE_CACHE.get(key)
    if hit is not None:
        return hit

    rational = Fraction(0)
    logs: dict[int, Fraction] = {}
    basis: dict[tuple[Fraction, ...], Fraction] = {}
    budget = step_budget
    stack = [initial]

    def accumulate(sc: SymbolicConstant) -> None:
        nonlocal rational
        rational += sc.rational
        for p, q in sc.logs:
            logs[p] = logs.get(p, Fraction(0)) + q
        for ids, q in sc.basis:
            basis[ids] = basis.get(ids, Fraction(0)) + q

    while stack:
        t = stack.pop()
        if t.coeff == 0:
            continue
        budget -= 1
        if budget < 0:
            raise CapacityError(f"step budget {step_budget} exhausted reducing {c}")
        s = t.depth
        if s == 0:
            rational += t.coeff
            continue
        exps = t.pure_exponents()
        if exps is None:
            kept, resolved = _split_multi_factor(t)
            accumulate(resolved)
            stack.extend(kept)
            continue
        if s == 1:
            k = exps[0]
            if k < 2:
                raise RewriteError(f"divergent depth-1 term with exponent {k}")
            rational += t.coeff * t.bounds[0] ** (1 - k) / (k - 1)
            continue
        if s >= 3 and exps == (1,) * (s - 1) + (2,):
            basis[t.bounds] = basis.get(t.bounds, Fraction(0)) + t.coeff
            continue
        p = next(i for i, k in enumerate(exps, start=1) if k >= 2)
        stack.extend(_ibp_at(t, p))

    result = SymbolicConstant(rational, logs, basis)
    with _reduce_lock:
        _REDUCE_CACHE[key] = result
    return result
