"""Cross-verification suites: every exact identity is re-checked numerically.

Each suite produces an ordered list of CheckResult rows.  Suites:

    shuffle    product rule: value(w1 shuffled w2) == value(w1) * value(w2)
    embedding  zeta(k_1..k_r) == zeta(..., k_r - 1, 2) + zeta(..., k_r, 2)
    unitcube   all-ones unit-cube integral == zeta(1,..,1,2) at each depth
    bounds     0 < numeric value < the a-priori convergence bound, strictly
    reduction  exact reduction output re-evaluates to the quadrature value;
               emitted basis ids sum to the depth; generator counts are 2^(r-1)

Independent checks may run concurrently (--jobs); result order is fixed by
construction order regardless of completion order.  The corrupt flag
deliberately mis-states one expected constant so callers can watch the
harness fail; it must never pass.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .compositions import (
    Composition,
    admissible_compositions,
    composition_from_word,
    convergence_bound,
    word_from_composition,
)
from .errors import DomainError
from .quad import ShiftedCMZV, default_tolerance, eval_numeric, eval_unit_cube_ones
from .reduce import basis_ids, reduce_to_basis
from .shuffle import shuffle, z_map

SUITES = ("shuffle", "embedding", "unitcube", "bounds", "reduction")


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"suite": self.suite, "name": self.name, "passed": self.passed, "detail": self.detail}


def _admissible_words(max_weight: int) -> list[str]:
    out = []
    for w in range(2, max_weight + 1):
        out.extend(word_from_composition(c) for c in admissible_compositions(w))
    return out


def _value_of_image(image, per_term_tol: float, depth_cap: int) -> float:
    total = float(image.constant)
    for comp, coeff in image:
        total += float(coeff) * eval_numeric(comp, tol=per_term_tol, depth_cap=depth_cap).value
    return total


def _basis_evaluator(tol: float, depth_cap: int):
    def evaluate(ids) -> float:
        exps = Composition((1,) * (len(ids) - 1) + (2,))
        return eval_numeric(ShiftedCMZV(ids, exps), tol=tol, depth_cap=depth_cap).value

    return evaluate


def suite_shuffle(max_weight: int = 5, tol: float = 1e-5, depth_cap: int = 6) -> list:
    """Numeric product rule for every unordered pair of admissible words with
    total weight <= max_weight."""

    words = _admissible_words(max_weight - 2)
    pairs = [
        (w1, w2)
        for i, w1 in enumerate(words)
        for w2 in words[i:]
        if len(w1) + len(w2) <= max_weight
    ]

    def run(pair):
        w1, w2 = pair
        image = z_map(shuffle(w1, w2))
        mass = float(sum(abs(q) for _, q in image)) or 1.0
        lhs = _value_of_image(image, tol / (2.0 * mass), depth_cap)
        rhs = (
            eval_numeric(composition_from_word(w1), tol=tol / 8.0, depth_cap=depth_cap).value
            * eval_numeric(composition_from_word(w2), tol=tol / 8.0, depth_cap=depth_cap).value
        )
        diff = abs(lhs - rhs)
        return CheckResult(
            "shuffle",
            f"{w1} shuffled {w2}",
            diff <= tol,
            f"lhs={lhs:.10f} rhs={rhs:.10f} diff={diff:.3e} tol={tol:.1e}",
        )

    return [(f"{w1}|{w2}", run, (w1, w2)) for w1, w2 in pairs]


def suite_embedding(max_weight: int = 5, tol: float = 1e-6, depth_cap: int = 6) -> list:
    """One-step depth raising for every admissible composition up to max_weight."""
    from .reduce import depth_embedding

    comps = [c for w in range(2, max_weight + 1) for c in admissible_compositions(w)]

    def run(c):
        lo, hi = depth_embedding(c)
        lhs = eval_numeric(c, tol=tol / 4.0, depth_cap=depth_cap).value
        rhs = (
            eval_numeric(lo, tol=tol / 4.0, depth_cap=depth_cap).value
            + eval_numeric(hi, tol=tol / 4.0, depth_cap=depth_cap).value
        )
        diff = abs(lhs - rhs)
        return CheckResult(
            "embedding",
            f"{c} = {lo} + {hi}",
            diff <= tol,
            f"lhs={lhs:.10f} rhs={rhs:.10f} diff={diff:.3e} tol={tol:.1e}",
        )

    return [(str(c), run, c) for c in comps]


def suite_unitcube(max_depth: int = 4, tol: float = 1e-6, depth_cap: int = 6) -> list:
    """Unit-cube all-ones integral against the semi-infinite form, r = 2..max_depth."""

    def run(r):
        cube = eval_unit_cube_ones(r, tol=tol / 4.0)
        semi = eval_numeric(
            Composition((1,) * (r - 1) + (2,)), tol=tol / 4.0, depth_cap=depth_cap
        )
        diff = abs(cube.value - semi.value)
        return CheckResult(
            "unitcube",
            f"depth {r}",
            diff <= tol,
            f"cube={cube.value:.10f} semi={semi.value:.10f} diff={diff:.3e} tol={tol:.1e}",
        )

    return [(f"r={r}", run, r) for r in range(2, max_depth + 1)]


def suite_bounds(max_weight: int = 5, tol: float = 1e-6, depth_cap: int = 6) -> list:
    """Numeric value strictly inside (0, convergence_bound) for every
    admissible composition up to max_weight."""
    comps = [c for w in range(2, max_weight + 1) for c in admissible_compositions(w)]

    def run(c):
        bound = float(convergence_bound(tuple(float(k) for k in c.parts)))
        val = eval_numeric(c, tol=default_tolerance(c.depth), depth_cap=depth_cap).value
        # depth 1 saturates the bound exactly (the bound IS the value there)
        ok = 0.0 < val < bound if c.depth >= 2 else 0.0 < val <= bound
        return CheckResult(
            "bounds", str(c), ok, f"value={val:.10f} bound={bound:.10f} ok={ok}"
        )

    return [(str(c), run, c) for c in comps]


def suite_reduction(
    max_weight: int = 5,
    tol: float = 1e-6,
    depth_cap: int = 6,
    seed: int = 0,
) -> list:
    """Exact reduction vs quadrature, basis-id bookkeeping, generator counts,
    and seeded random shifted-bound spot checks."""
    comps = [c for w in range(2, max_weight + 1) for c in admissible_compositions(w)]
    basis_tol = tol / 4.0

    def run_comp(c):
        sc = reduce_to_basis(c, depth_cap=depth_cap)
        bad_ids = [ids for ids, _ in sc.basis if sum(ids) != c.depth or any(m != int(m) for m in ids)]
        sym = sc.evaluate(_basis_evaluator(basis_tol, depth_cap))
        num = eval_numeric(c, tol=tol / 4.0, depth_cap=depth_cap).value
        diff = abs(sym - num)
        ok = diff <= tol and not bad_ids
        detail = f"symbolic={sym:.10f} numeric={num:.10f} diff={diff:.3e} tol={tol:.1e}"
        if bad_ids:
            detail += f" bad_ids={bad_ids}"
        return CheckResult("reduction", str(c), ok, detail)

    def run_counts(r):
        n = sum(1 for _ in basis_ids(r))
        return CheckResult(
            "reduction",
            f"generator count depth {r}",
            n == 2 ** (r - 1),
            f"count={n} expected={2 ** (r - 1)}",
        )

    def run_shifted(args):
        m1, m2 = args
        sc = reduce_to_basis(Composition((1, 2)), (m1, m2))
        sym = sc.evaluate(None)
        num = eval_numeric(
            ShiftedCMZV((m1, m2), Composition((1, 2))), tol=tol / 4.0, depth_cap=depth_cap
        ).value
        diff = abs(sym - num)
        return CheckResult(
            "reduction",
            f"shifted (1,2) bounds ({m1},{m2})",
            diff <= tol,
            f"symbolic={sym:.10f} numeric={num:.10f} diff={diff:.3e} tol={tol:.1e}",
        )

    checks = [(str(c), run_comp, c) for c in comps]
    checks.extend((f"count r={r}", run_counts, r) for r in range(1, 11))
    rng = random.Random(seed)
    for _ in range(5):
        m1, m2 = rng.randint(1, 6), rng.randint(1, 6)
        checks.append((f"shifted {m1},{m2}", run_shifted, (m1, m2)))
    return checks


def run_suite(
    name: str,
    max_weight: int | None = None,
    tol: float | None = None,
    depth_cap: int = 6,
    jobs: int = 1,
    seed: int = 0,
    corrupt: bool = False,
) -> list[CheckResult]:
    """Run one suite (or 'all'), returning results in deterministic order."""
    defaults = {
        "shuffle": (5, 1e-5),
        "embedding": (5, 1e-6),
        "unitcube": (4, 1e-6),
        "bounds": (5, 1e-6),
        "reduction": (5, 1e-6),
    }
    names = SUITES if name == "all" else (name,)
    checks = []
    for n in names:
        if n not in defaults:
            raise DomainError(f"unknown suite {name!r}; choose from {('all',) + SUITES}")
        mw, dtol = defaults[n]
        mw = max_weight if max_weight is not None else mw
        t = tol if tol is not None else dtol
        if n == "shuffle":
            checks.extend(suite_shuffle(mw, t, depth_cap))
        elif n == "embedding":
            checks.extend(suite_embedding(mw, t, depth_cap))
        elif n == "unitcube":
            checks.extend(suite_unitcube(min(mw, 4), t, depth_cap))
        elif n == "bounds":
            checks.extend(suite_bounds(mw, t, depth_cap))
        else:
            checks.extend(suite_reduction(mw, t, depth_cap, seed=seed))

    if corrupt:
        # harness self-test: a deliberately wrong constant must be caught
        def run_corrupt(_):
            wrong = 0.6941471805599453  # log 2 corrupted in the third digit
            val = eval_numeric(Composition((1, 2)), tol=1e-9).value
            diff = abs(val - wrong)
            return CheckResult(
                "self-test",
                "corrupted constant for (1,2)",
                diff <= 1e-6,
                f"value={val:.10f} claimed={wrong:.10f} diff={diff:.3e}",
            )

        checks.append(("corrupt", run_corrupt, None))

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda item: item[1](item[2]), checks))
    return [fn(arg) for _, fn, arg in checks]
