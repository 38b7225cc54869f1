"""Roman domination numbers of cylinders P_m x C_n from transfer-matrix powers.

* ``roman_number`` -- exact value for fixed (m, n): min over the diagonal of A^n.
* ``find_recurrence`` -- search the powers A^1..A^K for A^(n0+alpha) = beta (x) A^n0.
* ``solve_formula`` -- turn a recurrence into a closed form valid for every n >= 3.
* ``lower_bound`` / ``verify_loss_lemma`` -- the loss-based bound for m, n >= 10.
"""
from __future__ import annotations

import functools
import hashlib
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._kernel import INF_SENTINEL
from .tropical import (
    MemorySink,
    PowerStats,
    TropMatrix,
    diagonal_of_product,
    min_diagonal,
    power_sequence,
    shift_difference,
    trop_power,
)
from .transfer import DEFAULT_MEMORY_BUDGET, build_transfer_matrix
from .words import BORDER, STANDARD

DEFAULT_MAX_POWER = 50
MIN_N = 3

__all__ = [
    "RecurrenceResult",
    "RomanFormula",
    "border_loss",
    "find_recurrence",
    "lower_bound",
    "min_diagonal",
    "roman_number",
    "roman_numbers",
    "solve_formula",
    "verify_loss_lemma",
]


@functools.lru_cache(maxsize=4)
def transfer_matrix(m: int, variant: str = STANDARD, memory_budget: int | None = DEFAULT_MEMORY_BUDGET) -> TropMatrix:
    return build_transfer_matrix(m, variant, memory_budget)[1]


def roman_number(m: int, n: int, threads: int | None = None, memory_budget: int | None = DEFAULT_MEMORY_BUDGET) -> int:
    """gamma_R(P_m x C_n) as the smallest diagonal entry of A(G)^n."""
    if n < MIN_N:
        raise ValueError(f"n must be >= {MIN_N}, got {n}")
    a = transfer_matrix(m, STANDARD, memory_budget)
    return diagonal_of_product(trop_power(a, n - 1, threads), a)


def roman_numbers(m: int, ns, threads: int | None = None, memory_budget: int | None = DEFAULT_MEMORY_BUDGET) -> dict[int, int]:
    """gamma_R for several n at once, sharing one power sequence."""
    ns = sorted(set(ns))
    if ns and ns[0] < MIN_N:
        raise ValueError(f"n must be >= {MIN_N}")
    a = transfer_matrix(m, STANDARD, memory_budget)
    wanted = set(ns)
    out = {}
    for k, power in power_sequence(a, ns[-1] - 1, threads=threads):
        if k + 1 in wanted:
            out[k + 1] = diagonal_of_product(power, a)
    return out


def border_loss(n: int, threads: int | None = None) -> int:
    """2 L_a(n): smallest diagonal entry of the n-th power of the border matrix."""
    if n < MIN_N:
        raise ValueError(f"n must be >= {MIN_N}, got {n}")
    a = transfer_matrix(4, BORDER)
    return diagonal_of_product(trop_power(a, n - 1, threads), a)


def lower_bound(m: int, n: int) -> int:
    """ceil(2 (m + 1) n / 5); a valid lower bound for m, n >= 10."""
    return -(-2 * (m + 1) * n // 5)


# ---------------------------------------------------------------------------
# recurrence search


@dataclass
class RecurrenceResult:
    found: bool
    n0: int | None
    alpha: int | None
    beta: int | None
    K_searched: int
    diagonal_minima: tuple = ()
    stats: PowerStats = field(default_factory=PowerStats, repr=False, compare=False)

    def as_tuple(self):
        return (self.n0, self.alpha, self.beta) if self.found else None

    def with_period(self, alpha: int) -> RecurrenceResult:
        """The implied recurrence for a multiple of the found period."""
        if not self.found or alpha % self.alpha:
            raise ValueError(f"{alpha} is not a multiple of the period {self.alpha}")
        k = alpha // self.alpha
        return RecurrenceResult(True, self.n0, alpha, k * self.beta, self.K_searched, self.diagonal_minima, self.stats)

    def diagonal_minimum(self, k: int):
        return self.diagonal_minima[k - 1]

    def as_dict(self) -> dict:
        return {"found": self.found, "n0": self.n0, "alpha": self.alpha, "beta": self.beta, "K": self.K_searched}


def _shift_signature(p: TropMatrix):
    """Digest that is equal for two matrices exactly when they differ by a uniform shift."""
    data = p.data
    finite = data != INF_SENTINEL
    if not finite.any():
        return None
    first = int(data.flat[int(np.argmax(finite))])
    norm = np.where(finite, data.astype(np.int64) - first, np.int64(INF_SENTINEL))
    return hashlib.sha256(norm.tobytes()).hexdigest()


def find_recurrence(a: TropMatrix, max_power: int = DEFAULT_MAX_POWER, sink=None, alpha: int | None = None,
                    threads: int | None = None, stats: PowerStats | None = None) -> RecurrenceResult:
    """Look for A^(n0+alpha) = beta (x) A^n0 among the powers up to ``max_power``.

    The smallest period wins, then the smallest n0. Passing ``alpha``
    restricts the search to that period. Every power is pushed through
    ``sink`` (in memory by default, or a ``DiskCache``).
    """
    if max_power < 2:
        raise ValueError("max_power must be >= 2")
    if alpha is not None and not 1 <= alpha < max_power:
        raise ValueError(f"alpha must lie in 1..{max_power - 1}")
    sink = sink if sink is not None else MemorySink()
    stats = stats if stats is not None else PowerStats()
    sigs = {}
    diag = []
    for k, power in power_sequence(a, max_power, sink, stats, threads):
        sigs[k] = _shift_signature(power)
        diag.append(min_diagonal(power))
    diag = tuple(diag)
    periods = [alpha] if alpha is not None else range(1, max_power)
    for per in periods:
        for n0 in range(1, max_power - per + 1):
            s0, s1 = sigs[n0], sigs[n0 + per]
            if s0 is None or s0 != s1:
                continue
            beta = shift_difference(sink.load(n0 + per, stats), sink.load(n0, stats))
            if beta is not None:
                return RecurrenceResult(True, n0, per, beta, max_power, diag, stats)
    return RecurrenceResult(False, None, None, None, max_power, diag, stats)


# ---------------------------------------------------------------------------
# closed forms


@dataclass
class RomanFormula:
    """gamma_R(P_m x C_n) for every n >= 3 from a recurrence and its base values.

    ``base`` holds the exact values for 3 <= n < max(n0, 3) + alpha; beyond
    that ``value(n + alpha) = value(n) + beta``.
    """

    m: int
    n0: int
    alpha: int
    beta: int
    base: dict

    def __post_init__(self):
        self.start = max(self.n0, MIN_N)
        missing = [n for n in range(MIN_N, self.start + self.alpha) if n not in self.base]
        if missing:
            raise ValueError(f"missing base values for n = {missing}")

    def evaluate(self, n: int) -> int:
        if n < MIN_N:
            raise ValueError(f"n must be >= {MIN_N}")
        if n < self.start + self.alpha:
            return self.base[n]
        steps = (n - self.start) // self.alpha
        return self.base[n - steps * self.alpha] + steps * self.beta

    def __call__(self, n: int) -> int:
        return self.evaluate(n)

    @property
    def slope(self) -> Fraction:
        return Fraction(self.beta, self.alpha)

    def ceiling_offsets(self) -> tuple[dict, dict]:
        """Per-residue offsets d_r with value(n) = ceil(beta n / alpha) + d_(n mod alpha) for large n.

        Returns ``(offsets, exceptions)`` where ``exceptions`` lists the small
        n for which the residue rule does not hold.
        """
        offsets = {}
        for n in range(self.start, self.start + self.alpha):
            offsets[n % self.alpha] = self.evaluate(n) - self._ceil(n)
        exceptions = {}
        for n in range(MIN_N, self.start):
            if self.evaluate(n) != self._ceil(n) + offsets[n % self.alpha]:
                exceptions[n] = self.evaluate(n)
        return offsets, exceptions

    def _ceil(self, n: int) -> int:
        return -(-self.beta * n // self.alpha)

    def simplified(self, n: int) -> int:
        offsets, exceptions = self.ceiling_offsets()
        if n in exceptions:
            return exceptions[n]
        return self._ceil(n) + offsets[n % self.alpha]

    def verify_simplification(self, n_max: int = 200) -> bool:
        return all(self.simplified(n) == self.evaluate(n) for n in range(MIN_N, n_max + 1))

    def describe(self) -> str:
        offsets, exceptions = self.ceiling_offsets()
        s = self.slope
        lead = f"ceil({s.numerator}n/{s.denominator})" if s.denominator != 1 else (
            "n" if s.numerator == 1 else f"{s.numerator}n")
        by_offset = {}
        for r in sorted(offsets):
            by_offset.setdefault(offsets[r], []).append(r)
        lines = [f"gamma_R(P_{self.m} x C_n) ="]
        for off, residues in sorted(by_offset.items()):
            term = lead if off == 0 else f"{lead} {'+' if off > 0 else '-'} {abs(off)}"
            cond = ", ".join(map(str, residues))
            lines.append(f"  {term}   if n = {cond} (mod {self.alpha})")
        for n, v in sorted(exceptions.items()):
            lines.append(f"  {v}   if n = {n}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        offsets, exceptions = self.ceiling_offsets()
        return {
            "m": self.m,
            "n0": self.n0,
            "alpha": self.alpha,
            "beta": self.beta,
            "base": {str(n): v for n, v in sorted(self.base.items())},
            "formula": {
                "slope": f"{self.beta}/{self.alpha}",
                "ceiling_offsets": {str(r): d for r, d in sorted(offsets.items())},
                "exceptions": {str(n): v for n, v in sorted(exceptions.items())},
                "text": self.describe(),
            },
        }


def solve_formula(m: int, rec: RecurrenceResult, threads: int | None = None) -> RomanFormula:
    """Closed form for gamma_R(P_m x C_n) from a standard-variant recurrence.

    Base values come from the recurrence's recorded diagonal minima when it
    covers them, otherwise from ``roman_number``.
    """
    if not rec.found:
        raise ValueError("no recurrence to solve")
    top = max(rec.n0, MIN_N) + rec.alpha
    ns = range(MIN_N, top)
    if len(rec.diagonal_minima) >= top - 1:
        base = {n: rec.diagonal_minimum(n) for n in ns}
    else:
        base = roman_numbers(m, ns, threads)
    return RomanFormula(m=m, n0=rec.n0, alpha=rec.alpha, beta=rec.beta, base=base)


# ---------------------------------------------------------------------------
# border block loss


def verify_loss_lemma(n_lo: int, n_hi: int, max_power: int = DEFAULT_MAX_POWER, sink=None,
                      threads: int | None = None) -> dict:
    """Check 2 L_a(n) = n on [n_lo, n_hi] and find the recurrence of the border matrix.

    2 L_a(n) is the smallest diagonal entry of the n-th power of the border
    transfer matrix. The report separates the equality from the weaker
    2 L_a(n) >= n, which is all the lower bound needs.
    """
    if not 10 <= n_lo <= n_hi:
        raise ValueError("need 10 <= n_lo <= n_hi")
    a = transfer_matrix(4, BORDER)
    rec = find_recurrence(a, max(max_power, n_hi), sink=sink, threads=threads)
    rows = []
    for n in range(n_lo, n_hi + 1):
        value = rec.diagonal_minimum(n)
        rows.append({"n": n, "twice_min_loss": value, "equals_n": value == n, "at_least_n": value >= n})
    all_equal = all(r["equals_n"] for r in rows)
    all_at_least = all(r["at_least_n"] for r in rows)
    # a statement about n carries over to every larger n once a full period
    # past n0 is checked: equality needs beta == alpha, the bound beta >= alpha
    covered = rec.found and n_lo <= rec.n0 and rec.n0 + rec.alpha - 1 <= n_hi
    return {
        "rows": rows,
        "all_equal": all_equal,
        "all_at_least_n": all_at_least,
        "mismatches": [r["n"] for r in rows if not r["equals_n"]],
        "recurrence": rec.as_dict(),
        "holds_for_all_n_from": n_lo if covered and all_equal and rec.beta == rec.alpha else None,
        "bound_holds_for_all_n_from": n_lo if covered and all_at_least and rec.beta >= rec.alpha else None,
        "stats": rec.stats.as_dict(),
    }
