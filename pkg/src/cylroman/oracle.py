"""Ground truth that does not go through correct words or transfer matrices.

Everything here works on explicit 0/1/2 assignments of the vertices of
P_m x C_n, indexed ``(row, column)`` from 0.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapacityError

EXHAUSTIVE_MAX_VERTICES = 16
DP_MAX_M = 4
DP_MAX_N = 30
ROW_DP_MAX_N = 7
_CHUNK_DIGITS = 12


@dataclass(frozen=True)
class CylinderGraph:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 3:
            raise ValueError(f"need m >= 1 and n >= 3, got m={self.m}, n={self.n}")

    def vertices(self):
        return [(i, j) for i in range(self.m) for j in range(self.n)]

    def neighbors(self, i: int, j: int):
        out = []
        if i > 0:
            out.append((i - 1, j))
        if i < self.m - 1:
            out.append((i + 1, j))
        out.append((i, (j - 1) % self.n))
        out.append((i, (j + 1) % self.n))
        return out

    def degree(self, i: int, j: int) -> int:
        return len(self.neighbors(i, j))

    @cached_property
    def neighbor_index(self) -> list[list[int]]:
        """Neighbours by flat index ``i * n + j``."""
        return [[a * self.n + b for a, b in self.neighbors(i, j)] for i, j in self.vertices()]


@dataclass(frozen=True)
class RomanFunction:
    values: np.ndarray  # shape (m, n), entries in {0, 1, 2}

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int8)
        if vals.ndim != 2:
            raise ValueError("values must be a 2-d grid")
        if not np.isin(vals, (0, 1, 2)).all():
            raise ValueError("values must lie in {0, 1, 2}")
        object.__setattr__(self, "values", vals)

    @property
    def weight(self) -> int:
        return int(self.values.sum(dtype=np.int64))

    def level(self, k: int) -> set:
        return {(int(i), int(j)) for i, j in zip(*np.nonzero(self.values == k))}

    def to_text(self) -> str:
        return "".join("".join(str(int(v)) for v in row) + "\n" for row in self.values)

    @classmethod
    def from_text(cls, text: str) -> RomanFunction:
        rows = [line.strip() for line in text.splitlines() if line.strip()]
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged grid")
        return cls(np.array([[int(c) for c in r] for r in rows], dtype=np.int8))


def validate_rdf(g: CylinderGraph, f: RomanFunction) -> bool:
    """Every vertex labelled 0 must have a neighbour labelled 2."""
    if f.values.shape != (g.m, g.n):
        raise ValueError(f"function has shape {f.values.shape}, graph is {(g.m, g.n)}")
    vals = f.values
    for i, j in g.vertices():
        if vals[i, j] == 0 and not any(vals[a, b] == 2 for a, b in g.neighbors(i, j)):
            return False
    return True


# ---------------------------------------------------------------------------
# exhaustive enumeration


@functools.lru_cache(maxsize=2)
def _all_assignments(width: int) -> np.ndarray:
    # row r is r written in base 3, most significant digit first
    idx = np.arange(3**width, dtype=np.int64)
    powers = 3 ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] // powers[None, :]) % 3).astype(np.int8)


def _enumerate_chunks(total: int):
    """Yield every assignment of ``total`` variables, in blocks of 3**12 rows."""
    low = min(total, _CHUNK_DIGITS)
    low_block = _all_assignments(low)
    for high in itertools.product((0, 1, 2), repeat=total - low):
        if high:
            head = np.broadcast_to(np.array(high, dtype=np.int8), (low_block.shape[0], len(high)))
            yield np.hstack([head, low_block])
        else:
            yield low_block


def _exhaustive(m: int, n: int) -> int:
    g = CylinderGraph(m, n)
    nbrs = g.neighbor_index
    best = None
    for vals in _enumerate_chunks(m * n):
        is2 = vals == 2
        ok = np.ones(vals.shape[0], dtype=bool)
        for v, nv in enumerate(nbrs):
            covered = vals[:, v] > 0
            for u in nv:
                covered |= is2[:, u]
            ok &= covered
        if ok.any():
            w = int(vals[ok].sum(axis=1, dtype=np.int32).min())
            best = w if best is None else min(best, w)
    return best


# ---------------------------------------------------------------------------
# column dynamic program
#
# A state is one column: its values and the set of its 0-vertices that are
# dominated neither vertically nor from the previous column. Those must be
# covered by a 2 in the next column.


def _column_states(m: int):
    states = []
    for vals in itertools.product((0, 1, 2), repeat=m):
        zeros = [i for i, v in enumerate(vals) if v == 0]
        open_rows = [i for i in zeros if not any(0 <= k < m and vals[k] == 2 for k in (i - 1, i + 1))]
        for r in range(len(open_rows) + 1):
            for need in itertools.combinations(open_rows, r):
                states.append((vals, frozenset(need)))
    return states


def _dp_tables(m: int):
    states = _column_states(m)
    size = len(states)
    cost = np.array([sum(v) for v, _ in states], dtype=np.float64)
    allowed = np.zeros((size, size), dtype=bool)
    for s, (sv, sneed) in enumerate(states):
        twos_s = {i for i, v in enumerate(sv) if v == 2}
        for t, (tv, tneed) in enumerate(states):
            twos_t = {i for i, v in enumerate(tv) if v == 2}
            if not sneed <= twos_t:
                continue
            open_t = {i for i, v in enumerate(tv) if v == 0
                      and not any(0 <= k < m and tv[k] == 2 for k in (i - 1, i + 1))}
            if tneed == frozenset(open_t - twos_s):
                allowed[s, t] = True
    weights = np.where(allowed, cost[None, :], np.inf)
    return states, cost, weights


def _column_dp(m: int, n: int) -> int:
    states, cost, weights = _dp_tables(m)
    best = np.inf
    for start in range(len(states)):
        dp = np.full(len(states), np.inf)
        dp[start] = cost[start]
        for _ in range(n - 1):
            dp = (dp[:, None] + weights).min(axis=0)
        # close the cycle back into the fixed first column (its cost is already counted)
        closing = dp[np.isfinite(weights[:, start])]
        if closing.size:
            best = min(best, closing.min())
    return int(best)


# ---------------------------------------------------------------------------
# row dynamic program
#
# The transpose view: walk down the path one row (a cycle of n vertices) at a
# time. A state is a row's values plus the bitmask of its 0-vertices that no
# 2 in the same row or the row above dominates; the next row must put a 2
# under each of them. Exact for every m, affordable for small n.


def _row_tables(n: int):
    rows = _all_assignments(n).astype(np.int64)
    bits = 1 << np.arange(n - 1, -1, -1, dtype=np.int64)
    twos = (rows == 2) @ bits
    zeros = (rows == 0) @ bits
    full = (1 << n) - 1
    # cyclic neighbours within the row
    near = ((twos << 1) | (twos >> 1) | ((twos & 1) << (n - 1)) | (twos >> (n - 1))) & full
    open_ = zeros & ~near
    cost = rows.sum(axis=1)
    return twos, open_, cost


def _row_dp(m: int, n: int) -> int:
    twos, open_, cost = _row_tables(n)
    size = 1 << n
    # best[T, N]: cheapest prefix whose last row has 2-mask T and open mask N
    best = np.full((size, size), np.inf)
    np.minimum.at(best, (twos, open_), cost.astype(np.float64))
    for _ in range(m - 1):
        nxt = np.full((size, size), np.inf)
        for t, need in zip(*np.nonzero(np.isfinite(best))):
            ok = (need & ~twos) == 0
            np.minimum.at(nxt, (twos[ok], open_[ok] & ~t), best[t, need] + cost[ok])
        best = nxt
    return int(best[:, 0].min())


def brute_force_gamma_R(m: int, n: int, mode: str = "auto") -> int:
    """Minimum Roman-dominating-function weight of P_m x C_n without transfer matrices.

    ``mode`` is ``"exhaustive"`` (all 3^(mn) assignments, mn <= 16),
    ``"dp"`` (column dynamic program, m <= 4, n <= 30), ``"rows"`` (dynamic
    program along the path, any m, n <= 7) or ``"auto"``.
    """
    if m < 1 or n < 3:
        raise ValueError(f"need m >= 1 and n >= 3, got m={m}, n={n}")
    if mode == "auto":
        if m * n <= EXHAUSTIVE_MAX_VERTICES:
            mode = "exhaustive"
        else:
            mode = "dp" if m <= DP_MAX_M and n <= DP_MAX_N else "rows"
    if mode == "exhaustive":
        if m * n > EXHAUSTIVE_MAX_VERTICES:
            raise CapacityError(f"exhaustive search limited to {EXHAUSTIVE_MAX_VERTICES} vertices, got {m * n}")
        return _exhaustive(m, n)
    if mode == "dp":
        if m > DP_MAX_M or n > DP_MAX_N:
            raise CapacityError(f"column DP limited to m <= {DP_MAX_M}, n <= {DP_MAX_N}")
        return _column_dp(m, n)
    if mode == "rows":
        if n > ROW_DP_MAX_N:
            raise CapacityError(f"row DP limited to n <= {ROW_DP_MAX_N}")
        return _row_dp(m, n)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# loss of the 4-row border block


def border_loss_exhaustive(n: int) -> int:
    """min over almost-RDFs g of P_4 x C_n of 5 g - 2 |D(g)|, by enumeration.

    Rows 0..2 must be Roman dominated inside the block, row 3 need not be.
    D(g) also counts the vertices of the row just below the block that are
    adjacent to a 2 in row 3.
    """
    if not 3 <= n <= 4:
        raise CapacityError("border loss enumeration supports 3 <= n <= 4")
    g = CylinderGraph(4, n)
    nbrs = g.neighbor_index
    best = None
    for vals in _enumerate_chunks(4 * n):
        is2 = vals == 2
        ok = np.ones(vals.shape[0], dtype=bool)
        dominated = np.zeros(vals.shape[0], dtype=np.int32)
        for v, nv in enumerate(nbrs):
            covered = vals[:, v] > 0
            for u in nv:
                covered |= is2[:, u]
            if v < 3 * n:
                ok &= covered
            dominated += covered
        dominated += is2[:, 3 * n:].sum(axis=1)
        loss = 5 * vals.sum(axis=1, dtype=np.int32) - 2 * dominated
        if ok.any():
            cand = int(loss[ok].min())
            best = cand if best is None else min(best, cand)
    return best


def _border_loss_matrix():
    # state: (column values, zeros of that column not dominated by itself or
    # the previous column); the arc weight is the loss charged when the
    # target column is appended, including deferred credit for the source
    m = 4
    states = []
    for vals in itertools.product((0, 1, 2), repeat=m):
        open_rows = [i for i, v in enumerate(vals) if v == 0
                     and not any(0 <= k < m and vals[k] == 2 for k in (i - 1, i + 1))]
        for r in range(len(open_rows) + 1):
            for rest in itertools.combinations(open_rows, r):
                states.append((vals, frozenset(rest)))
    size = len(states)
    w = np.full((size, size), np.inf)
    for s, (sv, sopen) in enumerate(states):
        twos_s = {i for i, v in enumerate(sv) if v == 2}
        for t, (tv, topen) in enumerate(states):
            twos_t = {i for i, v in enumerate(tv) if v == 2}
            # rows 0..2 must end up dominated; row 3 may stay open
            if not {i for i in sopen if i < m - 1} <= twos_t:
                continue
            open_t = {i for i, v in enumerate(tv) if v == 0
                      and not any(0 <= k < m and tv[k] == 2 for k in (i - 1, i + 1))}
            if topen != frozenset(open_t - twos_s):
                continue
            dominated = m - len(topen) + len(sopen & twos_t) + (tv[m - 1] == 2)
            w[s, t] = 5 * sum(tv) - 2 * dominated
    return w


def border_loss_dp(n: int) -> int:
    """Same quantity as ``border_loss_exhaustive`` by a column dynamic program, any n >= 3."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    w = _border_loss_matrix()
    best = np.inf
    for start in range(w.shape[0]):
        dp = w[start].copy()
        for _ in range(n - 1):
            dp = (dp[:, None] + w).min(axis=0)
        best = min(best, dp[start])
    return int(best)


# ---------------------------------------------------------------------------
# periodic construction for n divisible by 5


def diagonal_pattern(m: int, n: int, offset: int = 0) -> RomanFunction:
    """A Roman dominating function of weight 2 (m + 1) n / 5 on P_m x C_n.

    Value 2 on the diagonal class (2 i + j) = offset (mod 5), which dominates
    every interior vertex exactly once; the top and bottom rows each keep
    n / 5 vertices whose dominator would sit outside the cylinder, and those
    get value 1.
    """
    if m < 4 or n < 5:
        raise ValueError(f"need m >= 4 and n >= 5, got m={m}, n={n}")
    if n % 5:
        raise ValueError(f"n must be divisible by 5, got {n}")
    i, j = np.indices((m, n))
    vals = np.where((2 * i + j) % 5 == offset % 5, 2, 0).astype(np.int8)
    g = CylinderGraph(m, n)
    for row in (0, m - 1):
        for col in range(n):
            if vals[row, col] == 0 and not any(vals[a, b] == 2 for a, b in g.neighbors(row, col)):
                vals[row, col] = 1
    return RomanFunction(vals)
