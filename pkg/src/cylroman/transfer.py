"""Transition rules between consecutive columns and the transfer matrix A(G).

Row ``q`` of the matrix is the predecessor column, column ``p`` the
successor. For the standard variant the arc label is the weight of ``p``;
for the border variant (a 4-row block whose bottom row need not be
dominated) it is ``10 p(a) + 5 p(b) - 2 nd(q, p)``, i.e. twice the loss
contributed by column ``p``.
"""
from __future__ import annotations

import numpy as np

from ._kernel import INF_SENTINEL
from .errors import CapacityError
from .tropical import TropMatrix
from .words import BORDER, BORDER_HEIGHT, STANDARD, VARIANTS, WordTable, generate_words, is_correct, letter_counts

MIN_M = 2
MAX_M = 11
DEFAULT_MEMORY_BUDGET = 1 << 30

# correct-word counts, used for memory estimates before any work is done
WORD_COUNTS = {2: 11, 3: 33, 4: 97, 5: 287, 6: 848, 7: 2507, 8: 7411, 9: 21909, 10: 64769, 11: 191476}


def _check_pair(q: str, p: str, m: int) -> None:
    if len(q) != m or len(p) != m:
        raise ValueError(f"words must have length {m}: {q!r}, {p!r}")
    for w in (q, p):
        if not is_correct(w):
            raise ValueError(f"{w!r} is not a correct word")


def _needs_vertical_a(p: str, rows) -> bool:
    return any(p[r] == "a" for r in rows)


def can_follow(q: str, p: str, variant: str = STANDARD) -> bool:
    """True when column ``p`` may directly follow column ``q``."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    m = len(q)
    if variant == BORDER and m != BORDER_HEIGHT:
        raise ValueError(f"border words have length {BORDER_HEIGHT}")
    _check_pair(q, p, m)

    # first row: the only vertical neighbour is row 2
    if q[0] == "a" and p[0] not in "ac":
        return False
    if q[0] == "b" and not ((p[0] == "c" and p[1] == "a") or p[0] == "d"):
        return False
    if q[0] == "c" and not (p[0] in "abd" or (p[0] == "c" and p[1] == "a")):
        return False
    if q[0] == "d" and p[0] != "a":
        return False

    for i in range(1, m - 1):
        qi, pi = q[i], p[i]
        covered = pi == "c" and _needs_vertical_a(p, (i - 1, i + 1))
        if qi == "a" and pi not in "ac":
            return False
        if qi == "b" and not (covered or pi == "d"):
            return False
        if qi == "c" and not (pi in "abd" or covered):
            return False
        if qi == "d" and pi != "a":
            return False

    last = m - 1
    qi, pi = q[last], p[last]
    covered = pi == "c" and p[last - 1] == "a"
    if qi == "a" and pi not in "ac":
        return False
    if qi == "b" and not (covered or pi == "d"):
        return False
    if qi == "c" and not (pi in "abd" or covered):
        return False
    if qi == "d":
        if variant == BORDER:
            # the bottom row of the border block need not be dominated
            return pi in "abd" or covered
        return pi == "a"
    return True


def newly_dominated(q: str, p: str) -> int:
    """Vertices first dominated when column ``p`` follows ``q`` in a border block.

    Counts include the vertex just below the block when ``p`` ends in ``a``.
    """
    if not can_follow(q, p, BORDER):
        raise ValueError(f"{p!r} cannot follow {q!r} in the border variant")
    nd = 0
    for qi, pi in zip(q, p):
        if qi == "a" and pi == "a":
            nd += 1
        elif qi == "b" and pi == "c":
            nd += 1
        elif qi == "c" and pi == "a":
            nd += 2
        elif qi in "cd" and pi in "bc":
            nd += 1
        elif qi == "d" and pi == "a":
            nd += 3
    if p[3] == "a":
        nd += 1
    return nd


def arc_label(q: str, p: str, variant: str = STANDARD) -> int:
    if not can_follow(q, p, variant):
        raise ValueError(f"({q!r}, {p!r}) is not an arc")
    na, nb = letter_counts(p)
    if variant == STANDARD:
        return 2 * na + nb
    return 10 * na + 5 * nb - 2 * newly_dominated(q, p)


# ---------------------------------------------------------------------------
# vectorized construction
#
# For a single row the rule depends on (q_i, p_i, whether a vertical
# neighbour of p_i is 'a'). _ROW_OK[q, 2 * p + vert] encodes that.


def _row_table(border_last: bool) -> np.ndarray:
    ok = np.zeros((4, 8), dtype=bool)
    for pi in range(4):
        for vert in (0, 1):
            key = 2 * pi + vert
            c_ok = pi == 2 and vert == 1
            ok[0, key] = pi in (0, 2)
            ok[1, key] = c_ok or pi == 3
            ok[2, key] = pi in (0, 1, 3) or c_ok
            ok[3, key] = (pi in (0, 1, 3) or c_ok) if border_last else pi == 0
    return ok


_ROW_OK = _row_table(False)
_ROW_OK_BORDER_LAST = _row_table(True)

# nd contribution per (q_i, p_i)
_ND = np.zeros((4, 4), dtype=np.int32)
_ND[0, 0] = 1
_ND[1, 2] = 1
_ND[2, 0] = 2
_ND[2, 1] = _ND[2, 2] = _ND[3, 1] = _ND[3, 2] = 1
_ND[3, 0] = 3


def estimate_bytes(m: int) -> int:
    return WORD_COUNTS[m] ** 2 * 4


def _arc_mask(codes: np.ndarray, q_rows: slice, variant: str) -> np.ndarray:
    count, m = codes.shape
    is_a = codes == 0
    vert = np.zeros_like(is_a)
    vert[:, 1:] |= is_a[:, :-1]
    vert[:, :-1] |= is_a[:, 1:]
    keys = 2 * codes.astype(np.intp) + vert
    q = codes[q_rows].astype(np.intp)
    mask = np.ones((q.shape[0], count), dtype=bool)
    for i in range(m):
        table = _ROW_OK_BORDER_LAST if (variant == BORDER and i == m - 1) else _ROW_OK
        mask &= table[q[:, i][:, None], keys[None, :, i]]
    return mask


def build_transfer_matrix(m: int, variant: str = STANDARD, memory_budget: int | None = DEFAULT_MEMORY_BUDGET, chunk: int = 1024):
    """Return ``(WordTable, A)`` with ``A[q, p]`` the arc label or infinity."""
    if variant == BORDER:
        m = BORDER_HEIGHT if m is None else m
        if m != BORDER_HEIGHT:
            raise ValueError(f"border variant has fixed height {BORDER_HEIGHT}")
    if m < MIN_M:
        raise ValueError(f"m must be >= {MIN_M}, got {m}")
    if m > MAX_M:
        raise CapacityError(f"m={m} is outside the supported range {MIN_M}..{MAX_M}")
    need = estimate_bytes(m)
    if memory_budget is not None and need > memory_budget:
        raise CapacityError(
            f"A(G) for m={m} needs about {need / 2**20:.1f} MiB per matrix, budget is {memory_budget / 2**20:.1f} MiB",
            required_bytes=need,
        )
    table = generate_words(m, variant)
    codes = table.codes()
    count = len(table)
    na = (codes == 0).sum(axis=1).astype(np.int32)
    nb = (codes == 1).sum(axis=1).astype(np.int32)
    out = np.full((count, count), INF_SENTINEL, dtype=np.int32)
    for start in range(0, count, chunk):
        rows = slice(start, min(start + chunk, count))
        mask = _arc_mask(codes, rows, variant)
        if variant == STANDARD:
            labels = np.broadcast_to(2 * na + nb, mask.shape)
        else:
            q = codes[rows].astype(np.intp)
            nd = np.zeros(mask.shape, dtype=np.int32)
            for i in range(m):
                nd += _ND[q[:, i][:, None], codes[None, :, i]]
            nd += (codes[:, m - 1] == 0)[None, :]
            labels = (10 * na + 5 * nb)[None, :] - 2 * nd
        block = out[rows]
        block[mask] = labels[mask]
    return table, TropMatrix._wrap(out)


def write_word_table(table: WordTable, path) -> None:
    with open(path, "w") as fh:
        fh.write(table.dump())
