"""Dense linear algebra over the (min,+) semiring of integers extended by infinity.

Matrices are square ``int32`` arrays in which ``INF_SENTINEL`` (2**31 - 1)
encodes infinity. At the Python level a tropical value is a plain ``int`` or
``math.inf``.
"""
from __future__ import annotations

import math
import os
import struct
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ._kernel import FINITE_LIMIT, INF_SENTINEL, INF_THRESHOLD, INNER_INF, ROW_TILE, minplus_rows
from .errors import FormatError

INF = math.inf
MAGIC = b"TRPM"
FORMAT_VERSION = 1
_HEADER = struct.Struct("<4sIQ")

_default_threads = os.cpu_count() or 1


def set_default_threads(threads: int) -> None:
    global _default_threads
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    _default_threads = threads


def get_default_threads() -> int:
    return _default_threads


def _check_finite_range(arr: np.ndarray, what: str) -> None:
    finite = arr[arr != INF_SENTINEL]
    if finite.size and (finite.max() > FINITE_LIMIT or finite.min() < -FINITE_LIMIT):
        raise OverflowError(f"{what}: finite entry outside +/-{FINITE_LIMIT}")


class TropMatrix:
    """Immutable square matrix over the tropical semiring."""

    __slots__ = ("_data",)

    def __init__(self, data):
        arr = np.array(data, dtype=np.int64) if not isinstance(data, np.ndarray) else data
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError(f"expected a non-empty square matrix, got shape {arr.shape}")
        if arr.dtype != np.int32:
            if arr.dtype.kind not in "iu":
                raise TypeError(f"integer entries required, got {arr.dtype}")
            wide = arr.astype(np.int64)
            inf_mask = wide == int(INF_SENTINEL)
            finite = wide[~inf_mask]
            if finite.size and (finite.max() > FINITE_LIMIT or finite.min() < -FINITE_LIMIT):
                raise OverflowError(f"finite entry outside +/-{FINITE_LIMIT}")
            arr = wide.astype(np.int32)
        else:
            _check_finite_range(arr, "matrix")
            arr = arr.copy()
        arr.setflags(write=False)
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> TropMatrix:
        # trusted construction: arr is a fresh int32 array already range-checked
        obj = cls.__new__(cls)
        arr.setflags(write=False)
        obj._data = arr
        return obj

    @classmethod
    def from_rows(cls, rows) -> TropMatrix:
        """Build from nested sequences where ``math.inf`` (or ``None``) is infinity."""
        conv = [[int(INF_SENTINEL) if (v is None or v == INF) else int(v) for v in row] for row in rows]
        return cls(np.array(conv, dtype=np.int64))

    @classmethod
    def identity(cls, dim: int) -> TropMatrix:
        arr = np.full((dim, dim), INF_SENTINEL, dtype=np.int32)
        np.fill_diagonal(arr, 0)
        return cls._wrap(arr)

    @classmethod
    def infinite(cls, dim: int) -> TropMatrix:
        return cls._wrap(np.full((dim, dim), INF_SENTINEL, dtype=np.int32))

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def data(self) -> np.ndarray:
        """Read-only view of the raw int32 entries (sentinel = infinity)."""
        return self._data

    def __getitem__(self, idx):
        v = int(self._data[idx])
        return INF if v == INF_SENTINEL else v

    def to_rows(self) -> list[list]:
        return [[INF if v == INF_SENTINEL else int(v) for v in row] for row in self._data.tolist()]

    def infinity_count(self) -> int:
        return int(np.count_nonzero(self._data == INF_SENTINEL))

    def __eq__(self, other):
        if not isinstance(other, TropMatrix):
            return NotImplemented
        return self._data.shape == other._data.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self):
        return hash((self.dim, self._data.tobytes()))

    def __repr__(self):
        if self.dim <= 6:
            return f"TropMatrix({self.to_rows()})"
        return f"TropMatrix(dim={self.dim})"

    def __matmul__(self, other):
        return trop_mul(self, other)


def trop_mul(a: TropMatrix, b: TropMatrix, threads: int | None = None) -> TropMatrix:
    """(min,+) product: ``C[i, j] = min_k A[i, k] + B[k, j]``.

    The output is split into disjoint row blocks, one per worker, so the
    result does not depend on ``threads``.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    threads = threads or _default_threads
    if threads < 1:
        raise ValueError("thread count must be >= 1")
    n = a.dim
    b_inner = np.where(b.data == INF_SENTINEL, INNER_INF, b.data).astype(np.int32)
    out = np.empty((n, n), dtype=np.int32)
    blocks = min(threads, n)
    if blocks == 1:
        minplus_rows(a.data, b_inner, out, 0, n, ROW_TILE)
    else:
        bounds = np.linspace(0, n, blocks + 1).astype(int)
        with ThreadPoolExecutor(max_workers=blocks) as pool:
            futures = [
                pool.submit(minplus_rows, a.data, b_inner, out, int(lo), int(hi), ROW_TILE)
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            for fut in futures:
                fut.result()
    inf_mask = out >= INF_THRESHOLD
    finite = out[~inf_mask]
    if finite.size and (finite.max() > FINITE_LIMIT or finite.min() < -FINITE_LIMIT):
        raise OverflowError("tropical product left the supported finite range")
    out[inf_mask] = INF_SENTINEL
    return TropMatrix._wrap(out)


def trop_scalar(alpha, a: TropMatrix) -> TropMatrix:
    """Shift every finite entry by ``alpha``; ``alpha = inf`` gives the all-infinite matrix."""
    if alpha == INF:
        return TropMatrix.infinite(a.dim)
    alpha = int(alpha)
    wide = a.data.astype(np.int64)
    mask = wide == int(INF_SENTINEL)
    wide[~mask] += alpha
    wide[mask] = int(INF_SENTINEL)
    return TropMatrix(wide)


def shift_difference(p: TropMatrix, q: TropMatrix):
    """Return ``beta`` with ``p == beta (x) q``, or ``None`` if no such common shift exists.

    Infinity patterns must coincide. Matrices with no finite entry determine
    no shift and give ``None``.
    """
    if p.dim != q.dim:
        raise ValueError(f"dimension mismatch: {p.dim} vs {q.dim}")
    pinf = p.data == INF_SENTINEL
    if not np.array_equal(pinf, q.data == INF_SENTINEL):
        return None
    fin = ~pinf
    if not fin.any():
        return None
    diff = p.data[fin].astype(np.int64) - q.data[fin].astype(np.int64)
    beta = int(diff[0])
    if not np.all(diff == beta):
        return None
    return beta


def min_diagonal(a: TropMatrix):
    """Minimum over the diagonal; ``math.inf`` when every diagonal entry is infinite."""
    d = int(np.diagonal(a.data).min())
    return INF if d == INF_SENTINEL else d


def diagonal_of_product(a: TropMatrix, b: TropMatrix):
    """``min_diagonal(a (x) b)`` in O(dim^2) without forming the product."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    left = a.data.astype(np.int64)
    right = b.data.T.astype(np.int64)
    s = left + right
    s[(a.data == INF_SENTINEL) | (b.data.T == INF_SENTINEL)] = np.iinfo(np.int64).max
    best = int(s.min())
    return INF if best == np.iinfo(np.int64).max else best


def trop_power(a: TropMatrix, k: int, threads: int | None = None) -> TropMatrix:
    """``a`` to the k-th (min,+) power by repeated squaring, k >= 1."""
    if k < 1:
        raise ValueError("power must be >= 1")
    result = None
    base = a
    while k:
        if k & 1:
            result = base if result is None else trop_mul(result, base, threads)
        k >>= 1
        if k:
            base = trop_mul(base, base, threads)
    return result


# ---------------------------------------------------------------------------
# serialization


def encode_matrix(a: TropMatrix) -> bytes:
    return _HEADER.pack(MAGIC, FORMAT_VERSION, a.dim) + a.data.astype("<i4", copy=False).tobytes()


def decode_matrix(buf: bytes) -> TropMatrix:
    if len(buf) < _HEADER.size:
        raise FormatError("truncated header", len(buf))
    magic, version, dim = _HEADER.unpack_from(buf, 0)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}", 0)
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}", 4)
    if dim == 0:
        raise FormatError("zero dimension", 8)
    expected = _HEADER.size + 4 * dim * dim
    if len(buf) != expected:
        offset = min(len(buf), expected)
        raise FormatError(f"payload length {len(buf) - _HEADER.size}, expected {4 * dim * dim}", offset)
    arr = np.frombuffer(buf, dtype="<i4", offset=_HEADER.size).reshape(dim, dim).astype(np.int32)
    try:
        _check_finite_range(arr, "payload")
    except OverflowError as exc:
        raise FormatError(str(exc), _HEADER.size) from exc
    return TropMatrix._wrap(arr)


def write_matrix(a: TropMatrix, path) -> None:
    Path(path).write_bytes(encode_matrix(a))


def read_matrix(path) -> TropMatrix:
    return decode_matrix(Path(path).read_bytes())


# ---------------------------------------------------------------------------
# power sequences


@dataclass
class PowerStats:
    """Counters and a compute / serialize / storage time split for a power run."""

    products: int = 0
    cache_hits: int = 0
    kernel_seconds: float = 0.0
    serialize_seconds: float = 0.0
    io_seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "products": self.products,
            "cache_hits": self.cache_hits,
            "kernel_seconds": round(self.kernel_seconds, 6),
            "serialize_seconds": round(self.serialize_seconds, 6),
            "io_seconds": round(self.io_seconds, 6),
        }


class MemorySink:
    """Keeps every power in memory. Fine for dimensions up to a few thousand."""

    def __init__(self):
        self._store: dict[int, TropMatrix] = {}

    def load(self, k: int, stats: PowerStats | None = None):
        return self._store.get(k)

    def save(self, k: int, matrix: TropMatrix, stats: PowerStats | None = None) -> None:
        self._store[k] = matrix


def power_sequence(a: TropMatrix, max_power: int, sink=None, stats: PowerStats | None = None, threads=None):
    """Yield ``(k, A^k)`` for k = 1..max_power.

    Each power goes through ``sink.save`` before the next one is computed.
    Powers the sink already holds are loaded instead of recomputed.
    """
    if max_power < 1:
        raise ValueError("max_power must be >= 1")
    stats = stats if stats is not None else PowerStats()
    prev = None
    for k in range(1, max_power + 1):
        cached = sink.load(k, stats) if sink is not None else None
        if cached is not None:
            if cached.dim != a.dim:
                raise ValueError(f"cached power {k} has dim {cached.dim}, expected {a.dim}")
            stats.cache_hits += 1
            current = cached
        elif k == 1:
            current = a
        else:
            t0 = time.perf_counter()
            current = trop_mul(a, prev, threads)
            stats.kernel_seconds += time.perf_counter() - t0
            stats.products += 1
        if cached is None and sink is not None:
            sink.save(k, current, stats)
        prev = current
        yield k, current
