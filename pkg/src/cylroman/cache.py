"""On-disk cache of matrix powers.

Layout of a cache directory::

    manifest.json        m, variant, dim and sha256 of the base matrix file
    A_pow_{k}.trpm       k-th (min,+) power in TRPM format

Opening a cache with a manifest that does not match the base matrix wipes
the stale power files.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from pathlib import Path

from .tropical import PowerStats, TropMatrix, decode_matrix, encode_matrix

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"


def matrix_digest(a: TropMatrix) -> str:
    return hashlib.sha256(encode_matrix(a)).hexdigest()


class DiskCache:
    def __init__(self, directory, base: TropMatrix, m: int, variant: str):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.manifest = {
            "format": 1,
            "m": m,
            "variant": variant,
            "dim": base.dim,
            "matrix_sha256": matrix_digest(base),
        }
        self._sync_manifest()

    def _sync_manifest(self) -> None:
        path = self.directory / MANIFEST
        current = None
        if path.exists():
            try:
                current = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError):
                current = None
        if current == self.manifest:
            return
        stale = sorted(self.directory.glob("A_pow_*.trpm"))
        if stale:
            log.info("cache manifest mismatch in %s, removing %d stale powers", self.directory, len(stale))
        for f in stale:
            f.unlink()
        path.write_text(json.dumps(self.manifest, indent=2, sort_keys=True) + "\n")

    def path_for(self, k: int) -> Path:
        return self.directory / f"A_pow_{k}.trpm"

    def load(self, k: int, stats: PowerStats | None = None):
        path = self.path_for(k)
        if not path.exists():
            return None
        t0 = time.perf_counter()
        buf = path.read_bytes()
        t1 = time.perf_counter()
        matrix = decode_matrix(buf)
        t2 = time.perf_counter()
        if stats is not None:
            stats.io_seconds += t1 - t0
            stats.serialize_seconds += t2 - t1
        return matrix

    def save(self, k: int, matrix: TropMatrix, stats: PowerStats | None = None) -> None:
        t0 = time.perf_counter()
        buf = encode_matrix(matrix)
        t1 = time.perf_counter()
        path = self.path_for(k)
        tmp = path.with_suffix(".tmp")
        with open(tmp, "wb") as fh:
            fh.write(buf)
        os.replace(tmp, path)
        t2 = time.perf_counter()
        if stats is not None:
            stats.serialize_seconds += t1 - t0
            stats.io_seconds += t2 - t1

    def cached_powers(self) -> list[int]:
        return sorted(int(p.stem.split("_")[-1]) for p in self.directory.glob("A_pow_*.trpm"))
