"""IRM traces: generation, construction from symbols, and a binary file format."""
from __future__ import annotations

import os
import struct
from dataclasses import dataclass
from typing import Hashable, Iterable

import numpy as np

from ..model import PowerLaw

MAGIC = b"IRMTRC01"
_HEADER = struct.Struct("<8sQQ")
_CHUNK = 1 << 22


class TraceFormatError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Trace:
    """Flat array of address ids in ``[1, alphabet]``."""

    accesses: np.ndarray
    alphabet: int

    def __post_init__(self):
        acc = np.ascontiguousarray(self.accesses, dtype=np.int32)
        if acc.ndim != 1:
            raise ValueError("accesses must be one-dimensional")
        if self.alphabet < 1:
            raise ValueError(f"alphabet must be >= 1, got {self.alphabet}")
        if acc.size and (acc.min() < 1 or acc.max() > self.alphabet):
            raise ValueError(f"ids must lie in [1, {self.alphabet}]")
        acc.flags.writeable = False
        object.__setattr__(self, "accesses", acc)
        object.__setattr__(self, "alphabet", int(self.alphabet))

    @property
    def length(self) -> int:
        return int(self.accesses.shape[0])

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return self.alphabet == other.alphabet and np.array_equal(self.accesses, other.accesses)

    @classmethod
    def from_symbols(cls, symbols: Iterable[Hashable]) -> "Trace":
        """Number symbols by first appearance: ``"ABAB"`` becomes ``[1, 2, 1, 2]``."""
        index: dict = {}
        ids = [index.setdefault(s, len(index) + 1) for s in symbols]
        return cls(np.asarray(ids, dtype=np.int32), max(len(index), 1))


def generate_irm_trace(law: PowerLaw, length: int, seed: int) -> Trace:
    """Draw ``length`` i.i.d. ranks from ``law`` by inverse-CDF lookup.

    Uses a Philox counter-based generator, so a given ``(law, length, seed)``
    always yields the same trace.
    """
    if length < 1:
        raise ValueError(f"trace length must be >= 1, got {length}")
    cdf = law.cdf()
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.empty(length, dtype=np.int32)
    for start in range(0, length, _CHUNK):
        stop = min(start + _CHUNK, length)
        u = rng.random(stop - start)
        idx = np.searchsorted(cdf, u, side="right")
        np.minimum(idx, law.N - 1, out=idx)
        out[start:stop] = idx + 1
    return Trace(out, law.N)


def write_trace(path: str | os.PathLike, trace: Trace) -> None:
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, trace.alphabet, trace.length))
        fh.write(trace.accesses.astype("<u4", copy=False).tobytes())


def read_trace(path: str | os.PathLike) -> Trace:
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) < _HEADER.size:
            raise TraceFormatError(f"{path}: truncated header")
        magic, n, length = _HEADER.unpack(head)
        if magic != MAGIC:
            raise TraceFormatError(f"{path}: bad magic {magic!r}")
        data = np.fromfile(fh, dtype="<u4", count=length)
    if data.shape[0] != length:
        raise TraceFormatError(f"{path}: expected {length} ids, found {data.shape[0]}")
    return Trace(data.astype(np.int32), int(n))
