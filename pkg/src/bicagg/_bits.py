"""Packed incidence bitsets for fast intersection counts during merging."""

import numpy as np

if hasattr(np, "bitwise_count"):
    def _popcount(x):
        return np.bitwise_count(x)
else:  # numpy < 2.0
    _TABLE = np.array([bin(v).count("1") for v in range(256)], dtype=np.uint8)

    def _popcount(x):
        return _TABLE[x.view(np.uint8)].reshape(*x.shape, 8).sum(-1, dtype=np.uint8)


class PackedSets:
    """One bitset per incidence-matrix row, as ``(q, words)`` uint64."""

    def __init__(self, incidence: np.ndarray):
        q, width = incidence.shape
        words = max(1, -(-width // 64))
        padded = np.zeros((q, words * 64), dtype=bool)
        padded[:, :width] = incidence > 0
        self.bits = np.packbits(padded, axis=1, bitorder="little").view(np.uint64)
        self.bits = np.ascontiguousarray(self.bits.reshape(q, words))

    def union_into(self, i: int, j: int) -> None:
        self.bits[i] |= self.bits[j]

    def size(self, i: int) -> int:
        return int(_popcount(self.bits[i]).sum())

    def shared_with(self, i: int) -> np.ndarray:
        """Intersection size of set ``i`` with every set, as int64."""
        return _popcount(self.bits & self.bits[i]).sum(1, dtype=np.int64)
