"""Contingency tables and the four pair-count statistics of two partitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CapExceeded, LengthMismatch, NotDivisible, Overflow
from .partition import CrispPartition

INT63_MAX = 2**63 - 1
BRUTEFORCE_CAP = 2000


def comb2(x) -> int:
    x = int(x)
    return x * (x - 1) // 2


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """``counts[i, j]`` = number of objects in row cluster ``i`` and column cluster ``j``."""

    counts: np.ndarray

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] < 1 or counts.shape[1] < 1:
            raise ValueError("contingency table must be a non-empty 2-d array")
        if np.any(counts < 0):
            raise ValueError("contingency counts must be non-negative")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    def transpose(self) -> ContingencyTable:
        return ContingencyTable(self.counts.T.copy())

    def __eq__(self, other):
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return np.array_equal(self.counts, other.counts)


@dataclass(frozen=True)
class PairCounts:
    """Pair agreement counts between partitions ``U`` (rows) and ``V`` (columns).

    ``k11``: same cluster in both; ``k10``: same in U only; ``k01``: same in V
    only; ``k00``: different in both. Stored as exact Python integers.
    """

    k11: int
    k10: int
    k01: int
    k00: int

    def __post_init__(self):
        for name in ("k11", "k10", "k01", "k00"):
            v = int(getattr(self, name))
            if v < 0:
                raise ValueError(f"{name} must be non-negative, got {v}")
            object.__setattr__(self, name, v)

    @property
    def total_pairs(self) -> int:
        return self.k11 + self.k10 + self.k01 + self.k00

    def swapped(self) -> PairCounts:
        return PairCounts(self.k11, self.k01, self.k10, self.k00)

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.k11, self.k10, self.k01, self.k00)


def contingency(u: CrispPartition, v: CrispPartition) -> ContingencyTable:
    if u.n != v.n:
        raise LengthMismatch(f"partitions label {u.n} and {v.n} objects")
    r, c = u.num_clusters, v.num_clusters
    flat = np.bincount(u.labels * c + v.labels, minlength=r * c)
    return ContingencyTable(flat.reshape(r, c))


def _sum_comb2(x: np.ndarray) -> int:
    x = np.asarray(x, dtype=np.int64)
    # exact for x < 2**31.5; larger cells fall back to Python ints
    if x.size and x.max() > 3_000_000_000:
        return sum(comb2(v) for v in x.ravel().tolist())
    return int((x * (x - 1) // 2).sum())


def pair_counts(t: ContingencyTable) -> PairCounts:
    n = t.total
    total = comb2(n)
    if total > INT63_MAX:
        raise Overflow(f"C({n}, 2) exceeds the 63-bit pair-count range")
    k11 = _sum_comb2(t.counts)
    k10 = _sum_comb2(t.row_sums) - k11
    k01 = _sum_comb2(t.col_sums) - k11
    return PairCounts(k11, k10, k01, total - k11 - k10 - k01)


def pair_counts_bruteforce(u: CrispPartition, v: CrispPartition,
                           cap: int = BRUTEFORCE_CAP) -> PairCounts:
    """Classify every object pair directly. Quadratic; a test oracle only."""
    if u.n != v.n:
        raise LengthMismatch(f"partitions label {u.n} and {v.n} objects")
    if u.n > cap:
        raise CapExceeded(f"N={u.n} exceeds brute-force cap {cap}")
    k11 = k10 = k01 = k00 = 0
    lu, lv = u.labels, v.labels
    # pairs (a, b) with b > a, one row of the pair matrix at a time
    for a in range(u.n - 1):
        su = lu[a + 1:] == lu[a]
        sv = lv[a + 1:] == lv[a]
        k11 += int(np.count_nonzero(su & sv))
        k10 += int(np.count_nonzero(su & ~sv))
        k01 += int(np.count_nonzero(~su & sv))
        k00 += int(np.count_nonzero(~su & ~sv))
    return PairCounts(k11, k10, k01, k00)


def product_contingency(row_sizes: Sequence[int], col_sizes: Sequence[int]) -> ContingencyTable:
    """Exactly independent joint table ``n_ij = a_i * b_j / N``."""
    a = [int(x) for x in row_sizes]
    b = [int(x) for x in col_sizes]
    n = sum(a)
    if n != sum(b):
        raise ValueError(f"row sizes sum to {n}, column sizes to {sum(b)}")
    counts = np.empty((len(a), len(b)), dtype=np.int64)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            q, rem = divmod(ai * bj, n)
            if rem:
                raise NotDivisible(f"cell ({i}, {j}) = {ai}*{bj}/{n} is fractional")
            counts[i, j] = q
    return ContingencyTable(counts)
