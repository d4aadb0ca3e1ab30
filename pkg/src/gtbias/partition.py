"""Crisp partitions and the random generators used by the bias experiments.

Every generator takes an explicit :class:`numpy.random.Generator`; none of them
touch global random state, so replaying a generator with an identically seeded
stream reproduces the labels bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, Sequence

import numpy as np

from .errors import EmptyInput, InvalidDistribution, InvalidSize

PROB_SUM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CrispPartition:
    """Hard assignment of ``n`` objects to ``num_clusters`` non-empty clusters.

    ``labels[k]`` is the cluster id of object ``k``; ids are dense in
    ``[0, num_clusters)``.
    """

    labels: np.ndarray
    num_clusters: int = field(default=-1)
    cluster_sizes: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size == 0:
            raise EmptyInput("a partition needs at least one object")
        c = int(labels.max()) + 1 if self.num_clusters < 0 else int(self.num_clusters)
        if labels.min() < 0 or labels.max() >= c:
            raise InvalidSize(f"labels must lie in [0, {c})")
        sizes = np.bincount(labels, minlength=c)
        if np.any(sizes == 0):
            raise InvalidSize("every cluster must be non-empty")
        labels.setflags(write=False)
        sizes.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "num_clusters", c)
        object.__setattr__(self, "cluster_sizes", sizes)

    @property
    def n(self) -> int:
        return int(self.labels.size)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other):
        if not isinstance(other, CrispPartition):
            return NotImplemented
        return np.array_equal(self.labels, other.labels)

    def __hash__(self):
        return hash(self.labels.tobytes())


@dataclass(frozen=True)
class ClusterDistribution:
    """Cluster proportions ``p_1..p_r`` of a partition; positive, summing to 1."""

    probs: tuple[float, ...]

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probs)
        if not probs:
            raise InvalidDistribution("distribution is empty")
        if any(not (0.0 < p <= 1.0) for p in probs):
            raise InvalidDistribution("every proportion must lie in (0, 1]")
        if abs(math.fsum(probs) - 1.0) > PROB_SUM_TOL:
            raise InvalidDistribution(f"proportions sum to {math.fsum(probs)!r}, not 1")
        object.__setattr__(self, "probs", probs)

    @property
    def r(self) -> int:
        return len(self.probs)

    def sorted_desc(self) -> tuple[float, ...]:
        return tuple(sorted(self.probs, reverse=True))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> ClusterDistribution:
        total = sum(int(s) for s in sizes)
        return cls(tuple(int(s) / total for s in sizes))

    @classmethod
    def balanced(cls, r: int) -> ClusterDistribution:
        return cls((1.0 / r,) * r)

    @classmethod
    def skewed(cls, r: int, p1: float) -> ClusterDistribution:
        """First cluster holds ``p1``; the rest share ``1 - p1`` equally."""
        rest = (1.0 - p1) / (r - 1)
        return cls((p1,) + (rest,) * (r - 1))


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def from_labels(raw: Iterable[Hashable]) -> CrispPartition:
    """Relabel arbitrary tokens densely to ``0..c-1`` in order of first appearance.

    >>> from_labels(["a", "a", "b"]).labels.tolist()
    [0, 0, 1]
    """
    if isinstance(raw, np.ndarray) and raw.dtype.kind in "iu":
        if raw.size == 0:
            raise EmptyInput("no labels given")
        uniq, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
        rank = np.empty(uniq.size, dtype=np.int64)
        rank[np.argsort(first, kind="stable")] = np.arange(uniq.size)
        return CrispPartition(rank[inverse.ravel()], uniq.size)
    ids: dict[Hashable, int] = {}
    labels = [ids.setdefault(tok, len(ids)) for tok in raw]
    if not labels:
        raise EmptyInput("no labels given")
    return CrispPartition(np.asarray(labels, dtype=np.int64), len(ids))


def cluster_distribution(p: CrispPartition) -> ClusterDistribution:
    return ClusterDistribution.from_sizes(p.cluster_sizes.tolist())


def read_label_file(path: str | Path) -> CrispPartition:
    """Parse a label file: one label token per line, line ``i`` is object ``i``."""
    tokens = [line.strip() for line in Path(path).read_text().splitlines()]
    while tokens and tokens[-1] == "":
        tokens.pop()
    if any(t == "" for t in tokens):
        raise EmptyInput(f"{path}: blank line inside label file")
    try:
        raw: list = [int(t) for t in tokens]
    except ValueError:
        raw = tokens
    return from_labels(raw)


def write_label_file(path: str | Path, p: CrispPartition) -> None:
    Path(path).write_text("".join(f"{x}\n" for x in p.labels.tolist()))


# -- generators --------------------------------------------------------------


def _repair_empty(labels: np.ndarray, lo: int, hi: int, rng: np.random.Generator) -> None:
    """Fill empty clusters in ``[lo, hi)`` by moving one random object from the
    currently largest cluster of that range. Modifies ``labels`` in place."""
    sizes = np.bincount(labels, minlength=hi)[lo:hi]
    for empty in np.flatnonzero(sizes == 0):
        donor = int(np.argmax(sizes))
        members = np.flatnonzero(labels == lo + donor)
        labels[members[rng.integers(members.size)]] = lo + empty
        sizes[donor] -= 1
        sizes[empty] += 1


def _fill_uniform(labels: np.ndarray, pool: np.ndarray, lo: int, hi: int,
                  rng: np.random.Generator) -> None:
    labels[pool] = rng.integers(lo, hi, size=pool.size)
    if hi - lo > 1:
        _repair_empty(labels, lo, hi, rng)


def gen_uniform_random(n: int, c: int, rng: np.random.Generator) -> CrispPartition:
    """Draw each label uniformly from ``[0, c)``, then repair empty clusters."""
    if c < 1 or c > n:
        raise InvalidSize(f"need 1 <= c <= n, got c={c}, n={n}")
    labels = rng.integers(0, c, size=n)
    _repair_empty(labels, 0, c, rng)
    return CrispPartition(labels, c)


def gen_balanced(n: int, c: int, rng: np.random.Generator) -> CrispPartition:
    """Sizes differ by at most one; the assignment is a random permutation."""
    if c < 1 or c > n:
        raise InvalidSize(f"need 1 <= c <= n, got c={c}, n={n}")
    q, rem = divmod(n, c)
    sizes = np.full(c, q, dtype=np.int64)
    sizes[:rem] += 1
    labels = np.repeat(np.arange(c, dtype=np.int64), sizes)
    return CrispPartition(rng.permutation(labels), c)


def gen_with_sizes(sizes: Sequence[int], rng: np.random.Generator) -> CrispPartition:
    """Exact cluster sizes, randomly permuted over the objects."""
    sizes = np.asarray(sizes, dtype=np.int64)
    if sizes.size == 0 or np.any(sizes < 1):
        raise InvalidSize("sizes must be positive")
    labels = np.repeat(np.arange(sizes.size, dtype=np.int64), sizes)
    return CrispPartition(rng.permutation(labels), sizes.size)


def gen_skewed(n: int, c: int, p1: float, rng: np.random.Generator) -> CrispPartition:
    """``round(p1 * n)`` random objects form cluster 0; the rest are uniform
    over ``[1, c)``. Repair only touches clusters ``1..c-1``."""
    k = round_half_up(p1 * n)
    if c < 2 or c > n or k < 1 or n - k < c - 1:
        raise InvalidSize(f"cannot skew n={n} into c={c} clusters with p1={p1}")
    labels = np.zeros(n, dtype=np.int64)
    rest = rng.permutation(n)[k:]
    _fill_uniform(labels, rest, 1, c, rng)
    return CrispPartition(labels, c)


def gen_two_stage_skewed(n: int, c_true: int, f1: float, f2: float,
                         rng: np.random.Generator) -> CrispPartition:
    """Cluster 0 takes ``round(f1*n)`` objects, cluster 1 takes ``round(f2*rest)``
    of the remainder, and the leftovers are uniform over ``[2, c_true)``."""
    k0 = round_half_up(f1 * n)
    k1 = round_half_up(f2 * (n - k0))
    if c_true < 3 or k0 < 1 or k1 < 1 or n - k0 - k1 < c_true - 2:
        raise InvalidSize(f"cannot build two-stage skew n={n}, c_true={c_true}, f1={f1}, f2={f2}")
    order = rng.permutation(n)
    labels = np.zeros(n, dtype=np.int64)
    labels[order[k0:k0 + k1]] = 1
    _fill_uniform(labels, order[k0 + k1:], 2, c_true, rng)
    return CrispPartition(labels, c_true)


def gen_with_pinned_first_cluster(gt: CrispPartition, c: int,
                                  rng: np.random.Generator) -> CrispPartition:
    """Copy ``gt``'s cluster 0 as cluster 0; spread everything else over ``[1, c)``."""
    outside = np.flatnonzero(gt.labels != 0)
    if c < 2 or gt.num_clusters < 2 or outside.size < c - 1:
        raise InvalidSize(f"cannot pin first cluster with c={c}")
    labels = np.zeros(gt.n, dtype=np.int64)
    _fill_uniform(labels, outside, 1, c, rng)
    return CrispPartition(labels, c)
