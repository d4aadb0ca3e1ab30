"""The 26 pair-counting external cluster validity indices.

Each formula is expressed in terms of ``k11, k10, k01, k00``. Three of them
deliberately keep a non-classical form:

* ``Y``: denominator ``k11*k10 + k01*k00`` (classical Yule's Q uses
  ``k11*k00 + k10*k01``);
* ``P``: no square root over the four-factor denominator (unlike phi);
* ``FMG``: second term ``1 / (2*sqrt(k11 + k10))``.

All arithmetic happens in float64 after converting the exact integer counts,
so no product of two pair counts is ever formed in integer arithmetic.
Formulas accept scalars or numpy arrays of equal shape.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import UnknownIndex
from .paircounts import PairCounts


class Direction(enum.Enum):
    MAX = "Max"
    MIN = "Min"


class _Degenerate:
    """Marker for an index value whose formula hits a zero denominator."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DEGENERATE"

    def __str__(self):
        return "degenerate"

    def __bool__(self):
        return False


DEGENERATE = _Degenerate()

Formula = Callable[..., "np.ndarray | float"]


@dataclass(frozen=True)
class IndexDescriptor:
    """Identity and metadata of one index.

    ``span`` is the width of the attainable value range when it is finite and
    independent of N (``None`` otherwise); ``span_in_pairs`` gives the width
    as a multiple of ``C(N, 2)`` for indices such as Mirkin. Trend
    classification uses the width to judge flatness. ``to_rand(value,
    total_pairs)`` inverts an index that is a strictly increasing or
    decreasing function of RI back to the RI scale.
    """

    id: str
    name: str
    table_row: int
    direction: Direction
    formula: Formula
    denominators: Callable[..., tuple]
    span: float | None = None
    span_in_pairs: float | None = None
    to_rand: Callable[..., "np.ndarray | float"] | None = None

    def value_span(self, total_pairs: float) -> float | None:
        if self.span_in_pairs is not None:
            return self.span_in_pairs * total_pairs
        return self.span


@dataclass(frozen=True)
class IndexScore:
    id: str
    value: "float | _Degenerate"

    @property
    def is_degenerate(self) -> bool:
        return self.value is DEGENERATE


def _ari(a, b, c, d):
    m = a + b + c + d
    expected = (a + b) * (a + c) / m
    return (a - expected) / (((a + b) + (a + c)) / 2 - expected)


def _ari_den(a, b, c, d):
    m = a + b + c + d
    return (m, ((a + b) + (a + c)) / 2 - (a + b) * (a + c) / m)


def _four(a, b, c, d):
    return (a + b) * (a + c) * (c + d) * (b + d)


def _cross(a, b, c, d):
    return a * d - b * c


def _b1(a, b, c, d):
    m = a + b + c + d
    return (m * m - m * (b + c) + (b - c) ** 2) / (m * m)


_REGISTRY_ROWS = [
    # id, name, direction, formula, denominators, span
    ("RI", "Rand Index", "Max",
     lambda a, b, c, d: (a + d) / (a + b + c + d),
     lambda a, b, c, d: (a + b + c + d,), 1.0),
    ("ARI", "Adjusted Rand Index (Hubert and Arabie)", "Max", _ari, _ari_den, 2.0),
    ("Mirkin", "Mirkin", "Min",
     lambda a, b, c, d: 2 * (b + c),
     lambda a, b, c, d: (), "pairs"),
    ("JI", "Jaccard Index", "Max",
     lambda a, b, c, d: a / (a + b + c),
     lambda a, b, c, d: (a + b + c,), 1.0),
    ("H", "Hubert", "Max",
     lambda a, b, c, d: ((a + d) - (b + c)) / (a + b + c + d),
     lambda a, b, c, d: (a + b + c + d,), 2.0),
    ("W1", "Wallace", "Max",
     lambda a, b, c, d: a / (a + b),
     lambda a, b, c, d: (a + b,), 1.0),
    ("W2", "Wallace", "Max",
     lambda a, b, c, d: a / (a + c),
     lambda a, b, c, d: (a + c,), 1.0),
    ("FM", "Fowlkes and Mallows", "Max",
     lambda a, b, c, d: a / np.sqrt((a + b) * (a + c)),
     lambda a, b, c, d: ((a + b) * (a + c),), 1.0),
    ("MK", "Minkowski", "Min",
     lambda a, b, c, d: np.sqrt((b + c) / (a + b)),
     lambda a, b, c, d: (a + b,), None),
    ("Gamma", "Hubert's Gamma", "Max",
     lambda a, b, c, d: _cross(a, b, c, d) / np.sqrt(_four(a, b, c, d)),
     lambda a, b, c, d: (_four(a, b, c, d),), 2.0),
    ("Y", "Yule", "Max",
     lambda a, b, c, d: _cross(a, b, c, d) / (a * b + c * d),
     lambda a, b, c, d: (a * b + c * d,), None),
    ("Dice", "Dice", "Max",
     lambda a, b, c, d: 2 * a / (2 * a + b + c),
     lambda a, b, c, d: (2 * a + b + c,), 1.0),
    ("K", "Kulczynski", "Max",
     lambda a, b, c, d: 0.5 * (a / (a + b) + a / (a + c)),
     lambda a, b, c, d: (a + b, a + c), 1.0),
    ("MC", "McConnaughey", "Max",
     lambda a, b, c, d: (a * a - b * c) / ((a + b) * (a + c)),
     lambda a, b, c, d: ((a + b) * (a + c),), 2.0),
    ("PE", "Peirce", "Max",
     lambda a, b, c, d: _cross(a, b, c, d) / ((a + c) * (b + d)),
     lambda a, b, c, d: ((a + c) * (b + d),), 2.0),
    ("SS1", "Sokal and Sneath", "Max",
     lambda a, b, c, d: 0.25 * (a / (a + b) + a / (a + c) + d / (b + d) + d / (c + d)),
     lambda a, b, c, d: (a + b, a + c, b + d, c + d), 1.0),
    ("B1", "Baulieu", "Max", _b1,
     lambda a, b, c, d: (a + b + c + d,), 1.0),
    ("RR", "Russel and Rao", "Max",
     lambda a, b, c, d: a / (a + b + c + d),
     lambda a, b, c, d: (a + b + c + d,), 1.0),
    ("FMG", "Fager and McGowan", "Max",
     lambda a, b, c, d: a / np.sqrt((a + b) * (a + c)) - 1 / (2 * np.sqrt(a + b)),
     lambda a, b, c, d: ((a + b) * (a + c), a + b), 1.5),
    ("P", "Pearson", "Max",
     lambda a, b, c, d: _cross(a, b, c, d) / _four(a, b, c, d),
     lambda a, b, c, d: (_four(a, b, c, d),), None),
    ("B2", "Baulieu", "Max",
     lambda a, b, c, d: _cross(a, b, c, d) / (a + b + c + d) ** 2,
     lambda a, b, c, d: (a + b + c + d,), 0.5),
    ("SS2", "Sokal and Sneath", "Max",
     lambda a, b, c, d: a / (a + 2 * (b + c)),
     lambda a, b, c, d: (a + 2 * (b + c),), 1.0),
    ("SS3", "Sokal and Sneath / Ochiai", "Max",
     lambda a, b, c, d: a * d / np.sqrt((a + b) * (a + c) * (b + d) * (c + d)),
     lambda a, b, c, d: (_four(a, b, c, d),), 1.0),
    ("GL", "Gower and Legendre / Sokal and Sneath", "Max",
     lambda a, b, c, d: (a + d) / (a + 0.5 * (b + c) + d),
     lambda a, b, c, d: (a + 0.5 * (b + c) + d,), 1.0),
    ("RT", "Rogers and Tanimoto", "Max",
     lambda a, b, c, d: (a + d) / (a + 2 * (b + c) + d),
     lambda a, b, c, d: (a + 2 * (b + c) + d,), 1.0),
    ("GK", "Goodman and Kruskal / Yule", "Max",
     lambda a, b, c, d: _cross(a, b, c, d) / (a * d + b * c),
     lambda a, b, c, d: (a * d + b * c,), 2.0),
]


# inverses of H = 2RI - 1, GL = 2/(1 + 1/RI), RT = 1/(2/RI - 1), Mirkin = N(N-1)(1 - RI)
_TO_RAND = {
    "RI": lambda x, m: x,
    "H": lambda x, m: (x + 1) / 2,
    "GL": lambda x, m: x / (2 - x),
    "RT": lambda x, m: 2 * x / (1 + x),
    "Mirkin": lambda x, m: 1 - x / (2 * m),
}


def _build_registry() -> dict[str, IndexDescriptor]:
    reg = {}
    for row, (id_, name, direction, f, dens, span) in enumerate(_REGISTRY_ROWS, start=1):
        reg[id_] = IndexDescriptor(
            id=id_, name=name, table_row=row, direction=Direction(direction),
            formula=f, denominators=dens,
            span=None if span == "pairs" else span,
            span_in_pairs=2.0 if span == "pairs" else None,
            to_rand=_TO_RAND.get(id_),
        )
    return reg


REGISTRY: Mapping[str, IndexDescriptor] = _build_registry()
INDEX_IDS: tuple[str, ...] = tuple(REGISTRY)
RI_FAMILY: tuple[str, ...] = ("RI", "Mirkin", "H", "GL", "RT")


def descriptor(index_id: str) -> IndexDescriptor:
    try:
        return REGISTRY[index_id]
    except KeyError:
        raise UnknownIndex(f"unknown index {index_id!r}; valid ids: {', '.join(INDEX_IDS)}") from None


def evaluate_arrays(index_id: str, k11, k10, k01, k00) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised evaluation. Returns ``(values, degenerate_mask)``; values at
    degenerate positions are NaN."""
    desc = descriptor(index_id)
    a, b, c, d = (np.asarray(x, dtype=np.float64) for x in (k11, k10, k01, k00))
    a, b, c, d = np.broadcast_arrays(a, b, c, d)
    bad = np.zeros(a.shape, dtype=bool)
    for den in desc.denominators(a, b, c, d):
        bad |= np.asarray(den) == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(desc.formula(a, b, c, d), dtype=np.float64)
    values = np.where(bad, np.nan, np.broadcast_to(values, a.shape))
    return values, bad


def evaluate(index_id: str, k: PairCounts) -> IndexScore:
    if k.total_pairs < 1:
        raise ValueError("index evaluation needs at least one object pair")
    values, bad = evaluate_arrays(index_id, *(float(x) for x in k.as_tuple()))
    if bad.item():
        return IndexScore(index_id, DEGENERATE)
    return IndexScore(index_id, float(values))


def evaluate_all(k: PairCounts) -> dict[str, IndexScore]:
    return {i: evaluate(i, k) for i in INDEX_IDS}
