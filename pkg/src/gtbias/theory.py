"""Generalised entropies and analytic NC-bias predictors for the Rand index.

Every predictor here assumes the candidate partitions are balanced and
statistically independent of the ground truth. Random candidate draws satisfy
both only approximately, so empirical audits near a decision boundary can
disagree with the prediction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, InvalidBeta
from .paircounts import ContingencyTable
from .partition import ClusterDistribution

NEUTRAL_TOL = 1e-12


class BiasStatus(enum.Enum):
    NCinc = "NCinc"
    NCdec = "NCdec"
    NCneu = "NCneu"

    def __str__(self):
        return self.value


class VerdictSource(enum.Enum):
    TheoremH2 = "TheoremH2"
    Corollary = "Corollary"
    TheoremSorted = "TheoremSorted"
    GT1 = "GT1"
    GT2 = "GT2"
    Empirical = "Empirical"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class BiasVerdict:
    """Predicted NC-bias status of the Rand index for one ground truth.

    ``discriminant`` is ``sum(p_i**2) - 1/2``; its sign fixes the status
    (positive -> NCdec, zero -> NCneu, negative -> NCinc).
    """

    status: BiasStatus
    discriminant: float
    h2: float
    source: VerdictSource


def _status_from_sign(x: float, tol: float = NEUTRAL_TOL) -> BiasStatus:
    if x > tol:
        return BiasStatus.NCdec
    if x < -tol:
        return BiasStatus.NCinc
    return BiasStatus.NCneu


def _probs(p) -> np.ndarray:
    if isinstance(p, ClusterDistribution):
        return p.as_array()
    return np.asarray(p, dtype=float)


def havrda_charvat_entropy(p, beta: float) -> float:
    """Havrda-Charvat entropy of order ``beta``; Shannon entropy (base 2) at 1."""
    if not beta > 0:
        raise InvalidBeta(f"beta must be > 0, got {beta}")
    probs = _probs(p)
    probs = probs[probs > 0]
    if beta == 1:
        return float(-np.sum(probs * np.log2(probs)))
    return float((1.0 - np.sum(probs ** beta)) / (1.0 - 2.0 ** (1.0 - beta)))


def quadratic_entropy(p) -> float:
    """``H2 = 2 * (1 - sum(p_i**2))``."""
    probs = _probs(p)
    return float(2.0 * (1.0 - np.dot(probs, probs)))


def _table_probs(t: ContingencyTable):
    n = float(t.total)
    return t.counts / n, t.row_sums / n, t.col_sums / n


def joint_quadratic_entropy(t: ContingencyTable) -> float:
    joint, _, _ = _table_probs(t)
    return quadratic_entropy(joint.ravel())


def vi2_from_contingency(t: ContingencyTable) -> float:
    """Quadratic-entropy variation of information ``2 H2(U,V) - H2(U) - H2(V)``."""
    joint, rows, cols = _table_probs(t)
    return 2.0 * quadratic_entropy(joint.ravel()) - quadratic_entropy(rows) - quadratic_entropy(cols)


def vi2_from_ri(ri: float, n: int) -> float:
    """``VI2 = (2/N) (N-1) (1 - RI)``."""
    if not 0.0 <= ri <= 1.0 or n < 2:
        raise InvalidArgument(f"need ri in [0, 1] and n >= 2, got ri={ri}, n={n}")
    return 2.0 / n * (n - 1) * (1.0 - ri)


def independent_vi2(h2_u: float, h2_v: float) -> float:
    """VI2 of two statistically independent partitions from their H2 values."""
    return h2_u + (1.0 - h2_u) * h2_v


def predict_nc_bias(p: ClusterDistribution, tol: float = NEUTRAL_TOL) -> BiasVerdict:
    """Rand-index NC bias from the sign of ``sum(p_i**2) - 1/2``.

    Same decision as comparing ``H2`` of the ground truth with 1.
    """
    probs = _probs(p)
    disc = float(np.dot(probs, probs) - 0.5)
    return BiasVerdict(_status_from_sign(disc, tol), disc, quadratic_entropy(probs),
                       VerdictSource.Corollary)


def predict_nc_bias_h2(p: ClusterDistribution, tol: float = NEUTRAL_TOL) -> BiasVerdict:
    h2 = quadratic_entropy(p)
    # H2 < 1 -> NCdec; the discriminant is (1 - H2) / 2
    disc = (1.0 - h2) / 2.0
    return BiasVerdict(_status_from_sign(disc, tol), disc, h2, VerdictSource.TheoremH2)


def predict_nc_bias_sorted(p: ClusterDistribution, tol: float = NEUTRAL_TOL) -> BiasVerdict:
    """Case analysis on the largest proportion ``p1'`` and the cluster count."""
    q = sorted(_probs(p).tolist(), reverse=True)
    r, p1 = len(q), q[0]
    disc = float(np.dot(q, q) - 0.5)
    h2 = quadratic_entropy(q)
    if r == 1:
        status = BiasStatus.NCdec
    elif r == 2:
        status = BiasStatus.NCneu if abs(p1 - 0.5) <= tol else BiasStatus.NCdec
    elif p1 > 0.5:
        lead = p1 * (p1 - 0.5)
        rest = math.fsum(x * (0.5 - x) for x in q[1:])
        status = _status_from_sign(lead - rest, tol)
    else:
        status = BiasStatus.NCinc
    return BiasVerdict(status, disc, h2, VerdictSource.TheoremSorted)


def gt2_threshold(r: int) -> float:
    """Skew threshold ``p* = (2 + sqrt(2 (r-1)(r-2))) / (2r)`` on the first cluster."""
    if r < 2:
        raise InvalidArgument(f"need r >= 2, got {r}")
    return (2.0 + math.sqrt(2.0 * (r - 1) * (r - 2))) / (2.0 * r)


def gt2_quadratic(r: int, p1: float) -> float:
    """``sum(p_i**2) - 1/2`` for the first-cluster-skewed shape, as a polynomial in p1."""
    return r / (r - 1) * p1 ** 2 - 2 / (r - 1) * p1 + (3 - r) / (2 * (r - 1))


def predict_gt1(r: int) -> BiasStatus:
    if r < 2:
        raise InvalidArgument(f"need r >= 2, got {r}")
    return BiasStatus.NCneu if r == 2 else BiasStatus.NCinc


def predict_gt2(r: int, p1: float, tol: float = NEUTRAL_TOL) -> BiasStatus:
    if r < 2 or not 0.0 < p1 < 1.0:
        raise InvalidArgument(f"need r >= 2 and p1 in (0, 1), got r={r}, p1={p1}")
    pstar = gt2_threshold(r)
    if r == 2:
        return BiasStatus.NCneu if abs(p1 - pstar) <= tol else BiasStatus.NCdec
    if p1 > pstar + tol:
        return BiasStatus.NCdec
    if p1 < pstar - tol:
        return BiasStatus.NCinc
    return BiasStatus.NCneu


def gt2_verdict(r: int, p1: float) -> BiasVerdict:
    dist = ClusterDistribution.skewed(r, p1)
    v = predict_nc_bias(dist)
    return BiasVerdict(predict_gt2(r, p1), v.discriminant, v.h2, VerdictSource.GT2)


def gt1_verdict(r: int) -> BiasVerdict:
    v = predict_nc_bias(ClusterDistribution.balanced(r))
    return BiasVerdict(predict_gt1(r), v.discriminant, v.h2, VerdictSource.GT1)
