"""Monte Carlo NC-bias and GT-bias audits over random candidate partitions.

One ground truth is drawn per experiment and held fixed; for every candidate
cluster count ``c`` a batch of random candidates is compared against it and the
index values are averaged. Every trial owns a random stream derived from
``(master_seed, c, trial)``, so results do not depend on execution order or
thread count.
"""

from __future__ import annotations

import csv
import enum
import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import IO, Iterable, Mapping, Sequence

import numpy as np
from scipy import stats

from . import partition as part
from .errors import IndexSetMismatch, InsufficientPoints, InvalidSize, UnknownScenario
from .indices import INDEX_IDS, REGISTRY, RI_FAMILY, Direction, descriptor, evaluate_arrays
from .paircounts import comb2, contingency, pair_counts
from .partition import ClusterDistribution, CrispPartition
from .theory import BiasStatus, BiasVerdict, VerdictSource, predict_nc_bias, vi2_from_contingency

DEFAULT_SEED = 20160317
DESK_N = 10_000
FULL_N = 100_000
RHO_THRESHOLD = 0.8
FLAT_THRESHOLD = 0.01
NEAR_THRESHOLD = 0.02

VI2 = "VI2"
VI2_SPAN = 2.0

CURVE_HEADER = ("scenario", "index", "c", "mean", "stderr", "trials", "degenerate", "seed")
VERDICT_HEADER = ("scenario", "index", "status", "source", "discriminant", "h2")


# -- ground-truth and candidate specifications --------------------------------


@dataclass(frozen=True)
class UniformGT:
    """``r`` equal-sized subsets (sizes differ by at most one object)."""

    r: int

    @property
    def num_clusters(self) -> int:
        return self.r

    def generate(self, n, rng):
        return part.gen_balanced(n, self.r, rng)

    def __str__(self):
        return f"uniform({self.r})"


@dataclass(frozen=True)
class SkewedGT:
    """First subset holds ``p1`` of the objects, the rest spread uniformly."""

    r: int
    p1: float

    @property
    def num_clusters(self) -> int:
        return self.r

    def generate(self, n, rng):
        return part.gen_skewed(n, self.r, self.p1, rng)

    def __str__(self):
        return f"skewed({self.r},{self.p1:g})"


@dataclass(frozen=True)
class TwoStageGT:
    c_true: int
    f1: float
    f2: float

    @property
    def num_clusters(self) -> int:
        return self.c_true

    def generate(self, n, rng):
        return part.gen_two_stage_skewed(n, self.c_true, self.f1, self.f2, rng)

    def __str__(self):
        return f"two_stage({self.c_true},{self.f1:g},{self.f2:g})"


@dataclass(frozen=True)
class RatioGT:
    """Exact subset sizes in the proportions ``ratios`` (largest-remainder rounding)."""

    ratios: tuple[int, ...]

    @property
    def num_clusters(self) -> int:
        return len(self.ratios)

    def sizes(self, n: int) -> list[int]:
        total = sum(self.ratios)
        raw = [n * x / total for x in self.ratios]
        sizes = [math.floor(x) for x in raw]
        order = sorted(range(len(raw)), key=lambda i: (sizes[i] - raw[i], i))
        for i in order[: n - sum(sizes)]:
            sizes[i] += 1
        return sizes

    def generate(self, n, rng):
        return part.gen_with_sizes(self.sizes(n), rng)

    def __str__(self):
        return "ratio(" + ":".join(str(x) for x in self.ratios) + ")"


GroundTruthSpec = UniformGT | SkewedGT | TwoStageGT | RatioGT


class Candidates(enum.Enum):
    UNIFORM_RANDOM = "uniform_random"
    BALANCED = "balanced"
    PINNED_FIRST_CLUSTER = "pinned_first_cluster"
    GROUND_TRUTH = "ground_truth"  # identity candidate, for sanity checks

    def generate(self, gt: CrispPartition, c: int, rng) -> CrispPartition:
        if self is Candidates.UNIFORM_RANDOM:
            return part.gen_uniform_random(gt.n, c, rng)
        if self is Candidates.BALANCED:
            return part.gen_balanced(gt.n, c, rng)
        if self is Candidates.PINNED_FIRST_CLUSTER:
            return part.gen_with_pinned_first_cluster(gt, c, rng)
        if c != gt.num_clusters:
            raise InvalidSize(f"identity candidate needs c == {gt.num_clusters}")
        return gt


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment.

    ``candidate_rows`` places the candidate in the rows (``U``) of the
    contingency table and the ground truth in the columns. Only the asymmetric
    indices (W1/W2, MK, PE, FMG) are affected by the orientation.
    """

    name: str
    n: int
    gt: GroundTruthSpec
    candidates: Candidates = Candidates.UNIFORM_RANDOM
    c_grid: tuple[int, ...] = ()
    trials_per_c: int = 100
    master_seed: int = DEFAULT_SEED
    indices: tuple[str, ...] = INDEX_IDS
    candidate_rows: bool = True

    def __post_init__(self):
        grid = tuple(int(c) for c in self.c_grid) or tuple(range(2, 3 * self.gt.num_clusters + 1))
        object.__setattr__(self, "c_grid", grid)
        object.__setattr__(self, "indices", tuple(self.indices))
        if any(c < 2 or c > self.n for c in grid):
            raise InvalidSize(f"c_grid entries must lie in [2, {self.n}]")
        if self.trials_per_c < 1:
            raise InvalidSize("trials_per_c must be >= 1")
        for i in self.indices:
            if i != VI2:
                descriptor(i)

    def fingerprint(self) -> str:
        key = repr((self.n, str(self.gt), self.candidates.value, self.c_grid,
                    self.trials_per_c, self.master_seed, self.candidate_rows))
        return hashlib.sha1(key.encode()).hexdigest()[:12]


# -- experiment runner --------------------------------------------------------


@dataclass(frozen=True)
class TrendPoint:
    c: int
    mean: float  # NaN when every trial was degenerate
    stderr: float
    degenerate: int


@dataclass(frozen=True)
class TrendCurve:
    index_id: str
    points: tuple[TrendPoint, ...]
    trials_per_c: int
    fingerprint: str
    total_pairs: int = 0

    @property
    def cs(self) -> np.ndarray:
        return np.array([p.c for p in self.points])

    @property
    def means(self) -> np.ndarray:
        return np.array([p.mean for p in self.points])


def _stream(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=key))


def ground_truth(cfg: ExperimentConfig) -> CrispPartition:
    return cfg.gt.generate(cfg.n, _stream(cfg.master_seed, 0))


def _run_c(cfg: ExperimentConfig, gt: CrispPartition, c: int) -> dict[str, TrendPoint]:
    ks = np.empty((cfg.trials_per_c, 4), dtype=np.float64)
    vi2 = np.empty(cfg.trials_per_c) if VI2 in cfg.indices else None
    for t in range(cfg.trials_per_c):
        cand = cfg.candidates.generate(gt, c, _stream(cfg.master_seed, 1, c, t))
        table = contingency(cand, gt) if cfg.candidate_rows else contingency(gt, cand)
        ks[t] = pair_counts(table).as_tuple()
        if vi2 is not None:
            vi2[t] = vi2_from_contingency(table)
    out = {}
    for idx in cfg.indices:
        if idx == VI2:
            values, bad = vi2, np.zeros(vi2.shape, dtype=bool)
        else:
            values, bad = evaluate_arrays(idx, *ks.T)
        good = values[~bad]
        if good.size == 0:
            mean, se = math.nan, math.nan
        else:
            mean = float(good.mean())
            se = float(good.std(ddof=1) / math.sqrt(good.size)) if good.size > 1 else 0.0
        out[idx] = TrendPoint(c, mean, se, int(bad.sum()))
    return out


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> list[TrendCurve]:
    """Mean and standard error of every requested index at every ``c``.

    Degenerate scores are skipped in the mean and counted per point.
    """
    gt = ground_truth(cfg)
    grid = sorted(cfg.c_grid)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_c = list(pool.map(lambda c: _run_c(cfg, gt, c), grid))
    else:
        per_c = [_run_c(cfg, gt, c) for c in grid]
    fp = cfg.fingerprint()
    total = comb2(cfg.n)
    return [
        TrendCurve(idx, tuple(pc[idx] for pc in per_c), cfg.trials_per_c, fp, total)
        for idx in cfg.indices
    ]


# -- trend classification -----------------------------------------------------


@dataclass(frozen=True)
class TrendAssessment:
    status: BiasStatus
    rho: float
    relative_range: float
    low_confidence: bool


def _direction(index_id: str) -> Direction:
    return Direction.MIN if index_id == VI2 else descriptor(index_id).direction


def _flatness_values(curve: TrendCurve, means: np.ndarray) -> tuple[np.ndarray, float]:
    """Values and value-span on which flatness is judged."""
    if curve.index_id == VI2:
        return means, VI2_SPAN
    desc = REGISTRY[curve.index_id]
    if desc.to_rand is not None and curve.total_pairs:
        # monotone relatives of RI are judged on the RI scale so they agree with it
        return np.asarray(desc.to_rand(means, float(curve.total_pairs))), 1.0
    span = desc.value_span(curve.total_pairs) if curve.total_pairs else desc.span
    # unbounded indices fall back to the curve's own magnitude
    return means, span if span is not None else float(np.max(np.abs(means)))


def assess_trend(curve: TrendCurve, rho_threshold: float = RHO_THRESHOLD,
                 flat_threshold: float = FLAT_THRESHOLD) -> TrendAssessment:
    """Classify a mean-vs-c curve as NCinc, NCdec or NCneu.

    A curve whose range is below ``flat_threshold`` of the index's value span
    is neutral; monotone relatives of RI are measured on the RI scale.
    Otherwise the Spearman correlation between ``c`` and the mean decides,
    with its sign flipped for min-optimal indices so that NCinc always means
    "prefers more clusters". Correlations inside the band are neutral but
    flagged low-confidence.
    """
    keep = [p for p in curve.points if not math.isnan(p.mean)]
    if len(keep) < 3:
        raise InsufficientPoints(f"{curve.index_id}: need >= 3 non-degenerate points, got {len(keep)}")
    cs = np.array([p.c for p in keep], dtype=float)
    means = np.array([p.mean for p in keep])
    flat_vals, scale = _flatness_values(curve, means)
    spread = float(flat_vals.max() - flat_vals.min())
    rel = spread / scale if scale > 0 else 0.0
    if rel < flat_threshold:
        return TrendAssessment(BiasStatus.NCneu, math.nan, rel, False)
    rho = float(stats.spearmanr(cs, means).statistic)
    pref = rho if _direction(curve.index_id) is Direction.MAX else -rho
    if pref >= rho_threshold:
        return TrendAssessment(BiasStatus.NCinc, rho, rel, False)
    if pref <= -rho_threshold:
        return TrendAssessment(BiasStatus.NCdec, rho, rel, False)
    return TrendAssessment(BiasStatus.NCneu, rho, rel, True)


def classify_trend(curve: TrendCurve, rho_threshold: float = RHO_THRESHOLD,
                   flat_threshold: float = FLAT_THRESHOLD) -> BiasStatus:
    return assess_trend(curve, rho_threshold, flat_threshold).status


def slope(curve: TrendCurve) -> float:
    """Least-squares slope of the mean over ``c`` (degenerate points dropped)."""
    keep = [p for p in curve.points if not math.isnan(p.mean)]
    return float(np.polyfit([p.c for p in keep], [p.mean for p in keep], 1)[0])


# -- GT bias ------------------------------------------------------------------


@dataclass(frozen=True)
class GtBiasEntry:
    index_id: str
    status_a: BiasStatus | None  # None when the curve is too degenerate to classify
    status_b: BiasStatus | None

    @property
    def flagged(self) -> bool:
        return (self.status_a is not None and self.status_b is not None
                and self.status_a is not self.status_b)

    @property
    def degenerate(self) -> bool:
        return self.status_a is None or self.status_b is None


@dataclass(frozen=True)
class GtBiasReport:
    entries: dict[str, GtBiasEntry]

    @property
    def flagged(self) -> tuple[str, ...]:
        return tuple(i for i, e in self.entries.items() if e.flagged)

    @property
    def degenerate(self) -> tuple[str, ...]:
        return tuple(i for i, e in self.entries.items() if e.degenerate)


def _classify_or_none(curve, **kw):
    try:
        return classify_trend(curve, **kw)
    except InsufficientPoints:
        return None


def detect_gt_bias(curves_a: Sequence[TrendCurve], curves_b: Sequence[TrendCurve],
                   rho_threshold: float = RHO_THRESHOLD,
                   flat_threshold: float = FLAT_THRESHOLD) -> GtBiasReport:
    """Flag every index whose NC-bias status differs between two ground truths."""
    a = {c.index_id: c for c in curves_a}
    b = {c.index_id: c for c in curves_b}
    if a.keys() != b.keys():
        raise IndexSetMismatch(f"index sets differ: {sorted(a.keys() ^ b.keys())}")
    kw = dict(rho_threshold=rho_threshold, flat_threshold=flat_threshold)
    return GtBiasReport({
        i: GtBiasEntry(i, _classify_or_none(a[i], **kw), _classify_or_none(b[i], **kw))
        for i in a
    })


# -- presets ------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    name: str
    configs: tuple[ExperimentConfig, ...]


SCENARIOS = ("example1", "example2", "gt1_sweep", "gt2_sweep", "h2_ratio_demo",
             "pstar_demo", "ari_gt_bias")
P1_STEPS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
H2_RATIOS = ((1, 1, 1), (2, 1, 1), (4, 1, 1), (8, 1, 1))


def scenario(name: str, n: int | None = None, full_scale: bool = False,
             trials: int | None = None, seed: int | None = None,
             indices: Sequence[str] | None = None) -> Scenario:
    """Preset experiment(s). ``n`` overrides the object count of every config."""
    if name not in SCENARIOS:
        raise UnknownScenario(f"unknown scenario {name!r}; valid: {', '.join(SCENARIOS)}")
    big = FULL_N if full_scale else DESK_N
    # the ratio and p* figures were produced at N=1000
    small = FULL_N if full_scale else 1000

    def cfg(label, gt, n_default, grid, cands=Candidates.UNIFORM_RANDOM):
        kw = {}
        if trials is not None:
            kw["trials_per_c"] = trials
        if seed is not None:
            kw["master_seed"] = seed
        if indices is not None:
            kw["indices"] = tuple(indices)
        return ExperimentConfig(label, n if n is not None else n_default, gt, cands,
                                tuple(grid), **kw)

    if name == "example1":
        configs = [cfg("example1", UniformGT(5), big, range(2, 16))]
    elif name == "example2":
        configs = [cfg("example2", SkewedGT(5, 0.8), big, range(2, 16))]
    elif name == "gt1_sweep":
        configs = [cfg(f"gt1_sweep[r={r}]", UniformGT(r), big, range(2, 3 * r + 1))
                   for r in (2, 10, 20, 30, 50)]
    elif name == "gt2_sweep":
        configs = [cfg(f"gt2_sweep[p1={p:g}]", SkewedGT(5, p), big, range(2, 16))
                   for p in P1_STEPS]
    elif name == "h2_ratio_demo":
        # 1200 objects split every ratio below exactly
        configs = [cfg(f"h2_ratio_demo[{':'.join(map(str, rt))}]", RatioGT(rt),
                       FULL_N if full_scale else 1200, range(2, 10))
                   for rt in H2_RATIOS]
    elif name == "pstar_demo":
        configs = [cfg(f"pstar_demo[p1={p:g}]", SkewedGT(4, p), small, range(2, 13))
                   for p in P1_STEPS]
    else:
        configs = [cfg(f"ari_gt_bias[{lab}]", TwoStageGT(5, 0.2, f2), big, range(2, 16),
                       Candidates.PINNED_FIRST_CLUSTER)
                   for lab, f2 in (("GT1", 0.2), ("GT2", 0.5))]
    return Scenario(name, tuple(configs))


# -- prediction vs experiment -------------------------------------------------


@dataclass(frozen=True)
class AgreementRecord:
    config_name: str
    predicted: BiasVerdict
    empirical: dict[str, BiasStatus]
    near_threshold: bool

    @property
    def mismatches(self) -> tuple[str, ...]:
        return tuple(i for i, s in self.empirical.items() if s is not self.predicted.status)

    @property
    def unexplained_mismatches(self) -> tuple[str, ...]:
        """Mismatches not covered by the near-threshold exclusion."""
        return () if self.near_threshold else self.mismatches


def predict_vs_empirical(cfg: ExperimentConfig, near_threshold: float = NEAR_THRESHOLD,
                         rho_threshold: float = RHO_THRESHOLD,
                         flat_threshold: float = FLAT_THRESHOLD,
                         workers: int = 1) -> AgreementRecord:
    """Compare the analytic Rand-index prediction for the drawn ground truth
    with the empirical trends of the Rand index and its monotone relatives."""
    cfg = replace(cfg, indices=RI_FAMILY)
    gt = ground_truth(cfg)
    verdict = predict_nc_bias(part.cluster_distribution(gt))
    curves = run_experiment(cfg, workers=workers)
    empirical = {c.index_id: classify_trend(c, rho_threshold, flat_threshold) for c in curves}
    return AgreementRecord(cfg.name, verdict, empirical, abs(verdict.discriminant) < near_threshold)


def gt_verdict(cfg: ExperimentConfig) -> BiasVerdict:
    return predict_nc_bias(part.cluster_distribution(ground_truth(cfg)))


# -- CSV ----------------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def curve_rows(name: str, curves: Iterable[TrendCurve], seed: int) -> list[tuple]:
    return [
        (name, cv.index_id, p.c, _fmt(p.mean), _fmt(p.stderr), cv.trials_per_c, p.degenerate, seed)
        for cv in curves for p in cv.points
    ]


def write_csv(fh: IO[str], header: Sequence[str], rows: Iterable[Sequence]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])


def verdict_row(name: str, index_id: str, status: BiasStatus | None, source: VerdictSource,
                verdict: BiasVerdict) -> tuple:
    return (name, index_id, "degenerate" if status is None else status.value, source.value,
            verdict.discriminant, verdict.h2)
