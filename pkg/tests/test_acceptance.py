"""Acceptance suite: one test per acceptance criterion.

Each test records a ``PASS``/``FAIL`` line; the lines are echoed at the end of
the pytest run (see ``conftest.py``) and when the module runs as a script.
"""

import math
import time
from functools import lru_cache

import numpy as np
import pytest

from gtbias import audit
from gtbias.audit import (
    Candidates, assess_trend, classify_trend, detect_gt_bias, predict_vs_empirical,
    run_experiment, slope,
)
from gtbias.indices import INDEX_IDS, RI_FAMILY, evaluate, evaluate_all
from gtbias.paircounts import (
    ContingencyTable, PairCounts, contingency, pair_counts, pair_counts_bruteforce,
    product_contingency,
)
from gtbias.partition import gen_uniform_random
from gtbias.theory import (
    BiasStatus, gt2_quadratic, gt2_threshold, independent_vi2, quadratic_entropy,
    vi2_from_contingency,
)

NCinc, NCdec, NCneu = BiasStatus.NCinc, BiasStatus.NCdec, BiasStatus.NCneu
LINES: list[str] = []


def check(num: int, title: str, ok: bool, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} [{num:2d}] {title}" + (f": {detail}" if detail else "")
    LINES.append(line)
    print(line)
    assert ok, line


@lru_cache(maxsize=None)
def timed_scenario(name: str):
    """Run every config of a preset once; returns [(config, curves)] and seconds."""
    t0 = time.perf_counter()
    runs = [(cfg, run_experiment(cfg)) for cfg in audit.scenario(name).configs]
    return runs, time.perf_counter() - t0


def statuses(curves) -> dict:
    return {c.index_id: classify_trend(c) for c in curves}


def test_01_oracle_equivalence():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(200):
        n = int(rng.integers(2, 501))
        r, c = (int(rng.integers(1, min(10, n) + 1)) for _ in range(2))
        u, v = gen_uniform_random(n, r, rng), gen_uniform_random(n, c, rng)
        bad += pair_counts(contingency(u, v)) != pair_counts_bruteforce(u, v)
    dt = time.perf_counter() - t0
    check(1, "oracle equivalence", bad == 0 and dt < 10,
          f"{bad} mismatches in 200 pairs, {dt:.2f}s")


def _random_pair_counts(rng, size):
    out = []
    while len(out) < size:
        k = PairCounts(*map(int, rng.integers(0, 10**7, size=4)))
        if k.k11 + k.k00 > 0:
            out.append(k)
    return out


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_02_ri_family_identities():
    rng = np.random.default_rng(2)
    worst = 0.0
    for k in _random_pair_counts(rng, 1000):
        s = evaluate_all(k)
        ri, m = s["RI"].value, k.total_pairs
        # N(N-1) = 2 * C(N, 2) exactly, whatever N is
        expected = {"H": 2 * ri - 1, "GL": 2 / (1 + 1 / ri), "RT": 1 / (2 / ri - 1),
                    "Mirkin": 2 * m * (1 - ri)}
        for i, e in expected.items():
            worst = max(worst, _rel(s[i].value, e) if e != 0 else abs(s[i].value))
    check(2, "RI-family identities", worst <= 1e-9, f"max relative error {worst:.2e}")


def test_03_vi2_ri_identity():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(1000):
        r, c = rng.integers(1, 9, size=2)
        counts = rng.integers(0, 50, size=(r, c))
        if counts.sum() < 2:
            counts[0, 0] += 2
        t = ContingencyTable(counts)
        n = t.total
        ri = evaluate("RI", pair_counts(t)).value
        expected = 2 / n * (n - 1) * (1 - ri)
        got = vi2_from_contingency(t)
        worst = max(worst, _rel(got, expected) if expected > 1e-12 else abs(got))
    check(3, "VI2-RI identity", worst <= 1e-9, f"max relative error {worst:.2e}")


def test_04_independent_vi2_exactness():
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        xs = rng.integers(1, 8, size=rng.integers(1, 8))
        ys = rng.integers(1, 8, size=rng.integers(1, 8))
        t = product_contingency(xs * ys.sum(), ys * xs.sum())
        hu = quadratic_entropy(t.row_sums / t.total)
        hv = quadratic_entropy(t.col_sums / t.total)
        worst = max(worst, abs(vi2_from_contingency(t) - independent_vi2(hu, hv)))
    check(4, "independent VI2 exactness", worst <= 1e-12, f"max abs error {worst:.2e}")


def test_05_pstar():
    p4, p2, pinf = gt2_threshold(4), gt2_threshold(2), gt2_threshold(10**6)
    resid = max(abs(gt2_quadratic(r, gt2_threshold(r))) for r in range(2, 1001))
    ok = (abs(p4 - 0.68301) <= 1e-5 and p2 == 0.5 and abs(pinf - 0.70711) <= 1e-3
          and resid < 1e-12)
    check(5, "p* correctness", ok,
          f"p*(4)={p4:.7f} p*(2)={p2} p*(1e6)={pinf:.6f} max residual {resid:.1e}")


def test_06_example1():
    runs, dt = timed_scenario("example1")
    st = statuses(runs[0][1])
    got = (st["RI"], st["JI"], st["ARI"])
    ok = got == (NCinc, NCdec, NCneu) and dt < 60
    check(6, "Example 1 reproduction", ok,
          f"RI={got[0]} JI={got[1]} ARI={got[2]} ({dt:.1f}s)")


def test_07_example2():
    runs, dt = timed_scenario("example2")
    curves = {c.index_id: c for c in runs[0][1]}
    st = statuses(curves.values())
    ri = curves["RI"]
    argmax_c = int(ri.cs[np.nanargmax(ri.means)])
    ok = (st["RI"], st["JI"], st["ARI"]) == (NCdec, NCdec, NCneu) and argmax_c == 2 and dt < 60
    check(7, "Example 2 reproduction", ok,
          f"RI={st['RI']} (max at c={argmax_c}) JI={st['JI']} ARI={st['ARI']} ({dt:.1f}s)")


def test_08_gt1_sweep():
    wanted = {2, 10, 20}
    cfgs = [c for c in audit.scenario("gt1_sweep", indices=("RI", "JI")).configs
            if c.gt.r in wanted]
    curves = {cfg.gt.r: run_experiment(cfg) for cfg in cfgs}
    st = {r: statuses(cv) for r, cv in curves.items()}
    rep = detect_gt_bias(curves[2], curves[10])
    ok = (st[2]["RI"] is NCneu and st[10]["RI"] is NCinc and st[20]["RI"] is NCinc
          and all(st[r]["JI"] is NCdec for r in wanted)
          and "RI" in rep.flagged and "JI" not in rep.flagged)
    detail = " ".join(f"r={r}: RI={st[r]['RI']} JI={st[r]['JI']}" for r in sorted(wanted))
    check(8, "GT1 sweep", ok, f"{detail}; flagged={list(rep.flagged)}")


def test_09_gt2_sweep():
    runs, _ = timed_scenario("pstar_demo")
    pstar = gt2_threshold(4)
    wrong, report = [], []
    for cfg, curves in runs:
        ri = next(c for c in curves if c.index_id == "RI")
        s = slope(ri)
        p1 = cfg.gt.p1
        report.append(f"{p1:g}:{'+' if s > 0 else '-'}")
        if math.isclose(p1, 0.7):
            continue
        if np.sign(s) != -np.sign(p1 - pstar):
            wrong.append(p1)
    p07 = next(r for r in report if r.startswith("0.7:"))
    check(9, "GT2 sweep at r=4", not wrong,
          f"slope signs {' '.join(report)}; disagreements {wrong}; p1=0.7 reported only ({p07})")


def test_10_predictor_vs_empirical():
    names = ("example1", "example2", "gt1_sweep", "gt2_sweep", "h2_ratio_demo", "pstar_demo")
    unexplained, near = [], []
    for name in names:
        for cfg in audit.scenario(name).configs:
            assert cfg.candidates is Candidates.UNIFORM_RANDOM
            rec = predict_vs_empirical(cfg)
            unexplained += [(rec.config_name, i) for i in rec.unexplained_mismatches]
            if rec.near_threshold:
                near.append(f"{rec.config_name} (disc={rec.predicted.discriminant:+.4f}, "
                            f"mismatches={list(rec.mismatches)})")
    check(10, "predictor vs empirical", not unexplained,
          f"unexplained mismatches {unexplained}; near-threshold excluded: {near}")


def test_11_ari_gt_bias():
    runs, _ = timed_scenario("ari_gt_bias")
    (cfg_a, curves_a), (cfg_b, curves_b) = runs
    ari_a = assess_trend(next(c for c in curves_a if c.index_id == "ARI"))
    ari_b = assess_trend(next(c for c in curves_b if c.index_id == "ARI"))
    rep = detect_gt_bias(curves_a, curves_b)
    ok = ari_a.status is NCinc and ari_b.status is NCdec and "ARI" in rep.flagged
    check(11, "ARI GT-bias scenario", ok,
          f"{cfg_a.gt}: {ari_a.status} (rho={ari_a.rho:+.2f}), "
          f"{cfg_b.gt}: {ari_b.status} (rho={ari_b.rho:+.2f})")


def test_12_five_index_finding():
    (cfg1, curves1), = timed_scenario("example1")[0]
    (cfg2, curves2), = timed_scenario("example2")[0]
    rep = detect_gt_bias(curves1, curves2)
    flagged = set(rep.flagged)
    degenerate = set(rep.degenerate)
    expected = set(RI_FAMILY) - degenerate
    v1, v2 = audit.gt_verdict(cfg1), audit.gt_verdict(cfg2)
    near = [f"{c.name} disc={v.discriminant:+.4f}" for c, v in ((cfg1, v1), (cfg2, v2))
            if abs(v.discriminant) < audit.NEAR_THRESHOLD]
    check(12, "five-index finding", flagged == expected and len(rep.entries) == len(INDEX_IDS),
          f"flagged={sorted(flagged)} degenerate={sorted(degenerate)} "
          f"discriminants {v1.discriminant:+.4f}/{v2.discriminant:+.4f}; near-threshold {near}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
