"""Command-line front end: ``gtbias {compare,predict,audit,sweep}``."""

from __future__ import annotations

import argparse
import io
import sys
from contextlib import contextmanager
from pathlib import Path

from . import audit
from .audit import (
    CURVE_HEADER, DEFAULT_SEED, SCENARIOS, VERDICT_HEADER, VI2, Candidates,
    ExperimentConfig, RatioGT, SkewedGT, assess_trend, curve_rows, run_experiment,
    verdict_row, write_csv,
)
from .errors import GTBiasError, InvalidArgument, InvalidDistribution
from .indices import INDEX_IDS, evaluate_all
from .paircounts import contingency, pair_counts
from .partition import ClusterDistribution, cluster_distribution, read_label_file
from .theory import VerdictSource, gt2_threshold, predict_nc_bias, vi2_from_contingency


class _OutputSet:
    """Tracks files written by a command so they can be removed on failure."""

    def __init__(self):
        self.paths: list[Path] = []

    @contextmanager
    def open(self, path: str | Path | None):
        if path is None or str(path) == "-":
            yield sys.stdout
            return
        path = Path(path)
        buf = io.StringIO()
        yield buf
        path.parent.mkdir(parents=True, exist_ok=True)
        try:
            path.write_text(buf.getvalue())
        except OSError:
            if path.is_file():
                path.unlink()
            raise
        self.paths.append(path)

    def discard(self):
        for p in self.paths:
            p.unlink(missing_ok=True)


def _parse_indices(text: str | None, default=INDEX_IDS, allow_vi2=True) -> tuple[str, ...]:
    if not text:
        return tuple(default)
    ids = tuple(t.strip() for t in text.split(",") if t.strip())
    valid = set(INDEX_IDS) | ({VI2} if allow_vi2 else set())
    bad = [i for i in ids if i not in valid]
    if bad:
        raise InvalidArgument(f"unknown index id(s): {', '.join(bad)}")
    return ids


def _parse_distribution(arg: str) -> ClusterDistribution:
    if Path(arg).is_file():
        return cluster_distribution(read_label_file(arg))
    try:
        probs = [float(x) for x in arg.split(",") if x.strip()]
    except ValueError:
        raise InvalidDistribution(f"not a label file or comma-separated proportions: {arg!r}") from None
    return ClusterDistribution(tuple(probs))


def _gt2_shape(probs: tuple[float, ...], tol: float = 1e-12) -> bool:
    rest = probs[1:]
    return len(probs) >= 2 and all(abs(x - rest[0]) <= tol for x in rest)


def cmd_compare(args, outputs: _OutputSet) -> int:
    u, v = read_label_file(args.file_u), read_label_file(args.file_v)
    ids = _parse_indices(args.indices)
    table = contingency(u, v)
    scores = evaluate_all(pair_counts(table))
    with outputs.open(args.out) as fh:
        rows = []
        for i in ids:
            if i == VI2:
                rows.append((i, vi2_from_contingency(table)))
            else:
                s = scores[i]
                rows.append((i, "degenerate" if s.is_degenerate else s.value))
        write_csv(fh, ("index", "value"), rows)
    return 0


def cmd_predict(args, outputs: _OutputSet) -> int:
    dist = _parse_distribution(args.distribution)
    v = predict_nc_bias(dist)
    pstar = gt2_threshold(dist.r) if _gt2_shape(dist.probs) else ""
    with outputs.open(args.out) as fh:
        write_csv(fh, VERDICT_HEADER + ("pstar",),
                  [verdict_row("predict", "RI", v.status, v.source, v) + (pstar,)])
    return 0


def cmd_audit(args, outputs: _OutputSet) -> int:
    sc = audit.scenario(args.scenario, n=args.n, full_scale=args.full_scale,
                        trials=args.trials, seed=args.seed,
                        indices=_parse_indices(args.indices))
    thr = dict(rho_threshold=args.rho_threshold, flat_threshold=args.flat_threshold)
    out_dir = Path(args.out)
    curve_out, verdict_out, statuses = [], [], {}
    for cfg in sc.configs:
        curves = run_experiment(cfg, workers=args.workers)
        gt_v = audit.gt_verdict(cfg)
        curve_out += curve_rows(cfg.name, curves, cfg.master_seed)
        verdict_out.append(verdict_row(cfg.name, "RI", gt_v.status, VerdictSource.Corollary, gt_v))
        for cv in curves:
            try:
                st = assess_trend(cv, **thr).status
            except GTBiasError:
                st = None
            statuses.setdefault(cv.index_id, []).append((cfg.name, st))
            verdict_out.append(verdict_row(cfg.name, cv.index_id, st, VerdictSource.Empirical, gt_v))

    with outputs.open(out_dir / f"{sc.name}_curves.csv") as fh:
        write_csv(fh, CURVE_HEADER, curve_out)
    with outputs.open(out_dir / f"{sc.name}_verdicts.csv") as fh:
        write_csv(fh, VERDICT_HEADER, verdict_out)
    gt_rows = []
    for idx, per_cfg in statuses.items():
        seen = {s for _, s in per_cfg if s is not None}
        flagged = len(seen) > 1
        summary = " ".join(f"{name}={'degenerate' if s is None else s.value}" for name, s in per_cfg)
        gt_rows.append((sc.name, idx, summary, "yes" if flagged else "no"))
        print(f"{idx}: {summary}" + ("  [GT bias]" if flagged else ""))
    with outputs.open(out_dir / f"{sc.name}_gt_bias.csv") as fh:
        write_csv(fh, ("scenario", "index", "statuses", "gt_bias"), gt_rows)
    return 0


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_sweep(args, outputs: _OutputSet) -> int:
    seed = args.seed
    if args.kind == "pstar_vs_r":
        if args.r_min < 2 or args.r_max < args.r_min:
            raise InvalidArgument("need 2 <= --r-min <= --r-max")
        with outputs.open(args.out) as fh:
            write_csv(fh, ("r", "pstar"),
                      [(r, gt2_threshold(r)) for r in range(args.r_min, args.r_max + 1)])
        return 0

    ids = _parse_indices(args.indices, default=("RI",))
    n = args.n if args.n is not None else 1000
    trials = args.trials if args.trials is not None else 100
    if args.kind == "gt2_p1":
        r = args.r if args.r is not None else 4
        grid = tuple(range(2, 3 * r + 1))
        specs = [(f"gt2_p1[r={r},p1={p:g}]", SkewedGT(r, p)) for p in _parse_floats(args.p1)]
    else:
        ratios = [tuple(int(x) for x in rt.split(":")) for rt in args.ratios.split(",")]
        if any(len(rt) < 2 or min(rt) < 1 for rt in ratios):
            raise InvalidArgument(f"bad --ratios {args.ratios!r}")
        grid = tuple(range(2, 3 * max(len(rt) for rt in ratios) + 1))
        specs = [(f"h2_ratio[{':'.join(map(str, rt))}]", RatioGT(rt)) for rt in ratios]
    rows = []
    for name, gt in specs:
        cfg = ExperimentConfig(name, n, gt, Candidates.UNIFORM_RANDOM, grid, trials, seed, ids)
        h2 = audit.gt_verdict(cfg).h2
        rows += [row + (h2,) for row in curve_rows(name, run_experiment(cfg, workers=args.workers), seed)]
    with outputs.open(args.out) as fh:
        write_csv(fh, CURVE_HEADER + ("h2",), rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gtbias",
        description="Pair-counting cluster validity indices and ground-truth bias audits.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_help="output CSV path (default: stdout)", out_default=None):
        sp.add_argument("--out", default=out_default, help=out_help)
        sp.add_argument("--indices", help="comma-separated index ids (VI2 allowed)")

    def experiment(sp):
        sp.add_argument("--n", type=int, help="object count override")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"master seed (default {DEFAULT_SEED})")
        sp.add_argument("--trials", type=int, help="candidates per cluster count (default 100)")
        sp.add_argument("--workers", type=int, default=1, help="threads for the trial loop")

    sp = sub.add_parser("compare", help="score two label files with every index")
    sp.add_argument("file_u")
    sp.add_argument("file_v")
    common(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("predict", help="predict the RI NC bias of a ground-truth distribution")
    sp.add_argument("distribution", help="comma-separated proportions or a label file")
    sp.add_argument("--out", help="output CSV path (default: stdout)")
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("audit", help="run a preset Monte Carlo scenario")
    sp.add_argument("scenario", help=f"one of: {', '.join(SCENARIOS)}")
    common(sp, "output directory (default: current directory)", ".")
    experiment(sp)
    sp.add_argument("--rho-threshold", type=float, default=audit.RHO_THRESHOLD)
    sp.add_argument("--flat-threshold", type=float, default=audit.FLAT_THRESHOLD)
    sp.add_argument("--full-scale", action="store_true", help="use N=100000 as in the original runs")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("sweep", help="parameter sweeps emitted as CSV")
    sp.add_argument("kind", choices=("gt2_p1", "pstar_vs_r", "h2_ratio"))
    common(sp)
    experiment(sp)
    sp.add_argument("--r", type=int, help="subset count for gt2_p1 (default 4)")
    sp.add_argument("--p1", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    sp.add_argument("--r-min", type=int, default=2)
    sp.add_argument("--r-max", type=int, default=50)
    sp.add_argument("--ratios", default="1:1:1,2:1:1,4:1:1,8:1:1",
                    help="comma-separated size ratios, e.g. 4:1:1")
    sp.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    outputs = _OutputSet()
    try:
        return args.func(args, outputs)
    except (GTBiasError, OSError, ValueError) as exc:
        outputs.discard()
        print(f"gtbias {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
