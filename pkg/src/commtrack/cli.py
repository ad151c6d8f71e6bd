"""Command-line entry point.

Subcommands cover the full pipeline: ``detect`` (static communities per
snapshot), ``track`` (similarity network, dynamic communities, events),
``baseline`` (one of the threshold-based trackers), ``bench`` (synthetic
dataset generation), ``eval`` (dual-scenario protocol plus stage timings),
and ``social`` (co-hashtag pipeline). Every run writes a ``manifest.json``
beside its outputs echoing the arguments, seed, and tool version. Runs with
identical inputs and seeds are byte-identical apart from the manifest
timestamp. Set COMMTRACK_LOG=debug|info|warning for verbosity.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import logging
import math
import os
import random
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__, baselines, benchgen, evaluation, events, simnet, social, tracker
from .graphs import Partition, load_partitions, load_snapshots, save_partitions, save_snapshots
from .louvain import detect, pick_level

log = logging.getLogger("commtrack")

DEFAULT_SEED = 42


def _resolve_seed(value: str) -> int:
    if value == "random":
        return random.SystemRandom().randrange(2**31)
    return int(value)


def _outdir(args) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(outdir: Path, subcommand: str, args, outputs: list[Path]) -> None:
    echo = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in vars(args).items()
        if k != "func"
    }
    doc = {
        "tool": "commtrack",
        "version": __version__,
        "subcommand": subcommand,
        "arguments": echo,
        "outputs": sorted(p.name for p in outputs),
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    with open(outdir / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _detect_job(payload):
    graph, seed, target = payload
    result = detect(graph, seed=seed)
    if target is not None:
        return pick_level(result, target)
    return result.best_level()


def cmd_detect(args) -> None:
    seed = _resolve_seed(args.seed)
    series = load_snapshots(args.input)
    jobs = [
        (series.snapshot(t), seed + t, args.target_count)
        for t in range(1, len(series) + 1)
    ]
    if args.threads > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.threads) as pool:
            levels = list(pool.map(_detect_job, jobs))
    else:
        levels = [_detect_job(job) for job in jobs]
    partitions = [Partition(t, level) for t, level in enumerate(levels, 1)]
    out = _outdir(args)
    parts_path = out / "parts.tsv"
    save_partitions(partitions, series, parts_path)
    _write_manifest(out, "detect", args, [parts_path])
    log.info("detected communities for %d snapshots -> %s", len(series), parts_path)


def cmd_track(args) -> None:
    seed = _resolve_seed(args.seed)
    series = load_snapshots(args.input)
    partitions = load_partitions(args.parts, series)
    net = simnet.build(partitions, metric=args.metric)
    dyncomms = tracker.track(net, seed=seed)
    event_log = events.reconstruct_all(dyncomms)
    out = _outdir(args)
    outputs = [out / "dyncomm.tsv", out / "dyncomm.json", out / "events.jsonl"]
    tracker.save_dynamic_tsv(dyncomms, outputs[0])
    tracker.save_dynamic_json(dyncomms, outputs[1], series)
    events.save_events_jsonl(event_log, outputs[2])
    if args.dump_simnet:
        dump = out / "simnet_edges.tsv"
        simnet.save_similarity_edges(net, dump)
        outputs.append(dump)
    _write_manifest(out, "track", args, outputs)
    log.info(
        "tracked %d static communities into %d dynamic communities",
        len(net.refs),
        len(dyncomms),
    )


def cmd_baseline(args) -> None:
    seed = _resolve_seed(args.seed)
    series = load_snapshots(args.input)
    partitions = load_partitions(args.parts, series)
    cfg = baselines.BaselineConfig(
        method=args.method, k=args.k, j=args.j, v=args.v, d=args.d
    )
    run = baselines.get_tracker(args.method, cfg=cfg, series=series, seed=seed)
    dyncomms = run(partitions)
    out = _outdir(args)
    path = out / "dyncomm.tsv"
    tracker.save_dynamic_tsv(dyncomms, path)
    _write_manifest(out, "baseline", args, [path])
    log.info("%s produced %d dynamic communities", args.method, len(dyncomms))


def cmd_bench(args) -> None:
    seed = _resolve_seed(args.seed)
    cfg = benchgen.BenchConfig(
        nodes=args.nodes,
        snapshots=args.snapshots,
        mu=args.mu,
        churn=args.churn,
        regime=args.regime,
        event_count=args.event_count,
        seed=seed,
        avg_degree=args.avg_degree,
        max_degree=args.max_degree,
        min_community=args.min_community,
        max_community=args.max_community,
    )
    series, truth = benchgen.generate(cfg)
    out = _outdir(args)
    paths = benchgen.save_dataset(series, truth, out)
    _write_manifest(out, "bench", args, list(paths.values()))
    log.info(
        "generated %s: %d snapshots, %d dynamic communities",
        args.regime,
        len(series),
        truth.total_dyncomms(),
    )


def cmd_eval(args) -> None:
    seed = _resolve_seed(args.seed)
    series, truth = benchgen.load_dataset(args.bench_dir)
    cfg = baselines.BaselineConfig(
        method=args.method if args.method != "modularity" else "greene",
        k=args.k, j=args.j, v=args.v, d=args.d,
    )
    run = baselines.get_tracker(
        args.method, cfg=cfg, series=series, metric=args.metric, seed=seed
    )
    report = evaluation.run_protocol(series, truth, tracker=run, detector_seed=seed)
    stage_times = evaluation.time_stages(truth.partitions, metric=args.metric, seed=seed)
    report.timings.update(
        {
            "similarity_build_s": stage_times["similarity_build_s"],
            "tracking_s": stage_times["tracking_s"],
        }
    )
    report.meta["method"] = args.method
    out = _outdir(args)
    paths = report.save(out)
    _write_manifest(out, "eval", args, list(paths.values()))
    log.info("evaluation NMI per prefix: %s", [f"{v:.3f}" for v in report.prefix_nmi])


def cmd_social(args) -> None:
    seed = _resolve_seed(args.seed)
    tweets = social.parse_tweets(args.input)
    series = social.build_cohashtag_series(tweets)
    out = _outdir(args)
    outputs = [out / "snapshots.tsv"]
    save_snapshots(series, outputs[0])
    if args.parts:
        partitions = load_partitions(args.parts, series)
    else:
        partitions = [
            Partition(t, pick_level(detect(series.snapshot(t), seed=seed + t), args.target_count)
                      if args.target_count else detect(series.snapshot(t), seed=seed + t).best_level())
            for t in range(1, len(series) + 1)
        ]
        parts_path = out / "parts.tsv"
        save_partitions(partitions, series, parts_path)
        outputs.append(parts_path)
    dyncomms = tracker.track_partitions(partitions, metric=args.metric, seed=seed)
    profiles = social.build_profiles(tweets, series, partitions)
    rows = social.community_summary(dyncomms, profiles)
    outputs.extend([out / "dyncomm.tsv", out / "summary.csv", out / "top_hashtags.csv"])
    tracker.save_dynamic_tsv(dyncomms, outputs[-3])
    social.save_summary_csv(rows, outputs[-2])
    social.save_top_hashtags_csv(profiles, outputs[-1])
    _write_manifest(out, "social", args, outputs)
    log.info("social pipeline: %d days, %d dynamic communities", len(series), len(dyncomms))


def _parse_window(value: str) -> float:
    if value in ("inf", "Inf", "INF"):
        return math.inf
    return float(value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commtrack",
        description="Track dynamic network communities without similarity thresholds.",
    )
    parser.add_argument("--version", action="version", version=f"commtrack {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--out-dir", required=True, help="output directory")
        p.add_argument("--seed", default=str(DEFAULT_SEED),
                       help="integer seed, or 'random' (default: %(default)s)")

    p = sub.add_parser("detect", help="run Louvain on every snapshot")
    p.add_argument("--in", dest="input", required=True, help="snapshot edge list (TSV)")
    p.add_argument("--target-count", type=int, default=None,
                   help="pick the hierarchy level nearest this community count")
    p.add_argument("--threads", type=int, default=1, help="worker processes")
    common(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("track", help="similarity network -> dynamic communities -> events")
    p.add_argument("--in", dest="input", required=True, help="snapshot edge list (TSV)")
    p.add_argument("--parts", required=True, help="membership file (TSV)")
    p.add_argument("--metric", choices=sorted(simnet.METRICS), default="overlap")
    p.add_argument("--dump-simnet", action="store_true",
                   help="also write the similarity network edge list")
    common(p)
    p.set_defaults(func=cmd_track)

    p = sub.add_parser("baseline", help="run a threshold-based tracker")
    p.add_argument("--in", dest="input", required=True, help="snapshot edge list (TSV)")
    p.add_argument("--parts", required=True, help="membership file (TSV)")
    p.add_argument("--method", choices=baselines.METHODS, required=True)
    p.add_argument("--k", type=float, default=0.1)
    p.add_argument("--j", type=float, default=0.1)
    p.add_argument("--v", type=float, default=0.5)
    p.add_argument("--d", type=_parse_window, default=math.inf,
                   help="dissolution window in snapshots, or 'inf'")
    common(p)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("bench", help="generate a synthetic benchmark dataset")
    p.add_argument("--regime", choices=benchgen.REGIMES, required=True)
    p.add_argument("--nodes", type=int, default=1000)
    p.add_argument("--snapshots", type=int, default=5)
    p.add_argument("--mu", type=float, default=0.2)
    p.add_argument("--churn", type=float, default=0.2)
    p.add_argument("--event-count", type=int, default=4)
    p.add_argument("--avg-degree", type=float, default=20.0)
    p.add_argument("--max-degree", type=int, default=40)
    p.add_argument("--min-community", type=int, default=24)
    p.add_argument("--max-community", type=int, default=72)
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("eval", help="dual-scenario protocol on a bench dataset")
    p.add_argument("--bench-dir", required=True, help="directory written by 'bench'")
    p.add_argument("--method", choices=("modularity",) + baselines.METHODS,
                   default="modularity")
    p.add_argument("--metric", choices=sorted(simnet.METRICS), default="overlap")
    p.add_argument("--k", type=float, default=0.1)
    p.add_argument("--j", type=float, default=0.1)
    p.add_argument("--v", type=float, default=0.5)
    p.add_argument("--d", type=_parse_window, default=math.inf)
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("social", help="co-hashtag pipeline from tweet records")
    p.add_argument("--in", dest="input", required=True, help="tweet TSV")
    p.add_argument("--parts", default=None,
                   help="imported membership file; omit to detect with Louvain")
    p.add_argument("--metric", choices=sorted(simnet.METRICS), default="overlap")
    p.add_argument("--target-count", type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_social)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("COMMTRACK_LOG", "warning").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except Exception as exc:  # noqa: BLE001 - single exit funnel, stage-tagged
        print(f"commtrack {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
