"""Command-line entry point: train, sweep, gradcheck, bench, hist, experiments.

Every command writes its data files regardless of whether its own
assertions pass; the exit code alone carries the verdict. Outputs land in
the configured directory, each accompanied by config.resolved.txt (the
fully resolved key=value configuration including the seed) so any result
can be reproduced from its own artifacts. Figures are CSV plus a minimal
gnuplot script; nothing renders inline.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import activations, bench, diagnostics, experiments, gradcheck, nn, sweep
from .config import ExperimentConfig, load_config, make_dataset
from .errors import ConfigError, HeluError
from .ioutil import atomic_write_bytes, atomic_write_text

TRACE_GP = """set datafile separator ','
set key autotitle columnhead outside
set xlabel 'epoch'
plot 'trace.csv' using 1:2 with lines, \\
     '' using 1:3 with lines, \\
     '' using 1:4 with lines, \\
     '' using 1:5 with lines, \\
     '' using 1:6 with lines
"""

HIST_GP = """set datafile separator ','
set style fill solid 0.6
set xlabel 'pre-activation'
set ylabel 'count'
plot 'hist.csv' using (($1+$2)/2):3 with boxes notitle
"""


def _add_common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--activation", help="relu | helu:<a> | elu[:<a>] | sigmoid | swish | gelu | gelu-tanh")
    p.add_argument("--alpha", type=float, help="override the activation's alpha")
    p.add_argument("--seeds", type=int, default=5, help="number of seeds (sweep/experiments)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers for sweep cells")
    p.add_argument("--out", help="output directory")
    p.add_argument("--float32", action="store_true", help="32-bit float mode (bench)")


def _resolve(args) -> ExperimentConfig:
    overrides = {}
    if args.activation:
        overrides["activation"] = args.activation
    if args.out:
        overrides["output_dir"] = args.out
    cfg = load_config(args.config, overrides)
    if args.alpha is not None:
        spec = cfg.activation_spec()
        if spec.kind not in (activations.Kind.HELU, activations.Kind.ELU):
            raise ConfigError(f"--alpha does not apply to activation {cfg.activation!r}")
        cfg.activation = f"{spec.kind.value}:{args.alpha:g}"
        cfg.activation_spec()  # validate
    return cfg


def _outdir(cfg: ExperimentConfig) -> str:
    os.makedirs(cfg.output_dir, exist_ok=True)
    return cfg.output_dir


def _write_provenance(cfg: ExperimentConfig, outdir: str) -> None:
    atomic_write_text(os.path.join(outdir, "config.resolved.txt"), cfg.resolved_text())


def cmd_train(args) -> int:
    cfg = _resolve(args)
    outdir = _outdir(cfg)
    train_ds, test_ds = make_dataset(cfg)
    spec = cfg.activation_spec()
    shape = [train_ds.features.shape[1], *cfg.model_hidden, train_ds.n_classes]
    model = nn.init(shape, cfg.train.seed, spec)
    trace = nn.train(model, train_ds, cfg.train, eval_dataset=test_ds)

    lines = [",".join(nn.TrainingTrace.FIELDS)]
    for r in trace.rows:
        lines.append(
            f"{r.epoch},{r.loss:.17g},{r.train_acc:.17g},{r.test_acc:.17g},"
            f"{r.dead_fraction:.17g},{r.band_fraction:.17g}"
        )
    _write_provenance(cfg, outdir)
    atomic_write_text(os.path.join(outdir, "trace.csv"), "\n".join(lines) + "\n")
    atomic_write_text(os.path.join(outdir, "trace.gp"), TRACE_GP)
    last = trace.rows[-1]
    metrics = {
        "seed": cfg.train.seed,
        "config": {k: v for k, v in (l.split("=", 1) for l in cfg.resolved_text().splitlines())},
        "final": {
            "epoch": last.epoch,
            "loss": last.loss,
            "train_acc": last.train_acc,
            "test_acc": last.test_acc,
            "dead_fraction": last.dead_fraction,
            "band_fraction": last.band_fraction,
        },
    }
    atomic_write_text(
        os.path.join(outdir, "metrics.json"), json.dumps(metrics, sort_keys=True, indent=2) + "\n"
    )
    atomic_write_bytes(os.path.join(outdir, "model.ckpt"), nn.checkpoint_bytes(model))
    print(
        f"train {spec.label()}: loss {last.loss:.4f} train_acc {last.train_acc:.4f} "
        f"test_acc {last.test_acc:.4f} dead {last.dead_fraction:.4f} -> {outdir}"
    )
    return 0


def cmd_sweep(args) -> int:
    cfg = _resolve(args)
    outdir = _outdir(cfg)
    grid = cfg.sweep if cfg.sweep else [cfg.activation]
    results = sweep.run_sweep(cfg, n_seeds=args.seeds, jobs=args.jobs)
    _write_provenance(cfg, outdir)
    atomic_write_text(
        os.path.join(outdir, "runs.csv"),
        "\n".join([sweep.RUNS_HEADER] + [r.csv_row() for r in results]) + "\n",
    )
    atomic_write_text(
        os.path.join(outdir, "summary.csv"),
        "\n".join([sweep.SUMMARY_HEADER] + sweep.summarize(results, grid)) + "\n",
    )
    print(f"sweep: {len(grid)} cells x {args.seeds} seeds -> {outdir}")
    return 0


def cmd_gradcheck(args) -> int:
    cfg = _resolve(args)
    outdir = _outdir(cfg)
    spec = cfg.activation_spec()
    n_band = max(50, args.points // 10) if spec.kind is activations.Kind.HELU else 0
    report = gradcheck.check_activation(
        spec, n_points=args.points, seed=args.seed, n_band_points=n_band
    )
    rows = ["z,fd,analytic,status"]
    for p in report.points:
        rows.append(f"{p.z:.17g},{p.fd:.17g},{p.analytic:.17g},{p.status}")
        if p.status in (gradcheck.EXPECTED_MISMATCH, gradcheck.MISMATCH):
            print(f"{p.status} z={p.z:.6g} fd={p.fd:.6g} backward={p.analytic:.6g}")
    _write_provenance(cfg, outdir)
    atomic_write_text(os.path.join(outdir, "gradcheck.csv"), "\n".join(rows) + "\n")
    print(
        f"gradcheck {spec.label()}: {len(report.points)} points, "
        f"{report.count(gradcheck.OK)} ok, "
        f"{report.count(gradcheck.EXPECTED_MISMATCH)} expected-mismatch, "
        f"{report.count(gradcheck.MISMATCH)} mismatch, "
        f"{report.count(gradcheck.SKIPPED)} skipped"
    )
    return 0 if report.passed else 1


DEFAULT_KERNELS = "relu,helu:0.05,elu,sigmoid,swish,gelu,gelu-tanh"


def cmd_bench(args) -> int:
    cfg = _resolve(args)
    outdir = _outdir(cfg)
    width = 32 if args.float32 else 64
    labels = [k.strip() for k in args.kernels.split(",") if k.strip()]
    records = [
        bench.bench_forward(activations.parse_activation(label), args.n, args.reps, width)
        for label in labels
    ]
    if args.train_step:
        shape = [int(w) for w in args.train_step.split(",")]
        records.append(bench.bench_train_step(cfg.activation_spec(), shape, args.batch, args.reps))
    _write_provenance(cfg, outdir)
    bench.write_csv(records, os.path.join(outdir, "bench.csv"))
    bench.write_jsonl(records, os.path.join(outdir, "bench.jsonl"))
    for r in records:
        print(
            f"{r.kernel:14s} n={r.n_elements} reps={r.reps} median {r.median_ns:.3f} ns/el "
            f"({r.throughput_gelem_per_s:.2f} Gel/s, f{r.float_width})"
        )
    # Ratio gates are separate from data emission: results are on disk by now.
    ok = True
    by_label = {r.kernel: r for r in records}
    relu_rec = by_label.get("relu")
    helu_recs = [r for k, r in by_label.items() if k.startswith("helu")]
    if relu_rec and helu_recs:
        ratio = helu_recs[0].median_ns / relu_rec.median_ns
        gate = abs(ratio - 1.0) <= 0.05
        ok &= gate
        print(f"GATE {'ok' if gate else 'FAIL'}: helu/relu median ratio {ratio:.4f} (want within 5%)")
    if relu_rec and "gelu-tanh" in by_label:
        gate = by_label["gelu-tanh"].median_ns > relu_rec.median_ns
        ok &= gate
        print(
            f"GATE {'ok' if gate else 'FAIL'}: gelu-tanh {by_label['gelu-tanh'].median_ns:.3f} ns/el "
            f"> relu {relu_rec.median_ns:.3f} ns/el"
        )
    return 0 if ok else 1


def cmd_hist(args) -> int:
    cfg = _resolve(args)
    outdir = _outdir(cfg)
    spec = cfg.activation_spec()
    model = nn.load_checkpoint(args.checkpoint, spec)
    train_ds, test_ds = make_dataset(cfg)
    feats = np.concatenate([train_ds.features, test_ds.features])
    _, pre_acts = nn.model_forward(model, feats)
    z = np.concatenate([p.ravel() for p in pre_acts])
    alpha = args.alpha if args.alpha is not None else nn.hysteresis_alpha(spec)
    hist = diagnostics.histogram(z, n_bins=args.bins, alpha=alpha)
    live, band, dead = diagnostics.grad_mask_occupancy(z, alpha)
    _write_provenance(cfg, outdir)
    rows = ["bin_left,bin_right,count"]
    rows += [f"{l:.17g},{r:.17g},{c}" for l, r, c in hist.csv_rows()]
    atomic_write_text(os.path.join(outdir, "hist.csv"), "\n".join(rows) + "\n")
    atomic_write_text(os.path.join(outdir, "hist.gp"), HIST_GP)
    atomic_write_text(
        os.path.join(outdir, "hist.json"),
        json.dumps(
            {
                "alpha": alpha,
                "occupancy": {"live": live, "band": band, "dead": dead},
                "histogram": json.loads(hist.to_json()),
            },
            sort_keys=True,
        )
        + "\n",
    )
    print(f"hist: {z.size} pre-activations, live {live:.4f} band {band:.4f} dead {dead:.4f}")
    return 0


def _timestamp_dir(base: str, name: str) -> str:
    stamp = time.strftime("%Y%m%d-%H%M%S")
    path = os.path.join(base, name, stamp)
    suffix = 0
    while os.path.exists(path):
        suffix += 1
        path = os.path.join(base, name, f"{stamp}-{suffix}")
    os.makedirs(path)
    return path


def cmd_experiments(args) -> int:
    cfg = _resolve(args)
    if args.experiment == "dying-relu":
        report = experiments.exp_dying_relu(seeds=args.seeds, base_seed=cfg.train.seed)
        required = ("protocol_valid_relu_dead_positive", "helu_dead_le_relu", "helu0_bitwise_equals_relu")
    else:
        alphas = (
            tuple(float(a) for a in args.alphas.split(","))
            if args.alphas
            else experiments.DEFAULT_ALPHAS
        )
        report = experiments.exp_alpha_sensitivity(
            alphas=alphas, seeds=args.seeds, base_seed=cfg.train.seed
        )
        required = ("non_inferior_to_relu",)
    report.protocol["base_seed"] = cfg.train.seed
    outdir = _timestamp_dir(cfg.output_dir, args.experiment)
    atomic_write_text(os.path.join(outdir, "report.json"), report.to_json() + "\n")
    atomic_write_text(os.path.join(outdir, "runs.csv"), report.runs_csv())
    atomic_write_text(os.path.join(outdir, "summary.csv"), report.summary_csv())
    for arm_d, arm_a in zip(report.dead_arms, report.acc_arms):
        print(
            f"{report.experiment} {arm_d.label:10s} dead {arm_d.mean:.4f} +- {arm_d.std:.4f} "
            f"acc {arm_a.mean:.4f} +- {arm_a.std:.4f} (n={report.n_seeds})"
        )
    for key, value in report.flags.items():
        print(f"flag {key} = {value}")
    print(f"-> {outdir}")
    return 0 if all(report.flags.get(k) for k in required) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="helu", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one model, write trace/metrics/checkpoint")
    _add_common_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("sweep", help="activation grid x seeds, write runs/summary CSV")
    _add_common_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gradcheck", help="finite-difference check of a backward rule")
    _add_common_flags(p)
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("bench", help="activation kernel microbenchmarks")
    _add_common_flags(p)
    p.add_argument("--kernels", default=DEFAULT_KERNELS)
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--train-step", help="also time a train step for this full shape, e.g. 2,32,32,3")
    p.add_argument("--batch", type=int, default=64)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("hist", help="pre-activation histogram from a checkpoint")
    _add_common_flags(p)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--bins", type=int, default=diagnostics.DEFAULT_BINS)
    p.set_defaults(func=cmd_hist)

    p = sub.add_parser("experiments", help="canned studies with pass/fail flags")
    p.add_argument("experiment", choices=["dying-relu", "alpha-sweep"])
    _add_common_flags(p)
    p.add_argument("--alphas", help="comma list for alpha-sweep, default 0,0.001,0.01,0.05,0.1,1,2")
    p.set_defaults(func=cmd_experiments)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (HeluError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
