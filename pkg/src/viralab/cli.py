"""Command-line front end.

Subcommands: gen, eval-metrics, feature-stats, prep-split, embed-stub,
train, eval-model, plot-roc.  All outputs are written atomically (temp file
+ rename) and every run prints one summary line per output file.  Exit
codes: 0 success, 1 runtime/data error, 2 usage error.

Log verbosity comes from the ``VIRALAB_LOG`` environment variable (debug,
info, warning, error); logs go to stderr, data to the declared files only.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile

import numpy as np

from . import classify, corpus, evaluate, features, metrics, synth
from .errors import ViralabError
from .svgplot import render_roc_svg

log = logging.getLogger("viralab")


def _setup_logging():
    level = os.environ.get("VIRALAB_LOG", "warning").upper()
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".viralab-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _wrote(path: str, desc: str) -> None:
    print(f"wrote {path} ({desc})")


def _parse_kv_config(path: str) -> dict:
    """key=value lines; blank lines and #-comments ignored."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                raise ViralabError(f"{path}:{lineno}: expected key=value")
            key, _, value = stripped.partition("=")
            out[key.strip()] = value.strip()
    return out


def _metric_kinds(spec_str: str | None):
    if not spec_str:
        return metrics.ALL_KINDS
    kinds = []
    for name in spec_str.split(","):
        name = name.strip()
        try:
            kinds.append(metrics.MetricKind(name))
        except ValueError:
            valid = ", ".join(k.value for k in metrics.ALL_KINDS)
            raise ViralabError(f"unknown metric {name!r}; choose from: {valid}")
    return kinds


def _provider(args):
    if getattr(args, "sentiment_file", None):
        return features.file_provider(args.sentiment_file)
    return features.stub_provider


def _load_corpus(args):
    tweets = corpus.load_tweets(args.tweets)
    authors = corpus.load_authors(args.authors)
    authors = corpus.attach_timeline_stats(tweets, authors)
    return tweets, authors


# ---------------------------------------------------------------------------
# subcommands


def cmd_gen(args) -> int:
    mapping = _parse_kv_config(args.config) if args.config else {}
    for item in args.set or []:
        if "=" not in item:
            raise ViralabError(f"--set expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        mapping[key.strip()] = value.strip()
    for flag in ("n_authors", "tweets_min", "tweets_max", "ratio_threshold",
                 "label_noise", "seed"):
        value = getattr(args, flag)
        if value is not None:
            mapping[flag] = str(value)
    config = synth.config_from_mapping(mapping)
    log.info("generating corpus: %d authors, seed %d", config.n_authors, config.seed)
    tweets, authors = synth.generate(config)
    _atomic_write(args.out_tweets, corpus.dump_tweets(tweets))
    _wrote(args.out_tweets, f"{len(tweets)} tweets")
    _atomic_write(args.out_authors, corpus.dump_authors(authors))
    _wrote(args.out_authors, f"{len(authors)} authors")
    return 0


def cmd_eval_metrics(args) -> int:
    tweets, authors = _load_corpus(args)
    kinds = _metric_kinds(args.metrics)
    cfg = metrics.MetricConfig(influence_a=args.influence_a)
    reports, curves = evaluate.evaluate_metrics(
        tweets,
        authors,
        kinds=kinds,
        cfg=cfg,
        auc2_cap=args.auc2_cap,
        tpr_target=args.tpr_target,
        auc_mode=evaluate.FprMode(args.auc_mode),
        auc2_mode=evaluate.FprMode(args.auc2_mode),
        collect_curves=True,
    )
    _atomic_write(args.out, evaluate.report_csv(reports))
    _wrote(args.out, f"{len(reports)} metric rows")
    if args.roc_dir:
        os.makedirs(args.roc_dir, exist_ok=True)
        for kind, per_mode in curves.items():
            for mode, curve in per_mode.items():
                path = os.path.join(args.roc_dir, f"{kind.value}_{mode.value}.csv")
                _atomic_write(path, evaluate.roc_points_csv(curve))
                _wrote(path, f"{len(curve)} roc points")
    return 0


def cmd_feature_stats(args) -> int:
    tweets = corpus.load_tweets(args.tweets)
    authors = corpus.load_authors(args.authors)
    stats = features.feature_table(tweets, authors, _provider(args))
    _atomic_write(args.out, features.feature_stats_csv(stats))
    _wrote(args.out, f"{len(stats)} feature rows")
    return 0


def cmd_prep_split(args) -> int:
    tweets = corpus.load_tweets(args.tweets)
    pool = corpus.filter_detection_pool(tweets)
    log.info("detection pool: %d of %d tweets", len(pool), len(tweets))
    split = corpus.balance_split(pool, seed=args.seed, test_frac=args.test_frac)
    _atomic_write(args.out, corpus.split_to_json(split) + "\n")
    _wrote(args.out, f"train {len(split.train)}, test {len(split.test)}")
    return 0


def cmd_embed_stub(args) -> int:
    tweets = corpus.load_tweets(args.tweets)
    vectors = (
        (t.id, classify.hashed_embedding(t.text, args.dim, args.seed))
        for t in tweets
    )
    _atomic_write(args.out, classify.dump_embeddings(vectors, args.dim))
    _wrote(args.out, f"{len(tweets)} embeddings of dim {args.dim}")
    return 0


def _rows_for_ids(args, ids):
    tweets = corpus.load_tweets(args.tweets)
    authors = corpus.load_authors(args.authors)
    table = corpus.subset(tweets, ids)
    embeddings = None
    dim = 0
    if args.embeddings:
        embeddings, dim = classify.load_embeddings(args.embeddings)
    rows = classify.design_rows(
        table, authors, embeddings, args.use_extra, _provider(args)
    )
    return rows, classify.FeatureConfig(embedding_dim=dim, use_extra=args.use_extra)


def cmd_train(args) -> int:
    if not args.embeddings and not args.use_extra:
        raise ViralabError("need --embeddings and/or --use-extra")
    split = corpus.load_split(args.split)
    rows, feature_config = _rows_for_ids(args, split.train)
    hyper = classify.TrainMeta(
        seed=args.seed, epochs=args.epochs, learning_rate=args.lr, l2=args.l2
    )
    model, losses = classify.train_logreg(rows, hyper, feature_config)
    log.info("final training loss: %.6f", losses[-1] if len(losses) else float("nan"))
    _atomic_write(args.out, classify.model_to_json(model) + "\n")
    _wrote(args.out, f"model dim {model.weights.shape[0]}")
    return 0


def cmd_eval_model(args) -> int:
    model = classify.load_model(args.model)
    split = corpus.load_split(args.split)
    args.use_extra = model.feature_config.use_extra
    rows, feature_config = _rows_for_ids(args, split.test)
    if feature_config.dim != model.feature_config.dim:
        raise ViralabError(
            f"model expects dim {model.feature_config.dim}, rows have "
            f"{feature_config.dim}"
        )
    probs = classify.predict_probs(model, rows)
    labels = np.array([row.y for row in rows], dtype=bool)
    report = classify.eval_classifier(probs, labels, threshold=args.threshold)
    tp, fp, fn, tn = report.confusion
    doc = json.dumps(
        {
            "accuracy": report.accuracy,
            "precision": report.precision,
            "recall": report.recall,
            "f1": report.f1,
            "confusion": {"tp": tp, "fp": fp, "fn": fn, "tn": tn},
        },
        indent=2,
    )
    _atomic_write(args.out, doc + "\n")
    _wrote(args.out, f"f1 {report.f1:.3f} on {len(rows)} test tweets")
    if args.csv:
        label = args.label or os.path.basename(args.model)
        csv = (
            "label,precision,recall,f1,accuracy\n"
            f"{label},{report.precision:.6f},{report.recall:.6f},"
            f"{report.f1:.6f},{report.accuracy:.6f}\n"
        )
        _atomic_write(args.csv, csv)
        _wrote(args.csv, "classifier report row")
    return 0


def cmd_plot_roc(args) -> int:
    tweets, authors = _load_corpus(args)
    kinds = _metric_kinds(args.metrics)
    cfg = metrics.MetricConfig(influence_a=args.influence_a)
    _, curves = evaluate.evaluate_metrics(
        tweets, authors, kinds=kinds, cfg=cfg, collect_curves=True
    )
    titles = {
        evaluate.FprMode.RESTRICTED: "restricted universe",
        evaluate.FprMode.ALL_NONVIRAL: "all non-viral",
    }
    panels: dict[str, dict[str, tuple]] = {t: {} for t in titles.values()}
    for kind, per_mode in curves.items():
        for mode, curve in per_mode.items():
            grid, tpr = evaluate.sample_curve(curve, n=args.grid_points)
            panels[titles[mode]][kind.value] = (grid, tpr)
    _atomic_write(args.out, render_roc_svg(panels))
    _wrote(args.out, f"roc plot, {len(kinds)} metrics x {len(panels)} panels")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="viralab",
        description="Virality metrics, ROC evaluation and early viral-post detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic corpus")
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE",
                   help="override one generator option (repeatable)")
    p.add_argument("--n-authors", dest="n_authors", type=int)
    p.add_argument("--tweets-min", dest="tweets_min", type=int)
    p.add_argument("--tweets-max", dest="tweets_max", type=int)
    p.add_argument("--ratio-threshold", dest="ratio_threshold", type=float)
    p.add_argument("--label-noise", dest="label_noise", type=float)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-tweets", required=True)
    p.add_argument("--out-authors", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval-metrics", help="score metrics and write the report CSV")
    p.add_argument("--tweets", required=True)
    p.add_argument("--authors", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--metrics", help="comma-separated metric names (default: all)")
    p.add_argument("--influence-a", dest="influence_a", type=float, default=10.0)
    p.add_argument("--auc2-cap", dest="auc2_cap", type=float, default=0.016)
    p.add_argument("--tpr-target", dest="tpr_target", type=float, default=0.95)
    p.add_argument("--auc-mode", dest="auc_mode", default="restricted",
                   choices=[m.value for m in evaluate.FprMode])
    p.add_argument("--auc2-mode", dest="auc2_mode", default="all_nonviral",
                   choices=[m.value for m in evaluate.FprMode])
    p.add_argument("--roc-dir", dest="roc_dir",
                   help="also write per-metric ROC point CSVs here")
    p.set_defaults(func=cmd_eval_metrics)

    p = sub.add_parser("feature-stats", help="write the feature significance CSV")
    p.add_argument("--tweets", required=True)
    p.add_argument("--authors", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--sentiment-file", dest="sentiment_file",
                   help="external sentiment file (default: built-in stub)")
    p.set_defaults(func=cmd_feature_stats)

    p = sub.add_parser("prep-split", help="filter the detection pool and split it")
    p.add_argument("--tweets", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--test-frac", dest="test_frac", type=float, default=0.2)
    p.set_defaults(func=cmd_prep_split)

    p = sub.add_parser("embed-stub", help="deterministic hashed pseudo-embeddings")
    p.add_argument("--tweets", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_embed_stub)

    p = sub.add_parser("train", help="train the linear detection head")
    p.add_argument("--tweets", required=True)
    p.add_argument("--authors", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--use-extra", dest="use_extra", action="store_true")
    p.add_argument("--sentiment-file", dest="sentiment_file")
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval-model", help="evaluate a trained model on the test split")
    p.add_argument("--model", required=True)
    p.add_argument("--tweets", required=True)
    p.add_argument("--authors", required=True)
    p.add_argument("--split", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--sentiment-file", dest="sentiment_file")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True)
    p.add_argument("--csv", help="also write a one-row report CSV")
    p.add_argument("--label", help="row label for the CSV (default: model file name)")
    p.set_defaults(func=cmd_eval_model)

    p = sub.add_parser("plot-roc", help="render the ROC comparison SVG")
    p.add_argument("--tweets", required=True)
    p.add_argument("--authors", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--metrics", help="comma-separated metric names (default: all)")
    p.add_argument("--influence-a", dest="influence_a", type=float, default=10.0)
    p.add_argument("--grid-points", dest="grid_points", type=int, default=101)
    p.set_defaults(func=cmd_plot_roc)

    return parser


def run(argv) -> int:
    """Dispatch one CLI invocation; returns the process exit code."""
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage/help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ViralabError, OSError) as exc:
        print(f"viralab: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
