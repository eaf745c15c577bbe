"""ROC-based evaluation of virality metrics.

A metric's scores are swept over every distinct threshold to build an exact
ROC curve.  Two false-positive universes are supported:

* ``ALL_NONVIRAL`` — the FPR denominator is every non-viral tweet.
* ``RESTRICTED``   — the universe shrinks to the smallest set the metric
  classifies viral at 100% TPR (all tweets scoring at least the lowest
  viral score); its non-viral members form the FPR denominator.

The summary statistics are the trapezoidal AUC, the low-FPR area ``auc2``
(curve truncated at an FPR cap, FPR axis rescaled to [0, 1]), and leniency
counts at a target TPR.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .corpus import AuthorTable, TweetTable
from .errors import ValidationError
from .metrics import (
    ALL_KINDS,
    DataTier,
    MetricConfig,
    MetricKind,
    TableArrays,
    score_table,
)


class FprMode(str, Enum):
    RESTRICTED = "restricted"
    ALL_NONVIRAL = "all_nonviral"


@dataclass(frozen=True)
class RocCurve:
    """Exact ROC curve: points ordered by descending threshold.

    The first vertex is the empty classification (threshold inf, tpr = fpr
    = 0) and the last always reaches tpr = 1.  Ties in score produce a
    single simultaneous step, which makes the trapezoidal area equal to the
    pairwise concordance probability with ties counted half.
    """

    thresholds: np.ndarray
    tpr: np.ndarray
    fpr: np.ndarray

    def __len__(self) -> int:
        return len(self.thresholds)

    def points(self):
        return list(zip(self.thresholds, self.tpr, self.fpr))


def _as_score_arrays(scores, labels):
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=bool)
    if s.shape != y.shape or s.ndim != 1:
        raise ValidationError("scores and labels must be 1-D arrays of equal length")
    return s, y


def roc_curve(scores, labels, mode: FprMode = FprMode.ALL_NONVIRAL) -> RocCurve:
    """Exact ROC over all distinct score thresholds.

    Needs at least one viral and one non-viral entry.  In RESTRICTED mode
    the sweep runs over the restricted universe only; when that universe
    contains no non-viral tweet (perfect separation) the curve closes with
    a terminal (fpr=1, tpr=1) corner so the area is still meaningful.
    """
    s, y = _as_score_arrays(scores, labels)
    n_viral = int(y.sum())
    if n_viral == 0 or n_viral == len(y):
        raise ValidationError("roc_curve needs both a viral and a non-viral entry")

    if mode is FprMode.RESTRICTED:
        keep = s >= s[y].min()
        s, y = s[keep], y[keep]

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]

    # last index of each tie group
    bounds = np.flatnonzero(np.r_[s_sorted[1:] != s_sorted[:-1], True])
    cum_tp = np.cumsum(y_sorted)
    cum_fp = np.cumsum(~y_sorted)

    n_nonviral = int(cum_fp[-1])
    tpr = cum_tp[bounds] / n_viral
    if n_nonviral > 0:
        fpr = cum_fp[bounds] / n_nonviral
    else:
        fpr = np.zeros(len(bounds), dtype=np.float64)
    thresholds = s_sorted[bounds]

    thresholds = np.r_[np.inf, thresholds]
    tpr = np.r_[0.0, tpr]
    fpr = np.r_[0.0, fpr]

    if fpr[-1] < 1.0:
        thresholds = np.r_[thresholds, -np.inf]
        tpr = np.r_[tpr, 1.0]
        fpr = np.r_[fpr, 1.0]

    return RocCurve(thresholds=thresholds, tpr=tpr, fpr=fpr)


def _trapezoid(x, y) -> float:
    return float(0.5 * np.sum((x[1:] - x[:-1]) * (y[1:] + y[:-1])))


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under the (fpr, tpr) curve."""
    return _trapezoid(curve.fpr, curve.tpr)


def auc2(curve: RocCurve, fpr_cap: float = 0.016) -> float:
    """Area under the curve truncated at `fpr_cap`, FPR rescaled to [0, 1].

    The TPR at the cap is linearly interpolated.  With fpr_cap = 1 this
    reduces exactly to `auc`.
    """
    if not 0.0 < fpr_cap <= 1.0:
        raise ValidationError(f"fpr_cap must be in (0, 1], got {fpr_cap}")
    fpr, tpr = curve.fpr, curve.tpr
    if fpr[-1] > fpr_cap:
        j = int(np.argmax(fpr > fpr_cap))
        i = j - 1
        t_cap = tpr[i] + (tpr[j] - tpr[i]) * (fpr_cap - fpr[i]) / (fpr[j] - fpr[i])
        fpr = np.r_[fpr[:j], fpr_cap]
        tpr = np.r_[tpr[:j], t_cap]
    return _trapezoid(fpr / fpr_cap, tpr)


def count_viral_at_tpr(scores, labels, target_tpr: float = 0.95) -> tuple[int, int]:
    """Classified-viral and false-positive counts at a target TPR.

    Picks the largest threshold whose TPR reaches `target_tpr` and returns
    (number of tweets scoring at or above it, non-viral tweets among them).
    """
    if not 0.0 < target_tpr <= 1.0:
        raise ValidationError(f"target_tpr must be in (0, 1], got {target_tpr}")
    s, y = _as_score_arrays(scores, labels)
    n_viral = int(y.sum())
    if n_viral == 0:
        raise ValidationError("count_viral_at_tpr needs at least one viral entry")

    order = np.argsort(-s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]
    bounds = np.flatnonzero(np.r_[s_sorted[1:] != s_sorted[:-1], True])
    cum_tp = np.cumsum(y_sorted)

    tpr = cum_tp[bounds] / n_viral
    g = int(np.argmax(tpr >= target_tpr))
    n_classified = int(bounds[g]) + 1
    n_fp = n_classified - int(cum_tp[bounds[g]])
    return n_classified, n_fp


@dataclass(frozen=True)
class MetricReport:
    kind: MetricKind
    data_required: DataTier
    auc: float
    auc2: float
    n_viral_at_tpr95: int
    n_fp_at_tpr95: int


def evaluate_metrics(
    tweets: TweetTable,
    authors: AuthorTable,
    kinds=ALL_KINDS,
    cfg: MetricConfig | None = None,
    auc2_cap: float = 0.016,
    tpr_target: float = 0.95,
    auc_mode: FprMode = FprMode.RESTRICTED,
    auc2_mode: FprMode = FprMode.ALL_NONVIRAL,
    collect_curves: bool = False,
):
    """One MetricReport per kind, in input order.

    `auc` is computed under `auc_mode` (default: the restricted universe)
    and `auc2` under `auc2_mode` (default: all non-viral tweets, cap 0.016),
    plus the leniency counts at `tpr_target`.  With collect_curves=True a
    second return value maps each kind to its per-mode curves.
    """
    cfg = cfg or MetricConfig()
    arrays = TableArrays(tweets, authors)
    labels = arrays.labels
    reports = []
    curves: dict[MetricKind, dict[FprMode, RocCurve]] = {}
    for kind in kinds:
        kind = MetricKind(kind)
        scores = score_table(kind, tweets, authors, cfg, arrays=arrays)
        per_mode = {
            mode: roc_curve(scores, labels, mode)
            for mode in {auc_mode, auc2_mode}
        }
        n_class, n_fp = count_viral_at_tpr(scores, labels, tpr_target)
        reports.append(
            MetricReport(
                kind=kind,
                data_required=kind.tier,
                auc=auc(per_mode[auc_mode]),
                auc2=auc2(per_mode[auc2_mode], auc2_cap),
                n_viral_at_tpr95=n_class,
                n_fp_at_tpr95=n_fp,
            )
        )
        if collect_curves:
            curves[kind] = per_mode
    if collect_curves:
        return reports, curves
    return reports


def sample_curve(curve: RocCurve, n: int = 101) -> tuple[np.ndarray, np.ndarray]:
    """(fpr, tpr) resampled on an even FPR grid (plot/export parity).

    Vertical curve segments collapse to their upper vertex before linear
    interpolation.
    """
    if n < 2:
        raise ValidationError("sample_curve needs n >= 2")
    # keep the max tpr per distinct fpr (upper envelope of vertical jumps)
    fpr, tpr = curve.fpr, curve.tpr
    keep = np.r_[fpr[1:] != fpr[:-1], True]
    grid = np.linspace(0.0, 1.0, n)
    return grid, np.interp(grid, fpr[keep], tpr[keep])


def report_csv(reports) -> str:
    lines = ["metric,data_required,auc,auc2,n_viral_at_tpr95,n_fp_at_tpr95"]
    for rep in reports:
        lines.append(
            f"{rep.kind.value},{rep.data_required.value},"
            f"{rep.auc:.6f},{rep.auc2:.6f},"
            f"{rep.n_viral_at_tpr95},{rep.n_fp_at_tpr95}"
        )
    return "\n".join(lines) + "\n"


def roc_points_csv(curve: RocCurve) -> str:
    lines = ["threshold,fpr,tpr"]
    for thr, tpr_v, fpr_v in zip(curve.thresholds, curve.tpr, curve.fpr):
        lines.append(f"{float(thr)!r},{float(fpr_v)!r},{float(tpr_v)!r}")
    return "\n".join(lines) + "\n"
