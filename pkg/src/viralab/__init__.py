"""viralab: virality metrics, ROC evaluation and early viral-post detection.

The package is organized around a small pipeline:

* :mod:`viralab.corpus`   — tweet/author ingestion, timeline statistics,
  detection-pool filtering and balanced splits.
* :mod:`viralab.synth`    — synthetic corpora with a planted virality rule.
* :mod:`viralab.metrics`  — the seven virality score functions.
* :mod:`viralab.evaluate` — ROC curves under two false-positive universes,
  AUC / truncated AUC, leniency counts and the metric report.
* :mod:`viralab.features` — content features, sentiment providers and
  significance tests.
* :mod:`viralab.classify` — the linear detection head over embeddings plus
  content features.
* :mod:`viralab.cli`      — the ``viralab`` command.

Hot numeric loops run through numba-jitted kernels when numba is available;
set ``VIRALAB_NUMBA=0`` to force the pure-NumPy fallback (see
``viralab._kernels.BACKEND`` for the active path).
"""

from ._kernels import BACKEND
from .corpus import (
    AuthorProfile,
    AuthorTable,
    DatasetSplit,
    TimelineStats,
    TweetRecord,
    TweetTable,
    attach_timeline_stats,
    balance_split,
    filter_detection_pool,
    load_authors,
    load_tweets,
)
from .errors import (
    AuthorResolutionError,
    CapacityError,
    ConfigError,
    DivergenceError,
    ParseError,
    ValidationError,
    ViralabError,
)
from .evaluate import (
    FprMode,
    MetricReport,
    RocCurve,
    auc,
    auc2,
    count_viral_at_tpr,
    evaluate_metrics,
    roc_curve,
)
from .features import (
    FeatureVector,
    SentimentResult,
    extract,
    feature_table,
    parse_entities,
    stub_sentiment,
    two_prop_z,
    welch_t,
)
from .classify import (
    ClassReport,
    DesignRow,
    LinearModel,
    assemble,
    eval_classifier,
    predict_prob,
    train_logreg,
)
from .metrics import (
    MetricConfig,
    MetricKind,
    influence_score,
    log_rt_over_followers,
    percentile_rank,
    score,
    score_table,
)
from .synth import SynthConfig, generate

__version__ = "0.1.0"
