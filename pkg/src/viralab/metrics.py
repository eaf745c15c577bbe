"""The seven virality score functions, scalar and table-vectorized.

Each metric maps (tweet, author) to a real score; a tweet is classified
viral when its score clears a threshold, and the threshold sweep lives in
the evaluation module.  Metrics differ in how much data they need: the raw
retweet count only, the author's timeline statistics, or the author's
profile counts.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .corpus import AuthorProfile, AuthorTable, TweetRecord, TweetTable
from .errors import ConfigError, ValidationError


class DataTier(str, Enum):
    TWEET_ONLY = "tweet_only"
    TIMELINE = "timeline"
    PROFILE = "profile"


class MetricKind(str, Enum):
    """Closed enumeration of the supported virality metrics.

    The string values are stable identifiers used by the CLI and report
    CSVs.
    """

    RT_THRESHOLD = "rt_threshold"
    RT_OVER_MEDIAN = "rt_over_median"
    RT_OVER_AVG = "rt_over_avg"
    RT_PERCENTILE = "rt_percentile"
    RT_OVER_FOLLOWERS = "rt_over_followers"
    LOG_RT_OVER_FOLLOWERS = "log_rt_over_followers"
    INFLUENCE_SCORE = "influence_score"

    @property
    def tier(self) -> DataTier:
        return _TIERS[self]


_TIERS = {
    MetricKind.RT_THRESHOLD: DataTier.TWEET_ONLY,
    MetricKind.RT_OVER_MEDIAN: DataTier.TIMELINE,
    MetricKind.RT_OVER_AVG: DataTier.TIMELINE,
    MetricKind.RT_PERCENTILE: DataTier.TIMELINE,
    MetricKind.RT_OVER_FOLLOWERS: DataTier.PROFILE,
    MetricKind.LOG_RT_OVER_FOLLOWERS: DataTier.PROFILE,
    MetricKind.INFLUENCE_SCORE: DataTier.PROFILE,
}

ALL_KINDS = tuple(MetricKind)

# Floor applied to an author's average retweet count before dividing, so
# all-zero timelines stay finite.
AVG_RT_EPS = 1e-9


@dataclass(frozen=True)
class MetricConfig:
    """Shared metric constants.

    influence_a is the constant weighting retweets against favorites in the
    influence score; log_zero_sentinel stands in for ln(0) so zero-retweet
    tweets rank below every real score; zero-follower profiles are treated
    as having `zero_follower_substitute` followers to keep ratios defined.
    """

    influence_a: float = 10.0
    log_zero_sentinel: float = -1e18
    zero_follower_substitute: int = 1

    def validate(self) -> None:
        if self.influence_a <= 0:
            raise ConfigError("influence_a must be > 0")


def percentile_rank(x: int, sorted_rts) -> float:
    """Fraction of `sorted_rts` strictly below x (ascending input)."""
    n = len(sorted_rts)
    if n == 0:
        raise ValidationError("percentile_rank needs a non-empty list")
    return bisect_left(sorted_rts, x) / n


def log_rt_over_followers(r: int, w: int, cfg: MetricConfig | None = None) -> float:
    """ln(r / max(w, 1)), or the configured sentinel when r = 0."""
    cfg = cfg or MetricConfig()
    if r <= 0:
        return cfg.log_zero_sentinel
    return math.log(r / max(w, cfg.zero_follower_substitute))


def influence_score(r: int, f: int, w: int, d: int, a: float = 10.0) -> float:
    """Engagement-ratio influence score over retweets r, favorites f,
    followers w and followings d.

    With g = r + f and h = w - d the score is (g*d*(a*r+f)) / (w*r*(a*d+h)).
    Inputs where the expression is undefined (r = 0, w = 0, or a*d + h <= 0)
    score 0, which ranks them non-viral.
    """
    den_factor = a * d + (w - d)
    if r <= 0 or w <= 0 or den_factor <= 0:
        return 0.0
    g = r + f
    return (g * d * (a * r + f)) / (w * r * den_factor)


def _require_timeline(author: AuthorProfile, kind: MetricKind):
    stats = author.timeline_stats
    if stats is None:
        raise ConfigError(
            f"metric {kind.value} needs timeline stats; author {author.id!r} has none"
        )
    return stats


def score(
    kind: MetricKind,
    tweet: TweetRecord,
    author: AuthorProfile,
    cfg: MetricConfig | None = None,
) -> float:
    """Raw score of one tweet under one metric (higher = more viral)."""
    cfg = cfg or MetricConfig()
    r = tweet.retweet_count
    if kind is MetricKind.RT_THRESHOLD:
        return float(r)
    if kind is MetricKind.RT_OVER_MEDIAN:
        return r / _require_timeline(author, kind).median_nonzero_rt
    if kind is MetricKind.RT_OVER_AVG:
        return r / max(_require_timeline(author, kind).avg_rt, AVG_RT_EPS)
    if kind is MetricKind.RT_PERCENTILE:
        return percentile_rank(r, _require_timeline(author, kind).sorted_rts)
    if kind is MetricKind.RT_OVER_FOLLOWERS:
        return r / max(author.followers_count, cfg.zero_follower_substitute)
    if kind is MetricKind.LOG_RT_OVER_FOLLOWERS:
        return log_rt_over_followers(r, author.followers_count, cfg)
    if kind is MetricKind.INFLUENCE_SCORE:
        return influence_score(
            r,
            tweet.favorite_count,
            author.followers_count,
            author.followings_count,
            cfg.influence_a,
        )
    raise ConfigError(f"unknown metric kind: {kind!r}")


class TableArrays:
    """Column-array view of a tweet table joined to its author table.

    Built once and shared across metric evaluations; timeline columns are
    assembled lazily because only timeline-tier metrics need them.
    """

    def __init__(self, tweets: TweetTable, authors: AuthorTable):
        self._tweets = tweets
        self._authors = authors
        author_ids = [a.id for a in authors]
        self._author_pos = {aid: i for i, aid in enumerate(author_ids)}
        try:
            self.author_idx = np.array(
                [self._author_pos[t.author_id] for t in tweets], dtype=np.int64
            )
        except KeyError as exc:
            raise ConfigError(f"tweet references unknown author {exc.args[0]!r}")
        self.r = np.array([t.retweet_count for t in tweets], dtype=np.float64)
        self.f = np.array([t.favorite_count for t in tweets], dtype=np.float64)
        self.labels = np.array([t.is_viral for t in tweets], dtype=bool)
        w = np.array([a.followers_count for a in authors], dtype=np.float64)
        d = np.array([a.followings_count for a in authors], dtype=np.float64)
        self.w = w[self.author_idx]
        self.d = d[self.author_idx]
        self._timeline = None

    def timeline(self):
        if self._timeline is None:
            medians = np.empty(len(self._authors), dtype=np.float64)
            avgs = np.empty(len(self._authors), dtype=np.float64)
            offsets = np.zeros(len(self._authors) + 1, dtype=np.int64)
            chunks = []
            for i, a in enumerate(self._authors):
                stats = a.timeline_stats
                if stats is None:
                    # tolerated unless a tweet by this author is scored
                    medians[i] = np.nan
                    avgs[i] = np.nan
                    offsets[i + 1] = offsets[i]
                    continue
                medians[i] = stats.median_nonzero_rt
                avgs[i] = stats.avg_rt
                offsets[i + 1] = offsets[i] + len(stats.sorted_rts)
                chunks.append(np.asarray(stats.sorted_rts, dtype=np.float64))
            values = np.concatenate(chunks) if chunks else np.empty(0, dtype=np.float64)
            self._timeline = (medians, avgs, offsets, values)
        return self._timeline

    def _timeline_cols(self, kind: MetricKind):
        medians, avgs, offsets, values = self.timeline()
        used = np.unique(self.author_idx)
        missing = used[~np.isfinite(medians[used])]
        if missing.size:
            author = self._authors.records[int(missing[0])]
            raise ConfigError(
                f"metric {kind.value} needs timeline stats; author {author.id!r} has none"
            )
        return medians, avgs, offsets, values


def score_table(
    kind: MetricKind,
    tweets: TweetTable,
    authors: AuthorTable,
    cfg: MetricConfig | None = None,
    arrays: TableArrays | None = None,
) -> np.ndarray:
    """Score every tweet in table order; returns a float64 array."""
    cfg = cfg or MetricConfig()
    cfg.validate()
    t = arrays if arrays is not None else TableArrays(tweets, authors)

    sub = float(cfg.zero_follower_substitute)
    if kind is MetricKind.RT_THRESHOLD:
        return t.r.copy()
    if kind is MetricKind.RT_OVER_FOLLOWERS:
        return _kernels.follower_ratio_scores(t.r, t.w, sub)
    if kind is MetricKind.LOG_RT_OVER_FOLLOWERS:
        return _kernels.log_ratio_scores(t.r, t.w, cfg.log_zero_sentinel, sub)
    if kind is MetricKind.INFLUENCE_SCORE:
        return _kernels.influence_scores(t.r, t.f, t.w, t.d, cfg.influence_a)

    medians, avgs, offsets, values = t._timeline_cols(kind)
    if kind is MetricKind.RT_OVER_MEDIAN:
        return t.r / medians[t.author_idx]
    if kind is MetricKind.RT_OVER_AVG:
        return t.r / np.maximum(avgs[t.author_idx], AVG_RT_EPS)
    if kind is MetricKind.RT_PERCENTILE:
        return _kernels.percentile_ranks(t.r, t.author_idx, offsets, values)
    raise ConfigError(f"unknown metric kind: {kind!r}")
