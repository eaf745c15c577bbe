"""Synthetic tweet/author corpus with a planted virality rule.

Follower counts are drawn log-normally (heavy left skew towards small
accounts) and retweet counts from a discretized log-normal conditioned on
followers, so both tweet-level and profile-normalized metrics see realistic
spread.  A tweet's ground-truth label is the planted rule
``retweet_count / max(followers, 1) > ratio_threshold`` XOR a Bernoulli
label-noise flip; content features are then drawn class-conditionally, which
gives feature-statistics tests known targets.

Generation consumes a single ``numpy.random.default_rng(seed)`` stream
(PCG64) in a fixed order, so a config and seed reproduce the corpus
byte-for-byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import AuthorProfile, AuthorTable, TweetRecord, TweetTable
from .errors import ValidationError

# 2022-10-01T00:00:00Z; all synthetic timestamps count forward from here.
EPOCH_START = 1664582400

# Planted-sentiment vocabularies are subsets of the stub sentiment lexicons
# so the built-in provider recovers the planted polarity with confidence 1.
POSITIVE_SEED_WORDS = ("love", "great", "amazing", "happy", "wonderful", "best")
NEGATIVE_SEED_WORDS = ("hate", "awful", "terrible", "sad", "worst", "horrible")

FILLER_WORDS = (
    "the", "quick", "update", "today", "people", "thread", "about", "just",
    "really", "again", "into", "while", "watch", "story", "need", "more",
    "they", "break", "point", "making", "where", "tomorrow", "change",
    "maybe", "still", "never", "every", "during", "around", "under",
)

HASHTAG_WORDS = (
    "Tonight", "Weekend", "Update", "Live", "Thread", "Event", "Launch",
    "Season", "Moment", "Local",
)


@dataclass(frozen=True)
class ViralRule:
    ratio_threshold: float = 2.16
    label_noise: float = 0.0


@dataclass(frozen=True)
class TextModel:
    """Per-class (viral, non-viral) content-feature propensities."""

    media_p: tuple[float, float] = (0.621, 0.217)
    hashtag_p: tuple[float, float] = (0.0585, 0.0303)
    mention_p: tuple[float, float] = (0.4276, 0.4112)
    verified_p: tuple[float, float] = (0.0546, 0.0724)
    positive_p: tuple[float, float] = (0.252, 0.40)
    length_mean: tuple[float, float] = (88.3, 64.9)
    length_sd: float = 20.0


@dataclass(frozen=True)
class EngagementModel:
    """Log-space retweet model: N(base + coeff*ln(followers+1), sd)."""

    rt_log_base: float = 0.45
    rt_follow_coeff: float = 0.55
    rt_log_sd: float = 2.0
    followings_mu: float = 5.5
    followings_sigma: float = 1.2


@dataclass(frozen=True)
class SynthConfig:
    n_authors: int = 1000
    tweets_per_author: tuple[int, int] = (2, 10)
    follower_lognormal: tuple[float, float] = (7.0, 1.5)
    viral_rule: ViralRule = field(default_factory=ViralRule)
    text_model: TextModel = field(default_factory=TextModel)
    engagement: EngagementModel = field(default_factory=EngagementModel)
    day_span: int = 3
    seed: int = 42

    def validate(self) -> None:
        lo, hi = self.tweets_per_author
        if self.n_authors < 1:
            raise ValidationError("n_authors must be >= 1")
        if not (1 <= lo <= hi):
            raise ValidationError("tweets_per_author must satisfy 1 <= min <= max")
        if self.follower_lognormal[1] <= 0:
            raise ValidationError("follower sigma must be > 0")
        if not 0.0 <= self.viral_rule.label_noise < 0.5:
            raise ValidationError("label_noise must be in [0, 0.5)")
        if self.viral_rule.ratio_threshold <= 0:
            raise ValidationError("ratio_threshold must be > 0")
        if self.day_span < 1:
            raise ValidationError("day_span must be >= 1")
        for name in ("media_p", "hashtag_p", "mention_p", "verified_p", "positive_p"):
            pair = getattr(self.text_model, name)
            if not all(0.0 <= p <= 1.0 for p in pair):
                raise ValidationError(f"{name} entries must be in [0, 1]")


_FLOAT_KEYS = {
    "follower_mu", "follower_sigma", "ratio_threshold", "label_noise",
    "rt_log_base", "rt_follow_coeff", "rt_log_sd", "followings_mu",
    "followings_sigma", "media_p_viral", "media_p_nonviral",
    "hashtag_p_viral", "hashtag_p_nonviral", "mention_p_viral",
    "mention_p_nonviral", "verified_p_viral", "verified_p_nonviral",
    "positive_p_viral", "positive_p_nonviral", "length_mean_viral",
    "length_mean_nonviral", "length_sd",
}
_INT_KEYS = {"n_authors", "tweets_min", "tweets_max", "day_span", "seed"}


def config_from_mapping(mapping: dict) -> SynthConfig:
    """Build a SynthConfig from flat string keys (config file / CLI flags)."""
    vals = {}
    for key, raw in mapping.items():
        if key in _INT_KEYS:
            vals[key] = int(raw)
        elif key in _FLOAT_KEYS:
            vals[key] = float(raw)
        else:
            raise ValidationError(f"unknown generator config key: {key!r}")

    base = SynthConfig()
    tm, em, vr = base.text_model, base.engagement, base.viral_rule

    def pair(prefix, default):
        return (
            vals.get(f"{prefix}_viral", default[0]),
            vals.get(f"{prefix}_nonviral", default[1]),
        )

    return SynthConfig(
        n_authors=vals.get("n_authors", base.n_authors),
        tweets_per_author=(
            vals.get("tweets_min", base.tweets_per_author[0]),
            vals.get("tweets_max", base.tweets_per_author[1]),
        ),
        follower_lognormal=(
            vals.get("follower_mu", base.follower_lognormal[0]),
            vals.get("follower_sigma", base.follower_lognormal[1]),
        ),
        viral_rule=ViralRule(
            ratio_threshold=vals.get("ratio_threshold", vr.ratio_threshold),
            label_noise=vals.get("label_noise", vr.label_noise),
        ),
        text_model=TextModel(
            media_p=pair("media_p", tm.media_p),
            hashtag_p=pair("hashtag_p", tm.hashtag_p),
            mention_p=pair("mention_p", tm.mention_p),
            verified_p=pair("verified_p", tm.verified_p),
            positive_p=pair("positive_p", tm.positive_p),
            length_mean=pair("length_mean", tm.length_mean),
            length_sd=vals.get("length_sd", tm.length_sd),
        ),
        engagement=EngagementModel(
            rt_log_base=vals.get("rt_log_base", em.rt_log_base),
            rt_follow_coeff=vals.get("rt_follow_coeff", em.rt_follow_coeff),
            rt_log_sd=vals.get("rt_log_sd", em.rt_log_sd),
            followings_mu=vals.get("followings_mu", em.followings_mu),
            followings_sigma=vals.get("followings_sigma", em.followings_sigma),
        ),
        day_span=vals.get("day_span", base.day_span),
        seed=vals.get("seed", base.seed),
    )


def _draw_text(rng, cls, tm: TextModel, want_mention: bool, want_hashtag: bool) -> str:
    parts = []
    if want_mention:
        parts.append("@user%d" % rng.integers(0, 100000))
    if rng.random() < tm.positive_p[cls]:
        vocab = POSITIVE_SEED_WORDS
    else:
        vocab = NEGATIVE_SEED_WORDS
    for _ in range(3):
        parts.append(vocab[rng.integers(0, len(vocab))])
    tail = "#%s" % HASHTAG_WORDS[rng.integers(0, len(HASHTAG_WORDS))] if want_hashtag else None

    target = max(16, int(round(rng.normal(tm.length_mean[cls], tm.length_sd))))
    tail_len = len(tail) + 1 if tail else 0
    length = sum(len(p) for p in parts) + len(parts) - 1
    while length + tail_len < target:
        word = FILLER_WORDS[rng.integers(0, len(FILLER_WORDS))]
        parts.append(word)
        length += len(word) + 1
    if tail:
        parts.append(tail)
    return " ".join(parts)


def generate(config: SynthConfig) -> tuple[TweetTable, AuthorTable]:
    """Generate a corpus; fully deterministic for a given config and seed."""
    config.validate()
    rng = np.random.default_rng(config.seed)
    mu, sigma = config.follower_lognormal
    em, tm, rule = config.engagement, config.text_model, config.viral_rule
    tmin, tmax = config.tweets_per_author

    tweets = []
    authors = []
    tweet_no = 0
    for i in range(config.n_authors):
        author_id = "u%05d" % i
        followers = int(rng.lognormal(mu, sigma))
        followings = int(rng.lognormal(em.followings_mu, em.followings_sigma))
        n_tweets = int(rng.integers(tmin, tmax + 1))

        verified_p_sum = 0.0
        for _ in range(n_tweets):
            day = int(rng.integers(0, config.day_span))
            sec = int(rng.integers(0, 86400))
            latent = rng.normal(
                em.rt_log_base + em.rt_follow_coeff * math.log(followers + 1.0),
                em.rt_log_sd,
            )
            rt = int(math.floor(math.exp(min(latent, 30.0))))
            fav = int(math.floor(math.exp(min(latent + rng.normal(0.8, 0.7), 30.0))))
            flip = rng.random() < rule.label_noise
            fires = rt / max(followers, 1) > rule.ratio_threshold
            is_viral = fires != flip
            cls = 0 if is_viral else 1

            has_media = rng.random() < tm.media_p[cls]
            want_hashtag = rng.random() < tm.hashtag_p[cls]
            want_mention = rng.random() < tm.mention_p[cls]
            text = _draw_text(rng, cls, tm, want_mention, want_hashtag)
            verified_p_sum += tm.verified_p[cls]

            tweets.append(
                TweetRecord(
                    id="t%07d" % tweet_no,
                    author_id=author_id,
                    created_at=EPOCH_START + day * 86400 + sec,
                    text=text,
                    lang="en",
                    retweet_count=rt,
                    favorite_count=fav,
                    has_media=has_media,
                    is_viral=is_viral,
                )
            )
            tweet_no += 1

        verified = rng.random() < (verified_p_sum / n_tweets)
        authors.append(
            AuthorProfile(
                id=author_id,
                followers_count=followers,
                followings_count=followings,
                verified=bool(verified),
            )
        )

    return TweetTable(tweets), AuthorTable(authors)
