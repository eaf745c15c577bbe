"""Content features, sentiment providers, and the feature significance table.

Entity detection is deliberately small and fully specified so it reproduces
across implementations:

* hashtag — ``#`` at start of text or after a non-word character, followed
  by one or more word characters of which at least one is a non-digit;
* mention — ``@`` at start of text or after a non-word character, followed
  by a run of 1–15 characters from ``[A-Za-z0-9_]`` (longer runs are not
  mentions);
* URL — an occurrence of the scheme prefix ``http://`` or ``https://``.

Sentiment is tri-state (positive / negative / none): a polarity is assigned
only when the provider's confidence exceeds ``CONFIDENCE_THRESHOLD``.  That
rule lives here and only here; external providers emit raw confidences.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

import numpy as np

from ._stats import norm_sf, t_sf_two_sided
from .corpus import AuthorTable, TweetRecord, TweetTable
from .errors import ParseError, ValidationError

CONFIDENCE_THRESHOLD = 0.7
ALPHA = 0.05

_HASHTAG_RE = re.compile(r"(?<!\w)#(\w+)")
_MENTION_RE = re.compile(r"(?<!\w)@([A-Za-z0-9_]+)")
_TOKEN_RE = re.compile(r"[a-z]+")

POSITIVE_LEXICON = frozenset(
    """love great good happy best amazing awesome wonderful beautiful
    excellent win nice cool fun hope thanks proud excited brilliant
    perfect glad joy smile delight sweet""".split()
)

NEGATIVE_LEXICON = frozenset(
    """hate bad terrible awful sad angry worst horrible disgusting fail
    wrong stupid ugly annoying fear lose broken disaster cry pain
    sick nasty gross mess ruin""".split()
)


class Polarity(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NONE = "none"


@dataclass(frozen=True)
class SentimentResult:
    polarity: Polarity
    confidence: float


@dataclass(frozen=True)
class FeatureVector:
    has_media: bool
    has_hashtags: bool
    has_mentions: bool
    from_verified: bool
    positive_sentiment: bool
    negative_sentiment: bool
    length_chars: int


@dataclass(frozen=True)
class FeatureStat:
    feature: str
    viral: float
    nonviral: float
    diff: float
    p_value: float
    significant: bool


def parse_entities(text: str) -> dict:
    """Hashtags, mentions and URL count per the module's detection rules."""
    hashtags = [
        m.group(1)
        for m in _HASHTAG_RE.finditer(text)
        if any(not c.isdigit() for c in m.group(1))
    ]
    mentions = [
        m.group(1) for m in _MENTION_RE.finditer(text) if len(m.group(1)) <= 15
    ]
    url_count = text.count("http://") + text.count("https://")
    return {"hashtags": hashtags, "mentions": mentions, "url_count": url_count}


def apply_confidence_rule(polarity: Polarity, confidence: float) -> SentimentResult:
    """Demote a raw polarity to NONE unless confidence exceeds the threshold."""
    if polarity is not Polarity.NONE and confidence > CONFIDENCE_THRESHOLD:
        return SentimentResult(polarity, confidence)
    return SentimentResult(Polarity.NONE, confidence)


def stub_sentiment(text: str) -> SentimentResult:
    """Deterministic lexicon sentiment, standing in for an external model.

    With P and N the positive/negative lexicon token counts, confidence is
    |P - N| / max(P + N, 1) and the majority polarity is kept when it clears
    the confidence threshold.
    """
    tokens = _TOKEN_RE.findall(text.lower())
    p = sum(t in POSITIVE_LEXICON for t in tokens)
    n = sum(t in NEGATIVE_LEXICON for t in tokens)
    confidence = abs(p - n) / max(p + n, 1)
    if p > n:
        return apply_confidence_rule(Polarity.POSITIVE, confidence)
    if n > p:
        return apply_confidence_rule(Polarity.NEGATIVE, confidence)
    return SentimentResult(Polarity.NONE, confidence)


def extract(
    tweet: TweetRecord, author, sentiment: SentimentResult
) -> FeatureVector:
    """Assemble the per-tweet feature vector from its parts."""
    ents = parse_entities(tweet.text)
    return FeatureVector(
        has_media=tweet.has_media,
        has_hashtags=bool(ents["hashtags"]),
        has_mentions=bool(ents["mentions"]),
        from_verified=author.verified,
        positive_sentiment=sentiment.polarity is Polarity.POSITIVE,
        negative_sentiment=sentiment.polarity is Polarity.NEGATIVE,
        length_chars=len(tweet.text),
    )


SentimentProvider = Callable[[TweetRecord], SentimentResult]


def stub_provider(tweet: TweetRecord) -> SentimentResult:
    return stub_sentiment(tweet.text)


def load_sentiment_file(path) -> dict[str, SentimentResult]:
    """Read a raw sentiment file and apply the confidence rule.

    Lines are ``{"tweet_id": ..., "polarity": "positive"|"negative",
    "confidence": float}``; polarities whose confidence does not exceed the
    threshold come back as NONE.
    """
    out: dict[str, SentimentResult] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON ({exc.msg})") from exc
            try:
                polarity = Polarity(obj["polarity"])
                confidence = float(obj["confidence"])
                tweet_id = str(obj["tweet_id"])
            except (KeyError, ValueError) as exc:
                raise ParseError(path, lineno, f"bad sentiment record: {exc}") from exc
            out[tweet_id] = apply_confidence_rule(polarity, confidence)
    return out


def file_provider(path) -> SentimentProvider:
    """Provider backed by a sentiment file; unknown tweets map to NONE."""
    table = load_sentiment_file(path)

    def provider(tweet: TweetRecord) -> SentimentResult:
        return table.get(tweet.id, SentimentResult(Polarity.NONE, 0.0))

    return provider


def two_prop_z(x1: int, n1: int, x2: int, n2: int) -> tuple[float, float]:
    """Pooled two-proportion z test; returns (z, two-sided p)."""
    if n1 <= 0 or n2 <= 0:
        raise ValidationError("two_prop_z needs n1, n2 > 0")
    if not (0 <= x1 <= n1 and 0 <= x2 <= n2):
        raise ValidationError("two_prop_z needs 0 <= x <= n per group")
    p1 = x1 / n1
    p2 = x2 / n2
    pooled = (x1 + x2) / (n1 + n2)
    se = math.sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2))
    if se == 0.0:
        return 0.0, 1.0
    z = (p1 - p2) / se
    return z, min(1.0, 2.0 * norm_sf(abs(z)))


def welch_t(sample_a, sample_b) -> tuple[float, float]:
    """Welch's unequal-variance t test; returns (t, two-sided p).

    Uses the normal tail for Welch-Satterthwaite df > 30 and the
    incomplete-beta t tail otherwise.
    """
    a = np.asarray(sample_a, dtype=np.float64)
    b = np.asarray(sample_b, dtype=np.float64)
    if a.size < 2 or b.size < 2:
        raise ValidationError("welch_t needs at least 2 values per sample")
    va = float(a.var(ddof=1)) / a.size
    vb = float(b.var(ddof=1)) / b.size
    se2 = va + vb
    mean_diff = float(a.mean() - b.mean())
    if se2 == 0.0:
        if mean_diff == 0.0:
            return 0.0, 1.0
        raise ValidationError("welch_t needs nonzero variance in some sample")
    t = mean_diff / math.sqrt(se2)
    df = se2 * se2 / (va * va / (a.size - 1) + vb * vb / (b.size - 1))
    if df > 30.0:
        p = 2.0 * norm_sf(abs(t))
    else:
        p = t_sf_two_sided(t, df)
    return t, min(1.0, p)


def _share_stat(name, viral_hits, n_viral, nonviral_hits, n_nonviral) -> FeatureStat:
    if n_viral == 0 or n_nonviral == 0:
        v = viral_hits / n_viral if n_viral else 0.0
        nv = nonviral_hits / n_nonviral if n_nonviral else 0.0
        return FeatureStat(name, v, nv, abs(v - nv), 1.0, False)
    _, p = two_prop_z(viral_hits, n_viral, nonviral_hits, n_nonviral)
    v = viral_hits / n_viral
    nv = nonviral_hits / n_nonviral
    return FeatureStat(name, v, nv, abs(v - nv), p, p < ALPHA)


FEATURE_ROWS = (
    "contains_media",
    "contains_hashtags",
    "from_verified",
    "positive_sentiment",
    "negative_sentiment",
    "contains_mentions",
    "mean_length",
)


def feature_table(
    tweets: TweetTable,
    authors: AuthorTable,
    provider: Optional[SentimentProvider] = None,
) -> list[FeatureStat]:
    """Per-feature class shares (or means), differences and p-values.

    Boolean features use the two-proportion z test, tweet length Welch's t
    test.  Sentiment shares are normalized over tweets with an assigned
    polarity only.  Rows come back in the fixed FEATURE_ROWS order.
    """
    provider = provider or stub_provider
    classes: dict[bool, list[FeatureVector]] = {True: [], False: []}
    for tweet in tweets:
        author = authors.get(tweet.author_id)
        classes[tweet.is_viral].append(extract(tweet, author, provider(tweet)))
    viral, nonviral = classes[True], classes[False]
    if not viral or not nonviral:
        raise ValidationError("feature_table needs at least one tweet per class")

    def hits(rows, attr):
        return sum(getattr(fv, attr) for fv in rows)

    n_v, n_n = len(viral), len(nonviral)
    v_assigned = [fv for fv in viral if fv.positive_sentiment or fv.negative_sentiment]
    n_assigned = [
        fv for fv in nonviral if fv.positive_sentiment or fv.negative_sentiment
    ]

    stats = [
        _share_stat("contains_media", hits(viral, "has_media"), n_v,
                    hits(nonviral, "has_media"), n_n),
        _share_stat("contains_hashtags", hits(viral, "has_hashtags"), n_v,
                    hits(nonviral, "has_hashtags"), n_n),
        _share_stat("from_verified", hits(viral, "from_verified"), n_v,
                    hits(nonviral, "from_verified"), n_n),
        _share_stat("positive_sentiment",
                    hits(v_assigned, "positive_sentiment"), len(v_assigned),
                    hits(n_assigned, "positive_sentiment"), len(n_assigned)),
        _share_stat("negative_sentiment",
                    hits(v_assigned, "negative_sentiment"), len(v_assigned),
                    hits(n_assigned, "negative_sentiment"), len(n_assigned)),
        _share_stat("contains_mentions", hits(viral, "has_mentions"), n_v,
                    hits(nonviral, "has_mentions"), n_n),
    ]

    lengths_v = [fv.length_chars for fv in viral]
    lengths_n = [fv.length_chars for fv in nonviral]
    mv = sum(lengths_v) / n_v
    mn = sum(lengths_n) / n_n
    if n_v >= 2 and n_n >= 2:
        try:
            _, p_len = welch_t(lengths_v, lengths_n)
        except ValidationError:
            p_len = 1.0
    else:
        p_len = 1.0
    stats.append(
        FeatureStat("mean_length", mv, mn, abs(mv - mn), p_len, p_len < ALPHA)
    )
    return stats


def feature_stats_csv(stats) -> str:
    lines = ["feature,viral,nonviral,diff,p_value,significant"]
    for st in stats:
        lines.append(
            f"{st.feature},{st.viral:.6g},{st.nonviral:.6g},{st.diff:.6g},"
            f"{st.p_value:.6g},{str(st.significant).lower()}"
        )
    return "\n".join(lines) + "\n"
