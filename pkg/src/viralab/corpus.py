"""Dataset staging: tweet/author ingestion, timeline statistics, detection
pool filtering and balanced train/test splits.

File formats (all line-delimited JSON, UTF-8):

* tweet file   — one object per line with exactly the fields
  ``{id, author_id, created_at, text, lang, retweet_count, favorite_count,
  has_media, is_viral}``; ``created_at`` is UTC seconds since the epoch.
* author file  — ``{id, followers_count, followings_count, verified}``.
* split file   — a single JSON document ``{seed, train: [ids], test: [ids]}``.

Tables are immutable after load; every operation below is a pure function
over them.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import (
    AuthorResolutionError,
    CapacityError,
    ParseError,
    ValidationError,
)

TWEET_FIELDS = (
    "id",
    "author_id",
    "created_at",
    "text",
    "lang",
    "retweet_count",
    "favorite_count",
    "has_media",
    "is_viral",
)

AUTHOR_FIELDS = ("id", "followers_count", "followings_count", "verified")


@dataclass(frozen=True)
class TweetRecord:
    id: str
    author_id: str
    created_at: int
    text: str
    lang: str
    retweet_count: int
    favorite_count: int
    has_media: bool
    is_viral: bool

    def utc_date(self) -> str:
        """Calendar date (YYYY-MM-DD) of created_at in UTC."""
        return datetime.fromtimestamp(self.created_at, tz=timezone.utc).strftime(
            "%Y-%m-%d"
        )


@dataclass(frozen=True)
class TimelineStats:
    """Per-author aggregates over the author's own tweets.

    median_nonzero_rt is the median of retweet counts > 0 (1.0 when the
    author has none); avg_rt averages over all tweets, zeros included.
    """

    median_nonzero_rt: float
    avg_rt: float
    sorted_rts: tuple[int, ...]
    n_tweets: int


@dataclass(frozen=True)
class AuthorProfile:
    id: str
    followers_count: int
    followings_count: int
    verified: bool
    timeline_stats: Optional[TimelineStats] = None


@dataclass(frozen=True)
class DatasetSplit:
    train: tuple[str, ...]
    test: tuple[str, ...]
    seed: int


class _Table:
    """Insertion-ordered, id-indexed record container."""

    def __init__(self, records):
        self.records = list(records)
        self.by_id = {}
        for rec in self.records:
            if rec.id in self.by_id:
                raise ValidationError(f"duplicate id: {rec.id!r}")
            self.by_id[rec.id] = rec

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator:
        return iter(self.records)

    def __contains__(self, rec_id) -> bool:
        return rec_id in self.by_id

    def get(self, rec_id):
        return self.by_id[rec_id]


class TweetTable(_Table):
    pass


class AuthorTable(_Table):
    pass


def _validate_tweet(obj: dict) -> TweetRecord:
    rec = TweetRecord(
        id=str(obj["id"]),
        author_id=str(obj["author_id"]),
        created_at=int(obj["created_at"]),
        text=str(obj["text"]),
        lang=str(obj["lang"]),
        retweet_count=int(obj["retweet_count"]),
        favorite_count=int(obj["favorite_count"]),
        has_media=bool(obj["has_media"]),
        is_viral=bool(obj["is_viral"]),
    )
    if rec.retweet_count < 0:
        raise ValidationError(f"tweet {rec.id!r}: retweet_count must be >= 0")
    if rec.favorite_count < 0:
        raise ValidationError(f"tweet {rec.id!r}: favorite_count must be >= 0")
    return rec


def _validate_author(obj: dict) -> AuthorProfile:
    rec = AuthorProfile(
        id=str(obj["id"]),
        followers_count=int(obj["followers_count"]),
        followings_count=int(obj["followings_count"]),
        verified=bool(obj["verified"]),
    )
    if rec.followers_count < 0:
        raise ValidationError(f"author {rec.id!r}: followers_count must be >= 0")
    if rec.followings_count < 0:
        raise ValidationError(f"author {rec.id!r}: followings_count must be >= 0")
    return rec


def _load_jsonl(path, validate, required_fields):
    records = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON ({exc.msg})") from exc
            if not isinstance(obj, dict):
                raise ParseError(path, lineno, "expected a JSON object")
            missing = [k for k in required_fields if k not in obj]
            if missing:
                raise ParseError(path, lineno, f"missing fields: {', '.join(missing)}")
            try:
                records.append(validate(obj))
            except (TypeError, ValueError) as exc:
                raise ParseError(path, lineno, f"bad field value: {exc}") from exc
    return records


def load_tweets(path) -> TweetTable:
    """Load and validate a tweet file.

    Raises OSError for missing files, ParseError (with line number) for
    undecodable lines and ValidationError for invariant violations such as
    duplicate ids or negative counts.
    """
    return TweetTable(_load_jsonl(path, _validate_tweet, TWEET_FIELDS))


def load_authors(path) -> AuthorTable:
    """Load and validate an author file; timeline stats start absent."""
    return AuthorTable(_load_jsonl(path, _validate_author, AUTHOR_FIELDS))


def tweet_to_obj(rec: TweetRecord) -> dict:
    return {
        "id": rec.id,
        "author_id": rec.author_id,
        "created_at": rec.created_at,
        "text": rec.text,
        "lang": rec.lang,
        "retweet_count": rec.retweet_count,
        "favorite_count": rec.favorite_count,
        "has_media": rec.has_media,
        "is_viral": rec.is_viral,
    }


def author_to_obj(rec: AuthorProfile) -> dict:
    return {
        "id": rec.id,
        "followers_count": rec.followers_count,
        "followings_count": rec.followings_count,
        "verified": rec.verified,
    }


def dump_tweets(table: TweetTable) -> str:
    """Serialize a tweet table to the line-delimited format (round-trips)."""
    return "".join(
        json.dumps(tweet_to_obj(rec), ensure_ascii=False) + "\n" for rec in table
    )


def dump_authors(table: AuthorTable) -> str:
    return "".join(
        json.dumps(author_to_obj(rec), ensure_ascii=False) + "\n" for rec in table
    )


def attach_timeline_stats(tweets: TweetTable, authors: AuthorTable) -> AuthorTable:
    """Return a new author table with TimelineStats on every referenced author.

    The median covers only tweets with retweet_count > 0 and falls back to 1
    when the author has none; the average covers all tweets, zeros included.
    """
    unresolved = [t.id for t in tweets if t.author_id not in authors]
    if unresolved:
        raise AuthorResolutionError(unresolved)

    per_author: dict[str, list[int]] = {}
    for t in tweets:
        per_author.setdefault(t.author_id, []).append(t.retweet_count)

    out = []
    for author in authors:
        rts = per_author.get(author.id)
        if rts is None:
            out.append(author)
            continue
        nonzero = [r for r in rts if r > 0]
        stats = TimelineStats(
            median_nonzero_rt=float(statistics.median(nonzero)) if nonzero else 1.0,
            avg_rt=sum(rts) / len(rts),
            sorted_rts=tuple(sorted(rts)),
            n_tweets=len(rts),
        )
        out.append(replace(author, timeline_stats=stats))
    return AuthorTable(out)


def filter_detection_pool(tweets: TweetTable) -> TweetTable:
    """Reduce a table to the early-detection pool.

    Keeps English tweets that are viral, plus English non-viral tweets
    sharing author and UTC calendar day with an English viral tweet by the
    same author.  Anchoring on English virals makes the filter idempotent.
    """
    english = [t for t in tweets if t.lang == "en"]
    viral_days = {(t.author_id, t.utc_date()) for t in english if t.is_viral}
    kept = [
        t
        for t in english
        if t.is_viral or (t.author_id, t.utc_date()) in viral_days
    ]
    return TweetTable(kept)


def balance_split(pool: TweetTable, seed: int, test_frac: float) -> DatasetSplit:
    """Build a balanced, seeded train/test split over a detection pool.

    All V viral tweets are kept and V non-viral tweets are sampled uniformly
    without replacement; floor(test_frac * V) tweets per class go to test and
    the rest to train.  The RNG is NumPy's PCG64 (``default_rng(seed)``) with
    a fixed draw order (non-viral selection permutation, then one shuffle per
    class), so splits reproduce exactly for a given seed.
    """
    if not 0.0 < test_frac < 1.0:
        raise ValidationError(f"test_frac must be in (0, 1), got {test_frac}")
    viral_ids = [t.id for t in pool if t.is_viral]
    nonviral_ids = [t.id for t in pool if not t.is_viral]
    n_viral = len(viral_ids)
    if n_viral == 0:
        raise ValidationError("pool contains no viral tweets")
    if len(nonviral_ids) < n_viral:
        raise CapacityError(
            f"need {n_viral} non-viral tweets to balance, pool has {len(nonviral_ids)}"
        )

    rng = np.random.default_rng(seed)
    pick = rng.permutation(len(nonviral_ids))[:n_viral]
    sampled_nonviral = [nonviral_ids[i] for i in pick]

    n_test = int(test_frac * n_viral)

    viral_order = rng.permutation(n_viral)
    nonviral_order = rng.permutation(n_viral)
    viral_shuffled = [viral_ids[i] for i in viral_order]
    nonviral_shuffled = [sampled_nonviral[i] for i in nonviral_order]

    test = tuple(viral_shuffled[:n_test] + nonviral_shuffled[:n_test])
    train = tuple(viral_shuffled[n_test:] + nonviral_shuffled[n_test:])
    return DatasetSplit(train=train, test=test, seed=seed)


def split_to_json(split: DatasetSplit) -> str:
    return json.dumps(
        {"seed": split.seed, "train": list(split.train), "test": list(split.test)},
        indent=2,
    )


def load_split(path) -> DatasetSplit:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    for key in ("seed", "train", "test"):
        if key not in obj:
            raise ValidationError(f"split file missing {key!r}")
    return DatasetSplit(
        train=tuple(str(i) for i in obj["train"]),
        test=tuple(str(i) for i in obj["test"]),
        seed=int(obj["seed"]),
    )


def subset(table: TweetTable, ids: Iterable[str]) -> TweetTable:
    """Table restricted to `ids`, in the given id order."""
    return TweetTable([table.get(i) for i in ids])
