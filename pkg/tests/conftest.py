import numpy as np
import pytest

from viralab.corpus import AuthorProfile, AuthorTable, TweetRecord, TweetTable

DAY = 86400
T0 = 1664582400  # 2022-10-01T00:00:00Z


def make_tweet(
    id="t1",
    author_id="u1",
    created_at=T0,
    text="hello world",
    lang="en",
    retweet_count=0,
    favorite_count=0,
    has_media=False,
    is_viral=False,
):
    return TweetRecord(
        id=id,
        author_id=author_id,
        created_at=created_at,
        text=text,
        lang=lang,
        retweet_count=retweet_count,
        favorite_count=favorite_count,
        has_media=has_media,
        is_viral=is_viral,
    )


def make_author(
    id="u1", followers_count=1000, followings_count=100, verified=False,
    timeline_stats=None,
):
    return AuthorProfile(
        id=id,
        followers_count=followers_count,
        followings_count=followings_count,
        verified=verified,
        timeline_stats=timeline_stats,
    )


def tweet_table(*tweets):
    return TweetTable(list(tweets))


def author_table(*authors):
    return AuthorTable(list(authors))


@pytest.fixture
def rng():
    return np.random.default_rng(20221001)
