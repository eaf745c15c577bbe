import numpy as np
import pytest

from viralab import corpus, evaluate, metrics, synth
from viralab.errors import ValidationError
from viralab.synth import EngagementModel, SynthConfig, TextModel, ViralRule


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValidationError):
            SynthConfig(n_authors=0).validate()
        with pytest.raises(ValidationError):
            SynthConfig(tweets_per_author=(3, 2)).validate()
        with pytest.raises(ValidationError):
            SynthConfig(follower_lognormal=(7.0, 0.0)).validate()
        with pytest.raises(ValidationError):
            SynthConfig(viral_rule=ViralRule(label_noise=0.5)).validate()
        SynthConfig().validate()

    def test_mapping_round(self):
        cfg = synth.config_from_mapping(
            {
                "n_authors": "50",
                "tweets_min": "1",
                "tweets_max": "3",
                "ratio_threshold": "1.5",
                "label_noise": "0.1",
                "media_p_viral": "0.9",
                "seed": "9",
            }
        )
        assert cfg.n_authors == 50
        assert cfg.tweets_per_author == (1, 3)
        assert cfg.viral_rule == ViralRule(ratio_threshold=1.5, label_noise=0.1)
        assert cfg.text_model.media_p == (0.9, 0.217)
        assert cfg.seed == 9

    def test_unknown_key_rejected(self):
        with pytest.raises(ValidationError, match="unknown"):
            synth.config_from_mapping({"bogus": "1"})


class TestGenerate:
    def test_byte_identical_for_same_seed(self):
        cfg = SynthConfig(n_authors=100, seed=7)
        t1, a1 = synth.generate(cfg)
        t2, a2 = synth.generate(cfg)
        assert corpus.dump_tweets(t1) == corpus.dump_tweets(t2)
        assert corpus.dump_authors(a1) == corpus.dump_authors(a2)

    def test_different_seeds_differ(self):
        t1, _ = synth.generate(SynthConfig(n_authors=50, seed=1))
        t2, _ = synth.generate(SynthConfig(n_authors=50, seed=2))
        assert corpus.dump_tweets(t1) != corpus.dump_tweets(t2)

    def test_follower_lognormal_skew(self):
        cfg = SynthConfig(
            n_authors=10_000, tweets_per_author=(1, 1),
            follower_lognormal=(7.0, 1.5), seed=13,
        )
        _, authors = synth.generate(cfg)
        followers = np.array([a.followers_count for a in authors])
        assert followers.mean() > np.median(followers)

    def test_noise_free_rule_is_exact(self):
        cfg = SynthConfig(
            n_authors=400, seed=3,
            viral_rule=ViralRule(ratio_threshold=2.16, label_noise=0.0),
        )
        tweets, authors = synth.generate(cfg)
        for t in tweets:
            w = authors.get(t.author_id).followers_count
            assert t.is_viral == (t.retweet_count / max(w, 1) > 2.16)

    def test_zero_noise_ratio_metric_is_perfect(self):
        cfg = SynthConfig(n_authors=400, seed=5)
        tweets, authors = synth.generate(cfg)
        authors = corpus.attach_timeline_stats(tweets, authors)
        scores = metrics.score_table(
            metrics.MetricKind.RT_OVER_FOLLOWERS, tweets, authors
        )
        labels = np.array([t.is_viral for t in tweets])
        curve = evaluate.roc_curve(scores, labels, evaluate.FprMode.ALL_NONVIRAL)
        assert evaluate.auc(curve) == pytest.approx(1.0, abs=1e-12)

    def test_viral_fraction_tracks_rule_implied_rate(self):
        cfg = SynthConfig(
            n_authors=1500, tweets_per_author=(5, 10), seed=21,
            viral_rule=ViralRule(ratio_threshold=2.16, label_noise=0.1),
        )
        tweets, authors = synth.generate(cfg)
        assert len(tweets) >= 10_000
        rule = np.array(
            [
                t.retweet_count / max(1, authors.get(t.author_id).followers_count)
                > 2.16
                for t in tweets
            ]
        )
        labels = np.array([t.is_viral for t in tweets])
        implied = rule.mean() * 0.9 + (1 - rule.mean()) * 0.1
        assert abs(labels.mean() - implied) < 0.02

    def test_class_conditional_propensities(self):
        cfg = SynthConfig(n_authors=2500, seed=17)
        tweets, _ = synth.generate(cfg)
        media_v = np.array([t.has_media for t in tweets if t.is_viral])
        media_n = np.array([t.has_media for t in tweets if not t.is_viral])
        assert media_v.mean() == pytest.approx(0.621, abs=0.04)
        assert media_n.mean() == pytest.approx(0.217, abs=0.02)
        len_v = np.array([len(t.text) for t in tweets if t.is_viral])
        len_n = np.array([len(t.text) for t in tweets if not t.is_viral])
        assert len_v.mean() - len_n.mean() > 10

    def test_timestamps_within_day_span(self):
        cfg = SynthConfig(n_authors=100, day_span=3, seed=2)
        tweets, _ = synth.generate(cfg)
        for t in tweets:
            offset = t.created_at - synth.EPOCH_START
            assert 0 <= offset < 3 * 86400

    def test_all_english(self):
        tweets, _ = synth.generate(SynthConfig(n_authors=60, seed=4))
        assert all(t.lang == "en" for t in tweets)

    def test_planted_sentiment_recoverable_by_stub(self):
        from viralab.features import Polarity, stub_sentiment

        tweets, _ = synth.generate(SynthConfig(n_authors=200, seed=6))
        assigned = [stub_sentiment(t.text).polarity for t in tweets]
        assert all(p is not Polarity.NONE for p in assigned)
