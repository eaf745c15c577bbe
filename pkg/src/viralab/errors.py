"""Exception hierarchy shared by all viralab modules."""


class ViralabError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ViralabError):
    """A line-delimited input file could not be decoded.

    Carries the file path and 1-based line number of the offending line.
    """

    def __init__(self, path, lineno, reason):
        super().__init__(f"{path}:{lineno}: {reason}")
        self.path = str(path)
        self.lineno = lineno
        self.reason = reason


class ValidationError(ViralabError):
    """A record, argument or table violates a documented invariant."""


class AuthorResolutionError(ValidationError):
    """Tweets reference author ids that are missing from the author table."""

    def __init__(self, tweet_ids):
        self.tweet_ids = list(tweet_ids)
        shown = ", ".join(self.tweet_ids[:10])
        more = "" if len(self.tweet_ids) <= 10 else f" (+{len(self.tweet_ids) - 10} more)"
        super().__init__(f"unresolvable author_id on tweets: {shown}{more}")


class CapacityError(ValidationError):
    """Not enough records to satisfy a sampling request."""


class ConfigError(ViralabError):
    """A metric or pipeline was invoked with an unusable configuration."""


class DivergenceError(ViralabError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch):
        super().__init__(f"non-finite loss at epoch {epoch}")
        self.epoch = epoch
