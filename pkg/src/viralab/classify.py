"""Linear detection head: design-matrix assembly, seeded logistic-regression
training, prediction and precision/recall/F1 evaluation.

A design row is an optional text embedding concatenated with the seven
content features (six booleans as 0/1 plus length normalized by the 280
character limit).  Training is full-batch gradient descent from zero
weights, so a fixed dataset and hyperparameters reproduce the model
bit-for-bit.

File contracts:

* model file      — one JSON document {weights, bias, feature_config,
  train_meta}.
* embedding file  — line-delimited; a ``{"dim": D}`` header record, then
  ``{"tweet_id": ..., "vector": [...]}`` rows of that dimension.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .corpus import AuthorTable, TweetTable
from .errors import DivergenceError, ParseError, ValidationError
from .features import FeatureVector, SentimentProvider, extract, stub_provider

LENGTH_NORM = 280.0
N_EXTRA = 7


@dataclass(frozen=True)
class FeatureConfig:
    embedding_dim: int
    use_extra: bool

    @property
    def dim(self) -> int:
        return self.embedding_dim + (N_EXTRA if self.use_extra else 0)


@dataclass(frozen=True)
class TrainMeta:
    seed: int = 42
    epochs: int = 300
    learning_rate: float = 0.1
    l2: float = 1e-4


@dataclass(frozen=True)
class DesignRow:
    tweet_id: str
    x: np.ndarray
    y: int


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    bias: float
    feature_config: FeatureConfig
    train_meta: TrainMeta


@dataclass(frozen=True)
class ClassReport:
    accuracy: float
    precision: float
    recall: float
    f1: float
    confusion: tuple[int, int, int, int]  # tp, fp, fn, tn


def extras_vector(features: FeatureVector) -> np.ndarray:
    """Fixed-order extra features: media, hashtags, verified, positive,
    negative, mentions, length/280 (clamped to 1)."""
    return np.array(
        [
            float(features.has_media),
            float(features.has_hashtags),
            float(features.from_verified),
            float(features.positive_sentiment),
            float(features.negative_sentiment),
            float(features.has_mentions),
            min(features.length_chars / LENGTH_NORM, 1.0),
        ],
        dtype=np.float64,
    )


def assemble(
    features: FeatureVector,
    embedding: Optional[np.ndarray],
    use_extra: bool,
) -> np.ndarray:
    """Embedding ++ extras (when use_extra), as one float64 vector."""
    parts = []
    if embedding is not None:
        parts.append(np.asarray(embedding, dtype=np.float64))
    if use_extra:
        parts.append(extras_vector(features))
    if not parts:
        raise ValidationError("assemble needs an embedding or use_extra=True")
    return np.concatenate(parts)


def design_rows(
    tweets: TweetTable,
    authors: AuthorTable,
    embeddings: Optional[dict[str, np.ndarray]] = None,
    use_extra: bool = True,
    provider: Optional[SentimentProvider] = None,
) -> list[DesignRow]:
    """One design row per tweet, in table order."""
    provider = provider or stub_provider
    rows = []
    for tweet in tweets:
        emb = None
        if embeddings is not None:
            if tweet.id not in embeddings:
                raise ValidationError(f"no embedding for tweet {tweet.id!r}")
            emb = embeddings[tweet.id]
        fv = extract(tweet, authors.get(tweet.author_id), provider(tweet))
        rows.append(
            DesignRow(tweet.id, assemble(fv, emb, use_extra), int(tweet.is_viral))
        )
    return rows


def _design_matrix(rows: Sequence[DesignRow]):
    if not rows:
        raise ValidationError("no design rows")
    dims = {row.x.shape[0] for row in rows}
    if len(dims) != 1:
        raise ValidationError(f"inconsistent design-row dimensions: {sorted(dims)}")
    x = np.stack([row.x for row in rows]).astype(np.float64)
    y = np.array([row.y for row in rows], dtype=np.float64)
    return x, y


def _sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def logistic_loss(weights, bias, x, y, l2) -> float:
    """Mean cross-entropy + 0.5*l2*||w||^2 (bias unpenalized)."""
    z = x @ weights + bias
    ce = np.maximum(z, 0.0) - y * z + np.log1p(np.exp(-np.abs(z)))
    return float(ce.mean() + 0.5 * l2 * (weights @ weights))


def logistic_grad(weights, bias, x, y, l2) -> np.ndarray:
    """Gradient of logistic_loss wrt (weights..., bias), mean-reduced."""
    resid = _sigmoid(x @ weights + bias) - y
    gw = x.T @ resid / x.shape[0] + l2 * weights
    gb = resid.mean()
    return np.r_[gw, gb]


def train_logreg(
    rows: Sequence[DesignRow],
    hyper: TrainMeta | None = None,
    feature_config: FeatureConfig | None = None,
) -> tuple[LinearModel, np.ndarray]:
    """Fit the detection head; returns (model, per-epoch loss trace).

    Full-batch gradient descent on L2-regularized cross-entropy from zero
    initialization; deterministic for fixed rows and hyperparameters.  When
    no feature_config is given the whole row counts as embedding.
    """
    hyper = hyper or TrainMeta()
    x, y = _design_matrix(rows)
    n_pos = int(y.sum())
    if n_pos == 0 or n_pos == len(y):
        raise ValidationError("train_logreg needs at least one row of each class")
    if hyper.epochs < 0:
        raise ValidationError("epochs must be >= 0")
    if feature_config is None:
        feature_config = FeatureConfig(embedding_dim=x.shape[1], use_extra=False)
    elif feature_config.dim != x.shape[1]:
        raise ValidationError(
            f"feature config dim {feature_config.dim} != row dim {x.shape[1]}"
        )

    w, b, losses = _kernels.logreg_fit(
        x, y, hyper.epochs, hyper.learning_rate, hyper.l2
    )
    bad = np.flatnonzero(~np.isfinite(losses))
    if bad.size:
        raise DivergenceError(int(bad[0]))

    model = LinearModel(
        weights=w, bias=float(b), feature_config=feature_config, train_meta=hyper
    )
    return model, losses


def with_feature_config(model: LinearModel, config: FeatureConfig) -> LinearModel:
    if config.dim != model.weights.shape[0]:
        raise ValidationError(
            f"feature config dim {config.dim} != weight dim {model.weights.shape[0]}"
        )
    return LinearModel(model.weights, model.bias, config, model.train_meta)


def predict_prob(model: LinearModel, x) -> float:
    """Sigmoid(w.x + b) for a single feature vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != model.weights.shape:
        raise ValidationError(
            f"dimension mismatch: x has {x.shape}, model has {model.weights.shape}"
        )
    return float(_sigmoid(x @ model.weights + model.bias))


def predict_probs(model: LinearModel, rows: Sequence[DesignRow]) -> np.ndarray:
    x, _ = _design_matrix(rows)
    if x.shape[1] != model.weights.shape[0]:
        raise ValidationError(
            f"dimension mismatch: rows have {x.shape[1]}, model has "
            f"{model.weights.shape[0]}"
        )
    return _sigmoid(x @ model.weights + model.bias)


def grad(model: LinearModel, rows: Sequence[DesignRow]) -> np.ndarray:
    """Loss gradient wrt (weights..., bias) at the model's parameters."""
    x, y = _design_matrix(rows)
    if x.shape[1] != model.weights.shape[0]:
        raise ValidationError("dimension mismatch between model and rows")
    return logistic_grad(model.weights, model.bias, x, y, model.train_meta.l2)


def eval_classifier(probs, labels, threshold: float = 0.5) -> ClassReport:
    """Confusion matrix and accuracy/precision/recall/F1 at a threshold.

    Probabilities at or above the threshold classify as viral; precision and
    recall fall back to 0 when their denominators are empty.
    """
    p = np.asarray(probs, dtype=np.float64)
    y = np.asarray(labels, dtype=bool)
    if p.size == 0 or p.shape != y.shape:
        raise ValidationError("probs and labels must be equal-length, non-empty")
    pred = p >= threshold
    tp = int(np.sum(pred & y))
    fp = int(np.sum(pred & ~y))
    fn = int(np.sum(~pred & y))
    tn = int(np.sum(~pred & ~y))
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (
        2.0 * precision * recall / (precision + recall)
        if precision + recall > 0
        else 0.0
    )
    accuracy = (tp + tn) / p.size
    return ClassReport(accuracy, precision, recall, f1, (tp, fp, fn, tn))


# ---------------------------------------------------------------------------
# file formats


def model_to_json(model: LinearModel) -> str:
    return json.dumps(
        {
            "weights": [float(v) for v in model.weights],
            "bias": model.bias,
            "feature_config": {
                "embedding_dim": model.feature_config.embedding_dim,
                "use_extra": model.feature_config.use_extra,
            },
            "train_meta": {
                "seed": model.train_meta.seed,
                "epochs": model.train_meta.epochs,
                "learning_rate": model.train_meta.learning_rate,
                "l2": model.train_meta.l2,
            },
        },
        indent=2,
    )


def load_model(path) -> LinearModel:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    try:
        fc = obj["feature_config"]
        tm = obj["train_meta"]
        model = LinearModel(
            weights=np.asarray(obj["weights"], dtype=np.float64),
            bias=float(obj["bias"]),
            feature_config=FeatureConfig(
                embedding_dim=int(fc["embedding_dim"]),
                use_extra=bool(fc["use_extra"]),
            ),
            train_meta=TrainMeta(
                seed=int(tm["seed"]),
                epochs=int(tm["epochs"]),
                learning_rate=float(tm["learning_rate"]),
                l2=float(tm["l2"]),
            ),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad model file {path}: {exc}") from exc
    if model.feature_config.dim != model.weights.shape[0]:
        raise ValidationError(
            f"model file {path}: weight dim {model.weights.shape[0]} does not "
            f"match feature config dim {model.feature_config.dim}"
        )
    return model


def dump_embeddings(vectors: Iterable[tuple[str, np.ndarray]], dim: int) -> str:
    lines = [json.dumps({"dim": dim})]
    for tweet_id, vec in vectors:
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (dim,):
            raise ValidationError(
                f"embedding for {tweet_id!r} has shape {vec.shape}, expected ({dim},)"
            )
        lines.append(
            json.dumps({"tweet_id": tweet_id, "vector": [float(v) for v in vec]})
        )
    return "\n".join(lines) + "\n"


def load_embeddings(path) -> tuple[dict[str, np.ndarray], int]:
    """Read an embedding file; returns (id -> vector, declared dimension)."""
    table: dict[str, np.ndarray] = {}
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(path, lineno, f"invalid JSON ({exc.msg})") from exc
            if dim is None:
                if "dim" not in obj:
                    raise ParseError(path, lineno, "first record must declare dim")
                dim = int(obj["dim"])
                continue
            try:
                tweet_id = str(obj["tweet_id"])
                vec = np.asarray(obj["vector"], dtype=np.float64)
            except (KeyError, ValueError) as exc:
                raise ParseError(path, lineno, f"bad embedding record: {exc}") from exc
            if vec.shape != (dim,):
                raise ParseError(
                    path, lineno, f"vector length {vec.shape[0]} != declared dim {dim}"
                )
            table[tweet_id] = vec
    if dim is None:
        raise ValidationError(f"embedding file {path} is empty")
    return table, dim


def hashed_embedding(text: str, dim: int, seed: int) -> np.ndarray:
    """Deterministic pseudo-embedding: SHA-256 stream over (seed, text),
    mapped to [-1, 1) and L2-normalized.  Platform-independent."""
    if dim < 1:
        raise ValidationError("embedding dim must be >= 1")
    base = f"{seed}:".encode("utf-8") + text.encode("utf-8")
    vals: list[int] = []
    block = 0
    while len(vals) < dim:
        digest = hashlib.sha256(base + b"|" + str(block).encode("ascii")).digest()
        for off in range(0, 32, 8):
            vals.append(int.from_bytes(digest[off:off + 8], "little"))
            if len(vals) == dim:
                break
        block += 1
    v = np.array(vals, dtype=np.float64) / float(2**63) - 1.0
    norm = math.sqrt(float(v @ v))
    return v / norm if norm > 0 else v
