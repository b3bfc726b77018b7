"""
smecast.classifier
==================

Per-business binary classifier for invoice payment delays. The primary
model is a soft-margin SVM whose dual is solved from scratch by sequential
minimal optimization (SMO); a distance-weighted kNN baseline is included
for evaluation. Training standardizes features and applies per-class box
constraints so the minority class is not drowned out.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .features import FEATURE_NAMES, FeatureVector, build_features
from .types import (
    GRACE_DAYS_DEFAULT,
    CustomerHistory,
    Invoice,
    PaymentLabel,
    group_by_customer,
    label_invoice,
)

MODEL_FORMAT_VERSION = 1

KKT_TOLERANCE = 1e-3
MAX_PASSES = 10_000

# ma_gradient thresholds (days) separating improving / stable / deteriorating
INSIGHT_GRADIENT_THRESHOLD = 1.0


class InsufficientDataError(ValueError):
    """Fewer than two labeled training samples."""


class Insight(str, Enum):
    IMPROVING = "improving"
    STABLE = "stable"
    DETERIORATING = "deteriorating"


@dataclass(frozen=True)
class Hyperparameters:
    C: float = 1.0
    gamma: float | str = "scale"  # rbf width; "scale" = 1/(n_features * var)
    k: int = 5  # kNN baseline neighbours

    def __post_init__(self) -> None:
        if self.C <= 0:
            raise ValueError("C must be positive")
        if isinstance(self.gamma, str):
            if self.gamma != "scale":
                raise ValueError("gamma must be positive or 'scale'")
        elif self.gamma <= 0:
            raise ValueError("gamma must be positive or 'scale'")
        if self.k < 1:
            raise ValueError("k must be >= 1")


@dataclass(frozen=True)
class DelayPrediction:
    invoice_id: str
    label: PaymentLabel
    score: float  # signed decision value, positive = delayed
    expected_delay_days: int  # 0 when on_time
    insight: Insight

    def to_dict(self) -> dict:
        return {
            "invoice_id": self.invoice_id,
            "label": self.label.value,
            "score": self.score,
            "expected_delay_days": self.expected_delay_days,
            "insight": self.insight.value,
        }


@dataclass(frozen=True)
class TrainedModel:
    kind: str  # svm_rbf | svm_linear | knn_baseline
    business_id: str
    hyper: Hyperparameters
    feature_names: tuple[str, ...]
    scaler_mean: tuple[float, ...]
    scaler_std: tuple[float, ...]
    # Support set (standardized). For kNN this is the full training set.
    support_vectors: tuple[tuple[float, ...], ...]
    dual_coef: tuple[float, ...]  # alpha_i * y_i; kNN stores y_i here
    bias: float
    gamma_value: float  # resolved numeric gamma (unused for linear/knn)
    degenerate: Optional[str] = None  # "majority_class:<label>" for one-class sets
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Kernels and the SMO solver
# ---------------------------------------------------------------------------


def _kernel_matrix(kind: str, X: np.ndarray, Z: np.ndarray, gamma: float) -> np.ndarray:
    if kind == "svm_linear":
        return X @ Z.T
    # rbf
    sq = (
        np.sum(X * X, axis=1)[:, None]
        + np.sum(Z * Z, axis=1)[None, :]
        - 2.0 * (X @ Z.T)
    )
    return np.exp(-gamma * np.maximum(sq, 0.0))


def dual_objective(alpha: np.ndarray, y: np.ndarray, K: np.ndarray) -> float:
    """W(alpha) = sum(alpha) - 1/2 * sum_ij alpha_i alpha_j y_i y_j K_ij."""
    ay = alpha * y
    return float(alpha.sum() - 0.5 * ay @ K @ ay)


def smo_solve(
    K: np.ndarray,
    y: np.ndarray,
    c_box: np.ndarray,
    tol: float = KKT_TOLERANCE,
    max_passes: int = MAX_PASSES,
    seed: int = 0,
) -> tuple[np.ndarray, float]:
    """Solve the soft-margin SVM dual by sequential minimal optimization.

    ``c_box`` holds the per-sample upper bound on alpha (class-weighted C).
    Deterministic given ``seed``: the second index is chosen by the usual
    max-|E_i - E_j| heuristic with a seeded shuffled fallback.
    Returns (alpha, bias).
    """
    n = len(y)
    alpha = np.zeros(n)
    b = 0.0
    rng = np.random.default_rng(seed)
    eps = 1e-12
    # error cache: E_i = f(x_i) - y_i, kept incrementally up to date
    errors = -y.astype(float).copy()

    def take_step(i: int, j: int) -> bool:
        nonlocal b, errors
        if i == j:
            return False
        if y[i] != y[j]:
            L = max(0.0, alpha[j] - alpha[i])
            H = min(c_box[j], c_box[i] + alpha[j] - alpha[i])
        else:
            L = max(0.0, alpha[i] + alpha[j] - c_box[i])
            H = min(c_box[j], alpha[i] + alpha[j])
        if H - L < eps:
            return False
        eta = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if eta <= eps:
            return False
        aj_new = alpha[j] + y[j] * (errors[i] - errors[j]) / eta
        aj_new = min(max(aj_new, L), H)
        if abs(aj_new - alpha[j]) < eps * (aj_new + alpha[j] + eps):
            return False
        ai_new = alpha[i] + y[i] * y[j] * (alpha[j] - aj_new)
        d_i = ai_new - alpha[i]
        d_j = aj_new - alpha[j]
        b1 = b - errors[i] - y[i] * d_i * K[i, i] - y[j] * d_j * K[i, j]
        b2 = b - errors[j] - y[i] * d_i * K[i, j] - y[j] * d_j * K[j, j]
        if 0.0 < ai_new < c_box[i]:
            b_new = b1
        elif 0.0 < aj_new < c_box[j]:
            b_new = b2
        else:
            b_new = (b1 + b2) / 2.0
        errors += y[i] * d_i * K[i, :] + y[j] * d_j * K[j, :] + (b_new - b)
        b = b_new
        alpha[i], alpha[j] = ai_new, aj_new
        return True

    passes = 0
    while passes < max_passes:
        passes += 1
        changed = 0
        for i in range(n):
            Ei = errors[i]
            violates = (y[i] * Ei < -tol and alpha[i] < c_box[i] - eps) or (
                y[i] * Ei > tol and alpha[i] > eps
            )
            if not violates:
                continue
            # second-choice heuristic: maximize |E_i - E_j|
            j = int(np.argmax(np.abs(errors - Ei)))
            if take_step(i, j):
                changed += 1
                continue
            for j in rng.permutation(n):
                if take_step(i, int(j)):
                    changed += 1
                    break
        if changed == 0:
            break
    return alpha, b


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------


def _label_to_y(label: PaymentLabel) -> float:
    return 1.0 if label is PaymentLabel.DELAYED else -1.0


def _standardize(X: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std = np.where(std > 0, std, 1.0)  # zero-variance features pass through
    return (X - mean) / std, mean, std


def train(
    samples: Sequence[tuple[FeatureVector, PaymentLabel]],
    hyper: Hyperparameters = Hyperparameters(),
    seed: int = 0,
    kind: str = "svm_rbf",
    business_id: str = "",
    feature_names: Sequence[str] = FEATURE_NAMES,
    extra_metadata: Optional[dict] = None,
) -> TrainedModel:
    """Train a delay classifier on labeled feature vectors.

    A single-class training set produces a degenerate constant predictor
    (flagged, not an exception); fewer than two samples is an error.
    """
    if kind not in ("svm_rbf", "svm_linear", "knn_baseline"):
        raise ValueError(f"unknown model kind {kind!r}")
    if len(samples) < 2:
        raise InsufficientDataError("need at least 2 training samples")

    feature_names = tuple(feature_names)
    X = np.array([fv.as_list(feature_names) for fv, _ in samples], dtype=float)
    if not np.isfinite(X).all():
        raise ValueError("non-finite feature values")
    y = np.array([_label_to_y(label) for _, label in samples])

    n_delayed = int((y > 0).sum())
    n_on_time = int((y < 0).sum())
    metadata = {
        "n_samples": len(samples),
        "class_counts": {"delayed": n_delayed, "on_time": n_on_time},
        "seed": seed,
    }
    if extra_metadata:
        metadata.update(extra_metadata)

    Xs, mean, std = _standardize(X)

    if n_delayed == 0 or n_on_time == 0:
        majority = "delayed" if n_on_time == 0 else "on_time"
        return TrainedModel(
            kind=kind,
            business_id=business_id,
            hyper=hyper,
            feature_names=feature_names,
            scaler_mean=tuple(mean.tolist()),
            scaler_std=tuple(std.tolist()),
            support_vectors=(),
            dual_coef=(),
            bias=0.0,
            gamma_value=0.0,
            degenerate=f"majority_class:{majority}",
            metadata=metadata,
        )

    if hyper.gamma == "scale":
        var = float(Xs.var())
        gamma = 1.0 / (Xs.shape[1] * var) if var > 0 else 1.0
    else:
        gamma = float(hyper.gamma)

    if kind == "knn_baseline":
        return TrainedModel(
            kind=kind,
            business_id=business_id,
            hyper=hyper,
            feature_names=feature_names,
            scaler_mean=tuple(mean.tolist()),
            scaler_std=tuple(std.tolist()),
            support_vectors=tuple(tuple(row) for row in Xs.tolist()),
            dual_coef=tuple(y.tolist()),
            bias=0.0,
            gamma_value=gamma,
            metadata=metadata,
        )

    # class-weighted box constraints: C_class = C * n / (2 * n_class)
    n = len(y)
    c_box = np.where(
        y > 0,
        hyper.C * n / (2.0 * n_delayed),
        hyper.C * n / (2.0 * n_on_time),
    )
    K = _kernel_matrix(kind, Xs, Xs, gamma)
    alpha, bias = smo_solve(K, y, c_box, seed=seed)

    sv_mask = alpha > 1e-10
    return TrainedModel(
        kind=kind,
        business_id=business_id,
        hyper=hyper,
        feature_names=feature_names,
        scaler_mean=tuple(mean.tolist()),
        scaler_std=tuple(std.tolist()),
        support_vectors=tuple(tuple(row) for row in Xs[sv_mask].tolist()),
        dual_coef=tuple((alpha[sv_mask] * y[sv_mask]).tolist()),
        bias=float(bias),
        gamma_value=gamma,
        metadata=metadata,
    )


def train_for_business(
    invoices: Sequence[Invoice],
    business_id: str,
    hyper: Hyperparameters = Hyperparameters(),
    seed: int = 0,
    kind: str = "svm_rbf",
    grace_days: int = GRACE_DAYS_DEFAULT,
    feature_names: Sequence[str] = FEATURE_NAMES,
) -> TrainedModel:
    """Build labeled samples from one business's invoices (paid invoices
    only; unpaid ones are counted but unlabelable) and train."""
    histories = group_by_customer(invoices)
    samples: list[tuple[FeatureVector, PaymentLabel]] = []
    unlabelable = 0
    for cid, history in histories.items():
        for inv in history.invoices:
            if not inv.paid:
                unlabelable += 1
                continue
            fv = build_features(history, inv, grace_days=grace_days)
            samples.append((fv, label_invoice(inv, grace_days)))
    if len(samples) < 2:
        raise InsufficientDataError(
            f"business {business_id}: only {len(samples)} labelable invoices"
        )
    return train(
        samples,
        hyper=hyper,
        seed=seed,
        kind=kind,
        business_id=business_id,
        feature_names=feature_names,
        extra_metadata={"unlabelable_invoices": unlabelable},
    )


# ---------------------------------------------------------------------------
# Prediction
# ---------------------------------------------------------------------------


def decision_function(model: TrainedModel, fv: FeatureVector) -> float:
    """Signed decision value; positive means delayed. Degenerate models
    return +/-1 for their constant class."""
    if model.degenerate is not None:
        return 1.0 if model.degenerate.endswith("delayed") else -1.0
    x = np.array(fv.as_list(model.feature_names), dtype=float)
    xs = (x - np.array(model.scaler_mean)) / np.array(model.scaler_std)
    sv = np.array(model.support_vectors, dtype=float)
    coef = np.array(model.dual_coef, dtype=float)
    if model.kind == "knn_baseline":
        dists = np.linalg.norm(sv - xs[None, :], axis=1)
        order = np.argsort(dists, kind="stable")[: model.hyper.k]
        return float(coef[order].mean())
    k = _kernel_matrix(model.kind, sv, xs[None, :], model.gamma_value)[:, 0]
    return float(coef @ k + model.bias)


def classify_insight(
    ma_gradient: float, threshold: float = INSIGHT_GRADIENT_THRESHOLD
) -> Insight:
    if ma_gradient > threshold:
        return Insight.DETERIORATING
    if ma_gradient < -threshold:
        return Insight.IMPROVING
    return Insight.STABLE


def predict(
    model: TrainedModel, fv: FeatureVector, invoice_id: str = ""
) -> DelayPrediction:
    """Classify one invoice's feature vector. When delayed, the expected
    delay magnitude falls back on the trend averages: round(max(fma, sma))."""
    score = decision_function(model, fv)
    label = PaymentLabel.DELAYED if score > 0 else PaymentLabel.ON_TIME
    expected = int(round(max(fv.fma, fv.sma))) if label is PaymentLabel.DELAYED else 0
    return DelayPrediction(
        invoice_id=invoice_id,
        label=label,
        score=score,
        expected_delay_days=expected,
        insight=classify_insight(fv.ma_gradient),
    )


# ---------------------------------------------------------------------------
# Serialization (versioned JSON; round-trips bit-identically)
# ---------------------------------------------------------------------------


def model_to_dict(model: TrainedModel) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "business_id": model.business_id,
        "hyper": {
            "C": model.hyper.C,
            "gamma": model.hyper.gamma,
            "k": model.hyper.k,
        },
        "feature_names": list(model.feature_names),
        "scaling": {
            "mean": list(model.scaler_mean),
            "std": list(model.scaler_std),
        },
        "support_vectors": [list(row) for row in model.support_vectors],
        "dual_coef": list(model.dual_coef),
        "bias": model.bias,
        "gamma_value": model.gamma_value,
        "degenerate": model.degenerate,
        "metadata": model.metadata,
    }


def model_to_json(model: TrainedModel) -> str:
    return json.dumps(model_to_dict(model), sort_keys=True, separators=(",", ":"))


def model_from_dict(data: dict) -> TrainedModel:
    if data.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format {data.get('format_version')!r}")
    hyper = data["hyper"]
    return TrainedModel(
        kind=data["kind"],
        business_id=data["business_id"],
        hyper=Hyperparameters(C=hyper["C"], gamma=hyper["gamma"], k=hyper["k"]),
        feature_names=tuple(data["feature_names"]),
        scaler_mean=tuple(data["scaling"]["mean"]),
        scaler_std=tuple(data["scaling"]["std"]),
        support_vectors=tuple(tuple(row) for row in data["support_vectors"]),
        dual_coef=tuple(data["dual_coef"]),
        bias=data["bias"],
        gamma_value=data["gamma_value"],
        degenerate=data.get("degenerate"),
        metadata=data.get("metadata", {}),
    )


def model_from_json(text: str) -> TrainedModel:
    return model_from_dict(json.loads(text))
