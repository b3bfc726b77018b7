"""
smecast.evalharness
===================

Evaluation protocol for both halves of the system: stratified 5-fold
cross-validated balanced accuracy (with an ablation of the moving-average
trend features) for the delay classifier, and MAPE scenario backtests of
the cash-flow forecaster against a naive flat-mean baseline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Optional, Sequence

import numpy as np

from . import cashflow
from .cashflow import DateRange, ForecastRequest, _add_months, _month_start
from .classifier import Hyperparameters, predict, train
from .features import FEATURE_NAMES, TREND_FEATURE_NAMES, build_features
from .synthgen import SyntheticDataset, SyntheticUser
from .types import (
    GRACE_DAYS_DEFAULT,
    CustomerHistory,
    Invoice,
    PaymentLabel,
    group_by_customer,
    label_invoice,
)

REPORT_FORMAT_VERSION = 1

MAX_INVOICES_PER_CUSTOMER = 50

BASE_FEATURE_NAMES = tuple(
    name for name in FEATURE_NAMES if name not in TREND_FEATURE_NAMES
)


class UndefinedMetricError(ValueError):
    """Metric has no defined value on this input."""


class InvalidScenarioError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


def balanced_accuracy(
    labels: Sequence[PaymentLabel], predictions: Sequence[PaymentLabel]
) -> float:
    """(TPR + TNR) / 2 with 'delayed' as the positive class."""
    if len(labels) != len(predictions):
        raise ValueError("labels and predictions differ in length")
    pos = [p for l, p in zip(labels, predictions) if l is PaymentLabel.DELAYED]
    neg = [p for l, p in zip(labels, predictions) if l is PaymentLabel.ON_TIME]
    if not pos or not neg:
        raise UndefinedMetricError("both classes must be present in labels")
    tpr = sum(1 for p in pos if p is PaymentLabel.DELAYED) / len(pos)
    tnr = sum(1 for p in neg if p is PaymentLabel.ON_TIME) / len(neg)
    return (tpr + tnr) / 2.0


def mape(actual: Sequence[float], forecast: Sequence[float]) -> float:
    value, _ = mape_with_skips(actual, forecast)
    return value


def mape_with_skips(
    actual: Sequence[float], forecast: Sequence[float]
) -> tuple[float, int]:
    """Mean absolute percentage error over aligned (monthly) values.
    Periods with actual == 0 are skipped; returns (percent, skipped count)."""
    if len(actual) != len(forecast) or not actual:
        raise ValueError("series must be aligned and non-empty")
    errors = []
    skipped = 0
    for a, f in zip(actual, forecast):
        if a == 0:
            skipped += 1
            continue
        errors.append(abs(a - f) / abs(a))
    if not errors:
        raise UndefinedMetricError("all actual periods are zero")
    return 100.0 * float(np.mean(errors)), skipped


def filter_dataset(
    invoices: Sequence[Invoice], max_per_customer: int = MAX_INVOICES_PER_CUSTOMER
) -> list[Invoice]:
    """Keep each customer's earliest ``max_per_customer`` invoices."""
    kept = []
    for cid, history in group_by_customer(invoices).items():
        kept.extend(history.invoices[:max_per_customer])
    return kept


# ---------------------------------------------------------------------------
# Cross-validation with trend-feature ablation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrossValReport:
    fold_scores: tuple[float, ...]
    mean_score: float
    ablated_fold_scores: tuple[float, ...]
    ablated_mean_score: float
    insufficient: bool = False

    @property
    def ablation_delta(self) -> float:
        """Gain from the trend features: full minus ablated mean."""
        return self.mean_score - self.ablated_mean_score

    def to_dict(self) -> dict:
        return {
            "fold_scores": list(self.fold_scores),
            "mean_score": self.mean_score,
            "ablated_fold_scores": list(self.ablated_fold_scores),
            "ablated_mean_score": self.ablated_mean_score,
            "ablation_delta": self.ablation_delta,
            "insufficient": self.insufficient,
        }


def build_labeled_samples(
    invoices: Sequence[Invoice], grace_days: int = GRACE_DAYS_DEFAULT
):
    samples = []
    for cid, history in group_by_customer(invoices).items():
        for inv in history.invoices:
            if inv.paid:
                fv = build_features(history, inv, grace_days=grace_days)
                samples.append((fv, label_invoice(inv, grace_days)))
    return samples


def stratified_folds(
    labels: Sequence[PaymentLabel], n_folds: int, seed: int
) -> list[np.ndarray]:
    """Index arrays for seeded stratified folds."""
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    for cls in (PaymentLabel.ON_TIME, PaymentLabel.DELAYED):
        idx = np.array([i for i, l in enumerate(labels) if l is cls])
        rng.shuffle(idx)
        for pos, i in enumerate(idx):
            folds[pos % n_folds].append(int(i))
    return [np.array(sorted(f)) for f in folds]


def cross_validate(
    invoices: Sequence[Invoice],
    n_folds: int = 5,
    seed: int = 0,
    hyper: Hyperparameters = Hyperparameters(),
    kind: str = "svm_rbf",
    grace_days: int = GRACE_DAYS_DEFAULT,
) -> CrossValReport:
    """Stratified k-fold balanced accuracy, reported both with the full
    feature set and with the moving-average trend features ablated.
    Random folds are safe: feature construction never looks ahead of an
    invoice's issue date."""
    samples = build_labeled_samples(invoices, grace_days)
    labels = [label for _, label in samples]
    n_pos = sum(1 for l in labels if l is PaymentLabel.DELAYED)
    n_neg = len(labels) - n_pos
    if min(n_pos, n_neg) < n_folds:
        return CrossValReport((), 0.0, (), 0.0, insufficient=True)

    folds = stratified_folds(labels, n_folds, seed)
    scores = {True: [], False: []}
    for fold_idx, test_idx in enumerate(folds):
        test_set = set(test_idx.tolist())
        train_samples = [s for i, s in enumerate(samples) if i not in test_set]
        test_samples = [samples[i] for i in sorted(test_set)]
        for full in (True, False):
            names = FEATURE_NAMES if full else BASE_FEATURE_NAMES
            model = train(
                train_samples,
                hyper=hyper,
                seed=seed + fold_idx,
                kind=kind,
                feature_names=names,
            )
            preds = [predict(model, fv).label for fv, _ in test_samples]
            scores[full].append(
                balanced_accuracy([l for _, l in test_samples], preds)
            )
    return CrossValReport(
        fold_scores=tuple(scores[True]),
        mean_score=float(np.mean(scores[True])),
        ablated_fold_scores=tuple(scores[False]),
        ablated_mean_score=float(np.mean(scores[False])),
    )


def trending_ablation_invoices(
    seed: int, customers_per_cell: int = 20, noise_std: float = 1.5
) -> list[Invoice]:
    """Trending-customer mixture for the ablation study: payment-delay
    baselines 0..20 days crossed with deteriorating/improving slopes (+-2
    days per invoice). Cumulative history features are ambiguous here; the
    moving-average features reveal each customer's direction."""
    from .synthgen import generate_trending_customers

    invoices: list[Invoice] = []
    cell = 0
    for base in (0, 5, 10, 15, 20):
        for slope in (+2.0, -2.0):
            for history in generate_trending_customers(
                customers_per_cell,
                slope,
                seed * 1000 + cell,
                n_invoices=12,
                base_delay=float(base),
                noise_std=noise_std,
            ):
                invoices.extend(history.invoices)
            cell += 1
    return invoices


# ---------------------------------------------------------------------------
# MAPE scenario backtests
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    name: str
    train_months: int
    predict_months: int

    def __post_init__(self) -> None:
        if self.train_months < 1 or self.predict_months < 1:
            raise InvalidScenarioError("scenario months must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "Scenario":
        try:
            train_m, predict_m = (int(part) for part in text.split("/"))
        except ValueError as exc:
            raise InvalidScenarioError(f"bad scenario {text!r}") from exc
        return cls(name=text, train_months=train_m, predict_months=predict_m)


def realized_monthly_net(user: SyntheticUser, window: DateRange) -> dict[date, int]:
    """Actual cash movements of a synthetic user by calendar month: hourly
    session earnings, flat fees at completion, recurring ticks, planned
    items (realized on the 15th), and customer invoice payments."""
    months = {m: 0 for m in cashflow.months_in_range(window)}

    def add(d: date, amount: float) -> None:
        if d in window:
            months[_month_start(d)] += int(round(amount))

    for project in user.ledger.hourly_projects:
        for t in project.tasks:
            add(t.session_date, t.hours * t.wage)
    for p in user.ledger.flat_projects:
        add(p.completion_date, p.fee)
    for item in user.ledger.recurring_items:
        for tick in cashflow.recurring_ticks(item, window):
            add(tick, item.amount)
    for p in user.ledger.planned_items:
        add(p.month.replace(day=15), p.amount)
    for inv in user.invoices:
        if inv.payment_date is not None:
            add(inv.payment_date, inv.amount)
    return months


def _forecast_monthly(
    user: SyntheticUser, split: date, horizon: DateRange, train_window: DateRange
) -> dict[date, int]:
    history = tuple(
        inv
        for inv in user.invoices
        if inv.payment_date is not None and inv.payment_date < split
    )
    req = ForecastRequest(
        ledger=user.ledger,
        horizon=horizon,
        history_window=train_window,
        history=history,
    )
    result = cashflow.forecast(req)
    months = {m: 0 for m in cashflow.months_in_range(horizon)}
    for e in result.aggregate.entries:
        months[_month_start(e.date)] += e.amount
    return months


def _naive_monthly(
    user: SyntheticUser, train_window: DateRange, horizon: DateRange
) -> dict[date, int]:
    actual_train = realized_monthly_net(user, train_window)
    n_days = (train_window.end - train_window.start).days + 1
    daily = sum(actual_train.values()) / n_days
    months = {}
    for m in cashflow.months_in_range(horizon):
        lo = max(m, horizon.start)
        hi = min(_add_months(m, 1) - timedelta(days=1), horizon.end)
        months[m] = int(round(daily * ((hi - lo).days + 1)))
    return months


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    method: str
    per_user_mape: tuple[float, ...]
    median_mape: float
    pooled_mape: float

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.name,
            "method": self.method,
            "per_user_mape": list(self.per_user_mape),
            "median_mape": self.median_mape,
            "pooled_mape": self.pooled_mape,
        }


def run_scenario(
    dataset: SyntheticDataset, scenario: Scenario, method: str = "our_method"
) -> ScenarioResult:
    """Backtest one train/predict split across every user of the dataset.
    Reports per-user MAPE (median) and a pooled MAPE over all user-months."""
    if method not in ("our_method", "naive_mean"):
        raise ValueError(f"unknown method {method!r}")
    if not dataset.users:
        raise InvalidScenarioError("empty dataset")
    start = min(
        min(
            (t.session_date for p in u.ledger.hourly_projects for t in p.tasks),
            default=date.max,
        )
        for u in dataset.users
    )
    if start == date.max:
        start = date(2023, 1, 2)
    data_start = _month_start(start)
    split = _add_months(data_start, scenario.train_months)
    train_window = DateRange(data_start, split - timedelta(days=1))
    horizon = DateRange(
        split, _add_months(split, scenario.predict_months) - timedelta(days=1)
    )

    per_user = []
    pooled_actual: list[float] = []
    pooled_forecast: list[float] = []
    for user in dataset.users:
        actual = realized_monthly_net(user, horizon)
        if method == "our_method":
            predicted = _forecast_monthly(user, split, horizon, train_window)
        else:
            predicted = _naive_monthly(user, train_window, horizon)
        months = sorted(actual)
        a = [float(actual[m]) for m in months]
        f = [float(predicted.get(m, 0)) for m in months]
        pooled_actual.extend(a)
        pooled_forecast.extend(f)
        try:
            per_user.append(mape(a, f))
        except UndefinedMetricError:
            continue
    if not per_user:
        raise UndefinedMetricError("no user had non-zero actuals")
    return ScenarioResult(
        scenario=scenario,
        method=method,
        per_user_mape=tuple(per_user),
        median_mape=float(np.median(per_user)),
        pooled_mape=mape(pooled_actual, pooled_forecast),
    )


# ---------------------------------------------------------------------------
# Report assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EvalReport:
    cross_validation: Optional[CrossValReport]
    scenarios: tuple[ScenarioResult, ...]
    dataset_hash: str
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format_version": REPORT_FORMAT_VERSION,
            "cross_validation": (
                self.cross_validation.to_dict() if self.cross_validation else None
            ),
            "scenarios": [s.to_dict() for s in self.scenarios],
            "dataset_hash": self.dataset_hash,
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def evaluate(
    dataset: SyntheticDataset,
    scenarios: Sequence[Scenario],
    seed: int = 0,
    max_cv_invoices: int = 2000,
) -> EvalReport:
    """Full harness: 5-fold CV with ablation on the pooled (filtered)
    invoices plus every requested MAPE scenario for both methods."""
    invoices = filter_dataset([inv for u in dataset.users for inv in u.invoices])
    cv = cross_validate(invoices[:max_cv_invoices], seed=seed)
    results = []
    for scenario in scenarios:
        for method in ("our_method", "naive_mean"):
            results.append(run_scenario(dataset, scenario, method))
    return EvalReport(
        cross_validation=cv,
        scenarios=tuple(results),
        dataset_hash=dataset.dataset_hash(),
        config={"seed": seed, "scenarios": [s.name for s in scenarios]},
    )
