"""
smecast.features
================

Per-invoice feature vectors built from a customer's cooperation history,
strictly from information available before the target invoice's issue date
(no look-ahead). Includes the fast/slow moving-average trend features whose
ratio and gradient signal whether a customer's payment behavior is
improving or deteriorating.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from typing import Optional, Sequence

from .types import (
    GRACE_DAYS_DEFAULT,
    CustomerHistory,
    Invoice,
    _invoice_sort_key,
)

SMA_FLOOR_DAYS = 7.0

FEATURE_NAMES = (
    "amount",
    "payment_term_days",
    "late_ratio",
    "avg_delay_days",
    "outstanding_count",
    "paid_amount_total",
    "late_amount_total",
    "fma",
    "sma",
    "ma_ratio",
    "ma_gradient",
)

TREND_FEATURE_NAMES = ("fma", "sma", "ma_ratio", "ma_gradient")


@dataclass(frozen=True)
class FeatureVector:
    amount: float
    payment_term_days: float
    late_ratio: float
    avg_delay_days: float
    outstanding_count: float
    paid_amount_total: float
    late_amount_total: float
    fma: float
    sma: float
    ma_ratio: float
    ma_gradient: float

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in FEATURE_NAMES}

    def as_list(self, feature_names: Sequence[str] = FEATURE_NAMES) -> list[float]:
        return [float(getattr(self, name)) for name in feature_names]


def _prior_invoices(history: CustomerHistory, target: Invoice) -> list[Invoice]:
    """Invoices strictly before the target in the deterministic
    (issue_date, id) ordering; the target itself is excluded."""
    tkey = _invoice_sort_key(target)
    return [inv for inv in history.invoices if _invoice_sort_key(inv) < tkey]


def _paid_as_of(inv: Invoice, as_of: date) -> bool:
    # Point-in-time: an invoice counts as paid only once its payment date
    # has arrived.
    return inv.payment_date is not None and inv.payment_date <= as_of


def _prior_paid_delays(history: CustomerHistory, target: Invoice) -> list[int]:
    as_of = target.issue_date
    return [
        inv.delay_days  # type: ignore[misc]
        for inv in _prior_invoices(history, target)
        if _paid_as_of(inv, as_of)
    ]


def _fma(delays: Sequence[int]) -> float:
    if len(delays) >= 2:
        return (delays[-1] + delays[-2]) / 2.0
    return 0.0


def _sma(delays: Sequence[int]) -> float:
    if len(delays) >= 4:
        return max(sum(delays[-4:]) / 4.0, SMA_FLOOR_DAYS)
    return SMA_FLOOR_DAYS


def compute_fma(history: CustomerHistory, n: int) -> float:
    """Fast moving average of the customer's recent payment delays at
    invoice index ``n``: mean of the two most recent prior paid delays,
    0 when fewer than two exist."""
    target = history.invoices[n]
    return _fma(_prior_paid_delays(history, target))


def compute_sma(history: CustomerHistory, n: int) -> float:
    """Slow moving average at invoice index ``n``: mean of the last four
    prior paid delays, floored at 7 days; 7 when fewer than four exist."""
    target = history.invoices[n]
    return _sma(_prior_paid_delays(history, target))


def build_features(
    history: CustomerHistory,
    target: Invoice,
    grace_days: int = GRACE_DAYS_DEFAULT,
) -> FeatureVector:
    """Feature vector for ``target`` using only the customer's cooperation
    record prior to the target's issue date. A customer with no prior
    invoices yields the cold-start defaults (zeros, sma=7)."""
    if target.customer_id != history.customer_id:
        raise ValueError(
            f"invoice {target.id} belongs to {target.customer_id}, "
            f"not {history.customer_id}"
        )
    as_of = target.issue_date
    prior = _prior_invoices(history, target)
    paid = [inv for inv in prior if _paid_as_of(inv, as_of)]
    delays = [inv.delay_days for inv in paid]  # type: ignore[list-item]
    late = [inv for inv in paid if inv.delay_days > grace_days]  # type: ignore[operator]

    late_ratio = len(late) / len(paid) if paid else 0.0
    avg_delay = sum(delays) / len(delays) if delays else 0.0
    outstanding = sum(1 for inv in prior if not _paid_as_of(inv, as_of))

    fma = _fma(delays)
    sma = _sma(delays)

    # Gradient: first difference of FMA between this invoice and the
    # customer's previous invoice (0 when there is no previous invoice).
    if prior:
        prev = prior[-1]
        prev_delays = _prior_paid_delays(history, prev)
        gradient = fma - _fma(prev_delays)
    else:
        gradient = 0.0

    return FeatureVector(
        amount=float(target.amount),
        payment_term_days=float(target.payment_term_days),
        late_ratio=late_ratio,
        avg_delay_days=avg_delay,
        outstanding_count=float(outstanding),
        paid_amount_total=float(sum(inv.amount for inv in paid)),
        late_amount_total=float(sum(inv.amount for inv in late)),
        fma=fma,
        sma=sma,
        ma_ratio=fma / sma,
        ma_gradient=gradient,
    )
