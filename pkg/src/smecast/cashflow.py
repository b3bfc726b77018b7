"""
smecast.cashflow
================

Decomposed cash-flow forecasting from four specialized sub-forecasters
(hourly project work, non-recurring income/expenses, flat-rate projects,
recurring items), optionally adjusting open-invoice timing with payment
delay predictions. Missing ledger categories degrade gracefully to empty
sub-series; the aggregate always equals the per-source decomposition.
"""

from __future__ import annotations

import calendar
from dataclasses import dataclass, field
from datetime import date, timedelta
from typing import Optional, Sequence

from .classifier import DelayPrediction, TrainedModel, predict
from .features import build_features
from .types import (
    GRACE_DAYS_DEFAULT,
    CashFlowEntry,
    CashFlowSeries,
    CustomerHistory,
    Invoice,
    PaymentLabel,
    PlannedItem,
    ProjectLedger,
    RecurrencePeriod,
    RecurringItem,
    group_by_customer,
)


class EmptyWorkingHistoryError(ValueError):
    """Hourly tasks exist but the history window has no working days."""


def round_minor(value: float) -> int:
    """Half-even rounding of a float amount to integer minor units."""
    return int(round(value))


@dataclass(frozen=True)
class DateRange:
    """Inclusive calendar date range."""

    start: date
    end: date

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError("range end before start")

    def __contains__(self, d: date) -> bool:
        return self.start <= d <= self.end

    def days(self):
        d = self.start
        while d <= self.end:
            yield d
            d += timedelta(days=1)


def is_working_day(d: date) -> bool:
    # Monday-Friday; no holiday calendar.
    return d.weekday() < 5


def working_days(window: DateRange) -> list[date]:
    return [d for d in window.days() if is_working_day(d)]


def _month_start(d: date) -> date:
    return d.replace(day=1)


def _add_months(d: date, months: int) -> date:
    total = d.year * 12 + (d.month - 1) + months
    year, month = divmod(total, 12)
    day = min(d.day, calendar.monthrange(year, month + 1)[1])
    return date(year, month + 1, day)


def months_in_range(window: DateRange) -> list[date]:
    """First days of every calendar month intersecting the range."""
    out = []
    m = _month_start(window.start)
    while m <= window.end:
        out.append(m)
        m = _add_months(m, 1)
    return out


# ---------------------------------------------------------------------------
# Sub-forecasters
# ---------------------------------------------------------------------------


def forecast_hourly(
    ledger: ProjectLedger, history_window: DateRange, horizon: DateRange
) -> CashFlowSeries:
    """Daily rate from historical work sessions, assigned to every working
    day of the horizon: rate = sum over tasks of (hours / working days in
    history) * wage."""
    tasks = [
        t
        for p in ledger.hourly_projects
        for t in p.tasks
        if t.session_date in history_window
    ]
    if not tasks:
        return CashFlowSeries()
    d_w = len(working_days(history_window))
    if d_w == 0:
        raise EmptyWorkingHistoryError(
            "hourly tasks present but history window has no working days"
        )
    rate = sum(t.hours / d_w * t.wage for t in tasks)
    amount = round_minor(rate)
    entries = tuple(
        CashFlowEntry(date=d, amount=amount, source="hourly")
        for d in working_days(horizon)
    )
    return CashFlowSeries(entries)


def mean_monthly_nonrecurring(
    history: Sequence[Invoice], horizon_start: date, months: int = 6
) -> float:
    """Mean monthly net of paid non-recurring invoices over the calendar
    months preceding the horizon. Months with no activity count as zero;
    with fewer months of history than requested, divide by the months
    actually available (minimum 1). Cash is dated by payment date."""
    window_months = [
        _add_months(_month_start(horizon_start), -i) for i in range(months, 0, -1)
    ]
    paid = [inv for inv in history if inv.payment_date is not None]
    if not paid:
        return 0.0
    earliest = _month_start(min(inv.payment_date for inv in paid))  # type: ignore[type-var]
    available = [m for m in window_months if m >= earliest]
    n_avail = max(len(available), 1)
    window_lo = window_months[0]
    window_hi = _add_months(window_months[-1], 1)
    total = sum(
        inv.amount
        for inv in paid
        if window_lo <= inv.payment_date < window_hi  # type: ignore[operator]
    )
    return total / n_avail


def forecast_nonrecurring(
    history: Sequence[Invoice],
    planned: Sequence[PlannedItem],
    horizon: DateRange,
) -> CashFlowSeries:
    """Conservative monthly forecast of irregular income/expenses: with
    positive historical mean i and positive planned income i_k for a month,
    predict max(i, i_k) rather than the sum; otherwise i + i_k. One entry
    per horizon month, placed on the 15th (clamped into the horizon)."""
    i = mean_monthly_nonrecurring(history, horizon.start)
    entries = []
    for m in months_in_range(horizon):
        i_k = float(sum(p.amount for p in planned if p.month == m))
        if i > 0 and i_k > 0:
            cf = max(i, i_k)
        else:
            cf = i + i_k
        amount = round_minor(cf)
        if amount == 0:
            continue
        placement = m.replace(day=15)
        placement = max(min(placement, horizon.end), horizon.start)
        entries.append(
            CashFlowEntry(date=placement, amount=amount, source="nonrecurring")
        )
    return CashFlowSeries(tuple(entries))


def forecast_flatrate(ledger: ProjectLedger, horizon: DateRange) -> CashFlowSeries:
    """Fixed fees land on project completion dates inside the horizon."""
    entries = tuple(
        CashFlowEntry(
            date=p.completion_date, amount=p.fee, source="flatrate", origin_id=p.id
        )
        for p in ledger.flat_projects
        if p.completion_date in horizon
    )
    return CashFlowSeries(entries)


def recurring_ticks(item: RecurringItem, horizon: DateRange) -> list[date]:
    """Schedule dates for one recurring item inside the horizon. Monthly
    items keep the anchor's day-of-month with end-of-month clamping."""
    last = horizon.end if item.end_date is None else min(item.end_date, horizon.end)
    ticks: list[date] = []
    k = 0
    while True:
        if item.period is RecurrencePeriod.WEEKLY:
            tick = item.anchor_date + timedelta(weeks=k)
        else:
            tick = _add_months(item.anchor_date, k)
        if tick > last:
            break
        if tick >= horizon.start:
            ticks.append(tick)
        k += 1
    return ticks


def forecast_recurring(ledger: ProjectLedger, horizon: DateRange) -> CashFlowSeries:
    entries = tuple(
        CashFlowEntry(date=tick, amount=item.amount, source="recurring", origin_id=item.id)
        for item in ledger.recurring_items
        for tick in recurring_ticks(item, horizon)
    )
    return CashFlowSeries(entries)


# ---------------------------------------------------------------------------
# Open invoices and AR integration
# ---------------------------------------------------------------------------


def place_open_invoices(
    open_invoices: Sequence[Invoice], horizon: DateRange
) -> CashFlowSeries:
    """Naive placement: each open invoice pays on its due date."""
    entries = tuple(
        CashFlowEntry(
            date=inv.due_date, amount=inv.amount, source="nonrecurring", origin_id=inv.id
        )
        for inv in open_invoices
        if inv.due_date in horizon
    )
    return CashFlowSeries(entries)


def integrate_ar(
    open_invoices: Sequence[Invoice],
    model: TrainedModel,
    horizon: DateRange,
    history: Sequence[Invoice] = (),
    grace_days: int = GRACE_DAYS_DEFAULT,
) -> tuple[CashFlowSeries, list[DelayPrediction], bool]:
    """Shift open-invoice timing by predicted payment delays.

    On-time predictions keep the due date; delayed ones move to
    due_date + expected_delay_days and are reported as at-risk (even when
    the shifted date falls outside the horizon). A degenerate model places
    everything at the due date and sets the warning flag.
    Returns (series, at_risk, degenerate_warning).
    """
    if model.degenerate is not None:
        return place_open_invoices(open_invoices, horizon), [], True

    histories = group_by_customer(list(history) + list(open_invoices))
    entries = []
    at_risk: list[DelayPrediction] = []
    for inv in open_invoices:
        fv = build_features(histories[inv.customer_id], inv, grace_days=grace_days)
        pred = predict(model, fv, invoice_id=inv.id)
        if pred.label is PaymentLabel.DELAYED:
            pay_date = inv.due_date + timedelta(days=pred.expected_delay_days)
            at_risk.append(pred)
        else:
            pay_date = inv.due_date
        if pay_date in horizon:
            entries.append(
                CashFlowEntry(
                    date=pay_date,
                    amount=inv.amount,
                    source="nonrecurring",
                    origin_id=inv.id,
                )
            )
    return CashFlowSeries(tuple(entries)), at_risk, False


# ---------------------------------------------------------------------------
# Aggregation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ForecastRequest:
    ledger: ProjectLedger
    horizon: DateRange
    history_window: DateRange
    open_invoices: tuple[Invoice, ...] = ()
    history: tuple[Invoice, ...] = ()  # paid invoices
    integrate_ar: bool = False
    grace_days: int = GRACE_DAYS_DEFAULT

    def __post_init__(self) -> None:
        if self.horizon.start <= self.history_window.end:
            raise ValueError("horizon must start after the history window ends")


@dataclass(frozen=True)
class ForecastResult:
    aggregate: CashFlowSeries
    per_module: dict[str, CashFlowSeries]
    at_risk_invoices: tuple[DelayPrediction, ...]
    insights: tuple[str, ...]
    warnings: tuple[str, ...] = ()


def _merge(series: Sequence[CashFlowSeries]) -> CashFlowSeries:
    entries = tuple(e for s in series for e in s.entries)
    return CashFlowSeries(entries).sorted()


def _build_insights(
    per_module: dict[str, CashFlowSeries],
    at_risk: Sequence[DelayPrediction],
    open_invoices: Sequence[Invoice],
) -> list[str]:
    insights = []
    income = {
        src: sum(e.amount for e in s.entries if e.amount > 0)
        for src, s in per_module.items()
    }
    total_income = sum(income.values())
    if total_income > 0:
        top_src, top_amount = max(income.items(), key=lambda kv: (kv[1], kv[0]))
        insights.append(
            f"{top_src} work drives {100.0 * top_amount / total_income:.0f}% "
            "of forecast income"
        )
    by_customer: dict[str, int] = {}
    invoice_customers = {inv.id: inv.customer_id for inv in open_invoices}
    for pred in at_risk:
        cid = invoice_customers.get(pred.invoice_id, "?")
        by_customer[cid] = by_customer.get(cid, 0) + 1
    for cid in sorted(by_customer):
        n = by_customer[cid]
        insights.append(
            f"customer {cid} has {n} at-risk invoice{'s' if n != 1 else ''}"
        )
    return insights


def forecast(
    req: ForecastRequest, model: Optional[TrainedModel] = None
) -> ForecastResult:
    """Run all four sub-forecasters and merge. Open invoices are placed at
    their due dates unless AR integration is requested with a usable model,
    in which case their timing follows the delay predictions."""
    hourly = forecast_hourly(req.ledger, req.history_window, req.horizon)
    nonrec = forecast_nonrecurring(
        req.history, req.ledger.planned_items, req.horizon
    )
    flat = forecast_flatrate(req.ledger, req.horizon)
    recurring = forecast_recurring(req.ledger, req.horizon)

    warnings: list[str] = []
    at_risk: list[DelayPrediction] = []
    if req.integrate_ar and model is not None:
        open_series, at_risk, degenerate = integrate_ar(
            req.open_invoices, model, req.horizon, req.history, req.grace_days
        )
        if degenerate:
            warnings.append(
                "delay model is degenerate; open invoices placed at due dates"
            )
    else:
        open_series = place_open_invoices(req.open_invoices, req.horizon)

    per_module = {
        "hourly": hourly.sorted(),
        "nonrecurring": _merge([nonrec, open_series]),
        "flatrate": flat.sorted(),
        "recurring": recurring.sorted(),
    }
    aggregate = _merge(list(per_module.values()))
    insights = _build_insights(per_module, at_risk, req.open_invoices)
    return ForecastResult(
        aggregate=aggregate,
        per_module=per_module,
        at_risk_invoices=tuple(at_risk),
        insights=tuple(insights),
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------


def series_to_list(series: CashFlowSeries) -> list[dict]:
    return [
        {
            "date": e.date.isoformat(),
            "amount": e.amount,
            "source": e.source,
            "origin_id": e.origin_id,
        }
        for e in series.entries
    ]


def result_to_dict(result: ForecastResult) -> dict:
    return {
        "aggregate": series_to_list(result.aggregate),
        "per_module": {
            src: series_to_list(s) for src, s in result.per_module.items()
        },
        "at_risk_invoices": [p.to_dict() for p in result.at_risk_invoices],
        "insights": list(result.insights),
        "warnings": list(result.warnings),
    }
