"""
smecast.types
=============

Domain model shared by every other module: invoices, per-customer payment
histories, the project ledger feeding the cash-flow forecaster, and the
dated cash-flow series the forecaster emits.

Conventions
-----------
* Money is stored in integer minor currency units (cents). Positive amounts
  are income, negative are expenses. Formula arithmetic happens in floats;
  results are rounded half-even back to minor units when a series is emitted.
* Dates are timezone-free ``datetime.date`` values.
* All types are immutable after construction and safe to share across
  concurrent readers.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from typing import Iterable, Optional, Sequence

GRACE_DAYS_DEFAULT = 7

INVOICE_CSV_COLUMNS = [
    "invoice_id",
    "customer_id",
    "amount",
    "issue_date",
    "due_date",
    "payment_date",
]


class PaymentLabel(str, Enum):
    ON_TIME = "on_time"
    DELAYED = "delayed"


class UnlabelableInvoiceError(ValueError):
    """Raised when labeling is requested for an unpaid invoice."""


@dataclass(frozen=True)
class Invoice:
    """A single receivable (or payable, when amount < 0)."""

    id: str
    customer_id: str
    amount: int  # minor currency units, != 0
    issue_date: date
    due_date: date
    payment_date: Optional[date] = None

    def __post_init__(self) -> None:
        if self.amount == 0:
            raise ValueError("invoice amount must be non-zero")
        if self.due_date < self.issue_date:
            raise ValueError("due_date before issue_date")
        if self.payment_date is not None and self.payment_date < self.issue_date:
            raise ValueError("payment_date before issue_date")

    @property
    def paid(self) -> bool:
        return self.payment_date is not None

    @property
    def delay_days(self) -> Optional[int]:
        """payment_date - due_date in days; None while unpaid. May be negative."""
        if self.payment_date is None:
            return None
        return (self.payment_date - self.due_date).days

    @property
    def payment_term_days(self) -> int:
        return (self.due_date - self.issue_date).days


def label_invoice(inv: Invoice, grace_days: int = GRACE_DAYS_DEFAULT) -> PaymentLabel:
    """Binary payment label: delayed iff paid strictly more than ``grace_days``
    past the due date. Early payment is on-time."""
    if grace_days < 0:
        raise ValueError("grace_days must be >= 0")
    delay = inv.delay_days
    if delay is None:
        raise UnlabelableInvoiceError(f"invoice {inv.id} is unpaid (unlabelable)")
    return PaymentLabel.DELAYED if delay > grace_days else PaymentLabel.ON_TIME


def _invoice_sort_key(inv: Invoice):
    # Equal issue dates are broken lexicographically by id so feature
    # computation is deterministic regardless of input order.
    return (inv.issue_date, inv.id)


@dataclass(frozen=True)
class CustomerHistory:
    """One customer's invoices, strictly ordered by (issue_date, id)."""

    customer_id: str
    invoices: tuple[Invoice, ...]

    @classmethod
    def from_invoices(cls, customer_id: str, invoices: Iterable[Invoice]) -> "CustomerHistory":
        ordered = tuple(sorted(invoices, key=_invoice_sort_key))
        for inv in ordered:
            if inv.customer_id != customer_id:
                raise ValueError(f"invoice {inv.id} belongs to {inv.customer_id}, not {customer_id}")
        return cls(customer_id=customer_id, invoices=ordered)

    @property
    def paid_invoices(self) -> tuple[Invoice, ...]:
        return tuple(inv for inv in self.invoices if inv.paid)


def group_by_customer(invoices: Iterable[Invoice]) -> dict[str, CustomerHistory]:
    buckets: dict[str, list[Invoice]] = {}
    for inv in invoices:
        buckets.setdefault(inv.customer_id, []).append(inv)
    return {
        cid: CustomerHistory.from_invoices(cid, invs) for cid, invs in sorted(buckets.items())
    }


# ---------------------------------------------------------------------------
# Project ledger
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HourlyTask:
    task_id: str
    hours: float  # >= 0
    wage: int  # minor units per hour, >= 0
    session_date: date

    def __post_init__(self) -> None:
        if self.hours < 0:
            raise ValueError("hours must be >= 0")
        if self.wage < 0:
            raise ValueError("wage must be >= 0")


@dataclass(frozen=True)
class HourlyProject:
    id: str
    tasks: tuple[HourlyTask, ...] = ()


@dataclass(frozen=True)
class FlatRateProject:
    id: str
    fee: int  # minor units, > 0
    completion_date: date

    def __post_init__(self) -> None:
        if self.fee <= 0:
            raise ValueError("flat-rate fee must be positive")


class RecurrencePeriod(str, Enum):
    WEEKLY = "weekly"
    MONTHLY = "monthly"


@dataclass(frozen=True)
class RecurringItem:
    id: str
    amount: int  # signed minor units, != 0
    period: RecurrencePeriod
    anchor_date: date
    end_date: Optional[date] = None

    def __post_init__(self) -> None:
        if self.amount == 0:
            raise ValueError("recurring amount must be non-zero")
        if self.end_date is not None and self.end_date < self.anchor_date:
            raise ValueError("end_date before anchor_date")


@dataclass(frozen=True)
class PlannedItem:
    """A one-off income or expense planned for a calendar month."""

    id: str
    amount: int  # signed minor units, != 0
    month: date  # first day of the calendar month

    def __post_init__(self) -> None:
        if self.amount == 0:
            raise ValueError("planned amount must be non-zero")
        if self.month.day != 1:
            raise ValueError("month must be the first day of a calendar month")


@dataclass(frozen=True)
class ProjectLedger:
    """Everything the cash-flow forecaster knows about upcoming work.
    Any list may be empty; missing categories degrade gracefully."""

    hourly_projects: tuple[HourlyProject, ...] = ()
    flat_projects: tuple[FlatRateProject, ...] = ()
    recurring_items: tuple[RecurringItem, ...] = ()
    planned_items: tuple[PlannedItem, ...] = ()


# ---------------------------------------------------------------------------
# Cash-flow series
# ---------------------------------------------------------------------------

CASHFLOW_SOURCES = ("hourly", "nonrecurring", "flatrate", "recurring")


@dataclass(frozen=True)
class CashFlowEntry:
    date: date
    amount: int  # minor units, signed
    source: str  # one of CASHFLOW_SOURCES
    origin_id: Optional[str] = None

    def __post_init__(self) -> None:
        if self.source not in CASHFLOW_SOURCES:
            raise ValueError(f"unknown cash-flow source {self.source!r}")


@dataclass(frozen=True)
class CashFlowSeries:
    entries: tuple[CashFlowEntry, ...] = ()

    def total(self) -> int:
        return sum(e.amount for e in self.entries)

    def by_date(self) -> dict[date, int]:
        out: dict[date, int] = {}
        for e in self.entries:
            out[e.date] = out.get(e.date, 0) + e.amount
        return out

    def sorted(self) -> "CashFlowSeries":
        key = lambda e: (e.date, e.source, e.origin_id or "")
        return CashFlowSeries(tuple(sorted(self.entries, key=key)))


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RowError:
    row: int  # zero-based index into the input batch
    message: str


@dataclass(frozen=True)
class IngestResult:
    invoices: tuple[Invoice, ...]
    errors: tuple[RowError, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def _parse_date(value, field_name: str) -> date:
    if isinstance(value, date):
        return value
    try:
        return datetime.strptime(str(value).strip(), "%Y-%m-%d").date()
    except ValueError as exc:
        raise ValueError(f"malformed {field_name} {value!r}") from exc


def _parse_amount(value) -> int:
    try:
        amount = int(value)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"malformed amount {value!r}") from exc
    return amount


def ingest_invoices(records: Iterable[dict]) -> IngestResult:
    """Validate a batch of raw invoice records.

    Rows violating invariants are rejected with row-indexed diagnostics while
    the batch continues; an empty input yields an empty (successful) result.
    Accepts either the CSV header names (invoice_id, ...) or the Invoice
    field names (id, ...).
    """
    invoices: list[Invoice] = []
    errors: list[RowError] = []
    for idx, rec in enumerate(records):
        try:
            inv_id = rec.get("invoice_id", rec.get("id"))
            cust_id = rec.get("customer_id")
            if not inv_id or not cust_id:
                raise ValueError("missing invoice_id or customer_id")
            payment_raw = rec.get("payment_date")
            payment = (
                None
                if payment_raw in (None, "", "null")
                else _parse_date(payment_raw, "payment_date")
            )
            invoices.append(
                Invoice(
                    id=str(inv_id),
                    customer_id=str(cust_id),
                    amount=_parse_amount(rec.get("amount")),
                    issue_date=_parse_date(rec.get("issue_date"), "issue_date"),
                    due_date=_parse_date(rec.get("due_date"), "due_date"),
                    payment_date=payment,
                )
            )
        except ValueError as exc:
            errors.append(RowError(row=idx, message=str(exc)))
    return IngestResult(invoices=tuple(invoices), errors=tuple(errors))


def read_invoices_csv(text: str) -> IngestResult:
    reader = csv.DictReader(io.StringIO(text))
    return ingest_invoices(list(reader))


def write_invoices_csv(invoices: Sequence[Invoice]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(INVOICE_CSV_COLUMNS)
    for inv in invoices:
        writer.writerow(
            [
                inv.id,
                inv.customer_id,
                inv.amount,
                inv.issue_date.isoformat(),
                inv.due_date.isoformat(),
                inv.payment_date.isoformat() if inv.payment_date else "",
            ]
        )
    return out.getvalue()


def invoice_to_dict(inv: Invoice) -> dict:
    return {
        "invoice_id": inv.id,
        "customer_id": inv.customer_id,
        "amount": inv.amount,
        "issue_date": inv.issue_date.isoformat(),
        "due_date": inv.due_date.isoformat(),
        "payment_date": inv.payment_date.isoformat() if inv.payment_date else None,
    }


# ---------------------------------------------------------------------------
# Ledger JSON (top-level keys: hourly_projects, flat_projects,
# recurring_items, planned_items)
# ---------------------------------------------------------------------------


def ledger_to_dict(ledger: ProjectLedger) -> dict:
    return {
        "hourly_projects": [
            {
                "id": p.id,
                "tasks": [
                    {
                        "task_id": t.task_id,
                        "hours": t.hours,
                        "wage": t.wage,
                        "session_date": t.session_date.isoformat(),
                    }
                    for t in p.tasks
                ],
            }
            for p in ledger.hourly_projects
        ],
        "flat_projects": [
            {"id": p.id, "fee": p.fee, "completion_date": p.completion_date.isoformat()}
            for p in ledger.flat_projects
        ],
        "recurring_items": [
            {
                "id": r.id,
                "amount": r.amount,
                "period": r.period.value,
                "anchor_date": r.anchor_date.isoformat(),
                "end_date": r.end_date.isoformat() if r.end_date else None,
            }
            for r in ledger.recurring_items
        ],
        "planned_items": [
            {"id": p.id, "amount": p.amount, "month": p.month.strftime("%Y-%m")}
            for p in ledger.planned_items
        ],
    }


def ledger_from_dict(data: dict) -> ProjectLedger:
    hourly = tuple(
        HourlyProject(
            id=str(p["id"]),
            tasks=tuple(
                HourlyTask(
                    task_id=str(t["task_id"]),
                    hours=float(t["hours"]),
                    wage=int(t["wage"]),
                    session_date=_parse_date(t["session_date"], "session_date"),
                )
                for t in p.get("tasks", [])
            ),
        )
        for p in data.get("hourly_projects", [])
    )
    flat = tuple(
        FlatRateProject(
            id=str(p["id"]),
            fee=int(p["fee"]),
            completion_date=_parse_date(p["completion_date"], "completion_date"),
        )
        for p in data.get("flat_projects", [])
    )
    recurring = tuple(
        RecurringItem(
            id=str(r["id"]),
            amount=int(r["amount"]),
            period=RecurrencePeriod(r["period"]),
            anchor_date=_parse_date(r["anchor_date"], "anchor_date"),
            end_date=(
                _parse_date(r["end_date"], "end_date") if r.get("end_date") else None
            ),
        )
        for r in data.get("recurring_items", [])
    )
    planned = tuple(
        PlannedItem(
            id=str(p["id"]),
            amount=int(p["amount"]),
            month=datetime.strptime(str(p["month"]), "%Y-%m").date(),
        )
        for p in data.get("planned_items", [])
    )
    return ProjectLedger(
        hourly_projects=hourly,
        flat_projects=flat,
        recurring_items=recurring,
        planned_items=planned,
    )


def ledger_to_json(ledger: ProjectLedger) -> str:
    return json.dumps(ledger_to_dict(ledger), sort_keys=True, separators=(",", ":"))


def ledger_from_json(text: str) -> ProjectLedger:
    return ledger_from_dict(json.loads(text))
