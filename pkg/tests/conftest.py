from __future__ import annotations

from datetime import date, timedelta

import pytest

from smecast.features import FEATURE_NAMES, FeatureVector
from smecast.types import CustomerHistory, Invoice

BASE = date(2023, 1, 2)  # a Monday


def make_invoice(
    n: int,
    customer_id: str = "C1",
    amount: int = 10_000,
    issue_offset: int = 0,
    term_days: int = 14,
    delay: int | None = 0,
    inv_id: str | None = None,
) -> Invoice:
    """Invoice ``n`` for a customer; delay=None leaves it unpaid."""
    issue = BASE + timedelta(days=issue_offset)
    due = issue + timedelta(days=term_days)
    payment = None if delay is None else due + timedelta(days=delay)
    if payment is not None and payment < issue:
        payment = issue
    return Invoice(
        id=inv_id or f"{customer_id}-I{n:03d}",
        customer_id=customer_id,
        amount=amount,
        issue_date=issue,
        due_date=due,
        payment_date=payment,
    )


def history_with_delays(
    delays: list[int | None], customer_id: str = "C1", spacing: int = 30
) -> CustomerHistory:
    """One invoice per delay, spaced so each payment lands before the next
    issue date (prior payments are known at later issue dates)."""
    invoices = [
        make_invoice(i, customer_id, issue_offset=i * spacing, delay=d)
        for i, d in enumerate(delays)
    ]
    return CustomerHistory.from_invoices(customer_id, invoices)


def make_fv(**overrides) -> FeatureVector:
    values = dict.fromkeys(FEATURE_NAMES, 0.0)
    values["sma"] = 7.0
    values.update(overrides)
    return FeatureVector(**values)


@pytest.fixture
def base_date() -> date:
    return BASE


_criterion_lines: list[str] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Collect one PASS/FAIL/SKIP line per acceptance criterion."""
    outcome = yield
    report = outcome.get_result()
    criterion = getattr(item.function, "criterion", None)
    if criterion is None or report.when != "call":
        return
    status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(
        report.outcome, report.outcome.upper()
    )
    _criterion_lines.append(f"[{status}] {criterion}")


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in _criterion_lines:
        terminalreporter.write_line(line)
