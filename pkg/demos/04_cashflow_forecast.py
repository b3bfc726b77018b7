"""Run a full decomposed cash-flow forecast for a freelancer: hourly work,
a flat-fee project, recurring rent, a planned one-off purchase, and two
open invoices routed through the delay classifier."""

from datetime import date, timedelta

from smecast.cashflow import DateRange, ForecastRequest, forecast
from smecast.classifier import train_for_business
from smecast.types import (
    FlatRateProject,
    HourlyProject,
    HourlyTask,
    Invoice,
    PlannedItem,
    ProjectLedger,
    RecurrencePeriod,
    RecurringItem,
)


def paid(cust: str, n: int, delay: int) -> Invoice:
    issue = date(2023, 1, 2) + timedelta(days=40 * n)
    due = issue + timedelta(days=14)
    return Invoice(
        id=f"{cust}-{n:02d}", customer_id=cust, amount=70_000,
        issue_date=issue, due_date=due, payment_date=due + timedelta(days=delay),
    )


def main() -> None:
    window = DateRange(date(2023, 4, 1), date(2023, 6, 30))
    horizon = DateRange(date(2023, 7, 1), date(2023, 9, 30))

    tasks = tuple(
        HourlyTask(f"t{i}", hours=6.0, wage=5500, session_date=date(2023, 4, 3) + timedelta(days=7 * i))
        for i in range(12)
    )
    ledger = ProjectLedger(
        hourly_projects=(HourlyProject(id="consulting", tasks=tasks),),
        flat_projects=(FlatRateProject(id="website-redesign", fee=450_000, completion_date=date(2023, 8, 15)),),
        recurring_items=(
            RecurringItem(id="office-rent", amount=-90_000, period=RecurrencePeriod.MONTHLY, anchor_date=date(2023, 1, 1)),
        ),
        planned_items=(PlannedItem(id="new-laptop", amount=-180_000, month=date(2023, 8, 1)),),
    )

    history = [paid("prompt-co", n, d) for n, d in enumerate([0, 1, 2, 0, 1, 2])]
    history += [paid("slowpay-ltd", n, d) for n, d in enumerate([14, 16, 18, 20, 19, 21])]
    model = train_for_business(history, "demo-business", seed=3)

    open_invoices = (
        Invoice(id="OPEN-1", customer_id="prompt-co", amount=70_000,
                issue_date=date(2023, 6, 20), due_date=date(2023, 7, 4), payment_date=None),
        Invoice(id="OPEN-2", customer_id="slowpay-ltd", amount=70_000,
                issue_date=date(2023, 6, 20), due_date=date(2023, 7, 4), payment_date=None),
    )

    result = forecast(
        ForecastRequest(
            ledger=ledger,
            horizon=horizon,
            history_window=window,
            open_invoices=open_invoices,
            history=tuple(history),
            integrate_ar=True,
        ),
        model,
    )

    print("per-module totals over the quarter (minor currency units):")
    for name, series in sorted(result.per_module.items()):
        print(f"  {name:>12}: {series.total():>10,}")
    print(f"  {'aggregate':>12}: {result.aggregate.total():>10,}")

    print("\ninvoices flagged at risk of late payment:")
    for pred in result.at_risk_invoices:
        print(f"  {pred.invoice_id}: expected ~{pred.expected_delay_days}d late")

    print("\ninsights:")
    for line in result.insights:
        print(f"  - {line}")


if __name__ == "__main__":
    main()
