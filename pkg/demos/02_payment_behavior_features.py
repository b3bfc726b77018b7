"""Build the per-invoice feature vector for a customer whose payment
behavior is deteriorating, and watch the moving averages react.

Every feature is computed strictly from invoices issued before the target
invoice, and only payments already observed at its issue date count — the
same rule the classifier relies on to avoid look-ahead during training.
"""

from datetime import date, timedelta

from smecast.features import build_features
from smecast.types import CustomerHistory, Invoice


def invoice(n: int, delay: int | None) -> Invoice:
    issue = date(2023, 1, 2) + timedelta(days=45 * n)
    due = issue + timedelta(days=14)
    return Invoice(
        id=f"I{n:02d}",
        customer_id="acme",
        amount=80_000,
        issue_date=issue,
        due_date=due,
        payment_date=None if delay is None else due + timedelta(days=delay),
    )


def main() -> None:
    # delays creep up from prompt to three weeks late
    delays = [0, 1, 3, 6, 10, 14, 19, 22]
    invoices = [invoice(n, d) for n, d in enumerate(delays)] + [invoice(8, None)]
    history = CustomerHistory.from_invoices("acme", invoices)

    print(f"{'invoice':>8} {'fma':>6} {'sma':>6} {'ratio':>6} {'grad':>6} {'late%':>6}")
    for target in history.invoices:
        fv = build_features(history, target)
        print(
            f"{target.id:>8} {fv.fma:6.1f} {fv.sma:6.1f} {fv.ma_ratio:6.2f}"
            f" {fv.ma_gradient:+6.1f} {fv.late_ratio:6.2f}"
        )

    print("\nthe fast average overtakes the slow one as behavior worsens;")
    print("a persistently positive gradient is the early-warning signal.")


if __name__ == "__main__":
    main()
