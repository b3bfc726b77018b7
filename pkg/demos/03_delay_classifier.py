"""Train the delay classifier for a small business and score its open
invoices: a punctual customer, a chronic late payer, and a brand-new
customer with no history at all."""

from datetime import date, timedelta

from smecast.classifier import model_to_json, predict, train_for_business
from smecast.features import build_features
from smecast.types import Invoice, group_by_customer


def invoice(cust: str, n: int, delay: int | None, amount: int = 60_000) -> Invoice:
    issue = date(2023, 1, 2) + timedelta(days=40 * n)
    due = issue + timedelta(days=14)
    return Invoice(
        id=f"{cust}-{n:02d}",
        customer_id=cust,
        amount=amount,
        issue_date=issue,
        due_date=due,
        payment_date=None if delay is None else due + timedelta(days=delay),
    )


def main() -> None:
    history = [invoice("prompt-co", n, d) for n, d in enumerate([0, 2, -1, 1, 0, 3])]
    history += [invoice("slowpay-ltd", n, d) for n, d in enumerate([12, 15, 18, 20, 17, 23])]

    model = train_for_business(history, business_id="demo-business", seed=7)
    print(f"trained on {model.metadata['n_samples']} labeled invoices "
          f"({len(model_to_json(model))} bytes serialized)\n")

    open_invoices = [
        invoice("prompt-co", 9, None),
        invoice("slowpay-ltd", 9, None),
        invoice("newcust-gmbh", 0, None),  # cold start: defaults kick in
    ]
    histories = group_by_customer(history + open_invoices)
    for inv in open_invoices:
        fv = build_features(histories[inv.customer_id], inv)
        pred = predict(model, fv, invoice_id=inv.id)
        expected = f", expect ~{pred.expected_delay_days}d late" if pred.expected_delay_days else ""
        print(f"  {inv.id:>15}: {pred.label.value:8} (trend: {pred.insight.value}{expected})")


if __name__ == "__main__":
    main()
