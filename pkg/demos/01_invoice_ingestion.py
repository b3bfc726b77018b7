"""Ingest a raw invoice CSV, label payment behavior, and show how bad rows
are reported without aborting the batch."""

from smecast.types import PaymentLabel, label_invoice, read_invoices_csv

CSV = """\
invoice_id,customer_id,amount,issue_date,due_date,payment_date
I-001,acme,125000,2023-01-10,2023-01-24,2023-01-23
I-002,acme,90000,2023-02-01,2023-02-15,2023-03-06
I-003,acme,90000,2023-03-01,2023-02-15,
I-004,birch,40000,2023-02-10,2023-02-24,2023-02-26
I-005,birch,55000,2023-03-12,2023-03-26,
"""


def main() -> None:
    result = read_invoices_csv(CSV)

    print(f"accepted {len(result.invoices)} invoices, rejected {len(result.errors)} rows")
    for err in result.errors:
        print(f"  row {err.row}: {err.message}")

    print("\npayment labels (grace period: 7 days past due):")
    for inv in result.invoices:
        if inv.payment_date is None:
            print(f"  {inv.id}: still open ({inv.customer_id}, due {inv.due_date})")
            continue
        label = label_invoice(inv)
        tag = "LATE" if label is PaymentLabel.DELAYED else "ok"
        print(f"  {inv.id}: paid {inv.delay_days:+d}d vs due date -> {tag}")


if __name__ == "__main__":
    main()
