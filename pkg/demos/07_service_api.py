"""Exercise the REST API end to end without leaving the process: train a
model, score open invoices, and request an integrated cash-flow forecast.

The same calls work against a standalone server (``smecast serve``); the
in-process test client is used here so the demo has no moving parts.
"""

import json
import tempfile
from datetime import date, timedelta

from fastapi.testclient import TestClient

from smecast.service import ServiceConfig, create_app
from smecast.types import Invoice, invoice_to_dict


def invoice(cust: str, n: int, delay: int | None) -> dict:
    issue = date(2023, 1, 2) + timedelta(days=40 * n)
    due = issue + timedelta(days=14)
    return invoice_to_dict(
        Invoice(
            id=f"{cust}-{n:02d}", customer_id=cust, amount=60_000,
            issue_date=issue, due_date=due,
            payment_date=None if delay is None else due + timedelta(days=delay),
        )
    )


def show(label: str, resp) -> None:
    print(f"\n== {label} -> HTTP {resp.status_code}")
    print(json.dumps(resp.json(), indent=2)[:600])


def main() -> None:
    with tempfile.TemporaryDirectory() as model_dir:
        client = TestClient(create_app(ServiceConfig(model_dir=model_dir)))

        history = [invoice("prompt-co", n, d) for n, d in enumerate([0, 1, 2, 0, 1])]
        history += [invoice("slowpay-ltd", n, d) for n, d in enumerate([14, 16, 18, 20, 19])]

        show("GET /v1/health", client.get("/v1/health"))
        show(
            "POST /v1/train",
            client.post("/v1/train", json={"business_id": "demo", "invoices": history}),
        )
        show(
            "POST /v1/predict/ar",
            client.post(
                "/v1/predict/ar",
                json={
                    "business_id": "demo",
                    "invoices": [invoice("slowpay-ltd", 9, None)],
                },
            ),
        )
        show(
            "POST /v1/forecast/cashflow (integrate_ar=true)",
            client.post(
                "/v1/forecast/cashflow",
                json={
                    "business_id": "demo",
                    "ledger": {
                        "recurring_items": [
                            {"id": "rent", "amount": -90_000, "period": "monthly",
                             "anchor_date": "2023-01-01", "end_date": None}
                        ]
                    },
                    "history_window": {"start_date": "2023-01-01", "end_date": "2023-06-30"},
                    "horizon": {"start_date": "2023-07-01", "end_date": "2023-09-30"},
                    "open_invoices": [invoice("slowpay-ltd", 9, None)],
                    "integrate_ar": True,
                },
            ),
        )


if __name__ == "__main__":
    main()
