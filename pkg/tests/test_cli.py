from __future__ import annotations

import json
from pathlib import Path

from click.testing import CliRunner

from smecast.cli import main
from smecast.types import write_invoices_csv

from conftest import make_invoice


def write_history_csv(path: Path) -> None:
    delays = [0, 15, 1, 20, 2, 18, 0, 25]
    invoices = [
        make_invoice(i, issue_offset=i * 50, delay=d) for i, d in enumerate(delays)
    ]
    path.write_text(write_invoices_csv(invoices))


class TestGenerate:
    def test_writes_dataset_and_prints_manifest(self, tmp_path):
        out = tmp_path / "ds"
        result = CliRunner().invoke(
            main, ["generate", "--seed", "1", "--users", "2", "--out", str(out)]
        )
        assert result.exit_code == 0, result.output
        manifest = json.loads(result.output)
        assert manifest["n_users"] == 2
        assert (out / "manifest.json").exists()

    def test_seed_is_mandatory(self, tmp_path):
        result = CliRunner().invoke(
            main, ["generate", "--users", "2", "--out", str(tmp_path / "ds")]
        )
        assert result.exit_code != 0


class TestTrainPredict:
    def test_round_trip(self, tmp_path):
        csv_path = tmp_path / "history.csv"
        write_history_csv(csv_path)
        model_path = tmp_path / "model.json"

        runner = CliRunner()
        trained = runner.invoke(
            main,
            [
                "train",
                "--invoices", str(csv_path),
                "--business", "B1",
                "--out", str(model_path),
                "--seed", "7",
            ],
        )
        assert trained.exit_code == 0, trained.output
        assert model_path.exists()

        open_path = tmp_path / "open.csv"
        open_path.write_text(
            write_invoices_csv([make_invoice(99, issue_offset=500, delay=None)])
        )
        predicted = runner.invoke(
            main,
            [
                "predict-ar",
                "--model", str(model_path),
                "--history", str(csv_path),
                "--invoices", str(open_path),
            ],
        )
        assert predicted.exit_code == 0, predicted.output
        (pred,) = json.loads(predicted.output)["predictions"]
        assert pred["invoice_id"] == "C1-I099"
        assert pred["label"] in ("on_time", "delayed")

    def test_train_rejects_bad_rows_with_diagnostics(self, tmp_path):
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text(
            "invoice_id,customer_id,amount,issue_date,due_date,payment_date\n"
            "I1,C1,100,2023-02-01,2023-01-01,\n"
        )
        result = CliRunner().invoke(
            main,
            [
                "train",
                "--invoices", str(csv_path),
                "--business", "B1",
                "--out", str(tmp_path / "m.json"),
            ],
        )
        assert result.exit_code == 1
        assert "row 0" in result.output


class TestForecast:
    def test_recurring_only(self, tmp_path):
        ledger_path = tmp_path / "ledger.json"
        ledger_path.write_text(
            json.dumps(
                {
                    "recurring_items": [
                        {
                            "id": "rent",
                            "amount": -50_000,
                            "period": "monthly",
                            "anchor_date": "2023-01-01",
                            "end_date": None,
                        }
                    ]
                }
            )
        )
        result = CliRunner().invoke(
            main,
            [
                "forecast",
                "--ledger", str(ledger_path),
                "--history-window", "2023-01-01:2023-06-30",
                "--horizon", "2023-07-01:2023-08-31",
            ],
        )
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert [e["date"] for e in doc["per_module"]["recurring"]] == [
            "2023-07-01",
            "2023-08-01",
        ]


class TestEvaluate:
    def test_writes_report(self, tmp_path):
        out = tmp_path / "report.json"
        result = CliRunner().invoke(
            main,
            [
                "evaluate",
                "--users", "3",
                "--scenario", "6/6",
                "--seed", "5",
                "--out", str(out),
            ],
        )
        assert result.exit_code == 0, result.output
        doc = json.loads(out.read_text())
        assert {s["method"] for s in doc["scenarios"]} == {"our_method", "naive_mean"}
