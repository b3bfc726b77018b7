"""
smecast.cli
===========

One binary entry point with subcommands for every workflow: serve the REST
API, generate synthetic data, train a per-business model, predict delays,
run a cash-flow forecast, and run the evaluation harness.
"""

from __future__ import annotations

import json
import sys
from datetime import datetime
from pathlib import Path

import click

from . import __version__
from .cashflow import DateRange, ForecastRequest, forecast, result_to_dict
from .classifier import (
    InsufficientDataError,
    model_from_json,
    model_to_json,
    predict,
    train_for_business,
)
from .evalharness import Scenario, evaluate
from .features import build_features
from .synthgen import GeneratorConfig, generate, write_dataset
from .types import (
    GRACE_DAYS_DEFAULT,
    group_by_customer,
    ledger_from_json,
    read_invoices_csv,
)


def _load_invoices(path: str):
    result = read_invoices_csv(Path(path).read_text())
    if result.errors:
        for err in result.errors:
            click.echo(f"row {err.row}: {err.message}", err=True)
        raise SystemExit(1)
    return list(result.invoices)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """SME invoice delay prediction and cash-flow forecasting."""


@main.command()
@click.option("--bind", default="127.0.0.1:8000", help="host:port to listen on")
@click.option("--model-dir", default="./models", type=click.Path())
def serve(bind: str, model_dir: str) -> None:
    """Run the REST service."""
    import os

    import uvicorn

    os.environ.setdefault("CF_MODEL_DIR", model_dir)
    host, _, port = bind.partition(":")
    from .service import create_app

    uvicorn.run(create_app(), host=host or "127.0.0.1", port=int(port or 8000))


@main.command()
@click.option("--seed", required=True, type=int, help="generator seed (mandatory)")
@click.option("--users", default=10, type=int)
@click.option("--span-days", default=365, type=int)
@click.option("--out", required=True, type=click.Path())
def generate_cmd(seed: int, users: int, span_days: int, out: str) -> None:
    """Generate a deterministic synthetic dataset."""
    config = GeneratorConfig(n_users=users, span_days=span_days, seed=seed)
    dataset = generate(config)
    write_dataset(dataset, out)
    click.echo(json.dumps(dataset.manifest, indent=2))


main.add_command(generate_cmd, name="generate")


@main.command(name="train")
@click.option("--invoices", "invoices_path", required=True, type=click.Path(exists=True))
@click.option("--business", required=True)
@click.option("--out", required=True, type=click.Path())
@click.option("--seed", default=0, type=int)
@click.option("--grace-days", default=GRACE_DAYS_DEFAULT, type=int)
def train_cmd(invoices_path: str, business: str, out: str, seed: int, grace_days: int) -> None:
    """Train a delay classifier from an invoice CSV."""
    invoices = _load_invoices(invoices_path)
    try:
        model = train_for_business(invoices, business, seed=seed, grace_days=grace_days)
    except InsufficientDataError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(1)
    Path(out).write_text(model_to_json(model))
    click.echo(json.dumps({"business_id": business, **model.metadata}, indent=2))


@main.command(name="predict-ar")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--history", "history_path", required=True, type=click.Path(exists=True),
              help="CSV of the business's past invoices")
@click.option("--invoices", "invoices_path", required=True, type=click.Path(exists=True),
              help="CSV of open invoices to score")
@click.option("--grace-days", default=GRACE_DAYS_DEFAULT, type=int)
def predict_ar_cmd(model_path: str, history_path: str, invoices_path: str, grace_days: int) -> None:
    """Predict payment delays for open invoices."""
    model = model_from_json(Path(model_path).read_text())
    history = _load_invoices(history_path)
    targets = _load_invoices(invoices_path)
    histories = group_by_customer(history + targets)
    out = []
    for inv in targets:
        fv = build_features(histories[inv.customer_id], inv, grace_days=grace_days)
        out.append(predict(model, fv, invoice_id=inv.id).to_dict())
    click.echo(json.dumps({"predictions": out}, indent=2))


@main.command(name="forecast")
@click.option("--ledger", "ledger_path", required=True, type=click.Path(exists=True))
@click.option("--history", "history_path", type=click.Path(exists=True))
@click.option("--history-window", required=True, help="START:END (ISO dates)")
@click.option("--horizon", required=True, help="START:END (ISO dates)")
def forecast_cmd(ledger_path: str, history_path: str | None, history_window: str, horizon: str) -> None:
    """Produce a decomposed cash-flow forecast."""

    def parse_range(text: str) -> DateRange:
        lo, _, hi = text.partition(":")
        to_date = lambda s: datetime.strptime(s, "%Y-%m-%d").date()
        return DateRange(to_date(lo), to_date(hi))

    ledger = ledger_from_json(Path(ledger_path).read_text())
    history = tuple(_load_invoices(history_path)) if history_path else ()
    req = ForecastRequest(
        ledger=ledger,
        horizon=parse_range(horizon),
        history_window=parse_range(history_window),
        history=history,
    )
    click.echo(json.dumps(result_to_dict(forecast(req)), indent=2))


@main.command(name="evaluate")
@click.option("--users", default=50, type=int, help="synthetic users to generate")
@click.option("--scenario", "scenarios", default="9/3,6/6,1/11",
              help="comma-separated train/predict month splits")
@click.option("--seed", required=True, type=int)
@click.option("--out", required=True, type=click.Path())
def evaluate_cmd(users: int, scenarios: str, seed: int, out: str) -> None:
    """Run the evaluation harness on a freshly generated synthetic dataset."""
    dataset = generate(GeneratorConfig(n_users=users, seed=seed))
    parsed = [Scenario.parse(s.strip()) for s in scenarios.split(",") if s.strip()]
    report = evaluate(dataset, parsed, seed=seed)
    Path(out).write_text(report.to_json() + "\n")
    click.echo(f"report written to {out}")


if __name__ == "__main__":
    main()
