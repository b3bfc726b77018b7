"""
smecast.synthgen
================

Deterministic synthetic freelancer-data generator: work sessions across
concurrent hourly projects with drifting wages, flat-rate projects,
recurring items, and per-customer invoice streams with configurable delay
behavior (including trending customers whose delays grow or shrink over
time). Each user draws from an independent random stream keyed by
(seed, user index), so regeneration with the same config is byte-identical.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, asdict
from datetime import date, timedelta
from pathlib import Path
from typing import Optional

import numpy as np

from .types import (
    GRACE_DAYS_DEFAULT,
    CustomerHistory,
    FlatRateProject,
    HourlyProject,
    HourlyTask,
    Invoice,
    PlannedItem,
    ProjectLedger,
    RecurrencePeriod,
    RecurringItem,
    invoice_to_dict,
    ledger_to_dict,
    write_invoices_csv,
)

DELAY_FLOOR_DAYS = -5


class ConfigError(ValueError):
    """Invalid generator configuration."""


@dataclass(frozen=True)
class GeneratorConfig:
    n_users: int = 10
    span_days: int = 365
    start_date: date = date(2023, 1, 2)  # a Monday
    sessions_per_week: tuple[int, int] = (4, 12)
    hours_per_session: tuple[float, float] = (3.0, 1.2)  # mean, std; floor 0.5h
    wage_mean: int = 5000  # minor units / hour
    wage_sigma: float = 0.25  # lognormal sigma
    wage_monthly_drift_pct: float = 0.5
    concurrent_projects: tuple[int, int] = (1, 3)
    flat_projects: tuple[int, int] = (2, 5)
    flat_fee_mean: int = 300_000
    customers_per_user: tuple[int, int] = (3, 8)
    invoice_interval_days: tuple[int, int] = (20, 40)
    invoice_amount_mean: int = 80_000
    invoice_terms_days: int = 14
    p_late: float = 0.3
    delay_geometric_p: float = 0.3
    trend_slope: float = 0.0  # days of extra delay per invoice index
    recurring_income: int = 60_000  # monthly retainer; 0 disables
    recurring_expense: int = -20_000  # monthly cost; 0 disables
    p_planned_per_month: float = 0.10
    planned_amount_mean: int = 120_000
    seed: int = 0

    def validate(self) -> None:
        if self.n_users < 0:
            raise ConfigError("n_users must be >= 0")
        if self.span_days < 1:
            raise ConfigError("span_days must be >= 1")
        for name in ("sessions_per_week", "concurrent_projects", "flat_projects",
                     "customers_per_user", "invoice_interval_days"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                raise ConfigError(f"{name} range is degenerate")
        if not (0.0 <= self.p_late <= 1.0):
            raise ConfigError("p_late must be in [0, 1]")
        if not (0.0 < self.delay_geometric_p <= 1.0):
            raise ConfigError("delay_geometric_p must be in (0, 1]")
        if not (0.0 <= self.p_planned_per_month <= 1.0):
            raise ConfigError("p_planned_per_month must be in [0, 1]")
        if self.hours_per_session[0] <= 0 or self.hours_per_session[1] < 0:
            raise ConfigError("hours_per_session must have positive mean")
        if self.wage_mean <= 0 or self.invoice_amount_mean <= 0:
            raise ConfigError("monetary means must be positive")

    def config_hash(self) -> str:
        payload = {k: (v.isoformat() if isinstance(v, date) else v)
                   for k, v in asdict(self).items()}
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class SyntheticUser:
    user_id: str
    ledger: ProjectLedger
    invoices: tuple[Invoice, ...]


@dataclass(frozen=True)
class SyntheticDataset:
    users: tuple[SyntheticUser, ...]
    manifest: dict

    def to_dict(self) -> dict:
        return {
            "manifest": self.manifest,
            "users": [
                {
                    "user_id": u.user_id,
                    "ledger": ledger_to_dict(u.ledger),
                    "invoices": [invoice_to_dict(inv) for inv in u.invoices],
                }
                for u in self.users
            ],
        }

    def dataset_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _sample_delay(rng: np.random.Generator, cfg: GeneratorConfig, index: int,
                  grace: int = GRACE_DAYS_DEFAULT) -> int:
    if rng.random() < cfg.p_late:
        delay = grace + int(rng.geometric(cfg.delay_geometric_p))
    else:
        delay = int(rng.integers(-3, grace + 1))
    delay += int(round(cfg.trend_slope * index))
    return max(delay, DELAY_FLOOR_DAYS)


def _generate_user(cfg: GeneratorConfig, user_index: int) -> SyntheticUser:
    rng = np.random.default_rng([cfg.seed, user_index])
    uid = f"U{user_index:05d}"
    start = cfg.start_date
    end = start + timedelta(days=cfg.span_days - 1)

    # hourly projects with work sessions
    n_proj = int(rng.integers(cfg.concurrent_projects[0], cfg.concurrent_projects[1] + 1))
    base_wages = [
        int(cfg.wage_mean * rng.lognormal(0.0, cfg.wage_sigma)) for _ in range(n_proj)
    ]
    tasks: list[list[HourlyTask]] = [[] for _ in range(n_proj)]
    counter = 0
    drift = 1.0 + cfg.wage_monthly_drift_pct / 100.0
    week_start = 0
    while week_start < cfg.span_days:
        week_days = [
            off
            for off in range(week_start, min(week_start + 7, cfg.span_days))
            if (start + timedelta(days=off)).weekday() < 5
        ]
        n_sessions = int(rng.integers(cfg.sessions_per_week[0], cfg.sessions_per_week[1] + 1))
        if week_days and n_proj:
            for _ in range(n_sessions):
                off = int(rng.choice(week_days))
                pi = int(rng.integers(0, n_proj))
                hours = max(0.5, float(rng.normal(*cfg.hours_per_session)))
                month_index = off // 30
                wage = int(round(base_wages[pi] * drift**month_index))
                tasks[pi].append(
                    HourlyTask(
                        task_id=f"{uid}-p{pi}-s{counter}",
                        hours=round(hours, 2),
                        wage=wage,
                        session_date=start + timedelta(days=off),
                    )
                )
                counter += 1
        week_start += 7
    hourly = tuple(
        HourlyProject(id=f"{uid}-hp{pi}", tasks=tuple(ts))
        for pi, ts in enumerate(tasks)
    )

    # flat-rate projects completing on working days through the span
    n_flat = int(rng.integers(cfg.flat_projects[0], cfg.flat_projects[1] + 1))
    flats = []
    for fi in range(n_flat):
        off = int(rng.integers(0, cfg.span_days))
        fee = max(1, int(cfg.flat_fee_mean * rng.lognormal(0.0, 0.3)))
        flats.append(
            FlatRateProject(
                id=f"{uid}-fp{fi}", fee=fee, completion_date=start + timedelta(days=off)
            )
        )
    flats.sort(key=lambda p: (p.completion_date, p.id))

    # recurring retainer / cost
    recurring = []
    if cfg.recurring_income:
        recurring.append(
            RecurringItem(
                id=f"{uid}-rin",
                amount=cfg.recurring_income,
                period=RecurrencePeriod.MONTHLY,
                anchor_date=start,
            )
        )
    if cfg.recurring_expense:
        recurring.append(
            RecurringItem(
                id=f"{uid}-rex",
                amount=cfg.recurring_expense,
                period=RecurrencePeriod.MONTHLY,
                anchor_date=start + timedelta(days=4),
            )
        )

    # planned one-off items, realized exactly in their month
    planned = []
    month = date(start.year, start.month, 1)
    mi = 0
    while month <= end:
        if rng.random() < cfg.p_planned_per_month:
            amount = max(1, int(cfg.planned_amount_mean * rng.lognormal(0.0, 0.3)))
            planned.append(PlannedItem(id=f"{uid}-pl{mi}", amount=amount, month=month))
        mi += 1
        month = (month.replace(day=28) + timedelta(days=4)).replace(day=1)

    # customer invoice streams
    n_cust = int(rng.integers(cfg.customers_per_user[0], cfg.customers_per_user[1] + 1))
    invoices = []
    for ci in range(n_cust):
        cid = f"{uid}-C{ci:03d}"
        offset = int(rng.integers(0, 15))
        idx = 0
        while offset < cfg.span_days:
            issue = start + timedelta(days=offset)
            due = issue + timedelta(days=cfg.invoice_terms_days)
            amount = max(1, int(cfg.invoice_amount_mean * rng.lognormal(0.0, 0.4)))
            delay = _sample_delay(rng, cfg, idx)
            payment = due + timedelta(days=delay)
            if payment < issue:
                payment = issue
            invoices.append(
                Invoice(
                    id=f"{cid}-I{idx:03d}",
                    customer_id=cid,
                    amount=amount,
                    issue_date=issue,
                    due_date=due,
                    payment_date=payment if payment <= end else None,
                )
            )
            idx += 1
            offset += int(
                rng.integers(cfg.invoice_interval_days[0], cfg.invoice_interval_days[1] + 1)
            )
    invoices.sort(key=lambda inv: (inv.issue_date, inv.id))

    ledger = ProjectLedger(
        hourly_projects=hourly,
        flat_projects=tuple(flats),
        recurring_items=tuple(recurring),
        planned_items=tuple(planned),
    )
    return SyntheticUser(user_id=uid, ledger=ledger, invoices=tuple(invoices))


def generate(config: GeneratorConfig) -> SyntheticDataset:
    """Generate the full dataset. Users are independent random streams, so
    the output is reproducible per user and in aggregate."""
    config.validate()
    users = tuple(_generate_user(config, i) for i in range(config.n_users))
    n_sessions = sum(len(p.tasks) for u in users for p in u.ledger.hourly_projects)
    n_invoices = sum(len(u.invoices) for u in users)
    manifest = {
        "seed": config.seed,
        "config_hash": config.config_hash(),
        "n_users": config.n_users,
        "n_sessions": n_sessions,
        "n_invoices": n_invoices,
    }
    return SyntheticDataset(users=users, manifest=manifest)


def generate_trending_customers(
    n: int,
    slope_days_per_invoice: float,
    seed: int,
    n_invoices: int = 12,
    base_delay: float = 0.0,
    noise_std: float = 2.0,
    start_date: date = date(2023, 1, 2),
    terms_days: int = 14,
    amount_mean: int = 80_000,
) -> list[CustomerHistory]:
    """Customers whose expected delay moves linearly with the invoice index
    (floored at -5 days): slope > 0 deteriorating, slope < 0 improving."""
    if n < 1:
        raise ConfigError("n must be >= 1")
    histories = []
    for c in range(n):
        rng = np.random.default_rng([seed, c])
        cid = f"T{seed}-{c:04d}"
        invoices = []
        offset = int(rng.integers(0, 10))
        for i in range(n_invoices):
            issue = start_date + timedelta(days=offset)
            due = issue + timedelta(days=terms_days)
            expected = max(base_delay + slope_days_per_invoice * i, DELAY_FLOOR_DAYS)
            delay = int(round(expected + rng.normal(0.0, noise_std))) if noise_std else int(round(expected))
            delay = max(delay, DELAY_FLOOR_DAYS)
            payment = max(due + timedelta(days=delay), issue)
            amount = max(1, int(amount_mean * rng.lognormal(0.0, 0.4)))
            invoices.append(
                Invoice(
                    id=f"{cid}-I{i:03d}",
                    customer_id=cid,
                    amount=amount,
                    issue_date=issue,
                    due_date=due,
                    payment_date=payment,
                )
            )
            offset += int(rng.integers(25, 36))
        histories.append(CustomerHistory.from_invoices(cid, invoices))
    return histories


def write_dataset(dataset: SyntheticDataset, out_dir: str | Path) -> None:
    """Write manifest.json plus per-user invoices.csv and ledger.json."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    (root / "manifest.json").write_text(
        json.dumps(dataset.manifest, sort_keys=True, indent=2) + "\n"
    )
    for user in dataset.users:
        udir = root / "users" / user.user_id
        udir.mkdir(parents=True, exist_ok=True)
        (udir / "invoices.csv").write_text(write_invoices_csv(user.invoices))
        (udir / "ledger.json").write_text(
            json.dumps(ledger_to_dict(user.ledger), sort_keys=True, indent=2) + "\n"
        )
