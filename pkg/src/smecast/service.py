"""
smecast.service
===============

REST service exposing the two prediction workflows: per-business delay
model training and prediction, and decomposed cash-flow forecasting with
optional delay integration. Models are persisted as one versioned JSON
document per business (atomic rename, last write wins); every non-2xx
response carries a machine-readable ``{error_code, detail}`` body.

Environment: CF_BIND, CF_MODEL_DIR, CF_TOKEN, CF_GRACE_DAYS.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from datetime import date, datetime
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .cashflow import (
    DateRange,
    EmptyWorkingHistoryError,
    ForecastRequest,
    forecast,
    result_to_dict,
)
from .classifier import (
    InsufficientDataError,
    TrainedModel,
    model_from_dict,
    model_to_dict,
    predict,
)
from .features import build_features
from .types import (
    GRACE_DAYS_DEFAULT,
    Invoice,
    group_by_customer,
    ingest_invoices,
    invoice_to_dict,
    ledger_from_dict,
)


@dataclass(frozen=True)
class ServiceConfig:
    model_dir: Path
    token: Optional[str] = None
    grace_days: int = GRACE_DAYS_DEFAULT
    max_request_bytes: int = 10_000_000
    cors_origins: tuple[str, ...] = ("*",)  # browser clients are served elsewhere

    def __post_init__(self) -> None:
        if self.grace_days < 0:
            raise ValueError("grace_days must be >= 0")

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        origins = os.environ.get("CF_CORS_ORIGINS", "*")
        return cls(
            model_dir=Path(os.environ.get("CF_MODEL_DIR", "./models")),
            token=os.environ.get("CF_TOKEN") or None,
            grace_days=int(os.environ.get("CF_GRACE_DAYS", GRACE_DAYS_DEFAULT)),
            cors_origins=tuple(o.strip() for o in origins.split(",") if o.strip()),
        )


class ApiError(Exception):
    def __init__(self, status: int, error_code: str, detail):
        self.status = status
        self.error_code = error_code
        self.detail = detail


class ModelStore:
    """Directory of per-business model documents. Writes are atomic
    (tmp file + rename); readers always see a complete snapshot."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def _path(self, business_id: str) -> Path:
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in business_id)
        return self.root / f"{safe}.json"

    def save(self, business_id: str, model: TrainedModel, history: list[Invoice]) -> str:
        self.root.mkdir(parents=True, exist_ok=True)
        doc = {
            "model": model_to_dict(model),
            "history": [invoice_to_dict(inv) for inv in history],
        }
        path = self._path(business_id)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(doc, fh, sort_keys=True, separators=(",", ":"))
            os.replace(tmp, path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        return path.stem

    def load(self, business_id: str) -> tuple[TrainedModel, list[Invoice]]:
        path = self._path(business_id)
        if not path.exists():
            raise ApiError(404, "model_not_found", f"no model for business {business_id}")
        doc = json.loads(path.read_text())
        result = ingest_invoices(doc.get("history", []))
        return model_from_dict(doc["model"]), list(result.invoices)

    def healthy(self) -> bool:
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            probe = self.root / ".probe"
            probe.write_text("ok")
            probe.unlink()
            return True
        except OSError:
            return False


def _parse_iso_date(value, name: str) -> date:
    try:
        return datetime.strptime(str(value), "%Y-%m-%d").date()
    except (TypeError, ValueError):
        raise ApiError(400, "schema_violation", f"malformed {name}: {value!r}")


def _require_invoices(body: dict, field: str = "invoices") -> list[Invoice]:
    raw = body.get(field)
    if not isinstance(raw, list):
        raise ApiError(400, "schema_violation", f"{field} must be a list")
    result = ingest_invoices(raw)
    if result.errors:
        raise ApiError(
            400,
            "schema_violation",
            [{"row": e.row, "message": e.message} for e in result.errors],
        )
    return list(result.invoices)


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig.from_env()
    store = ModelStore(config.model_dir)
    app = FastAPI(title="smecast", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return JSONResponse(
            status_code=exc.status,
            content={"error_code": exc.error_code, "detail": exc.detail},
        )

    @app.exception_handler(Exception)
    async def handle_unexpected(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"error_code": "internal_error", "detail": str(exc)},
        )

    async def read_body(request: Request) -> dict:
        _check_auth(request)
        raw = await request.body()
        if len(raw) > config.max_request_bytes:
            raise ApiError(400, "request_too_large", "request body exceeds size limit")
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ApiError(400, "schema_violation", f"invalid JSON: {exc}")
        if not isinstance(body, dict):
            raise ApiError(400, "schema_violation", "body must be a JSON object")
        return body

    def _check_auth(request: Request) -> None:
        if config.token is None:
            return
        header = request.headers.get("authorization", "")
        if header != f"Bearer {config.token}":
            raise ApiError(401, "unauthorized", "missing or invalid bearer token")

    def _require_business(body: dict) -> str:
        business_id = body.get("business_id")
        if not business_id or not isinstance(business_id, str):
            raise ApiError(400, "schema_violation", "business_id is required")
        return business_id

    @app.post("/v1/train")
    async def train_endpoint(request: Request):
        from .classifier import train_for_business

        body = await read_body(request)
        business_id = _require_business(body)
        invoices = _require_invoices(body)
        try:
            model = train_for_business(
                invoices, business_id, grace_days=config.grace_days
            )
        except InsufficientDataError as exc:
            raise ApiError(422, "insufficient_data", str(exc))
        model_id = store.save(business_id, model, invoices)
        return {
            "model_id": model_id,
            "metadata": {**model.metadata, "degenerate": model.degenerate},
        }

    @app.post("/v1/predict/ar")
    async def predict_endpoint(request: Request):
        body = await read_body(request)
        business_id = _require_business(body)
        invoices = _require_invoices(body)
        model, history = store.load(business_id)
        histories = group_by_customer(history + invoices)
        predictions = []
        for inv in invoices:
            fv = build_features(
                histories[inv.customer_id], inv, grace_days=config.grace_days
            )
            predictions.append(predict(model, fv, invoice_id=inv.id).to_dict())
        return {"predictions": predictions}

    @app.post("/v1/forecast/cashflow")
    async def forecast_endpoint(request: Request):
        body = await read_body(request)
        try:
            ledger = ledger_from_dict(body.get("ledger", {}))
        except (KeyError, ValueError, TypeError) as exc:
            raise ApiError(400, "schema_violation", f"invalid ledger: {exc}")
        horizon_raw = body.get("horizon") or {}
        window_raw = body.get("history_window") or {}
        try:
            horizon = DateRange(
                _parse_iso_date(horizon_raw.get("start_date"), "horizon.start_date"),
                _parse_iso_date(horizon_raw.get("end_date"), "horizon.end_date"),
            )
            window = DateRange(
                _parse_iso_date(window_raw.get("start_date"), "history_window.start_date"),
                _parse_iso_date(window_raw.get("end_date"), "history_window.end_date"),
            )
        except ValueError as exc:
            raise ApiError(400, "schema_violation", str(exc))
        open_invoices = _require_invoices(body, "open_invoices") if body.get("open_invoices") else []
        history = _require_invoices(body, "history") if body.get("history") else []
        integrate = bool(body.get("integrate_ar", False))

        model = None
        if integrate:
            business_id = _require_business(body)
            model, stored_history = store.load(business_id)
            if not history:
                history = stored_history

        try:
            req = ForecastRequest(
                ledger=ledger,
                horizon=horizon,
                history_window=window,
                open_invoices=tuple(open_invoices),
                history=tuple(history),
                integrate_ar=integrate,
                grace_days=config.grace_days,
            )
        except ValueError as exc:
            raise ApiError(400, "schema_violation", str(exc))
        try:
            result = forecast(req, model)
        except EmptyWorkingHistoryError as exc:
            raise ApiError(422, "empty_working_history", str(exc))
        return result_to_dict(result)

    @app.get("/v1/health")
    async def health():
        if not store.healthy():
            raise ApiError(503, "store_unavailable", "model store is not writable")
        return {"status": "ok", "version": __version__}

    return app
