/**
 * Thin typed client for the forecasting service. Responses are validated
 * against the schemas in types.ts; non-2xx bodies are surfaced as ApiError
 * with the service's machine-readable error_code so callers can render a
 * useful message (and a retry button) instead of a blank failure.
 */

import {
  type ForecastRequest,
  type ForecastResult,
  type InvoiceRecord,
  errorBodySchema,
  forecastResultSchema,
  trainResponseSchema,
} from "./types";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly errorCode: string,
    readonly detail: unknown,
  ) {
    super(`${errorCode} (HTTP ${status})`);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: typeof fetch = fetch,
  ) {}

  async health(): Promise<boolean> {
    try {
      const res = await this.fetchImpl(`${this.baseUrl}/v1/health`);
      return res.ok;
    } catch {
      return false;
    }
  }

  async train(businessId: string, invoices: InvoiceRecord[]): Promise<string> {
    const body = await this.post("/v1/train", {
      business_id: businessId,
      invoices,
    });
    return trainResponseSchema.parse(body).model_id;
  }

  async forecast(request: ForecastRequest): Promise<ForecastResult> {
    const body = await this.post("/v1/forecast/cashflow", request);
    return forecastResultSchema.parse(body);
  }

  private async post(path: string, payload: unknown): Promise<unknown> {
    let res: Response;
    try {
      res = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch (err) {
      throw new ApiError(0, "service_unreachable", String(err));
    }
    const body = await res.json().catch(() => ({}));
    if (!res.ok) {
      const parsed = errorBodySchema.safeParse(body);
      if (parsed.success) {
        throw new ApiError(res.status, parsed.data.error_code, parsed.data.detail);
      }
      throw new ApiError(res.status, "unexpected_error", body);
    }
    return body;
  }
}
