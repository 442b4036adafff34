/**
 * Typed client for the fcmrisk service endpoints.
 */

import type {
  FeedbackReport,
  HierarchyDocument,
  ResultDocument,
  RoundSummary,
  Submission,
  SubmissionAck,
  WhatIfOverrides,
  WhatIfReport,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly code: string,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raiseFor(response: Response): Promise<never> {
  let code = "http_error";
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body === "object") {
      code = body.code ?? code;
      message = body.message ?? JSON.stringify(body);
    }
  } catch {
    // non-JSON error body; keep the HTTP status text
  }
  throw new ApiError(response.status, code, message);
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      await raiseFor(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  hierarchy(): Promise<HierarchyDocument> {
    return this.request<HierarchyDocument>("/hierarchy");
  }

  async rounds(): Promise<RoundSummary[]> {
    const body = await this.request<{ rounds: RoundSummary[] }>("/rounds");
    return body.rounds;
  }

  createRound(timestamp = ""): Promise<RoundSummary> {
    return this.post<RoundSummary>("/rounds", { timestamp });
  }

  submitEvaluation(roundId: string, submission: Submission): Promise<SubmissionAck> {
    return this.post<SubmissionAck>(`/rounds/${roundId}/evaluations`, submission);
  }

  freeze(roundId: string, lambda?: number): Promise<ResultDocument> {
    const payload = lambda === undefined ? {} : { lambda };
    return this.post<ResultDocument>(`/rounds/${roundId}/freeze`, payload);
  }

  result(roundId: string): Promise<ResultDocument> {
    return this.request<ResultDocument>(`/rounds/${roundId}/result`);
  }

  feedback(roundId: string, expertId: string): Promise<FeedbackReport> {
    return this.request<FeedbackReport>(
      `/rounds/${roundId}/feedback/${encodeURIComponent(expertId)}`,
    );
  }

  whatif(roundId: string, overrides: WhatIfOverrides): Promise<WhatIfReport> {
    return this.post<WhatIfReport>(`/rounds/${roundId}/whatif`, overrides);
  }
}
