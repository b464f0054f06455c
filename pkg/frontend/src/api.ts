/**
 * Typed client for the diagnosis service HTTP API under /api/v1.
 *
 * Every number the UI displays is a field of one of these response types;
 * the client does no arithmetic beyond JSON parsing, so ordering, ratios,
 * probabilities, and expected costs stay server-authoritative.
 */

export interface ComponentOut {
  id: string;
  name: string;
  cost: number;
  prob: number;
}

export interface SymptomOut {
  id: string;
  name: string;
  source: 'paper' | 'synthetic';
  components: ComponentOut[];
}

export interface ExpertRuleOut {
  expert: string;
  symptom: string;
  order: string[];
}

export interface ModelOut {
  name: string;
  symptoms: SymptomOut[];
  expert_rules: ExpertRuleOut[];
}

export interface RecommendationOut {
  component: string;
  name: string;
  cost: number;
  prob: number;
  cp_ratio: number | null;
}

export interface HistoryEntryOut {
  component: string;
  outcome: 'pass' | 'fail';
  at: string;
}

export type SessionStatus = 'active' | 'diagnosed' | 'exhausted';

export interface SessionResponse {
  id: string;
  symptom: string;
  status: SessionStatus;
  recommendation: RecommendationOut | null;
  remaining: ComponentOut[];
  remaining_expected_cost: number;
  history: HistoryEntryOut[];
  diagnosis: string | null;
  created_at: string;
  updated_at: string;
}

export interface SequencedTestOut {
  component: string;
  name: string;
  cost: number;
  prob: number;
  cp_ratio: number | null;
  rank: number;
}

export interface WhatifOverride {
  cost?: number;
  prob?: number;
}

export interface WhatifResponse {
  symptom: string;
  expected_cost: number;
  nominal_expected_cost: number;
  delta_vs_nominal: number;
  sequence: SequencedTestOut[];
  nominal_sequence: SequencedTestOut[];
}

export interface SensitivityRequest {
  symptom: string;
  expert: string;
  s: number;
  seed: number;
  n_samples?: number;
  band_mass?: number;
  renormalize_samples?: boolean;
  include_cdf?: boolean;
}

export interface SensitivityResponse {
  symptom: string;
  expert: string;
  s: number;
  n_samples: number;
  seed: number;
  band_mass: number;
  renormalize_samples: boolean;
  nominal_diff: number;
  mean_diff: number;
  quantiles: Record<string, number>;
  prob_positive: number;
  cdf_points: [number, number][];
}

/** Error body shared by every non-2xx service response. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    detail: string,
  ) {
    super(detail);
    this.name = 'ApiError';
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = '') {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    let resp: Response;
    try {
      resp = await fetch(`${this.baseUrl}/api/v1${path}`, init);
    } catch (err) {
      throw new ApiError(0, 'network_error', err instanceof Error ? err.message : String(err));
    }
    const text = await resp.text();
    let parsed: unknown = null;
    try {
      parsed = text ? JSON.parse(text) : null;
    } catch {
      // non-JSON body: fall through to the status-based error below
    }
    if (!resp.ok) {
      const errBody = parsed as { error?: string; detail?: unknown } | null;
      const detail =
        typeof errBody?.detail === 'string' ? errBody.detail : `${resp.status} ${resp.statusText}`;
      throw new ApiError(resp.status, errBody?.error ?? 'http_error', detail);
    }
    return parsed as T;
  }

  model(): Promise<ModelOut> {
    return this.request('GET', '/model');
  }

  createSession(symptom: string): Promise<SessionResponse> {
    return this.request('POST', '/sessions', { symptom });
  }

  getSession(id: string): Promise<SessionResponse> {
    return this.request('GET', `/sessions/${encodeURIComponent(id)}`);
  }

  reportOutcome(
    id: string,
    component: string,
    outcome: 'pass' | 'fail',
    override = false,
  ): Promise<SessionResponse> {
    return this.request('POST', `/sessions/${encodeURIComponent(id)}/outcome`, {
      component,
      outcome,
      override,
    });
  }

  whatif(symptom: string, overrides: Record<string, WhatifOverride>): Promise<WhatifResponse> {
    return this.request('POST', '/whatif', { symptom, overrides });
  }

  sensitivity(req: SensitivityRequest): Promise<SensitivityResponse> {
    return this.request('POST', '/sensitivity', req);
  }
}
