import {
  ChartView,
  ModelView,
  ScoresView,
  SessionView,
  WeightMapping,
} from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = 'internal';
  let message = `HTTP ${response.status}`;
  try {
    const body = await response.json();
    if (body && body.error) {
      code = body.error.code ?? code;
      message = body.error.message ?? message;
    }
  } catch {
    // non-JSON error body; keep defaults
  }
  return new ApiError(response.status, code, message);
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    public assessorId: string | null = null,
  ) {}

  private headers(json = true): Record<string, string> {
    const headers: Record<string, string> = {};
    if (json) headers['Content-Type'] = 'application/json';
    if (this.assessorId) headers['X-Assessor-Id'] = this.assessorId;
    return headers;
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) throw await parseError(response);
    return (await response.json()) as T;
  }

  getModel(modelId: string, version?: number): Promise<ModelView> {
    const query = version ? `?version=${version}` : '';
    return this.request(`/api/models/${modelId}${query}`);
  }

  getSession(sessionId: string): Promise<SessionView> {
    return this.request(`/api/sessions/${sessionId}`);
  }

  submitResponse(
    sessionId: string,
    practiceId: string,
    level: number,
    comment?: string,
  ): Promise<SessionView> {
    return this.request(`/api/sessions/${sessionId}/responses`, {
      method: 'POST',
      headers: this.headers(),
      body: JSON.stringify({
        assessor_id: this.assessorId,
        practice_id: practiceId,
        level,
        comment: comment || null,
      }),
    });
  }

  whatIf(sessionId: string, weights?: WeightMapping): Promise<ScoresView> {
    const query = weights
      ? `?weights=${encodeURIComponent(JSON.stringify(weights))}`
      : '';
    return this.request(`/api/sessions/${sessionId}/scores${query}`);
  }

  setWeights(sessionId: string, weights: WeightMapping): Promise<SessionView> {
    return this.request(`/api/sessions/${sessionId}/weights`, {
      method: 'PUT',
      headers: this.headers(),
      body: JSON.stringify({ weights }),
    });
  }

  recordConsensus(
    sessionId: string,
    practiceId: string,
    agreedScore: number,
    gaps: { description: string; severity: string }[] = [],
    actions: string[] = [],
  ): Promise<SessionView> {
    return this.request(`/api/sessions/${sessionId}/consensus/${practiceId}`, {
      method: 'POST',
      headers: this.headers(),
      body: JSON.stringify({ agreed_score: agreedScore, gaps, actions }),
    });
  }

  transition(sessionId: string, transition: string): Promise<{ session: SessionView }> {
    return this.request(`/api/sessions/${sessionId}/phase`, {
      method: 'POST',
      headers: this.headers(),
      body: JSON.stringify({ transition }),
    });
  }

  getChart(sessionId: string): Promise<ChartView> {
    return this.request(`/api/sessions/${sessionId}/chart`);
  }

  reportUrl(sessionId: string, format: 'markdown' | 'structured'): string {
    return `${this.baseUrl}/api/sessions/${sessionId}/report?format=${format}`;
  }
}
