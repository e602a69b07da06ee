import type {
  LegendModel,
  OverrideRequest,
  SessionState,
  SetSpec,
  ValidateResponse,
  ViewMode,
} from './types.js';

export class ApiError extends Error {
  constructor(readonly code: string, message: string, readonly status: number) {
    super(message);
  }
}

async function parseError(response: Response): Promise<ApiError> {
  let code = 'http-error';
  let message = `${response.status} ${response.statusText}`;
  try {
    const body = await response.json();
    if (body && typeof body.code === 'string') {
      code = body.code;
      message = body.message ?? message;
    }
  } catch {
    /* non-JSON error body; keep the status line */
  }
  return new ApiError(code, message, response.status);
}

/** Thin typed client over the session HTTP/JSON API. */
export class Api {
  constructor(readonly baseUrl: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    if (!response.ok) {
      throw await parseError(response);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  validate(csv: string, key: string, sets: SetSpec[]): Promise<ValidateResponse> {
    return this.post('/validate', { csv, key, sets });
  }

  createSession(csv: string, key: string, sets: SetSpec[], seed: number):
      Promise<{ session_id: string; state: SessionState }> {
    return this.post('/sessions', { csv, key, sets, seed });
  }

  getState(sessionId: string): Promise<SessionState> {
    return this.request(`/sessions/${sessionId}`);
  }

  appendDesigns(sessionId: string, n: number): Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/designs:append`, { n });
  }

  cullDesign(sessionId: string, designId: string): Promise<SessionState> {
    return this.request(`/sessions/${sessionId}/designs/${designId}`,
                        { method: 'DELETE' });
  }

  setMode(sessionId: string, mode: ViewMode): Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/mode`, { mode });
  }

  page(sessionId: string, delta: number): Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/page`, { delta });
  }

  select(sessionId: string, designId: string, rowKey: string):
      Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/select`,
                     { design_id: designId, row_key: rowKey });
  }

  moveGlyph(sessionId: string, key: string, x: number, y: number):
      Promise<SessionState> {
    return this.post(
      `/sessions/${sessionId}/glyphs/${encodeURIComponent(key)}/move`, { x, y });
  }

  resizeGlyph(sessionId: string, key: string, size: number):
      Promise<SessionState> {
    return this.post(
      `/sessions/${sessionId}/glyphs/${encodeURIComponent(key)}/resize`,
      { size });
  }

  override(sessionId: string, designId: string, body: OverrideRequest):
      Promise<SessionState> {
    return this.post(`/sessions/${sessionId}/designs/${designId}/override`,
                     body);
  }

  async sheetSvg(sessionId: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/sessions/${sessionId}/sheet.svg`);
    if (!response.ok) {
      throw await parseError(response);
    }
    return response.text();
  }

  legend(sessionId: string, designId: string, rowKey: string):
      Promise<LegendModel> {
    const params = new URLSearchParams({ design_id: designId, row_key: rowKey });
    return this.request(`/sessions/${sessionId}/legend?${params}`);
  }
}
