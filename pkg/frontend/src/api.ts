/** Typed client for the exercise service. All grading happens server-side;
 * this module only moves JSON. */

import type { ActionResponse, ExerciseSummary, SessionView } from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: unknown,
    message?: string,
  ) {
    super(message ?? `request failed with status ${status}`);
  }

  get isBusy(): boolean {
    return this.status === 409 && JSON.stringify(this.body ?? "").includes("busy");
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  let body: unknown = null;
  const text = await response.text();
  if (text) {
    try {
      body = JSON.parse(text);
    } catch {
      body = text;
    }
  }
  if (!response.ok) {
    throw new ApiError(response.status, body);
  }
  return body as T;
}

export class ApiClient {
  constructor(
    public baseUrl: string = "",
    public language: string = "en",
  ) {}

  listExercises(): Promise<{ exercises: ExerciseSummary[] }> {
    return request(`${this.baseUrl}/exercises`);
  }

  getExercise(id: string): Promise<unknown> {
    return request(`${this.baseUrl}/exercises/${encodeURIComponent(id)}`);
  }

  async createSession(exercise: string, group = ""): Promise<string> {
    const body = await request<{ session: string }>(`${this.baseUrl}/sessions`, {
      method: "POST",
      body: JSON.stringify({ exercise, group }),
    });
    return body.session;
  }

  getSession(session: string): Promise<SessionView> {
    return request(`${this.baseUrl}/sessions/${encodeURIComponent(session)}`);
  }

  postAction(
    session: string,
    task: number,
    kind: string,
    payload: Record<string, unknown>,
  ): Promise<ActionResponse> {
    const lang = encodeURIComponent(this.language);
    return request(
      `${this.baseUrl}/sessions/${encodeURIComponent(session)}/actions?lang=${lang}`,
      { method: "POST", body: JSON.stringify({ task, kind, payload }) },
    );
  }

  getStats(exercise?: string, group?: string): Promise<unknown> {
    const params = new URLSearchParams();
    if (exercise) params.set("exercise", exercise);
    if (group) params.set("group", group);
    const suffix = params.toString() ? `?${params}` : "";
    return request(`${this.baseUrl}/stats${suffix}`);
  }
}
