/** Client session state: a mirror of the server view plus the last
 * feedback. There is no client-side grading; every verdict shown comes
 * verbatim from the last action response or session view. One action is in
 * flight at a time — inputs stay disabled until the server answers (the
 * server's 409 is the backstop, not the mechanism). */

import { ApiClient, ApiError } from "./api.js";
import type { ActionResponse, SessionView } from "./types.js";

export interface ViewState {
  view: SessionView | null;
  lastFeedback: ActionResponse | null;
  feedbackTask: number | null;
  feedbackText: string | null; // the submitted text a highlight span indexes into
  busy: boolean;
  error: string | null;
}

export type Listener = (state: ViewState) => void;

export class BusyError extends Error {
  constructor() {
    super("an action is already in flight");
  }
}

export class SessionController {
  state: ViewState = {
    view: null,
    lastFeedback: null,
    feedbackTask: null,
    feedbackText: null,
    busy: false,
    error: null,
  };

  private listeners: Listener[] = [];

  constructor(
    public api: ApiClient,
    public sessionId: string,
  ) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private patch(partial: Partial<ViewState>): void {
    this.state = { ...this.state, ...partial };
    this.emit();
  }

  async refresh(): Promise<SessionView> {
    const view = await this.api.getSession(this.sessionId);
    this.patch({ view, error: null });
    return view;
  }

  /** Dispatch one action; resolves to the server's response after the
   * session view has been refreshed. */
  async act(
    task: number,
    kind: string,
    payload: Record<string, unknown>,
  ): Promise<ActionResponse> {
    if (this.state.busy) throw new BusyError();
    this.patch({ busy: true, error: null });
    try {
      const response = await this.api.postAction(this.sessionId, task, kind, payload);
      const submitted = typeof payload.text === "string" ? payload.text : null;
      this.patch({ lastFeedback: response, feedbackTask: task, feedbackText: submitted });
      await this.refresh();
      return response;
    } catch (err) {
      if (err instanceof ApiError) {
        this.patch({ error: err.isBusy ? "busy" : `request failed (${err.status})` });
      } else {
        this.patch({ error: "connection lost, retry" });
      }
      throw err;
    } finally {
      this.patch({ busy: false });
    }
  }
}

/** Task gating for the stepper: a task is open when it is the current one,
 * done when before it; later tasks stay locked until their inputs exist. */
export function taskGate(view: SessionView, index: number): "done" | "open" | "locked" {
  if (index < view.current) return "done";
  if (index === view.current && !view.completed) return "open";
  return "locked";
}
