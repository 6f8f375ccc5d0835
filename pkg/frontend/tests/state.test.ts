import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { BusyError, SessionController, taskGate } from "../src/state.js";
import type { SessionView } from "../src/types.js";

const VIEW: SessionView = {
  session: "s1",
  exercise: "ex",
  group: "",
  current: 0,
  completed: false,
  environment: {},
  tasks: [
    { index: 0, type: "Message", title: "A", description: "", inputs: [], output: null, feedback_levels: [0] },
    { index: 1, type: "Message", title: "B", description: "", inputs: [], output: null, feedback_levels: [0] },
  ],
};

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("SessionController", () => {
  it("refresh mirrors the server view verbatim", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(VIEW)));
    const controller = new SessionController(new ApiClient("http://x"), "s1");
    await controller.refresh();
    expect(controller.state.view).toEqual(VIEW);
    expect(controller.state.error).toBeNull();
  });

  it("allows only one action in flight", async () => {
    let release: (() => void) | null = null;
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const fetchMock = vi.fn(async (url: RequestInfo | URL) => {
      if (String(url).includes("/actions")) {
        await gate;
        return jsonResponse({ accepted: true, verdict: "correct", items: [], task_completed: true, session_completed: false, current_task: 1, error_class: "none" });
      }
      return jsonResponse(VIEW);
    });
    vi.stubGlobal("fetch", fetchMock);
    const controller = new SessionController(new ApiClient("http://x"), "s1");
    const first = controller.act(0, "acknowledge", {});
    await expect(controller.act(0, "acknowledge", {})).rejects.toBeInstanceOf(BusyError);
    release!();
    const result = await first;
    expect(result.accepted).toBe(true);
    expect(controller.state.busy).toBe(false);
  });

  it("keeps the submitted text so highlights can index into it", async () => {
    const fetchMock = vi.fn(async (url: RequestInfo | URL) => {
      if (String(url).includes("/actions")) {
        return jsonResponse({ accepted: false, verdict: "semantically-wrong", items: [], task_completed: false, session_completed: false, current_task: 0, error_class: "inequivalent" });
      }
      return jsonResponse(VIEW);
    });
    vi.stubGlobal("fetch", fetchMock);
    const controller = new SessionController(new ApiClient("http://x"), "s1");
    await controller.act(0, "submit-formula", { statement: 0, text: "(D & U) -> !B" });
    expect(controller.state.feedbackText).toBe("(D & U) -> !B");
    expect(controller.state.lastFeedback?.verdict).toBe("semantically-wrong");
  });

  it("surfaces 409 busy as a retryable error", async () => {
    const fetchMock = vi.fn(async (url: RequestInfo | URL) => {
      if (String(url).includes("/actions")) {
        return jsonResponse({ detail: "session is busy, retry" }, 409);
      }
      return jsonResponse(VIEW);
    });
    vi.stubGlobal("fetch", fetchMock);
    const controller = new SessionController(new ApiClient("http://x"), "s1");
    await expect(controller.act(0, "acknowledge", {})).rejects.toBeInstanceOf(ApiError);
    expect(controller.state.error).toBe("busy");
    // the controller recovers: the next action may go out
    expect(controller.state.busy).toBe(false);
  });

  it("notifies subscribers on every change", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(VIEW)));
    const controller = new SessionController(new ApiClient("http://x"), "s1");
    const seen: boolean[] = [];
    controller.subscribe((state) => seen.push(state.busy));
    await controller.refresh();
    expect(seen.length).toBeGreaterThan(0);
  });
});

describe("taskGate", () => {
  it("locks tasks past the current one and marks earlier ones done", () => {
    const view = { ...VIEW, current: 1 };
    expect(taskGate(view, 0)).toBe("done");
    expect(taskGate(view, 1)).toBe("open");
    const later = { ...VIEW, current: 0 };
    expect(taskGate(later, 1)).toBe("locked");
  });

  it("treats a completed session as all done", () => {
    const view = { ...VIEW, current: 2, completed: true };
    expect(taskGate(view, 0)).toBe("done");
    expect(taskGate(view, 1)).toBe("done");
  });
});
