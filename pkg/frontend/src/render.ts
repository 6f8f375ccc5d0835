/** HTML renderers. Pure string-in/string-out so they test without a DOM;
 * main.ts attaches the results to the page. Everything user- or
 * server-provided is escaped; highlight spans become <mark> around the
 * exact character range the server reported. */

import { parsePreview, pretty } from "./parser.js";
import { taskGate } from "./state.js";
import type {
  ActionResponse,
  ClauseView,
  FeedbackItemWire,
  SessionView,
  TaskView,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const STATUS_ICON = { done: "✓", open: "▸", locked: "🔒" } as const;

export function renderTaskList(view: SessionView): string {
  const items = view.tasks.map((task, i) => {
    const gate = taskGate(view, i);
    const icon = STATUS_ICON[gate];
    const cls = `step step-${gate}${i === view.current ? " step-current" : ""}`;
    return `<li class="${cls}" data-task="${i}"><span class="icon">${icon}</span> ${escapeHtml(task.title || task.type)}</li>`;
  });
  const done = view.completed ? '<li class="step step-finished">🎉 exercise complete</li>' : "";
  return `<ol class="stepper">${items.join("")}${done}</ol>`;
}

/** The submitted text with the reported span wrapped in <mark>. */
export function renderHighlight(text: string, span: number[]): string {
  const [start, end] = span;
  const safeStart = Math.max(0, Math.min(start, text.length));
  const safeEnd = Math.max(safeStart, Math.min(end, text.length));
  return (
    escapeHtml(text.slice(0, safeStart)) +
    `<mark>${escapeHtml(text.slice(safeStart, safeEnd))}</mark>` +
    escapeHtml(text.slice(safeEnd))
  );
}

export function renderAssignmentTable(assignment: Record<string, boolean>): string {
  const head = Object.keys(assignment)
    .map((name) => `<th>${escapeHtml(name)}</th>`)
    .join("");
  const row = Object.values(assignment)
    .map((value) => `<td>${value ? "true" : "false"}</td>`)
    .join("");
  return `<table class="assignment"><thead><tr>${head}</tr></thead><tbody><tr>${row}</tr></tbody></table>`;
}

/** Feedback items in server order. `submittedText` is the text a highlight
 * item's span indexes into. */
export function renderFeedback(items: FeedbackItemWire[], submittedText: string | null): string {
  const parts = items.map((item) => {
    let body = `<p>${escapeHtml(item.text)}</p>`;
    if (item.kind === "highlight" && item.span && submittedText !== null) {
      body += `<pre class="highlighted-formula">${renderHighlight(submittedText, item.span)}</pre>`;
    }
    if (item.kind === "counterexample" && item.assignment) {
      body += renderAssignmentTable(item.assignment);
    }
    if (item.kind === "syntax-message" && submittedText !== null) {
      const offset = Number(item.params["offset"] ?? 0);
      const caret = " ".repeat(Math.min(offset, submittedText.length)) + "^";
      body += `<pre class="caret">${escapeHtml(submittedText)}\n${escapeHtml(caret)}</pre>`;
    }
    return `<li class="feedback-item feedback-${item.kind}">${body}</li>`;
  });
  return `<ul class="feedback">${parts.join("")}</ul>`;
}

export function renderVerdict(response: ActionResponse): string {
  const cls = response.accepted ? "verdict-ok" : "verdict-no";
  return `<div class="verdict ${cls}">${renderFeedback(response.items, null)}</div>`;
}

/** Live preview under the formula field; parse errors point at the offset. */
export function renderPreview(text: string): string {
  if (text.trim() === "") return '<span class="preview-empty"></span>';
  const result = parsePreview(text);
  if (result.ok) {
    return `<span class="preview-ok">${escapeHtml(pretty(result.ast))}</span>`;
  }
  const caret = " ".repeat(Math.min(result.offset, text.length)) + "^";
  return `<pre class="preview-error">${escapeHtml(text)}\n${escapeHtml(caret)} ${escapeHtml(result.message)}</pre>`;
}

export function prettyClause(literals: string[]): string {
  if (literals.length === 0) return "∅";
  const shown = literals.map((lit) => (lit.startsWith("!") ? `¬${lit.slice(1)}` : lit));
  return `{${shown.join(", ")}}`;
}

export function renderClauseList(clauses: ClauseView[], selected: number[]): string {
  const rows = clauses.map((clause) => {
    const checked = selected.includes(clause.id) ? " selected" : "";
    const derived = clause.parents ? " derived" : " initial";
    return (
      `<li class="clause${checked}${derived}" data-clause="${clause.id}">` +
      `<span class="clause-id">${clause.id}</span> ${escapeHtml(prettyClause(clause.literals))}</li>`
    );
  });
  return `<ul class="clauses">${rows.join("")}</ul>`;
}

/** Parent -> child edges with pivot labels, bottom-up text rendering of the
 * derivation graph. */
export function renderDerivation(clauses: ClauseView[]): string {
  const derived = clauses.filter((c) => c.parents);
  if (derived.length === 0) return '<p class="derivation-empty">no derived clauses yet</p>';
  const rows = derived.map(
    (c) =>
      `<li>${c.parents![0]} + ${c.parents![1]} —<span class="pivot">${escapeHtml(c.pivot ?? "")}</span>→ ` +
      `<b>${c.id}</b> ${escapeHtml(prettyClause(c.literals))}</li>`,
  );
  return `<ol class="derivation">${rows.join("")}</ol>`;
}

export function renderPivotChooser(candidates: string[]): string {
  const buttons = candidates
    .map((name) => `<button class="pivot-choice" data-pivot="${escapeHtml(name)}">${escapeHtml(name)}</button>`)
    .join(" ");
  return `<div class="pivot-chooser">resolve on: ${buttons}</div>`;
}

export function renderTransformationSteps(task: TaskView): string {
  const steps = [task.original ?? "", ...(task.steps ?? [])];
  const rows = steps
    .map((step, i) => {
      const label = i === 0 ? "start" : `step ${i}`;
      return `<li><span class="step-label">${label}</span> <code>${escapeHtml(step)}</code></li>`;
    })
    .join("");
  const done = task.complete ? ' <span class="target-reached">target reached</span>' : "";
  return `<ol class="transformation-steps">${rows}</ol>${done}`;
}
