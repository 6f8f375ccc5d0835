/** Browser entry point: wires the api/state/render modules to the page.
 * All text shown for feedback comes resolved from the server (message keys
 * are rendered server-side per the lang parameter). */

import { ApiClient } from "./api.js";
import { PALETTE, insertToken } from "./palette.js";
import {
  renderClauseList,
  renderDerivation,
  renderFeedback,
  renderPivotChooser,
  renderPreview,
  renderTaskList,
  renderTransformationSteps,
  escapeHtml,
} from "./render.js";
import { BusyError, SessionController } from "./state.js";
import type { SessionView, TaskView } from "./types.js";

const api = new ApiClient("", new URLSearchParams(location.search).get("lang") ?? "en");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

let controller: SessionController | null = null;
const selectedClauses: number[] = [];
let pendingPivot: { c1: number; c2: number } | null = null;

async function boot(): Promise<void> {
  const listing = await api.listExercises();
  const picker = el<HTMLSelectElement>("exercise-picker");
  picker.innerHTML = listing.exercises
    .map((e) => `<option value="${escapeHtml(e.id)}">${escapeHtml(e.title)}</option>`)
    .join("");
  el<HTMLButtonElement>("start-button").addEventListener("click", () => {
    void startSession(picker.value);
  });
}

async function startSession(exerciseId: string): Promise<void> {
  const group = el<HTMLInputElement>("group-input").value.trim();
  const sessionId = await api.createSession(exerciseId, group);
  controller = new SessionController(api, sessionId);
  controller.subscribe(render);
  await controller.refresh();
}

function render(): void {
  if (!controller?.state.view) return;
  const state = controller.state;
  const view = state.view as SessionView;
  el("stepper").innerHTML = renderTaskList(view);
  el("banner").innerHTML = state.error
    ? `<div class="banner error">${escapeHtml(state.error)} <button id="retry">retry</button></div>`
    : "";
  const retry = document.getElementById("retry");
  retry?.addEventListener("click", () => void controller?.refresh());

  const task = view.tasks[Math.min(view.current, view.tasks.length - 1)];
  el("task-panel").innerHTML = view.completed
    ? `<h2>Done!</h2><p>You finished “${escapeHtml(view.exercise)}”.</p>`
    : renderTaskPanel(task, state.busy);
  if (!view.completed) attachTaskHandlers(task);

  const feedbackHost = el("feedback-panel");
  if (state.lastFeedback) {
    feedbackHost.innerHTML = renderFeedback(state.lastFeedback.items, state.feedbackText);
  } else {
    feedbackHost.innerHTML = "";
  }
}

function renderTaskPanel(task: TaskView, busy: boolean): string {
  const disabled = busy ? " disabled" : "";
  let body = `<h2>${escapeHtml(task.title || task.type)}</h2><div class="description">${task.description}</div>`;
  switch (task.type) {
    case "PickVariables": {
      const boxes = (task.offered ?? [])
        .map(
          (v) =>
            `<label class="offered"><input type="checkbox" name="pickvar" value="${escapeHtml(v.name)}"${disabled}> ` +
            `<b>${escapeHtml(v.name)}</b> — ${escapeHtml(v.meaning)}</label>`,
        )
        .join("");
      body += `<form id="pick-form">${boxes}<button type="submit"${disabled}>submit selection</button></form>`;
      break;
    }
    case "CreateFormulas": {
      const statements = (task.statements ?? [])
        .map((s) => {
          if (s.accepted) {
            return `<div class="statement done"><p>${s.description}</p><code>${escapeHtml(s.text ?? "")}</code> ✓</div>`;
          }
          return (
            `<div class="statement" data-statement="${s.index}"><p>${s.description}</p>` +
            formulaInput(`formula-${s.index}`, disabled) +
            `<button class="submit-formula" data-statement="${s.index}"${disabled}>check</button></div>`
          );
        })
        .join("");
      body += statements;
      break;
    }
    case "InferenceFormula": {
      const premises = (task.premises ?? []).map((p) => `<li><code>${escapeHtml(p)}</code></li>`).join("");
      body +=
        `<p>your formulas:</p><ul>${premises}</ul>` +
        `<p>conclusion: <code>${escapeHtml(task.conclusion ?? "")}</code></p>` +
        formulaInput("inference", disabled) +
        `<button id="submit-inference"${disabled}>check</button>`;
      break;
    }
    case "ManualTransformation": {
      body +=
        renderTransformationSteps(task) +
        formulaInput("step", disabled) +
        `<button id="submit-step"${disabled}>submit step</button> <button id="undo-step"${disabled}>undo</button>`;
      break;
    }
    case "GuiTransformation": {
      const rules = (task.rules ?? [])
        .map((r) => `<option value="${escapeHtml(r.id)}">${escapeHtml(r.id)}</option>`)
        .join("");
      body +=
        renderTransformationSteps(task) +
        `<p>current: <code id="gui-current">${escapeHtml(task.current ?? "")}</code></p>` +
        `<label>rule <select id="rule-picker"${disabled}>${rules}</select></label> ` +
        `<label>position <input id="rule-position" placeholder="e.g. 0,1" size="8"${disabled}></label> ` +
        `<button id="apply-rule"${disabled}>apply</button> <button id="undo-step"${disabled}>undo</button>`;
      break;
    }
    case "Resolution": {
      body +=
        renderClauseList(task.clauses ?? [], selectedClauses) +
        (pendingPivot ? renderPivotChooser(pivotCandidates(task)) : "") +
        `<button id="resolve-button"${disabled}>resolve selected</button>` +
        renderDerivation(task.clauses ?? []);
      break;
    }
    case "Questionnaire": {
      const questions = (task.questions ?? [])
        .map((q, qi) => {
          const options = q.options
            .map(
              (option, oi) =>
                `<label><input type="checkbox" name="q${qi}" value="${oi}"${disabled}> ${escapeHtml(option)}</label>`,
            )
            .join("");
          return `<fieldset data-question="${qi}"><legend>${escapeHtml(q.text)}</legend>${options}</fieldset>`;
        })
        .join("");
      body += `<form id="questionnaire-form">${questions}<button type="submit"${disabled}>submit answers</button></form>`;
      break;
    }
    case "Message":
      body += `<button id="acknowledge"${disabled}>continue</button>`;
      break;
    case "CollectFeedback":
      body +=
        `<p>${escapeHtml(task.prompt ?? "")}</p><textarea id="feedback-text" rows="4"${disabled}></textarea>` +
        `<button id="submit-feedback"${disabled}>send</button>`;
      break;
  }
  return body;
}

function formulaInput(id: string, disabled: string): string {
  const buttons = PALETTE.map(
    (p) => `<button type="button" class="palette" data-token="${escapeHtml(p.token)}" data-for="${id}"${disabled}>${p.label}</button>`,
  ).join("");
  return (
    `<div class="formula-input"><input id="${id}" class="formula-field" autocomplete="off" spellcheck="false"${disabled}>` +
    `<div class="palette-row">${buttons}</div><div class="preview" id="${id}-preview"></div></div>`
  );
}

function pivotCandidates(task: TaskView): string[] {
  if (!pendingPivot || !task.clauses) return [];
  const c1 = task.clauses.find((c) => c.id === pendingPivot!.c1);
  const c2 = task.clauses.find((c) => c.id === pendingPivot!.c2);
  if (!c1 || !c2) return [];
  const names = (lits: string[], sign: boolean) =>
    new Set(lits.filter((l) => l.startsWith("!") !== sign).map((l) => l.replace("!", "")));
  const out: string[] = [];
  for (const name of names(c1.literals, true)) if (names(c2.literals, false).has(name)) out.push(name);
  for (const name of names(c1.literals, false)) if (names(c2.literals, true).has(name)) out.push(name);
  return [...new Set(out)].sort();
}

function attachTaskHandlers(task: TaskView): void {
  if (!controller) return;
  const ctl = controller;
  const dispatch = (kind: string, payload: Record<string, unknown>) => {
    ctl.act(task.index, kind, payload).catch((err) => {
      if (!(err instanceof BusyError)) console.error(err);
    });
  };

  document.querySelectorAll<HTMLButtonElement>("button.palette").forEach((button) => {
    button.addEventListener("click", () => {
      const field = el<HTMLInputElement>(button.dataset.for!);
      const { text, cursor } = insertToken(
        field.value,
        field.selectionStart ?? field.value.length,
        field.selectionEnd ?? field.value.length,
        button.dataset.token!,
      );
      field.value = text;
      field.focus();
      field.setSelectionRange(cursor, cursor);
      field.dispatchEvent(new Event("input"));
    });
  });
  document.querySelectorAll<HTMLInputElement>(".formula-field").forEach((field) => {
    const preview = document.getElementById(`${field.id}-preview`);
    field.addEventListener("input", () => {
      if (preview) preview.innerHTML = renderPreview(field.value);
    });
  });

  document.getElementById("pick-form")?.addEventListener("submit", (event) => {
    event.preventDefault();
    const names = [...document.querySelectorAll<HTMLInputElement>("input[name=pickvar]:checked")].map(
      (box) => box.value,
    );
    dispatch("pick-variables", { names });
  });
  document.querySelectorAll<HTMLButtonElement>(".submit-formula").forEach((button) => {
    button.addEventListener("click", () => {
      const statement = Number(button.dataset.statement);
      const field = el<HTMLInputElement>(`formula-${statement}`);
      dispatch("submit-formula", { statement, text: field.value });
    });
  });
  document.getElementById("submit-inference")?.addEventListener("click", () => {
    dispatch("submit-formula", { text: el<HTMLInputElement>("inference").value });
  });
  document.getElementById("submit-step")?.addEventListener("click", () => {
    dispatch("submit-step", { text: el<HTMLInputElement>("step").value });
  });
  document.getElementById("undo-step")?.addEventListener("click", () => dispatch("undo", {}));
  document.getElementById("apply-rule")?.addEventListener("click", () => {
    const rule = el<HTMLSelectElement>("rule-picker").value;
    const raw = el<HTMLInputElement>("rule-position").value.trim();
    const position = raw === "" ? [] : raw.split(",").map((part) => Number(part.trim()));
    dispatch("apply-rule", { rule, position });
  });

  document.querySelectorAll<HTMLElement>("li.clause").forEach((item) => {
    item.addEventListener("click", () => {
      const id = Number(item.dataset.clause);
      const at = selectedClauses.indexOf(id);
      if (at >= 0) selectedClauses.splice(at, 1);
      else {
        selectedClauses.push(id);
        if (selectedClauses.length > 2) selectedClauses.shift();
      }
      pendingPivot = null;
      render();
    });
  });
  document.getElementById("resolve-button")?.addEventListener("click", () => {
    if (selectedClauses.length !== 2) return;
    const [c1, c2] = selectedClauses;
    const candidates = pivotCandidates(task);
    if (candidates.length > 1 && !pendingPivot) {
      // several complementary pairs: ask for the pivot before submitting
      pendingPivot = { c1, c2 };
      render();
      return;
    }
    dispatch("resolve-step", { c1, c2 });
    selectedClauses.length = 0;
  });
  document.querySelectorAll<HTMLButtonElement>("button.pivot-choice").forEach((button) => {
    button.addEventListener("click", () => {
      if (!pendingPivot) return;
      const { c1, c2 } = pendingPivot;
      pendingPivot = null;
      dispatch("resolve-step", { c1, c2, pivot: button.dataset.pivot });
      selectedClauses.length = 0;
    });
  });

  document.getElementById("acknowledge")?.addEventListener("click", () => dispatch("acknowledge", {}));
  document.getElementById("questionnaire-form")?.addEventListener("submit", (event) => {
    event.preventDefault();
    const choices = (task.questions ?? []).map((_, qi) =>
      [...document.querySelectorAll<HTMLInputElement>(`input[name=q${qi}]:checked`)].map((box) =>
        Number(box.value),
      ),
    );
    dispatch("answer", { choices });
  });
  document.getElementById("submit-feedback")?.addEventListener("click", () => {
    dispatch("submit-text", { text: el<HTMLTextAreaElement>("feedback-text").value });
  });
}

void boot();
