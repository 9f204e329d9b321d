/** DOM glue: wires the session to the page. Logic lives in the other
 * modules; this file only moves strings and handles events.
 */

import { ApiError, Client, parseErrorDetail } from "./api.js";
import { crossesZero, overlay } from "./chart.js";
import { answerBadge, formSuggestions, paramDiffLegend, parseErrorPointer } from "./format.js";
import { highlightHtml } from "./highlight.js";
import { Session } from "./session.js";

const CHART_WIDTH = 640;
const CHART_HEIGHT = 240;

function element<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

function setUp(): void {
  // ?api=http://host:port targets a service on another origin (it
  // answers with open CORS); default is same-origin /api
  const apiBase = new URLSearchParams(window.location.search).get("api") ?? "";
  const client = new Client(apiBase);
  const session = new Session(client);

  const questionInput = element<HTMLInputElement>("question");
  const submitButton = element<HTMLButtonElement>("submit");
  const programBox = element<HTMLTextAreaElement>("program");
  const programView = element<HTMLElement>("program-view");
  const runButton = element<HTMLButtonElement>("run");
  const engineButton = element<HTMLButtonElement>("engine");
  const badge = element<HTMLElement>("badge");
  const error = element<HTMLElement>("error");
  const chart = element<HTMLElement>("chart");
  const historyList = element<HTMLElement>("history");
  const legend = element<HTMLElement>("legend");

  function refreshControls(): void {
    submitButton.disabled = !session.canSubmit(questionInput.value);
    runButton.disabled = session.busy || programBox.value.trim().length === 0;
    engineButton.textContent = `engine: ${session.engine}`;
  }

  function showEntry(): void {
    const entry = session.history[session.history.length - 1];
    if (!entry) return;
    programBox.value = entry.program;
    programView.innerHTML = highlightHtml(entry.program);
    badge.textContent = answerBadge(entry.program, entry.answer);
    const item = document.createElement("li");
    item.textContent = `${entry.question ?? "(edited program)"} -> ${badge.textContent}`;
    historyList.appendChild(item);
    drawChart();
  }

  function drawChart(): void {
    const pair = session.comparable();
    const latest = session.history[session.history.length - 1];
    const runs = pair ?? (latest ? [latest] : []);
    if (runs.length === 0) return;
    const view = overlay(runs, CHART_WIDTH, CHART_HEIGHT);
    const curves = view.paths
      .map((d, i) => `<path d="${d}" fill="none" class="curve-${i}"/>`)
      .join("");
    const zero = `<line x1="0" x2="${CHART_WIDTH}" y1="${view.zeroY}" y2="${view.zeroY}" class="zero"/>`;
    chart.innerHTML = `<svg viewBox="0 0 ${CHART_WIDTH} ${CHART_HEIGHT}">${zero}${curves}</svg>`;
    if (pair) {
      const [a, b] = pair;
      const verdicts = [a, b]
        .map((e) => (crossesZero(e.series.M_n) ? "collapses" : "stable"))
        .join(" vs ");
      legend.textContent = `${paramDiffLegend(a.params, b.params)} (${verdicts})`;
    } else {
      legend.textContent = "";
    }
  }

  async function showError(err: unknown): Promise<void> {
    if (err instanceof ApiError && err.status === 422) {
      const parse = parseErrorDetail(err);
      if (parse && parse.position !== undefined) {
        error.textContent = `syntax error\n${parseErrorPointer(programBox.value, parse.position)}`;
        return;
      }
      const registry = await client.forms();
      error.textContent =
        "question not understood; recognized forms:\n" +
        formSuggestions(registry).join("\n");
      return;
    }
    error.textContent = `request failed (${String(err)}); try again`;
  }

  submitButton.addEventListener("click", async () => {
    error.textContent = "";
    try {
      if (await session.submitQuestion(questionInput.value)) showEntry();
    } catch (err) {
      await showError(err);
    }
    refreshControls();
  });

  runButton.addEventListener("click", async () => {
    error.textContent = "";
    try {
      if (await session.runProgram(programBox.value)) showEntry();
    } catch (err) {
      await showError(err);
    }
    refreshControls();
  });

  engineButton.addEventListener("click", async () => {
    error.textContent = "";
    try {
      const diff = await session.toggleEngine();
      if (diff) {
        error.textContent = diff.changed
          ? `translation differs:\n- ${diff.before}\n+ ${diff.after}`
          : "translation unchanged";
      }
    } catch (err) {
      await showError(err);
    }
    refreshControls();
  });

  questionInput.addEventListener("input", refreshControls);
  programBox.addEventListener("input", refreshControls);
  refreshControls();
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", setUp);
}
