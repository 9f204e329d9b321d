/** Rendering helpers: answer badges, number display, error pointers. */

import type { Answer, FormRegistry, ParamsUsed } from "./api.js";

/** Outer operation name of a program, e.g. "FinalValue". */
export function outerOperation(program: string): string {
  const open = program.indexOf("(");
  return open < 0 ? program : program.slice(0, open);
}

/**
 * Short badge text for an answer. Numbers keep their unit; boolean
 * verdicts are worded by the question's operation: a sign-change check
 * reads COLLAPSE / NO-COLLAPSE, an increase check INCREASES / DECREASES.
 */
export function answerBadge(program: string, answer: Answer): string {
  if (answer.kind === "number") {
    const text = formatNumber(answer.value as number);
    return answer.unit ? `${text} ${answer.unit}` : text;
  }
  switch (outerOperation(program)) {
    case "ChangeSign":
      return answer.value ? "COLLAPSE" : "NO-COLLAPSE";
    case "IncreaseOf":
      return answer.value ? "INCREASES" : "DECREASES";
    default:
      return String(answer.value);
  }
}

/** Compact display with six significant digits; integers stay plain. */
export function formatNumber(value: number): string {
  if (!Number.isFinite(value)) return String(value);
  if (Number.isInteger(value) && Math.abs(value) < 1e15) return String(value);
  const precise = value.toPrecision(6);
  return String(Number(precise));
}

/** Lines of "name: a -> b" for parameters that differ between two runs. */
export function paramDiff(a: ParamsUsed, b: ParamsUsed): string[] {
  const names = Object.keys(a) as (keyof ParamsUsed)[];
  const out: string[] = [];
  for (const name of names) {
    if (a[name] !== b[name]) {
      out.push(`${name}: ${formatNumber(a[name])} -> ${formatNumber(b[name])}`);
    }
  }
  return out;
}

/** Legend text for an overlay of two runs. */
export function paramDiffLegend(a: ParamsUsed, b: ParamsUsed): string {
  const diff = paramDiff(a, b);
  return diff.length === 0 ? "identical parameters" : diff.join(", ");
}

/**
 * Two-line inline pointer for a parse error: the program text with a
 * caret under the offending position (as reported by the server).
 */
export function parseErrorPointer(program: string, position: number): string {
  const clamped = Math.max(0, Math.min(position, program.length));
  return `${program}\n${" ".repeat(clamped)}^`;
}

/** Question templates offered as suggestions after a failed match. */
export function formSuggestions(registry: FormRegistry): string[] {
  return registry.forms.map((form) => form.template);
}
