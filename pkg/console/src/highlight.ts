/** Lexeme-level syntax highlighting for program text. */

export type SpanClass = "name" | "number" | "punct";

export interface Span {
  text: string;
  cls: SpanClass;
}

const LEXEME = /[A-Za-z_][A-Za-z0-9_]*|\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|./g;

/**
 * Split a program into classified spans. Concatenating the span texts
 * reproduces the input exactly, so rendering loses nothing.
 */
export function highlightProgram(program: string): Span[] {
  const spans: Span[] = [];
  for (const match of program.matchAll(LEXEME)) {
    const text = match[0];
    let cls: SpanClass;
    if (/^[A-Za-z_]/.test(text)) cls = "name";
    else if (/^\d/.test(text)) cls = "number";
    else cls = "punct";
    spans.push({ text, cls });
  }
  return spans;
}

/** The spans as HTML, for direct insertion into the program panel. */
export function highlightHtml(program: string): string {
  return highlightProgram(program)
    .map((span) => `<span class="tok-${span.cls}">${escapeHtml(span.text)}</span>`)
    .join("");
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}
