/** Tiny DOM helpers; no framework, elements are built and replaced wholesale. */

export function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  children: (Node | string)[] = [],
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [name, value] of Object.entries(attrs)) {
    node.setAttribute(name, value);
  }
  for (const child of children) {
    node.append(child);
  }
  return node;
}

export function clear(node: HTMLElement): void {
  while (node.firstChild) {
    node.removeChild(node.firstChild);
  }
}

/**
 * A sentence with every occurrence of `surface` wrapped in <mark>.
 *
 * Matching is case-insensitive to mirror phrase detection; the original
 * casing of the sentence is preserved.
 */
export function highlightFeature(sentence: string, surface: string): HTMLElement {
  const span = el("span", { class: "context-sentence" });
  if (!surface) {
    span.textContent = sentence;
    return span;
  }
  const needle = surface.toLowerCase();
  const haystack = sentence.toLowerCase();
  let cursor = 0;
  for (;;) {
    const hit = haystack.indexOf(needle, cursor);
    if (hit < 0) {
      break;
    }
    span.append(sentence.slice(cursor, hit));
    span.append(el("mark", {}, [sentence.slice(hit, hit + surface.length)]));
    cursor = hit + surface.length;
  }
  span.append(sentence.slice(cursor));
  return span;
}

/** Scores arrive as cosine values or counts; show both compactly. */
export function formatScore(score: number, workflow: string): string {
  if (workflow === "per_feature") {
    return `${score} occurrence${score === 1 ? "" : "s"}`;
  }
  return score.toFixed(3);
}
