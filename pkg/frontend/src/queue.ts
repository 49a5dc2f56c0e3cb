/**
 * Review queue for one session.
 *
 * Renders undecided items first, lets the expert pick a candidate with the
 * mouse or keyboard (1-6 = candidate, N = no match, S = skip), posts each
 * decision as exactly one API call, and applies the server's confirmation
 * without reloading.  A failed post keeps the chosen value on a visible
 * retry control so nothing is lost silently.
 */
import { ApiClient } from "./api.js";
import { clear, el, formatScore, highlightFeature } from "./dom.js";
import type { ExportResponse, ReviewItem, SessionDetail } from "./types.js";
import { NO_MATCH, SKIPPED } from "./types.js";

interface FailedDecision {
  choice: string;
  message: string;
}

/** The feature surface an item is about; used for context highlighting. */
export function featureOf(item: ReviewItem, workflow: string): string {
  if (workflow === "per_feature") {
    return item.key;
  }
  const parts = item.key.split("|");
  return parts.length >= 5 ? parts.slice(4).join("|") : item.key;
}

function decisionLabel(decision: string): string {
  if (decision === NO_MATCH) return "no match";
  if (decision === SKIPPED) return "skipped";
  return decision;
}

export class SessionQueue {
  private readonly root: HTMLElement;
  private readonly client: ApiClient;
  private readonly sessionId: string;
  private readonly reviewer: string;

  private detail: SessionDetail | null = null;
  private loadError: string | null = null;
  private selectedKey: string | null = null;
  private pending = new Set<string>();
  private failures = new Map<string, FailedDecision>();
  private exportResult: ExportResponse | null = null;
  private exportError: string | null = null;
  private readonly onKeyDown = (event: KeyboardEvent) => this.handleKey(event);

  constructor(root: HTMLElement, client: ApiClient, sessionId: string, reviewer = "") {
    this.root = root;
    this.client = client;
    this.sessionId = sessionId;
    this.reviewer = reviewer;
  }

  /** Fetch the session and render; also installs the keyboard handler. */
  async mount(): Promise<void> {
    document.addEventListener("keydown", this.onKeyDown);
    await this.reload();
  }

  dispose(): void {
    document.removeEventListener("keydown", this.onKeyDown);
  }

  /** Re-fetch server truth; used on mount and by the retry banner. */
  async reload(): Promise<void> {
    this.loadError = null;
    try {
      this.detail = await this.client.getSession(this.sessionId);
      const firstOpen = this.detail.items.find((item) => item.decision === null);
      this.selectedKey = firstOpen ? firstOpen.key : null;
    } catch (err) {
      this.detail = null;
      this.loadError = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  private item(key: string): ReviewItem | undefined {
    return this.detail?.items.find((it) => it.key === key);
  }

  private selectedItem(): ReviewItem | undefined {
    return this.selectedKey ? this.item(this.selectedKey) : undefined;
  }

  private handleKey(event: KeyboardEvent): void {
    const target = event.target as HTMLElement | null;
    if (target && (target.tagName === "INPUT" || target.tagName === "TEXTAREA")) {
      return;
    }
    const item = this.selectedItem();
    if (!item || !this.detail) {
      return;
    }
    if (event.key >= "1" && event.key <= "6") {
      const candidate = item.candidates[Number(event.key) - 1];
      if (candidate) {
        void this.decide(item.key, candidate.record_id);
      }
      return;
    }
    const key = event.key.toLowerCase();
    if (key === "n") {
      void this.decide(item.key, NO_MATCH);
    } else if (key === "s") {
      void this.decide(item.key, SKIPPED);
    }
  }

  /** Post one decision and apply the server's confirmation. */
  async decide(itemKey: string, choice: string): Promise<void> {
    if (!this.detail || this.pending.has(itemKey)) {
      return;
    }
    this.pending.add(itemKey);
    this.failures.delete(itemKey);
    this.render();
    try {
      const confirmed = await this.client.postDecision(
        this.sessionId, itemKey, choice, this.reviewer,
      );
      const item = this.item(itemKey);
      if (item) {
        item.decision = confirmed.choice;
      }
      this.detail.status = confirmed.session_status;
      this.detail.n_decided = confirmed.n_decided;
      if (this.selectedKey === itemKey) {
        const nextOpen = this.detail.items.find((it) => it.decision === null);
        this.selectedKey = nextOpen ? nextOpen.key : null;
      }
    } catch (err) {
      this.failures.set(itemKey, {
        choice,
        message: err instanceof Error ? err.message : String(err),
      });
    } finally {
      this.pending.delete(itemKey);
      this.render();
    }
  }

  async exportLinks(): Promise<void> {
    this.exportError = null;
    try {
      this.exportResult = await this.client.exportSession(this.sessionId);
    } catch (err) {
      this.exportError = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  select(itemKey: string): void {
    this.selectedKey = itemKey;
    this.render();
  }

  render(): void {
    clear(this.root);
    if (this.loadError !== null) {
      this.root.append(
        el("div", { class: "error-banner", role: "alert" }, [
          `could not load session: ${this.loadError} `,
          this.button("retry", "retry-load", () => void this.reload()),
        ]),
      );
      return;
    }
    if (!this.detail) {
      this.root.append(el("p", { class: "loading" }, ["loading session..."]));
      return;
    }
    this.root.append(this.header());
    if (this.detail.items.length === 0) {
      this.root.append(el("p", { class: "empty-state" }, ["nothing to review"]));
      return;
    }
    const open = this.detail.items.filter((item) => item.decision === null);
    const done = this.detail.items.filter((item) => item.decision !== null);
    const queue = el("section", { class: "queue" }, [
      el("h2", {}, [`to review (${open.length})`]),
    ]);
    for (const item of open) {
      queue.append(this.card(item));
    }
    if (open.length === 0) {
      queue.append(el("p", { class: "queue-done" }, ["all items decided"]));
    }
    this.root.append(queue);

    const decided = el("section", { class: "decided" }, [
      el("h2", {}, [`decided (${done.length})`]),
    ]);
    for (const item of done) {
      decided.append(this.card(item));
    }
    this.root.append(decided);
    this.root.append(this.exportArea());
  }

  private header(): HTMLElement {
    const d = this.detail!;
    return el("header", { class: "session-header" }, [
      el("h1", {}, [d.session_id]),
      el("p", { class: "session-meta" }, [
        `paper ${d.paper_id} | ${d.workflow.replace("_", "-")} | ` +
          `${d.n_decided}/${d.n_items} decided | ${d.status}`,
      ]),
    ]);
  }

  private card(item: ReviewItem): HTMLElement {
    const d = this.detail!;
    const selected = item.key === this.selectedKey;
    const classes = ["card"];
    if (selected) classes.push("selected");
    if (item.decision !== null) classes.push("done");
    const card = el("article", { class: classes.join(" "), "data-key": item.key });
    card.addEventListener("click", () => this.select(item.key));

    const title = featureOf(item, d.workflow);
    card.append(
      el("h3", { class: "card-title" }, [
        title,
        el("span", { class: "member-count" }, [` (${item.mention_keys.length} mention${item.mention_keys.length === 1 ? "" : "s"})`]),
      ]),
    );
    if (item.decision !== null) {
      card.append(el("p", { class: "decision" }, [`decision: ${decisionLabel(item.decision)}`]));
    }

    const failure = this.failures.get(item.key);
    if (failure) {
      card.append(
        el("div", { class: "error-banner", role: "alert" }, [
          `saving failed: ${failure.message} `,
          this.button(
            `retry ${decisionLabel(failure.choice)}`,
            "retry-decision",
            () => void this.decide(item.key, failure.choice),
          ),
        ]),
      );
    }
    if (this.pending.has(item.key)) {
      card.append(el("p", { class: "saving" }, ["saving..."]));
    }
    if (selected) {
      card.append(this.details(item, title));
    }
    return card;
  }

  private details(item: ReviewItem, feature: string): HTMLElement {
    const d = this.detail!;
    const box = el("div", { class: "card-details" });
    const context = el("ul", { class: "context" });
    for (const sentence of item.context) {
      context.append(el("li", {}, [highlightFeature(sentence, feature)]));
    }
    box.append(context);

    const list = el("ol", { class: "candidates" });
    item.candidates.forEach((candidate, index) => {
      const pick = this.button(
        `${index + 1}. ${candidate.title}`,
        "pick-candidate",
        () => void this.decide(item.key, candidate.record_id),
      );
      list.append(
        el("li", { "data-record-id": candidate.record_id }, [
          pick,
          el("span", { class: "score" }, [` ${formatScore(candidate.score, d.workflow)}`]),
        ]),
      );
    });
    box.append(list);
    if (item.candidates.length === 0) {
      box.append(el("p", { class: "no-candidates" }, ["no candidates above threshold"]));
    }
    box.append(
      el("div", { class: "extra-actions" }, [
        this.button("no match (N)", "pick-no-match", () => void this.decide(item.key, NO_MATCH)),
        " ",
        this.button("skip (S)", "pick-skip", () => void this.decide(item.key, SKIPPED)),
      ]),
    );
    return box;
  }

  private exportArea(): HTMLElement {
    const d = this.detail!;
    const area = el("section", { class: "export-area" });
    if (d.status === "completed") {
      area.append(this.button("export links", "export", () => void this.exportLinks()));
    }
    if (this.exportError) {
      area.append(
        el("div", { class: "error-banner", role: "alert" }, [
          `export failed: ${this.exportError}`,
        ]),
      );
    }
    if (this.exportResult) {
      const table = el("table", { class: "links" });
      table.append(
        el("tr", {}, [
          el("th", {}, ["paper"]), el("th", {}, ["offsets"]),
          el("th", {}, ["feature"]), el("th", {}, ["record"]), el("th", {}, ["doi"]),
        ]),
      );
      for (const row of this.exportResult.links) {
        table.append(
          el("tr", { class: "link-row" }, [
            el("td", {}, [row.paper_id]),
            el("td", {}, [`${row.start}-${row.end}`]),
            el("td", {}, [row.feature]),
            el("td", {}, [row.record_id]),
            el("td", {}, [row.doi]),
          ]),
        );
      }
      area.append(
        el("p", { class: "export-summary" }, [
          `${this.exportResult.links.length} links, ${this.exportResult.gaps.length} gaps`,
        ]),
        table,
      );
    }
    return area;
  }

  private button(label: string, cls: string, onClick: () => void): HTMLButtonElement {
    const node = el("button", { class: cls, type: "button" }, [label]);
    node.addEventListener("click", (event) => {
      event.stopPropagation();
      onClick();
    });
    return node;
  }
}
