/**
 * Blacklist panel.
 *
 * Shows the abbreviation entries of the detection dictionary with the number
 * of registry titles each one came from, plus the current blacklist.  Flagging
 * a surface posts it once; the server re-flags the stored dictionary, so a
 * fresh page load still shows the entry as suppressed.
 */
import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import type { DictionaryEntryView } from "./types.js";

export class BlacklistPanel {
  private readonly root: HTMLElement;
  private readonly client: ApiClient;

  private entries: DictionaryEntryView[] = [];
  private surfaces = new Set<string>();
  private notice: string | null = null;
  private error: string | null = null;
  private loaded = false;

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
  }

  /** Fetch dictionary entries and the current blacklist, then render. */
  async mount(): Promise<void> {
    this.error = null;
    try {
      const [entries, blacklist] = await Promise.all([
        this.client.getDictionary("abbreviation"),
        this.client.getBlacklist(),
      ]);
      this.entries = entries;
      this.surfaces = new Set(blacklist.surfaces);
      this.loaded = true;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  /** Flag one surface; exactly one POST, state applied from its response. */
  async flag(surface: string): Promise<void> {
    this.notice = null;
    this.error = null;
    try {
      const result = await this.client.addToBlacklist(surface);
      this.surfaces = new Set(result.surfaces);
      for (const entry of this.entries) {
        if (this.surfaces.has(entry.surface)) {
          entry.blacklisted = true;
        }
      }
      this.notice = result.added
        ? `flagged "${result.surface}"`
        : `"${result.surface}" was already flagged`;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
    }
    this.render();
  }

  render(): void {
    clear(this.root);
    this.root.append(el("h1", {}, ["blacklist"]));
    if (this.error !== null) {
      this.root.append(el("div", { class: "error-banner", role: "alert" }, [this.error]));
    }
    if (!this.loaded) {
      if (this.error === null) {
        this.root.append(el("p", { class: "loading" }, ["loading dictionary..."]));
      }
      return;
    }
    if (this.notice !== null) {
      this.root.append(el("p", { class: "notice" }, [this.notice]));
    }

    const form = el("form", { class: "flag-form" });
    const input = el("input", {
      type: "text",
      name: "surface",
      placeholder: "surface to suppress",
    });
    const submit = el("button", { type: "submit", class: "flag-new" }, ["flag"]);
    form.append(input, " ", submit);
    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const value = input.value.trim();
      if (value) {
        input.value = "";
        void this.flag(value);
      }
    });
    this.root.append(form);

    const flagged = [...this.surfaces].sort();
    this.root.append(
      el("p", { class: "blacklist-current" }, [
        flagged.length === 0
          ? "no surfaces flagged yet"
          : `flagged: ${flagged.join(", ")}`,
      ]),
    );

    const table = el("table", { class: "dictionary" });
    table.append(
      el("tr", {}, [
        el("th", {}, ["abbreviation"]),
        el("th", {}, ["source titles"]),
        el("th", {}, ["status"]),
        el("th", {}, [""]),
      ]),
    );
    for (const entry of this.entries) {
      const suppressed = entry.blacklisted || this.surfaces.has(entry.surface);
      const row = el("tr", {
        class: suppressed ? "entry suppressed" : "entry",
        "data-surface": entry.surface,
      });
      row.append(
        el("td", { class: "surface" }, [entry.surface]),
        el("td", { class: "count" }, [String(entry.n_source_titles)]),
        el("td", { class: "status" }, [suppressed ? "suppressed" : "active"]),
      );
      const cell = el("td", {});
      if (!suppressed) {
        const btn = el("button", { type: "button", class: "flag-entry" }, ["flag"]);
        btn.addEventListener("click", () => void this.flag(entry.surface));
        cell.append(btn);
      }
      row.append(cell);
      table.append(row);
    }
    this.root.append(table);
  }
}
