/**
 * Application shell: hash routing between the session list, a single review
 * queue, and the blacklist panel.
 *
 * Routes:
 *   #/sessions            session list (default)
 *   #/sessions/<id>       review queue for one session
 *   #/blacklist           blacklist panel
 */
import { ApiClient } from "./api.js";
import { BlacklistPanel } from "./blacklist.js";
import { clear, el } from "./dom.js";
import { SessionQueue } from "./queue.js";
import type { SessionSummary } from "./types.js";

export class App {
  private readonly root: HTMLElement;
  private readonly client: ApiClient;
  private activeQueue: SessionQueue | null = null;
  private readonly onHashChange = () => void this.route();

  constructor(root: HTMLElement, client: ApiClient) {
    this.root = root;
    this.client = client;
  }

  start(): void {
    window.addEventListener("hashchange", this.onHashChange);
    void this.route();
  }

  stop(): void {
    window.removeEventListener("hashchange", this.onHashChange);
    this.dropQueue();
  }

  private dropQueue(): void {
    if (this.activeQueue) {
      this.activeQueue.dispose();
      this.activeQueue = null;
    }
  }

  /** Dispatch on the current location hash. */
  async route(): Promise<void> {
    const hash = window.location.hash.replace(/^#\/?/, "");
    this.dropQueue();
    clear(this.root);
    this.root.append(this.nav());
    const body = el("main", { class: "view" });
    this.root.append(body);

    if (hash === "blacklist") {
      const panel = new BlacklistPanel(body, this.client);
      await panel.mount();
      return;
    }
    const sessionMatch = /^sessions\/(.+)$/.exec(hash);
    if (sessionMatch) {
      const queue = new SessionQueue(body, this.client, decodeURIComponent(sessionMatch[1]));
      this.activeQueue = queue;
      await queue.mount();
      return;
    }
    await this.sessionList(body);
  }

  private nav(): HTMLElement {
    return el("nav", { class: "topnav" }, [
      el("a", { href: "#/sessions" }, ["sessions"]),
      " | ",
      el("a", { href: "#/blacklist" }, ["blacklist"]),
    ]);
  }

  private async sessionList(body: HTMLElement): Promise<void> {
    let sessions: SessionSummary[];
    try {
      sessions = await this.client.listSessions();
    } catch (err) {
      body.append(
        el("div", { class: "error-banner", role: "alert" }, [
          `could not load sessions: ${err instanceof Error ? err.message : String(err)}`,
        ]),
      );
      return;
    }
    body.append(el("h1", {}, ["review sessions"]));
    if (sessions.length === 0) {
      body.append(el("p", { class: "empty-state" }, ["no sessions yet"]));
      return;
    }
    const ordered = [...sessions].sort((a, b) => {
      if (a.workflow !== b.workflow) {
        return a.workflow === "per_feature" ? -1 : 1;
      }
      return a.session_id < b.session_id ? -1 : 1;
    });
    const table = el("table", { class: "sessions" });
    table.append(
      el("tr", {}, [
        el("th", {}, ["session"]),
        el("th", {}, ["paper"]),
        el("th", {}, ["workflow"]),
        el("th", {}, ["progress"]),
        el("th", {}, ["status"]),
      ]),
    );
    for (const session of ordered) {
      table.append(
        el("tr", { class: "session-row", "data-session-id": session.session_id }, [
          el("td", {}, [
            el("a", { href: `#/sessions/${encodeURIComponent(session.session_id)}` }, [
              session.session_id,
            ]),
          ]),
          el("td", {}, [session.paper_id]),
          el("td", {}, [session.workflow.replace("_", "-")]),
          el("td", {}, [`${session.n_decided}/${session.n_items}`]),
          el("td", {}, [session.status]),
        ]),
      );
    }
    body.append(table);
  }
}

const mountPoint = document.getElementById("app");
if (mountPoint) {
  new App(mountPoint, new ApiClient()).start();
}
