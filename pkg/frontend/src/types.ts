/**
 * Payload shapes of the review service API, mirrored field for field.
 *
 * The UI never invents state: everything rendered comes from one of these
 * structures as returned by the server.
 */

/** One registry candidate attached to a review item. */
export interface Candidate {
  record_id: string;
  /** Registry title, shown verbatim. */
  title: string;
  /** Cosine score (per-reference) or member occurrence count (per-feature). */
  score: number;
}

/** One reviewable unit: a single mention or an aggregated feature. */
export interface ReviewItem {
  /** Mention key (per-reference) or feature surface (per-feature). */
  key: string;
  candidates: Candidate[];
  /** Keys of the member mentions a decision fans out to. */
  mention_keys: string[];
  /** Sentence text per member mention, for display. */
  context: string[];
  /** Record id, "NO_MATCH", "SKIPPED", or null while undecided. */
  decision: string | null;
}

export interface SessionSummary {
  session_id: string;
  paper_id: string;
  workflow: "per_reference" | "per_feature";
  status: "open" | "completed";
  n_items: number;
  n_decided: number;
}

export interface SessionDetail extends SessionSummary {
  items: ReviewItem[];
}

export interface DecisionResponse {
  key: string;
  choice: string;
  decided_by: string;
  timestamp: string;
  session_status: "open" | "completed";
  n_decided: number;
}

export interface LinkRow {
  paper_id: string;
  start: number;
  end: number;
  feature: string;
  record_id: string;
  doi: string;
}

export interface ExportResponse {
  session_id: string;
  links: LinkRow[];
  gaps: { key: string; status: string }[];
  tsv: string;
  path: string;
}

export interface BlacklistState {
  surfaces: string[];
}

export interface BlacklistUpdate {
  surface: string;
  added: boolean;
  surfaces: string[];
}

export interface DictionaryEntryView {
  surface: string;
  kind: "abbreviation" | "phrase";
  blacklisted: boolean;
  n_source_titles: number;
}

export const NO_MATCH = "NO_MATCH";
export const SKIPPED = "SKIPPED";
