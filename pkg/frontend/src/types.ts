/** JSON shapes served by the rulebench HTTP API. */

export type PartName = "train" | "validation" | "test";

export type SortColumn =
  | "df_in"
  | "df_out"
  | "term_precision"
  | "term_recall"
  | "term_f1"
  | "lift";

export type SortDirection = "asc" | "desc";

export interface ClassEntry {
  name: string;
  support: Record<PartName, number>;
}

export interface ClassesResponse {
  classes: ClassEntry[];
  revision: number;
}

export interface TermRow {
  ngram: string;
  df_in: number;
  df_out: number;
  class_size: number;
  universe_size: number;
  term_precision: number;
  term_recall: number;
  term_f1: number;
  lift: number;
}

export interface StatsResponse {
  class: string;
  part: PartName;
  sort: SortColumn;
  dir: SortDirection;
  total: number;
  rows: TermRow[];
  revision: number;
}

export interface BinaryEval {
  tp: number;
  fp: number;
  fn: number;
  tn: number;
  precision: number;
  recall: number;
  f1: number;
}

export interface DocSample {
  id: string;
  text: string;
  labels: string[];
  spans?: [number, number][];
}

export interface QueryEvalResponse {
  query: string;
  part: PartName;
  total_matched: number;
  matched: string[];
  samples: {
    matched: DocSample[];
    false_positives?: DocSample[];
    false_negatives?: DocSample[];
  };
  class?: string;
  eval?: BinaryEval;
  revision: number;
}

export interface RuleEntry {
  id: string;
  class: string;
  query: string;
  note: string;
  created_at: string;
}

export interface RulesResponse {
  rules: RuleEntry[];
  class_priority: string[];
  revision: number;
}

export interface Scores {
  precision: number;
  recall: number;
  f1: number;
}

export interface Report {
  part: PartName;
  per_class: Record<string, BinaryEval>;
  overall: Scores;
  overall_w: Scores;
  support: Record<string, number>;
  excluded_classes: string[];
}

export interface ReportResponse {
  report: Report;
  revision: number;
}

export interface MisclassifiedResponse {
  class: string;
  part: PartName;
  false_positives: DocSample[];
  false_negatives: DocSample[];
  revision: number;
}

export interface InducedRulePreview {
  query: string;
  precision: number;
  recall: number;
  f1: number;
  literals: { ngram: string; present: boolean }[];
}

export interface InductResponse {
  class: string;
  seed: number;
  rules: InducedRulePreview[];
  revision: number;
}

export interface ApiErrorBody {
  code: "bad_query" | "unknown_class" | "unknown_rule" | "conflict" | "internal";
  message: string;
  position?: number;
}
