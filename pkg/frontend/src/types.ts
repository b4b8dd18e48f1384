/** Shared types mirroring the annotation service's wire format. */

export type Valence = "positive" | "neutral" | "negative";

export interface TaskView {
  task_id: string;
  proposal_id: string;
  section: { heading: string; text: string };
  opportunity_excerpt: string;
  guidelines: string;
  claim: { claim_id: string; text: string; valence: Valence };
  progress: { done: number; total: number };
}

export type Validity = "valid" | "invalid";

export type Severity = "None" | "Little" | "Some" | "Substantial" | "Pivotal";

export const SEVERITY_LEVELS: readonly Severity[] = [
  "None",
  "Little",
  "Some",
  "Substantial",
  "Pivotal",
];

/** Tooltip definitions shown next to the severity scale. */
export const SEVERITY_DEFINITIONS: Record<Severity, string> = {
  None: "Purely factual or administrative. No bearing on scientific merit or deliverability.",
  Little: "Minor issues that are easily correctable or do not affect core assessment criteria.",
  Some: "Valid observations affecting secondary criteria. Would influence score by ±0.5 points.",
  Substantial:
    "Significant strengths or weaknesses directly affecting Quality or Importance. Would shift score by ±1–2 points.",
  Pivotal:
    "Fundamental issues affecting viability or exceptional strengths. Changes fundable/non-fundable status.",
};

export const AGREEMENT_LABELS: readonly string[] = [
  "strong disagree",
  "disagree",
  "neutral",
  "agree",
  "strong agree",
];

/** Body POSTed to /annotations; must stay bit-compatible with the service. */
export interface AnnotationRecord {
  annotator: string;
  claim_id: string;
  validity: Validity;
  agreement: number; // 1..5
  severity: Severity;
}
