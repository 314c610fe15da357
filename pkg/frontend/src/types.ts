// JSON shapes as the server sends them. The client never derives its own
// authoritative copies of these; every view renders from the latest fetch.

export interface LevelDefinition {
  level: number;
  label: string;
  meaning: string;
}

export interface LevelDescriptor {
  level: number;
  reference_state: string;
  abridged?: boolean;
}

export interface Practice {
  id: string;
  name: string;
  description: string;
  descriptors: LevelDescriptor[];
}

export interface Criterion {
  id: string;
  name: string;
  objective: string;
  practices: Practice[];
}

export interface ModelView {
  id: string;
  name: string;
  description: string;
  scale: LevelDefinition[];
  criteria: Criterion[];
}

export interface Assessor {
  id: string;
  display_name: string;
  domain_role: string;
}

export interface IndividualResponse {
  assessor_id: string;
  practice_id: string;
  level: number;
  comment: string | null;
  submitted_at: string;
}

export interface GapNote {
  description: string;
  severity: string;
}

export interface ConsensusRecord {
  practice_id: string;
  agreed_score: number;
  gaps: GapNote[];
  actions: string[];
}

export type WeightMapping = Record<string, Record<string, number>>;

export interface SessionView {
  id: string;
  model_id: string;
  model_version: number;
  phase: string;
  gathering_mode: string;
  org_profile: { sector: string; [key: string]: unknown };
  assessors: Assessor[];
  responses: IndividualResponse[];
  weights: WeightMapping;
  consensus_records: ConsensusRecord[];
  overall_adjustment: { value: number; rationale: string } | null;
  frozen_scores: unknown;
}

export interface PracticeScores {
  practice_id: string;
  individual_levels: number[];
  average: number | null;
  consensus: number | null;
  effective: number;
}

export interface CriterionScores {
  criterion_id: string;
  score: number;
  contributing: { practice_id: string; weight: number; effective: number }[];
}

export interface ScoresView {
  practices: PracticeScores[];
  criteria: CriterionScores[];
  overall: {
    computed: number;
    adjusted: number | null;
    adjustment_rationale: string | null;
  };
  band: { level: number; label: string; qualifier: string };
}

export interface ChartView {
  points: { criterion_id: string; label: string; value: number }[];
  overall: { label: string; value: number };
  band: { level: number; label: string; qualifier: string };
}
