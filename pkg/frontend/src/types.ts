export interface ParamDescriptor {
  name: string;
  default: number | string;
  min: number | null;
  description: string;
}

export interface CatalogModel {
  kind: string;
  label: string;
  description: string;
  fields: string[];
  params: ParamDescriptor[];
  initial_kinds: string[];
  controllers: string[];
  gains?: ParamDescriptor[];
  disturbance_bound_default?: number;
  disturbances: string[];
  default_scenario: ScenarioDoc;
}

export interface Catalog {
  models: CatalogModel[];
  excluded: { kind: string; reason: string }[];
}

export interface ScenarioDoc {
  schema_version: number;
  label?: string;
  notes?: string;
  model: {
    kind: string;
    params: Record<string, number | string>;
    initial?: { kind: string; amplitude?: number; seed?: number };
  };
  mesh: { n_space: number; n_time: number; length: number; final_time: number };
  controller?: {
    kind: string;
    pd_gains?: Record<string, number>;
    em_gains?: Record<string, number>;
    disturbance_bound?: number;
  };
  disturbances?: { kind: string; enabled: boolean }[];
  divergence_threshold?: number;
}

export interface APrioriReport {
  criterion: string;
  lhs: number;
  threshold: number;
  predicted_stable: boolean;
  advisory: boolean;
}

export interface JobSummary {
  diverged: boolean;
  reason: string;
  first_bad_step: number | null;
  peak_magnitude: number;
  steps_completed: number;
  final_tip: number;
  wall_time_seconds: number;
  a_priori: APrioriReport | null;
  fields: string[];
  n_space: number;
  n_time: number;
}

export interface JobStatus {
  job_id: string;
  state: 'queued' | 'running' | 'done' | 'failed';
  progress: number;
  label: string;
  error?: string;
  summary?: JobSummary;
}

export interface FieldPayload {
  field: string;
  stride: number;
  x: number[];
  t: number[];
  values: number[][];
  steps_completed: number;
}

export interface TipPayload {
  t: number[];
  w: number[];
  phi?: number[];
}

export interface ValidationIssue {
  path: string;
  message: string;
}
