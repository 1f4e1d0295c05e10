import type {
  Catalog,
  FieldPayload,
  JobStatus,
  ScenarioDoc,
  TipPayload,
  ValidationIssue,
} from './types';

export class ValidationError extends Error {
  constructor(public issues: ValidationIssue[]) {
    super(issues.map((i) => `${i.path}: ${i.message}`).join('; '));
  }
}

/** Largest number of time samples the browser asks for in one grid payload. */
export const MAX_TIME_SAMPLES = 200;

/** Stride that brings `rows` time levels down to at most `maxSamples`. */
export const strideFor = (rows: number, maxSamples: number = MAX_TIME_SAMPLES): number =>
  Math.max(1, Math.ceil(rows / maxSamples));

export class ApiClient {
  constructor(private baseUrl: string = '') {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) {
      throw new Error(`GET ${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }

  getModels(): Promise<Catalog> {
    return this.getJson('/api/models');
  }

  async submitJob(doc: ScenarioDoc): Promise<string> {
    const response = await fetch(this.baseUrl + '/api/jobs', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(doc),
    });
    if (response.status === 400) {
      const body = (await response.json()) as { errors: ValidationIssue[] };
      throw new ValidationError(body.errors);
    }
    if (!response.ok) {
      throw new Error(`POST /api/jobs failed: ${response.status}`);
    }
    const body = (await response.json()) as { job_id: string };
    return body.job_id;
  }

  getJob(jobId: string): Promise<JobStatus> {
    return this.getJson(`/api/jobs/${jobId}`);
  }

  getField(jobId: string, name: string, stride: number): Promise<FieldPayload> {
    return this.getJson(`/api/jobs/${jobId}/fields/${name}?stride=${stride}`);
  }

  getTip(jobId: string): Promise<TipPayload> {
    return this.getJson(`/api/jobs/${jobId}/tip`);
  }

  /** Poll until the job leaves the queued/running states. */
  async waitForJob(
    jobId: string,
    pollIntervalMs: number,
    onProgress?: (status: JobStatus) => void,
  ): Promise<JobStatus> {
    for (;;) {
      const status = await this.getJob(jobId);
      onProgress?.(status);
      if (status.state === 'done' || status.state === 'failed') {
        return status;
      }
      await new Promise((resolve) => setTimeout(resolve, pollIntervalMs));
    }
  }
}
