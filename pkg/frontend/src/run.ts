import { ApiClient, strideFor, ValidationError } from './api';
import { ShapeAnimator } from './shape2d';
import { drawSurface, type SurfaceGeometry } from './surface';
import type { FieldPayload, JobStatus, ScenarioDoc, TipPayload } from './types';

export interface RunViewOptions {
  pollIntervalMs?: number;
  onValidationErrors?: (issues: { path: string; message: string }[]) => void;
}

/**
 * One submitted run: status badge, stability banner, 3-D displacement
 * surface, and the 2-D moving shape with play/replay. All rendered samples
 * are exactly the server payload (stride-downsampled rows, no client math
 * beyond projection to pixels).
 */
export class RunView {
  status: JobStatus | null = null;
  field: FieldPayload | null = null;
  tip: TipPayload | null = null;
  surfaceGeometry: SurfaceGeometry | null = null;
  animator: ShapeAnimator | null = null;

  private badge: HTMLSpanElement;
  private banner: HTMLDivElement;
  private progress: HTMLProgressElement;
  private surfaceCanvas: HTMLCanvasElement;
  private shapeCanvas: HTMLCanvasElement;
  private controls: HTMLDivElement;

  constructor(
    root: HTMLElement,
    private api: ApiClient,
    private options: RunViewOptions = {},
    title = 'Run',
  ) {
    root.classList.add('run-view');
    const heading = document.createElement('h3');
    heading.textContent = title;
    this.badge = document.createElement('span');
    this.badge.className = 'badge idle';
    this.badge.textContent = 'idle';
    heading.append(' ', this.badge);

    this.banner = document.createElement('div');
    this.banner.className = 'banner';
    this.progress = document.createElement('progress');
    this.progress.max = 1;
    this.progress.value = 0;

    this.surfaceCanvas = document.createElement('canvas');
    this.surfaceCanvas.width = 480;
    this.surfaceCanvas.height = 320;
    this.surfaceCanvas.className = 'surface';
    this.shapeCanvas = document.createElement('canvas');
    this.shapeCanvas.width = 480;
    this.shapeCanvas.height = 200;
    this.shapeCanvas.className = 'shape';

    this.controls = document.createElement('div');
    this.controls.className = 'playback';
    const play = document.createElement('button');
    play.textContent = 'Play';
    play.addEventListener('click', () => this.animator?.play());
    const replay = document.createElement('button');
    replay.textContent = 'Replay';
    replay.className = 'replay';
    replay.addEventListener('click', () => this.animator?.replay());
    const stop = document.createElement('button');
    stop.textContent = 'Stop';
    stop.addEventListener('click', () => this.animator?.stop());
    this.controls.append(play, replay, stop);

    root.append(heading, this.banner, this.progress, this.surfaceCanvas, this.shapeCanvas, this.controls);
  }

  private setBadge(state: string): void {
    this.badge.className = `badge ${state}`;
    this.badge.textContent = state;
  }

  /** Submit a scenario, poll it to completion, then fetch and render data. */
  async submit(doc: ScenarioDoc): Promise<JobStatus | null> {
    this.animator?.stop();
    this.animator = null;
    this.field = null;
    this.tip = null;
    this.banner.className = 'banner';
    this.banner.textContent = '';
    this.setBadge('queued');
    this.progress.value = 0;

    let jobId: string;
    try {
      jobId = await this.api.submitJob(doc);
    } catch (error) {
      if (error instanceof ValidationError) {
        this.setBadge('invalid');
        this.banner.className = 'banner invalid';
        this.banner.textContent = 'rejected: ' + error.message;
        this.options.onValidationErrors?.(error.issues);
        return null;
      }
      throw error;
    }

    const status = await this.api.waitForJob(jobId, this.options.pollIntervalMs ?? 1000, (s) => {
      this.setBadge(s.state);
      this.progress.value = s.progress;
    });
    this.status = status;
    this.setBadge(status.state);
    this.progress.value = 1;

    if (status.state === 'failed' || !status.summary) {
      this.banner.className = 'banner diverged';
      this.banner.textContent = `run failed: ${status.error ?? 'unknown error'}`;
      return status;
    }

    this.renderBanner(status);
    const stride = strideFor(status.summary.steps_completed + 1);
    this.field = await this.api.getField(jobId, 'w', stride);
    this.tip = await this.api.getTip(jobId);
    this.surfaceGeometry = drawSurface(this.surfaceCanvas, this.field);
    this.animator = new ShapeAnimator(this.shapeCanvas, this.field);
    return status;
  }

  private renderBanner(status: JobStatus): void {
    const summary = status.summary!;
    const apriori = summary.a_priori;
    const aprioriText = apriori
      ? ` | check ${apriori.criterion}: ${apriori.lhs.toExponential(2)} vs ` +
        `${apriori.threshold.toExponential(2)} -> ` +
        `${apriori.predicted_stable ? 'ok' : 'exceeded'}${apriori.advisory ? ' (advisory)' : ''}`
      : '';
    if (summary.diverged) {
      this.banner.className = 'banner diverged';
      this.banner.textContent =
        `diverged at step ${summary.first_bad_step} (${summary.reason})` + aprioriText;
    } else {
      this.banner.className = 'banner stable';
      this.banner.textContent =
        `stable: completed ${summary.steps_completed} steps, ` +
        `final tip ${summary.final_tip.toExponential(2)}` + aprioriText;
    }
  }
}
