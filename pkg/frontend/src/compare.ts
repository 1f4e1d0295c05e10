import type { ApiClient } from './api';
import { RunView, type RunViewOptions } from './run';
import type { ScenarioDoc } from './types';

const meshOf = (doc: ScenarioDoc) => doc.mesh;

/**
 * Two runs side by side with synchronized replay. Axes are shared when the
 * grids match; otherwise both panels still render but a warning flags that
 * the axes differ.
 */
export class CompareView {
  left: RunView;
  right: RunView;
  warning: HTMLDivElement;

  constructor(
    root: HTMLElement,
    api: ApiClient,
    options: RunViewOptions = {},
  ) {
    root.classList.add('compare-view');
    this.warning = document.createElement('div');
    this.warning.className = 'compare-warning';
    const panels = document.createElement('div');
    panels.className = 'compare-panels';
    const leftRoot = document.createElement('div');
    leftRoot.className = 'panel left';
    const rightRoot = document.createElement('div');
    rightRoot.className = 'panel right';
    panels.append(leftRoot, rightRoot);

    const controls = document.createElement('div');
    controls.className = 'compare-controls';
    const replayBoth = document.createElement('button');
    replayBoth.textContent = 'Replay both';
    replayBoth.className = 'replay-both';
    replayBoth.addEventListener('click', () => this.replayBoth());
    controls.append(replayBoth);

    root.append(this.warning, panels, controls);
    this.left = new RunView(leftRoot, api, options, 'A');
    this.right = new RunView(rightRoot, api, options, 'B');
  }

  async run(docA: ScenarioDoc, docB: ScenarioDoc): Promise<void> {
    const meshA = meshOf(docA);
    const meshB = meshOf(docB);
    const matched =
      meshA.n_space === meshB.n_space &&
      meshA.length === meshB.length &&
      meshA.final_time === meshB.final_time;
    this.warning.textContent = matched
      ? ''
      : 'grids differ: axes are not shared between the panels';
    await Promise.all([this.left.submit(docA), this.right.submit(docB)]);
  }

  /** Synchronized playback from frame zero on both panels. */
  replayBoth(): void {
    this.left.animator?.replay();
    this.right.animator?.replay();
  }
}
