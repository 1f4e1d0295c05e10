import { ApiClient } from './api';
import { CompareView } from './compare';
import { ScenarioForm } from './form';
import { RunView } from './run';
import type { Catalog, CatalogModel, ScenarioDoc } from './types';
import './style.css';

export interface AppOptions {
  baseUrl?: string;
  pollIntervalMs?: number;
}

/** The assembled single-page app. Exposed pieces keep the workflow drivable
 * from automated tests as well as from the DOM. */
export interface App {
  ready: Promise<void>;
  catalog: Catalog | null;
  form: ScenarioForm | null;
  runView: RunView;
  compareView: CompareView;
  selectModel(kind: string): void;
  currentScenario(): ScenarioDoc;
  run(): Promise<void>;
  compare(docA: ScenarioDoc, docB: ScenarioDoc): Promise<void>;
}

export function createApp(root: HTMLElement, options: AppOptions = {}): App {
  const api = new ApiClient(options.baseUrl ?? '');
  const pollIntervalMs = options.pollIntervalMs ?? 1000;

  root.innerHTML = `
    <header>
      <h1>Flexible-link simulation</h1>
      <p class="tagline">explicit finite-difference runs with boundary control</p>
    </header>
    <main>
      <section class="config">
        <label class="model-select">system
          <select id="model-select"></select>
        </label>
        <p class="model-description"></p>
        <div id="scenario-form"></div>
        <button id="run-button" disabled>Run</button>
        <details>
          <summary>Compare two runs</summary>
          <p>Runs the current form against the same scenario without control.</p>
          <button id="compare-button" disabled>Run comparison</button>
        </details>
      </section>
      <section class="results">
        <div id="run-view"></div>
        <div id="compare-view" hidden></div>
      </section>
    </main>
  `;

  const select = root.querySelector<HTMLSelectElement>('#model-select')!;
  const description = root.querySelector<HTMLParagraphElement>('.model-description')!;
  const formRoot = root.querySelector<HTMLDivElement>('#scenario-form')!;
  const runButton = root.querySelector<HTMLButtonElement>('#run-button')!;
  const compareButton = root.querySelector<HTMLButtonElement>('#compare-button')!;
  const compareRoot = root.querySelector<HTMLDivElement>('#compare-view')!;

  const app: App = {
    ready: Promise.resolve(),
    catalog: null,
    form: null,
    runView: new RunView(root.querySelector<HTMLDivElement>('#run-view')!, api, {
      pollIntervalMs,
      onValidationErrors: (issues) => app.form?.showErrors(issues),
    }),
    compareView: new CompareView(compareRoot, api, { pollIntervalMs }),
    selectModel(kind: string): void {
      const model = app.catalog?.models.find((m) => m.kind === kind);
      if (!model) throw new Error(`unknown model kind ${kind}`);
      select.value = kind;
      description.textContent = model.description;
      app.form = new ScenarioForm(formRoot, model);
    },
    currentScenario(): ScenarioDoc {
      if (!app.form) throw new Error('no model selected');
      return app.form.scenario();
    },
    async run(): Promise<void> {
      await app.runView.submit(app.currentScenario());
    },
    async compare(docA: ScenarioDoc, docB: ScenarioDoc): Promise<void> {
      compareRoot.hidden = false;
      await app.compareView.run(docA, docB);
    },
  };

  runButton.addEventListener('click', () => void app.run());
  compareButton.addEventListener('click', () => {
    const withControl = app.currentScenario();
    const without: ScenarioDoc = structuredClone(withControl);
    without.controller = { kind: 'none' };
    without.label = (without.label ?? 'run') + '_no_control';
    void app.compare(without, withControl);
  });

  app.ready = (async () => {
    const catalog = await api.getModels();
    app.catalog = catalog;
    select.innerHTML = '';
    for (const model of catalog.models) {
      const option = document.createElement('option');
      option.value = model.kind;
      option.textContent = model.label;
      select.append(option);
    }
    select.addEventListener('change', () => app.selectModel(select.value));
    app.selectModel(catalog.models[0].kind);
    runButton.disabled = false;
    compareButton.disabled = false;
  })();

  return app;
}

export type { CatalogModel };

if (!import.meta.env?.TEST) {
  const root = document.getElementById('app');
  if (root) createApp(root);
}
