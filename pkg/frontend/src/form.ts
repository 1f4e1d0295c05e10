import type { CatalogModel, ScenarioDoc } from './types';

/** Editable mirror of one scenario document. The server stays authoritative:
 * the form only mirrors its constraints for early feedback. */
export interface FormState {
  kind: string;
  label: string;
  params: Record<string, number | string>;
  initial: { kind: string; amplitude: number; seed: number };
  mesh: { n_space: number; n_time: number; length: number; final_time: number };
  controllerKind: string;
  gains: Record<string, number>;
  disturbanceBound: number;
  disturbances: { kind: string; enabled: boolean }[];
  divergenceThreshold: number;
}

export function stateFromScenario(doc: ScenarioDoc): FormState {
  const controller = doc.controller ?? { kind: 'none' };
  return {
    kind: doc.model.kind,
    label: doc.label ?? '',
    params: { ...doc.model.params },
    initial: {
      kind: doc.model.initial?.kind ?? 'default',
      amplitude: doc.model.initial?.amplitude ?? 1.0,
      seed: doc.model.initial?.seed ?? 0,
    },
    mesh: { ...doc.mesh },
    controllerKind: controller.kind,
    gains: { ...(controller.pd_gains ?? controller.em_gains ?? {}) },
    disturbanceBound: controller.disturbance_bound ?? 2.0,
    disturbances: (doc.disturbances ?? []).map((d) => ({ ...d })),
    divergenceThreshold: doc.divergence_threshold ?? 1e6,
  };
}

export function scenarioFromState(state: FormState): ScenarioDoc {
  const doc: ScenarioDoc = {
    schema_version: 1,
    label: state.label,
    model: {
      kind: state.kind,
      params: { ...state.params },
      initial: { ...state.initial },
    },
    mesh: { ...state.mesh },
    controller: { kind: state.controllerKind },
    disturbances: state.disturbances.map((d) => ({ ...d })),
    divergence_threshold: state.divergenceThreshold,
  };
  if (state.controllerKind === 'pd') {
    doc.controller!.pd_gains = { ...state.gains };
  } else if (state.controllerKind === 'exact_model') {
    doc.controller!.em_gains = { ...state.gains };
    doc.controller!.disturbance_bound = state.disturbanceBound;
  }
  return doc;
}

const numberInput = (
  name: string,
  value: number,
  onChange: (v: number) => void,
): HTMLLabelElement => {
  const label = document.createElement('label');
  label.className = 'field';
  const caption = document.createElement('span');
  caption.textContent = name;
  const input = document.createElement('input');
  input.type = 'number';
  input.step = 'any';
  input.name = name;
  input.value = String(value);
  input.addEventListener('input', () => {
    const parsed = Number(input.value);
    if (Number.isFinite(parsed)) onChange(parsed);
  });
  const error = document.createElement('span');
  error.className = 'field-error';
  error.dataset.errorFor = name;
  label.append(caption, input, error);
  return label;
};

/** Scenario form generated from one catalog entry. Mutates its FormState in
 * place; rebuilding happens only when the model or controller kind changes. */
export class ScenarioForm {
  state: FormState;

  constructor(
    private root: HTMLElement,
    private model: CatalogModel,
  ) {
    this.state = stateFromScenario(model.default_scenario);
    this.render();
  }

  scenario(): ScenarioDoc {
    return scenarioFromState(this.state);
  }

  loadScenario(doc: ScenarioDoc): void {
    this.state = stateFromScenario(doc);
    this.render();
  }

  setGain(name: string, value: number): void {
    this.state.gains[name] = value;
    const input = this.root.querySelector<HTMLInputElement>(
      `input[name="gain.${name}"]`,
    );
    if (input) input.value = String(value);
  }

  setControllerKind(kind: string): void {
    this.state.controllerKind = kind;
    const defaults = this.model.default_scenario.controller;
    if (kind === 'pd') {
      this.state.gains = { ...(defaults?.pd_gains ?? { k1: 0, k2: 0, k3: 0, k4: 0 }) };
    } else if (kind === 'exact_model') {
      this.state.gains = { ...(defaults?.em_gains ?? { k1: 0, k2: 0 }) };
    } else {
      this.state.gains = {};
    }
    this.render();
  }

  /** Paint server-side validation messages next to the offending inputs. */
  showErrors(issues: { path: string; message: string }[]): void {
    this.root.querySelectorAll('.field-error').forEach((el) => (el.textContent = ''));
    const summary = this.root.querySelector('.form-errors');
    if (summary) summary.textContent = '';
    for (const issue of issues) {
      const leaf = issue.path.split('.').pop() ?? issue.path;
      const slot =
        this.root.querySelector(`[data-error-for="${issue.path}"]`) ??
        this.root.querySelector(`[data-error-for="${leaf}"]`) ??
        this.root.querySelector(`[data-error-for="gain.${leaf}"]`);
      if (slot) {
        slot.textContent = issue.message;
      } else if (summary) {
        summary.textContent += `${issue.path}: ${issue.message} `;
      }
    }
  }

  private render(): void {
    this.root.textContent = '';
    const state = this.state;

    const mesh = document.createElement('fieldset');
    mesh.innerHTML = '<legend>Grid</legend>';
    mesh.append(
      numberInput('n_space', state.mesh.n_space, (v) => (state.mesh.n_space = v)),
      numberInput('n_time', state.mesh.n_time, (v) => (state.mesh.n_time = v)),
      numberInput('length', state.mesh.length, (v) => (state.mesh.length = v)),
      numberInput('final_time', state.mesh.final_time, (v) => (state.mesh.final_time = v)),
    );

    const params = document.createElement('fieldset');
    params.innerHTML = `<legend>${this.model.label} parameters</legend>`;
    for (const p of this.model.params) {
      const current = state.params[p.name];
      if (typeof current === 'number' || current === undefined) {
        params.append(
          numberInput(p.name, (current as number) ?? (p.default as number), (v) => {
            state.params[p.name] = v;
          }),
        );
      }
    }

    const control = document.createElement('fieldset');
    control.innerHTML = '<legend>Controller</legend>';
    const select = document.createElement('select');
    select.name = 'controller.kind';
    for (const kind of this.model.controllers) {
      const option = document.createElement('option');
      option.value = kind;
      option.textContent = kind;
      option.selected = kind === state.controllerKind;
      select.append(option);
    }
    select.addEventListener('change', () => this.setControllerKind(select.value));
    control.append(select);
    for (const [name, value] of Object.entries(state.gains)) {
      const field = numberInput(name, value, (v) => (state.gains[name] = v));
      field.querySelector('input')!.name = `gain.${name}`;
      field.querySelector('.field-error')!.setAttribute('data-error-for', `gain.${name}`);
      control.append(field);
    }
    if (state.controllerKind === 'exact_model') {
      control.append(
        numberInput('disturbance_bound', state.disturbanceBound, (v) => {
          state.disturbanceBound = v;
        }),
      );
    }

    const disturbances = document.createElement('fieldset');
    disturbances.innerHTML = '<legend>Disturbances</legend>';
    for (const d of state.disturbances) {
      const label = document.createElement('label');
      label.className = 'toggle';
      const box = document.createElement('input');
      box.type = 'checkbox';
      box.name = `disturbance.${d.kind}`;
      box.checked = d.enabled;
      box.addEventListener('change', () => (d.enabled = box.checked));
      const caption = document.createElement('span');
      caption.textContent = d.kind;
      label.append(box, caption);
      disturbances.append(label);
    }

    const errors = document.createElement('div');
    errors.className = 'form-errors';

    this.root.append(mesh, params, control, disturbances, errors);
  }
}
