import { describe, expect, it } from 'vitest';

import { ScenarioForm, scenarioFromState, stateFromScenario } from '../../src/form';
import type { CatalogModel, ScenarioDoc } from '../../src/types';

const scenario: ScenarioDoc = {
  schema_version: 1,
  label: 'demo',
  model: {
    kind: 'timoshenko',
    params: { rho: 1, i_rho: 1, ei: 20, shear_k: 50, payload_mass: 0.01, payload_inertia: 0.01 },
    initial: { kind: 'default', amplitude: 1, seed: 0 },
  },
  mesh: { n_space: 50, n_time: 10000, length: 2, final_time: 10 },
  controller: { kind: 'pd', pd_gains: { k1: 100, k2: 10, k3: 100, k4: 10 } },
  disturbances: [
    { kind: 'timoshenko_tip', enabled: true },
    { kind: 'timoshenko_distributed', enabled: true },
  ],
  divergence_threshold: 1e6,
};

const model: CatalogModel = {
  kind: 'timoshenko',
  label: 'Shear-deformable beam',
  description: '',
  fields: ['w', 'phi'],
  params: [
    { name: 'rho', default: 1, min: 0, description: '' },
    { name: 'ei', default: 20, min: 0, description: '' },
  ],
  initial_kinds: ['ramp', 'zero'],
  controllers: ['none', 'pd'],
  gains: [
    { name: 'k1', default: 100, min: 0, description: '' },
    { name: 'k2', default: 10, min: 0, description: '' },
  ],
  disturbances: ['timoshenko_tip', 'timoshenko_distributed'],
  default_scenario: scenario,
};

describe('form state round trip', () => {
  it('scenario -> form -> scenario is identical', () => {
    const state = stateFromScenario(scenario);
    expect(scenarioFromState(state)).toEqual(scenario);
  });

  it('form -> scenario -> form restores identical state', () => {
    const state = stateFromScenario(scenario);
    state.gains.k2 = 30;
    state.mesh.n_time = 400;
    const roundTripped = stateFromScenario(scenarioFromState(state));
    expect(roundTripped).toEqual(state);
  });

  it('exact-model controllers carry their robust bound', () => {
    const doc: ScenarioDoc = {
      ...scenario,
      model: { kind: 'string', params: { payload_mass: 1 } },
      controller: { kind: 'exact_model', em_gains: { k1: 10, k2: 10 }, disturbance_bound: 2 },
    };
    const through = scenarioFromState(stateFromScenario(doc));
    expect(through.controller).toEqual(doc.controller);
  });
});

describe('ScenarioForm DOM', () => {
  it('renders inputs and reflects edits in the scenario document', () => {
    const root = document.createElement('div');
    const form = new ScenarioForm(root, model);
    const input = root.querySelector<HTMLInputElement>('input[name="n_time"]')!;
    input.value = '400';
    input.dispatchEvent(new Event('input'));
    expect(form.scenario().mesh.n_time).toBe(400);
  });

  it('setGain updates both state and input', () => {
    const root = document.createElement('div');
    const form = new ScenarioForm(root, model);
    form.setGain('k2', 30);
    expect(form.scenario().controller?.pd_gains?.k2).toBe(30);
    expect(root.querySelector<HTMLInputElement>('input[name="gain.k2"]')!.value).toBe('30');
  });

  it('disturbance toggles flip the enabled flag', () => {
    const root = document.createElement('div');
    const form = new ScenarioForm(root, model);
    const box = root.querySelector<HTMLInputElement>(
      'input[name="disturbance.timoshenko_distributed"]',
    )!;
    box.checked = false;
    box.dispatchEvent(new Event('change'));
    const doc = form.scenario();
    expect(doc.disturbances).toContainEqual({ kind: 'timoshenko_distributed', enabled: false });
  });

  it('places server errors at the named field', () => {
    const root = document.createElement('div');
    const form = new ScenarioForm(root, model);
    form.showErrors([{ path: 'controller.pd_gains.k2', message: 'must be >= 0' }]);
    const slot = root.querySelector('[data-error-for="gain.k2"]')!;
    expect(slot.textContent).toContain('must be >= 0');
  });

  it('unmatched errors land in the summary area', () => {
    const root = document.createElement('div');
    const form = new ScenarioForm(root, model);
    form.showErrors([{ path: 'divergence_threshold', message: 'must be > 0' }]);
    expect(root.querySelector('.form-errors')!.textContent).toContain('divergence_threshold');
  });
});
