/** DOM wiring: connects the view model and renderers to the page. */

import { ApiClient, apiBaseUrl } from './api';
import { ViewModel, type SlotName } from './model';
import {
  renderCompareView,
  renderConflict,
  renderErrorBanner,
  renderNetworkPanel,
  renderTargetHeadline,
} from './render';

const client = new ApiClient(apiBaseUrl(window.location.search));
const model = new ViewModel(client);

const el = (id: string): HTMLElement => {
  const found = document.getElementById(id);
  if (!found) {
    throw new Error(`missing element #${id}`);
  }
  return found;
};

function targetUnit(): string {
  const target = model.catalog?.target;
  const node = target ? model.node(target) : undefined;
  return node && node.kind === 'interval' ? node.unit : '';
}

function redraw(): void {
  if (!model.catalog) {
    return;
  }
  el('network-panel').innerHTML = renderNetworkPanel(model.catalog, model.slots.variant.payload);
  el('baseline-headline').innerHTML = renderTargetHeadline(
    'baseline', targetUnit(),
    model.targetSummary('baseline')?.mean, model.targetSummary('baseline')?.sd);
  el('variant-headline').innerHTML = renderTargetHeadline(
    'variant', targetUnit(),
    model.targetSummary('variant')?.mean, model.targetSummary('variant')?.sd);
  el('compare-panel').innerHTML = renderCompareView(
    model.slots.baseline.payload, model.slots.variant.payload, model.deltas());
  const conflict = model.slots.variant.conflict ?? model.slots.baseline.conflict;
  el('banner').innerHTML = conflict ? renderConflict(conflict) : '';
}

function populateNodePicker(): void {
  const picker = el('observe-node') as HTMLSelectElement;
  picker.innerHTML = '';
  for (const node of model.catalog?.nodes ?? []) {
    if (node.group !== 'indicator') {
      continue; // observations are entered on measurable nodes
    }
    const option = document.createElement('option');
    option.value = node.id;
    option.textContent = node.id;
    picker.appendChild(option);
  }
}

async function applyObservation(slot: SlotName): Promise<void> {
  const nodeId = (el('observe-node') as HTMLSelectElement).value;
  const raw = (el('observe-value') as HTMLInputElement).value.trim();
  if (raw === '') {
    el('observe-message').textContent = 'enter a value first';
    return;
  }
  const node = model.node(nodeId);
  const value = node?.kind === 'interval' ? Number(raw) : raw;
  const message = await model.setObservation(slot, nodeId, value);
  el('observe-message').textContent = message ?? '';
  redraw();
}

async function start(): Promise<void> {
  try {
    await model.loadCatalog();
  } catch (err) {
    el('banner').innerHTML = renderErrorBanner(
      `Could not reach the qualnet API: ${String(err)}`);
    return;
  }
  populateNodePicker();
  await Promise.all([model.refresh('baseline'), model.refresh('variant')]);
  redraw();

  el('set-baseline').addEventListener('click', () => void applyObservation('baseline'));
  el('set-variant').addEventListener('click', () => void applyObservation('variant'));
  el('clear-variant').addEventListener('click', () => {
    void model.clearObservation('variant').then(redraw);
  });
  el('clear-baseline').addEventListener('click', () => {
    void model.clearObservation('baseline').then(redraw);
  });
  el('swap-slots').addEventListener('click', () => {
    model.swapSlots();
    redraw();
  });
}

void start();
