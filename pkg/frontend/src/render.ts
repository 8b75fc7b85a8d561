/**
 * HTML renderers.
 *
 * Pure string builders so they stay testable without a browser; main.ts owns
 * DOM insertion and event wiring.
 */

import { formatDelta, formatMean, formatProbability } from './format';
import type { NodeDelta } from './model';
import type { CatalogNode, NetworkCatalog, PosteriorNode, PosteriorPayload } from './types';

const GROUP_TITLES: Array<[string, string]> = [
  ['activity', 'Activities'],
  ['fact', 'Facts'],
  ['indicator', 'Indicators'],
];

function escapeHtml(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function thumbnail(node: PosteriorNode | undefined): string {
  if (!node) {
    return '<div class="thumb empty"></div>';
  }
  const peak = Math.max(...node.probabilities, 1e-9);
  const bars = node.probabilities
    .map((p, i) => {
      const h = Math.round((p / peak) * 100);
      const label = `${escapeHtml(node.states[i])}: ${formatProbability(p)}`;
      return `<span class="bar" style="height:${h}%" title="${label}"></span>`;
    })
    .join('');
  return `<div class="thumb">${bars}</div>`;
}

function nodeRow(node: CatalogNode, posterior: PosteriorNode | undefined): string {
  const unit = node.kind === 'interval' && node.unit
    ? ` <span class="unit">(${escapeHtml(node.unit)})</span>` : '';
  const summary = posterior?.summary
    ? `<span class="summary">mean ${formatMean(posterior.summary.mean)}</span>` : '';
  return `<li class="node" data-node="${escapeHtml(node.id)}">
    <span class="node-id">${escapeHtml(node.id)}</span>${unit}
    ${thumbnail(posterior)}
    ${summary}
  </li>`;
}

/** Grouped node list (Activities / Facts / Indicators) with thumbnails. */
export function renderNetworkPanel(
  catalog: NetworkCatalog,
  posterior: PosteriorPayload | null,
): string {
  if (catalog.nodes.length === 0) {
    return '<p class="empty-state">The loaded network has no nodes.</p>';
  }
  const byId = new Map(posterior?.nodes.map((n) => [n.id, n]) ?? []);
  const sections = GROUP_TITLES.map(([group, title]) => {
    const members = catalog.nodes.filter((n) => n.group === group);
    if (members.length === 0) {
      return '';
    }
    const items = members.map((n) => nodeRow(n, byId.get(n.id))).join('\n');
    return `<section class="group" data-group="${group}">
      <h2>${title} <span class="count">${members.length}</span></h2>
      <ul>${items}</ul>
    </section>`;
  });
  return sections.join('\n');
}

export function renderErrorBanner(message: string): string {
  return `<div class="banner error">${escapeHtml(message)}</div>`;
}

export function renderConflict(message: string): string {
  return `<div class="banner conflict">Impossible evidence: ${escapeHtml(message)}.
    Adjust or clear an observation.</div>`;
}

/** Target headline for one slot: "27.0 person-hours" style. */
export function renderTargetHeadline(
  slotLabel: string,
  unit: string,
  mean: number | undefined,
  sd: number | undefined,
): string {
  if (mean === undefined) {
    return `<div class="headline"><span class="slot">${escapeHtml(slotLabel)}</span>
      <span class="value">&mdash;</span></div>`;
  }
  const spread = sd === undefined ? '' : ` <span class="sd">&plusmn; ${formatMean(sd)}</span>`;
  return `<div class="headline"><span class="slot">${escapeHtml(slotLabel)}</span>
    <span class="value">${formatMean(mean)}</span>${spread}
    <span class="unit">${escapeHtml(unit)}</span></div>`;
}

/** Side-by-side histogram pair with the per-bin difference underneath. */
export function renderCompareView(
  baseline: PosteriorPayload | null,
  variant: PosteriorPayload | null,
  deltas: NodeDelta[],
): string {
  if (!baseline || !variant) {
    return '<p class="empty-state">Populate both scenario slots to compare them.</p>';
  }
  const baseById = new Map(baseline.nodes.map((n) => [n.id, n]));
  const variById = new Map(variant.nodes.map((n) => [n.id, n]));
  const rows = deltas.map((delta) => {
    const base = baseById.get(delta.id);
    const vari = variById.get(delta.id);
    const meanCell = delta.mean === undefined
      ? ''
      : `<td class="delta-mean">${formatDelta(delta.mean)}</td>`;
    return `<tr data-node="${escapeHtml(delta.id)}">
      <td class="node-id">${escapeHtml(delta.id)}</td>
      <td>${thumbnail(base)}</td>
      <td>${thumbnail(vari)}</td>
      ${meanCell}
    </tr>`;
  });
  return `<table class="compare">
    <thead><tr><th>node</th><th>baseline</th><th>variant</th><th>&Delta; mean</th></tr></thead>
    <tbody>${rows.join('\n')}</tbody>
  </table>`;
}
