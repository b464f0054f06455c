/**
 * What-if panel: edit component costs and probabilities, debounce the
 * edits into /whatif calls, and show the nominal and re-ranked orders
 * side by side. Both columns come from the same endpoint (the nominal
 * one from an empty-override call), so ranking stays server-side.
 */

import type { ApiClient, ModelOut, WhatifOverride, WhatifResponse } from './api';
import { $, escapeHtml, settle } from './dom';
import { minutes, ratio, signedMinutes } from './format';

export class WhatifPanel {
  private model: ModelOut | null = null;
  private symptom = '';
  private nominal: WhatifResponse | null = null;
  private view: WhatifResponse | null = null;
  private error: string | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private queue: Promise<void> = Promise.resolve();
  private busy = 0;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly debounceMs = 250,
  ) {}

  async mount(): Promise<void> {
    try {
      this.model = await this.api.model();
    } catch (err) {
      this.root.innerHTML = `<div class="error" role="alert">${escapeHtml(String(err))}</div>`;
      return;
    }
    this.symptom = this.model.symptoms[0]?.id ?? '';
    this.renderFrame();
    this.loadNominal();
    await this.whenIdle();
  }

  /** Resolves once no edit is pending and no request is in flight. */
  whenIdle(): Promise<void> {
    return settle(() => this.timer === null && this.busy === 0, 'what-if panel');
  }

  private enqueue(task: () => Promise<void>): void {
    this.busy += 1;
    this.queue = this.queue.then(task).finally(() => {
      this.busy -= 1;
    });
  }

  private loadNominal(): void {
    this.enqueue(async () => {
      try {
        this.nominal = await this.api.whatif(this.symptom, {});
        this.view = this.nominal;
        this.error = null;
        this.renderEditor();
      } catch (err) {
        this.error = err instanceof Error ? err.message : String(err);
      }
      this.renderResults();
    });
  }

  /** Validate the editor; schedule a /whatif call only when all values parse. */
  private onEdit(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
    if (!this.validate()) return;
    this.timer = setTimeout(() => {
      this.timer = null;
      const overrides = this.buildOverrides();
      this.enqueue(async () => {
        try {
          this.view = await this.api.whatif(this.symptom, overrides);
          this.error = null;
        } catch (err) {
          this.error = err instanceof Error ? err.message : String(err);
        }
        this.renderResults();
      });
    }, this.debounceMs);
  }

  /** Flag invalid inputs; returns true when every field holds a usable value. */
  private validate(): boolean {
    let ok = true;
    for (const input of this.editorInputs()) {
      const value = Number(input.value);
      const valid =
        input.value.trim() !== '' &&
        Number.isFinite(value) &&
        (input.dataset.field === 'cost' ? value > 0 : value >= 0 && value <= 1);
      input.classList.toggle('invalid', !valid);
      ok = ok && valid;
    }
    return ok;
  }

  private buildOverrides(): Record<string, WhatifOverride> {
    const overrides: Record<string, WhatifOverride> = {};
    const baseline = new Map(this.nominal!.nominal_sequence.map((row) => [row.component, row]));
    for (const input of this.editorInputs()) {
      const component = input.dataset.component!;
      const field = input.dataset.field as 'cost' | 'prob';
      const value = Number(input.value);
      if (value !== baseline.get(component)![field]) {
        (overrides[component] ??= {})[field] = value;
      }
    }
    return overrides;
  }

  private editorInputs(): HTMLInputElement[] {
    return Array.from(this.root.querySelectorAll<HTMLInputElement>('.editor input'));
  }

  private renderFrame(): void {
    const options = (this.model?.symptoms ?? [])
      .map((s) => `<option value="${escapeHtml(s.id)}">${escapeHtml(s.name)}</option>`)
      .join('');
    this.root.innerHTML = `
      <div class="controls">
        <label>Symptom <select class="symptom">${options}</select></label>
        <button type="button" class="reset">Reset to nominal</button>
      </div>
      <div class="editor-host"></div>
      <div class="results-host"></div>`;
    const select = $<HTMLSelectElement>('select.symptom', this.root);
    select.value = this.symptom;
    select.addEventListener('change', () => {
      this.symptom = select.value;
      this.nominal = null;
      this.view = null;
      $('.editor-host', this.root).innerHTML = '';
      this.loadNominal();
    });
    $('button.reset', this.root).addEventListener('click', () => this.reset());
  }

  /** Restore the nominal view without another round trip. */
  private reset(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
    if (!this.nominal) return;
    this.view = this.nominal;
    this.error = null;
    this.renderEditor();
    this.renderResults();
  }

  private renderEditor(): void {
    const rows = this.nominal!.nominal_sequence
      .map(
        (row) => `
        <tr>
          <td>${escapeHtml(row.name)}</td>
          <td><input type="number" min="0" step="any"
               data-component="${escapeHtml(row.component)}" data-field="cost"
               value="${row.cost}" /></td>
          <td><input type="number" min="0" max="1" step="any"
               data-component="${escapeHtml(row.component)}" data-field="prob"
               value="${row.prob}" /></td>
        </tr>`,
      )
      .join('');
    $('.editor-host', this.root).innerHTML = `
      <table class="editor">
        <thead><tr><th>component</th><th>cost (min)</th><th>prob</th></tr></thead>
        <tbody>${rows}</tbody>
      </table>`;
    for (const input of this.editorInputs()) {
      input.addEventListener('input', () => this.onEdit());
    }
  }

  private renderResults(): void {
    const host = $('.results-host', this.root);
    if (this.error) {
      host.innerHTML = `<div class="error" role="alert">${escapeHtml(this.error)}</div>`;
      return;
    }
    if (!this.view) {
      host.innerHTML = '<p class="loading">Loading…</p>';
      return;
    }
    const view = this.view;
    const nominalRank = new Map(view.nominal_sequence.map((row) => [row.component, row.rank]));
    const nominalRows = view.nominal_sequence
      .map(
        (row) =>
          `<tr data-component="${escapeHtml(row.component)}"><td>${row.rank}</td>` +
          `<td>${escapeHtml(row.name)}</td><td>${ratio(row.cp_ratio)}</td></tr>`,
      )
      .join('');
    const modifiedRows = view.sequence
      .map((row) => {
        const before = nominalRank.get(row.component) ?? row.rank;
        const move = row.rank < before ? 'up' : row.rank > before ? 'down' : 'same';
        const glyph = move === 'up' ? '▲' : move === 'down' ? '▼' : '·';
        return (
          `<tr data-component="${escapeHtml(row.component)}"><td>${row.rank}</td>` +
          `<td>${escapeHtml(row.name)}</td><td>${ratio(row.cp_ratio)}</td>` +
          `<td class="move ${move}" data-move="${move}">${glyph}</td></tr>`
        );
      })
      .join('');
    host.innerHTML = `
      <div class="columns">
        <div>
          <h4>Nominal order</h4>
          <table class="nominal">
            <thead><tr><th>#</th><th>component</th><th>c/p</th></tr></thead>
            <tbody>${nominalRows}</tbody>
          </table>
          <p class="ec-nominal">expected cost ${minutes(view.nominal_expected_cost)}</p>
        </div>
        <div>
          <h4>With your edits</h4>
          <table class="modified">
            <thead><tr><th>#</th><th>component</th><th>c/p</th><th></th></tr></thead>
            <tbody>${modifiedRows}</tbody>
          </table>
          <p class="ec-modified">expected cost ${minutes(view.expected_cost)}</p>
        </div>
      </div>
      <p class="delta">Change vs nominal: ${signedMinutes(view.delta_vs_nominal)}</p>`;
  }
}
