/**
 * Step-through troubleshooting wizard.
 *
 * The server owns all session state: this controller renders the latest
 * session response and posts outcomes. The only figure computed here is
 * the running total of minutes spent, summed from the model costs of the
 * tests already reported. The session id lives in the URL hash so a page
 * refresh reconstructs the same view from GET /sessions/{id}.
 */

import type { ApiClient, ModelOut, SessionResponse } from './api';
import { ApiError } from './api';
import { escapeHtml, settle } from './dom';
import { minutes, percent, ratio } from './format';

const HASH_PREFIX = '#session=';

export function sessionIdFromHash(hash: string): string | null {
  return hash.startsWith(HASH_PREFIX) ? decodeURIComponent(hash.slice(HASH_PREFIX.length)) : null;
}

interface InlineError {
  message: string;
  retry: () => void;
}

export class Wizard {
  private model: ModelOut | null = null;
  private session: SessionResponse | null = null;
  private selectedSymptom = '';
  private pending = false;
  private error: InlineError | null = null;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  /** Load the model, then restore any session referenced by the URL hash. */
  async mount(): Promise<void> {
    this.pending = true;
    this.render();
    try {
      this.model = await this.api.model();
      this.selectedSymptom = this.model.symptoms[0]?.id ?? '';
    } catch (err) {
      this.pending = false;
      this.error = this.inlineError(err, () => void this.mount());
      this.render();
      return;
    }
    this.pending = false;
    const existing = sessionIdFromHash(window.location.hash);
    if (existing) {
      await this.restore(existing);
    } else {
      this.render();
    }
  }

  /** Rebuild the view for an existing session (page refresh mid-session). */
  private async restore(id: string): Promise<void> {
    this.pending = true;
    this.render();
    try {
      this.session = await this.api.getSession(id);
    } catch (err) {
      if (err instanceof ApiError && err.status === 404) {
        window.location.hash = '';
        this.session = null;
      } else {
        this.error = this.inlineError(err, () => void this.restore(id));
      }
    } finally {
      this.pending = false;
      this.render();
    }
  }

  async start(symptom: string): Promise<void> {
    if (this.pending) return;
    this.pending = true;
    this.error = null;
    this.render();
    try {
      this.session = await this.api.createSession(symptom);
      window.location.hash = HASH_PREFIX + encodeURIComponent(this.session.id);
    } catch (err) {
      this.error = this.inlineError(err, () => void this.start(symptom));
    } finally {
      this.pending = false;
      this.render();
    }
  }

  /** Report the outcome of the currently recommended test. */
  async report(outcome: 'pass' | 'fail'): Promise<void> {
    const rec = this.session?.recommendation;
    if (!rec || this.pending) return;
    const sessionId = this.session!.id;
    this.pending = true;
    this.error = null;
    this.render();
    try {
      this.session = await this.api.reportOutcome(sessionId, rec.component, outcome);
    } catch (err) {
      this.error = this.inlineError(err, () => void this.report(outcome));
    } finally {
      this.pending = false;
      this.render();
    }
  }

  /** Resolves once no request is in flight. */
  whenIdle(): Promise<void> {
    return settle(() => !this.pending, 'wizard');
  }

  private inlineError(err: unknown, retry: () => void): InlineError {
    const message = err instanceof Error ? err.message : String(err);
    return { message, retry };
  }

  /** Minutes spent so far: sum of model costs of the tests in history. */
  private minutesSpent(): number {
    if (!this.model || !this.session) return 0;
    const symptom = this.model.symptoms.find((s) => s.id === this.session!.symptom);
    const costs = new Map((symptom?.components ?? []).map((c) => [c.id, c.cost]));
    return this.session.history.reduce((total, h) => total + (costs.get(h.component) ?? 0), 0);
  }

  private componentName(id: string | null): string {
    if (id === null) return '';
    for (const symptom of this.model?.symptoms ?? []) {
      const hit = symptom.components.find((c) => c.id === id);
      if (hit) return hit.name;
    }
    return id;
  }

  render(): void {
    const parts: string[] = [];
    if (this.error) {
      parts.push(
        `<div class="error" role="alert"><span>${escapeHtml(this.error.message)}</span>` +
          `<button type="button" class="retry">Retry</button></div>`,
      );
    }
    if (!this.session) {
      parts.push(this.renderStart());
    } else if (this.session.status === 'active') {
      parts.push(this.renderActive(this.session));
    } else {
      parts.push(this.renderTerminal(this.session));
    }
    this.root.innerHTML = parts.join('\n');
    this.bind();
  }

  private renderStart(): string {
    const options = (this.model?.symptoms ?? [])
      .map(
        (s) =>
          `<option value="${escapeHtml(s.id)}"${s.id === this.selectedSymptom ? ' selected' : ''}>` +
          `${escapeHtml(s.name)}</option>`,
      )
      .join('');
    return `
      <form class="start">
        <label>Symptom
          <select class="symptom" ${this.pending ? 'disabled' : ''}>${options}</select>
        </label>
        <button type="submit" ${this.pending || !this.model ? 'disabled' : ''}>Start diagnosis</button>
      </form>`;
  }

  private renderActive(session: SessionResponse): string {
    const rec = session.recommendation!;
    const disabled = this.pending ? 'disabled' : '';
    const queue = session.remaining
      .map(
        (c) =>
          `<li data-component="${escapeHtml(c.id)}"` +
          `${c.id === rec.component ? ' class="current"' : ''}>` +
          `${escapeHtml(c.name)} (${minutes(c.cost)}, ${percent(c.prob)})</li>`,
      )
      .join('');
    const history = session.history
      .map((h) => `<li>${escapeHtml(this.componentName(h.component))}: ${h.outcome}</li>`)
      .join('');
    const lastCandidate =
      session.remaining.length === 1
        ? '<p class="note">Last candidate: a confirming test is still worth running.</p>'
        : '';
    return `
      <section class="recommendation" data-component="${escapeHtml(rec.component)}">
        <h3>Test next: ${escapeHtml(rec.name)}</h3>
        <dl>
          <dt>test cost</dt><dd class="cost">${minutes(rec.cost)}</dd>
          <dt>fault probability</dt><dd class="prob">${percent(rec.prob)}</dd>
          <dt>cost/probability</dt><dd class="ratio">${ratio(rec.cp_ratio)}</dd>
          <dt>expected cost remaining</dt><dd class="remaining-ec">${minutes(session.remaining_expected_cost)}</dd>
        </dl>
        ${lastCandidate}
        <div class="actions">
          <button type="button" class="pass" ${disabled}>Pass (fault not here)</button>
          <button type="button" class="fail" ${disabled}>Fail (fault found)</button>
        </div>
      </section>
      <h4>Still suspect</h4>
      <ul class="queue">${queue}</ul>
      <h4>Tested</h4>
      <ol class="history">${history}</ol>
      <p class="spent">${minutes(this.minutesSpent())} spent so far</p>`;
  }

  private renderTerminal(session: SessionResponse): string {
    const spent = minutes(this.minutesSpent());
    const body =
      session.status === 'diagnosed'
        ? `<h3>Fault located: ${escapeHtml(this.componentName(session.diagnosis))}</h3>
           <p class="spent">${spent} spent</p>`
        : `<h3>Every candidate passed its test</h3>
           <p>No fault found among the listed components; the fault list or the
              reported outcomes are worth rechecking.</p>
           <p class="spent">${spent} spent</p>`;
    const history = session.history
      .map((h) => `<li>${escapeHtml(this.componentName(h.component))}: ${h.outcome}</li>`)
      .join('');
    return `
      <section class="result ${session.status}">${body}</section>
      <h4>Tested</h4>
      <ol class="history">${history}</ol>
      <button type="button" class="restart">Start over</button>`;
  }

  private bind(): void {
    this.root.querySelector<HTMLButtonElement>('.retry')?.addEventListener('click', () => {
      this.error?.retry();
    });
    const form = this.root.querySelector<HTMLFormElement>('form.start');
    if (form) {
      const select = form.querySelector<HTMLSelectElement>('select.symptom')!;
      select.addEventListener('change', () => {
        this.selectedSymptom = select.value;
      });
      form.addEventListener('submit', (event) => {
        event.preventDefault();
        void this.start(select.value);
      });
    }
    this.root.querySelector<HTMLButtonElement>('button.pass')?.addEventListener('click', () => {
      void this.report('pass');
    });
    this.root.querySelector<HTMLButtonElement>('button.fail')?.addEventListener('click', () => {
      void this.report('fail');
    });
    this.root.querySelector<HTMLButtonElement>('button.restart')?.addEventListener('click', () => {
      window.location.hash = '';
      this.session = null;
      this.error = null;
      this.render();
    });
  }
}
