/**
 * Contract fake for the documented /api/v1 surface, serving responses
 * recorded from the real service against the bundled model. Session
 * walks replay recorded steps keyed by the outcomes reported so far, so
 * a request the service never answered fails the test loudly instead of
 * inventing numbers.
 */

import { vi } from 'vitest';
import type { SessionResponse, WhatifResponse } from '../src/api';
import modelFixture from './fixtures/model.json';
import sweepFixture from './fixtures/sensitivity_sweep.json';
import walkFixture from './fixtures/session_walk.json';
import whatifFixture from './fixtures/whatif.json';

interface Walk {
  create: SessionResponse;
  fail_first: SessionResponse;
  passes: SessionResponse[];
}

const walk = walkFixture as unknown as Walk;
const whatif = whatifFixture as unknown as { nominal: WhatifResponse; air_cost_60: WhatifResponse };
const sweep = sweepFixture as unknown as Array<Record<string, any>>;

export const SYMPTOM = 'poor-idling-due-to-carburettor';

/** Recorded session states keyed by the "component:outcome,..." path so far. */
const walkSteps = new Map<string, SessionResponse>();
for (const state of [walk.fail_first, ...walk.passes]) {
  const key = state.history.map((h) => `${h.component}:${h.outcome}`).join(',');
  walkSteps.set(key, state);
}

function stableOverridesKey(overrides: Record<string, Record<string, number>>): string {
  const components = Object.keys(overrides).sort();
  return JSON.stringify(
    components.map((c) => [c, Object.entries(overrides[c]).sort(([a], [b]) => a.localeCompare(b))]),
  );
}

const WHATIF_RESPONSES = new Map<string, WhatifResponse>([
  [stableOverridesKey({}), whatif.nominal],
  [stableOverridesKey({ 'air-leak-into-system': { cost: 60 } }), whatif.air_cost_60],
]);

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

function clone<T>(value: T): T {
  return structuredClone(value);
}

interface RecordedRequest {
  method: string;
  path: string;
  body: any;
}

export class FakeService {
  readonly requests: RecordedRequest[] = [];
  private sessions = new Map<string, { steps: string[]; state: SessionResponse }>();
  private counter = 0;
  private nextFailure: { status: number; body: unknown } | null = null;
  private gate: Promise<void> | null = null;

  /** Make the next request fail with the given status. */
  failNext(status = 500, body: unknown = { error: 'internal_error', detail: 'simulated failure' }): void {
    this.nextFailure = { status, body };
  }

  /** Hold the next response until the returned release function runs. */
  holdNext(): () => void {
    let release!: () => void;
    this.gate = new Promise((resolve) => {
      release = resolve;
    });
    return release;
  }

  handler = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = typeof input === 'string' ? input : input instanceof URL ? input.toString() : input.url;
    const method = init?.method ?? 'GET';
    const path = url.replace(/^https?:\/\/[^/]+/, '').replace(/^\/api\/v1/, '');
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    this.requests.push({ method, path, body });
    if (this.gate) {
      const gate = this.gate;
      this.gate = null;
      await gate;
    }
    if (this.nextFailure) {
      const failure = this.nextFailure;
      this.nextFailure = null;
      return json(failure.status, failure.body);
    }
    return this.route(method, path, body);
  };

  count(path: string): number {
    return this.requests.filter((r) => r.path === path).length;
  }

  private route(method: string, path: string, body: any): Response {
    if (method === 'GET' && path === '/model') return json(200, modelFixture);

    if (method === 'POST' && path === '/sessions') {
      if (body?.symptom !== SYMPTOM) {
        return json(404, { error: 'not_found', detail: `unknown symptom '${body?.symptom}'` });
      }
      const id = `fake-${++this.counter}`;
      const state = { ...clone(walk.create), id };
      this.sessions.set(id, { steps: [], state });
      return json(201, state);
    }

    const m = path.match(/^\/sessions\/([^/]+)(\/outcome)?$/);
    if (m) {
      const record = this.sessions.get(m[1]);
      if (!record) {
        return json(404, { error: 'not_found', detail: `unknown or expired session '${m[1]}'` });
      }
      if (method === 'GET' && !m[2]) return json(200, record.state);
      if (method === 'POST' && m[2]) {
        const expected = record.state.recommendation?.component;
        if (!expected || body?.component !== expected) {
          return json(409, {
            error: 'conflict',
            detail: `recommended test is '${expected}'; pass override to diverge`,
          });
        }
        record.steps.push(`${body.component}:${body.outcome}`);
        const next = walkSteps.get(record.steps.join(','));
        if (!next) {
          return json(500, { error: 'unrecorded', detail: `no fixture for ${record.steps.join(',')}` });
        }
        record.state = { ...clone(next), id: m[1] };
        return json(200, record.state);
      }
    }

    if (method === 'POST' && path === '/whatif') {
      if (body?.symptom !== SYMPTOM) {
        return json(404, { error: 'not_found', detail: `unknown symptom '${body?.symptom}'` });
      }
      const hit = WHATIF_RESPONSES.get(stableOverridesKey(body.overrides ?? {}));
      if (!hit) {
        return json(500, { error: 'unrecorded', detail: `no fixture for overrides ${JSON.stringify(body.overrides)}` });
      }
      return json(200, clone(hit));
    }

    if (method === 'POST' && path === '/sensitivity') {
      if (body?.symptom !== SYMPTOM || body?.expert !== 'expert-2') {
        return json(404, { error: 'not_found', detail: 'unknown symptom or expert' });
      }
      const hit = sweep.find((r) => r.s === body.s && r.seed === body.seed);
      if (!hit) {
        return json(500, { error: 'unrecorded', detail: `no fixture for s=${body.s} seed=${body.seed}` });
      }
      return json(200, clone(hit));
    }

    return json(404, { error: 'not_found', detail: `no route for ${method} ${path}` });
  }
}

/** Stub global fetch with a fresh fake; callers unstub in afterEach. */
export function installFake(): FakeService {
  const fake = new FakeService();
  vi.stubGlobal('fetch', fake.handler);
  return fake;
}

/** Fresh DOM root for a controller under test. */
export function mountRoot(): HTMLElement {
  document.body.innerHTML = '';
  const root = document.createElement('div');
  document.body.append(root);
  return root;
}

export function click(root: ParentNode, selector: string): void {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`nothing to click at ${selector}`);
  el.click();
}

export function text(root: ParentNode, selector: string): string {
  const el = root.querySelector<HTMLElement>(selector);
  if (!el) throw new Error(`missing element: ${selector}`);
  return el.textContent ?? '';
}

export function setInput(input: HTMLInputElement, value: string): void {
  input.value = value;
  input.dispatchEvent(new Event('input', { bubbles: true }));
}
