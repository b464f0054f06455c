/**
 * Tiny DOM helpers shared by the panel controllers.
 */

/** querySelector that throws instead of returning null. */
export function $<T extends HTMLElement>(sel: string, ctx: ParentNode = document): T {
  const el = ctx.querySelector(sel);
  if (!el) throw new Error(`missing element: ${sel}`);
  return el as T;
}

export function escapeHtml(value: unknown): string {
  return String(value ?? '')
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

/** Poll until check() holds; lets callers await a controller going idle. */
export async function settle(check: () => boolean, label: string): Promise<void> {
  for (let i = 0; i < 400; i++) {
    if (check()) return;
    await new Promise((resolve) => setTimeout(resolve, 5));
  }
  throw new Error(`${label} never settled`);
}
