import type { Api } from './api.js';
import type { SessionState } from './types.js';

export type Listener = (view: SessionView) => void;

/**
 * Client-side mirror of one server session: the latest state response,
 * the latest sheet SVG, and a pending flag.
 *
 * All mutations funnel through `mutate`, which serializes them (one
 * in-flight request at a time) and replaces local state wholesale with
 * the server's response — the server is authoritative, nothing is
 * applied optimistically.
 */
export class SessionView {
  state: SessionState;
  sheet = '';
  pending = false;

  private queue: Promise<void> = Promise.resolve();
  private listeners: Listener[] = [];

  constructor(readonly api: Api, readonly sessionId: string,
              initial: SessionState) {
    this.state = initial;
  }

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) {
      listener(this);
    }
  }

  /** Queue a state-changing request; resolves after sheet refresh. */
  mutate(step: () => Promise<SessionState>): Promise<void> {
    const run = async () => {
      this.pending = true;
      this.notify();
      try {
        this.state = await step();
        this.sheet = await this.api.sheetSvg(this.sessionId);
      } finally {
        this.pending = false;
        this.notify();
      }
    };
    this.queue = this.queue.then(run, run);
    return this.queue;
  }

  /** Re-fetch everything from the server (initial load, reloads). */
  refresh(): Promise<void> {
    return this.mutate(() => this.api.getState(this.sessionId));
  }

  /** Design shown by the current small-multiples page, if any. */
  currentDesignId(): string | null {
    if (this.state.mode === 'small_multiples') {
      return this.state.designs[this.state.page_index]?.id ?? null;
    }
    return this.state.selection?.[0] ?? this.state.designs[0]?.id ?? null;
  }

  /** Row shown by the current small-permutables page, if any. */
  currentRowKey(): string | null {
    if (this.state.mode === 'small_permutables') {
      return this.state.renderable_row_keys[this.state.page_index] ?? null;
    }
    return this.state.selection?.[1]
      ?? this.state.renderable_row_keys[0] ?? null;
  }

  /** The glyph key a sheet cell carries in the current mode. */
  selectionKeyForMode(): string | null {
    if (!this.state.selection) {
      return null;
    }
    const [designId, rowKey] = this.state.selection;
    return this.state.mode === 'small_multiples' ? rowKey : designId;
  }
}

export async function openSession(api: Api, sessionId: string):
    Promise<SessionView> {
  const state = await api.getState(sessionId);
  const view = new SessionView(api, sessionId, state);
  view.sheet = await api.sheetSvg(sessionId);
  return view;
}
