/**
 * Disambiguation queue state.
 *
 * Resolving applies an optimistic update (the item leaves the queue
 * immediately) and rolls back if the API rejects it, leaving the token
 * visibly unresolved with the error banner set. The server response is
 * the source of truth: an unexpected post-mutation state forces a full
 * reload rather than trusting local state.
 */

import { ApiClient, ApiClientError, QueueItem } from './api.js';

export interface ManualCandidateInput {
  lemmaId: number;
  meaning: number;
  grammemes: string[];
}

export class QueueStore {
  items: QueueItem[] = [];
  cursor = 0;
  error: string | null = null;
  busy = false;
  homonymyFilter: string | undefined;

  constructor(private api: ApiClient, private editor: string) {}

  current(): QueueItem | undefined {
    return this.items[this.cursor];
  }

  async load(homonymy?: string): Promise<void> {
    this.homonymyFilter = homonymy;
    const payload = await this.api.getQueue(homonymy);
    this.items = payload.items;
    this.cursor = 0;
    this.error = null;
  }

  moveCursor(delta: number): void {
    if (!this.items.length) return;
    const next = this.cursor + delta;
    this.cursor = Math.min(Math.max(next, 0), this.items.length - 1);
  }

  private clampCursor(): void {
    if (this.cursor >= this.items.length) {
      this.cursor = Math.max(this.items.length - 1, 0);
    }
  }

  /** Resolve the item under the cursor; exactly one API call per attempt. */
  async resolveCurrent(choice: number): Promise<boolean> {
    const item = this.current();
    if (!item || this.busy) return false;
    if (choice < 0 || choice >= item.candidates.length) {
      this.error = `no candidate ${choice + 1}`;
      return false;
    }
    const index = this.cursor;
    this.busy = true;
    this.items.splice(index, 1); // optimistic: advance past the item
    this.clampCursor();
    try {
      const markup = await this.api.resolve(item.ref, choice, this.editor);
      if (markup.state !== 'verified') {
        await this.load(this.homonymyFilter); // server truth wins
      }
      this.error = null;
      return true;
    } catch (err) {
      // roll back: the token is still unresolved
      this.items.splice(index, 0, item);
      this.cursor = index;
      this.error = err instanceof ApiClientError
        ? `${err.code}: ${err.message}`
        : String(err);
      return false;
    } finally {
      this.busy = false;
    }
  }

  /** Attach a manual candidate to the (typically unknown) current token. */
  async attachManual(input: ManualCandidateInput): Promise<boolean> {
    const item = this.current();
    if (!item || this.busy) return false;
    const index = this.cursor;
    this.busy = true;
    this.items.splice(index, 1);
    this.clampCursor();
    try {
      const markup = await this.api.attachManual(
        item.ref, input.lemmaId, input.meaning, input.grammemes, this.editor);
      if (markup.state !== 'verified') {
        await this.load(this.homonymyFilter);
      }
      this.error = null;
      return true;
    } catch (err) {
      this.items.splice(index, 0, item);
      this.cursor = index;
      this.error = err instanceof ApiClientError
        ? `${err.code}: ${err.message}`
        : String(err);
      return false;
    } finally {
      this.busy = false;
    }
  }
}
