import { describe, expect, it } from 'vitest';

import { actionForKey, bindQueueKeys } from '../src/keyboard.js';

describe('actionForKey', () => {
  it('maps digits to zero-based candidate choices', () => {
    expect(actionForKey('1')).toEqual({ kind: 'choose', index: 0 });
    expect(actionForKey('9')).toEqual({ kind: 'choose', index: 8 });
    expect(actionForKey('0')).toBeNull();
  });

  it('maps navigation and manual keys', () => {
    expect(actionForKey('j')).toEqual({ kind: 'next' });
    expect(actionForKey('ArrowDown')).toEqual({ kind: 'next' });
    expect(actionForKey('k')).toEqual({ kind: 'prev' });
    expect(actionForKey('ArrowUp')).toEqual({ kind: 'prev' });
    expect(actionForKey('m')).toEqual({ kind: 'manual' });
    expect(actionForKey('Enter')).toBeNull();
  });
});

describe('bindQueueKeys', () => {
  function fakeWindow() {
    const listeners: ((e: Event) => void)[] = [];
    return {
      addEventListener: (_type: string, fn: any) => listeners.push(fn),
      removeEventListener: (_type: string, fn: any) => {
        const at = listeners.indexOf(fn);
        if (at >= 0) listeners.splice(at, 1);
      },
      fire(key: string, extra: Partial<KeyboardEvent> = {}) {
        for (const fn of [...listeners]) {
          fn({ key, target: null, preventDefault() {}, ...extra } as unknown as Event);
        }
      },
      count: () => listeners.length,
    };
  }

  it('dispatches actions and unbinds cleanly', () => {
    const win = fakeWindow();
    const seen: string[] = [];
    const unbind = bindQueueKeys((a) => seen.push(a.kind), win as any);
    win.fire('1');
    win.fire('j');
    win.fire('x');
    expect(seen).toEqual(['choose', 'next']);
    unbind();
    expect(win.count()).toBe(0);
  });

  it('ignores modified keystrokes', () => {
    const win = fakeWindow();
    const seen: string[] = [];
    bindQueueKeys((a) => seen.push(a.kind), win as any);
    win.fire('1', { ctrlKey: true });
    win.fire('j', { metaKey: true });
    expect(seen).toEqual([]);
  });
});
