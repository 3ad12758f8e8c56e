/**
 * Keyboard-first queue review: number keys pick candidates, arrows (or
 * j/k) move the cursor. Keystrokes inside form fields are never captured.
 */

export type QueueAction =
  | { kind: 'choose'; index: number }
  | { kind: 'next' }
  | { kind: 'prev' }
  | { kind: 'manual' };

export function actionForKey(key: string): QueueAction | null {
  if (key >= '1' && key <= '9') {
    return { kind: 'choose', index: Number(key) - 1 };
  }
  switch (key) {
    case 'ArrowDown':
    case 'j':
      return { kind: 'next' };
    case 'ArrowUp':
    case 'k':
      return { kind: 'prev' };
    case 'm':
      return { kind: 'manual' };
    default:
      return null;
  }
}

export function isTypingTarget(target: EventTarget | null): boolean {
  if (!target || typeof HTMLElement === 'undefined'
      || !(target instanceof HTMLElement)) {
    return false;
  }
  return target.tagName === 'INPUT' || target.tagName === 'TEXTAREA'
    || target.tagName === 'SELECT' || target.isContentEditable;
}

export function bindQueueKeys(
  handle: (action: QueueAction) => void,
  win: Pick<Window, 'addEventListener' | 'removeEventListener'> = window,
): () => void {
  const listener = (event: Event) => {
    const e = event as KeyboardEvent;
    if (e.ctrlKey || e.metaKey || e.altKey) return;
    if (isTypingTarget(e.target)) return;
    const action = actionForKey(e.key);
    if (action) {
      e.preventDefault();
      handle(action);
    }
  };
  win.addEventListener('keydown', listener);
  return () => win.removeEventListener('keydown', listener);
}
