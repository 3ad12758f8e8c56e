/**
 * Wires the stores and renderers into the page. The API is the single
 * source of truth; every mutation re-renders from its responses.
 */

import { ApiClient, LexGramForm, TextSearchForm, LemmaSearchForm } from './api.js';
import { bindQueueKeys } from './keyboard.js';
import { QueueStore } from './queue.js';
import {
  grammemeOptions, renderLemmaCard, renderLemmaResults, renderLexgramResults,
  renderQueue, renderTextResults, escapeHtml,
} from './render.js';

const api = new ApiClient('');
const editor = localStorage.getItem('editor-name') ?? 'editor';
const queue = new QueueStore(api, editor);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function field(form: HTMLFormElement, name: string): string | undefined {
  const value = (form.elements.namedItem(name) as HTMLInputElement | null)?.value.trim();
  return value || undefined;
}

function checked(form: HTMLFormElement, name: string): boolean {
  return (form.elements.namedItem(name) as HTMLInputElement | null)?.checked ?? false;
}

function grams(form: HTMLFormElement, name: string): string[] | undefined {
  const raw = field(form, name);
  return raw ? raw.split(',').map((s) => s.trim()).filter(Boolean) : undefined;
}

// -- queue -------------------------------------------------------------------

function paintQueue(): void {
  el('queue-view').innerHTML = renderQueue(queue.items, queue.cursor, queue.error);
  const manualForm = el<HTMLFormElement>('manual-form');
  manualForm.hidden = !queue.current() || queue.current()!.candidates.length > 0;
}

async function reloadQueue(): Promise<void> {
  const filter = el<HTMLSelectElement>('queue-filter').value || undefined;
  await queue.load(filter);
  paintQueue();
}

function setupQueue(): void {
  el<HTMLSelectElement>('queue-filter').addEventListener('change', () => {
    void reloadQueue();
  });
  bindQueueKeys((action) => {
    if (action.kind === 'choose') {
      void queue.resolveCurrent(action.index).then(paintQueue);
    } else if (action.kind === 'next') {
      queue.moveCursor(1);
      paintQueue();
    } else if (action.kind === 'prev') {
      queue.moveCursor(-1);
      paintQueue();
    } else {
      el<HTMLFormElement>('manual-form').hidden = false;
    }
  });
  el('queue-view').addEventListener('click', (event) => {
    const li = (event.target as HTMLElement).closest('li.candidate');
    if (li) {
      void queue.resolveCurrent(Number(li.getAttribute('data-index'))).then(paintQueue);
    }
  });

  const manualForm = el<HTMLFormElement>('manual-form');
  manualForm.addEventListener('submit', (event) => {
    event.preventDefault();
    const lemmaId = Number(field(manualForm, 'lemma_id') ?? 'NaN');
    if (Number.isNaN(lemmaId)) return;
    void queue
      .attachManual({
        lemmaId,
        meaning: Number(field(manualForm, 'meaning') ?? '1'),
        grammemes: grams(manualForm, 'grammemes') ?? [],
      })
      .then(paintQueue);
  });
  el<HTMLInputElement>('lemma-picker').addEventListener('input', async (event) => {
    const needle = (event.target as HTMLInputElement).value.trim();
    if (needle.length < 2) return;
    const payload = await api.searchLemmas({ surface: needle, page_size: 8 });
    el('lemma-picker-results').innerHTML = payload.records
      .map((r) => `<option value="${r.id}">${escapeHtml(r.surface)} (${escapeHtml(r.pos)})</option>`)
      .join('');
  });

  // gramset builder: registry-backed dropdown appends to the grammeme list
  void api.getRegistry().then((registry) => {
    el('grammeme-picker').innerHTML =
      '<option value=""></option>' + grammemeOptions(registry);
  });
  el('grammeme-add').addEventListener('click', () => {
    const picker = el<HTMLSelectElement>('grammeme-picker');
    if (!picker.value) return;
    const target = el<HTMLFormElement>('manual-form')
      .elements.namedItem('grammemes') as HTMLInputElement;
    target.value = target.value
      ? `${target.value}, ${picker.value}`
      : picker.value;
  });
}

// -- search forms -----------------------------------------------------------------

function setupTextsForm(): void {
  const form = el<HTMLFormElement>('texts-form');
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const query: TextSearchForm = {
      language: field(form, 'language'),
      dialect: field(form, 'dialect'),
      corpus_type: field(form, 'corpus_type'),
      genre: field(form, 'genre'),
      informant: field(form, 'informant'),
      recorder: field(form, 'recorder'),
      author: field(form, 'author'),
      title: field(form, 'title'),
      word: field(form, 'word'),
      fragment: field(form, 'fragment'),
      year_from: field(form, 'year_from'),
      year_to: field(form, 'year_to'),
      page_size: Number(field(form, 'page_size') ?? '10'),
    };
    const from = Number(query.year_from);
    const to = Number(query.year_to);
    if (query.year_from && query.year_to && from > to) {
      el('texts-results').innerHTML =
        '<div class="error-banner">year range inverted</div>';
      return;                      // mirror the API validation client-side
    }
    el('texts-results').innerHTML = renderTextResults(await api.searchTexts(query));
  });
}

function setupLexgramForm(): void {
  const form = el<HTMLFormElement>('lexgram-form');
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const query: LexGramForm = {
      w1: field(form, 'w1'),
      w1_pos: field(form, 'w1_pos'),
      w1_gram: grams(form, 'w1_gram'),
      w2: field(form, 'w2'),
      w2_pos: field(form, 'w2_pos'),
      w2_gram: grams(form, 'w2_gram'),
      language: field(form, 'language'),
      corpus_type: field(form, 'corpus_type'),
      distance_from: Number(field(form, 'distance_from') ?? '1'),
      distance_to: Number(field(form, 'distance_to') ?? '1'),
      verified_only: checked(form, 'verified_only'),
    };
    try {
      el('lexgram-results').innerHTML =
        renderLexgramResults(await api.searchLexgram(query));
    } catch (err) {
      el('lexgram-results').innerHTML =
        `<div class="error-banner">${escapeHtml(String(err))}</div>`;
    }
  });
}

function setupLemmasForm(): void {
  const form = el<HTMLFormElement>('lemmas-form');
  form.addEventListener('submit', async (event) => {
    event.preventDefault();
    const query: LemmaSearchForm = {
      surface: field(form, 'surface'),
      pos: field(form, 'pos'),
      gram: grams(form, 'gram'),
      language: field(form, 'language'),
      dialect: field(form, 'dialect'),
      interpretation: field(form, 'interpretation'),
      concept: field(form, 'concept'),
      with_examples: checked(form, 'with_examples'),
      page_size: Number(field(form, 'page_size') ?? '10'),
    };
    el('lemmas-results').innerHTML = renderLemmaResults(await api.searchLemmas(query));
  });
  el('lemmas-results').addEventListener('click', async (event) => {
    const link = (event.target as HTMLElement).closest('a.lemma-link');
    if (!link) return;
    event.preventDefault();
    const detail = await api.getLemma(Number(link.getAttribute('data-lemma')));
    el('lemma-card').innerHTML = renderLemmaCard(detail);
  });
}

// -- tabs ------------------------------------------------------------------------

function showTab(): void {
  const tab = location.hash.replace('#', '') || 'queue';
  for (const section of document.querySelectorAll<HTMLElement>('main > section')) {
    section.hidden = section.id !== `tab-${tab}`;
  }
  for (const link of document.querySelectorAll<HTMLAnchorElement>('nav a')) {
    link.classList.toggle('active', link.hash === `#${tab}`);
  }
}

window.addEventListener('hashchange', showTab);

document.addEventListener('DOMContentLoaded', () => {
  setupQueue();
  setupTextsForm();
  setupLexgramForm();
  setupLemmasForm();
  showTab();
  void reloadQueue();
});
