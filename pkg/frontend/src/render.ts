/**
 * HTML fragment renderers. Pure string functions so the views are
 * testable without a DOM; main.ts assigns the output to containers.
 */

import {
  CandidateView, LemmaDetail, LemmaSearchPayload, LexGramPayload,
  QueueItem, RegistryDocument, TextSearchPayload,
} from './api.js';

/**
 * <option> list for grammeme pickers, ordered by the registry's canonical
 * category order so the builder mirrors gramset display order.
 */
export function grammemeOptions(registry: RegistryDocument): string {
  const rank = new Map(registry.category_order.map((c, i) => [c, i]));
  const sorted = [...registry.grammemes].sort((a, b) => {
    const ra = rank.get(a.category) ?? registry.category_order.length;
    const rb = rank.get(b.category) ?? registry.category_order.length;
    return ra - rb || a.name.localeCompare(b.name);
  });
  return sorted
    .map((g) => `<option value="${escapeHtml(g.name)}">`
      + `${escapeHtml(g.category)}: ${escapeHtml(g.name)}</option>`)
    .join('');
}

export function escapeHtml(raw: string): string {
  return raw
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

/** Wrap each requested word (first remaining occurrence, in order) in <mark>. */
export function highlightWords(sentence: string, words: string[]): string {
  let cursor = 0;
  let html = '';
  const lower = sentence.toLowerCase();
  for (const word of words) {
    const at = lower.indexOf(word.toLowerCase(), cursor);
    if (at < 0) continue;
    html += escapeHtml(sentence.slice(cursor, at));
    html += `<mark>${escapeHtml(sentence.slice(at, at + word.length))}</mark>`;
    cursor = at + word.length;
  }
  html += escapeHtml(sentence.slice(cursor));
  return html;
}

function candidateRow(candidate: CandidateView, index: number): string {
  const chips = candidate.gramset
    ? candidate.gramset.split(', ')
        .map((g) => `<span class="chip">${escapeHtml(g)}</span>`)
        .join('')
    : '<span class="chip chip-empty">dictionary form</span>';
  const gloss = candidate.gloss ? ` — ${escapeHtml(candidate.gloss)}` : '';
  const meaning = candidate.meaning > 0 ? ` <small>(meaning ${candidate.meaning})</small>` : '';
  return `<li class="candidate" data-index="${index}">`
    + `<kbd>${index + 1}</kbd> <b>${escapeHtml(candidate.lemma ?? '?')}</b>`
    + `${meaning}${gloss}<span class="chips">${chips}</span></li>`;
}

export function renderQueueItem(item: QueueItem, active: boolean): string {
  const candidates = item.candidates.length
    ? `<ol class="candidates">${item.candidates.map(candidateRow).join('')}</ol>`
    : '<p class="unknown-note">Unknown token — press <kbd>m</kbd> to add a manual candidate.</p>';
  return `<article class="queue-item${active ? ' active' : ''}" `
    + `data-ref="${item.ref.text}:${item.ref.sentence}:${item.ref.position}">`
    + `<header><span class="homonymy ${escapeHtml(item.homonymy)}">${escapeHtml(item.homonymy)}</span></header>`
    + `<p class="sentence">${highlightWords(item.sentence, [item.surface])}</p>`
    + candidates
    + '</article>';
}

export function renderQueue(items: QueueItem[], cursor: number,
                            error: string | null): string {
  const banner = error
    ? `<div class="error-banner" role="alert">${escapeHtml(error)}</div>`
    : '';
  if (!items.length) {
    return `${banner}<p class="empty">Queue is empty — nothing to disambiguate.</p>`;
  }
  const body = items
    .map((item, i) => renderQueueItem(item, i === cursor))
    .join('');
  return `${banner}<p class="count">${items.length} pending</p>${body}`;
}

export function renderTextResults(payload: TextSearchPayload): string {
  const rows = payload.records
    .map((r) => `<tr><td>${r.id}</td><td>${escapeHtml(r.title)}</td>`
      + `<td>${escapeHtml(r.title_translation ?? '')}</td>`
      + `<td>${escapeHtml(r.snippet ?? '')}</td></tr>`)
    .join('');
  return `<p class="count">${payload.total} records were founded.</p>`
    + '<table class="results"><thead><tr><th>No</th><th>Title</th>'
    + '<th>Translation</th><th>Snippet</th></tr></thead>'
    + `<tbody>${rows}</tbody></table>`;
}

export function renderLexgramResults(payload: LexGramPayload): string {
  const rows = payload.entries
    .map((e) => `<li><a href="#texts">${escapeHtml(e.title)}</a>`
      + `<p class="sentence">${highlightWords(e.sentence, e.words)}</p>`
      + (e.translation ? `<p class="translation">${escapeHtml(e.translation)}</p>` : '')
      + '</li>')
    .join('');
  return `<p class="count">${payload.text_count} texts were founded, `
    + `${payload.entry_count} entries.</p><ol class="hits">${rows}</ol>`;
}

export function renderLemmaResults(payload: LemmaSearchPayload): string {
  const rows = payload.records
    .map((r) => `<tr data-lemma="${r.id}"><td><a class="lemma-link" `
      + `data-lemma="${r.id}" href="#lemmas">${escapeHtml(r.surface)}</a></td>`
      + `<td>${escapeHtml(r.interpretations.join(' '))}</td>`
      + `<td>${r.wordform_count}</td><td>${r.example_count}</td></tr>`)
    .join('');
  return `<p class="count">${payload.total} records were founded.</p>`
    + '<table class="results"><thead><tr><th>Lemma</th><th>Interpretation</th>'
    + '<th>Wordforms</th><th>Examples</th></tr></thead>'
    + `<tbody>${rows}</tbody></table>`;
}

/** Dictionary-entry card: meanings then the paradigm table in template order. */
export function renderLemmaCard(detail: LemmaDetail): string {
  const meanings = detail.meanings
    .map((m) => {
      const glosses = Object.entries(m.interpretations)
        .map(([label, text]) => `<li><b>${escapeHtml(label)}:</b> ${escapeHtml(text)}</li>`)
        .join('');
      const translations = Object.entries(m.translations)
        .map(([lang, surfaces]) =>
          `<li><b>${escapeHtml(lang)}:</b> <i>${escapeHtml(surfaces.join('; '))}</i></li>`)
        .join('');
      return `<section class="meaning"><h4>${m.ordinal}`
        + (m.concept ? ` <small>${escapeHtml(m.concept)}</small>` : '')
        + `</h4><ul>${glosses}</ul>`
        + (translations ? `<h5>translation</h5><ul>${translations}</ul>` : '')
        + '</section>';
    })
    .join('');
  const variety = detail.wordforms.find((wf) => wf.variety)?.variety ?? 'form';
  const rows = detail.wordforms
    .map((wf, i) => `<tr><td>${i + 1}.</td>`
      + `<td>${escapeHtml(wf.gramset || 'dictionary form')}</td>`
      + `<td>${escapeHtml(wf.surface)}</td></tr>`)
    .join('');
  const paradigm = detail.wordforms.length
    ? `<h4>wordforms (${detail.wordforms.length})</h4>`
      + '<table class="paradigm"><thead><tr><th>No</th>'
      + `<th>grammatical attributes</th><th>${escapeHtml(variety)}</th></tr></thead>`
      + `<tbody>${rows}</tbody></table>`
    : '';
  const dialects = detail.dialects_of_usage.length
    ? `<p class="dialects">dialects of usage: ${escapeHtml(detail.dialects_of_usage.join(', '))}</p>`
    : '';
  return `<article class="lemma-card"><h3>${escapeHtml(detail.surface)}</h3>`
    + `<p>language: ${escapeHtml(detail.language)} · part of speech: `
    + `${escapeHtml(detail.pos)}</p>${meanings}${dialects}${paradigm}</article>`;
}
