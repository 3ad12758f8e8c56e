/**
 * /v1 API client and query-string builders.
 *
 * The builders are the contract surface: for a given form state they must
 * produce exactly the query string the server documents (fixed parameter
 * order, URLSearchParams encoding). Everything the UI sends goes through
 * them, so the contract tests pin recorded form submissions byte-for-byte.
 */

export interface TokenRef {
  text: number;
  sentence: number;
  position: number;
}

export interface CandidateView {
  lemma_id: number;
  lemma: string | null;
  pos: string | null;
  meaning: number;
  gloss: string | null;
  gramset: string;
  source: string;
}

export interface QueueItem {
  ref: TokenRef;
  surface: string;
  homonymy: string;
  sentence: string;
  candidates: CandidateView[];
}

export interface QueuePayload {
  items: QueueItem[];
  count: number;
}

export interface MarkupPayload {
  ref: TokenRef;
  state: string;
  chosen: number | null;
  editor: string | null;
  verified_at: string | null;
  homonymy: string;
  candidates: CandidateView[];
}

export interface TextRecord {
  id: number;
  title: string;
  title_translation: string | null;
  snippet: string | null;
}

export interface TextSearchPayload {
  total: number;
  page: number;
  page_size: number;
  records: TextRecord[];
}

export interface LexGramEntry {
  text_id: number;
  title: string;
  sentence_index: number;
  positions: number[];
  words: string[];
  sentence: string;
  translation: string | null;
}

export interface LexGramPayload {
  text_count: number;
  entry_count: number;
  entries: LexGramEntry[];
}

export interface LemmaRecord {
  id: number;
  surface: string;
  language: string;
  pos: string;
  interpretations: string[];
  wordform_count: number;
  example_count: number;
  examples_per_meaning: number[];
}

export interface LemmaSearchPayload {
  total: number;
  page: number;
  page_size: number;
  records: LemmaRecord[];
}

export interface WordformRow {
  gramset: string;
  surface: string;
  variety: string | null;
}

export interface LemmaDetail {
  id: number;
  surface: string;
  language: string;
  pos: string;
  dialects_of_usage: string[];
  meanings: {
    ordinal: number;
    concept: string | null;
    interpretations: Record<string, string>;
    translations: Record<string, string[]>;
  }[];
  wordforms: WordformRow[];
}

export interface ApiError {
  code: string;
  message: string;
}

export interface RegistryDocument {
  category_order: string[];
  pos_tags: string[];
  languages: { code: string; name: string }[];
  dialects: { id: number; language: string; name: string; standardized: boolean }[];
  corpus_types: { id: number; name: string }[];
  genres: { id: number; corpus_type: number; name: string }[];
  concepts: { id: string; label: string }[];
  grammemes: { name: string; category: string; pos: string[] }[];
}

// ---------------------------------------------------------------------------
// Query builders (contract-tested)
// ---------------------------------------------------------------------------

export interface TextSearchForm {
  language?: string;
  dialect?: string;
  corpus_type?: string;
  genre?: string;
  informant?: string;
  recorder?: string;
  author?: string;
  title?: string;
  word?: string;
  fragment?: string;
  year_from?: string | number;
  year_to?: string | number;
  page?: number;
  page_size?: number;
}

const TEXT_PARAM_ORDER: (keyof TextSearchForm)[] = [
  'language', 'dialect', 'corpus_type', 'genre', 'informant', 'recorder',
  'author', 'title', 'word', 'fragment', 'year_from', 'year_to',
];

function put(params: URLSearchParams, key: string, value: unknown): void {
  if (value === undefined || value === null || value === '') return;
  params.set(key, String(value));
}

export function buildTextsQuery(form: TextSearchForm): string {
  const params = new URLSearchParams();
  for (const key of TEXT_PARAM_ORDER) put(params, key, form[key]);
  put(params, 'page', form.page ?? 1);
  put(params, 'page_size', form.page_size ?? 10);
  return `/v1/texts?${params.toString()}`;
}

export interface LexGramForm {
  w1?: string;
  w1_pos?: string;
  w1_gram?: string[];        // grammeme names, joined with commas
  w2?: string;
  w2_pos?: string;
  w2_gram?: string[];
  language?: string;
  corpus_type?: string;
  distance_from: number | string;
  distance_to: number | string;
  verified_only?: boolean;
}

export function buildLexgramQuery(form: LexGramForm): string {
  const params = new URLSearchParams();
  put(params, 'w1', form.w1);
  put(params, 'w1_pos', form.w1_pos);
  put(params, 'w1_gram', form.w1_gram?.length ? form.w1_gram.join(',') : undefined);
  put(params, 'w2', form.w2);
  put(params, 'w2_pos', form.w2_pos);
  put(params, 'w2_gram', form.w2_gram?.length ? form.w2_gram.join(',') : undefined);
  put(params, 'language', form.language);
  put(params, 'corpus_type', form.corpus_type);
  params.set('distance_from', String(form.distance_from));
  params.set('distance_to', String(form.distance_to));
  if (form.verified_only) params.set('verified_only', 'true');
  return `/v1/search/lexgram?${params.toString()}`;
}

export interface LemmaSearchForm {
  surface?: string;
  pos?: string;
  gram?: string[];
  language?: string;
  dialect?: string;
  interpretation?: string;
  concept?: string;
  with_examples?: boolean;
  page?: number;
  page_size?: number;
}

export function buildLemmasQuery(form: LemmaSearchForm): string {
  const params = new URLSearchParams();
  put(params, 'surface', form.surface);
  put(params, 'pos', form.pos);
  put(params, 'gram', form.gram?.length ? form.gram.join(',') : undefined);
  put(params, 'language', form.language);
  put(params, 'dialect', form.dialect);
  put(params, 'interpretation', form.interpretation);
  put(params, 'concept', form.concept);
  if (form.with_examples) params.set('with_examples', 'true');
  put(params, 'page', form.page ?? 1);
  put(params, 'page_size', form.page_size ?? 10);
  return `/v1/lemmas?${params.toString()}`;
}

export function buildQueueQuery(homonymy?: string): string {
  const params = new URLSearchParams();
  if (homonymy) params.set('class', homonymy);
  const qs = params.toString();
  return qs ? `/v1/queue?${qs}` : '/v1/queue';
}

export function resolvePath(ref: TokenRef): string {
  return `/v1/markup/${ref.text}/${ref.sentence}/${ref.position}/resolve`;
}

export function manualPath(ref: TokenRef): string {
  return `/v1/markup/${ref.text}/${ref.sentence}/${ref.position}/manual`;
}

// ---------------------------------------------------------------------------
// Client
// ---------------------------------------------------------------------------

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClientError extends Error {
  constructor(public code: string, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      const err = body as ApiError;
      throw new ApiClientError(err.code ?? 'HttpError', err.message ?? response.statusText);
    }
    return body as T;
  }

  getQueue(homonymy?: string): Promise<QueuePayload> {
    return this.request(buildQueueQuery(homonymy));
  }

  resolve(ref: TokenRef, choice: number, editor: string): Promise<MarkupPayload> {
    return this.request(resolvePath(ref), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ choice, editor }),
    });
  }

  attachManual(ref: TokenRef, lemmaId: number, meaning: number,
               grammemes: string[], editor: string): Promise<MarkupPayload> {
    return this.request(manualPath(ref), {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ lemma_id: lemmaId, meaning, grammemes, editor }),
    });
  }

  searchTexts(form: TextSearchForm): Promise<TextSearchPayload> {
    return this.request(buildTextsQuery(form));
  }

  searchLexgram(form: LexGramForm): Promise<LexGramPayload> {
    return this.request(buildLexgramQuery(form));
  }

  searchLemmas(form: LemmaSearchForm): Promise<LemmaSearchPayload> {
    return this.request(buildLemmasQuery(form));
  }

  getLemma(id: number): Promise<LemmaDetail> {
    return this.request(`/v1/lemmas/${id}`);
  }

  getRegistry(): Promise<RegistryDocument> {
    return this.request('/v1/registry');
  }
}
