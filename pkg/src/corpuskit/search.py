"""Indexing and query surfaces: metadata search, lexico-grammatical
two-word distance search, lemma search, frequency/reverse dictionaries
and corpus statistics.

The index is an immutable snapshot built from (texts, markup, dictionary).
Distance search is ORDERED: word2 must follow word1, distance counted in
word tokens (punctuation excluded), within one sentence.  Matching is
diacritic-sensitive and case-insensitive.  Unverified (auto) markup
participates with any-candidate semantics; ``verified_only`` restricts a
query to editor-confirmed readings.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Mapping

from . import errors
from .ingest import TextDoc, WORD, lookup_key
from .morphology import Dictionary
from .registry import Grammeme, Gramset, Registry
from .tagging import MarkupStore, VERIFIED

# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TextQuery:
    language: str | None = None
    dialect: str | None = None          # dialect name
    corpus_type: str | None = None      # corpus type name
    genre: str | None = None            # genre name
    informant: str | None = None
    recorder: str | None = None
    author: str | None = None
    title: str | None = None            # case-insensitive substring
    word: str | None = None             # exact wordform, via surface index
    fragment: str | None = None         # case-insensitive substring of the text
    year_from: int | None = None
    year_to: int | None = None
    page: int = 1
    page_size: int = 10


@dataclass(frozen=True)
class WordConstraint:
    word: str | None = None                      # surface or lemma, exact
    pos: str | None = None
    grammemes: tuple[Grammeme, ...] = ()         # required subset of the gramset

    @property
    def empty(self) -> bool:
        return self.word is None and self.pos is None and not self.grammemes


@dataclass(frozen=True)
class LexGramQuery:
    word1: WordConstraint
    word2: WordConstraint | None = None
    language: str | None = None
    corpus_type: str | None = None
    distance_from: int = 1
    distance_to: int = 1
    verified_only: bool = False


@dataclass(frozen=True)
class LemmaQuery:
    surface: str | None = None           # case-insensitive substring
    pos: str | None = None
    grammemes: tuple[Grammeme, ...] = () # lemma has a form carrying all of them
    language: str | None = None
    dialect: str | None = None           # dialect-of-usage name
    interpretation: str | None = None    # substring over all glosses
    concept: str | None = None
    with_examples: bool = False
    page: int = 1
    page_size: int = 10


@dataclass
class Page:
    items: list
    total: int
    page: int
    page_size: int


# ---------------------------------------------------------------------------
# Index snapshot
# ---------------------------------------------------------------------------

Occurrence = tuple[int, int, int, int]  # (text id, sentence, word_index, position)


@dataclass(frozen=True)
class EffectiveCandidate:
    lemma_id: int
    lemma_key: str     # lookup key of the lemma surface
    pos: str
    meaning_ordinal: int
    gramset: Gramset
    verified: bool


class IndexSnapshot:
    """Pure function of (texts, dictionary, markup); safe to share."""

    def __init__(self, texts: Mapping[int, TextDoc], dictionary: Dictionary,
                 store: MarkupStore):
        self.postings: dict[str, list[Occurrence]] = defaultdict(list)
        self.lemma_occurrences: dict[int, list[Occurrence]] = defaultdict(list)
        self.candidates_at: dict[tuple[int, int, int], tuple[EffectiveCandidate, ...]] = {}
        # (text, sentence) -> word tokens in word_index order: (position, key, surface)
        self.sentence_words: dict[tuple[int, int], list[tuple[int, str, str]]] = {}
        self.word_token_total = 0

        for text_id in sorted(texts):
            doc = texts[text_id]
            for sentence in doc.sentences:
                words: list[tuple[int, str, str]] = []
                for token in sentence.tokens:
                    if token.kind != WORD:
                        continue
                    self.word_token_total += 1
                    key = lookup_key(token.surface)
                    occ: Occurrence = (text_id, sentence.index, token.word_index, token.position)
                    self.postings[key].append(occ)
                    words.append((token.position, key, token.surface))
                    markup = store.entries.get((text_id, sentence.index, token.position))
                    if markup is None or not markup.candidates:
                        continue
                    effective = []
                    for c in markup.effective_candidates():
                        lemma = dictionary.lemmas.get(c.lemma_id)
                        if lemma is None:
                            continue
                        effective.append(EffectiveCandidate(
                            lemma_id=lemma.id, lemma_key=lookup_key(lemma.surface),
                            pos=lemma.pos, meaning_ordinal=c.meaning_ordinal,
                            gramset=c.gramset,
                            verified=markup.state == VERIFIED))
                        self.lemma_occurrences[lemma.id].append(occ)
                    if effective:
                        self.candidates_at[(text_id, sentence.index, token.position)] = tuple(effective)
                self.sentence_words[(text_id, sentence.index)] = words
        # occurrence lists deduplicated and ordered
        for key, occs in self.postings.items():
            self.postings[key] = sorted(set(occs))
        for lemma_id, occs in self.lemma_occurrences.items():
            self.lemma_occurrences[lemma_id] = sorted(set(occs))


def build_index(texts: Mapping[int, TextDoc], dictionary: Dictionary,
                store: MarkupStore) -> IndexSnapshot:
    return IndexSnapshot(texts, dictionary, store)


# ---------------------------------------------------------------------------
# Text metadata search
# ---------------------------------------------------------------------------

def _contains(haystack: str | None, needle: str) -> bool:
    return haystack is not None and needle.lower() in haystack.lower()


def _equals_ci(value: str | None, wanted: str) -> bool:
    return value is not None and value.lower() == wanted.lower()


def _text_matches_meta(doc: TextDoc, registry: Registry, q: TextQuery) -> bool:
    meta = doc.meta
    if q.language is not None and meta.language != q.language:
        return False
    if q.dialect is not None:
        if meta.dialect is None:
            return False
        if registry.dialects[meta.dialect].name != q.dialect:
            return False
    if q.corpus_type is not None:
        if registry.corpus_types[meta.corpus_type].name != q.corpus_type:
            return False
    if q.genre is not None:
        if meta.genre is None or registry.genres[meta.genre].name != q.genre:
            return False
    if q.informant is not None and not _equals_ci(meta.informant, q.informant):
        return False
    if q.recorder is not None and not _equals_ci(meta.recorder, q.recorder):
        return False
    if q.author is not None and not _equals_ci(meta.author, q.author):
        return False
    if q.title is not None and not _contains(meta.title, q.title):
        return False
    if q.year_from is not None or q.year_to is not None:
        # a text matches on either its recording or its publication year
        years = [y for y in (meta.year_recorded, meta.year_published) if y is not None]
        lo = q.year_from if q.year_from is not None else -(10 ** 9)
        hi = q.year_to if q.year_to is not None else 10 ** 9
        if not any(lo <= y <= hi for y in years):
            return False
    if q.fragment is not None and q.fragment.lower() not in doc.normalized_text.lower():
        return False
    return True


@dataclass(frozen=True)
class TextHit:
    text_id: int
    title: str
    title_translation: str | None
    snippet: str | None


def _validate_paging(page: int, page_size: int) -> None:
    if page_size < 1 or page < 1:
        raise errors.InvalidQuery("page and page_size must be >= 1")


def search_texts(texts: Mapping[int, TextDoc], registry: Registry,
                 index: IndexSnapshot, q: TextQuery) -> Page:
    """Conjunctive metadata filtering with stable (title, id) ordering."""
    if q.year_from is not None and q.year_to is not None and q.year_from > q.year_to:
        raise errors.InvalidQuery(f"year range inverted: {q.year_from} > {q.year_to}")
    _validate_paging(q.page, q.page_size)
    word_hits: dict[int, Occurrence] | None = None
    if q.word is not None:
        word_hits = {}
        for occ in index.postings.get(lookup_key(q.word), ()):
            word_hits.setdefault(occ[0], occ)
    hits: list[TextHit] = []
    for text_id in texts:
        doc = texts[text_id]
        if word_hits is not None and text_id not in word_hits:
            continue
        if not _text_matches_meta(doc, registry, q):
            continue
        snippet = None
        if word_hits is not None:
            snippet = doc.sentence_text(word_hits[text_id][1])
        elif q.fragment is not None:
            at = doc.normalized_text.lower().index(q.fragment.lower())
            for sentence in doc.sentences:
                if sentence.span[0] <= at < sentence.span[1]:
                    snippet = doc.sentence_text(sentence.index)
                    break
        first_translation = doc.sentences[0].translation if doc.sentences else None
        hits.append(TextHit(text_id=text_id, title=doc.meta.title,
                            title_translation=first_translation, snippet=snippet))
    hits.sort(key=lambda h: (h.title, h.text_id))
    start = (q.page - 1) * q.page_size
    return Page(items=hits[start:start + q.page_size], total=len(hits),
                page=q.page, page_size=q.page_size)


# ---------------------------------------------------------------------------
# Lexico-grammatical distance search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LexGramHit:
    text_id: int
    sentence: int
    positions: tuple[int, ...]   # token positions of the matched words
    sentence_text: str
    translation: str | None


@dataclass
class LexGramResult:
    entries: list[LexGramHit]
    text_count: int
    entry_count: int


def _constraint_satisfied(constraint: WordConstraint, surface_key: str,
                          candidates: tuple[EffectiveCandidate, ...],
                          verified_only: bool) -> bool:
    if verified_only:
        candidates = tuple(c for c in candidates if c.verified)
    wanted = lookup_key(constraint.word) if constraint.word is not None else None
    if constraint.pos is None and not constraint.grammemes:
        if wanted is None:
            return True
        return surface_key == wanted or any(c.lemma_key == wanted for c in candidates)
    # pos/grammeme constraints must hold jointly on a single candidate
    for c in candidates:
        if constraint.pos is not None and c.pos != constraint.pos:
            continue
        if not c.gramset.issuperset(constraint.grammemes):
            continue
        if wanted is not None and surface_key != wanted and c.lemma_key != wanted:
            continue
        return True
    return False


def _validate_lexgram(q: LexGramQuery) -> None:
    if q.word1.empty:
        raise errors.InvalidQuery("word1 needs at least one constraint")
    if q.distance_from < 1 or q.distance_to < 1:
        raise errors.InvalidQuery("distance bounds must be >= 1")
    if q.distance_from > q.distance_to:
        raise errors.InvalidQuery(
            f"distance range inverted: {q.distance_from} > {q.distance_to}")


def lexgram_search(texts: Mapping[int, TextDoc], registry: Registry,
                   index: IndexSnapshot, q: LexGramQuery) -> LexGramResult:
    """Ordered two-word distance search within sentences."""
    _validate_lexgram(q)
    scope_ids = [
        text_id for text_id in sorted(texts)
        if (q.language is None or texts[text_id].meta.language == q.language)
        and (q.corpus_type is None
             or registry.corpus_types[texts[text_id].meta.corpus_type].name == q.corpus_type)
    ]
    entries: list[LexGramHit] = []
    texts_seen: set[int] = set()
    empty: tuple[EffectiveCandidate, ...] = ()
    for text_id in scope_ids:
        doc = texts[text_id]
        for sentence in doc.sentences:
            words = index.sentence_words[(text_id, sentence.index)]
            matched_1 = [
                i for i, (pos, key, _s) in enumerate(words)
                if _constraint_satisfied(q.word1, key,
                                         index.candidates_at.get((text_id, sentence.index, pos), empty),
                                         q.verified_only)
            ]
            if not matched_1:
                continue
            if q.word2 is None:
                for i in matched_1:
                    entries.append(_hit(doc, sentence.index, (words[i][0],)))
                    texts_seen.add(text_id)
                continue
            for i in matched_1:
                for d in range(q.distance_from, q.distance_to + 1):
                    j = i + d
                    if j >= len(words):
                        break
                    pos2, key2, _s2 = words[j]
                    if _constraint_satisfied(q.word2, key2,
                                             index.candidates_at.get((text_id, sentence.index, pos2), empty),
                                             q.verified_only):
                        entries.append(_hit(doc, sentence.index, (words[i][0], pos2)))
                        texts_seen.add(text_id)
    return LexGramResult(entries=entries, text_count=len(texts_seen),
                         entry_count=len(entries))


def _hit(doc: TextDoc, sentence_index: int, positions: tuple[int, ...]) -> LexGramHit:
    sentence = doc.sentences[sentence_index]
    return LexGramHit(text_id=doc.id, sentence=sentence_index, positions=positions,
                      sentence_text=doc.sentence_text(sentence_index),
                      translation=sentence.translation)


# ---------------------------------------------------------------------------
# Lemma search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LemmaHit:
    lemma_id: int
    surface: str
    language: str
    pos: str
    interpretations: tuple[str, ...]       # "1) gloss" strings, meaning order
    wordform_count: int
    example_count: int                     # corpus occurrences via markup
    examples_per_meaning: tuple[int, ...]  # aligned with meanings


def search_lemmas(dictionary: Dictionary, registry: Registry,
                  index: IndexSnapshot, q: LemmaQuery) -> Page:
    _validate_paging(q.page, q.page_size)
    if q.pos is not None:
        registry.check_pos(q.pos)
    hits: list[LemmaHit] = []
    for lemma in dictionary.lemmas_of(q.language):
        if q.surface is not None and q.surface.lower() not in lemma.surface.lower():
            continue
        if q.pos is not None and lemma.pos != q.pos:
            continue
        if q.dialect is not None:
            names = {registry.dialects[d].name for d in lemma.dialects_of_usage
                     if d in registry.dialects}
            if q.dialect not in names:
                continue
        if q.concept is not None:
            if not any(m.concept == q.concept for m in lemma.meanings):
                continue
        if q.interpretation is not None:
            glosses = [g for m in lemma.meanings for g in m.interpretations.values()]
            if not any(q.interpretation.lower() in g.lower() for g in glosses):
                continue
        if q.grammemes:
            if not any(wf.gramset.issuperset(q.grammemes) for wf in lemma.wordforms):
                continue
        occurrences = index.lemma_occurrences.get(lemma.id, [])
        if q.with_examples and not occurrences:
            continue
        per_meaning = _examples_per_meaning(lemma, index)
        hits.append(LemmaHit(
            lemma_id=lemma.id, surface=lemma.surface, language=lemma.language,
            pos=lemma.pos,
            interpretations=tuple(
                f"{m.ordinal}) " + "; ".join(m.interpretations[k]
                                             for k in sorted(m.interpretations))
                for m in lemma.meanings),
            wordform_count=len(lemma.wordforms),
            example_count=len(occurrences),
            examples_per_meaning=per_meaning))
    hits.sort(key=lambda h: (h.surface, h.lemma_id))
    start = (q.page - 1) * q.page_size
    return Page(items=hits[start:start + q.page_size], total=len(hits),
                page=q.page, page_size=q.page_size)


def _examples_per_meaning(lemma, index: IndexSnapshot) -> tuple[int, ...]:
    counts = [0] * len(lemma.meanings)
    for occ in index.lemma_occurrences.get(lemma.id, ()):
        key = (occ[0], occ[1], occ[3])
        for c in index.candidates_at.get(key, ()):
            if c.lemma_id == lemma.id and 1 <= c.meaning_ordinal <= len(counts):
                counts[c.meaning_ordinal - 1] += 1
    return tuple(counts)


def search_lemma_by_wordform(dictionary: Dictionary, surface: str) -> list:
    """Lemmas reachable from a surface form (Fig-style wordform lookup)."""
    seen: dict[int, object] = {}
    for lemma, _gramset, _variety in dictionary.analyze(surface):
        seen.setdefault(lemma.id, lemma)
    return sorted(seen.values(), key=lambda l: (l.surface, l.id))


# ---------------------------------------------------------------------------
# Frequency / reverse dictionaries, statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scope:
    """Restricts an aggregate to a corpus slice."""
    language: str | None = None
    corpus_type: str | None = None
    text_ids: tuple[int, ...] | None = None


def select_texts(texts: Mapping[int, TextDoc], registry: Registry,
                 scope: Scope | None) -> list[TextDoc]:
    scope = scope or Scope()
    out = []
    for text_id in sorted(texts):
        doc = texts[text_id]
        if scope.text_ids is not None and text_id not in scope.text_ids:
            continue
        if scope.language is not None and doc.meta.language != scope.language:
            continue
        if (scope.corpus_type is not None
                and registry.corpus_types[doc.meta.corpus_type].name != scope.corpus_type):
            continue
        out.append(doc)
    return out


@dataclass
class FrequencyResult:
    unit: str
    items: list[tuple[str, int]]   # descending count, ties lexicographic
    ambiguous: int = 0             # auto tokens with >1 distinct lemma
    untagged: int = 0


def frequency(texts: Mapping[int, TextDoc], registry: Registry,
              dictionary: Dictionary, store: MarkupStore,
              scope: Scope | None, unit: str) -> FrequencyResult:
    if unit not in ("lemma", "wordform"):
        raise errors.InvalidQuery(f"unit must be lemma or wordform, got {unit!r}")
    docs = select_texts(texts, registry, scope)
    counter: Counter = Counter()
    ambiguous = 0
    untagged = 0
    total_words = 0
    for doc in docs:
        for sentence in doc.sentences:
            for token in sentence.tokens:
                if token.kind != WORD:
                    continue
                total_words += 1
                if unit == "wordform":
                    counter[lookup_key(token.surface)] += 1
                    continue
                markup = store.entries.get((doc.id, sentence.index, token.position))
                if markup is None or not markup.candidates:
                    untagged += 1
                    continue
                lemma_ids = {c.lemma_id for c in markup.effective_candidates()}
                if len(lemma_ids) != 1:
                    ambiguous += 1
                    continue
                lemma = dictionary.lemmas.get(next(iter(lemma_ids)))
                if lemma is None:
                    untagged += 1
                    continue
                counter[lemma.surface] += 1
    if total_words == 0:
        raise errors.EmptyScope("no word tokens in scope")
    items = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return FrequencyResult(unit=unit, items=items, ambiguous=ambiguous, untagged=untagged)


def reverse_dictionary(dictionary: Dictionary, language: str | None = None) -> list:
    """Lemmas ordered by code points of the reversed surface (suffix order)."""
    return sorted(dictionary.lemmas_of(language),
                  key=lambda l: (l.surface[::-1], l.surface, l.id))


@dataclass
class StatsTable:
    dimension: str
    rows: list[dict]
    total: int


def stats(texts: Mapping[int, TextDoc], registry: Registry, dimension: str) -> StatsTable:
    if dimension not in ("by_corpus", "by_genre", "by_year"):
        raise errors.InvalidQuery(f"unknown stats dimension {dimension!r}")
    docs = [texts[i] for i in sorted(texts)]
    rows: list[dict] = []
    if dimension == "by_corpus":
        counter = Counter((d.meta.language, registry.corpus_types[d.meta.corpus_type].name)
                          for d in docs)
        rows = [{"language": lang, "corpus_type": ct, "count": n}
                for (lang, ct), n in sorted(counter.items())]
    elif dimension == "by_genre":
        counter = Counter(
            (d.meta.language,
             registry.genres[d.meta.genre].name if d.meta.genre is not None else "(none)")
            for d in docs)
        rows = [{"language": lang, "genre": genre, "count": n}
                for (lang, genre), n in sorted(counter.items())]
    else:
        series = {
            "year_recorded": Counter(d.meta.year_recorded for d in docs
                                     if d.meta.year_recorded is not None),
            "year_published": Counter(d.meta.year_published for d in docs
                                      if d.meta.year_published is not None),
            "accession": Counter(d.accession_date.year for d in docs),
        }
        for name, counter in series.items():
            rows.extend({"series": name, "year": year, "count": n}
                        for year, n in sorted(counter.items()))
    return StatsTable(dimension=dimension, rows=rows, total=len(docs))
