"""Brute-force reference implementations used to check the real query paths.

These deliberately avoid the package's index structures: they re-derive
every answer by scanning texts, markup and the dictionary directly.
"""

from __future__ import annotations

from collections import Counter

from corpuskit.corpus import Corpus
from corpuskit.ingest import WORD, lookup_key
from corpuskit.registry import Finding
from corpuskit.search import LemmaQuery, LexGramQuery, Scope, TextQuery, WordConstraint
from corpuskit.tagging import VERIFIED


def _effective(corpus: Corpus, text_id: int, sentence: int, position: int,
               verified_only: bool = False) -> list:
    markup = corpus.markup.entries.get((text_id, sentence, position))
    if markup is None:
        return []
    if markup.state == VERIFIED and markup.chosen is not None:
        chosen = [markup.candidates[markup.chosen]]
    else:
        chosen = list(markup.candidates) if not verified_only else []
    out = []
    for c in chosen:
        lemma = corpus.dictionary.lemmas.get(c.lemma_id)
        if lemma is not None:
            out.append((lemma, c))
    return out


def oracle_search_texts(corpus: Corpus, q: TextQuery) -> set[int]:
    reg = corpus.registry
    hits = set()
    for text_id, doc in corpus.texts.items():
        meta = doc.meta
        if q.language is not None and meta.language != q.language:
            continue
        if q.dialect is not None and (
                meta.dialect is None or reg.dialects[meta.dialect].name != q.dialect):
            continue
        if q.corpus_type is not None and \
                reg.corpus_types[meta.corpus_type].name != q.corpus_type:
            continue
        if q.genre is not None and (
                meta.genre is None or reg.genres[meta.genre].name != q.genre):
            continue
        if q.informant is not None and (
                meta.informant is None or meta.informant.lower() != q.informant.lower()):
            continue
        if q.recorder is not None and (
                meta.recorder is None or meta.recorder.lower() != q.recorder.lower()):
            continue
        if q.author is not None and (
                meta.author is None or meta.author.lower() != q.author.lower()):
            continue
        if q.title is not None and q.title.lower() not in meta.title.lower():
            continue
        if q.year_from is not None or q.year_to is not None:
            years = [y for y in (meta.year_recorded, meta.year_published) if y is not None]
            lo = q.year_from if q.year_from is not None else float("-inf")
            hi = q.year_to if q.year_to is not None else float("inf")
            if not any(lo <= y <= hi for y in years):
                continue
        if q.fragment is not None and \
                q.fragment.lower() not in doc.normalized_text.lower():
            continue
        if q.word is not None:
            wanted = lookup_key(q.word)
            found = any(
                token.kind == WORD and lookup_key(token.surface) == wanted
                for sentence in doc.sentences for token in sentence.tokens)
            if not found:
                continue
        hits.add(text_id)
    return hits


def _word_ok(corpus: Corpus, constraint: WordConstraint, doc, sentence, token,
             verified_only: bool) -> bool:
    surface_key = lookup_key(token.surface)
    candidates = _effective(corpus, doc.id, sentence.index, token.position, verified_only)
    wanted = lookup_key(constraint.word) if constraint.word is not None else None
    if constraint.pos is None and not constraint.grammemes:
        if wanted is None:
            return True
        if surface_key == wanted:
            return True
        return any(lookup_key(lemma.surface) == wanted for lemma, _c in candidates)
    for lemma, c in candidates:
        if constraint.pos is not None and lemma.pos != constraint.pos:
            continue
        if any(g not in c.gramset.grammemes for g in constraint.grammemes):
            continue
        if wanted is not None and surface_key != wanted \
                and lookup_key(lemma.surface) != wanted:
            continue
        return True
    return False


def oracle_lexgram(corpus: Corpus, q: LexGramQuery) -> set[tuple[int, int, tuple[int, ...]]]:
    reg = corpus.registry
    matches = set()
    for text_id, doc in corpus.texts.items():
        if q.language is not None and doc.meta.language != q.language:
            continue
        if q.corpus_type is not None and \
                reg.corpus_types[doc.meta.corpus_type].name != q.corpus_type:
            continue
        for sentence in doc.sentences:
            words = [t for t in sentence.tokens if t.kind == WORD]
            for i, t1 in enumerate(words):
                if not _word_ok(corpus, q.word1, doc, sentence, t1, q.verified_only):
                    continue
                if q.word2 is None:
                    matches.add((text_id, sentence.index, (t1.position,)))
                    continue
                for j, t2 in enumerate(words):
                    if not q.distance_from <= j - i <= q.distance_to:
                        continue
                    if _word_ok(corpus, q.word2, doc, sentence, t2, q.verified_only):
                        matches.add((text_id, sentence.index, (t1.position, t2.position)))
    return matches


def oracle_search_lemmas(corpus: Corpus, q: LemmaQuery) -> set[int]:
    reg = corpus.registry
    occurrences = _lemma_occurrence_counts(corpus)
    hits = set()
    for lemma in corpus.dictionary.lemmas.values():
        if q.language is not None and lemma.language != q.language:
            continue
        if q.surface is not None and q.surface.lower() not in lemma.surface.lower():
            continue
        if q.pos is not None and lemma.pos != q.pos:
            continue
        if q.dialect is not None:
            names = {reg.dialects[d].name for d in lemma.dialects_of_usage
                     if d in reg.dialects}
            if q.dialect not in names:
                continue
        if q.concept is not None and \
                not any(m.concept == q.concept for m in lemma.meanings):
            continue
        if q.interpretation is not None:
            glosses = [g for m in lemma.meanings for g in m.interpretations.values()]
            if not any(q.interpretation.lower() in g.lower() for g in glosses):
                continue
        if q.grammemes and not any(
                all(g in wf.gramset.grammemes for g in q.grammemes)
                for wf in lemma.wordforms):
            continue
        if q.with_examples and occurrences.get(lemma.id, 0) == 0:
            continue
        hits.add(lemma.id)
    return hits


def _lemma_occurrence_counts(corpus: Corpus) -> Counter:
    counts: Counter = Counter()
    for doc in corpus.texts.values():
        for sentence in doc.sentences:
            for token in sentence.tokens:
                if token.kind != WORD:
                    continue
                seen = set()
                for lemma, _c in _effective(corpus, doc.id, sentence.index, token.position):
                    if lemma.id not in seen:
                        counts[lemma.id] += 1
                        seen.add(lemma.id)
    return counts


def oracle_frequency(corpus: Corpus, scope: Scope | None, unit: str
                     ) -> tuple[Counter, int, int]:
    """(counts, ambiguous, untagged) by direct tally."""
    scope = scope or Scope()
    reg = corpus.registry
    counts: Counter = Counter()
    ambiguous = 0
    untagged = 0
    for text_id, doc in corpus.texts.items():
        if scope.text_ids is not None and text_id not in scope.text_ids:
            continue
        if scope.language is not None and doc.meta.language != scope.language:
            continue
        if scope.corpus_type is not None and \
                reg.corpus_types[doc.meta.corpus_type].name != scope.corpus_type:
            continue
        for sentence in doc.sentences:
            for token in sentence.tokens:
                if token.kind != WORD:
                    continue
                if unit == "wordform":
                    counts[lookup_key(token.surface)] += 1
                    continue
                effective = _effective(corpus, text_id, sentence.index, token.position)
                lemma_ids = {lemma.id for lemma, _c in effective}
                if not lemma_ids:
                    untagged += 1
                elif len(lemma_ids) > 1:
                    ambiguous += 1
                else:
                    counts[next(iter(effective))[0].surface] += 1
    return counts, ambiguous, untagged


def oracle_predict(corpus: Corpus, surface: str, k: int, max_suffix: int = 5):
    """(pos, gramset, suffix, support) rows recomputed from raw wordforms."""
    key = lookup_key(surface)
    per_suffix: dict[str, Counter] = {}
    for lemma in corpus.dictionary.lemmas.values():
        for wf in lemma.wordforms:
            fkey = lookup_key(wf.surface)
            for length in range(1, min(max_suffix, len(fkey)) + 1):
                per_suffix.setdefault(fkey[-length:], Counter())[(lemma.pos, wf.gramset)] += 1
    rows = []
    seen = set()
    for length in range(min(max_suffix, len(key)), 0, -1):
        suffix = key[-length:]
        for (pos, gramset), support in per_suffix.get(suffix, Counter()).items():
            if (pos, gramset) in seen:
                continue
            seen.add((pos, gramset))
            rows.append((-length, -support, pos,
                         corpus.registry.gramset_sort_key(gramset),
                         (pos, gramset, suffix, support)))
    rows.sort(key=lambda r: r[:4])
    return [r[4] for r in rows[:k]]


def oracle_registry_findings(reg) -> set[Finding]:
    findings = set()
    seen = set()
    for d in reg.dialects.values():
        if d.language not in reg.languages:
            findings.add(Finding("dangling-dialect-language", f"{d.id}:{d.name}"))
        if (d.language, d.name) in seen:
            findings.add(Finding("duplicate-dialect", f"{d.language}/{d.name}"))
        seen.add((d.language, d.name))
    seen_g = set()
    for g in reg.genres.values():
        if g.corpus_type not in reg.corpus_types:
            findings.add(Finding("dangling-genre-corpus-type", f"{g.id}:{g.name}"))
        if (g.corpus_type, g.name) in seen_g:
            findings.add(Finding("duplicate-genre", f"{g.corpus_type}/{g.name}"))
        seen_g.add((g.corpus_type, g.name))
    seen_ct = set()
    for ct in reg.corpus_types.values():
        if ct.name in seen_ct:
            findings.add(Finding("duplicate-corpus-type", ct.name))
        seen_ct.add(ct.name)
    for gram in reg.grammemes.values():
        for pos in gram.applicable_pos:
            if pos not in reg.pos_tags:
                findings.add(Finding("unknown-grammeme-pos", f"{gram.key}:{pos}"))
    return findings
