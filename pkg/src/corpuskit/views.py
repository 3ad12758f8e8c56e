"""Plain-dict payload builders shared by the HTTP API and the CLI.

Both interfaces must return byte-identical JSON for the same query, so
every response body is assembled here and nowhere else.
"""

from __future__ import annotations

from .corpus import Corpus
from .ingest import TextDoc
from .morphology import Lemma
from .search import (FrequencyResult, LexGramResult, Page, StatsTable)
from .tagging import MarkupRef, QueueItem, TokenMarkup, classify_homonymy


def text_page(page: Page) -> dict:
    return {
        "total": page.total,
        "page": page.page,
        "page_size": page.page_size,
        "records": [
            {"id": h.text_id, "title": h.title,
             "title_translation": h.title_translation, "snippet": h.snippet}
            for h in page.items
        ],
    }


def text_detail(corpus: Corpus, doc: TextDoc) -> dict:
    registry = corpus.registry
    meta = doc.meta
    return {
        "id": doc.id,
        "meta": {
            "title": meta.title,
            "language": meta.language,
            "dialect": registry.dialects[meta.dialect].name if meta.dialect else None,
            "corpus_type": registry.corpus_types[meta.corpus_type].name,
            "genre": registry.genres[meta.genre].name if meta.genre else None,
            "author": meta.author,
            "informant": meta.informant,
            "recorder": meta.recorder,
            "year_recorded": meta.year_recorded,
            "year_published": meta.year_published,
            "source": meta.source,
            "place_of_recording": meta.place_of_recording,
            "license": meta.license,
        },
        "accession_date": doc.accession_date.isoformat(),
        "sentences": [
            {
                "index": s.index,
                "text": doc.sentence_text(s.index),
                "translation": s.translation,
                "tokens": [
                    {"position": t.position, "surface": t.surface, "kind": t.kind,
                     "word_index": t.word_index}
                    for t in s.tokens
                ],
            }
            for s in doc.sentences
        ],
    }


def lexgram_payload(corpus: Corpus, result: LexGramResult) -> dict:
    entries = []
    for e in result.entries:
        doc = corpus.texts[e.text_id]
        tokens = doc.sentences[e.sentence].tokens
        entries.append({
            "text_id": e.text_id,
            "title": doc.meta.title,
            "sentence_index": e.sentence,
            "positions": list(e.positions),
            "words": [tokens[p].surface for p in e.positions],
            "sentence": e.sentence_text,
            "translation": e.translation,
        })
    return {
        "text_count": result.text_count,
        "entry_count": result.entry_count,
        "entries": entries,
    }


def lemma_page(page: Page) -> dict:
    return {
        "total": page.total,
        "page": page.page,
        "page_size": page.page_size,
        "records": [
            {"id": h.lemma_id, "surface": h.surface, "language": h.language,
             "pos": h.pos, "interpretations": list(h.interpretations),
             "wordform_count": h.wordform_count,
             "example_count": h.example_count,
             "examples_per_meaning": list(h.examples_per_meaning)}
            for h in page.items
        ],
    }


def lemma_detail(corpus: Corpus, lemma: Lemma) -> dict:
    registry = corpus.registry
    dialect_names = sorted(registry.dialects[d].name for d in lemma.dialects_of_usage
                           if d in registry.dialects)
    return {
        "id": lemma.id,
        "surface": lemma.surface,
        "language": lemma.language,
        "pos": lemma.pos,
        "dialects_of_usage": dialect_names,
        "meanings": [
            {
                "ordinal": m.ordinal,
                "concept": m.concept,
                "interpretations": dict(sorted(m.interpretations.items())),
                "translations": {
                    lang: [corpus.dictionary.lemmas[i].surface
                           for i in ids if i in corpus.dictionary.lemmas]
                    for lang, ids in sorted(m.translation_links.items())
                },
            }
            for m in lemma.meanings
        ],
        "wordforms": [
            {"gramset": wf.gramset.label(), "surface": wf.surface,
             "variety": (registry.dialects[wf.variety].name
                         if wf.variety in registry.dialects else None)}
            for wf in lemma.wordforms
        ],
    }


def frequency_payload(result: FrequencyResult) -> dict:
    return {
        "unit": result.unit,
        "items": [{"item": item, "count": count} for item, count in result.items],
        "ambiguous": result.ambiguous,
        "untagged": result.untagged,
    }


def reverse_payload(language: str | None, lemmas: list[Lemma]) -> dict:
    return {
        "language": language,
        "lemmas": [{"id": l.id, "surface": l.surface} for l in lemmas],
    }


def stats_payload(table: StatsTable) -> dict:
    return {"dimension": table.dimension, "rows": table.rows, "total": table.total}


def queue_payload(corpus: Corpus, items: list[QueueItem]) -> dict:
    out = []
    for item in items:
        markup = corpus.markup.entries[item.ref]
        out.append({
            "ref": {"text": item.ref[0], "sentence": item.ref[1], "position": item.ref[2]},
            "surface": item.surface,
            "homonymy": item.homonymy,
            "sentence": corpus.texts[item.ref[0]].sentence_text(item.ref[1]),
            "candidates": _candidates(corpus, markup),
        })
    return {"items": out, "count": len(out)}


def _candidates(corpus: Corpus, markup: TokenMarkup) -> list[dict]:
    out = []
    for c in markup.candidates:
        lemma = corpus.dictionary.lemmas.get(c.lemma_id)
        gloss = None
        if lemma is not None and c.meaning_ordinal >= 1:
            for m in lemma.meanings:
                if m.ordinal == c.meaning_ordinal and m.interpretations:
                    gloss = "; ".join(m.interpretations[k]
                                      for k in sorted(m.interpretations))
                    break
        out.append({
            "lemma_id": c.lemma_id,
            "lemma": lemma.surface if lemma is not None else None,
            "pos": lemma.pos if lemma is not None else None,
            "meaning": c.meaning_ordinal,
            "gloss": gloss,
            "gramset": c.gramset.label(),
            "source": c.source,
        })
    return out


def markup_payload(corpus: Corpus, ref: MarkupRef, markup: TokenMarkup) -> dict:
    return {
        "ref": {"text": ref[0], "sentence": ref[1], "position": ref[2]},
        "state": markup.state,
        "chosen": markup.chosen,
        "editor": markup.editor,
        "verified_at": markup.verified_at.isoformat() if markup.verified_at else None,
        "homonymy": classify_homonymy(markup),
        "candidates": _candidates(corpus, markup),
    }
