"""HTTP API (/v1) exposing search, dictionary, tagging and export.

Read endpoints are safe under concurrency (they see the current index
snapshot); mutating endpoints take the corpus write lock and, when the
app was opened over a bundle directory, persist the bundle before
returning.  Every domain error surfaces as a JSON body
``{"code": ..., "message": ..., "detail": ...}`` with a 4xx status.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import errors, views
from .corpus import Corpus, meta_from_document
from .morphology import export_unimorph
from .search import (LemmaQuery, LexGramQuery, Scope, TextQuery, WordConstraint,
                     frequency, lexgram_search, reverse_dictionary, search_lemmas,
                     search_texts, stats)

_STATUS = {"NotFound": 404, "UnknownLemma": 404}


class IngestRequest(BaseModel):
    text: str
    meta: dict
    translations: list[str] | None = None
    translation_mode: str = "strict"
    tag: bool = False


class ResolveRequest(BaseModel):
    choice: int
    editor: str


class ManualRequest(BaseModel):
    lemma_id: int
    meaning: int = 1
    grammemes: list[str] = []
    editor: str


def _grammemes(corpus: Corpus, raw: str | None) -> tuple:
    if not raw:
        return ()
    return tuple(corpus.registry.grammeme(ref.strip())
                 for ref in raw.split(",") if ref.strip())


def create_app(corpus: Corpus, bundle_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="corpuskit", version="1")

    def persist() -> None:
        if bundle_dir is not None:
            from .bundle import save_bundle
            save_bundle(corpus, bundle_dir)

    @app.exception_handler(errors.CorpusError)
    async def _domain_error(_request: Request, exc: errors.CorpusError):
        return JSONResponse(
            status_code=_STATUS.get(exc.code, 400),
            content={"code": exc.code, "message": str(exc), "detail": None},
        )

    @app.get("/v1/registry")
    def registry_document():
        # read-only taxonomy view; feeds the editor UI's pickers
        return corpus.registry.to_document()

    @app.get("/v1/texts")
    def texts_search(language: str | None = None, dialect: str | None = None,
                     corpus_type: str | None = None, genre: str | None = None,
                     informant: str | None = None, recorder: str | None = None,
                     author: str | None = None, title: str | None = None,
                     word: str | None = None, fragment: str | None = None,
                     year_from: int | None = None, year_to: int | None = None,
                     page: int = 1, page_size: int = 10):
        q = TextQuery(language=language, dialect=dialect, corpus_type=corpus_type,
                      genre=genre, informant=informant, recorder=recorder,
                      author=author, title=title, word=word, fragment=fragment,
                      year_from=year_from, year_to=year_to,
                      page=page, page_size=page_size)
        return views.text_page(search_texts(corpus.texts, corpus.registry, corpus.index, q))

    @app.get("/v1/texts/{text_id}")
    def text_detail(text_id: int):
        return views.text_detail(corpus, corpus.text(text_id))

    @app.post("/v1/texts", status_code=201)
    def texts_create(req: IngestRequest):
        meta = meta_from_document(corpus.registry, req.meta)
        doc = corpus.ingest_text(req.text, meta, translations=req.translations,
                                 translation_mode=req.translation_mode)
        summary = None
        if req.tag:
            summary = corpus.tag_text(doc.id)
        persist()
        payload = {"id": doc.id, "sentences": len(doc.sentences)}
        if summary is not None:
            payload["tagged"] = {"words": summary.words, "auto": summary.auto,
                                 "verified": summary.verified,
                                 "untagged": summary.untagged}
        return payload

    @app.get("/v1/lemmas")
    def lemmas_search(surface: str | None = None, pos: str | None = None,
                      gram: str | None = None, language: str | None = None,
                      dialect: str | None = None, interpretation: str | None = None,
                      concept: str | None = None, with_examples: bool = False,
                      page: int = 1, page_size: int = 10):
        q = LemmaQuery(surface=surface, pos=pos, grammemes=_grammemes(corpus, gram),
                       language=language, dialect=dialect,
                       interpretation=interpretation, concept=concept,
                       with_examples=with_examples, page=page, page_size=page_size)
        return views.lemma_page(search_lemmas(corpus.dictionary, corpus.registry,
                                              corpus.index, q))

    @app.get("/v1/lemmas/{lemma_id}")
    def lemma_detail(lemma_id: int):
        return views.lemma_detail(corpus, corpus.dictionary.lemma(lemma_id))

    @app.get("/v1/search/lexgram")
    def lexgram(w1: str | None = None, w1_pos: str | None = None,
                w1_gram: str | None = None, w2: str | None = None,
                w2_pos: str | None = None, w2_gram: str | None = None,
                language: str | None = None, corpus_type: str | None = None,
                distance_from: int = 1, distance_to: int = 1,
                verified_only: bool = False):
        word1 = WordConstraint(word=w1, pos=w1_pos,
                               grammemes=_grammemes(corpus, w1_gram))
        word2 = None
        if w2 is not None or w2_pos is not None or w2_gram:
            word2 = WordConstraint(word=w2, pos=w2_pos,
                                   grammemes=_grammemes(corpus, w2_gram))
        q = LexGramQuery(word1=word1, word2=word2, language=language,
                         corpus_type=corpus_type, distance_from=distance_from,
                         distance_to=distance_to, verified_only=verified_only)
        return views.lexgram_payload(
            corpus, lexgram_search(corpus.texts, corpus.registry, corpus.index, q))

    @app.get("/v1/dict/frequency")
    def dict_frequency(unit: str = "wordform", language: str | None = None,
                       corpus_type: str | None = None,
                       limit: int = Query(default=0, ge=0)):
        result = frequency(corpus.texts, corpus.registry, corpus.dictionary,
                           corpus.markup, Scope(language=language, corpus_type=corpus_type),
                           unit)
        if limit:
            result.items = result.items[:limit]
        return views.frequency_payload(result)

    @app.get("/v1/dict/reverse")
    def dict_reverse(lang: str | None = None):
        return views.reverse_payload(lang, reverse_dictionary(corpus.dictionary, lang))

    @app.get("/v1/stats/{dimension}")
    def stats_table(dimension: str):
        return views.stats_payload(stats(corpus.texts, corpus.registry, dimension))

    @app.get("/v1/queue")
    def queue(homonymy: str | None = Query(default=None, alias="class"),
              language: str | None = None, corpus_type: str | None = None):
        items = corpus.queue(Scope(language=language, corpus_type=corpus_type), homonymy)
        return views.queue_payload(corpus, items)

    @app.post("/v1/markup/{text_id}/{sentence}/{position}/resolve")
    def markup_resolve(text_id: int, sentence: int, position: int, req: ResolveRequest):
        ref = (text_id, sentence, position)
        markup = corpus.resolve(ref, req.choice, req.editor)
        persist()
        return views.markup_payload(corpus, ref, markup)

    @app.post("/v1/markup/{text_id}/{sentence}/{position}/manual")
    def markup_manual(text_id: int, sentence: int, position: int, req: ManualRequest):
        ref = (text_id, sentence, position)
        markup = corpus.attach_manual(ref, req.lemma_id, req.meaning,
                                      req.grammemes, req.editor)
        persist()
        return views.markup_payload(corpus, ref, markup)

    @app.get("/v1/export/unimorph")
    def unimorph(lang: str):
        if corpus.feature_map is None:
            raise errors.UnmappedGrammeme("no feature map loaded")
        body = export_unimorph(corpus.dictionary, lang, corpus.feature_map)
        return Response(content=body, media_type="text/tab-separated-values; charset=utf-8")

    @app.post("/v1/reindex")
    def reindex():
        snapshot = corpus.reindex()
        return {"postings": len(snapshot.postings),
                "word_tokens": snapshot.word_token_total}

    return app
