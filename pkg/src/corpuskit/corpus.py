"""The corpus-manager state: registry + dictionary + texts + markup.

One :class:`Corpus` is the unit the bundle store persists and the service
layer exposes.  Reads run against an immutable index snapshot; any
mutation invalidates the snapshot, which is rebuilt lazily on the next
query (or eagerly via :meth:`reindex`).  Mutations take the write lock;
text ids come from an atomic sequence.
"""

from __future__ import annotations

import datetime as dt
import threading
from typing import Iterable

from . import errors, ingest, search, tagging
from .ingest import RawDocument, TextDoc
from .morphology import Dictionary, TemplateSet, default_feature_map, default_ruleset
from .registry import Registry, TextMeta, default_registry
from .tagging import MarkupStore

#: sentence-final tokens that do not end a sentence
DEFAULT_ABBREVIATIONS = frozenset({"mm.", "nt.", "esim.", "t.", "s."})


class Corpus:
    def __init__(self, registry: Registry, templates: TemplateSet | None = None,
                 feature_map=None,
                 abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS):
        self.registry = registry
        self.dictionary = Dictionary(registry, templates)
        self.feature_map = feature_map
        self.texts: dict[int, TextDoc] = {}
        self.markup = MarkupStore()
        self.abbreviations = frozenset(abbreviations)
        self._next_text_id = 1
        self._lock = threading.RLock()
        self._index: search.IndexSnapshot | None = None

    @classmethod
    def with_defaults(cls) -> "Corpus":
        registry = default_registry()
        return cls(registry, templates=default_ruleset(registry),
                   feature_map=default_feature_map())

    # -- mutation --------------------------------------------------------------

    def _invalidate(self) -> None:
        self._index = None

    def ingest_text(self, source: RawDocument | str, meta: TextMeta,
                    translations: list[str] | None = None,
                    translation_mode: str = "strict",
                    accession_date: dt.date | None = None) -> TextDoc:
        with self._lock:
            doc_id = self._next_text_id
            self._next_text_id += 1
            doc = ingest.build_doc(doc_id, source, meta, self.registry,
                                   self.abbreviations, accession_date)
            if translations is not None:
                ingest.align_translation(doc, translations, translation_mode)
            self.texts[doc.id] = doc
            self._invalidate()
            return doc

    def text(self, text_id: int) -> TextDoc:
        try:
            return self.texts[text_id]
        except KeyError:
            raise errors.NotFound(f"text {text_id}") from None

    def tag_text(self, text_id: int) -> tagging.TagSummary:
        with self._lock:
            summary = tagging.tag_text(self.text(text_id), self.dictionary, self.markup)
            self._invalidate()
            return summary

    def tag_all(self) -> tagging.TagSummary:
        with self._lock:
            total = tagging.TagSummary()
            for text_id in sorted(self.texts):
                s = tagging.tag_text(self.texts[text_id], self.dictionary, self.markup)
                total.words += s.words
                total.auto += s.auto
                total.verified += s.verified
                total.untagged += s.untagged
            self._invalidate()
            return total

    def _check_ref(self, ref: tagging.MarkupRef) -> None:
        text_id, sentence, position = ref
        doc = self.text(text_id)
        if not 0 <= sentence < len(doc.sentences):
            raise errors.NotFound(f"sentence {sentence} of text {text_id}")
        tokens = doc.sentences[sentence].tokens
        if not 0 <= position < len(tokens) or tokens[position].kind != ingest.WORD:
            raise errors.NotFound(f"no word token at {text_id}:{sentence}:{position}")

    def resolve(self, ref: tagging.MarkupRef, choice: int, editor: str) -> tagging.TokenMarkup:
        with self._lock:
            self._check_ref(ref)
            markup = tagging.resolve(self.markup, ref, choice, editor)
            self._invalidate()
            return markup

    def attach_manual(self, ref: tagging.MarkupRef, lemma_id: int,
                      meaning_ordinal: int, grammemes: Iterable[str],
                      editor: str) -> tagging.TokenMarkup:
        with self._lock:
            self._check_ref(ref)
            gramset = self.registry.make_gramset(grammemes)
            markup = tagging.attach_manual(self.markup, ref, self.dictionary,
                                           lemma_id, meaning_ordinal, gramset, editor)
            self._invalidate()
            return markup

    # -- reads ------------------------------------------------------------------

    @property
    def index(self) -> search.IndexSnapshot:
        snapshot = self._index
        if snapshot is None:
            with self._lock:
                snapshot = self._index
                if snapshot is None:
                    snapshot = search.build_index(self.texts, self.dictionary, self.markup)
                    self._index = snapshot
        return snapshot

    def reindex(self) -> search.IndexSnapshot:
        with self._lock:
            self._index = search.build_index(self.texts, self.dictionary, self.markup)
            return self._index

    def coverage(self, scope: search.Scope | None = None) -> float:
        docs = search.select_texts(self.texts, self.registry, scope)
        return tagging.markup_coverage(docs, self.markup)

    def queue(self, scope: search.Scope | None = None,
              homonymy: str | None = None) -> list[tagging.QueueItem]:
        docs = search.select_texts(self.texts, self.registry, scope)
        return tagging.pending_queue(docs, self.markup, homonymy)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return (self.registry == other.registry
                and self.dictionary == other.dictionary
                and self.texts == other.texts
                and self.markup == other.markup
                and self.abbreviations == other.abbreviations)


def meta_from_document(registry: Registry, doc: dict) -> TextMeta:
    """Build TextMeta from a sidecar/request document that uses names.

    Keys mirror TextMeta fields; ``dialect``, ``corpus_type`` and ``genre``
    are given by name (the bundle format stores ids, external interfaces
    speak names).
    """
    if not isinstance(doc, dict) or "title" not in doc or "language" not in doc \
            or "corpus_type" not in doc:
        raise errors.InvalidMeta("metadata needs at least title, language, corpus_type")
    corpus_type = registry.corpus_type_by_name(str(doc["corpus_type"]))
    dialect_id = None
    if doc.get("dialect"):
        dialect_id = registry.dialect_by_name(str(doc["language"]), str(doc["dialect"])).id
    genre_id = None
    if doc.get("genre"):
        genre_id = registry.genre_by_name(str(doc["genre"]), corpus_type.id).id
    meta = TextMeta(
        title=str(doc["title"]),
        language=str(doc["language"]),
        corpus_type=corpus_type.id,
        dialect=dialect_id,
        genre=genre_id,
        author=doc.get("author"),
        informant=doc.get("informant"),
        recorder=doc.get("recorder"),
        year_recorded=int(doc["year_recorded"]) if doc.get("year_recorded") is not None else None,
        year_published=int(doc["year_published"]) if doc.get("year_published") is not None else None,
        source=doc.get("source"),
        place_of_recording=doc.get("place_of_recording"),
        license=doc.get("license"),
    )
    return registry.validate_meta(meta)
