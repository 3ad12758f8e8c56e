"""Automatic lexico-grammatical markup and editorial resolution.

Every word token gets a :class:`TokenMarkup` record.  ``tag_text`` fills
candidates from dictionary analysis (one candidate per meaning x gramset
reading); editors then resolve homonymy or attach manual candidates.
States move only forward: untagged -> auto -> verified; verified records
survive re-tagging so expert work is never silently discarded.

The unknown-word predictor ranks (pos, gramset) pairs by the longest
dictionary-wordform suffix shared with the query: for each pair the
longest supporting suffix is found, then suggestions are ordered by
(suffix length desc, support desc, gramset label) and truncated to k.
"""

from __future__ import annotations

import datetime as dt
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from . import errors
from .ingest import TextDoc, WORD, lookup_key
from .morphology import Dictionary
from .registry import Gramset

UNTAGGED = "untagged"
AUTO = "auto"
VERIFIED = "verified"

SOURCE_DICTIONARY = "dictionary"
SOURCE_PREDICTOR = "predictor"
SOURCE_MANUAL = "manual"

UNAMBIGUOUS = "unambiguous"
SEMANTIC = "semantic"
MORPHOLOGICAL = "morphological"
BOTH = "both"
UNKNOWN = "unknown"

MarkupRef = tuple[int, int, int]  # (text id, sentence index, token position)


@dataclass(frozen=True)
class MarkupCandidate:
    lemma_id: int
    meaning_ordinal: int       # 0 = lemma has no recorded meanings
    gramset: Gramset
    source: str = SOURCE_DICTIONARY
    rank: int = 0


@dataclass
class TokenMarkup:
    ref: MarkupRef
    state: str = UNTAGGED
    candidates: list[MarkupCandidate] = field(default_factory=list)
    chosen: int | None = None
    editor: str | None = None
    verified_at: dt.datetime | None = None

    def effective_candidates(self) -> list[MarkupCandidate]:
        """Chosen candidate when verified, otherwise all of them."""
        if self.state == VERIFIED and self.chosen is not None:
            return [self.candidates[self.chosen]]
        return list(self.candidates)


@dataclass(frozen=True)
class PredictorSuggestion:
    pos: str
    gramset: Gramset
    matched_suffix: str
    support: int
    hypothesized_lemma: str | None = None


@dataclass
class TagSummary:
    words: int = 0
    auto: int = 0
    verified: int = 0
    untagged: int = 0


class MarkupStore:
    """Per-token markup records plus the append-only audit log."""

    def __init__(self) -> None:
        self.entries: dict[MarkupRef, TokenMarkup] = {}
        self.audit: list[str] = []

    def get(self, ref: MarkupRef) -> TokenMarkup | None:
        return self.entries.get(ref)

    def _audit_line(self, editor: str, ref: MarkupRef, old: str, new: str,
                    now: dt.datetime) -> None:
        text_id, sent, pos = ref
        self.audit.append(f"{now.isoformat()}\t{editor}\t{text_id}:{sent}:{pos}\t{old}\t{new}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MarkupStore):
            return NotImplemented
        return self.entries == other.entries and self.audit == other.audit


def tag_text(doc: TextDoc, dictionary: Dictionary, store: MarkupStore) -> TagSummary:
    """Assign dictionary candidates to every word token of one text.

    Verified tokens are left untouched; auto/untagged tokens get a fresh
    candidate set, so re-running after dictionary growth only adds.
    """
    summary = TagSummary()
    for sentence in doc.sentences:
        for token in sentence.tokens:
            if token.kind != WORD:
                continue
            summary.words += 1
            ref = (doc.id, sentence.index, token.position)
            existing = store.entries.get(ref)
            if existing is not None and existing.state == VERIFIED:
                summary.verified += 1
                continue
            candidates: list[MarkupCandidate] = []
            seen: set[tuple[int, int, Gramset]] = set()
            for lemma, gramset, _variety in dictionary.analyze(token.surface):
                ordinals = [m.ordinal for m in lemma.meanings] or [0]
                for ordinal in ordinals:
                    key = (lemma.id, ordinal, gramset)
                    if key in seen:
                        continue
                    seen.add(key)
                    candidates.append(MarkupCandidate(
                        lemma_id=lemma.id, meaning_ordinal=ordinal,
                        gramset=gramset, source=SOURCE_DICTIONARY,
                        rank=len(candidates)))
            state = AUTO if candidates else UNTAGGED
            store.entries[ref] = TokenMarkup(ref=ref, state=state, candidates=candidates)
            if candidates:
                summary.auto += 1
            else:
                summary.untagged += 1
    return summary


def classify_homonymy(markup: TokenMarkup) -> str:
    """Derived ambiguity class of the candidate set; never stored."""
    candidates = markup.candidates
    if not candidates:
        return UNKNOWN
    lemma_gramsets = {(c.lemma_id, c.gramset) for c in candidates}
    meanings_per_lemma: dict[int, set[int]] = {}
    for c in candidates:
        meanings_per_lemma.setdefault(c.lemma_id, set()).add(c.meaning_ordinal)
    semantic = any(len(s) > 1 for s in meanings_per_lemma.values())
    morphological = len(lemma_gramsets) > 1
    if semantic and morphological:
        return BOTH
    if semantic:
        return SEMANTIC
    if morphological:
        return MORPHOLOGICAL
    return UNAMBIGUOUS


def _candidate_label(markup: TokenMarkup, index: int | None) -> str:
    if index is None:
        return "-"
    c = markup.candidates[index]
    return f"{index}:{c.lemma_id}.{c.meaning_ordinal}"


def resolve(store: MarkupStore, ref: MarkupRef, choice: int, editor: str,
            now: dt.datetime | None = None) -> TokenMarkup:
    """Editor picks one candidate; idempotent re-resolution overwrites."""
    markup = store.entries.get(ref)
    if markup is None or markup.state == UNTAGGED or not markup.candidates:
        raise errors.TokenUntagged(f"{ref[0]}:{ref[1]}:{ref[2]}")
    if not 0 <= choice < len(markup.candidates):
        raise errors.InvalidChoice(f"choice {choice} of {len(markup.candidates)} candidates")
    now = now or dt.datetime.now()
    old = _candidate_label(markup, markup.chosen)
    markup.state = VERIFIED
    markup.chosen = choice
    markup.editor = editor
    markup.verified_at = now
    store._audit_line(editor, ref, old, _candidate_label(markup, choice), now)
    return markup


def attach_manual(store: MarkupStore, ref: MarkupRef, dictionary: Dictionary,
                  lemma_id: int, meaning_ordinal: int, gramset: Gramset,
                  editor: str, now: dt.datetime | None = None) -> TokenMarkup:
    """Expert tags an unrecognized (or mis-tagged) token by hand."""
    lemma = dictionary.lemma(lemma_id)  # raises UnknownLemma
    if meaning_ordinal == 0:
        if lemma.meanings:
            raise errors.InvalidMeaning(f"lemma {lemma.surface!r} has meanings; pick one")
    else:
        lemma.meaning(meaning_ordinal)  # raises InvalidMeaning
    now = now or dt.datetime.now()
    markup = store.entries.setdefault(ref, TokenMarkup(ref=ref))
    old = _candidate_label(markup, markup.chosen)
    candidate = MarkupCandidate(lemma_id=lemma_id, meaning_ordinal=meaning_ordinal,
                                gramset=gramset, source=SOURCE_MANUAL,
                                rank=len(markup.candidates))
    markup.candidates.append(candidate)
    markup.state = VERIFIED
    markup.chosen = len(markup.candidates) - 1
    markup.editor = editor
    markup.verified_at = now
    store._audit_line(editor, ref, old, _candidate_label(markup, markup.chosen), now)
    return markup


# ---------------------------------------------------------------------------
# Unknown-word prediction
# ---------------------------------------------------------------------------

class SuffixPredictor:
    """Suffix-frequency index over all stored wordforms (lengths 1..cap)."""

    def __init__(self, dictionary: Dictionary, max_suffix: int = 5):
        self.max_suffix = max_suffix
        self.registry = dictionary.registry
        # suffix -> Counter[(pos, gramset)]
        self.counts: dict[str, Counter] = {}
        # (suffix, pos, gramset) -> {(form tail, lemma tail)} observed on
        # template-generated forms; used to hypothesize the dictionary form
        self.transforms: dict[tuple[str, str, Gramset], set[tuple[str, str]]] = {}
        self.total_forms = 0
        for lemma in dictionary.lemmas.values():
            for wf in lemma.wordforms:
                self.total_forms += 1
                key = lookup_key(wf.surface)
                transform = self._transform_for(dictionary, wf)
                for length in range(1, min(self.max_suffix, len(key)) + 1):
                    suffix = key[-length:]
                    self.counts.setdefault(suffix, Counter())[(lemma.pos, wf.gramset)] += 1
                    if transform is not None:
                        self.transforms.setdefault(
                            (suffix, lemma.pos, wf.gramset), set()).add(transform)

    @staticmethod
    def _transform_for(dictionary: Dictionary, wf) -> tuple[str, str] | None:
        if wf.template is None or wf.row is None:
            return None
        template = dictionary.templates.get(wf.template)
        if template is None or wf.row >= len(template.rows):
            return None
        row = template.rows[wf.row]
        stem_rule = template.stem_rule(row.stem)
        # form = lemma[:-len(strip)] + append + suffix, so replacing the
        # observed tail with the stripped suffix recovers the lemma
        return (stem_rule.append + row.suffix, stem_rule.strip)

    def suggest(self, surface: str, k: int) -> list[PredictorSuggestion]:
        if k < 1:
            raise errors.InvalidQuery("k must be >= 1")
        if self.total_forms == 0:
            raise errors.EmptyDictionary("no wordforms to learn suffixes from")
        key = lookup_key(surface)
        ranked: list[tuple[int, int, str, tuple, PredictorSuggestion]] = []
        seen: set[tuple[str, Gramset]] = set()
        for length in range(min(self.max_suffix, len(key)), 0, -1):
            suffix = key[-length:]
            bucket = self.counts.get(suffix)
            if not bucket:
                continue
            for (pos, gramset), support in bucket.items():
                if (pos, gramset) in seen:
                    continue  # already covered by a longer suffix
                seen.add((pos, gramset))
                ranked.append((
                    -length, -support, pos, self.registry.gramset_sort_key(gramset),
                    PredictorSuggestion(
                        pos=pos, gramset=gramset, matched_suffix=suffix,
                        support=support,
                        hypothesized_lemma=self._hypothesize(surface, suffix, pos, gramset)),
                ))
        ranked.sort(key=lambda item: item[:4])
        return [item[4] for item in ranked[:k]]

    def _hypothesize(self, surface: str, suffix: str, pos: str,
                     gramset: Gramset) -> str | None:
        transforms = self.transforms.get((suffix, pos, gramset))
        if not transforms or len(transforms) > 1:
            return None
        (tail, replacement), = transforms
        key = lookup_key(surface)
        if tail and not key.endswith(tail):
            return None
        stem = surface[:len(surface) - len(tail)] if tail else surface
        return stem + replacement


def predict_unknown(surface: str, dictionary: Dictionary, k: int,
                    max_suffix: int = 5) -> list[PredictorSuggestion]:
    predictor = getattr(dictionary, "_predictor_cache", None)
    if predictor is None or predictor[0] != dictionary.version or predictor[1].max_suffix != max_suffix:
        predictor = (dictionary.version, SuffixPredictor(dictionary, max_suffix))
        dictionary._predictor_cache = predictor
    return predictor[1].suggest(surface, k)


# ---------------------------------------------------------------------------
# Coverage and the editor queue
# ---------------------------------------------------------------------------

def markup_coverage(docs: Iterable[TextDoc], store: MarkupStore) -> float:
    """Percent of word tokens with auto or verified markup, to 0.1%."""
    tagged = 0
    total = 0
    for doc in docs:
        for sentence in doc.sentences:
            for token in sentence.tokens:
                if token.kind != WORD:
                    continue
                total += 1
                markup = store.entries.get((doc.id, sentence.index, token.position))
                if markup is not None and markup.state in (AUTO, VERIFIED):
                    tagged += 1
    if total == 0:
        raise errors.EmptyScope("no word tokens in scope")
    return float(round(Fraction(100 * tagged, total), 1))


@dataclass(frozen=True)
class QueueItem:
    ref: MarkupRef
    surface: str
    homonymy: str
    candidate_count: int


def pending_queue(docs: Iterable[TextDoc], store: MarkupStore,
                  homonymy: str | None = None) -> list[QueueItem]:
    """Tokens still needing an editor: ambiguous auto ones and unknowns."""
    items: list[QueueItem] = []
    for doc in sorted(docs, key=lambda d: d.id):
        for sentence in doc.sentences:
            for token in sentence.tokens:
                if token.kind != WORD:
                    continue
                ref = (doc.id, sentence.index, token.position)
                markup = store.entries.get(ref)
                if markup is None:
                    continue
                pending = (markup.state == UNTAGGED
                           or (markup.state == AUTO and len(markup.candidates) > 1))
                if not pending:
                    continue
                cls = classify_homonymy(markup)
                if homonymy is not None and cls != homonymy:
                    continue
                items.append(QueueItem(ref=ref, surface=token.surface,
                                       homonymy=cls, candidate_count=len(markup.candidates)))
    return items


def consistency_report(store: MarkupStore, dictionary: Dictionary) -> list[str]:
    """Verified markups whose chosen lemma no longer exists (never auto-cleared)."""
    stale = []
    for ref, markup in sorted(store.entries.items()):
        if markup.state != VERIFIED or markup.chosen is None:
            continue
        candidate = markup.candidates[markup.chosen]
        if candidate.lemma_id not in dictionary.lemmas:
            stale.append(f"{ref[0]}:{ref[1]}:{ref[2]} -> missing lemma {candidate.lemma_id}")
    return stale
