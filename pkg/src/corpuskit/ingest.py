"""Text ingestion: encoding normalization, segmentation, tokenization.

The pipeline is deterministic and rule-based.  Sentence boundaries fall
after ``. ! ? …`` runs followed by whitespace unless the preceding token
(including its terminator, e.g. ``"A."``) is a known abbreviation.  Words
are maximal letter runs, optionally joined by an internal apostrophe or
hyphen; digit runs are numbers; any other non-whitespace run is a single
punctuation token.  Surfaces always preserve case and diacritics — the
lowercased/apostrophe-normalized form is a lookup key only.
"""

from __future__ import annotations

import datetime as dt
import unicodedata
from dataclasses import dataclass, field

from . import errors
from .registry import Registry, TextMeta

WORD = "word"
PUNCTUATION = "punctuation"
NUMBER = "number"

TERMINATORS = frozenset(".!?…")
APOSTROPHES = frozenset("'’")
_CONNECTORS = APOSTROPHES | {"-"}

#: declared_encoding label -> python codec
ENCODINGS = {
    "utf-8": "utf-8-sig",       # tolerate an optional BOM
    "utf-8-bom": "utf-8-sig",
    "windows-1251": "cp1251",
    "cp1251": "cp1251",
    "iso-8859-1": "latin-1",
    "latin-1": "latin-1",
}


@dataclass(frozen=True)
class RawDocument:
    data: bytes
    declared_encoding: str = "utf-8"


@dataclass
class Token:
    position: int              # ordinal within the sentence, all kinds
    span: tuple[int, int]      # offsets into the normalized document text
    surface: str
    kind: str                  # word | punctuation | number
    word_index: int | None = None  # dense ordinal over word tokens only


@dataclass
class Sentence:
    index: int
    span: tuple[int, int]
    tokens: list[Token] = field(default_factory=list)
    translation: str | None = None


@dataclass
class TextDoc:
    id: int
    meta: TextMeta
    normalized_text: str
    sentences: list[Sentence] = field(default_factory=list)
    accession_date: dt.date = field(default_factory=dt.date.today)
    extra: dict = field(default_factory=dict)  # unknown bundle fields, preserved

    def sentence_text(self, index: int) -> str:
        s = self.sentences[index]
        return self.normalized_text[s.span[0]:s.span[1]]

    def word_tokens(self, index: int) -> list[Token]:
        return [t for t in self.sentences[index].tokens if t.kind == WORD]


def lookup_key(surface: str) -> str:
    """Storage/lookup key: NFC, lowercased, apostrophes folded to U+2019."""
    s = unicodedata.normalize("NFC", surface).lower()
    return s.replace("'", "’")


def normalize_text(raw: RawDocument) -> str:
    """Decode, strip BOM, normalize line endings to \\n and apply NFC."""
    label = raw.declared_encoding.strip().lower()
    codec = ENCODINGS.get(label)
    if codec is None:
        raise errors.UnsupportedEncoding(raw.declared_encoding)
    try:
        text = raw.data.decode(codec)
    except UnicodeDecodeError as exc:
        raise errors.DecodeError(str(exc)) from None
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    return unicodedata.normalize("NFC", text)


def segment_sentences(text: str, abbreviations: frozenset[str] | set[str] = frozenset()
                      ) -> list[tuple[int, int]]:
    """Split into sentence spans; spans jointly cover all non-whitespace."""
    spans: list[tuple[int, int]] = []
    n = len(text)
    i = 0
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        start = i
        end: int | None = None
        j = i
        while j < n:
            if text[j] in TERMINATORS:
                k = j
                while k + 1 < n and text[k + 1] in TERMINATORS:
                    k += 1
                if k + 1 >= n or text[k + 1].isspace():
                    w = j
                    while w > start and not text[w - 1].isspace():
                        w -= 1
                    if text[w:k + 1] not in abbreviations:
                        end = k + 1
                        break
                j = k + 1
            else:
                j += 1
        if end is None:
            # trailing material without a terminator; trim right whitespace
            end = n
            while end > start and text[end - 1].isspace():
                end -= 1
            spans.append((start, end))
            break
        spans.append((start, end))
        i = end
    return spans


def _is_letter(ch: str) -> bool:
    return unicodedata.category(ch)[0] == "L"


def _is_mark(ch: str) -> bool:
    return unicodedata.category(ch) == "Mn"


def _is_digit(ch: str) -> bool:
    return unicodedata.category(ch) == "Nd"


def _consume_word(text: str, i: int) -> int:
    n = len(text)
    while i < n and (_is_letter(text[i]) or _is_mark(text[i])):
        i += 1
    # join across a single apostrophe/hyphen flanked by letters
    while i < n and text[i] in _CONNECTORS and i + 1 < n and _is_letter(text[i + 1]):
        i += 1
        while i < n and (_is_letter(text[i]) or _is_mark(text[i])):
            i += 1
    return i


def tokenize(text: str, base: int = 0) -> list[Token]:
    """Tokenize one sentence; spans are offset by ``base``."""
    tokens: list[Token] = []
    n = len(text)
    i = 0
    word_index = 0
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if _is_letter(ch):
            i = _consume_word(text, i)
            kind = WORD
        elif _is_digit(ch):
            while i < n and _is_digit(text[i]):
                i += 1
            kind = NUMBER
        else:
            while (i < n and not text[i].isspace()
                   and not _is_letter(text[i]) and not _is_digit(text[i])):
                i += 1
            kind = PUNCTUATION
        token = Token(position=len(tokens), span=(base + start, base + i),
                      surface=text[start:i], kind=kind)
        if kind == WORD:
            token.word_index = word_index
            word_index += 1
        tokens.append(token)
    return tokens


def segment(doc_text: str, abbreviations: frozenset[str] | set[str] = frozenset()
            ) -> list[Sentence]:
    sentences = []
    for idx, (start, end) in enumerate(segment_sentences(doc_text, abbreviations)):
        tokens = tokenize(doc_text[start:end], base=start)
        sentences.append(Sentence(index=idx, span=(start, end), tokens=tokens))
    return sentences


def align_translation(doc: TextDoc, translations: list[str], mode: str = "strict") -> TextDoc:
    """Attach sentence-wise translations.

    ``strict`` requires equal counts.  ``partial`` tolerates missing
    translations (trailing sentences stay untranslated); surplus
    translations are rejected in both modes because they have no target.
    """
    if mode not in ("strict", "partial"):
        raise ValueError(f"mode must be strict or partial, got {mode!r}")
    n_sent, n_tr = len(doc.sentences), len(translations)
    if n_tr > n_sent or (mode == "strict" and n_tr != n_sent):
        raise errors.CountMismatch(f"{n_sent} sentences vs {n_tr} translations")
    for sentence, translation in zip(doc.sentences, translations):
        sentence.translation = translation
    return doc


def build_doc(doc_id: int, source: RawDocument | str, meta: TextMeta,
              registry: Registry,
              abbreviations: frozenset[str] | set[str] = frozenset(),
              accession_date: dt.date | None = None) -> TextDoc:
    """Full pipeline: normalize, segment, tokenize, attach metadata."""
    registry.validate_meta(meta)
    text = normalize_text(source) if isinstance(source, RawDocument) else \
        unicodedata.normalize("NFC", source.replace("\r\n", "\n").replace("\r", "\n"))
    return TextDoc(
        id=doc_id,
        meta=meta,
        normalized_text=text,
        sentences=segment(text, abbreviations),
        accession_date=accession_date or dt.date.today(),
    )
