"""Language taxonomy and grammatical feature registry.

Holds the shared domain vocabulary: languages, dialects, corpus types,
genres, concept categories, POS tags and grammemes.  Grammeme bundles
(gramsets) are canonicalized here so that any permutation of the same
grammemes compares equal.

The registry is read-mostly.  Mutations are not internally synchronized;
callers serialize writers (the service layer holds a single write lock).
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field, replace
from typing import Iterable

import yaml

from . import errors

#: POS tags shipped by default; extensible via the registry document.
DEFAULT_POS_TAGS = [
    "Noun", "Verb", "Adjective", "Pronoun", "Numeral",
    "Adverb", "Adposition", "Conjunction", "Particle", "Interjection",
]


@dataclass(frozen=True)
class LanguageTag:
    """Top-level language subcorpus.  ``code`` doubles as the identifier."""
    code: str
    name: str


@dataclass(frozen=True)
class Dialect:
    id: int
    language: str  # LanguageTag.code
    name: str
    standardized: bool = False


@dataclass(frozen=True)
class CorpusType:
    id: int
    name: str


@dataclass(frozen=True)
class Genre:
    id: int
    corpus_type: int  # CorpusType.id
    name: str


@dataclass(frozen=True)
class ConceptCategory:
    id: str  # short key, e.g. "B373"
    label: str


@dataclass(frozen=True)
class Grammeme:
    name: str
    category: str
    # empty set = applicable to any POS
    applicable_pos: frozenset[str] = frozenset()

    @property
    def key(self) -> str:
        return f"{self.category}:{self.name}"


@dataclass(frozen=True)
class Gramset:
    """Canonical ordered bundle of grammemes, at most one per category.

    Instances are only built through :meth:`Registry.make_gramset`, which
    sorts grammemes into the registry's category order; equality and
    hashing are therefore permutation-invariant.
    """

    grammemes: tuple[Grammeme, ...] = ()

    def __len__(self) -> int:
        return len(self.grammemes)

    def __iter__(self):
        return iter(self.grammemes)

    def __contains__(self, grammeme: Grammeme) -> bool:
        return grammeme in self.grammemes

    @property
    def categories(self) -> frozenset[str]:
        return frozenset(g.category for g in self.grammemes)

    def issuperset(self, other: Iterable[Grammeme]) -> bool:
        mine = set(self.grammemes)
        return all(g in mine for g in other)

    def label(self) -> str:
        return ", ".join(g.name for g in self.grammemes)

    def keys(self) -> tuple[str, ...]:
        return tuple(g.key for g in self.grammemes)


@dataclass(frozen=True)
class Finding:
    """One registry-consistency problem: kind + identifying subject."""
    kind: str
    subject: str


@dataclass
class TextMeta:
    """Document-level metadata; references registry entries by code/id."""

    title: str
    language: str            # LanguageTag.code
    corpus_type: int         # CorpusType.id
    dialect: int | None = None
    genre: int | None = None
    author: str | None = None
    informant: str | None = None
    recorder: str | None = None
    year_recorded: int | None = None
    year_published: int | None = None
    source: str | None = None
    place_of_recording: str | None = None
    license: str | None = None


class Registry:
    """Mutable store for the taxonomy, with uniqueness enforcement."""

    def __init__(self) -> None:
        self.languages: dict[str, LanguageTag] = {}
        self.dialects: dict[int, Dialect] = {}
        self.corpus_types: dict[int, CorpusType] = {}
        self.genres: dict[int, Genre] = {}
        self.concepts: dict[str, ConceptCategory] = {}
        self.grammemes: dict[tuple[str, str], Grammeme] = {}  # (category, name)
        self.pos_tags: list[str] = []
        self.category_order: list[str] = []
        self._next_dialect_id = 1
        self._next_corpus_type_id = 1
        self._next_genre_id = 1

    # -- languages ---------------------------------------------------------

    def add_language(self, code: str, name: str) -> LanguageTag:
        if not code or code != code.lower() or not code.isascii() or not code.isalpha():
            raise errors.InvalidMeta(f"language code must be non-empty lowercase ASCII: {code!r}")
        if code in self.languages:
            raise errors.DuplicateLanguage(code)
        tag = LanguageTag(code=code, name=name)
        self.languages[code] = tag
        return tag

    def language(self, code: str) -> LanguageTag:
        try:
            return self.languages[code]
        except KeyError:
            raise errors.UnknownLanguage(code) from None

    def delete_language(self, code: str) -> None:
        if code not in self.languages:
            raise errors.UnknownLanguage(code)
        del self.languages[code]

    # -- dialects ------------------------------------------------------------

    def register_dialect(self, language: str, name: str, standardized: bool = False) -> Dialect:
        if language not in self.languages:
            raise errors.UnknownLanguage(language)
        if not name:
            raise errors.InvalidMeta("dialect name must be non-empty")
        if any(d.language == language and d.name == name for d in self.dialects.values()):
            raise errors.DuplicateDialect(f"{language}/{name}")
        dialect = Dialect(id=self._next_dialect_id, language=language,
                          name=name, standardized=standardized)
        self._next_dialect_id += 1
        self.dialects[dialect.id] = dialect
        return dialect

    def dialect(self, dialect_id: int) -> Dialect:
        try:
            return self.dialects[dialect_id]
        except KeyError:
            raise errors.UnknownDialect(str(dialect_id)) from None

    def dialect_by_name(self, language: str, name: str) -> Dialect:
        for d in self.dialects.values():
            if d.language == language and d.name == name:
                return d
        raise errors.UnknownDialect(f"{language}/{name}")

    def dialects_of(self, language: str, standardized: bool | None = None) -> list[Dialect]:
        out = [d for d in self.dialects.values() if d.language == language]
        if standardized is not None:
            out = [d for d in out if d.standardized == standardized]
        return sorted(out, key=lambda d: d.id)

    def delete_dialect(self, dialect_id: int) -> None:
        if dialect_id not in self.dialects:
            raise errors.UnknownDialect(str(dialect_id))
        del self.dialects[dialect_id]

    # -- corpus types and genres ---------------------------------------------

    def add_corpus_type(self, name: str) -> CorpusType:
        if any(ct.name == name for ct in self.corpus_types.values()):
            raise errors.DuplicateCorpusType(name)
        ct = CorpusType(id=self._next_corpus_type_id, name=name)
        self._next_corpus_type_id += 1
        self.corpus_types[ct.id] = ct
        return ct

    def corpus_type(self, ct_id: int) -> CorpusType:
        try:
            return self.corpus_types[ct_id]
        except KeyError:
            raise errors.UnknownCorpusType(str(ct_id)) from None

    def corpus_type_by_name(self, name: str) -> CorpusType:
        for ct in self.corpus_types.values():
            if ct.name == name:
                return ct
        raise errors.UnknownCorpusType(name)

    def delete_corpus_type(self, ct_id: int) -> None:
        if ct_id not in self.corpus_types:
            raise errors.UnknownCorpusType(str(ct_id))
        del self.corpus_types[ct_id]

    def add_genre(self, corpus_type: int | str, name: str) -> Genre:
        ct = (self.corpus_type_by_name(corpus_type) if isinstance(corpus_type, str)
              else self.corpus_type(corpus_type))
        if any(g.corpus_type == ct.id and g.name == name for g in self.genres.values()):
            raise errors.DuplicateGenre(f"{ct.name}/{name}")
        genre = Genre(id=self._next_genre_id, corpus_type=ct.id, name=name)
        self._next_genre_id += 1
        self.genres[genre.id] = genre
        return genre

    def genre(self, genre_id: int) -> Genre:
        try:
            return self.genres[genre_id]
        except KeyError:
            raise errors.UnknownGenre(str(genre_id)) from None

    def genre_by_name(self, name: str, corpus_type: int | None = None) -> Genre:
        for g in self.genres.values():
            if g.name == name and (corpus_type is None or g.corpus_type == corpus_type):
                return g
        raise errors.UnknownGenre(name)

    def delete_genre(self, genre_id: int) -> None:
        if genre_id not in self.genres:
            raise errors.UnknownGenre(str(genre_id))
        del self.genres[genre_id]

    # -- concepts, POS, grammemes ---------------------------------------------

    def add_concept(self, concept_id: str, label: str) -> ConceptCategory:
        concept = ConceptCategory(id=concept_id, label=label)
        self.concepts[concept_id] = concept
        return concept

    def concept(self, concept_id: str) -> ConceptCategory:
        try:
            return self.concepts[concept_id]
        except KeyError:
            raise errors.UnknownConcept(concept_id) from None

    def add_pos(self, tag: str) -> None:
        if tag not in self.pos_tags:
            self.pos_tags.append(tag)

    def check_pos(self, tag: str) -> str:
        if tag not in self.pos_tags:
            raise errors.UnknownPos(tag)
        return tag

    def add_grammeme(self, name: str, category: str,
                     applicable_pos: Iterable[str] = ()) -> Grammeme:
        if not category:
            raise errors.InvalidMeta("grammeme category must be non-empty")
        if (category, name) in self.grammemes:
            raise errors.DuplicateGrammeme(f"{category}:{name}")
        g = Grammeme(name=name, category=category,
                     applicable_pos=frozenset(applicable_pos))
        self.grammemes[(category, name)] = g
        if category not in self.category_order:
            self.category_order.append(category)
        return g

    def grammeme(self, ref: str | Grammeme) -> Grammeme:
        """Resolve ``"category:Name"``, or a bare ``"Name"`` when unambiguous."""
        if isinstance(ref, Grammeme):
            if (ref.category, ref.name) not in self.grammemes:
                raise errors.UnknownGrammeme(ref.key)
            return ref
        if ":" in ref:
            category, name = ref.split(":", 1)
            try:
                return self.grammemes[(category, name)]
            except KeyError:
                raise errors.UnknownGrammeme(ref) from None
        hits = [g for g in self.grammemes.values() if g.name == ref]
        if not hits:
            raise errors.UnknownGrammeme(ref)
        if len(hits) > 1:
            raise errors.UnknownGrammeme(f"{ref} is ambiguous; qualify with category")
        return hits[0]

    def category_rank(self, category: str) -> tuple[int, str]:
        try:
            return (self.category_order.index(category), category)
        except ValueError:
            return (len(self.category_order), category)

    def make_gramset(self, grammemes: Iterable[str | Grammeme]) -> Gramset:
        """Canonicalize a grammeme bundle; order-insensitive."""
        resolved = [self.grammeme(ref) for ref in grammemes]
        seen_categories: dict[str, Grammeme] = {}
        for g in resolved:
            prior = seen_categories.get(g.category)
            if prior is not None and prior != g:
                raise errors.DuplicateCategory(
                    f"{prior.name} and {g.name} are both {g.category}")
            seen_categories[g.category] = g
        ordered = sorted(seen_categories.values(),
                         key=lambda g: self.category_rank(g.category))
        return Gramset(grammemes=tuple(ordered))

    def gramset_sort_key(self, gramset: Gramset) -> tuple:
        return tuple((self.category_rank(g.category), g.name) for g in gramset)

    # -- meta validation ---------------------------------------------------------

    def validate_meta(self, meta: TextMeta) -> TextMeta:
        if not meta.title:
            raise errors.InvalidMeta("title must be non-empty")
        self.language(meta.language)
        self.corpus_type(meta.corpus_type)
        if meta.dialect is not None:
            dialect = self.dialect(meta.dialect)
            if dialect.language != meta.language:
                raise errors.InvalidMeta(
                    f"dialect {dialect.name!r} belongs to {dialect.language}, not {meta.language}")
        if meta.genre is not None:
            genre = self.genre(meta.genre)
            if genre.corpus_type != meta.corpus_type:
                raise errors.InvalidMeta(
                    f"genre {genre.name!r} does not belong to corpus type {meta.corpus_type}")
        return meta

    # -- consistency report --------------------------------------------------------

    def validate(self) -> list[Finding]:
        """Full-registry consistency scan; empty list iff consistent."""
        findings: list[Finding] = []
        seen_dialects: set[tuple[str, str]] = set()
        for d in sorted(self.dialects.values(), key=lambda d: d.id):
            if d.language not in self.languages:
                findings.append(Finding("dangling-dialect-language", f"{d.id}:{d.name}"))
            key = (d.language, d.name)
            if key in seen_dialects:
                findings.append(Finding("duplicate-dialect", f"{d.language}/{d.name}"))
            seen_dialects.add(key)
        seen_genres: set[tuple[int, str]] = set()
        for g in sorted(self.genres.values(), key=lambda g: g.id):
            if g.corpus_type not in self.corpus_types:
                findings.append(Finding("dangling-genre-corpus-type", f"{g.id}:{g.name}"))
            key2 = (g.corpus_type, g.name)
            if key2 in seen_genres:
                findings.append(Finding("duplicate-genre", f"{g.corpus_type}/{g.name}"))
            seen_genres.add(key2)
        seen_ct: set[str] = set()
        for ct in sorted(self.corpus_types.values(), key=lambda ct: ct.id):
            if ct.name in seen_ct:
                findings.append(Finding("duplicate-corpus-type", ct.name))
            seen_ct.add(ct.name)
        for gram in self.grammemes.values():
            for pos in sorted(gram.applicable_pos):
                if pos not in self.pos_tags:
                    findings.append(Finding("unknown-grammeme-pos", f"{gram.key}:{pos}"))
        return findings

    # -- (de)serialization ------------------------------------------------------

    def to_document(self) -> dict:
        return {
            "category_order": list(self.category_order),
            "pos_tags": list(self.pos_tags),
            "languages": [{"code": t.code, "name": t.name}
                          for t in sorted(self.languages.values(), key=lambda t: t.code)],
            "dialects": [{"id": d.id, "language": d.language, "name": d.name,
                          "standardized": d.standardized}
                         for d in sorted(self.dialects.values(), key=lambda d: d.id)],
            "corpus_types": [{"id": ct.id, "name": ct.name}
                             for ct in sorted(self.corpus_types.values(), key=lambda ct: ct.id)],
            "genres": [{"id": g.id, "corpus_type": g.corpus_type, "name": g.name}
                       for g in sorted(self.genres.values(), key=lambda g: g.id)],
            "concepts": [{"id": c.id, "label": c.label}
                         for c in sorted(self.concepts.values(), key=lambda c: c.id)],
            "grammemes": [{"name": g.name, "category": g.category,
                           "pos": sorted(g.applicable_pos)}
                          for g in self.grammemes.values()],
        }

    @classmethod
    def from_document(cls, doc: dict) -> "Registry":
        reg = cls()
        reg.category_order = list(doc.get("category_order", []))
        for tag in doc.get("pos_tags", DEFAULT_POS_TAGS):
            reg.add_pos(tag)
        for lang in doc.get("languages", []):
            reg.add_language(lang["code"], lang["name"])
        for item in doc.get("dialects", []):
            d = reg.register_dialect(item["language"], item["name"],
                                     bool(item.get("standardized", False)))
            if "id" in item and item["id"] != d.id:
                # bundle documents carry explicit ids; preserve them
                del reg.dialects[d.id]
                d = replace(d, id=int(item["id"]))
                reg.dialects[d.id] = d
                reg._next_dialect_id = max(reg._next_dialect_id, d.id + 1)
        for item in doc.get("corpus_types", []):
            ct = reg.add_corpus_type(item["name"]) if isinstance(item, dict) else reg.add_corpus_type(item)
            if isinstance(item, dict) and "id" in item and item["id"] != ct.id:
                del reg.corpus_types[ct.id]
                ct = replace(ct, id=int(item["id"]))
                reg.corpus_types[ct.id] = ct
                reg._next_corpus_type_id = max(reg._next_corpus_type_id, ct.id + 1)
        for item in doc.get("genres", []):
            ct_ref = item["corpus_type"]
            g = reg.add_genre(ct_ref, item["name"])
            if "id" in item and item["id"] != g.id:
                del reg.genres[g.id]
                g = replace(g, id=int(item["id"]))
                reg.genres[g.id] = g
                reg._next_genre_id = max(reg._next_genre_id, g.id + 1)
        for item in doc.get("concepts", []):
            reg.add_concept(item["id"], item["label"])
        for item in doc.get("grammemes", []):
            reg.add_grammeme(item["name"], item["category"], item.get("pos", ()))
        return reg

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Registry):
            return NotImplemented
        return self.to_document() == other.to_document()


def load_registry(source: str | dict) -> Registry:
    """Load a registry from a YAML/JSON document string or a parsed dict."""
    doc = yaml.safe_load(source) if isinstance(source, str) else source
    if not isinstance(doc, dict):
        raise errors.ParseError("registry document must be a mapping")
    try:
        return Registry.from_document(doc)
    except KeyError as exc:
        raise errors.ParseError(f"registry document missing field {exc}") from None


def default_registry() -> Registry:
    """The shipped taxonomy: languages, dialects, grammeme inventory."""
    text = importlib.resources.files("corpuskit.data").joinpath("registry.yaml").read_text("utf-8")
    return load_registry(text)
