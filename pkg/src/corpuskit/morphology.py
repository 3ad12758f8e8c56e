"""Dictionary with declarative paradigm generation and surface analysis.

A :class:`ParadigmTemplate` is pure data: a suffix pattern selecting
lemmas, named stem rules (strip a suffix from the dictionary form, append
a string) and an affix table mapping gramsets to (stem, suffix) pairs.
Generation walks the affix table in declaration order; the first template
whose (language, pos, pattern) matches a lemma wins.

Analysis is the reverse lookup: dictionary wordforms indexed by their
lowercased, apostrophe-normalized surface, plus lemma dictionary forms for
entries that have no identical stored form.  Homographs are returned in
full; disambiguation is the tagging layer's concern.
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import yaml

from . import errors
from .ingest import lookup_key
from .registry import Gramset, Registry

DICTIONARY_FORM = Gramset()  # empty gramset marks a bare dictionary-form hit


@dataclass
class Meaning:
    ordinal: int  # 1-based, dense per lemma
    interpretations: dict[str, str] = field(default_factory=dict)  # label -> gloss
    concept: str | None = None
    translation_links: dict[str, list[int]] = field(default_factory=dict)  # lang -> lemma ids


@dataclass
class Wordform:
    gramset: Gramset
    surface: str
    variety: int | None = None       # dialect id of the form column
    template: str | None = None      # provenance when generated
    row: int | None = None


@dataclass
class Lemma:
    id: int
    surface: str
    language: str
    pos: str
    dialects_of_usage: set[int] = field(default_factory=set)
    meanings: list[Meaning] = field(default_factory=list)
    wordforms: list[Wordform] = field(default_factory=list)
    extra: dict = field(default_factory=dict)  # unknown bundle fields, preserved

    def meaning(self, ordinal: int) -> Meaning:
        for m in self.meanings:
            if m.ordinal == ordinal:
                return m
        raise errors.InvalidMeaning(f"lemma {self.surface!r} has no meaning {ordinal}")


# ---------------------------------------------------------------------------
# Paradigm templates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StemRule:
    name: str
    strip: str
    append: str

    def apply(self, lemma_surface: str) -> str:
        if self.strip and not lemma_surface.endswith(self.strip):
            raise errors.ParseError(
                f"stem {self.name!r}: lemma {lemma_surface!r} does not end with {self.strip!r}")
        base = lemma_surface[:-len(self.strip)] if self.strip else lemma_surface
        return base + self.append


@dataclass(frozen=True)
class AffixRow:
    gramset: Gramset
    stem: str
    suffix: str


@dataclass(frozen=True)
class ParadigmTemplate:
    id: str
    language: str
    pos: str
    lemma_pattern: str            # ends-with match; "" matches any surface
    stems: tuple[StemRule, ...]
    rows: tuple[AffixRow, ...]
    variety: str | None = None    # dialect name labelling the form column

    def matches(self, language: str, pos: str, surface: str) -> bool:
        return (self.language == language and self.pos == pos
                and surface.endswith(self.lemma_pattern))

    def stem_rule(self, name: str) -> StemRule:
        for rule in self.stems:
            if rule.name == name:
                return rule
        raise errors.UndefinedStem(f"{self.id}: {name}")


class TemplateSet:
    """Immutable, ordered collection of validated templates."""

    def __init__(self, templates: Iterable[ParadigmTemplate] = (), source: str = ""):
        self.templates: tuple[ParadigmTemplate, ...] = tuple(templates)
        self.source = source  # original document text, kept for bundles
        self._by_id = {t.id: t for t in self.templates}

    def __len__(self) -> int:
        return len(self.templates)

    def __iter__(self) -> Iterator[ParadigmTemplate]:
        return iter(self.templates)

    def get(self, template_id: str) -> ParadigmTemplate | None:
        return self._by_id.get(template_id)

    def find(self, language: str, pos: str, surface: str) -> ParadigmTemplate | None:
        for t in self.templates:
            if t.matches(language, pos, surface):
                return t
        return None


def load_ruleset(source: str, registry: Registry) -> TemplateSet:
    """Parse and validate a template document (YAML)."""
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        raise errors.ParseError(f"template document: {exc}") from None
    if doc is None:
        return TemplateSet((), source)
    if not isinstance(doc, dict) or not isinstance(doc.get("templates", []), list):
        raise errors.ParseError("template document must map 'templates' to a list")
    templates = []
    for item in doc.get("templates", []):
        try:
            stems = tuple(StemRule(name=name, strip=str(rule.get("strip", "")),
                                   append=str(rule.get("append", "")))
                          for name, rule in item.get("stems", {}).items())
            stem_names = {s.name for s in stems}
            rows = []
            seen_gramsets = set()
            for row in item["rows"]:
                gramset = registry.make_gramset(row["gramset"])
                if gramset in seen_gramsets:
                    raise errors.ParseError(
                        f"template {item['id']}: duplicate gramset {gramset.label()!r}")
                seen_gramsets.add(gramset)
                stem = row.get("stem", "base")
                if stem not in stem_names:
                    raise errors.UndefinedStem(f"{item['id']}: {stem}")
                rows.append(AffixRow(gramset=gramset, stem=stem,
                                     suffix=str(row.get("suffix", ""))))
            template = ParadigmTemplate(
                id=str(item["id"]),
                language=str(item["language"]),
                pos=str(item["pos"]),
                lemma_pattern=str(item.get("lemma_pattern", "")),
                stems=stems,
                rows=tuple(rows),
                variety=item.get("variety"),
            )
        except KeyError as exc:
            raise errors.ParseError(f"template missing field {exc}") from None
        registry.language(template.language)
        registry.check_pos(template.pos)
        templates.append(template)
    return TemplateSet(templates, source)


def default_ruleset(registry: Registry) -> TemplateSet:
    text = importlib.resources.files("corpuskit.data").joinpath("templates.yaml").read_text("utf-8")
    return load_ruleset(text, registry)


def generate_paradigm(lemma: Lemma, templates: TemplateSet,
                      registry: Registry) -> list[Wordform]:
    """Expand the first matching template into wordforms (pure; not stored)."""
    template = templates.find(lemma.language, lemma.pos, lemma.surface)
    if template is None:
        raise errors.NoTemplateMatch(f"{lemma.language}/{lemma.pos}/{lemma.surface}")
    stems = {rule.name: rule.apply(lemma.surface) for rule in template.stems}
    variety_id = None
    if template.variety is not None:
        variety_id = registry.dialect_by_name(template.language, template.variety).id
    return [
        Wordform(gramset=row.gramset, surface=stems[row.stem] + row.suffix,
                 variety=variety_id, template=template.id, row=i)
        for i, row in enumerate(template.rows)
    ]


# ---------------------------------------------------------------------------
# Dictionary
# ---------------------------------------------------------------------------

class Dictionary:
    """Lemma store with an incrementally maintained wordform index."""

    def __init__(self, registry: Registry, templates: TemplateSet | None = None):
        self.registry = registry
        self.templates = templates if templates is not None else TemplateSet()
        self.lemmas: dict[int, Lemma] = {}
        self._next_id = 1
        self.version = 0  # bumped on every mutation; caches key off it
        self._form_index: dict[str, list[tuple[int, int]]] = {}    # key -> [(lemma, wf idx)]
        self._surface_index: dict[str, list[int]] = {}             # key -> [lemma ids]
        self._reverse_links: dict[int, set[tuple[int, int]]] = {}  # target -> {(source, ordinal)}

    # -- mutation -----------------------------------------------------------

    def _touch(self) -> None:
        self.version += 1

    def lemma(self, lemma_id: int) -> Lemma:
        try:
            return self.lemmas[lemma_id]
        except KeyError:
            raise errors.UnknownLemma(str(lemma_id)) from None

    def add_lemma(self, surface: str, language: str, pos: str,
                  dialects: Iterable[int] = (),
                  meanings: Iterable[Meaning] | None = None) -> Lemma:
        if not surface:
            raise errors.InvalidMeta("lemma surface must be non-empty")
        self.registry.language(language)
        self.registry.check_pos(pos)
        for d in dialects:
            self.registry.dialect(d)
        lemma = Lemma(id=self._next_id, surface=surface, language=language,
                      pos=pos, dialects_of_usage=set(dialects),
                      meanings=list(meanings or []))
        self._next_id += 1
        self.lemmas[lemma.id] = lemma
        self._surface_index.setdefault(lookup_key(surface), []).append(lemma.id)
        self._touch()
        return lemma

    def upsert_meaning(self, lemma_id: int, ordinal: int,
                       interpretations: dict[str, str] | None = None,
                       concept: str | None = None) -> Meaning:
        lemma = self.lemma(lemma_id)
        if concept is not None:
            self.registry.concept(concept)
        if ordinal < 1 or ordinal > len(lemma.meanings) + 1:
            raise errors.NonDenseOrdinal(
                f"ordinal {ordinal} on a lemma with {len(lemma.meanings)} meanings")
        if ordinal == len(lemma.meanings) + 1:
            meaning = Meaning(ordinal=ordinal)
            lemma.meanings.append(meaning)
        else:
            meaning = lemma.meanings[ordinal - 1]
        if interpretations:
            meaning.interpretations.update(interpretations)
        if concept is not None:
            meaning.concept = concept
        self._touch()
        return meaning

    def link_translation(self, lemma_id: int, ordinal: int, target_lemma_id: int) -> None:
        """Record a cross-language translation link (reverse index kept)."""
        lemma = self.lemma(lemma_id)
        meaning = lemma.meaning(ordinal)
        if target_lemma_id not in self.lemmas:
            raise errors.UnknownTarget(str(target_lemma_id))
        target = self.lemmas[target_lemma_id]
        bucket = meaning.translation_links.setdefault(target.language, [])
        if target_lemma_id not in bucket:
            bucket.append(target_lemma_id)
        self._reverse_links.setdefault(target_lemma_id, set()).add((lemma_id, ordinal))
        self._touch()

    def reverse_translations(self, lemma_id: int) -> list[tuple[int, int]]:
        """(source lemma id, meaning ordinal) pairs that link to this lemma."""
        return sorted(self._reverse_links.get(lemma_id, ()))

    def add_wordform(self, lemma_id: int, gramset: Gramset, surface: str,
                     variety: int | None = None, template: str | None = None,
                     row: int | None = None) -> Wordform:
        lemma = self.lemma(lemma_id)
        if not surface:
            raise errors.InvalidMeta("wordform surface must be non-empty")
        for existing in lemma.wordforms:
            if existing.gramset == gramset and existing.variety == variety:
                if existing.surface == surface:
                    return existing  # idempotent re-add
                raise errors.DuplicateWordform(
                    f"{lemma.surface}: {gramset.label() or 'dictionary form'}")
        wf = Wordform(gramset=gramset, surface=surface, variety=variety,
                      template=template, row=row)
        lemma.wordforms.append(wf)
        self._index_wordform(lemma.id, len(lemma.wordforms) - 1, wf)
        self._touch()
        return wf

    def _index_wordform(self, lemma_id: int, wf_idx: int, wf: Wordform) -> None:
        self._form_index.setdefault(lookup_key(wf.surface), []).append((lemma_id, wf_idx))

    def generate(self, lemma_id: int) -> list[Wordform]:
        """Apply the matching template and store the forms on the lemma.

        Regeneration replaces previously generated forms; manually added
        wordforms are kept.
        """
        lemma = self.lemma(lemma_id)
        generated = generate_paradigm(lemma, self.templates, self.registry)
        lemma.wordforms = [wf for wf in lemma.wordforms if wf.template is None]
        lemma.wordforms.extend(generated)
        self._rebuild_form_index()
        self._touch()
        return generated

    def generate_all(self, skip_unmatched: bool = True) -> int:
        count = 0
        for lemma in self.lemmas.values():
            try:
                self.generate(lemma.id)
                count += 1
            except errors.NoTemplateMatch:
                if not skip_unmatched:
                    raise
        return count

    def _rebuild_form_index(self) -> None:
        self._form_index = {}
        for lemma in self.lemmas.values():
            for i, wf in enumerate(lemma.wordforms):
                self._index_wordform(lemma.id, i, wf)

    def rebuild_indexes(self) -> None:
        """Recompute all derived indexes (after bulk loading lemma records)."""
        self._rebuild_form_index()
        self._surface_index = {}
        self._reverse_links = {}
        for lemma in self.lemmas.values():
            self._surface_index.setdefault(lookup_key(lemma.surface), []).append(lemma.id)
            for meaning in lemma.meanings:
                for ids in meaning.translation_links.values():
                    for target in ids:
                        self._reverse_links.setdefault(target, set()).add(
                            (lemma.id, meaning.ordinal))
        if self.lemmas:
            self._next_id = max(self.lemmas) + 1
        self._touch()

    # -- lookup ------------------------------------------------------------------

    def analyze(self, surface: str) -> list[tuple[Lemma, Gramset, int | None]]:
        """All (lemma, gramset, variety) readings of a surface form.

        Stored wordforms first; a bare dictionary-form reading (empty
        gramset) is added for lemmas whose citation form matches but which
        contributed no stored form for this key.
        """
        key = lookup_key(surface)
        results: list[tuple[Lemma, Gramset, int | None]] = []
        seen_lemmas: set[int] = set()
        for lemma_id, wf_idx in self._form_index.get(key, ()):
            lemma = self.lemmas.get(lemma_id)
            if lemma is None or wf_idx >= len(lemma.wordforms):
                continue
            wf = lemma.wordforms[wf_idx]
            results.append((lemma, wf.gramset, wf.variety))
            seen_lemmas.add(lemma_id)
        for lemma_id in self._surface_index.get(key, ()):
            if lemma_id in seen_lemmas or lemma_id not in self.lemmas:
                continue
            results.append((self.lemmas[lemma_id], DICTIONARY_FORM, None))
        return results

    def lemmas_of(self, language: str | None = None) -> list[Lemma]:
        out = [l for l in self.lemmas.values()
               if language is None or l.language == language]
        return sorted(out, key=lambda l: (l.surface, l.id))

    def wordform_count(self) -> int:
        return sum(len(l.wordforms) for l in self.lemmas.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dictionary):
            return NotImplemented
        return self.lemmas == other.lemmas


# ---------------------------------------------------------------------------
# UniMorph import/export
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImpliedRule:
    """Category whose unmarked member is implied in exports.

    The grammeme is dropped on export (mapped to the empty token) and
    re-inserted on import when the trigger category is present and the
    grammeme is applicable to the row's POS.
    """
    category: str
    grammeme: str
    when_category_present: str


class FeatureMap:
    """Bijective grammeme/POS <-> feature-token mapping."""

    def __init__(self, pos: dict[str, str],
                 grammemes: dict[tuple[str, str], str],
                 implied: tuple[ImpliedRule, ...] = ()):
        self.pos = dict(pos)
        self.grammemes = dict(grammemes)
        self.implied = tuple(implied)
        self.pos_inverse = {tok: p for p, tok in self.pos.items()}
        self.grammeme_inverse = {tok: key for key, tok in self.grammemes.items() if tok}
        self.source = ""

    def pos_token(self, pos: str) -> str:
        try:
            return self.pos[pos]
        except KeyError:
            raise errors.UnmappedGrammeme(f"pos {pos}") from None

    def feature_tokens(self, pos: str, gramset: Gramset) -> list[str]:
        tokens = [self.pos_token(pos)]
        for g in gramset:
            try:
                tok = self.grammemes[(g.category, g.name)]
            except KeyError:
                raise errors.UnmappedGrammeme(g.key) from None
            if tok:
                tokens.append(tok)
        return tokens


def load_feature_map(source: str) -> FeatureMap:
    try:
        doc = yaml.safe_load(source)
    except yaml.YAMLError as exc:
        raise errors.ParseError(f"feature map: {exc}") from None
    if not isinstance(doc, dict):
        raise errors.ParseError("feature map must be a mapping")
    grammemes: dict[tuple[str, str], str] = {}
    for category, members in doc.get("grammemes", {}).items():
        for name, token in members.items():
            grammemes[(category, name)] = "" if token is None else str(token)
    implied = tuple(
        ImpliedRule(category=item["category"], grammeme=item["grammeme"],
                    when_category_present=item["when_category_present"])
        for item in doc.get("implied", [])
    )
    fmap = FeatureMap(pos=dict(doc.get("pos", {})), grammemes=grammemes, implied=implied)
    fmap.source = source
    return fmap


def default_feature_map() -> FeatureMap:
    text = importlib.resources.files("corpuskit.data").joinpath("unimorph_map.yaml").read_text("utf-8")
    return load_feature_map(text)


def export_unimorph(dictionary: Dictionary, language: str, fmap: FeatureMap) -> str:
    """Tab-separated (lemma, form, features) rows, LF-terminated, no header.

    Rows are ordered by lemma surface, lemma id, then canonical gramset
    order, so the output is byte-stable across runs.
    """
    registry = dictionary.registry
    registry.language(language)
    lines: list[str] = []
    for lemma in dictionary.lemmas_of(language):
        rows = sorted(lemma.wordforms,
                      key=lambda wf: (registry.gramset_sort_key(wf.gramset), wf.surface))
        for wf in rows:
            features = ";".join(fmap.feature_tokens(lemma.pos, wf.gramset))
            lines.append(f"{lemma.surface}\t{wf.surface}\t{features}\n")
    return "".join(lines)


@dataclass
class ImportDelta:
    lemmas_created: int = 0
    wordforms_created: int = 0


def import_unimorph(rows: Iterable[str] | str, language: str,
                    fmap: FeatureMap, dictionary: Dictionary) -> ImportDelta:
    """Create lemmas/wordforms from UniMorph rows.

    Rows sharing (lemma surface, POS) land on one lemma.  The format does
    not carry the variety dimension, so imported forms get variety=None.
    """
    if isinstance(rows, str):
        rows = rows.splitlines()
    registry = dictionary.registry
    registry.language(language)
    delta = ImportDelta()
    by_surface_pos: dict[tuple[str, str], int] = {
        (l.surface, l.pos): l.id for l in dictionary.lemmas_of(language)
    }
    for lineno, line in enumerate(rows, start=1):
        line = line.rstrip("\n")
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3 or not all(parts):
            raise errors.MalformedRow(f"line {lineno}: expected 3 tab-separated columns")
        lemma_surface, form, feature_str = parts
        tokens = feature_str.split(";")
        pos = fmap.pos_inverse.get(tokens[0])
        if pos is None:
            raise errors.UnknownFeature(f"line {lineno}: {tokens[0]}")
        grammemes = []
        for tok in tokens[1:]:
            key = fmap.grammeme_inverse.get(tok)
            if key is None:
                raise errors.UnknownFeature(f"line {lineno}: {tok}")
            grammemes.append(registry.grammemes[key])
        categories = {g.category for g in grammemes}
        for rule in fmap.implied:
            if rule.category in categories or rule.when_category_present not in categories:
                continue
            grammeme = registry.grammemes.get((rule.category, rule.grammeme))
            if grammeme is None:
                raise errors.UnknownFeature(f"implied grammeme {rule.category}:{rule.grammeme}")
            if grammeme.applicable_pos and pos not in grammeme.applicable_pos:
                continue
            grammemes.append(grammeme)
        gramset = registry.make_gramset(grammemes)
        lemma_id = by_surface_pos.get((lemma_surface, pos))
        if lemma_id is None:
            lemma = dictionary.add_lemma(lemma_surface, language, pos)
            by_surface_pos[(lemma_surface, pos)] = lemma.id
            lemma_id = lemma.id
            delta.lemmas_created += 1
        before = len(dictionary.lemma(lemma_id).wordforms)
        dictionary.add_wordform(lemma_id, gramset, form)
        if len(dictionary.lemma(lemma_id).wordforms) > before:
            delta.wordforms_created += 1
    return delta


def unimorph_triples(dictionary: Dictionary, language: str) -> set[tuple[str, str, Gramset]]:
    """(lemma surface, form, gramset) content triples, for round-trip checks."""
    return {
        (lemma.surface, wf.surface, wf.gramset)
        for lemma in dictionary.lemmas_of(language)
        for wf in lemma.wordforms
    }
