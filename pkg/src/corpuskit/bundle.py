"""Plain-directory persistence bundle.

Layout::

    bundle/
      manifest.json      format_version, created, counts, registry checksum
      registry.json      full taxonomy document
      templates.yaml     paradigm template document (verbatim)
      unimorph_map.yaml  feature map document (verbatim)
      dictionary.jsonl   one lemma record per line
      texts/t<id>.json   one document per text, markup embedded
      audit.log          append-only editor actions

Everything is UTF-8 and diffable.  ``load(save(S))`` is deep-equal to S;
unknown top-level keys of the manifest, text documents and lemma records
survive a round trip.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from . import errors
from .corpus import Corpus
from .ingest import Sentence, TextDoc, Token
from .morphology import Lemma, Meaning, Wordform, load_feature_map, load_ruleset
from .registry import Gramset, Registry, TextMeta
from .tagging import MarkupCandidate, TokenMarkup

FORMAT_VERSION = 1


@dataclass
class BundleManifest:
    format_version: int
    created: dt.datetime
    counts: dict[str, int]
    registry_checksum: str
    extra: dict = field(default_factory=dict)


def _dump_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, ensure_ascii=False, indent=1, sort_keys=True) + "\n",
                    encoding="utf-8")


def _gramset_keys(gramset: Gramset) -> list[str]:
    return list(gramset.keys())


def _gramset_from_keys(registry: Registry, keys: list[str]) -> Gramset:
    return registry.make_gramset(keys)


# -- text documents -----------------------------------------------------------

_META_FIELDS = ("title", "language", "corpus_type", "dialect", "genre", "author",
                "informant", "recorder", "year_recorded", "year_published",
                "source", "place_of_recording", "license")


def _meta_record(meta: TextMeta) -> dict:
    return {name: getattr(meta, name) for name in _META_FIELDS}


def _text_record(doc: TextDoc, markup: list[TokenMarkup]) -> dict:
    record = {
        "id": doc.id,
        "meta": _meta_record(doc.meta),
        "normalized_text": doc.normalized_text,
        "accession_date": doc.accession_date.isoformat(),
        "sentences": [
            {
                "index": s.index,
                "span": list(s.span),
                "translation": s.translation,
                "tokens": [
                    {"position": t.position, "span": list(t.span), "surface": t.surface,
                     "kind": t.kind, "word_index": t.word_index}
                    for t in s.tokens
                ],
            }
            for s in doc.sentences
        ],
        "markup": [
            {
                "ref": list(m.ref),
                "state": m.state,
                "chosen": m.chosen,
                "editor": m.editor,
                "verified_at": m.verified_at.isoformat() if m.verified_at else None,
                "candidates": [
                    {"lemma": c.lemma_id, "meaning": c.meaning_ordinal,
                     "gramset": _gramset_keys(c.gramset), "source": c.source,
                     "rank": c.rank}
                    for c in m.candidates
                ],
            }
            for m in sorted(markup, key=lambda m: m.ref)
        ],
    }
    record.update(doc.extra)
    return record


_TEXT_KEYS = {"id", "meta", "normalized_text", "accession_date", "sentences", "markup"}


def _text_from_record(record: dict, registry: Registry) -> tuple[TextDoc, list[TokenMarkup]]:
    meta = TextMeta(**{name: record["meta"].get(name) for name in _META_FIELDS})
    sentences = []
    for s in record["sentences"]:
        tokens = [Token(position=t["position"], span=tuple(t["span"]),
                        surface=t["surface"], kind=t["kind"],
                        word_index=t.get("word_index"))
                  for t in s["tokens"]]
        sentences.append(Sentence(index=s["index"], span=tuple(s["span"]),
                                  tokens=tokens, translation=s.get("translation")))
    doc = TextDoc(id=record["id"], meta=meta,
                  normalized_text=record["normalized_text"],
                  sentences=sentences,
                  accession_date=dt.date.fromisoformat(record["accession_date"]),
                  extra={k: v for k, v in record.items() if k not in _TEXT_KEYS})
    markups = []
    for m in record.get("markup", []):
        markups.append(TokenMarkup(
            ref=tuple(m["ref"]),
            state=m["state"],
            chosen=m.get("chosen"),
            editor=m.get("editor"),
            verified_at=(dt.datetime.fromisoformat(m["verified_at"])
                         if m.get("verified_at") else None),
            candidates=[
                MarkupCandidate(lemma_id=c["lemma"], meaning_ordinal=c["meaning"],
                                gramset=_gramset_from_keys(registry, c["gramset"]),
                                source=c["source"], rank=c["rank"])
                for c in m["candidates"]
            ],
        ))
    return doc, markups


# -- dictionary ------------------------------------------------------------------

def _lemma_record(lemma: Lemma) -> dict:
    record = {
        "id": lemma.id,
        "surface": lemma.surface,
        "language": lemma.language,
        "pos": lemma.pos,
        "dialects_of_usage": sorted(lemma.dialects_of_usage),
        "meanings": [
            {"ordinal": m.ordinal, "interpretations": m.interpretations,
             "concept": m.concept,
             "translation_links": {lang: list(ids)
                                   for lang, ids in sorted(m.translation_links.items())}}
            for m in lemma.meanings
        ],
        "wordforms": [
            {"gramset": _gramset_keys(wf.gramset), "surface": wf.surface,
             "variety": wf.variety, "template": wf.template, "row": wf.row}
            for wf in lemma.wordforms
        ],
    }
    record.update(lemma.extra)
    return record


_LEMMA_KEYS = {"id", "surface", "language", "pos", "dialects_of_usage",
               "meanings", "wordforms"}


def _lemma_from_record(record: dict, registry: Registry) -> Lemma:
    return Lemma(
        id=record["id"],
        surface=record["surface"],
        language=record["language"],
        pos=record["pos"],
        dialects_of_usage=set(record.get("dialects_of_usage", ())),
        meanings=[
            Meaning(ordinal=m["ordinal"],
                    interpretations=dict(m.get("interpretations", {})),
                    concept=m.get("concept"),
                    translation_links={lang: list(ids)
                                       for lang, ids in m.get("translation_links", {}).items()})
            for m in record.get("meanings", ())
        ],
        wordforms=[
            Wordform(gramset=_gramset_from_keys(registry, wf["gramset"]),
                     surface=wf["surface"], variety=wf.get("variety"),
                     template=wf.get("template"), row=wf.get("row"))
            for wf in record.get("wordforms", ())
        ],
        extra={k: v for k, v in record.items() if k not in _LEMMA_KEYS},
    )


# -- save / load -------------------------------------------------------------------

def save_bundle(corpus: Corpus, directory: str | Path) -> BundleManifest:
    root = Path(directory)
    try:
        root.mkdir(parents=True, exist_ok=True)
        (root / "texts").mkdir(exist_ok=True)

        registry_doc = corpus.registry.to_document()
        registry_bytes = (json.dumps(registry_doc, ensure_ascii=False, indent=1,
                                     sort_keys=True) + "\n").encode("utf-8")
        (root / "registry.json").write_bytes(registry_bytes)

        (root / "templates.yaml").write_text(corpus.dictionary.templates.source,
                                             encoding="utf-8")
        fmap_source = corpus.feature_map.source if corpus.feature_map is not None else ""
        (root / "unimorph_map.yaml").write_text(fmap_source, encoding="utf-8")

        lemma_lines = [json.dumps(_lemma_record(corpus.dictionary.lemmas[i]),
                                  ensure_ascii=False, sort_keys=True)
                       for i in sorted(corpus.dictionary.lemmas)]
        (root / "dictionary.jsonl").write_text(
            "".join(line + "\n" for line in lemma_lines), encoding="utf-8")

        markup_by_text: dict[int, list[TokenMarkup]] = {}
        for ref, markup in corpus.markup.entries.items():
            markup_by_text.setdefault(ref[0], []).append(markup)
        kept = {f"t{text_id:06d}.json" for text_id in corpus.texts}
        for stale in (root / "texts").glob("t*.json"):
            if stale.name not in kept:
                stale.unlink()
        for text_id in sorted(corpus.texts):
            record = _text_record(corpus.texts[text_id], markup_by_text.get(text_id, []))
            _dump_json(root / "texts" / f"t{text_id:06d}.json", record)

        (root / "audit.log").write_text(
            "".join(line + "\n" for line in corpus.markup.audit), encoding="utf-8")

        manifest = BundleManifest(
            format_version=FORMAT_VERSION,
            created=dt.datetime.now(dt.timezone.utc),
            counts={
                "texts": len(corpus.texts),
                "lemmas": len(corpus.dictionary.lemmas),
                "wordforms": corpus.dictionary.wordform_count(),
            },
            registry_checksum=hashlib.sha256(registry_bytes).hexdigest(),
        )
        payload = {"format_version": manifest.format_version,
                   "created": manifest.created.isoformat(),
                   "counts": manifest.counts,
                   "registry_checksum": manifest.registry_checksum}
        payload.update(manifest.extra)
        _dump_json(root / "manifest.json", payload)
        return manifest
    except OSError as exc:
        raise errors.IoError(str(exc)) from None


def load_manifest(directory: str | Path) -> BundleManifest:
    root = Path(directory)
    try:
        raw = json.loads((root / "manifest.json").read_text(encoding="utf-8"))
    except OSError as exc:
        raise errors.IoError(str(exc)) from None
    except json.JSONDecodeError as exc:
        raise errors.ParseError(f"manifest.json: {exc}") from None
    known = {"format_version", "created", "counts", "registry_checksum"}
    manifest = BundleManifest(
        format_version=int(raw.get("format_version", -1)),
        created=dt.datetime.fromisoformat(raw["created"]),
        counts=dict(raw.get("counts", {})),
        registry_checksum=str(raw.get("registry_checksum", "")),
        extra={k: v for k, v in raw.items() if k not in known},
    )
    if manifest.format_version != FORMAT_VERSION:
        raise errors.FormatVersionUnsupported(str(manifest.format_version))
    return manifest


def load_bundle(directory: str | Path) -> Corpus:
    root = Path(directory)
    if not root.is_dir():
        raise errors.IoError(f"not a bundle directory: {root}")
    manifest = load_manifest(root)
    try:
        registry_bytes = (root / "registry.json").read_bytes()
        template_source = (root / "templates.yaml").read_text(encoding="utf-8")
        fmap_source = (root / "unimorph_map.yaml").read_text(encoding="utf-8")
        dictionary_text = (root / "dictionary.jsonl").read_text(encoding="utf-8")
        audit_text = (root / "audit.log").read_text(encoding="utf-8") \
            if (root / "audit.log").exists() else ""
        text_files = sorted((root / "texts").glob("t*.json"))
    except OSError as exc:
        raise errors.IoError(str(exc)) from None

    checksum = hashlib.sha256(registry_bytes).hexdigest()
    if checksum != manifest.registry_checksum:
        raise errors.ChecksumMismatch("registry.json does not match manifest checksum")

    try:
        registry = Registry.from_document(json.loads(registry_bytes.decode("utf-8")))
    except json.JSONDecodeError as exc:
        raise errors.ParseError(f"registry.json: {exc}") from None
    templates = load_ruleset(template_source, registry)
    feature_map = load_feature_map(fmap_source) if fmap_source.strip() else None

    corpus = Corpus(registry, templates=templates, feature_map=feature_map)
    for lineno, line in enumerate(dictionary_text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise errors.ParseError(f"dictionary.jsonl line {lineno}: {exc}") from None
        lemma = _lemma_from_record(record, registry)
        corpus.dictionary.lemmas[lemma.id] = lemma
    corpus.dictionary.rebuild_indexes()

    max_text_id = 0
    for path in text_files:
        try:
            record = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise errors.IoError(f"{path.name}: {exc}") from None
        doc, markups = _text_from_record(record, registry)
        corpus.texts[doc.id] = doc
        for markup in markups:
            corpus.markup.entries[markup.ref] = markup
        max_text_id = max(max_text_id, doc.id)
    corpus._next_text_id = max_text_id + 1
    corpus.markup.audit = audit_text.splitlines()

    if manifest.counts.get("texts") != len(corpus.texts) \
            or manifest.counts.get("lemmas") != len(corpus.dictionary.lemmas) \
            or manifest.counts.get("wordforms") != corpus.dictionary.wordform_count():
        raise errors.ChecksumMismatch("manifest counts do not match bundle contents")
    return corpus
