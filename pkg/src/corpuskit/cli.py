"""Command-line interface.

Subcommands mirror the HTTP API; with ``--json`` every query prints the
exact payload the corresponding endpoint returns.  State lives in a
bundle directory (``--bundle``, default ``./bundle``); commands that
mutate it save before exiting.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import yaml

from . import errors, report, views
from .bundle import load_bundle, save_bundle
from .corpus import Corpus, meta_from_document
from .ingest import RawDocument
from .morphology import export_unimorph, import_unimorph
from .search import (LemmaQuery, LexGramQuery, Scope, TextQuery, WordConstraint,
                     frequency, lexgram_search, reverse_dictionary, search_lemmas,
                     search_texts, stats)
from .tagging import predict_unknown


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="corpuskit",
        description="Corpus manager: texts, dictionary, tagging, search.")
    parser.add_argument("--bundle", default="bundle", metavar="DIR",
                        help="bundle directory (default: ./bundle)")
    parser.add_argument("--json", action="store_true",
                        help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="add a text to the corpus")
    p.add_argument("textfile", help="plain-text file")
    p.add_argument("--meta", required=True, metavar="FILE",
                   help="metadata sidecar (YAML; keys mirror the text metadata)")
    p.add_argument("--encoding", default="utf-8")
    p.add_argument("--tag", action="store_true", help="run automatic markup too")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("tag", help="run automatic markup")
    p.add_argument("--text", type=int, default=None, help="text id (default: all)")
    p.set_defaults(func=cmd_tag)

    p = sub.add_parser("resolve", help="verify a token markup")
    p.add_argument("--text", type=int, required=True)
    p.add_argument("--sentence", type=int, required=True)
    p.add_argument("--position", type=int, required=True)
    p.add_argument("--choice", type=int, required=True)
    p.add_argument("--editor", required=True)
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("predict", help="suggest analyses for an unknown word")
    p.add_argument("surface")
    p.add_argument("-k", type=int, default=5)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("generate", help="generate inflectional paradigms")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--lemma", help="lemma surface")
    group.add_argument("--id", type=int, help="lemma id")
    group.add_argument("--all", action="store_true", help="every lemma with a template")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("search", help="query the corpus")
    search_sub = p.add_subparsers(dest="what", required=True)

    pt = search_sub.add_parser("texts")
    for name in ("language", "dialect", "corpus-type", "genre", "informant",
                 "recorder", "author", "title", "word", "fragment"):
        pt.add_argument(f"--{name}")
    pt.add_argument("--year-from", type=int)
    pt.add_argument("--year-to", type=int)
    pt.add_argument("--page", type=int, default=1)
    pt.add_argument("--page-size", type=int, default=10)
    pt.set_defaults(func=cmd_search_texts)

    pl = search_sub.add_parser("lexgram")
    pl.add_argument("--w1", help="word 1: surface or lemma")
    pl.add_argument("--w1-pos")
    pl.add_argument("--w1-gram", help="comma-separated grammemes")
    pl.add_argument("--w2")
    pl.add_argument("--w2-pos")
    pl.add_argument("--w2-gram")
    pl.add_argument("--language")
    pl.add_argument("--corpus-type")
    pl.add_argument("--from", dest="distance_from", type=int, default=1)
    pl.add_argument("--to", dest="distance_to", type=int, default=1)
    pl.add_argument("--verified-only", action="store_true")
    pl.set_defaults(func=cmd_search_lexgram)

    pm = search_sub.add_parser("lemmas")
    for name in ("surface", "pos", "gram", "language", "dialect",
                 "interpretation", "concept"):
        pm.add_argument(f"--{name}")
    pm.add_argument("--with-examples", action="store_true")
    pm.add_argument("--page", type=int, default=1)
    pm.add_argument("--page-size", type=int, default=10)
    pm.set_defaults(func=cmd_search_lemmas)

    p = sub.add_parser("freq", help="frequency dictionary")
    p.add_argument("--unit", choices=["lemma", "wordform"], default="wordform")
    p.add_argument("--language")
    p.add_argument("--corpus-type")
    p.add_argument("--limit", type=int, default=0)
    p.add_argument("--figure", metavar="FILE", help="also render a bar chart")
    p.set_defaults(func=cmd_freq)

    p = sub.add_parser("reverse", help="reverse dictionary")
    p.add_argument("--language")
    p.set_defaults(func=cmd_reverse)

    p = sub.add_parser("stats", help="corpus statistics")
    p.add_argument("dimension", choices=["by_corpus", "by_genre", "by_year"])
    p.add_argument("--figure", metavar="FILE", help="also render a chart")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("export-unimorph", help="write (lemma, form, features) TSV")
    p.add_argument("--lang", required=True)
    p.add_argument("--out", metavar="FILE", help="output file (default: stdout)")
    p.set_defaults(func=cmd_export_unimorph)

    p = sub.add_parser("import-unimorph", help="load a (lemma, form, features) TSV")
    p.add_argument("tsvfile")
    p.add_argument("--lang", required=True)
    p.set_defaults(func=cmd_import_unimorph)

    p = sub.add_parser("reindex", help="rebuild the search index")
    p.set_defaults(func=cmd_reindex)

    p = sub.add_parser("serve", help="run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


# -- helpers -----------------------------------------------------------------

def _load(args, create: bool = False) -> Corpus:
    path = Path(args.bundle)
    if path.is_dir() and (path / "manifest.json").exists():
        return load_bundle(path)
    if create:
        return Corpus.with_defaults()
    raise errors.IoError(f"no bundle at {path} (run a mutating command first)")


def _save(corpus: Corpus, args) -> None:
    save_bundle(corpus, args.bundle)


def _emit(args, payload: dict, human: str | None = None) -> None:
    if args.json:
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(human if human is not None
              else json.dumps(payload, ensure_ascii=False, indent=2))


# -- commands ------------------------------------------------------------------

def cmd_ingest(args) -> int:
    corpus = _load(args, create=True)
    meta_doc = yaml.safe_load(Path(args.meta).read_text(encoding="utf-8"))
    if not isinstance(meta_doc, dict):
        raise errors.InvalidMeta(f"{args.meta} is not a mapping")
    translations = meta_doc.pop("translations", None)
    translation_mode = meta_doc.pop("translation_mode", "strict")
    encoding = meta_doc.pop("encoding", args.encoding)
    meta = meta_from_document(corpus.registry, meta_doc)
    raw = RawDocument(Path(args.textfile).read_bytes(), declared_encoding=encoding)
    doc = corpus.ingest_text(raw, meta, translations=translations,
                             translation_mode=translation_mode)
    payload = {"id": doc.id, "sentences": len(doc.sentences)}
    if args.tag:
        summary = corpus.tag_text(doc.id)
        payload["tagged"] = {"words": summary.words, "auto": summary.auto,
                             "verified": summary.verified, "untagged": summary.untagged}
    _save(corpus, args)
    _emit(args, payload, f"ingested text {doc.id} ({len(doc.sentences)} sentences)")
    return 0


def cmd_tag(args) -> int:
    corpus = _load(args)
    summary = corpus.tag_text(args.text) if args.text is not None else corpus.tag_all()
    _save(corpus, args)
    payload = {"words": summary.words, "auto": summary.auto,
               "verified": summary.verified, "untagged": summary.untagged}
    _emit(args, payload,
          f"tagged {summary.words} word tokens: {summary.auto} auto, "
          f"{summary.verified} verified, {summary.untagged} untagged")
    return 0


def cmd_resolve(args) -> int:
    corpus = _load(args)
    ref = (args.text, args.sentence, args.position)
    markup = corpus.resolve(ref, args.choice, args.editor)
    _save(corpus, args)
    payload = views.markup_payload(corpus, ref, markup)
    _emit(args, payload, f"verified {ref[0]}:{ref[1]}:{ref[2]} -> choice {args.choice}")
    return 0


def cmd_predict(args) -> int:
    corpus = _load(args)
    suggestions = predict_unknown(args.surface, corpus.dictionary, args.k)
    payload = {"surface": args.surface, "suggestions": [
        {"pos": s.pos, "gramset": s.gramset.label(), "suffix": s.matched_suffix,
         "support": s.support, "lemma": s.hypothesized_lemma}
        for s in suggestions
    ]}
    lines = [f"{s.pos}\t{s.gramset.label()}\t-{s.matched_suffix}\t"
             f"{s.support}\t{s.hypothesized_lemma or ''}" for s in suggestions]
    _emit(args, payload, "\n".join(lines) if lines else "(no suggestions)")
    return 0


def cmd_generate(args) -> int:
    corpus = _load(args)
    if args.all:
        count = corpus.dictionary.generate_all()
        _save(corpus, args)
        _emit(args, {"generated": count}, f"generated paradigms for {count} lemmas")
        return 0
    if args.id is not None:
        lemma = corpus.dictionary.lemma(args.id)
    else:
        matches = [l for l in corpus.dictionary.lemmas.values()
                   if l.surface == args.lemma]
        if not matches:
            raise errors.UnknownLemma(args.lemma)
        lemma = matches[0]
    forms = corpus.dictionary.generate(lemma.id)
    _save(corpus, args)
    payload = {"lemma": lemma.surface, "id": lemma.id, "forms": [
        {"surface": wf.surface, "gramset": wf.gramset.label()} for wf in forms]}
    lines = [f"{wf.gramset.label() or '(dictionary form)'}\t{wf.surface}" for wf in forms]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_search_texts(args) -> int:
    corpus = _load(args)
    q = TextQuery(language=args.language, dialect=args.dialect,
                  corpus_type=args.corpus_type, genre=args.genre,
                  informant=args.informant, recorder=args.recorder,
                  author=args.author, title=args.title, word=args.word,
                  fragment=args.fragment, year_from=args.year_from,
                  year_to=args.year_to, page=args.page, page_size=args.page_size)
    page = search_texts(corpus.texts, corpus.registry, corpus.index, q)
    payload = views.text_page(page)
    lines = [f"{page.total} records were founded."]
    lines += [f"{r['id']}\t{r['title']}\t{r['title_translation'] or ''}"
              for r in payload["records"]]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_search_lexgram(args) -> int:
    corpus = _load(args)
    word1 = WordConstraint(word=args.w1, pos=args.w1_pos,
                           grammemes=_grams(corpus, args.w1_gram))
    word2 = None
    if args.w2 is not None or args.w2_pos is not None or args.w2_gram:
        word2 = WordConstraint(word=args.w2, pos=args.w2_pos,
                               grammemes=_grams(corpus, args.w2_gram))
    q = LexGramQuery(word1=word1, word2=word2, language=args.language,
                     corpus_type=args.corpus_type,
                     distance_from=args.distance_from, distance_to=args.distance_to,
                     verified_only=args.verified_only)
    result = lexgram_search(corpus.texts, corpus.registry, corpus.index, q)
    payload = views.lexgram_payload(corpus, result)
    lines = [f"{result.text_count} texts were founded, {result.entry_count} entries."]
    lines += [f"{e['title']}\t{e['sentence']}" for e in payload["entries"]]
    _emit(args, payload, "\n".join(lines))
    return 0


def cmd_search_lemmas(args) -> int:
    corpus = _load(args)
    q = LemmaQuery(surface=args.surface, pos=args.pos,
                   grammemes=_grams(corpus, args.gram), language=args.language,
                   dialect=args.dialect, interpretation=args.interpretation,
                   concept=args.concept, with_examples=args.with_examples,
                   page=args.page, page_size=args.page_size)
    page = search_lemmas(corpus.dictionary, corpus.registry, corpus.index, q)
    payload = views.lemma_page(page)
    lines = [f"{page.total} records were founded."]
    lines += [f"{r['surface']}\t{'; '.join(r['interpretations'])}\t{r['wordform_count']}"
              for r in payload["records"]]
    _emit(args, payload, "\n".join(lines))
    return 0


def _grams(corpus: Corpus, raw: str | None) -> tuple:
    if not raw:
        return ()
    return tuple(corpus.registry.grammeme(part.strip())
                 for part in raw.split(",") if part.strip())


def cmd_freq(args) -> int:
    corpus = _load(args)
    result = frequency(corpus.texts, corpus.registry, corpus.dictionary, corpus.markup,
                       Scope(language=args.language, corpus_type=args.corpus_type),
                       args.unit)
    if args.limit:
        result.items = result.items[:args.limit]
    if args.figure:
        report.render_frequency_figure(result, args.figure)
    payload = views.frequency_payload(result)
    _emit(args, payload, report.freq_tsv(result).rstrip("\n"))
    return 0


def cmd_reverse(args) -> int:
    corpus = _load(args)
    lemmas = reverse_dictionary(corpus.dictionary, args.language)
    payload = views.reverse_payload(args.language, lemmas)
    _emit(args, payload, "\n".join(l.surface for l in lemmas))
    return 0


def cmd_stats(args) -> int:
    corpus = _load(args)
    table = stats(corpus.texts, corpus.registry, args.dimension)
    if args.figure:
        report.render_stats_figure(table, args.figure)
    payload = views.stats_payload(table)
    _emit(args, payload, report.stats_tsv(table).rstrip("\n"))
    return 0


def cmd_export_unimorph(args) -> int:
    corpus = _load(args)
    if corpus.feature_map is None:
        raise errors.UnmappedGrammeme("no feature map loaded")
    body = export_unimorph(corpus.dictionary, args.lang, corpus.feature_map)
    if args.out:
        Path(args.out).write_text(body, encoding="utf-8")
        _emit(args, {"rows": body.count("\n"), "file": args.out},
              f"wrote {body.count(chr(10))} rows to {args.out}")
    else:
        sys.stdout.write(body)
    return 0


def cmd_import_unimorph(args) -> int:
    corpus = _load(args, create=True)
    if corpus.feature_map is None:
        raise errors.UnmappedGrammeme("no feature map loaded")
    rows = Path(args.tsvfile).read_text(encoding="utf-8")
    delta = import_unimorph(rows, args.lang, corpus.feature_map, corpus.dictionary)
    _save(corpus, args)
    payload = {"lemmas_created": delta.lemmas_created,
               "wordforms_created": delta.wordforms_created}
    _emit(args, payload,
          f"imported {delta.lemmas_created} lemmas, {delta.wordforms_created} wordforms")
    return 0


def cmd_reindex(args) -> int:
    corpus = _load(args)
    snapshot = corpus.reindex()
    payload = {"postings": len(snapshot.postings),
               "word_tokens": snapshot.word_token_total}
    _emit(args, payload,
          f"indexed {snapshot.word_token_total} word tokens, "
          f"{len(snapshot.postings)} distinct forms")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .api import create_app
    corpus = _load(args)
    app = create_app(corpus, bundle_dir=args.bundle)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except errors.CorpusError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
