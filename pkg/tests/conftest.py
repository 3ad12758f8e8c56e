"""Shared fixtures: golden dictionaries/corpora and a randomized corpus builder."""

from __future__ import annotations

import random

import pytest

from corpuskit.corpus import Corpus, meta_from_document
from corpuskit.registry import TextMeta


@pytest.fixture
def corpus() -> Corpus:
    return Corpus.with_defaults()


def add_shine_verbs(corpus: Corpus) -> dict[str, int]:
    """The three shine-verb entries with paradigms, meanings and links."""
    ids: dict[str, int] = {}
    veps_dialects = [d.id for d in corpus.registry.dialects_of("vep", standardized=False)]

    hoshtta = corpus.dictionary.add_lemma("hoštta", "vep", "Verb", dialects=veps_dialects)
    corpus.dictionary.upsert_meaning(
        hoshtta.id, 1,
        {"Russian": "блестеть, сверкать, сиять",
         "English": "to shine; to glisten; to glitter; to twinkle"},
        concept="B201")
    ids["hoštta"] = hoshtta.id

    kishtta = corpus.dictionary.add_lemma("kištta", "vep", "Verb")
    corpus.dictionary.upsert_meaning(
        kishtta.id, 1, {"English": "to shine; to glisten; to glitter; to twinkle"},
        concept="B201")
    ids["kištta"] = kishtta.id

    kushtta = corpus.dictionary.add_lemma("kuštta", "vep", "Verb")
    corpus.dictionary.upsert_meaning(
        kushtta.id, 1, {"English": "to shine; to glisten; to glitter; to twinkle"},
        concept="B201")
    corpus.dictionary.upsert_meaning(
        kushtta.id, 2, {"English": "to give someone light"}, concept="B201")
    ids["kuštta"] = kushtta.id

    for lemma_id in ids.values():
        corpus.dictionary.generate(lemma_id)

    kiildee = corpus.dictionary.add_lemma("kiildää", "olo", "Verb")
    corpus.dictionary.upsert_meaning(kiildee.id, 1, {"Russian": "блестеть"})
    corpus.dictionary.link_translation(hoshtta.id, 1, kiildee.id)
    ids["kiildää"] = kiildee.id
    return ids


@pytest.fixture
def shine_corpus(corpus: Corpus) -> Corpus:
    add_shine_verbs(corpus)
    return corpus


def fig4_texts(corpus: Corpus) -> list[int]:
    """Three Livvi dialectal narratives matching the advanced-search example."""
    rows = [
        ("Tuahes luajitah...", "Из бересты плетут...", 1949, 1949, "Anni P."),
        ("Minä olen rodinuh Čil'miel'e", "Я родилась в Чилмозере", 1955, 1957, "Outi L."),
        ("Mittumii pruzniekkoi pruzaznuičijmmo", "Какие праздники мы праздновали",
         1961, 1961, "Santra K."),
    ]
    ids = []
    for title, translation, recorded, published, informant in rows:
        meta = meta_from_document(corpus.registry, {
            "title": title, "language": "olo", "corpus_type": "Dialectal texts",
            "dialect": "Kotkozero", "genre": "Narrative",
            "informant": informant, "recorder": "A. Researcher",
            "year_recorded": recorded, "year_published": published,
        })
        doc = corpus.ingest_text(f"{title}.", meta, translations=[translation])
        ids.append(doc.id)
    return ids


def fig9_fixture(corpus: Corpus) -> tuple[int, dict[str, int]]:
    """Livvi sentence with a conditional olla-form right before an active
    2nd-participle verb, plus the dictionary entries said forms resolve to."""
    olla = corpus.dictionary.add_lemma("olla", "olo", "Verb")
    corpus.dictionary.upsert_meaning(olla.id, 1, {"Russian": "быть", "English": "to be"})
    corpus.dictionary.add_wordform(
        olla.id, corpus.registry.make_gramset(["Conditional", "Positive", "1st", "Sg"]),
        "olluzin")
    corpus.dictionary.add_wordform(
        olla.id, corpus.registry.make_gramset(["Active", "2nd participle"]), "olluh")

    parandua = corpus.dictionary.add_lemma("parandua", "olo", "Verb")
    corpus.dictionary.upsert_meaning(
        parandua.id, 1, {"Russian": "улучшить", "English": "to improve"})
    corpus.dictionary.generate(parandua.id)  # olo-verb-ua: includes parandannuh

    meta = meta_from_document(corpus.registry, {
        "title": "Bul'uu borkananke", "language": "olo",
        "corpus_type": "Journalistic texts", "author": "I. K.",
        "year_published": 2018,
    })
    doc = corpus.ingest_text(
        "Äijän rahvasto olluzin parandannuh, a työ kallehen syömizen kaimaitto!",
        meta)
    corpus.tag_text(doc.id)
    return doc.id, {"olla": olla.id, "parandua": parandua.id}


# ---------------------------------------------------------------------------
# Randomized corpus builder
# ---------------------------------------------------------------------------

_STEM_LETTERS = "aeiouklmnprstvhj" + "äöšč"


def _stem(rng: random.Random, lo: int = 3, hi: int = 6) -> str:
    return "".join(rng.choice(_STEM_LETTERS) for _ in range(rng.randint(lo, hi)))


def build_random_corpus(seed: int, n_texts: int = 50, min_word_tokens: int = 2000,
                        n_lemmas: int = 220, resolve_fraction: float = 0.25) -> Corpus:
    """Synthetic corpus: template-generated dictionary, random texts, markup.

    Deterministic in ``seed``.  Texts mix known wordforms, unknown words,
    numbers and punctuation; a fraction of ambiguous tokens is resolved to
    exercise verified-candidate paths.
    """
    rng = random.Random(seed)
    corpus = Corpus.with_defaults()
    reg = corpus.registry

    kinds = [("vep", "Verb", "ta"), ("vep", "Noun", ""), ("vep", "Adjective", ""),
             ("olo", "Verb", "ua")]
    surfaces: list[str] = []
    concepts = [c for c in reg.concepts]
    for i in range(n_lemmas):
        language, pos, suffix = kinds[i % len(kinds)]
        surface = _stem(rng) + suffix
        lemma = corpus.dictionary.add_lemma(surface, language, pos)
        for ordinal in range(1, rng.randint(1, 3) + 1):
            corpus.dictionary.upsert_meaning(
                lemma.id, ordinal,
                {"English": f"to {_stem(rng, 3, 5)}", "Russian": _stem(rng, 4, 7)},
                concept=rng.choice(concepts) if rng.random() < 0.4 else None)
        corpus.dictionary.generate(lemma.id)
        surfaces.append(surface)
        # occasional homograph: same surface, separate entry
        if rng.random() < 0.05:
            twin = corpus.dictionary.add_lemma(surface, language, pos)
            corpus.dictionary.upsert_meaning(twin.id, 1, {"English": f"to {_stem(rng)}"})
            corpus.dictionary.generate(twin.id)

    all_forms = [wf.surface for lemma in corpus.dictionary.lemmas.values()
                 for wf in lemma.wordforms]
    unknown_pool = [_stem(rng, 7, 9) for _ in range(60)]
    informants = ["Anni P.", "Outi L.", "Santra K.", "Tarja M.", None]
    corpus_types = [ct.name for ct in corpus.registry.corpus_types.values()]

    total_words = 0
    text_no = 0
    while text_no < n_texts or total_words < min_word_tokens:
        text_no += 1
        language = rng.choice(["vep", "olo"])
        ct_name = rng.choice(corpus_types)
        ct = reg.corpus_type_by_name(ct_name)
        genres = [g for g in reg.genres.values() if g.corpus_type == ct.id]
        dialects = reg.dialects_of(language)
        meta = TextMeta(
            title=f"Text {text_no} {_stem(rng)}",
            language=language,
            corpus_type=ct.id,
            dialect=rng.choice(dialects).id if dialects and rng.random() < 0.7 else None,
            genre=rng.choice(genres).id if genres and rng.random() < 0.6 else None,
            informant=rng.choice(informants),
            author=rng.choice(["A. B.", "C. D.", None]),
            recorder=rng.choice(["R. One", "R. Two", None]),
            year_recorded=rng.randint(1930, 2000) if rng.random() < 0.8 else None,
            year_published=rng.randint(2000, 2021) if rng.random() < 0.8 else None,
        )
        sentences = []
        for _ in range(rng.randint(2, 5)):
            words = []
            for _ in range(rng.randint(6, 14)):
                r = rng.random()
                if r < 0.8:
                    w = rng.choice(all_forms)
                    if rng.random() < 0.1:
                        w = w.capitalize()
                elif r < 0.9:
                    w = rng.choice(unknown_pool)
                else:
                    w = str(rng.randint(1, 2020))
                words.append(w)
                if rng.random() < 0.08:
                    words.append(",")
            sentences.append(" ".join(words) + rng.choice([".", "!", "?"]))
        doc = corpus.ingest_text(" ".join(sentences), meta)
        total_words += sum(len(corpus.texts[doc.id].word_tokens(s.index))
                           for s in doc.sentences)

    corpus.tag_all()

    # resolve a fraction of the ambiguous queue, plus attach a few manuals
    queue = corpus.queue()
    rng.shuffle(queue)
    lemma_ids = list(corpus.dictionary.lemmas)
    for item in queue[: int(len(queue) * resolve_fraction)]:
        markup = corpus.markup.entries[item.ref]
        if markup.candidates:
            corpus.resolve(item.ref, rng.randrange(len(markup.candidates)), "editor-r")
        else:
            lemma = corpus.dictionary.lemmas[rng.choice(lemma_ids)]
            ordinal = lemma.meanings[0].ordinal if lemma.meanings else 0
            corpus.attach_manual(item.ref, lemma.id, ordinal, [], "editor-r")
    return corpus
