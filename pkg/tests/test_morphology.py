"""Dictionary, paradigm generation, analysis and UniMorph transfer."""

import pytest

from corpuskit import errors
from corpuskit.morphology import (Dictionary, default_feature_map, default_ruleset,
                                  export_unimorph, generate_paradigm, import_unimorph,
                                  load_ruleset, unimorph_triples)
from corpuskit.registry import default_registry

from conftest import add_shine_verbs, build_random_corpus

FIG6_FORMS = {
    ("Indicative, Presence, Positive, 1st, Sg", "hoštan"),
    ("Indicative, Presence, Positive, 2nd, Sg", "hoštad"),
    ("Indicative, Presence, Positive, 3rd, Sg", "hoštab"),
    ("Indicative, Presence, Positive, 1st, Pl", "hoštam"),
    ("Indicative, Presence, Positive, 2nd, Pl", "hoštat"),
    ("Indicative, Presence, Positive, 3rd, Pl", "hoštaba"),
    ("Sg, Connegative", "hošta"),
    ("Pl, Connegative", "hošttoi"),
}


@pytest.fixture
def registry():
    return default_registry()


@pytest.fixture
def templates(registry):
    return default_ruleset(registry)


class TestRuleset:
    def test_shipped_verb_template_has_nine_rows(self, templates):
        verb = templates.get("vep-verb-ta")
        assert verb is not None
        assert len(verb.rows) == 9

    def test_shipped_nominal_template_row_count(self, templates):
        noun = templates.get("vep-noun")
        assert len(noun.rows) == 30

    def test_undefined_stem(self, registry):
        doc = """
templates:
  - id: broken
    language: vep
    pos: Verb
    lemma_pattern: "ta"
    stems:
      base: {strip: "ta", append: ""}
    rows:
      - {gramset: [Infinitive], stem: weak, suffix: "ta"}
"""
        with pytest.raises(errors.UndefinedStem):
            load_ruleset(doc, registry)

    def test_unknown_grammeme(self, registry):
        doc = """
templates:
  - id: broken
    language: vep
    pos: Verb
    lemma_pattern: "ta"
    stems: {base: {strip: "ta", append: ""}}
    rows:
      - {gramset: [Imaginary], stem: base, suffix: "x"}
"""
        with pytest.raises(errors.UnknownGrammeme):
            load_ruleset(doc, registry)

    def test_duplicate_gramset_row(self, registry):
        doc = """
templates:
  - id: broken
    language: vep
    pos: Verb
    lemma_pattern: "ta"
    stems: {base: {strip: "ta", append: ""}}
    rows:
      - {gramset: [Infinitive], stem: base, suffix: "ta"}
      - {gramset: [Infinitive], stem: base, suffix: "da"}
"""
        with pytest.raises(errors.ParseError):
            load_ruleset(doc, registry)

    def test_empty_document(self, registry):
        assert len(load_ruleset("", registry)) == 0


class TestGeneration:
    def test_fig6_paradigm(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        forms = d.generate(lemma.id)
        assert len(forms) == 9
        got = {(wf.gramset.label(), wf.surface) for wf in forms}
        assert FIG6_FORMS <= got
        infinitive = [wf for wf in forms if wf.gramset.label() == "Infinitive"]
        assert [wf.surface for wf in infinitive] == ["hoštta"]
        variety = registry.dialect_by_name("vep", "New written Veps").id
        assert all(wf.variety == variety for wf in forms)

    def test_no_template_match(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("olla", "olo", "Verb")  # no -ua match
        with pytest.raises(errors.NoTemplateMatch):
            d.generate(lemma.id)

    def test_nominal_row_count(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("kuld", "vep", "Noun")
        forms = d.generate(lemma.id)
        assert len(forms) == 30  # exactly the template's row count
        assert len({wf.gramset for wf in forms}) == 30

    def test_deterministic_order(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("muštta", "vep", "Verb")
        first = [(wf.gramset.label(), wf.surface) for wf in generate_paradigm(lemma, templates, registry)]
        second = [(wf.gramset.label(), wf.surface) for wf in generate_paradigm(lemma, templates, registry)]
        assert first == second
        template = templates.get("vep-verb-ta")
        assert [row.gramset for row in template.rows] == \
            [wf.gramset for wf in generate_paradigm(lemma, templates, registry)]

    def test_wordform_uniqueness_enforced(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("kuld", "vep", "Noun")
        gs = registry.make_gramset(["Nominative", "Pl"])
        d.add_wordform(lemma.id, gs, "kuldad")
        assert d.add_wordform(lemma.id, gs, "kuldad") is lemma.wordforms[0]
        with pytest.raises(errors.DuplicateWordform):
            d.add_wordform(lemma.id, gs, "kuldat")
        # same gramset under a different variety column is a separate cell
        variety = registry.dialect_by_name("vep", "Northern Veps").id
        d.add_wordform(lemma.id, gs, "kuudad", variety=variety)
        assert len(lemma.wordforms) == 2

    def test_regeneration_keeps_manual_forms(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        d.generate(lemma.id)
        manual = d.add_wordform(lemma.id, registry.make_gramset(["Imperative", "2nd", "Sg"]),
                                "hošta!")
        d.generate(lemma.id)
        assert manual in lemma.wordforms
        assert len(lemma.wordforms) == 10


class TestAnalyze:
    def test_fig6_row(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        d.generate(lemma.id)
        hits = d.analyze("hoštab")
        assert len(hits) == 1
        hit_lemma, gramset, variety = hits[0]
        assert hit_lemma.surface == "hoštta"
        assert gramset.label() == "Indicative, Presence, Positive, 3rd, Sg"
        assert registry.dialects[variety].name == "New written Veps"

    def test_case_insensitive(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        d.generate(lemma.id)
        assert d.analyze("Hoštab") == d.analyze("hoštab")

    def test_unknown(self, registry, templates):
        assert Dictionary(registry, templates).analyze("zzz") == []

    def test_dictionary_form_fallback(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("i", "vep", "Conjunction")
        hits = d.analyze("i")
        assert [(h[0].id, len(h[1])) for h in hits] == [(lemma.id, 0)]

    def test_no_duplicate_for_infinitive(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        d.generate(lemma.id)
        hits = d.analyze("hoštta")
        # infinitive row only; no extra bare dictionary-form reading
        assert len(hits) == 1
        assert hits[0][1].label() == "Infinitive"

    def test_homographs_all_returned(self, registry, templates):
        d = Dictionary(registry, templates)
        a = d.add_lemma("muštta", "vep", "Verb")
        b = d.add_lemma("muštta", "vep", "Verb")
        d.generate(a.id)
        d.generate(b.id)
        hits = d.analyze("muštab")
        assert {h[0].id for h in hits} == {a.id, b.id}


class TestLemmaCrud:
    def test_add_and_retrieve(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        d.upsert_meaning(lemma.id, 1, {"Russian": "блестеть", "English": "to shine"})
        assert d.lemma(lemma.id).surface == "hoštta"
        assert d.analyze("hoštta")[0][0].id == lemma.id

    def test_non_dense_ordinal(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        d.upsert_meaning(lemma.id, 1, {"English": "to shine"})
        with pytest.raises(errors.NonDenseOrdinal):
            d.upsert_meaning(lemma.id, 3, {"English": "x"})

    def test_unknown_language_or_pos(self, registry, templates):
        d = Dictionary(registry, templates)
        with pytest.raises(errors.UnknownLanguage):
            d.add_lemma("x", "fi", "Verb")
        with pytest.raises(errors.UnknownPos):
            d.add_lemma("x", "vep", "Werb")

    def test_translation_link_and_reverse(self, registry, templates):
        d = Dictionary(registry, templates)
        hoshtta = d.add_lemma("hoštta", "vep", "Verb")
        d.upsert_meaning(hoshtta.id, 1, {"English": "to shine"})
        kiildee = d.add_lemma("kiildää", "olo", "Verb")
        d.link_translation(hoshtta.id, 1, kiildee.id)
        assert d.reverse_translations(kiildee.id) == [(hoshtta.id, 1)]
        # scan oracle: every forward link appears in the reverse index
        for lemma in d.lemmas.values():
            for meaning in lemma.meanings:
                for ids in meaning.translation_links.values():
                    for target in ids:
                        assert (lemma.id, meaning.ordinal) in d._reverse_links[target]

    def test_link_unknown_target(self, registry, templates):
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("hoštta", "vep", "Verb")
        d.upsert_meaning(lemma.id, 1, {})
        with pytest.raises(errors.UnknownTarget):
            d.link_translation(lemma.id, 1, 999)


class TestUniMorph:
    def _fixture(self):
        from corpuskit.corpus import Corpus
        corpus = Corpus.with_defaults()
        add_shine_verbs(corpus)
        return corpus

    def test_hoshtab_row_byte_exact(self):
        corpus = self._fixture()
        out = export_unimorph(corpus.dictionary, "vep", corpus.feature_map)
        assert "hoštta\thoštab\tV;IND;PRS;3;SG\n" in out

    def test_export_shape(self):
        corpus = self._fixture()
        out = export_unimorph(corpus.dictionary, "vep", corpus.feature_map)
        lines = out.splitlines()
        assert len(lines) == 27  # three verbs x nine rows
        assert all(len(line.split("\t")) == 3 for line in lines)
        assert out.endswith("\n")

    def test_export_deterministic_and_sorted(self):
        corpus = self._fixture()
        a = export_unimorph(corpus.dictionary, "vep", corpus.feature_map)
        b = export_unimorph(corpus.dictionary, "vep", corpus.feature_map)
        assert a == b
        lemmas = [line.split("\t")[0] for line in a.splitlines()]
        assert lemmas == sorted(lemmas)

    def test_empty_dictionary_exports_nothing(self, registry, templates):
        d = Dictionary(registry, templates)
        assert export_unimorph(d, "vep", default_feature_map()) == ""

    def test_unmapped_grammeme(self, registry, templates):
        registry.add_grammeme("Exotic", "case2", ["Noun"])
        d = Dictionary(registry, templates)
        lemma = d.add_lemma("kuld", "vep", "Noun")
        d.add_wordform(lemma.id, registry.make_gramset(["case2:Exotic"]), "kuldx")
        with pytest.raises(errors.UnmappedGrammeme) as err:
            export_unimorph(d, "vep", default_feature_map())
        assert "Exotic" in str(err.value)

    def test_round_trip_triples(self):
        corpus = self._fixture()
        out = export_unimorph(corpus.dictionary, "vep", corpus.feature_map)
        fresh = Dictionary(corpus.registry)
        import_unimorph(out, "vep", corpus.feature_map, fresh)
        assert unimorph_triples(fresh, "vep") == unimorph_triples(corpus.dictionary, "vep")

    def test_round_trip_on_random_dictionary(self):
        corpus = build_random_corpus(seed=11, n_texts=2, min_word_tokens=50, n_lemmas=60)
        for language in ("vep", "olo"):
            out = export_unimorph(corpus.dictionary, language, corpus.feature_map)
            fresh = Dictionary(corpus.registry)
            import_unimorph(out, language, corpus.feature_map, fresh)
            assert unimorph_triples(fresh, language) == \
                unimorph_triples(corpus.dictionary, language)

    def test_malformed_row(self):
        corpus = self._fixture()
        with pytest.raises(errors.MalformedRow) as err:
            import_unimorph("one\ttwo", "vep", corpus.feature_map, corpus.dictionary)
        assert "line 1" in str(err.value)

    def test_unknown_feature(self):
        corpus = self._fixture()
        with pytest.raises(errors.UnknownFeature):
            import_unimorph("a\tb\tV;WAT", "vep", corpus.feature_map, corpus.dictionary)

    def test_nine_row_file_makes_nine_wordforms(self):
        corpus = self._fixture()
        out = export_unimorph(corpus.dictionary, "vep", corpus.feature_map)
        hoshtta_rows = "".join(line + "\n" for line in out.splitlines()
                               if line.startswith("hoštta\t"))
        assert hoshtta_rows.count("\n") == 9
        fresh = Dictionary(corpus.registry)
        import_unimorph(hoshtta_rows, "vep", corpus.feature_map, fresh)
        (lemma,) = fresh.lemmas.values()
        assert len(lemma.wordforms) == 9


class TestGenerationAnalysisRoundTrip:
    def test_all_generated_forms_analyze_back(self):
        corpus = build_random_corpus(seed=5, n_texts=2, min_word_tokens=50, n_lemmas=80)
        d = corpus.dictionary
        checked = 0
        for lemma in d.lemmas.values():
            for wf in lemma.wordforms:
                hits = d.analyze(wf.surface)
                assert any(h[0].id == lemma.id and h[1] == wf.gramset for h in hits), \
                    f"{wf.surface} of {lemma.surface} not recovered"
                checked += 1
        assert checked > 1000
