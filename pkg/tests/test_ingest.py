"""Encoding normalization, segmentation, tokenization, alignment."""

import unicodedata

import pytest
from hypothesis import given, settings, strategies as st

from corpuskit import errors
from corpuskit.corpus import meta_from_document
from corpuskit.ingest import (NUMBER, PUNCTUATION, WORD, RawDocument,
                              align_translation, build_doc, lookup_key,
                              normalize_text, segment, segment_sentences, tokenize)
from corpuskit.registry import default_registry


class TestNormalize:
    def test_utf8_identity(self):
        assert normalize_text(RawDocument("hoštab".encode("utf-8"))) == "hoštab"

    def test_nfc_composition(self):
        decomposed = "š"  # s + combining caron
        assert normalize_text(RawDocument(decomposed.encode("utf-8"))) == "š"

    def test_bom_stripped(self):
        data = b"\xef\xbb\xbf" + "kuld".encode("utf-8")
        assert normalize_text(RawDocument(data, "UTF-8-BOM")) == "kuld"
        assert normalize_text(RawDocument(data, "utf-8")) == "kuld"

    def test_windows_1251_against_codec_oracle(self):
        # sample Russian translation string; oracle is the stdlib codec itself
        text = "Из бересты плетут"
        data = text.encode("cp1251")
        assert normalize_text(RawDocument(data, "Windows-1251")) == \
            unicodedata.normalize("NFC", data.decode("cp1251"))

    def test_line_endings(self):
        assert normalize_text(RawDocument(b"a\r\nb\rc")) == "a\nb\nc"

    def test_unsupported_encoding(self):
        with pytest.raises(errors.UnsupportedEncoding):
            normalize_text(RawDocument(b"x", "koi8-r"))

    def test_decode_error(self):
        with pytest.raises(errors.DecodeError):
            normalize_text(RawDocument(b"\xff\xfe\xfd", "utf-8"))


class TestSegmentation:
    def test_empty(self):
        assert segment_sentences("") == []

    def test_single_sentence(self):
        text = "Minä olen rodinuh Čil'miel'e."
        assert segment_sentences(text) == [(0, len(text))]

    def test_abbreviations(self):
        text = "A. B. tuli. Häi lähti!"
        spans = segment_sentences(text, {"A.", "B."})
        assert [text[a:b] for a, b in spans] == ["A. B. tuli.", "Häi lähti!"]

    def test_ellipsis_variants(self):
        text = "Tuahes luajitah... Sit pajatimmo… Ka."
        spans = segment_sentences(text)
        assert [text[a:b] for a, b in spans] == \
            ["Tuahes luajitah...", "Sit pajatimmo…", "Ka."]

    def test_trailing_text_without_terminator(self):
        text = "Üks kaks.  kolme nell"
        spans = segment_sentences(text)
        assert [text[a:b] for a, b in spans] == ["Üks kaks.", "kolme nell"]

    @settings(max_examples=200)
    @given(st.text(alphabet="aä šb.!?… \n'", max_size=60))
    def test_partition_property(self, text):
        spans = segment_sentences(text)
        non_ws = [ch for ch in text if not ch.isspace()]
        covered = []
        prev_end = -1
        for start, end in spans:
            assert start < end
            assert prev_end <= start
            assert not text[start].isspace() and not text[end - 1].isspace()
            covered.extend(ch for ch in text[start:end] if not ch.isspace())
            prev_end = end
        assert covered == non_ws


class TestTokenize:
    def test_internal_apostrophes(self):
        tokens = tokenize("Čil'miel'e")
        assert [t.surface for t in tokens] == ["Čil'miel'e"]
        assert tokens[0].kind == WORD

    def test_proverb(self):
        tokens = tokenize("Ei ole kaik kuld, mi kuštab,")
        words = [t.surface for t in tokens if t.kind == WORD]
        puncts = [t for t in tokens if t.kind == PUNCTUATION]
        assert words == ["Ei", "ole", "kaik", "kuld", "mi", "kuštab"]
        assert len(puncts) == 2

    def test_digit_runs(self):
        tokens = tokenize("1949–1961")
        assert [(t.surface, t.kind) for t in tokens] == \
            [("1949", NUMBER), ("–", PUNCTUATION), ("1961", NUMBER)]

    def test_hyphen_joins_between_letters(self):
        assert [t.surface for t in tokenize("sana-sana")] == ["sana-sana"]
        assert [t.surface for t in tokenize("sana -")] == ["sana", "-"]

    def test_word_index_dense(self):
        tokens = tokenize("kuld, hobed 3 hoštab.")
        indexed = [t.word_index for t in tokens if t.kind == WORD]
        assert indexed == [0, 1, 2]
        assert all(t.word_index is None for t in tokens if t.kind != WORD)

    def test_case_preserved(self):
        token = tokenize("HOŠTAB")[0]
        assert token.surface == "HOŠTAB"
        assert lookup_key(token.surface) == "hoštab"

    @settings(max_examples=200)
    @given(st.text(alphabet="aäö š,.’'-–!?1209Kk\n", max_size=80))
    def test_reconstruction_round_trip(self, text):
        tokens = tokenize(text)
        # surfaces at their spans reproduce the text; gaps are whitespace
        rebuilt = list(text)
        prev_end = 0
        for t in tokens:
            start, end = t.span
            assert text[start:end] == t.surface
            assert all(ch.isspace() for ch in text[prev_end:start])
            prev_end = end
        assert all(ch.isspace() for ch in text[prev_end:])
        assert tokenize(text) == tokens  # deterministic

    @settings(max_examples=100)
    @given(st.text(alphabet="aäkuls šb.! ", max_size=80))
    def test_spans_strictly_increasing(self, text):
        tokens = tokenize(text)
        for a, b in zip(tokens, tokens[1:]):
            assert a.span[1] <= b.span[0]
            assert a.position + 1 == b.position


class TestAlignment:
    def _doc(self, text="Kuld hoštab. Hobed hoštab."):
        registry = default_registry()
        meta = meta_from_document(registry, {
            "title": "t", "language": "vep", "corpus_type": "Folklore texts"})
        return build_doc(1, text, meta, registry)

    def test_strict_attach(self):
        doc = self._doc("Ei ole kaik kuld, mi kuštab.")
        align_translation(doc, ["Не всё золото, что блестит."])
        assert doc.sentences[0].translation == "Не всё золото, что блестит."

    def test_strict_mismatch(self):
        doc = self._doc()
        with pytest.raises(errors.CountMismatch):
            align_translation(doc, ["одно"])

    def test_partial_fills_prefix(self):
        doc = self._doc()
        align_translation(doc, ["одно"], mode="partial")
        assert doc.sentences[0].translation == "одно"
        assert doc.sentences[1].translation is None

    def test_extra_translations_rejected(self):
        doc = self._doc("Üks.")
        with pytest.raises(errors.CountMismatch):
            align_translation(doc, ["a", "b"], mode="partial")


class TestCorpusIngest:
    def test_same_raw_ingested_twice_keeps_both(self):
        from corpuskit.corpus import Corpus, meta_from_document
        corpus = Corpus.with_defaults()
        meta = meta_from_document(corpus.registry, {
            "title": "Variant", "language": "vep", "corpus_type": "Folklore texts"})
        a = corpus.ingest_text("Kuld hoštab.", meta)
        b = corpus.ingest_text("Kuld hoštab.", meta)
        assert a.id != b.id
        assert len(corpus.texts) == 2  # near-duplicate folklore variants are legal

    def test_concurrent_ingest_ids_unique(self):
        import threading

        from corpuskit.corpus import Corpus, meta_from_document
        corpus = Corpus.with_defaults()
        meta = meta_from_document(corpus.registry, {
            "title": "T", "language": "vep", "corpus_type": "Folklore texts"})
        ids = []

        def worker():
            for _ in range(20):
                ids.append(corpus.ingest_text("Kuld hoštab.", meta).id)

        threads = [threading.Thread(target=worker) for _ in range(8)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert len(ids) == 160
        assert len(set(ids)) == 160


class TestBuildDoc:
    def test_meta_validated(self):
        registry = default_registry()
        narrative = registry.genre_by_name("Narrative")
        law = registry.corpus_type_by_name("Law")
        from corpuskit.registry import TextMeta
        meta = TextMeta(title="x", language="vep", corpus_type=law.id,
                        genre=narrative.id)
        with pytest.raises(errors.InvalidMeta):
            build_doc(1, "Kuld.", meta, registry)

    def test_token_spans_absolute(self):
        doc = self._simple("Kuld hoštab. Hobed läikkü.")
        for sentence in doc.sentences:
            for token in sentence.tokens:
                start, end = token.span
                assert doc.normalized_text[start:end] == token.surface
                assert sentence.span[0] <= start < end <= sentence.span[1]

    def test_sentence_indexes_dense(self):
        doc = self._simple("A kuld. B kuld. C kuld.")
        assert [s.index for s in doc.sentences] == [0, 1, 2]

    @staticmethod
    def _simple(text):
        registry = default_registry()
        meta = meta_from_document(registry, {
            "title": "t", "language": "vep", "corpus_type": "Folklore texts"})
        return build_doc(1, text, meta, registry)
