import unicodedata

from hypothesis import given, settings, strategies as st

from lexcov.preprocess import (
    TokenKind,
    normalize_delimiters,
    reform_normalize,
    segment_sentences,
    tokenize,
)


def words_of(text):
    return [t.text for t in tokenize(text).tokens if t.kind is TokenKind.WORD]


class TestNormalizeDelimiters:
    def test_crlf(self):
        assert normalize_delimiters("a\r\nb") == "a\nb"
        assert normalize_delimiters("a\rb") == "a\nb"

    def test_space_runs_collapse(self):
        assert normalize_delimiters("a   b") == "a b"
        assert normalize_delimiters("a\t b") == "a b"

    def test_nfc(self):
        decomposed = "é"
        assert normalize_delimiters(decomposed) == "é"
        assert unicodedata.is_normalized("NFC", normalize_delimiters("açaí"))

    def test_control_chars_removed(self):
        assert normalize_delimiters("a\x00b\x1fc") == "abc"
        assert normalize_delimiters("a\nb") == "a\nb"

    @given(st.text(max_size=200))
    def test_idempotent(self, text):
        once = normalize_delimiters(text)
        assert normalize_delimiters(once) == once


class TestTokenize:
    def test_example_sentence(self):
        assert words_of("O time de Neymar corria atrás do prejuízo") == [
            "O", "time", "de", "Neymar", "corria", "atrás", "do", "prejuízo",
        ]

    def test_hyphenated_clitic_splits(self):
        tokens = tokenize("abordá-lo").tokens
        assert [(t.kind, t.text) for t in tokens] == [
            (TokenKind.WORD, "abordá"),
            (TokenKind.PUNCT, "-"),
            (TokenKind.WORD, "lo"),
        ]

    def test_numbers(self):
        kinds = [(t.kind, t.text) for t in tokenize("70 anos").tokens]
        assert kinds == [
            (TokenKind.NUMBER, "70"),
            (TokenKind.SPACE, " "),
            (TokenKind.WORD, "anos"),
        ]

    def test_empty(self):
        stream = tokenize("")
        assert stream.tokens == [] and stream.word_token_count == 0

    def test_word_tokens_have_no_digits(self):
        for tok in tokenize("covid19 x2y").tokens:
            if tok.kind is TokenKind.WORD:
                assert not any(ch.isdigit() for ch in tok.text)

    def test_byte_spans_partition_the_text(self):
        text = "Olá, 70 anos…"
        stream = tokenize(text)
        pos = 0
        data = text.encode("utf-8")
        for tok in stream.tokens:
            start, end = tok.byte_span
            assert start == pos
            assert data[start:end].decode("utf-8") == tok.text
            pos = end
        assert pos == len(data)

    @settings(max_examples=300)
    @given(st.text(max_size=300))
    def test_lossless_on_arbitrary_text(self, text):
        assert "".join(t.text for t in tokenize(text).tokens) == text


class TestSegmentSentences:
    def segment(self, text, abbrevs=()):
        return segment_sentences(tokenize(normalize_delimiters(text)), abbrevs)

    def test_two_sentences(self):
        stream = self.segment("Fui lá. Voltei.")
        words = stream.word_tokens()
        assert [t.sentence_index for t in words] == [0, 0, 1]
        assert [t.sentence_initial for t in words] == [True, False, True]

    def test_abbreviation_suppresses_boundary(self):
        stream = self.segment("Sr. Silva chegou.", abbrevs=["Sr."])
        assert {t.sentence_index for t in stream.word_tokens()} == {0}

    def test_single_initial_suppresses_boundary(self):
        stream = self.segment("J. Silva chegou.")
        assert {t.sentence_index for t in stream.word_tokens()} == {0}

    def test_lowercase_continuation_is_not_boundary(self):
        stream = self.segment("www.exemplo.com caiu")
        assert {t.sentence_index for t in stream.word_tokens()} == {0}

    def test_excerpt_boundaries(self):
        # three sentences: "...com abadá. A proposta aqui é incluir. É ter mais..."
        text = (
            "Desfilará sem cordas, mas com os foliões devidamente trajados "
            "com abadá. A proposta aqui é incluir. É ter mais pessoas "
            "brincando nas ruas."
        )
        stream = self.segment(text)
        words = stream.word_tokens()
        assert max(t.sentence_index for t in words) == 2
        initials = [t.text for t in words if t.sentence_initial]
        assert initials == ["Desfilará", "A", "É"]

    def test_exactly_one_initial_word_per_sentence(self):
        stream = self.segment("Um dois. Três! Quatro? Cinco…")
        per_sentence = {}
        for tok in stream.word_tokens():
            per_sentence.setdefault(tok.sentence_index, 0)
            per_sentence[tok.sentence_index] += tok.sentence_initial
        assert all(n == 1 for n in per_sentence.values())


def strip_marks(text):
    return "".join(
        ch
        for ch in unicodedata.normalize("NFD", text)
        if not unicodedata.combining(ch)
    )


class TestReformNormalize:
    def test_trema(self):
        assert reform_normalize("agüentar") == "aguentar"
        assert reform_normalize("freqüência") == "frequência"

    def test_open_diphthong_paroxytone(self):
        assert reform_normalize("idéia") == "ideia"
        assert reform_normalize("jibóia") == "jiboia"
        assert reform_normalize("assembléia") == "assembleia"
        assert reform_normalize("heróico") == "heroico"

    def test_final_syllable_diphthong_keeps_accent(self):
        assert reform_normalize("herói") == "herói"
        assert reform_normalize("anéis") == "anéis"
        assert reform_normalize("papéis") == "papéis"
        assert reform_normalize("dói") == "dói"

    def test_double_vowel_circumflex(self):
        assert reform_normalize("vôo") == "voo"
        assert reform_normalize("enjôo") == "enjoo"
        assert reform_normalize("crêem") == "creem"
        assert reform_normalize("vêem") == "veem"

    def test_i_u_after_diphthong(self):
        assert reform_normalize("feiúra") == "feiura"
        assert reform_normalize("baiúca") == "baiuca"
        # no diphthong before the accent: accent stays
        assert reform_normalize("saúde") == "saúde"
        assert reform_normalize("país") == "país"

    def test_fixed_points(self):
        for word in ("aguentar", "ideia", "voo", "creem", "feiura", "maçã", "você"):
            assert reform_normalize(word) == word

    @settings(max_examples=500)
    @given(st.text(alphabet="abcdefgilmnorstuvéóôêüúí", min_size=1, max_size=12))
    def test_idempotent_and_skeleton_preserving(self, word):
        once = reform_normalize(word)
        assert reform_normalize(once) == once
        assert strip_marks(once) == strip_marks(word)
