import pytest
from hypothesis import given, strategies as st

from lexcov.delaf import (
    DictEntry,
    RoleTag,
    canonicalize_line,
    load_dict_file,
    parse_entry,
    save_dict_file,
    serialize_entry,
)
from lexcov.errors import MalformedEntry


class TestParseEntry:
    def test_verb_form(self):
        entry = parse_entry("sambou,sambar.V:J3s")
        assert entry == DictEntry("sambou", "sambar", "V", (), ("J3s",))

    def test_empty_lemma_means_surface_form(self):
        entry = parse_entry("atrás,.ADV")
        assert entry.surface_form == "atrás"
        assert entry.lemma == "atrás"
        assert entry.gram_code == "ADV"
        assert entry.sem_traits == () and entry.flex_codes == ()

    def test_sem_traits(self):
        entry = parse_entry("do,.PREPXD+Art+Def:ms")
        assert entry.gram_code == "PREPXD"
        assert entry.sem_traits == ("Art", "Def")
        assert entry.flex_codes == ("ms",)

    def test_imperfect(self):
        entry = parse_entry("corria,correr.V:I1s")
        assert entry.lemma == "correr"
        assert entry.flex_codes == ("I1s",)

    def test_multiple_flex_readings(self):
        entry = parse_entry("corria,correr.V:I1s:I3s")
        assert entry.flex_codes == ("I1s", "I3s")

    def test_escaped_comma(self):
        entry = parse_entry(r"bate\,boca,.N:ms")
        assert entry.surface_form == "bate,boca"

    def test_escaped_backslash(self):
        entry = parse_entry(r"a\\b,.N")
        assert entry.surface_form == "a\\b"

    def test_multiword(self):
        assert parse_entry("por exemplo,.ADV").is_multiword()
        assert not parse_entry("exemplo,.N:ms").is_multiword()

    @pytest.mark.parametrize(
        "bad",
        [
            "no separators at all",
            "semcomma.V",
            "form,lemma no dot",
            ",.V",
            "form,lemma.",
            "x,.V+",
            "x,.V:",
            "x,.V:a:",
            "trailing\\",
        ],
    )
    def test_malformed(self, bad):
        with pytest.raises(MalformedEntry):
            parse_entry(bad)

    def test_error_carries_line_and_column(self):
        with pytest.raises(MalformedEntry) as exc:
            parse_entry("semvirgula.V", line_number=7)
        assert exc.value.line == "semvirgula.V"
        assert exc.value.line_number == 7


class TestSerializeEntry:
    def test_lemma_equal_to_form_is_elided(self):
        assert serialize_entry(DictEntry("atrás", "atrás", "ADV")) == "atrás,.ADV"

    def test_minimal(self):
        assert serialize_entry(DictEntry("x", "x", "N")) == "x,.N"

    def test_comma_reescaped(self):
        entry = DictEntry("bate,boca", "bate,boca", "N", (), ("ms",))
        assert serialize_entry(entry) == r"bate\,boca,.N:ms"


ENTRY_CHARS = st.text(
    alphabet="abçõé, \\",
    min_size=1,
).filter(lambda s: s.strip())


class TestRoundTrip:
    def test_fixture_file_round_trips(self, fixtures_dir):
        for name in ("neymar.dic", "sample.dic", "compounds.dic"):
            for line in (fixtures_dir / name).read_text().splitlines():
                if line.strip():
                    assert serialize_entry(parse_entry(line)) == canonicalize_line(line)
                    # these fixtures are already canonical
                    assert canonicalize_line(line) == line

    @given(
        form=ENTRY_CHARS,
        lemma=st.one_of(st.just(""), ENTRY_CHARS),
        gram=st.text(alphabet="VNA", min_size=1, max_size=4),
        sems=st.lists(st.text(alphabet="DefArt", min_size=1, max_size=4), max_size=3),
        flexes=st.lists(st.text(alphabet="J3sm", min_size=1, max_size=3), max_size=3),
    )
    def test_serialize_parse_identity(self, form, lemma, gram, sems, flexes):
        entry = DictEntry(form, lemma or form, gram, tuple(sems), tuple(flexes))
        assert parse_entry(serialize_entry(entry)) == entry


class TestDictFile:
    def test_load_fixture(self, fixtures_dir):
        dfile = load_dict_file(fixtures_dir / "neymar.dic")
        assert len(dfile.entries) == 12
        assert dfile.role_tag is RoleTag.GENERAL

    def test_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "d.dic"
        path.write_text("a,.N\n\nb,.N\n\n", encoding="utf-8")
        assert len(load_dict_file(path).entries) == 2

    def test_bom_tolerated(self, tmp_path):
        path = tmp_path / "d.dic"
        path.write_bytes("﻿a,.N\n".encode("utf-8"))
        assert load_dict_file(path).entries[0].surface_form == "a"

    def test_crlf_tolerated(self, tmp_path):
        path = tmp_path / "d.dic"
        path.write_bytes(b"a,.N\r\nb,.N\r\n")
        assert len(load_dict_file(path).entries) == 2

    def test_malformed_line_number_reported(self, tmp_path):
        path = tmp_path / "d.dic"
        path.write_text("a,.N\nbad line without dot\n", encoding="utf-8")
        with pytest.raises(MalformedEntry) as exc:
            load_dict_file(path)
        assert exc.value.line_number == 2

    def test_save_is_canonical_sorted(self, tmp_path, fixtures_dir):
        dfile = load_dict_file(fixtures_dir / "sample.dic")
        out = tmp_path / "out.dic"
        save_dict_file(dfile, out)
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines == sorted(lines)
        assert len(lines) == len(dfile.entries)
