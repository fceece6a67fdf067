import random

import pytest
from hypothesis import given, settings, strategies as st

from lexcov.automaton import (
    CaseFoldPolicy,
    compile_lexicon,
    load_lexicon,
    save_lexicon,
    token_matches_form,
)
from lexcov.delaf import DictEntry, DictFile, RoleTag, parse_entry, serialize_entry
from lexcov.errors import CorruptFile, EmptyLexicon, FormatVersionMismatch
from lexcov.preprocess import tokenize

from oracles import minimal_state_count, oracle_lookup, oracle_match


def lex_from_lines(lines, role=RoleTag.GENERAL):
    return compile_lexicon([DictFile([parse_entry(l) for l in lines], role)])


def lex_from_forms(forms):
    return lex_from_lines([f"{f},.N" for f in forms])


class TestCompile:
    def test_neymar_subset(self, neymar_lexicon):
        lex = neymar_lexicon
        assert lex.stats.entry_count == 12
        # o x4, do x2, corria x2 collapse: 7 distinct surface forms
        assert lex.stats.unique_form_count == 7
        assert len(lex.lookup("corria")) == 2
        assert len(lex.lookup("do")) == 2
        assert len(lex.lookup("o")) == 4

    def test_single_entry_two_states(self):
        lex = lex_from_lines(["a,.N"])
        assert lex.stats.unique_form_count == 1
        assert lex.stats.analysis_count == 1
        assert lex.stats.state_count == 2

    def test_duplicate_lines_deduplicated(self):
        lex = lex_from_lines(["casa,.N:fs", "casa,.N:fs"])
        assert lex.stats.unique_form_count == 1
        assert len(lex.lookup("casa")) == 1

    def test_flex_alternatives_expand_to_separate_analyses(self):
        one_line = lex_from_lines(["corria,correr.V:I1s:I3s"])
        two_lines = lex_from_lines(["corria,correr.V:I1s", "corria,correr.V:I3s"])
        as_text = lambda lex: sorted(
            serialize_entry(lex.entry_for("corria", i)) for i in lex.lookup("corria")
        )
        assert as_text(one_line) == as_text(two_lines)

    def test_empty_raises(self):
        with pytest.raises(EmptyLexicon):
            compile_lexicon([DictFile([])])

    def test_unique_form_count_bounds(self):
        lex = lex_from_forms(["a", "b", "a"])
        assert lex.stats.unique_form_count <= lex.stats.entry_count
        assert lex.stats.unique_form_count == 2

    def test_role_tags_kept_per_analysis(self):
        general = DictFile([parse_entry("abs,.N")], RoleTag.GENERAL)
        abbrev = DictFile([parse_entry("abs,.N")], RoleTag.ABBREVIATIONS_ACRONYMS)
        lex = compile_lexicon([general, abbrev])
        (aid,) = lex.lookup("abs")
        assert lex.analysis_roles(aid) == {
            RoleTag.GENERAL,
            RoleTag.ABBREVIATIONS_ACRONYMS,
        }

    def test_1000_generated_forms_match_hash_map_oracle(self):
        rng = random.Random(7)
        forms = {
            "".join(rng.choice("abcdeãé") for _ in range(rng.randint(1, 9)))
            for _ in range(1400)
        }
        forms = sorted(forms)[:1000]
        lex = lex_from_forms(forms)
        member = set(forms)
        for form in forms:
            assert form in lex
            assert len(lex.lookup(form, CaseFoldPolicy.EXACT)) == 1
        probes = 0
        while probes < 1000:
            probe = "".join(rng.choice("abcdeãéx") for _ in range(rng.randint(1, 10)))
            if probe in member:
                continue
            probes += 1
            assert probe not in lex
            assert lex.lookup(probe, CaseFoldPolicy.EXACT) == frozenset()


class TestLookupPolicies:
    def test_exact_refuses_folding(self):
        lex = lex_from_forms(["time"])
        assert lex.lookup("TIME", CaseFoldPolicy.EXACT) == frozenset()
        assert lex.lookup("time", CaseFoldPolicy.EXACT) != frozenset()

    def test_unitex_like_sentence_initial_capital(self, neymar_lexicon):
        assert len(neymar_lexicon.lookup("O", CaseFoldPolicy.UNITEX_LIKE)) == 4
        assert neymar_lexicon.lookup("Neymar") == frozenset()

    def test_unitex_like_all_upper(self):
        lex = lex_from_forms(["time"])
        assert lex.lookup("TIME", CaseFoldPolicy.UNITEX_LIKE) != frozenset()

    def test_unitex_like_uppercase_form_matches_only_exactly(self):
        lex = lex_from_forms(["Brasil"])
        assert lex.lookup("Brasil") != frozenset()
        assert lex.lookup("brasil") == frozenset()
        assert lex.lookup("BRASIL") == frozenset()

    def test_full_fold(self):
        lex = lex_from_forms(["São", "paulo"])
        assert lex.lookup("são", CaseFoldPolicy.FULL_FOLD) != frozenset()
        assert lex.lookup("SÃO", CaseFoldPolicy.FULL_FOLD) != frozenset()
        assert lex.lookup("PAULO", CaseFoldPolicy.FULL_FOLD) != frozenset()

    def test_empty_token(self):
        lex = lex_from_forms(["a"])
        assert lex.lookup("") == frozenset()


ALPHABET = "abcdeoãéA BCO"


@settings(max_examples=200, deadline=None)
@given(
    forms=st.sets(st.text(alphabet="abcoãéABCO", min_size=1, max_size=8), min_size=1, max_size=60),
    probes=st.lists(st.text(alphabet="abcoãéABCO", min_size=1, max_size=8), max_size=30),
    policy=st.sampled_from(list(CaseFoldPolicy)),
)
def test_lookup_matches_oracle(forms, probes, policy):
    lex = lex_from_forms(sorted(forms))
    form_map = {f: {f} for f in forms}
    for probe in list(forms) + probes:
        got = {lex.entry_for(f, i).surface_form for f, ids in
               lex.lookup_forms(probe, policy).items() for i in ids}
        want = oracle_lookup(probe, form_map, policy.value)
        assert got == want, (probe, policy)


@settings(max_examples=100, deadline=None)
@given(
    token=st.text(alphabet="abÃçASß", min_size=1, max_size=6),
    form=st.text(alphabet="abÃçASß", min_size=1, max_size=6),
    policy=st.sampled_from(["exact", "unitex_like", "full_fold"]),
)
def test_token_matches_form_agrees_with_oracle(token, form, policy):
    assert token_matches_form(token, form, CaseFoldPolicy(policy)) == oracle_match(
        token, form, policy
    )


class TestMinimality:
    @pytest.mark.parametrize("seed", range(5))
    def test_state_count_is_minimal(self, seed):
        rng = random.Random(seed)
        forms = sorted(
            {
                "".join(rng.choice("abc") for _ in range(rng.randint(1, 7)))
                for _ in range(rng.randint(1, 800))
            }
        )[:1000]
        lex = lex_from_forms(forms)
        assert lex.stats.state_count == minimal_state_count(forms)

    def test_determinism_and_acyclicity(self):
        forms = ["ab", "abc", "b", "bc"]
        lex = lex_from_forms(forms)
        states = lex._states
        # deterministic by construction (dict edges); check acyclicity by DFS
        seen = set()

        def visit(s, path):
            assert s not in path
            if s in seen:
                return
            seen.add(s)
            for target, _ in states[s][1].values():
                visit(target, path | {s})

        visit(0, frozenset())

    def test_perfect_hash_indexes_are_sorted_ranks(self):
        forms = sorted({"a", "ab", "abc", "ba", "c", "ça"})
        lex = lex_from_forms(forms)
        assert [lex.word_index(f) for f in forms] == list(range(len(forms)))
        assert lex.iter_forms() == forms


class TestCompounds:
    def test_single_compound_match(self):
        lex = lex_from_lines(["por exemplo,.ADV"])
        tokens = tokenize("por exemplo vale").tokens
        matches = lex.match_compounds(tokens)
        assert len(matches) == 1
        span, form, ids = matches[0]
        assert span == 3 and form == "por exemplo"

    def test_no_compounds(self):
        lex = lex_from_forms(["por"])
        assert lex.match_compounds(tokenize("por exemplo").tokens) == []

    def test_overlapping_compounds_longest_first(self):
        lex = lex_from_lines(["a fim de,.PREP", "a fim,.ADJ"])
        tokens = tokenize("a fim de tudo").tokens
        matches = lex.match_compounds(tokens)
        assert [m[0] for m in matches] == [5, 3]
        assert [m[1] for m in matches] == ["a fim de", "a fim"]
        # brute-force over the entry list agrees
        brute = []
        for entry_form in ["a fim de", "a fim"]:
            words = entry_form.split(" ")
            window = [t.text for t in tokens if t.text != " "][: len(words)]
            if window == words:
                brute.append(entry_form)
        assert set(brute) == {m[1] for m in matches}

    def test_case_policy_applies_to_compounds(self):
        lex = lex_from_lines(["por exemplo,.ADV"])
        tokens = tokenize("Por exemplo sim").tokens
        assert lex.match_compounds(tokens, CaseFoldPolicy.UNITEX_LIKE)
        assert not lex.match_compounds(tokens, CaseFoldPolicy.EXACT)


class TestSaveLoad:
    def test_round_trip_neymar(self, neymar_lexicon, tmp_path):
        path = tmp_path / "lex.bin"
        save_lexicon(neymar_lexicon, path)
        loaded = load_lexicon(path)
        for form in neymar_lexicon.iter_forms():
            got = {serialize_entry(loaded.entry_for(form, i)) for i in loaded.lookup(form)}
            want = {
                serialize_entry(neymar_lexicon.entry_for(form, i))
                for i in neymar_lexicon.lookup(form)
            }
            assert got == want
        assert loaded.stats == neymar_lexicon.stats

    def test_compounds_survive_round_trip(self, tmp_path):
        lex = lex_from_lines(["por exemplo,.ADV", "por,.PREP"])
        path = tmp_path / "lex.bin"
        save_lexicon(lex, path)
        loaded = load_lexicon(path)
        assert loaded.match_compounds(tokenize("por exemplo").tokens)

    def test_truncated_file_is_corrupt(self, neymar_lexicon, tmp_path):
        path = tmp_path / "lex.bin"
        save_lexicon(neymar_lexicon, path)
        data = path.read_bytes()
        path.write_bytes(data[: len(data) - 7])
        with pytest.raises(CorruptFile):
            load_lexicon(path)

    def test_flipped_payload_byte_is_corrupt(self, neymar_lexicon, tmp_path):
        path = tmp_path / "lex.bin"
        save_lexicon(neymar_lexicon, path)
        data = bytearray(path.read_bytes())
        data[-1] ^= 0xFF
        path.write_bytes(bytes(data))
        with pytest.raises(CorruptFile):
            load_lexicon(path)

    def test_bumped_version_is_mismatch(self, neymar_lexicon, tmp_path):
        path = tmp_path / "lex.bin"
        save_lexicon(neymar_lexicon, path)
        data = bytearray(path.read_bytes())
        data[4] += 1  # low byte of the little-endian version
        path.write_bytes(bytes(data))
        with pytest.raises(FormatVersionMismatch):
            load_lexicon(path)

    def test_not_a_lexicon_file(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"junk")
        with pytest.raises(CorruptFile):
            load_lexicon(path)

    def test_build_is_byte_deterministic(self, fixtures_dir, tmp_path):
        from lexcov.delaf import load_dict_file

        for i in (1, 2):
            dicts = [load_dict_file(fixtures_dir / "neymar.dic")]
            save_lexicon(compile_lexicon(dicts), tmp_path / f"lex{i}.bin")
        assert (tmp_path / "lex1.bin").read_bytes() == (tmp_path / "lex2.bin").read_bytes()
