from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def neymar_lexicon():
    from lexcov.automaton import compile_lexicon
    from lexcov.delaf import load_dict_file

    return compile_lexicon([load_dict_file(FIXTURES / "neymar.dic")])
