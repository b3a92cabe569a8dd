import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from helpers import toy_vocab, write_vocab  # noqa: E402


@pytest.fixture(scope="session")
def vocab():
    return toy_vocab()


@pytest.fixture(scope="session")
def vocab_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("vocab") / "vocab.txt"
    write_vocab(path)
    return path
