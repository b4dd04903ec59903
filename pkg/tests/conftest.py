import json
from pathlib import Path

import pytest

from ibismeet.grammar import load_grammar
from ibismeet.indexing import build_indexes
from ibismeet.mds import apply_edits
from ibismeet.transcript import parse_transcript

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_m1():
    meeting = parse_transcript(
        (FIXTURES / "M1.tsv").read_text("utf-8"),
        title="Office move planning",
        date="2025-03-12",
    )
    edits = json.loads((FIXTURES / "M1.edits.json").read_text("utf-8"))
    return apply_edits(meeting, edits)


@pytest.fixture(scope="session")
def m1():
    return load_m1()


@pytest.fixture(scope="session")
def grammar():
    return load_grammar()


@pytest.fixture(scope="session")
def m1_index(m1):
    return build_indexes([m1])
