import random

import pytest

from ibismeet.canonical import canonical_bytes, meeting_from_bytes
from ibismeet.errors import GrammarError, NotFoundError, StoreError
from ibismeet.store import Store

from conftest import load_m1
from oracles import random_argued_meeting, random_noisy_meeting


def test_canonical_bytes_round_trip_fixture(m1):
    blob = canonical_bytes(m1)
    again = meeting_from_bytes(blob)
    assert again == m1
    assert canonical_bytes(again) == blob
    assert blob.endswith(b"\n")


def test_canonical_bytes_round_trip_random_meetings():
    for seed in range(25):
        rng = random.Random(seed)
        for meeting in (random_argued_meeting(rng), random_noisy_meeting(rng)):
            blob = canonical_bytes(meeting)
            assert meeting_from_bytes(blob) == meeting
            assert canonical_bytes(meeting_from_bytes(blob)) == blob


def test_canonical_rejects_garbage():
    with pytest.raises(StoreError, match="not a JSON meeting"):
        meeting_from_bytes(b"\x00\xff")
    with pytest.raises(StoreError):
        meeting_from_bytes(b'{"schema": "something-else"}')


def test_save_load_value_identity(tmp_path, m1):
    store = Store(tmp_path)
    digest = store.save_meeting(m1)
    assert store.load_meeting("M1") == m1
    assert store.etag("M1") == digest
    assert store.has_meeting("M1")
    assert store.list_meetings() == [
        {"id": "M1", "title": "Office move planning", "date": "2025-03-12", "episodes": 17}
    ]
    # Saving the same value is a no-op for the etag.
    assert store.save_meeting(load_m1()) == digest


def test_store_layout_and_atomicity(tmp_path, m1):
    store = Store(tmp_path)
    store.save_meeting(m1)
    assert (tmp_path / "meetings" / "M1.json").exists()
    assert (tmp_path / "manifest.json").exists()
    assert (tmp_path / "grammar.mds").exists()
    leftovers = [p for p in (tmp_path / "meetings").iterdir() if p.suffix == ".tmp"]
    assert leftovers == []


def test_corruption_is_named(tmp_path, m1):
    store = Store(tmp_path)
    store.save_meeting(m1)
    path = tmp_path / "meetings" / "M1.json"
    path.write_bytes(path.read_bytes()[:100])
    with pytest.raises(StoreError, match="meetings/M1.json"):
        store.load_meeting("M1")


def test_missing_file_and_unknown_id(tmp_path, m1):
    store = Store(tmp_path)
    with pytest.raises(NotFoundError):
        store.load_meeting("M1")
    store.save_meeting(m1)
    (tmp_path / "meetings" / "M1.json").unlink()
    with pytest.raises(StoreError, match="cannot read"):
        store.load_meeting("M1")


def test_manifest_schema_guard(tmp_path, m1):
    store = Store(tmp_path)
    store.save_meeting(m1)
    (tmp_path / "manifest.json").write_text('{"schema": "other", "meetings": {}}')
    with pytest.raises(StoreError, match="unsupported manifest schema"):
        store.load_meeting("M1")
    (tmp_path / "manifest.json").write_text("{broken")
    with pytest.raises(StoreError, match="unreadable manifest"):
        store.list_meetings()


def test_delete_meeting(tmp_path, m1):
    store = Store(tmp_path)
    store.save_meeting(m1)
    store.delete_meeting("M1")
    assert not store.has_meeting("M1")
    assert not (tmp_path / "meetings" / "M1.json").exists()
    with pytest.raises(NotFoundError):
        store.delete_meeting("M1")


def test_unsafe_ids_rejected(tmp_path, m1):
    from dataclasses import replace

    store = Store(tmp_path)
    with pytest.raises(StoreError, match="safe file name"):
        store.save_meeting(replace(m1, id="../evil"))


def test_grammar_persistence(tmp_path):
    store = Store(tmp_path)
    grammar = store.load_grammar()
    assert grammar.child_rules  # the packaged default was copied in
    text = "child MEETING DISCUSSION\nreply JUSTIFY DECISION\n"
    saved = store.save_grammar(text)
    assert store.grammar_text() == text
    assert store.load_grammar() == saved
    with pytest.raises(GrammarError):
        store.save_grammar("child ONLY\n")
    # A rejected save leaves the previous grammar in place.
    assert store.grammar_text() == text
