"""File-backed meeting store with checksummed manifest.

Layout under the store root:

    manifest.json           id -> {file, sha256}
    grammar.mds             the grammar in force (default copied on init)
    meetings/<id>.json      canonical meeting documents

Writes are atomic (temp file then rename) and the manifest is updated
last, so a crash never leaves a listed-but-missing meeting.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from importlib import resources
from pathlib import Path

from .canonical import canonical_bytes, dumps_canonical, meeting_from_bytes
from .errors import NotFoundError, StoreError
from .grammar import GrammarRuleSet, load_grammar, parse_grammar, serialize_grammar
from .model import Meeting

MANIFEST_SCHEMA = "ibismeet/store@1"
_SAFE_ID = re.compile(r"^[A-Za-z0-9._-]+$")


def _sha256(blob: bytes) -> str:
    return hashlib.sha256(blob).hexdigest()


def _atomic_write(path: Path, blob: bytes) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(blob)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Store:
    """One directory holding meetings, a grammar, and a manifest."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.meetings_dir = self.root / "meetings"
        self.manifest_path = self.root / "manifest.json"
        self.grammar_path = self.root / "grammar.mds"
        self.meetings_dir.mkdir(parents=True, exist_ok=True)
        if not self.manifest_path.exists():
            self._write_manifest({})
        if not self.grammar_path.exists():
            default = resources.files("ibismeet.data").joinpath("mds-default.grammar")
            _atomic_write(self.grammar_path, default.read_bytes())

    # Manifest bookkeeping.

    def _read_manifest(self) -> dict:
        try:
            data = json.loads(self.manifest_path.read_text("utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise StoreError(f"unreadable manifest: {exc}") from None
        if data.get("schema") != MANIFEST_SCHEMA:
            raise StoreError(f"unsupported manifest schema {data.get('schema')!r}")
        return data["meetings"]

    def _write_manifest(self, meetings: dict) -> None:
        _atomic_write(
            self.manifest_path,
            dumps_canonical({"schema": MANIFEST_SCHEMA, "meetings": meetings}),
        )

    # Meetings.

    def list_meetings(self) -> list[dict]:
        entries = []
        for meeting_id in sorted(self._read_manifest()):
            meeting = self.load_meeting(meeting_id)
            entries.append(
                {
                    "id": meeting.id,
                    "title": meeting.title,
                    "date": meeting.date,
                    "episodes": len(meeting.episodes),
                }
            )
        return entries

    def has_meeting(self, meeting_id: str) -> bool:
        return meeting_id in self._read_manifest()

    def save_meeting(self, meeting: Meeting) -> str:
        """Persist a meeting; returns the content checksum."""
        if not _SAFE_ID.match(meeting.id):
            raise StoreError(f"meeting id {meeting.id!r} is not a safe file name")
        blob = canonical_bytes(meeting)
        digest = _sha256(blob)
        path = self.meetings_dir / f"{meeting.id}.json"
        _atomic_write(path, blob)
        manifest = self._read_manifest()
        manifest[meeting.id] = {"file": f"meetings/{meeting.id}.json", "sha256": digest}
        self._write_manifest(manifest)
        return digest

    def load_meeting(self, meeting_id: str) -> Meeting:
        manifest = self._read_manifest()
        if meeting_id not in manifest:
            raise NotFoundError(f"no meeting {meeting_id!r} in store")
        entry = manifest[meeting_id]
        path = self.root / entry["file"]
        try:
            blob = path.read_bytes()
        except OSError as exc:
            raise StoreError(f"cannot read {entry['file']}: {exc}") from None
        if _sha256(blob) != entry["sha256"]:
            raise StoreError(f"{entry['file']} does not match its manifest checksum")
        meeting = meeting_from_bytes(blob)
        if meeting.id != meeting_id:
            raise StoreError(f"{entry['file']} holds meeting {meeting.id!r}, not {meeting_id!r}")
        return meeting

    def delete_meeting(self, meeting_id: str) -> None:
        manifest = self._read_manifest()
        if meeting_id not in manifest:
            raise NotFoundError(f"no meeting {meeting_id!r} in store")
        entry = manifest.pop(meeting_id)
        self._write_manifest(manifest)
        path = self.root / entry["file"]
        if path.exists():
            path.unlink()

    def etag(self, meeting_id: str) -> str:
        manifest = self._read_manifest()
        if meeting_id not in manifest:
            raise NotFoundError(f"no meeting {meeting_id!r} in store")
        return manifest[meeting_id]["sha256"]

    # Grammar.

    def load_grammar(self) -> GrammarRuleSet:
        return load_grammar(self.grammar_path)

    def grammar_text(self) -> str:
        return self.grammar_path.read_text("utf-8")

    def save_grammar(self, text: str) -> GrammarRuleSet:
        """Validate and persist grammar text; rejects unparsable input."""
        grammar = parse_grammar(text)
        if not text.endswith("\n"):
            text += "\n"
        _atomic_write(self.grammar_path, text.encode("utf-8"))
        return grammar

    def save_grammar_rules(self, grammar: GrammarRuleSet) -> None:
        _atomic_write(self.grammar_path, serialize_grammar(grammar).encode("utf-8"))
