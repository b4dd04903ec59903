"""Canonical JSON form of a meeting.

The byte form is what the store persists and the service serves:
pretty-printed JSON with sorted keys and a trailing newline, so that
equal meetings always serialize to equal bytes.
"""
from __future__ import annotations

import json

from .errors import ModelError, StoreError
from .model import (
    ArgLabel,
    Document,
    Episode,
    Meeting,
    Participant,
    ReplyToEdge,
    Turn,
    Utterance,
)

SCHEMA = "ibismeet/meeting@1"


def meeting_to_dict(meeting: Meeting) -> dict:
    return {
        "schema": SCHEMA,
        "id": meeting.id,
        "title": meeting.title,
        "date": meeting.date,
        "participants": [
            {"id": p.id, "name": p.name, "role": p.role} for p in meeting.participants
        ],
        "utterances": [
            {
                "id": u.id,
                "speaker": u.speaker,
                "start": u.start,
                "end": u.end,
                "text": u.text,
                "modality": u.modality,
                "da_tags": list(u.da_tags),
            }
            for u in meeting.utterances
        ],
        "turns": [
            {"id": t.id, "speaker": t.speaker, "utterances": list(t.utterances)}
            for t in meeting.turns
        ],
        "episodes": [
            {
                "id": e.id,
                "category": e.label.category,
                "parameter": e.label.parameter,
                "topic": e.label.topic,
                "turn_span": list(e.turn_span) if e.turn_span else None,
                "children": list(e.children),
                "attributed_speaker": e.attributed_speaker,
                "target": e.target,
            }
            for e in meeting.episodes
        ],
        "root": meeting.root,
        "reply_to": [
            {"source": edge.source, "targets": list(edge.targets)} for edge in meeting.reply_to
        ],
        "documents": [
            {"id": d.id, "title": d.title, "text": d.text} for d in meeting.documents
        ],
    }


def meeting_from_dict(data: dict) -> Meeting:
    if not isinstance(data, dict):
        raise StoreError("meeting document must be a JSON object")
    if data.get("schema") != SCHEMA:
        raise StoreError(f"unsupported schema {data.get('schema')!r}")
    try:
        meeting = Meeting(
            id=data["id"],
            title=data["title"],
            date=data["date"],
            participants=tuple(
                Participant(id=p["id"], name=p["name"], role=p.get("role"))
                for p in data["participants"]
            ),
            utterances=tuple(
                Utterance(
                    id=u["id"],
                    speaker=u["speaker"],
                    start=float(u["start"]),
                    end=float(u["end"]),
                    text=u["text"],
                    modality=u["modality"],
                    da_tags=tuple(u["da_tags"]),
                )
                for u in data["utterances"]
            ),
            turns=tuple(
                Turn(id=t["id"], speaker=t["speaker"], utterances=tuple(t["utterances"]))
                for t in data["turns"]
            ),
            episodes=tuple(
                Episode(
                    id=e["id"],
                    label=ArgLabel(
                        category=e["category"],
                        parameter=e.get("parameter"),
                        topic=e.get("topic"),
                    ),
                    turn_span=tuple(e["turn_span"]) if e.get("turn_span") else None,
                    children=tuple(e["children"]),
                    attributed_speaker=e.get("attributed_speaker"),
                    target=e.get("target"),
                )
                for e in data["episodes"]
            ),
            root=data["root"],
            reply_to=tuple(
                ReplyToEdge(source=r["source"], targets=tuple(r["targets"]))
                for r in data["reply_to"]
            ),
            documents=tuple(
                Document(id=d["id"], title=d["title"], text=d["text"])
                for d in data.get("documents", [])
            ),
        )
    except (KeyError, TypeError, ModelError) as exc:
        raise StoreError(f"malformed meeting document: {exc}") from None
    _check_references(meeting)
    return meeting


def _check_references(meeting: Meeting) -> None:
    utterance_ids = {u.id for u in meeting.utterances}
    turn_ids = {t.id for t in meeting.turns}
    episode_ids = {e.id for e in meeting.episodes}
    for turn in meeting.turns:
        for utt_id in turn.utterances:
            if utt_id not in utterance_ids:
                raise StoreError(f"turn {turn.id} references unknown utterance {utt_id!r}")
    for episode in meeting.episodes:
        if episode.turn_span is not None:
            for turn_id in episode.turn_span:
                if turn_id not in turn_ids:
                    raise StoreError(f"episode {episode.id} references unknown turn {turn_id!r}")
        for child in episode.children:
            if child not in episode_ids:
                raise StoreError(f"episode {episode.id} references unknown child {child!r}")
    for edge in meeting.reply_to:
        for episode_id in (edge.source, *edge.targets):
            if episode_id not in episode_ids:
                raise StoreError(f"reply edge references unknown episode {episode_id!r}")
    parents: dict[str, str] = {}
    for episode in meeting.episodes:
        for child in episode.children:
            if child in parents:
                raise StoreError(f"episode {child} has two parents")
            parents[child] = episode.id
    if meeting.root in parents:
        raise StoreError(f"root {meeting.root} must not have a parent")


def canonical_bytes(meeting: Meeting) -> bytes:
    return dumps_canonical(meeting_to_dict(meeting))


def dumps_canonical(data: dict) -> bytes:
    return (json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def meeting_from_bytes(blob: bytes) -> Meeting:
    try:
        data = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise StoreError(f"not a JSON meeting document: {exc}") from None
    return meeting_from_dict(data)
