"""Transcript ingestion and the shallow dialogue model.

Turns TSV transcripts into meetings: utterances sorted by onset,
grouped into maximal same-speaker turns, under a single root episode.
Also hosts dialogue-act tagging and manual topic-shift marking.
"""
from __future__ import annotations

import difflib
from dataclasses import replace
from importlib import resources

from .errors import ModelError, NotFoundError, TranscriptError, VocabularyError
from .model import ArgLabel, Episode, Meeting, Participant, Turn, Utterance

TSV_COLUMNS = ("meeting_id", "utt_id", "speaker", "start_s", "end_s", "modality", "da_tags", "text")


def load_vocabulary(path=None) -> frozenset[str]:
    """Dialogue-act tag vocabulary: one tag per line, '#' comments."""
    if path is None:
        text = resources.files("ibismeet.data").joinpath("swbd-damsl.vocab").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    tags = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            tags.add(line)
    return frozenset(tags)


def _check_tags(tags, vocabulary) -> None:
    if vocabulary is None:
        return
    for tag in tags:
        if tag not in vocabulary:
            near = difflib.get_close_matches(tag, sorted(vocabulary), n=3)
            raise VocabularyError(tag, near)


def parse_transcript(
    text: str,
    *,
    vocabulary: frozenset[str] | None = None,
    title: str | None = None,
    date: str = "",
) -> Meeting:
    """Parse a TSV transcript into a shallow meeting.

    Expected columns: meeting_id, utt_id, speaker, start_s, end_s,
    modality, da_tags (comma-joined, may be empty), text.  Blank lines
    and lines starting with '#' are skipped.
    """
    utterances: list[Utterance] = []
    meeting_id: str | None = None
    seen_ids: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t", maxsplit=len(TSV_COLUMNS) - 1)
        if len(fields) != len(TSV_COLUMNS):
            raise TranscriptError(
                f"expected {len(TSV_COLUMNS)} tab-separated fields, got {len(fields)}", lineno
            )
        row = dict(zip(TSV_COLUMNS, fields))
        if meeting_id is None:
            meeting_id = row["meeting_id"]
        elif row["meeting_id"] != meeting_id:
            raise TranscriptError(
                f"meeting id changed from {meeting_id!r} to {row['meeting_id']!r}", lineno
            )
        if row["utt_id"] in seen_ids:
            raise TranscriptError(f"duplicate utterance id {row['utt_id']!r}", lineno)
        seen_ids.add(row["utt_id"])
        try:
            start, end = float(row["start_s"]), float(row["end_s"])
        except ValueError:
            raise TranscriptError("start_s and end_s must be numbers", lineno) from None
        tags = tuple(t.strip() for t in row["da_tags"].split(",") if t.strip())
        try:
            _check_tags(tags, vocabulary)
            utterance = Utterance(
                id=row["utt_id"],
                speaker=row["speaker"],
                start=start,
                end=end,
                text=row["text"],
                modality=row["modality"],
                da_tags=tags,
            )
        except (ModelError, VocabularyError) as exc:
            raise TranscriptError(str(exc), lineno) from None
        utterances.append(utterance)
    if not utterances:
        raise TranscriptError("transcript has no utterances")
    utterances.sort(key=lambda u: u.start)
    return assemble_meeting(meeting_id, tuple(utterances), title=title, date=date)


def assemble_meeting(
    meeting_id: str,
    utterances: tuple[Utterance, ...],
    *,
    title: str | None = None,
    date: str = "",
) -> Meeting:
    """Build the shallow model: turns plus a root episode over all of them."""
    turns = segment_turns(utterances)
    speakers: list[str] = []
    for u in utterances:
        if u.speaker not in speakers:
            speakers.append(u.speaker)
    root = Episode(
        id="e0",
        label=ArgLabel("MEETING"),
        turn_span=(turns[0].id, turns[-1].id),
    )
    return Meeting(
        id=meeting_id,
        title=title if title is not None else meeting_id,
        date=date,
        participants=tuple(Participant(id=s, name=s) for s in speakers),
        utterances=utterances,
        turns=turns,
        episodes=(root,),
        root=root.id,
    )


def segment_turns(utterances: tuple[Utterance, ...]) -> tuple[Turn, ...]:
    """Group utterances into maximal same-speaker runs.

    A new turn starts at every speaker change.  Silence utterances do
    not extend a run: each becomes its own turn.
    """
    if not utterances:
        raise ModelError("cannot segment an empty utterance list")
    for earlier, later in zip(utterances, utterances[1:]):
        if later.start < earlier.start:
            raise ModelError(f"{later.id}: utterances out of temporal order")
    turns: list[Turn] = []
    run: list[Utterance] = []

    def close_run():
        if run:
            turns.append(
                Turn(id=f"t{len(turns) + 1}", speaker=run[0].speaker, utterances=tuple(u.id for u in run))
            )
            run.clear()

    for u in utterances:
        if u.modality == "silence":
            close_run()
            run.append(u)
            close_run()
            continue
        if run and u.speaker != run[0].speaker:
            close_run()
        run.append(u)
    close_run()
    return tuple(turns)


def attach_dialogue_acts(
    meeting: Meeting,
    assignments: dict[str, list[str] | tuple[str, ...]],
    vocabulary: frozenset[str] | None = None,
) -> Meeting:
    """Merge dialogue-act tags into utterances; idempotent per tag."""
    for utt_id, tags in assignments.items():
        meeting.utterance(utt_id)
        _check_tags(tags, vocabulary)
    updated = []
    for u in meeting.utterances:
        extra = assignments.get(u.id)
        if extra:
            merged = list(u.da_tags) + [t for t in extra if t not in u.da_tags]
            u = replace(u, da_tags=tuple(merged))
        updated.append(u)
    return replace(meeting, utterances=tuple(updated))


def mark_topic_shifts(meeting: Meeting, boundaries: list[str] | tuple[str, ...]) -> Meeting:
    """Split the root's turn range into first-level episodes.

    Each boundary is an utterance id that must open a turn; the turn it
    opens starts a new episode.  Requires an unannotated root.
    """
    root = meeting.episode(meeting.root)
    if root.children:
        raise ModelError(f"{meeting.id}: root already has episodes; refine those instead")
    boundary_turns: set[int] = set()
    for utt_id in boundaries:
        meeting.utterance(utt_id)
        owner = next((t for t in meeting.turns if utt_id in t.utterances), None)
        if owner is None:
            raise NotFoundError(f"{meeting.id}: utterance {utt_id!r} belongs to no turn")
        if owner.utterances[0] != utt_id:
            raise ModelError(
                f"{meeting.id}: boundary {utt_id!r} falls inside turn {owner.id}; "
                "topic shifts must start a turn"
            )
        boundary_turns.add(meeting.turn_index(owner.id))
    starts = sorted({0} | boundary_turns)
    episodes = [root]
    children = []
    for n, lo in enumerate(starts):
        hi = (starts[n + 1] - 1) if n + 1 < len(starts) else len(meeting.turns) - 1
        child_id = f"e{len(episodes)}"
        episodes.append(
            Episode(
                id=child_id,
                label=ArgLabel("DISCUSSION"),
                turn_span=(meeting.turns[lo].id, meeting.turns[hi].id),
            )
        )
        children.append(child_id)
    episodes[0] = replace(root, children=tuple(children))
    return replace(meeting, episodes=tuple(episodes))
