"""Core domain model: utterances, turns, episodes, and meetings.

A meeting is a flat, time-ordered list of utterances grouped into
maximal same-speaker turns, plus a tree of argumentative episodes
over contiguous turn spans and reply-to edges between episodes.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ModelError, NotFoundError

MODALITIES = ("speech", "gesture", "vocal-nonverbal", "silence")

CATEGORIES = (
    "MEETING",
    "OPENING",
    "AGENDA",
    "DISCUSSION",
    "CLOSING",
    "PRESENT",
    "ISSUE",
    "PROPOSE",
    "ASK",
    "PROVIDE",
    "ACCEPT",
    "REJECT",
    "JUSTIFY",
    "DECISION",
)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelError(message)


@dataclass(frozen=True)
class Utterance:
    """One time-stamped contribution by a single speaker."""

    id: str
    speaker: str
    start: float
    end: float
    text: str = ""
    modality: str = "speech"
    da_tags: tuple[str, ...] = ()

    def __post_init__(self):
        _require(bool(self.id), "utterance id must be non-empty")
        _require(bool(self.speaker), f"{self.id}: speaker must be non-empty")
        _require(self.modality in MODALITIES, f"{self.id}: unknown modality {self.modality!r}")
        _require(self.start <= self.end, f"{self.id}: start must not exceed end")
        if self.modality == "speech":
            _require(bool(self.text.strip()), f"{self.id}: speech utterance needs text")


@dataclass(frozen=True)
class Turn:
    """A maximal run of consecutive utterances by one speaker."""

    id: str
    speaker: str
    utterances: tuple[str, ...]

    def __post_init__(self):
        _require(bool(self.utterances), f"{self.id}: turn must contain an utterance")


@dataclass(frozen=True)
class Participant:
    id: str
    name: str
    role: str | None = None


@dataclass(frozen=True)
class ArgLabel:
    """Argumentative label: a category with optional parameter and topic."""

    category: str
    parameter: str | None = None
    topic: str | None = None

    def __post_init__(self):
        _require(self.category in CATEGORIES, f"unknown label category {self.category!r}")

    def __str__(self) -> str:
        return f"{self.category}({self.parameter})" if self.parameter else self.category


@dataclass(frozen=True)
class Episode:
    """A node in the argumentative tree over a contiguous turn span.

    ``turn_span`` is an inclusive (first, last) pair of turn ids, or None
    for an episode whose extent has not been settled yet.  ``target``
    names the issue or alternative the episode is about, if any.
    """

    id: str
    label: ArgLabel
    turn_span: tuple[str, str] | None = None
    children: tuple[str, ...] = ()
    attributed_speaker: str | None = None
    target: str | None = None

    def __post_init__(self):
        _require(bool(self.id), "episode id must be non-empty")


@dataclass(frozen=True)
class ReplyToEdge:
    """Reply-to relation: ``source`` replies to one or more earlier episodes."""

    source: str
    targets: tuple[str, ...]

    def __post_init__(self):
        _require(bool(self.targets), f"{self.source}: reply-to needs at least one target")
        _require(len(set(self.targets)) == len(self.targets), f"{self.source}: duplicate reply targets")
        _require(self.source not in self.targets, f"{self.source}: episode cannot reply to itself")


@dataclass(frozen=True)
class Document:
    """An external document linked to the meeting (agenda, minutes, ...)."""

    id: str
    title: str
    text: str


@dataclass(frozen=True)
class Meeting:
    id: str
    title: str
    date: str
    participants: tuple[Participant, ...]
    utterances: tuple[Utterance, ...]
    turns: tuple[Turn, ...]
    episodes: tuple[Episode, ...]
    root: str
    reply_to: tuple[ReplyToEdge, ...] = ()
    documents: tuple[Document, ...] = ()

    def __post_init__(self):
        _require(bool(self.id), "meeting id must be non-empty")
        _require(bool(self.episodes), f"{self.id}: meeting needs a root episode")
        ids = [e.id for e in self.episodes]
        _require(len(set(ids)) == len(ids), f"{self.id}: duplicate episode ids")
        _require(self.root in set(ids), f"{self.id}: root {self.root!r} is not an episode")
        sources = [e.source for e in self.reply_to]
        _require(len(set(sources)) == len(sources), f"{self.id}: one reply edge per source episode")

    # Lookup helpers.  Meetings are small (hundreds of utterances), so
    # rebuilding these maps per call is cheap and keeps the value frozen.

    def utterance(self, utt_id: str) -> Utterance:
        for u in self.utterances:
            if u.id == utt_id:
                return u
        raise NotFoundError(f"{self.id}: no utterance {utt_id!r}")

    def turn(self, turn_id: str) -> Turn:
        for t in self.turns:
            if t.id == turn_id:
                return t
        raise NotFoundError(f"{self.id}: no turn {turn_id!r}")

    def episode(self, episode_id: str) -> Episode:
        for e in self.episodes:
            if e.id == episode_id:
                return e
        raise NotFoundError(f"{self.id}: no episode {episode_id!r}")

    def has_episode(self, episode_id: str) -> bool:
        return any(e.id == episode_id for e in self.episodes)

    def turn_index(self, turn_id: str) -> int:
        for i, t in enumerate(self.turns):
            if t.id == turn_id:
                return i
        raise NotFoundError(f"{self.id}: no turn {turn_id!r}")

    def turn_interval(self, turn_id: str) -> tuple[float, float]:
        turn = self.turn(turn_id)
        utts = [self.utterance(u) for u in turn.utterances]
        return (min(u.start for u in utts), max(u.end for u in utts))

    def turn_text(self, turn_id: str) -> str:
        turn = self.turn(turn_id)
        return " ".join(self.utterance(u).text for u in turn.utterances if self.utterance(u).text)

    def span_indices(self, episode_id: str) -> tuple[int, int] | None:
        """Inclusive (first, last) turn positions of an episode, or None."""
        episode = self.episode(episode_id)
        if episode.turn_span is None:
            return None
        first, last = episode.turn_span
        lo, hi = self.turn_index(first), self.turn_index(last)
        _require(lo <= hi, f"{episode_id}: turn span is reversed")
        return (lo, hi)

    def interval(self, episode_id: str) -> tuple[float, float] | None:
        """Derived time interval of an episode: first turn start, last turn end."""
        indices = self.span_indices(episode_id)
        if indices is None:
            return None
        lo, hi = indices
        return (self.turn_interval(self.turns[lo].id)[0], self.turn_interval(self.turns[hi].id)[1])

    def span_turns(self, episode_id: str) -> tuple[Turn, ...]:
        indices = self.span_indices(episode_id)
        if indices is None:
            return ()
        lo, hi = indices
        return self.turns[lo : hi + 1]

    def episode_text(self, episode_id: str) -> str:
        return " ".join(filter(None, (self.turn_text(t.id) for t in self.span_turns(episode_id))))

    def speaker_of(self, episode_id: str) -> str | None:
        """Attributed speaker, defaulting to the speaker of the first span turn."""
        episode = self.episode(episode_id)
        if episode.attributed_speaker is not None:
            return episode.attributed_speaker
        if episode.turn_span is None:
            return None
        return self.turn(episode.turn_span[0]).speaker

    def parent_of(self, episode_id: str) -> str | None:
        for e in self.episodes:
            if episode_id in e.children:
                return e.id
        return None

    def ancestors_of(self, episode_id: str) -> list[str]:
        """Parent chain from the immediate parent up to and including the root."""
        chain = []
        cursor = self.parent_of(episode_id)
        while cursor is not None:
            chain.append(cursor)
            cursor = self.parent_of(cursor)
        return chain

    def subtree(self, episode_id: str) -> list[str]:
        """Episode ids in the subtree rooted at ``episode_id``, preorder."""
        order = [episode_id]
        for child in self.episode(episode_id).children:
            order.extend(self.subtree(child))
        return order

    def edge_from(self, source_id: str) -> ReplyToEdge | None:
        for edge in self.reply_to:
            if edge.source == source_id:
                return edge
        return None

    def next_episode_id(self) -> str:
        taken = {e.id for e in self.episodes}
        n = len(self.episodes)
        while f"e{n}" in taken:
            n += 1
        return f"e{n}"

    def with_episode(self, episode: Episode) -> "Meeting":
        """Replace the episode with the same id, keeping order."""
        self.episode(episode.id)
        episodes = tuple(episode if e.id == episode.id else e for e in self.episodes)
        return replace(self, episodes=episodes)


def participant_ids(meeting: Meeting) -> list[str]:
    if meeting.participants:
        return [p.id for p in meeting.participants]
    seen: list[str] = []
    for u in meeting.utterances:
        if u.speaker not in seen:
            seen.append(u.speaker)
    return seen
