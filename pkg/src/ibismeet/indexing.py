"""Retrieval indexes over a corpus of meetings.

Four indexes are kept: a stemmed inverted index at every granularity
(meeting, episode, turn, utterance), an argumentative index over
episode labels, a latent index from cue phrases, and links between
episodes and external documents.  Ranking is cosine similarity of
tf-idf vectors with smoothed idf, so a single-meeting corpus still
scores above zero.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from importlib import resources

from .argumentation import alternative_facts, issue_order, stance_events, temporal_order
from .errors import ModelError, NotFoundError
from .grammar import LabelPattern
from .model import Meeting, participant_ids
from .textproc import content_stems, load_stopwords

GRANULARITIES = ("meeting", "episode", "turn", "utterance")
LATENT_LABELS = ("PURPOSE", "METHODS", "CONCLUSION")
DOC_LINK_THRESHOLD = 0.2


@dataclass(frozen=True)
class SegmentRef:
    """Address of one indexed segment."""

    meeting: str
    granularity: str
    segment: str

    def key(self) -> str:
        return f"{self.meeting}/{self.granularity}/{self.segment}"


@dataclass(frozen=True)
class RankedHit:
    ref: SegmentRef
    score: float
    matched: tuple[str, ...]
    unmatched: tuple[str, ...]


@dataclass(frozen=True)
class ArgEntry:
    """One episode in the argumentative index."""

    ref: SegmentRef
    category: str
    parameter: str | None
    topic: str | None
    speaker: str | None
    target: str | None
    start: float


@dataclass(frozen=True)
class DocLink:
    document: str
    episode: SegmentRef
    score: float


def load_latent_cues(path=None) -> tuple[tuple[str, str], ...]:
    """(label, phrase) pairs in file order; first match wins."""
    if path is None:
        text = resources.files("ibismeet.data").joinpath("latent-cues.table").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    cues = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(None, 2)
        if len(parts) == 3 and parts[0] == "cue" and parts[1] in LATENT_LABELS:
            cues.append((parts[1], parts[2].lower()))
    return tuple(cues)


def classify_latent(text: str, cues: tuple[tuple[str, str], ...] | None = None) -> str | None:
    if cues is None:
        cues = load_latent_cues()
    lowered = text.lower()
    for label, phrase in cues:
        if phrase in lowered:
            return label
    return None


def _segments(meeting: Meeting, granularity: str):
    """Yield (segment_id, text, start_time) at one granularity."""
    if granularity == "meeting":
        start = meeting.utterances[0].start if meeting.utterances else 0.0
        yield meeting.id, " ".join(u.text for u in meeting.utterances if u.text), start
    elif granularity == "episode":
        for episode in meeting.episodes:
            interval = meeting.interval(episode.id)
            if interval is not None:
                yield episode.id, meeting.episode_text(episode.id), interval[0]
    elif granularity == "turn":
        for turn in meeting.turns:
            yield turn.id, meeting.turn_text(turn.id), meeting.turn_interval(turn.id)[0]
    elif granularity == "utterance":
        for u in meeting.utterances:
            yield u.id, u.text, u.start
    else:
        raise ModelError(f"unknown granularity {granularity!r}")


@dataclass(frozen=True)
class IndexSet:
    """All four indexes plus the corpus snapshot they were built from."""

    meetings: dict[str, Meeting]
    stopwords: frozenset[str]
    vectors: dict[str, dict[SegmentRef, Counter]]
    postings: dict[str, dict[str, tuple[SegmentRef, ...]]]
    starts: dict[SegmentRef, float]
    arg_entries: tuple[ArgEntry, ...]
    latent: dict[str, tuple[SegmentRef, ...]] = field(default_factory=dict)
    doc_links: dict[str, tuple[DocLink, ...]] = field(default_factory=dict)

    def segment_count(self, granularity: str) -> int:
        return len(self.vectors[granularity])

    def df(self, granularity: str, stem: str) -> int:
        return len(self.postings[granularity].get(stem, ()))

    def idf(self, granularity: str, stem: str) -> float:
        n = self.segment_count(granularity)
        return math.log((1 + n) / (1 + self.df(granularity, stem))) + 1.0


def build_indexes(
    meetings,
    *,
    stopwords: frozenset[str] | None = None,
    cues=None,
    doc_link_threshold: float = DOC_LINK_THRESHOLD,
) -> IndexSet:
    if stopwords is None:
        stopwords = load_stopwords()
    if cues is None:
        cues = load_latent_cues()
    corpus: dict[str, Meeting] = {}
    for meeting in meetings:
        if meeting.id in corpus:
            raise NotFoundError(f"duplicate meeting id {meeting.id!r} in corpus")
        corpus[meeting.id] = meeting

    vectors: dict[str, dict[SegmentRef, Counter]] = {g: {} for g in GRANULARITIES}
    postings: dict[str, dict[str, list[SegmentRef]]] = {g: defaultdict(list) for g in GRANULARITIES}
    starts: dict[SegmentRef, float] = {}
    for meeting in corpus.values():
        for granularity in GRANULARITIES:
            for segment_id, text, start in _segments(meeting, granularity):
                ref = SegmentRef(meeting.id, granularity, segment_id)
                vector = Counter(content_stems(text, stopwords))
                vectors[granularity][ref] = vector
                starts[ref] = start
                for stem in sorted(vector):
                    postings[granularity][stem].append(ref)

    arg_entries: list[ArgEntry] = []
    for meeting in corpus.values():
        for episode in meeting.episodes:
            interval = meeting.interval(episode.id)
            arg_entries.append(
                ArgEntry(
                    ref=SegmentRef(meeting.id, "episode", episode.id),
                    category=episode.label.category,
                    parameter=episode.label.parameter,
                    topic=episode.label.topic,
                    speaker=meeting.speaker_of(episode.id),
                    target=episode.target,
                    start=interval[0] if interval else math.inf,
                )
            )
    arg_entries.sort(key=lambda e: (e.ref.meeting, e.start, e.ref.segment))

    latent: dict[str, list[SegmentRef]] = {label: [] for label in LATENT_LABELS}
    for meeting in corpus.values():
        for u in meeting.utterances:
            label = classify_latent(u.text, cues)
            if label:
                latent[label].append(SegmentRef(meeting.id, "utterance", u.id))

    index = IndexSet(
        meetings=corpus,
        stopwords=stopwords,
        vectors={g: dict(v) for g, v in vectors.items()},
        postings={g: {s: tuple(refs) for s, refs in p.items()} for g, p in postings.items()},
        starts=starts,
        arg_entries=tuple(arg_entries),
        latent={label: tuple(refs) for label, refs in latent.items()},
    )
    doc_links: dict[str, tuple[DocLink, ...]] = {}
    for meeting in corpus.values():
        for document in meeting.documents:
            doc_links[document.id] = link_document(index, meeting, document.id, threshold=doc_link_threshold)
    return replace_doc_links(index, doc_links)


def replace_doc_links(index: IndexSet, doc_links) -> IndexSet:
    return IndexSet(
        meetings=index.meetings,
        stopwords=index.stopwords,
        vectors=index.vectors,
        postings=index.postings,
        starts=index.starts,
        arg_entries=index.arg_entries,
        latent=index.latent,
        doc_links=dict(doc_links),
    )


def _cosine(index: IndexSet, granularity: str, query: Counter, doc: Counter) -> float:
    if not query or not doc:
        return 0.0
    dot = 0.0
    for stem, count in query.items():
        if stem in doc:
            weight = index.idf(granularity, stem)
            dot += (count * weight) * (doc[stem] * weight)
    if dot == 0.0:
        return 0.0
    qnorm = math.sqrt(sum((c * index.idf(granularity, s)) ** 2 for s, c in query.items()))
    dnorm = math.sqrt(sum((c * index.idf(granularity, s)) ** 2 for s, c in doc.items()))
    return dot / (qnorm * dnorm)


def _ranked(index: IndexSet, granularity: str, terms: str, candidates) -> list[RankedHit]:
    query = Counter(content_stems(terms, index.stopwords))
    hits = []
    for ref in candidates:
        doc = index.vectors[granularity][ref]
        score = _cosine(index, granularity, query, doc)
        if score > 0.0:
            matched = tuple(sorted(s for s in query if s in doc))
            unmatched = tuple(sorted(s for s in query if s not in doc))
            hits.append(RankedHit(ref, score, matched, unmatched))
    hits.sort(key=lambda h: (-h.score, index.starts[h.ref], h.ref.meeting, h.ref.segment))
    return hits


def search_meetings(index: IndexSet, terms: str) -> list[RankedHit]:
    """Rank whole meetings against free-text terms."""
    return _ranked(index, "meeting", terms, index.vectors["meeting"].keys())


def search_passages(
    index: IndexSet, terms: str, *, granularity: str = "episode", meeting: str | None = None
) -> list[RankedHit]:
    """Rank segments at one granularity, optionally within one meeting."""
    if granularity not in GRANULARITIES:
        raise ModelError(f"unknown granularity {granularity!r}")
    if meeting is not None and meeting not in index.meetings:
        raise NotFoundError(f"no meeting {meeting!r} in index")
    candidates = [
        ref for ref in index.vectors[granularity] if meeting is None or ref.meeting == meeting
    ]
    return _ranked(index, granularity, terms, candidates)


def search_events(
    index: IndexSet,
    pattern: str | LabelPattern,
    *,
    speaker: str | None = None,
    target: str | None = None,
    meeting: str | None = None,
    interval: tuple[float, float] | None = None,
) -> list[ArgEntry]:
    """Episodes whose label matches a pattern, filtered and in time order."""
    if isinstance(pattern, str):
        pattern = LabelPattern.parse(pattern)
    out = []
    for entry in index.arg_entries:
        if entry.category != pattern.category:
            continue
        if pattern.parameter is not None and entry.parameter != pattern.parameter:
            continue
        if speaker is not None and entry.speaker != speaker:
            continue
        if target is not None and entry.target != target:
            continue
        if meeting is not None and entry.ref.meeting != meeting:
            continue
        if interval is not None and not (
            entry.start != math.inf and interval[0] <= entry.start <= interval[1]
        ):
            continue
        out.append(entry)
    return out


@dataclass(frozen=True)
class EntityCard:
    kind: str
    identifier: str
    meeting: str
    episodes: tuple[str, ...]


ENTITY_KINDS = ("participant", "issue", "alternative", "document", "date")

# Constraint keys each entity kind accepts, besides "meeting".
_ENTITY_CONSTRAINTS = {
    "participant": frozenset({"rejected_all_proposals_by"}),
    "issue": frozenset({"open"}),
    "alternative": frozenset({"status"}),
    "document": frozenset(),
    "date": frozenset(),
}


def _participant_cards(meeting: Meeting, constraints: dict) -> list[EntityCard]:
    attributed: dict[str, list[str]] = defaultdict(list)
    for eid in temporal_order(meeting, [e.id for e in meeting.episodes]):
        speaker = meeting.speaker_of(eid)
        if speaker:
            attributed[speaker].append(eid)
    proposer = constraints.get("rejected_all_proposals_by")
    if proposer is None:
        return [
            EntityCard("participant", name, meeting.id, tuple(attributed.get(name, ())))
            for name in participant_ids(meeting)
        ]
    proposed = {f.alternative for f in alternative_facts(meeting) if f.proposer == proposer}
    if not proposed:
        return []
    rejects = stance_events(meeting, "REJECT")
    cards = []
    for name in participant_ids(meeting):
        if not all(any(s == name and a == alt for _, s, a in rejects) for alt in proposed):
            continue
        covering = dict.fromkeys(e for e, s, a in rejects if s == name and a in proposed)
        cards.append(EntityCard("participant", name, meeting.id, tuple(covering)))
    return cards


def _issue_cards(meeting: Meeting, constraints: dict) -> list[EntityCard]:
    wanted_open = constraints.get("open")
    if wanted_open is not None and wanted_open not in ("true", "false"):
        raise ModelError(f"constraint 'open' must be 'true' or 'false', not {wanted_open!r}")
    facts = alternative_facts(meeting)
    cards = []
    for issue in issue_order(meeting):
        issue_facts = [f for f in facts if f.issue == issue]
        is_open = not any(f.decision is not None for f in issue_facts)
        if wanted_open is not None and is_open != (wanted_open == "true"):
            continue
        naming = [
            e.id
            for e in meeting.episodes
            if (e.label.category == "DISCUSSION" and e.label.topic == issue)
            or (e.label.category == "ISSUE" and e.target == issue)
        ]
        cards.append(
            EntityCard("issue", issue, meeting.id, tuple(temporal_order(meeting, naming)))
        )
    return cards


def _alternative_cards(meeting: Meeting, constraints: dict) -> list[EntityCard]:
    wanted = constraints.get("status")
    if wanted is not None and wanted not in ("accepted", "rejected", "undecided"):
        raise ModelError(f"unknown alternative status {wanted!r}")
    cards = []
    for fact in alternative_facts(meeting):
        if wanted is not None and fact.status != wanted:
            continue
        episodes = [fact.propose_episode] + ([fact.decision] if fact.decision else [])
        cards.append(EntityCard("alternative", fact.alternative, meeting.id, tuple(episodes)))
    return cards


def search_entities(
    index: IndexSet, kind: str, constraints: dict | None = None, *, meeting: str | None = None
) -> list[EntityCard]:
    """Enumerate entities of one kind, optionally filtered by constraints.

    Kinds: participant, issue, alternative, document, date.  All kinds
    accept a "meeting" constraint; participants accept
    "rejected_all_proposals_by" (a speaker whose every proposed
    alternative the participant rejected), issues accept "open"
    (true/false), alternatives accept "status".  An unsatisfiable
    constraint yields an empty list; an unsupported one is an error.
    """
    if kind not in ENTITY_KINDS:
        raise ModelError(f"unknown entity kind {kind!r}")
    constraints = dict(constraints or {})
    if meeting is not None:
        constraints.setdefault("meeting", meeting)
    allowed = _ENTITY_CONSTRAINTS[kind] | {"meeting"}
    for key in constraints:
        if key not in allowed:
            raise ModelError(f"unsupported constraint for {kind}: {key}")
    wanted_meeting = constraints.get("meeting")
    if wanted_meeting is not None and wanted_meeting not in index.meetings:
        raise NotFoundError(f"no meeting {wanted_meeting!r} in index")
    cards: list[EntityCard] = []
    for meeting_id in sorted(index.meetings):
        if wanted_meeting is not None and meeting_id != wanted_meeting:
            continue
        record = index.meetings[meeting_id]
        if kind == "participant":
            cards.extend(_participant_cards(record, constraints))
        elif kind == "issue":
            cards.extend(_issue_cards(record, constraints))
        elif kind == "alternative":
            cards.extend(_alternative_cards(record, constraints))
        elif kind == "document":
            for document in record.documents:
                linked = tuple(
                    link.episode.segment for link in index.doc_links.get(document.id, ())
                )
                cards.append(EntityCard("document", document.id, meeting_id, linked))
        elif kind == "date" and record.date:
            cards.append(EntityCard("date", record.date, meeting_id, ()))
    cards.sort(key=lambda c: (c.meeting, c.identifier))
    return cards


def link_document(
    index: IndexSet, meeting: Meeting, document_id: str, *, threshold: float = DOC_LINK_THRESHOLD
) -> tuple[DocLink, ...]:
    """Tie a document to the episodes its wording resembles."""
    document = next((d for d in meeting.documents if d.id == document_id), None)
    if document is None:
        raise NotFoundError(f"{meeting.id}: no document {document_id!r}")
    query = Counter(content_stems(document.text, index.stopwords))
    links = []
    for ref, vector in index.vectors["episode"].items():
        if ref.meeting != meeting.id:
            continue
        score = _cosine(index, "episode", query, vector)
        if score >= threshold:
            links.append(DocLink(document=document.id, episode=ref, score=score))
    links.sort(key=lambda l: (-l.score, index.starts[l.episode]))
    return tuple(links)
