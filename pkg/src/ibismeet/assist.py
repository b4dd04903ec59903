"""Annotation assistance: adjacency pairs, boundary hints, suggestions.

Everything here is advisory.  Detected pairs and proposed episodes are
handed to the annotator (or the suggestion endpoint); nothing is
written into a meeting unless a suggestion is explicitly applied.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from importlib import resources

from .errors import ModelError
from .grammar import GrammarRuleSet
from .mds import add_reply_to, insert_episode, validate
from .model import ArgLabel, Meeting
from .textproc import content_stems, load_stopwords


@dataclass(frozen=True)
class PairRule:
    kind: str
    weight: float
    first: frozenset[str]
    second: frozenset[str]


@dataclass(frozen=True)
class PairTable:
    rules: tuple[PairRule, ...]
    decay: float = 0.8
    max_gap: int = 2


@dataclass(frozen=True)
class AdjacencyPair:
    kind: str
    first_turn: str
    second_turn: str
    confidence: float


def load_pair_table(path=None) -> PairTable:
    if path is None:
        text = resources.files("ibismeet.data").joinpath("adjacency-pairs.table").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    rules: list[PairRule] = []
    decay, max_gap = 0.8, 2
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "decay" and len(parts) == 2:
            decay = float(parts[1])
        elif parts[0] == "maxgap" and len(parts) == 2:
            max_gap = int(parts[1])
        elif parts[0] == "pair" and len(parts) == 5:
            kind, weight = parts[1], float(parts[2])
            sides = {}
            for chunk in parts[3:]:
                name, _, tags = chunk.partition("=")
                sides[name] = frozenset(t for t in tags.split(",") if t)
            if set(sides) != {"first", "second"}:
                raise ModelError(f"pair table line {lineno}: need first= and second= tag sets")
            rules.append(PairRule(kind, weight, sides["first"], sides["second"]))
        else:
            raise ModelError(f"pair table line {lineno}: cannot parse {line!r}")
    return PairTable(tuple(rules), decay=decay, max_gap=max_gap)


def _turn_tags(meeting: Meeting, turn_id: str) -> frozenset[str]:
    turn = meeting.turn(turn_id)
    tags: set[str] = set()
    for utt_id in turn.utterances:
        tags.update(meeting.utterance(utt_id).da_tags)
    return frozenset(tags)


def detect_adjacency_pairs(meeting: Meeting, table: PairTable | None = None) -> list[AdjacencyPair]:
    """All tag-licensed pairs within the gap window, with decayed confidence.

    The gap is the number of intervening turns; adjacent turns have gap
    zero and full rule weight.
    """
    if table is None:
        table = load_pair_table()
    tags = [_turn_tags(meeting, t.id) for t in meeting.turns]
    pairs: list[AdjacencyPair] = []
    for i in range(len(meeting.turns)):
        for j in range(i + 1, min(i + table.max_gap + 2, len(meeting.turns))):
            gap = j - i - 1
            for rule in table.rules:
                if tags[i] & rule.first and tags[j] & rule.second:
                    pairs.append(
                        AdjacencyPair(
                            kind=rule.kind,
                            first_turn=meeting.turns[i].id,
                            second_turn=meeting.turns[j].id,
                            confidence=rule.weight * table.decay**gap,
                        )
                    )
    pairs.sort(key=lambda p: (meeting.turn_index(p.first_turn), meeting.turn_index(p.second_turn), p.kind))
    return pairs


@dataclass(frozen=True)
class BoundaryCandidate:
    utterance: str
    depth: float


@dataclass(frozen=True)
class BoundaryScan:
    candidates: tuple[BoundaryCandidate, ...]
    too_short: bool = False


def propose_issue_boundaries(
    meeting: Meeting,
    *,
    window: int = 3,
    threshold: float = 0.5,
    stopwords: frozenset[str] | None = None,
) -> BoundaryScan:
    """Score topic shifts at turn gaps by block cosine depth.

    At each gap, compares stem counts of up to ``window`` turns on each
    side; a candidate is a gap whose depth score (rise to the nearest
    peak on both sides) reaches the threshold.  Candidates carry the
    first utterance of the turn after the gap and are ordered deepest
    first.
    """
    if stopwords is None:
        stopwords = load_stopwords()
    turns = meeting.turns
    if len(turns) < 2 * window:
        return BoundaryScan(candidates=(), too_short=True)
    vectors = [Counter(content_stems(meeting.turn_text(t.id), stopwords)) for t in turns]

    def block(lo: int, hi: int) -> Counter:
        merged: Counter = Counter()
        for v in vectors[lo:hi]:
            merged.update(v)
        return merged

    def cosine(a: Counter, b: Counter) -> float:
        dot = sum(c * b[s] for s, c in a.items() if s in b)
        if dot == 0:
            return 0.0
        norm_a = sum(c * c for c in a.values()) ** 0.5
        norm_b = sum(c * c for c in b.values()) ** 0.5
        return dot / (norm_a * norm_b)

    sims = []
    for gap in range(1, len(turns)):
        left = block(max(0, gap - window), gap)
        right = block(gap, min(len(turns), gap + window))
        sims.append(cosine(left, right))

    def depth(i: int) -> float:
        left_peak = sims[i]
        j = i - 1
        while j >= 0 and sims[j] >= left_peak:
            left_peak = sims[j]
            j -= 1
        right_peak = sims[i]
        j = i + 1
        while j < len(sims) and sims[j] >= right_peak:
            right_peak = sims[j]
            j += 1
        return (left_peak - sims[i]) + (right_peak - sims[i])

    candidates = []
    for i in range(len(sims)):
        d = depth(i)
        if d >= threshold:
            after = turns[i + 1]
            candidates.append(BoundaryCandidate(utterance=after.utterances[0], depth=d))
    candidates.sort(key=lambda c: (-c.depth, c.utterance))
    return BoundaryScan(candidates=tuple(candidates))


@dataclass(frozen=True)
class SubSuggestion:
    """One proposed sub-episode; replies_to indexes a sibling, if any."""

    label: ArgLabel
    turn_span: tuple[str, str]
    confidence: float
    replies_to: int | None = None


@dataclass(frozen=True)
class Suggestion:
    """A proposed DISCUSSION episode with its internal structure."""

    label: ArgLabel
    turn_span: tuple[str, str]
    confidence: float
    evidence: tuple[str, ...]
    children: tuple[SubSuggestion, ...] = ()


def _clusters(meeting: Meeting, pairs: list[AdjacencyPair], cluster_gap: int):
    """Group pairs whose turn ranges touch within ``cluster_gap`` turns."""
    ranges = sorted(
        ((meeting.turn_index(p.first_turn), meeting.turn_index(p.second_turn), p) for p in pairs),
        key=lambda r: (r[0], r[1], r[2].kind),
    )
    grouped: list[tuple[int, int, list[AdjacencyPair]]] = []
    for lo, hi, pair in ranges:
        if grouped and lo - grouped[-1][1] <= cluster_gap:
            prev_lo, prev_hi, members = grouped[-1]
            grouped[-1] = (prev_lo, max(prev_hi, hi), members + [pair])
        else:
            grouped.append((lo, hi, [pair]))
    return grouped


def _cluster_children(meeting: Meeting, members: list[AdjacencyPair]) -> tuple[SubSuggestion, ...]:
    children: list[SubSuggestion] = []
    index_of: dict[tuple[str, str], int] = {}

    def ensure(label: ArgLabel, turn: str, confidence: float, replies_to: int | None = None) -> int:
        key = (label.category + (label.parameter or ""), turn)
        if key in index_of:
            return index_of[key]
        children.append(SubSuggestion(label, (turn, turn), confidence, replies_to))
        index_of[key] = len(children) - 1
        return index_of[key]

    first_labels = {
        "propose-accept": ArgLabel("PROPOSE", "alternative"),
        "propose-reject": ArgLabel("PROPOSE", "alternative"),
        "question-answer": ArgLabel("ASK", "clarification"),
        "issue-solution": ArgLabel("ISSUE"),
    }
    second_labels = {
        "propose-accept": ArgLabel("ACCEPT", "alternative"),
        "propose-reject": ArgLabel("REJECT", "alternative"),
        "question-answer": ArgLabel("PROVIDE", "clarification"),
        "issue-solution": ArgLabel("PROPOSE", "alternative"),
    }
    for pair in members:
        first = ensure(first_labels[pair.kind], pair.first_turn, pair.confidence)
        # No reply rule licenses PROPOSE -> ISSUE, so issue-solution
        # seconds are inserted without an edge.
        replies_to = None if pair.kind == "issue-solution" else first
        ensure(second_labels[pair.kind], pair.second_turn, pair.confidence, replies_to=replies_to)
    return tuple(children)


def suggest_annotations(
    meeting: Meeting,
    grammar: GrammarRuleSet,
    table: PairTable | None = None,
    *,
    min_confidence: float = 0.7,
    cluster_gap: int = 1,
    min_density: float = 0.2,
) -> list[Suggestion]:
    """Propose DISCUSSION episodes over dense clusters of strong pairs.

    Pairs below ``min_confidence`` are ignored; clusters sparser than
    ``min_density`` pairs per turn are dropped.  Each surviving cluster
    becomes one suggestion, pre-validated by applying it to a scratch
    copy: a suggestion that raises the meeting's violation count is
    discarded.  Strongest first.
    """
    pairs = [p for p in detect_adjacency_pairs(meeting, table) if p.confidence >= min_confidence]
    baseline = len(validate(meeting, grammar).violations)
    suggestions: list[Suggestion] = []
    for lo, hi, members in _clusters(meeting, pairs, cluster_gap):
        span_turns = hi - lo + 1
        if len(members) / span_turns < min_density:
            continue
        suggestion = Suggestion(
            label=ArgLabel("DISCUSSION"),
            turn_span=(meeting.turns[lo].id, meeting.turns[hi].id),
            confidence=max(p.confidence for p in members),
            evidence=tuple(f"{p.kind}:{p.first_turn}->{p.second_turn}" for p in members),
            children=_cluster_children(meeting, members),
        )
        try:
            applied = apply_suggestion(meeting, suggestion, grammar)
        except ModelError:
            continue
        if len(validate(applied, grammar).violations) <= baseline:
            suggestions.append(suggestion)
    suggestions.sort(
        key=lambda s: (-s.confidence, meeting.turn_index(s.turn_span[0]), -meeting.turn_index(s.turn_span[1]))
    )
    return suggestions


def apply_suggestion(
    meeting: Meeting, suggestion: Suggestion, grammar: GrammarRuleSet, *, parent: str | None = None
) -> Meeting:
    """Insert a suggestion (and its children) under the root or a parent."""
    parent_id = parent if parent is not None else meeting.root
    top_id = meeting.next_episode_id()
    meeting = insert_episode(
        meeting, parent_id, suggestion.label, suggestion.turn_span, episode_id=top_id, grammar=grammar
    )
    child_ids: list[str] = []
    for child in suggestion.children:
        child_id = meeting.next_episode_id()
        meeting = insert_episode(
            meeting, top_id, child.label, child.turn_span, episode_id=child_id, grammar=grammar
        )
        child_ids.append(child_id)
    for child, child_id in zip(suggestion.children, child_ids):
        if child.replies_to is not None:
            meeting = add_reply_to(meeting, child_id, [child_ids[child.replies_to]])
    return meeting
