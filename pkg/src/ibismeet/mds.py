"""Episode tree operations, reply-to edges, validation, context chains.

Editing operations only enforce their own preconditions (targets exist,
spans nest, replies point backwards).  Grammar conformance is checked
separately by ``validate``, which reports violations instead of
blocking, so annotators can work in any order.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import ModelError, ReplyOrderError
from .grammar import GrammarRuleSet
from .model import ArgLabel, Episode, Meeting, ReplyToEdge

VIOLATION_CODES = (
    "TEMPORAL_CONTAINMENT",
    "REPLY_NOT_EARLIER",
    "REPLY_UNLICENSED",
    "CHILD_UNLICENSED",
    "EMPTY_EPISODE",
    "PARAM_UNKNOWN",
)


@dataclass(frozen=True)
class Violation:
    code: str
    subject: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    meeting: str
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def counts(self) -> dict[str, int]:
        out = {code: 0 for code in VIOLATION_CODES}
        for v in self.violations:
            out[v.code] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "meeting": self.meeting,
            "ok": self.ok,
            "violations": [
                {"code": v.code, "subject": v.subject, "message": v.message}
                for v in self.violations
            ],
        }


def _span_within(meeting: Meeting, inner: str, outer: str) -> bool:
    inner_span = meeting.span_indices(inner)
    outer_span = meeting.span_indices(outer)
    if inner_span is None:
        return True
    if outer_span is None:
        return False
    return outer_span[0] <= inner_span[0] and inner_span[1] <= outer_span[1]


def _spans_overlap(a: tuple[int, int] | None, b: tuple[int, int] | None) -> bool:
    if a is None or b is None:
        return False
    return a[0] <= b[1] and b[0] <= a[1]


def insert_episode(
    meeting: Meeting,
    parent_id: str,
    label: ArgLabel,
    turn_span: tuple[str, str] | None,
    *,
    attributed_speaker: str | None = None,
    target: str | None = None,
    episode_id: str | None = None,
    grammar: GrammarRuleSet | None = None,
) -> Meeting:
    """Add an episode under a parent; returns the updated meeting.

    The span must name existing turns and nest inside the parent's
    span.  When a grammar marks the parent exclusive, the span must not
    overlap a sibling.  Grammar licensing is not enforced here.
    """
    parent = meeting.episode(parent_id)
    new_id = episode_id if episode_id is not None else meeting.next_episode_id()
    if meeting.has_episode(new_id):
        raise ModelError(f"{meeting.id}: episode id {new_id!r} already taken")
    if turn_span is not None:
        lo, hi = meeting.turn_index(turn_span[0]), meeting.turn_index(turn_span[1])
        if lo > hi:
            raise ModelError(f"{new_id}: turn span is reversed")
        parent_span = meeting.span_indices(parent_id)
        if parent_span is None or not (parent_span[0] <= lo and hi <= parent_span[1]):
            raise ModelError(f"{new_id}: span falls outside parent {parent_id}")
        if grammar is not None and grammar.is_exclusive(parent.label):
            for sibling in parent.children:
                if _spans_overlap((lo, hi), meeting.span_indices(sibling)):
                    raise ModelError(
                        f"{new_id}: span overlaps sibling {sibling} under exclusive {parent.label}"
                    )
    if attributed_speaker is not None and attributed_speaker not in {
        u.speaker for u in meeting.utterances
    }:
        raise ModelError(f"{new_id}: unknown speaker {attributed_speaker!r}")
    episode = Episode(
        id=new_id,
        label=label,
        turn_span=turn_span,
        attributed_speaker=attributed_speaker,
        target=target,
    )
    meeting = replace(meeting, episodes=meeting.episodes + (episode,))
    siblings = list(parent.children) + [new_id]

    def sibling_key(eid: str):
        interval = meeting.interval(eid)
        return (interval is None, interval or (0.0, 0.0), siblings.index(eid))

    ordered = tuple(sorted(siblings, key=sibling_key))
    return meeting.with_episode(replace(parent, children=ordered))


def refine_episode(
    meeting: Meeting,
    episode_id: str,
    parts: list[tuple[ArgLabel, tuple[str, str] | None]],
    *,
    grammar: GrammarRuleSet | None = None,
) -> Meeting:
    """Insert several sub-episodes under one episode, in order."""
    for label, turn_span in parts:
        meeting = insert_episode(meeting, episode_id, label, turn_span, grammar=grammar)
    return meeting


def add_reply_to(meeting: Meeting, source_id: str, target_ids: list[str] | tuple[str, ...]) -> Meeting:
    """Record that ``source`` replies to each target episode.

    Targets must start strictly before the source.  Repeated calls for
    one source merge into a single edge without duplicates.
    """
    source = meeting.episode(source_id)
    source_interval = meeting.interval(source_id)
    if source_interval is None:
        raise ModelError(f"{source_id}: cannot reply from an episode without a span")
    for target_id in target_ids:
        meeting.episode(target_id)
        if target_id == source_id:
            raise ModelError(f"{source_id}: episode cannot reply to itself")
        target_interval = meeting.interval(target_id)
        if target_interval is None or target_interval[0] >= source_interval[0]:
            raise ReplyOrderError(f"{source_id}: reply target {target_id} does not start earlier")
    existing = meeting.edge_from(source_id)
    merged: list[str] = list(existing.targets) if existing else []
    for target_id in target_ids:
        if target_id not in merged:
            merged.append(target_id)
    edge = ReplyToEdge(source=source_id, targets=tuple(merged))
    edges = tuple(e for e in meeting.reply_to if e.source != source_id) + (edge,)
    edges = tuple(sorted(edges, key=lambda e: e.source))
    return replace(meeting, reply_to=edges)


def _episode_order_key(meeting: Meeting, episode_id: str):
    interval = meeting.interval(episode_id)
    return (interval is None, interval or (0.0, 0.0), episode_id)


def validate(meeting: Meeting, grammar: GrammarRuleSet) -> ValidationReport:
    """Check the whole annotation against the grammar; never raises.

    Reported, per episode: span outside the parent's span, unlicensed
    nesting, unknown label parameter, and empty leaf episodes.  Per
    reply edge: targets that do not start strictly earlier and pairs no
    reply rule licenses.
    """
    violations: list[Violation] = []
    for episode in meeting.episodes:
        parent_id = meeting.parent_of(episode.id)
        if parent_id is not None:
            if not _span_within(meeting, episode.id, parent_id):
                violations.append(
                    Violation(
                        "TEMPORAL_CONTAINMENT",
                        episode.id,
                        f"{episode.id} is not contained in parent {parent_id}",
                    )
                )
            parent = meeting.episode(parent_id)
            if not grammar.licenses_child(parent.label, episode.label):
                violations.append(
                    Violation(
                        "CHILD_UNLICENSED",
                        episode.id,
                        f"{episode.label} may not appear under {parent.label}",
                    )
                )
        if not episode.children and episode.turn_span is None:
            violations.append(
                Violation("EMPTY_EPISODE", episode.id, f"{episode.id} covers no turns")
            )
        if not grammar.knows_parameter(episode.label):
            violations.append(
                Violation(
                    "PARAM_UNKNOWN",
                    episode.id,
                    f"{episode.label.category} does not take parameter {episode.label.parameter!r}",
                )
            )
    for edge in meeting.reply_to:
        source = meeting.episode(edge.source)
        source_interval = meeting.interval(edge.source)
        for target_id in edge.targets:
            target = meeting.episode(target_id)
            target_interval = meeting.interval(target_id)
            if (
                source_interval is None
                or target_interval is None
                or target_interval[0] >= source_interval[0]
            ):
                violations.append(
                    Violation(
                        "REPLY_NOT_EARLIER",
                        edge.source,
                        f"{edge.source} replies to {target_id}, which does not start earlier",
                    )
                )
            if not grammar.licenses_reply(source.label, target.label):
                violations.append(
                    Violation(
                        "REPLY_UNLICENSED",
                        edge.source,
                        f"{source.label} may not reply to {target.label}",
                    )
                )
    violations.sort(key=lambda v: (_episode_order_key(meeting, v.subject), v.code))
    return ValidationReport(meeting=meeting.id, violations=tuple(violations))


def context_chain(meeting: Meeting, episode_id: str) -> list[str]:
    """Episodes needed to interpret one episode, in temporal order.

    The chain is the reply-to closure of the episode and its ancestors,
    plus the ancestors themselves, minus the episode and the root.
    """
    meeting.episode(episode_id)
    seeds = [episode_id] + meeting.ancestors_of(episode_id)
    seen: set[str] = set()
    frontier = list(seeds)
    while frontier:
        current = frontier.pop()
        if current in seen:
            continue
        seen.add(current)
        edge = meeting.edge_from(current)
        if edge:
            frontier.extend(edge.targets)
    seen.discard(episode_id)
    seen.discard(meeting.root)
    return sorted(seen, key=lambda eid: _episode_order_key(meeting, eid))


def apply_edits(meeting: Meeting, edits: list[dict], *, grammar: GrammarRuleSet | None = None) -> Meeting:
    """Apply a list of edit records, as found in annotation files.

    Supported ops: ``insert_episode`` (fields parent, category, and
    optionally parameter, topic, turn_span, attributed_speaker, target,
    id) and ``add_reply_to`` (fields source, targets).
    """
    for n, edit in enumerate(edits):
        op = edit.get("op")
        if op == "insert_episode":
            label = ArgLabel(
                category=edit["category"],
                parameter=edit.get("parameter"),
                topic=edit.get("topic"),
            )
            span = edit.get("turn_span")
            meeting = insert_episode(
                meeting,
                edit["parent"],
                label,
                tuple(span) if span else None,
                attributed_speaker=edit.get("attributed_speaker"),
                target=edit.get("target"),
                episode_id=edit.get("id"),
                grammar=grammar,
            )
        elif op == "add_reply_to":
            meeting = add_reply_to(meeting, edit["source"], edit["targets"])
        else:
            raise ModelError(f"edit {n}: unknown op {op!r}")
    return meeting
