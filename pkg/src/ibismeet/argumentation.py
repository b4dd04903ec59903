"""Graph readings of an annotated meeting.

Helpers shared by the query templates and the entity search: reply-to
closures, the roster of proposed alternatives, which issue an episode
belongs to, stance events, and the accepted/rejected/undecided status
of every alternative.  Everything is a pure function of one meeting.

Temporal order is (episode start time, position in the episode list);
the position breaks ties between episodes starting on the same turn.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Meeting


def episode_start(meeting: Meeting, episode_id: str) -> float:
    interval = meeting.interval(episode_id)
    return interval[0] if interval else math.inf


def _position(meeting: Meeting, episode_id: str) -> int:
    for i, episode in enumerate(meeting.episodes):
        if episode.id == episode_id:
            return i
    return len(meeting.episodes)


def order_key(meeting: Meeting, episode_id: str) -> tuple[float, int]:
    return (episode_start(meeting, episode_id), _position(meeting, episode_id))


def temporal_order(meeting: Meeting, episode_ids) -> list[str]:
    return sorted(episode_ids, key=lambda eid: order_key(meeting, eid))


def reply_closure(meeting: Meeting, episode_id: str) -> set[str]:
    """Episodes reachable over one or more reply-to edges, minus the source."""
    seen: set[str] = set()
    frontier = [episode_id]
    while frontier:
        current = frontier.pop()
        if current in seen:
            continue
        seen.add(current)
        edge = meeting.edge_from(current)
        if edge:
            frontier.extend(edge.targets)
    seen.discard(episode_id)
    return seen


def alternative_proposals(meeting: Meeting) -> dict[str, str]:
    """Alternative id -> its earliest PROPOSE(alternative) episode."""
    proposals: dict[str, str] = {}
    for episode_id in temporal_order(meeting, [e.id for e in meeting.episodes]):
        episode = meeting.episode(episode_id)
        label = episode.label
        if label.category == "PROPOSE" and label.parameter == "alternative" and episode.target:
            proposals.setdefault(episode.target, episode_id)
    return proposals


def issue_of(meeting: Meeting, episode_id: str) -> str | None:
    """Issue an episode belongs to: the nearest ancestor that names one.

    An ancestor names an issue through its DISCUSSION topic or, failing
    that, through the target of its first ISSUE child.
    """
    for ancestor_id in meeting.ancestors_of(episode_id):
        ancestor = meeting.episode(ancestor_id)
        if ancestor.label.category == "DISCUSSION" and ancestor.label.topic:
            return ancestor.label.topic
        for child_id in ancestor.children:
            child = meeting.episode(child_id)
            if child.label.category == "ISSUE" and child.target:
                return child.target
    return None


def issue_order(meeting: Meeting) -> list[str]:
    """Issues by first appearance as a DISCUSSION topic or ISSUE target."""
    order: list[str] = []
    for episode_id in temporal_order(meeting, [e.id for e in meeting.episodes]):
        episode = meeting.episode(episode_id)
        name = None
        if episode.label.category == "DISCUSSION" and episode.label.topic:
            name = episode.label.topic
        elif episode.label.category == "ISSUE" and episode.target:
            name = episode.target
        if name and name not in order:
            order.append(name)
    return order


def issue_anchor(meeting: Meeting, issue: str) -> str | None:
    """First episode naming the issue; where a jump-to-issue should land."""
    for episode_id in temporal_order(meeting, [e.id for e in meeting.episodes]):
        episode = meeting.episode(episode_id)
        if episode.label.category == "DISCUSSION" and episode.label.topic == issue:
            return episode_id
        if episode.label.category == "ISSUE" and episode.target == issue:
            return episode_id
    return None


def chained_alternatives(meeting: Meeting, episode_id: str) -> set[str]:
    """Alternatives an episode is about: its own target plus any
    PROPOSE(alternative) its reply-to closure reaches."""
    proposals = alternative_proposals(meeting)
    episode = meeting.episode(episode_id)
    alternatives = {episode.target} if episode.target in proposals else set()
    for reached_id in reply_closure(meeting, episode_id) | {episode_id}:
        reached = meeting.episode(reached_id)
        label = reached.label
        if label.category == "PROPOSE" and label.parameter == "alternative" and reached.target:
            alternatives.add(reached.target)
    return alternatives


def stance_events(meeting: Meeting, category: str) -> list[tuple[str, str, str]]:
    """(episode, speaker, alternative) per ACCEPT/REJECT(alternative) move.

    A move about several alternatives yields one event per alternative;
    moves with no attributable speaker are dropped.
    """
    out = []
    for episode_id in temporal_order(meeting, [e.id for e in meeting.episodes]):
        episode = meeting.episode(episode_id)
        if episode.label.category != category or episode.label.parameter != "alternative":
            continue
        speaker = meeting.speaker_of(episode_id)
        if not speaker:
            continue
        for alternative in sorted(chained_alternatives(meeting, episode_id)):
            out.append((episode_id, speaker, alternative))
    return out


def decisions(meeting: Meeting) -> list[tuple[str, frozenset[str]]]:
    """DECISION episodes in temporal order with the alternatives they settle."""
    out = []
    for episode_id in temporal_order(meeting, [e.id for e in meeting.episodes]):
        if meeting.episode(episode_id).label.category == "DECISION":
            out.append((episode_id, frozenset(chained_alternatives(meeting, episode_id))))
    return out


@dataclass(frozen=True)
class AlternativeFacts:
    """Everything the analytics need to know about one alternative."""

    alternative: str
    propose_episode: str
    proposer: str | None
    issue: str | None
    accepted_by: tuple[str, ...]
    rejected_by: tuple[str, ...]
    accept_episodes: tuple[str, ...]
    reject_episodes: tuple[str, ...]
    decision: str | None
    status: str


def alternative_facts(meeting: Meeting) -> tuple[AlternativeFacts, ...]:
    """Per proposed alternative: who reacted, and how it stands.

    An alternative is accepted once a DECISION chains to it, rejected
    when it drew rejections and no acceptance and no decision, and
    undecided otherwise.
    """
    accepts = stance_events(meeting, "ACCEPT")
    rejects = stance_events(meeting, "REJECT")
    decided = decisions(meeting)
    facts = []
    proposals = alternative_proposals(meeting)
    for alternative, propose_id in sorted(
        proposals.items(), key=lambda item: order_key(meeting, item[1])
    ):
        accept_events = [(e, s) for e, s, a in accepts if a == alternative]
        reject_events = [(e, s) for e, s, a in rejects if a == alternative]
        decision = next((d for d, alts in decided if alternative in alts), None)
        if decision is not None:
            status = "accepted"
        elif reject_events and not accept_events:
            status = "rejected"
        else:
            status = "undecided"
        facts.append(
            AlternativeFacts(
                alternative=alternative,
                propose_episode=propose_id,
                proposer=meeting.speaker_of(propose_id),
                issue=issue_of(meeting, propose_id),
                accepted_by=tuple(sorted({s for _, s in accept_events})),
                rejected_by=tuple(sorted({s for _, s in reject_events})),
                accept_episodes=tuple(dict.fromkeys(e for e, _ in accept_events)),
                reject_episodes=tuple(dict.fromkeys(e for e, _ in reject_events)),
                decision=decision,
                status=status,
            )
        )
    return tuple(facts)
