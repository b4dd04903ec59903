"""Query templates over annotated meetings.

A small fixed language, `template(key="value", ...)`, parsed by a
hand-rolled scanner so error offsets are exact.  Execution walks the
argumentation graph (reply-to chains between PROPOSE, ACCEPT, REJECT,
JUSTIFY and DECISION episodes); only `find` touches the retrieval
index.

Answers are plain data.  Every payload element embeds the evidence
references that back it; the answer also carries the deduplicated
union of those references and an optional note explaining empty or
heuristic results.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from .argumentation import (
    alternative_facts,
    alternative_proposals,
    chained_alternatives,
    issue_anchor,
    issue_order,
    order_key,
    reply_closure,
    stance_events,
    temporal_order,
)
from .errors import ModelError, NotFoundError, QueryParseError
from .indexing import IndexSet, search_passages
from .model import Meeting, participant_ids

# Template name -> (required argument keys, optional argument keys).
TEMPLATES: dict[str, tuple[frozenset[str], frozenset[str]]] = {
    "objections": (frozenset({"alternative"}), frozenset({"meeting"})),
    "position": (frozenset({"speaker", "issue"}), frozenset({"meeting"})),
    "contributions": (frozenset({"speaker"}), frozenset({"meeting", "stance"})),
    "supporters": (frozenset({"speaker"}), frozenset({"meeting"})),
    "rejecters": (frozenset({"speaker"}), frozenset({"meeting"})),
    "chosen": (frozenset(), frozenset({"issue", "meeting"})),
    "why_rejected": (frozenset({"alternative"}), frozenset({"meeting"})),
    "open_issues": (frozenset(), frozenset({"meeting"})),
    "criteria": (frozenset({"decision"}), frozenset({"meeting"})),
    "dissent_criteria": (frozenset({"decision"}), frozenset({"meeting"})),
    "contradictions": (frozenset(), frozenset({"speaker", "meeting"})),
    "democratic": (frozenset({"decision"}), frozenset({"meeting"})),
    "find": (frozenset({"terms"}), frozenset({"granularity", "meeting"})),
}

ARG_KEYS = frozenset(
    {"speaker", "issue", "alternative", "decision", "meeting", "stance", "terms", "granularity"}
)

# What each template's payload holds.
KINDS: dict[str, str] = {
    "objections": "episodes",
    "contributions": "episodes",
    "why_rejected": "episodes",
    "criteria": "episodes",
    "dissent_criteria": "episodes",
    "find": "episodes",
    "supporters": "entities",
    "rejecters": "entities",
    "chosen": "decision_summaries",
    "open_issues": "decision_summaries",
    "position": "judgement",
    "contradictions": "judgement",
    "democratic": "judgement",
}


@dataclass(frozen=True)
class QueryAst:
    template: str
    args: tuple[tuple[str, str], ...]

    def arg(self, key: str) -> str | None:
        for name, value in self.args:
            if name == key:
                return value
        return None


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, offset: int | None = None):
        raise QueryParseError(message, offset=self.pos if offset is None else offset)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str):
        if self.peek() != char:
            self.error(f"expected {char!r}")
        self.pos += 1

    def identifier(self) -> str:
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if self.pos == start:
            self.error("expected an identifier")
        return self.text[start : self.pos]

    def quoted_string(self) -> str:
        if self.peek() != '"':
            self.error("expected a quoted string")
        start = self.pos
        self.pos += 1
        out: list[str] = []
        while True:
            if self.at_end():
                self.error("unterminated string", offset=start)
            char = self.text[self.pos]
            self.pos += 1
            if char == '"':
                return "".join(out)
            if char == "\\":
                if self.at_end():
                    self.error("unterminated string", offset=start)
                escaped = self.text[self.pos]
                self.pos += 1
                if escaped not in ('"', "\\"):
                    self.error(f"unknown escape \\{escaped}", offset=self.pos - 2)
                out.append(escaped)
            else:
                out.append(char)


def parse_query(text: str) -> QueryAst:
    """Parse `template(key="value", ...)`; errors carry a byte offset."""
    scanner = _Scanner(text)
    scanner.skip_ws()
    name_offset = scanner.pos
    template = scanner.identifier()
    if template not in TEMPLATES:
        raise QueryParseError(f"unknown template: {template}", offset=name_offset)
    scanner.skip_ws()
    paren_offset = scanner.pos
    scanner.expect("(")
    scanner.skip_ws()
    required, optional = TEMPLATES[template]
    args: list[tuple[str, str]] = []
    seen: set[str] = set()
    if scanner.peek() != ")":
        while True:
            scanner.skip_ws()
            key_offset = scanner.pos
            key = scanner.identifier()
            if key not in ARG_KEYS:
                raise QueryParseError(f"unknown argument: {key}", offset=key_offset)
            if key not in required and key not in optional:
                raise QueryParseError(
                    f"unexpected argument for {template}: {key}", offset=key_offset
                )
            if key in seen:
                raise QueryParseError(f"duplicate argument: {key}", offset=key_offset)
            seen.add(key)
            scanner.skip_ws()
            scanner.expect("=")
            scanner.skip_ws()
            args.append((key, scanner.quoted_string()))
            scanner.skip_ws()
            if scanner.peek() == ",":
                scanner.pos += 1
                continue
            break
    scanner.expect(")")
    scanner.skip_ws()
    if not scanner.at_end():
        scanner.error("unexpected trailing input")
    for key in sorted(required - seen):
        raise QueryParseError(f"missing required argument: {key}", offset=paren_offset)
    return QueryAst(template=template, args=tuple(args))


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_query(ast: QueryAst) -> str:
    """Canonical text for an AST: arguments sorted by key."""
    rendered = ", ".join(f"{key}={_quote(value)}" for key, value in sorted(ast.args))
    return f"{ast.template}({rendered})"


# ---------------------------------------------------------------------------
# Criteria: JUSTIFY/PROVIDE episodes read as pro or con arguments.


@dataclass(frozen=True)
class Criterion:
    """A JUSTIFY or PROVIDE episode acting as an argument for or against."""

    episode: str
    holder: str | None
    polarity: str  # "pro" | "con"
    attached_to: str  # alternative id, or DECISION episode id
    attached_kind: str  # "alternative" | "decision"


def criterion_entries(meeting: Meeting) -> tuple[Criterion, ...]:
    """Criteria in a meeting.

    A JUSTIFY or PROVIDE episode yields one entry per alternative (or
    bare DECISION) its reply-to closure reaches: pro when the reached
    stance is ACCEPT(alternative) or DECISION, con when it is
    REJECT(alternative).
    """
    polarity_of = {"ACCEPT": "pro", "DECISION": "pro", "REJECT": "con"}
    entries: list[Criterion] = []
    seen: set[tuple[str, str, str]] = set()
    for episode_id in temporal_order(meeting, [e.id for e in meeting.episodes]):
        episode = meeting.episode(episode_id)
        if episode.label.category not in ("JUSTIFY", "PROVIDE"):
            continue
        holder = meeting.speaker_of(episode_id)
        for reached_id in sorted(reply_closure(meeting, episode_id)):
            reached = meeting.episode(reached_id)
            category = reached.label.category
            if category not in polarity_of:
                continue
            if category in ("ACCEPT", "REJECT") and reached.label.parameter != "alternative":
                continue
            polarity = polarity_of[category]
            alternatives = sorted(chained_alternatives(meeting, reached_id))
            targets = (
                [(a, "alternative") for a in alternatives]
                if alternatives
                else ([(reached_id, "decision")] if category == "DECISION" else [])
            )
            for attached_to, attached_kind in targets:
                key = (episode_id, polarity, attached_to)
                if key in seen:
                    continue
                seen.add(key)
                entries.append(
                    Criterion(
                        episode=episode_id,
                        holder=holder,
                        polarity=polarity,
                        attached_to=attached_to,
                        attached_kind=attached_kind,
                    )
                )
    entries.sort(key=lambda c: (order_key(meeting, c.episode), c.attached_to, c.polarity))
    return tuple(entries)


# ---------------------------------------------------------------------------
# Decision summaries.


@dataclass(frozen=True)
class AlternativeSummary:
    alternative: str
    propose_episode: str
    proposed_by: str | None
    status: str  # "accepted" | "rejected" | "undecided"
    accepted_by: tuple[str, ...]
    rejected_by: tuple[str, ...]
    decision: str | None


@dataclass(frozen=True)
class IssueSummary:
    meeting: str
    issue: str
    anchor: str | None
    alternatives: tuple[AlternativeSummary, ...]
    chosen: tuple[str, ...]
    open: bool


def summarize_decisions(meeting: Meeting) -> tuple[IssueSummary, ...]:
    """One summary per issue; alternatives proposed outside any issue
    are grouped under the empty issue name."""
    facts = alternative_facts(meeting)
    issues = issue_order(meeting)
    if any(f.issue is None for f in facts) and "" not in issues:
        issues = issues + [""]
    summaries = []
    for issue in issues:
        issue_facts = [f for f in facts if (f.issue or "") == issue]
        summaries.append(
            IssueSummary(
                meeting=meeting.id,
                issue=issue,
                anchor=issue_anchor(meeting, issue) if issue else None,
                alternatives=tuple(
                    AlternativeSummary(
                        alternative=f.alternative,
                        propose_episode=f.propose_episode,
                        proposed_by=f.proposer,
                        status=f.status,
                        accepted_by=f.accepted_by,
                        rejected_by=f.rejected_by,
                        decision=f.decision,
                    )
                    for f in issue_facts
                ),
                chosen=tuple(f.alternative for f in issue_facts if f.decision is not None),
                open=not any(f.decision is not None for f in issue_facts),
            )
        )
    return tuple(summaries)


# ---------------------------------------------------------------------------
# Contradictions and democratic assessment.


@dataclass(frozen=True)
class Contradiction:
    speaker: str
    alternative: str
    earlier: str
    later: str
    earlier_polarity: str
    later_polarity: str


def _polarity_events(meeting: Meeting) -> list[tuple[str, str, str, str]]:
    """(episode, speaker, alternative, polarity) stance events, including
    JUSTIFY episodes through the polarity of what they argue for."""
    events = [(e, s, a, "pro") for e, s, a in stance_events(meeting, "ACCEPT")]
    events += [(e, s, a, "con") for e, s, a in stance_events(meeting, "REJECT")]
    for entry in criterion_entries(meeting):
        episode = meeting.episode(entry.episode)
        if episode.label.category != "JUSTIFY" or entry.attached_kind != "alternative":
            continue
        if entry.holder:
            events.append((entry.episode, entry.holder, entry.attached_to, entry.polarity))
    deduped = list(dict.fromkeys(events))
    deduped.sort(key=lambda ev: (order_key(meeting, ev[0]), ev[2], ev[3]))
    return deduped


def find_contradictions(meeting: Meeting, speaker: str | None = None) -> tuple[Contradiction, ...]:
    """Every ordered pair of opposite-polarity stances one participant
    took on the same alternative."""
    events = _polarity_events(meeting)
    found = []
    for i, (ep_a, sp_a, alt_a, pol_a) in enumerate(events):
        if speaker is not None and sp_a != speaker:
            continue
        for ep_b, sp_b, alt_b, pol_b in events[i + 1 :]:
            if sp_b != sp_a or alt_b != alt_a or pol_b == pol_a or ep_b == ep_a:
                continue
            found.append(
                Contradiction(
                    speaker=sp_a,
                    alternative=alt_a,
                    earlier=ep_a,
                    later=ep_b,
                    earlier_polarity=pol_a,
                    later_polarity=pol_b,
                )
            )
    found.sort(
        key=lambda c: (order_key(meeting, c.earlier), order_key(meeting, c.later), c.speaker, c.alternative)
    )
    return tuple(dict.fromkeys(found))


@dataclass(frozen=True)
class DemocraticJudgement:
    meeting: str
    decision: str
    alternatives: tuple[str, ...]
    verdict: bool
    explicit_accepts: tuple[str, ...]
    explicit_rejects: tuple[str, ...]
    participants: tuple[str, ...]
    rule: str


DEMOCRATIC_RULE = "strict majority of all participants accepted explicitly"


def assess_democratic(meeting: Meeting, decision_id: str) -> DemocraticJudgement:
    """Was a decision backed by a strict majority of explicit ACCEPTs?"""
    episode = meeting.episode(decision_id)
    if episode.label.category != "DECISION":
        raise ModelError(f"{decision_id} is not a DECISION episode")
    alternatives = chained_alternatives(meeting, decision_id)
    accepts = {s for _, s, a in stance_events(meeting, "ACCEPT") if a in alternatives}
    rejects = {s for _, s, a in stance_events(meeting, "REJECT") if a in alternatives}
    participants = participant_ids(meeting)
    return DemocraticJudgement(
        meeting=meeting.id,
        decision=decision_id,
        alternatives=tuple(sorted(alternatives)),
        verdict=2 * len(accepts) > len(participants),
        explicit_accepts=tuple(sorted(accepts)),
        explicit_rejects=tuple(sorted(rejects)),
        participants=tuple(participants),
        rule=DEMOCRATIC_RULE,
    )


# ---------------------------------------------------------------------------
# Answers.


@dataclass(frozen=True)
class Answer:
    template: str
    kind: str  # "episodes" | "entities" | "decision_summaries" | "judgement"
    payload: tuple[dict, ...]
    evidence: tuple[dict, ...]
    note: str | None = None

    def to_dict(self) -> dict:
        return {
            "template": self.template,
            "kind": self.kind,
            "payload": list(self.payload),
            "evidence": list(self.evidence),
            "note": self.note,
        }


def _ref(meeting: Meeting, episode_id: str) -> dict:
    return {
        "meeting": meeting.id,
        "episode": episode_id,
        "label": str(meeting.episode(episode_id).label),
    }


def _episode_element(meeting: Meeting, episode_id: str) -> dict:
    episode = meeting.episode(episode_id)
    return {
        "meeting": meeting.id,
        "episode": episode_id,
        "label": str(episode.label),
        "speaker": meeting.speaker_of(episode_id),
        "turn_span": list(episode.turn_span) if episode.turn_span else None,
        "target": episode.target,
        "topic": episode.label.topic,
        "evidence": [_ref(meeting, episode_id)],
    }


def _criterion_element(meeting: Meeting, entry: Criterion) -> dict:
    return {
        "meeting": meeting.id,
        "episode": entry.episode,
        "label": str(meeting.episode(entry.episode).label),
        "holder": entry.holder,
        "polarity": entry.polarity,
        "attached_to": entry.attached_to,
        "attached_kind": entry.attached_kind,
        "evidence": [_ref(meeting, entry.episode)],
    }


def _answer(ast: QueryAst, payload: list[dict], note: str | None = None) -> Answer:
    seen: set[str] = set()
    evidence: list[dict] = []
    for element in payload:
        for ref in element.get("evidence", ()):
            key = json.dumps(ref, sort_keys=True)
            if key not in seen:
                seen.add(key)
                evidence.append(ref)
    return Answer(
        template=ast.template,
        kind=KINDS[ast.template],
        payload=tuple(payload),
        evidence=tuple(evidence),
        note=note,
    )


# ---------------------------------------------------------------------------
# Execution.


def _selected_meetings(index: IndexSet, ast: QueryAst) -> list[Meeting]:
    meeting_id = ast.arg("meeting")
    if meeting_id is not None:
        if meeting_id not in index.meetings:
            raise NotFoundError(f"unknown meeting: {meeting_id}")
        return [index.meetings[meeting_id]]
    return [index.meetings[mid] for mid in sorted(index.meetings)]


def _require_speaker(meetings: list[Meeting], name: str):
    if not any(name in participant_ids(m) for m in meetings):
        raise NotFoundError(f"unknown speaker: {name}")


def _require_alternative(meetings: list[Meeting], name: str):
    if not any(name in alternative_proposals(m) for m in meetings):
        raise NotFoundError(f"unknown alternative: {name}")


def _require_issue(meetings: list[Meeting], name: str):
    if not any(name in issue_order(m) for m in meetings):
        raise NotFoundError(f"unknown issue: {name}")


def _find_decision(meetings: list[Meeting], episode_id: str) -> Meeting:
    """The first selected meeting holding the episode; it must be a DECISION."""
    for meeting in meetings:
        if meeting.has_episode(episode_id):
            if meeting.episode(episode_id).label.category != "DECISION":
                raise ModelError(f"{episode_id} is not a DECISION episode")
            return meeting
    raise NotFoundError(f"unknown decision: {episode_id}")


def _objection_episodes(meeting: Meeting, alternative: str) -> list[str]:
    """REJECTs whose reply chain reaches the alternative, plus JUSTIFYs
    replying to those rejects."""
    rejects = [
        e.id
        for e in meeting.episodes
        if e.label.category == "REJECT" and alternative in chained_alternatives(meeting, e.id)
    ]
    justifies = [
        e.id
        for e in meeting.episodes
        if e.label.category == "JUSTIFY" and reply_closure(meeting, e.id) & set(rejects)
    ]
    return temporal_order(meeting, set(rejects) | set(justifies))


def _handle_objections(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    alternative = ast.arg("alternative")
    _require_alternative(meetings, alternative)
    payload = []
    for meeting in meetings:
        for episode_id in _objection_episodes(meeting, alternative):
            payload.append(_episode_element(meeting, episode_id))
    note = None if payload else f"no objections recorded against {alternative}"
    return _answer(ast, payload, note)


def _justify_polarities(meeting: Meeting) -> dict[str, set[str]]:
    polarities: dict[str, set[str]] = {}
    for entry in criterion_entries(meeting):
        if meeting.episode(entry.episode).label.category == "JUSTIFY":
            polarities.setdefault(entry.episode, set()).add(entry.polarity)
    return polarities


def _issue_subtree(meeting: Meeting, issue: str) -> list[str]:
    roots = []
    for episode in meeting.episodes:
        if episode.label.category == "DISCUSSION" and episode.label.topic == issue:
            roots.append(episode.id)
            continue
        for child_id in episode.children:
            child = meeting.episode(child_id)
            if child.label.category == "ISSUE" and child.target == issue:
                roots.append(episode.id)
                break
    members: list[str] = []
    for root in roots:
        for episode_id in meeting.subtree(root):
            if episode_id not in members:
                members.append(episode_id)
    return members


def _handle_position(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    speaker = ast.arg("speaker")
    issue = ast.arg("issue")
    _require_speaker(meetings, speaker)
    _require_issue(meetings, issue)
    payload = []
    for meeting in meetings:
        subtree = set(_issue_subtree(meeting, issue))
        polarities = _justify_polarities(meeting)
        episode_ids = [
            eid
            for eid in temporal_order(meeting, subtree)
            if meeting.episode(eid).label.category in ("ACCEPT", "REJECT", "PROPOSE", "JUSTIFY")
            and meeting.speaker_of(eid) == speaker
        ]
        if not episode_ids:
            continue
        pro = con = 0
        for eid in episode_ids:
            category = meeting.episode(eid).label.category
            if category in ("ACCEPT", "PROPOSE"):
                pro += 1
            elif category == "REJECT":
                con += 1
            else:
                pro += "pro" in polarities.get(eid, ())
                con += "con" in polarities.get(eid, ())
        stance = "mixed" if pro and con else "pro" if pro else "con" if con else "none"
        payload.append(
            {
                "meeting": meeting.id,
                "speaker": speaker,
                "issue": issue,
                "stance": stance,
                "pro": pro,
                "con": con,
                "episodes": episode_ids,
                "evidence": [_ref(meeting, eid) for eid in episode_ids],
            }
        )
    note = None if payload else f"{speaker} took no recorded position on {issue}"
    return _answer(ast, payload, note)


def _handle_contributions(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    speaker = ast.arg("speaker")
    stance = ast.arg("stance") or "pro"
    _require_speaker(meetings, speaker)
    if stance not in ("pro", "any"):
        raise ModelError(f"unknown stance: {stance} (expected pro or any)")
    payload = []
    for meeting in meetings:
        polarities = _justify_polarities(meeting)
        for eid in temporal_order(meeting, [e.id for e in meeting.episodes]):
            if eid == meeting.root or meeting.speaker_of(eid) != speaker:
                continue
            category = meeting.episode(eid).label.category
            if stance == "pro":
                in_favour = category in ("PROPOSE", "ACCEPT") or (
                    category == "JUSTIFY" and "pro" in polarities.get(eid, ())
                )
                if not in_favour:
                    continue
            payload.append(_episode_element(meeting, eid))
    note = None if payload else f"no contributions recorded for {speaker}"
    return _answer(ast, payload, note)


def _handle_supporters(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    speaker = ast.arg("speaker")
    _require_speaker(meetings, speaker)
    payload = []
    for meeting in meetings:
        proposed = [f.alternative for f in alternative_facts(meeting) if f.proposer == speaker]
        if not proposed:
            continue
        events = [
            (e, s) for e, s, a in stance_events(meeting, "ACCEPT") if a in set(proposed)
        ]
        if not events:
            continue
        payload.append(
            {
                "meeting": meeting.id,
                "speaker": speaker,
                "alternatives": proposed,
                "supporters": sorted({s for _, s in events}),
                "evidence": [_ref(meeting, e) for e in dict.fromkeys(e for e, _ in events)],
            }
        )
    note = None if payload else f"no supporters found for proposals by {speaker}"
    return _answer(ast, payload, note)


def _handle_rejecters(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    speaker = ast.arg("speaker")
    _require_speaker(meetings, speaker)
    payload = []
    for meeting in meetings:
        proposed = [f.alternative for f in alternative_facts(meeting) if f.proposer == speaker]
        if not proposed:
            continue
        rejects = stance_events(meeting, "REJECT")
        rejecters = sorted(
            p
            for p in participant_ids(meeting)
            if all(any(s == p and a == alt for _, s, a in rejects) for alt in proposed)
        )
        if not rejecters:
            continue
        evidence_ids = dict.fromkeys(
            e for e, s, a in rejects if s in set(rejecters) and a in set(proposed)
        )
        payload.append(
            {
                "meeting": meeting.id,
                "speaker": speaker,
                "alternatives": proposed,
                "rejecters": rejecters,
                "evidence": [_ref(meeting, e) for e in evidence_ids],
            }
        )
    note = None if payload else f"nobody rejected every proposal by {speaker}"
    return _answer(ast, payload, note)


def _summary_element(meeting: Meeting, summary: IssueSummary) -> dict:
    decisions_ids = [a.decision for a in summary.alternatives if a.decision]
    refs = [_ref(meeting, d) for d in dict.fromkeys(decisions_ids)]
    refs += [_ref(meeting, a.propose_episode) for a in summary.alternatives]
    return {
        "meeting": summary.meeting,
        "issue": summary.issue,
        "anchor": summary.anchor,
        "chosen": list(summary.chosen),
        "open": summary.open,
        "alternatives": [
            {
                "alternative": a.alternative,
                "propose_episode": a.propose_episode,
                "proposed_by": a.proposed_by,
                "status": a.status,
                "accepted_by": list(a.accepted_by),
                "rejected_by": list(a.rejected_by),
                "decision": a.decision,
            }
            for a in summary.alternatives
        ],
        "evidence": refs,
    }


def _handle_chosen(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    issue = ast.arg("issue")
    if issue is not None:
        _require_issue(meetings, issue)
    payload = []
    for meeting in meetings:
        for summary in summarize_decisions(meeting):
            if issue is not None and summary.issue != issue:
                continue
            if summary.chosen:
                payload.append(_summary_element(meeting, summary))
    if payload:
        return _answer(ast, payload)
    note = f"issue {issue} is still open" if issue else "no decisions recorded"
    return _answer(ast, [], note)


def _handle_why_rejected(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    alternative = ast.arg("alternative")
    _require_alternative(meetings, alternative)
    payload = []
    for meeting in meetings:
        facts = {f.alternative: f for f in alternative_facts(meeting)}
        if alternative not in facts:
            continue
        for episode_id in _objection_episodes(meeting, alternative):
            element = _episode_element(meeting, episode_id)
            element["role"] = "objection"
            payload.append(element)
        issue = facts[alternative].issue
        chosen = {
            f.alternative
            for f in facts.values()
            if f.issue == issue and f.decision is not None and f.alternative != alternative
        }
        for entry in criterion_entries(meeting):
            if entry.attached_kind == "alternative" and entry.attached_to in chosen:
                element = _criterion_element(meeting, entry)
                element["role"] = "criterion"
                payload.append(element)
    note = None if payload else f"no recorded objections or criteria involving {alternative}"
    return _answer(ast, payload, note)


def _handle_open_issues(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    payload = []
    for meeting in meetings:
        for summary in summarize_decisions(meeting):
            if not summary.open:
                continue
            objections: list[str] = []
            for alt in summary.alternatives:
                for episode_id in _objection_episodes(meeting, alt.alternative):
                    if episode_id not in objections:
                        objections.append(episode_id)
            element = _summary_element(meeting, summary)
            element["objections"] = temporal_order(meeting, objections)
            if summary.anchor:
                element["evidence"].insert(0, _ref(meeting, summary.anchor))
            element["evidence"] += [_ref(meeting, e) for e in element["objections"]]
            if not element["evidence"]:
                continue
            payload.append(element)
    note = "heuristic" if payload else "no open issues found"
    return _answer(ast, payload, note)


def _handle_criteria(ast: QueryAst, meetings: list[Meeting], dissent: bool = False) -> Answer:
    decision_id = ast.arg("decision")
    meeting = _find_decision(meetings, decision_id)
    alternatives = chained_alternatives(meeting, decision_id)
    attached = alternatives | {decision_id}
    holders = None
    if dissent:
        holders = {s for _, s, a in stance_events(meeting, "REJECT") if a in alternatives}
    payload = []
    for entry in criterion_entries(meeting):
        if entry.attached_to not in attached:
            continue
        if holders is not None and entry.holder not in holders:
            continue
        payload.append(_criterion_element(meeting, entry))
    kind = "dissent criteria" if dissent else "criteria"
    note = None if payload else f"no {kind} recorded for {decision_id}"
    return _answer(ast, payload, note)


def _handle_contradictions(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    speaker = ast.arg("speaker")
    if speaker is not None:
        _require_speaker(meetings, speaker)
    payload = []
    for meeting in meetings:
        for c in find_contradictions(meeting, speaker):
            payload.append(
                {
                    "meeting": meeting.id,
                    "speaker": c.speaker,
                    "alternative": c.alternative,
                    "earlier": c.earlier,
                    "later": c.later,
                    "earlier_polarity": c.earlier_polarity,
                    "later_polarity": c.later_polarity,
                    "evidence": [_ref(meeting, c.earlier), _ref(meeting, c.later)],
                }
            )
    note = None if payload else "no contradictions found"
    return _answer(ast, payload, note)


def _handle_democratic(ast: QueryAst, meetings: list[Meeting]) -> Answer:
    decision_id = ast.arg("decision")
    meeting = _find_decision(meetings, decision_id)
    judgement = assess_democratic(meeting, decision_id)
    stance_refs = [
        _ref(meeting, e)
        for e, _, a in stance_events(meeting, "ACCEPT") + stance_events(meeting, "REJECT")
        if a in set(judgement.alternatives)
    ]
    deduped = list({json.dumps(r, sort_keys=True): r for r in stance_refs}.values())
    element = {
        "meeting": judgement.meeting,
        "decision": judgement.decision,
        "alternatives": list(judgement.alternatives),
        "verdict": judgement.verdict,
        "explicit_accepts": list(judgement.explicit_accepts),
        "explicit_rejects": list(judgement.explicit_rejects),
        "participants": list(judgement.participants),
        "rule": judgement.rule,
        "evidence": [_ref(meeting, decision_id)] + deduped,
    }
    return _answer(ast, [element])


def _handle_find(ast: QueryAst, index: IndexSet, meetings: list[Meeting]) -> Answer:
    granularity = ast.arg("granularity") or "episode"
    wanted = {m.id for m in meetings}
    hits = search_passages(index, ast.arg("terms"), granularity=granularity)
    payload = []
    for hit in hits:
        if hit.ref.meeting not in wanted:
            continue
        payload.append(
            {
                "meeting": hit.ref.meeting,
                "granularity": hit.ref.granularity,
                "segment": hit.ref.segment,
                "score": hit.score,
                "evidence": [
                    {
                        "meeting": hit.ref.meeting,
                        "segment": hit.ref.segment,
                        "granularity": hit.ref.granularity,
                    }
                ],
            }
        )
    note = None if payload else "no matching passages"
    return _answer(ast, payload, note)


def execute(ast: QueryAst, index: IndexSet) -> Answer:
    """Run a parsed query against an index set's corpus."""
    meetings = _selected_meetings(index, ast)
    if ast.template == "objections":
        return _handle_objections(ast, meetings)
    if ast.template == "position":
        return _handle_position(ast, meetings)
    if ast.template == "contributions":
        return _handle_contributions(ast, meetings)
    if ast.template == "supporters":
        return _handle_supporters(ast, meetings)
    if ast.template == "rejecters":
        return _handle_rejecters(ast, meetings)
    if ast.template == "chosen":
        return _handle_chosen(ast, meetings)
    if ast.template == "why_rejected":
        return _handle_why_rejected(ast, meetings)
    if ast.template == "open_issues":
        return _handle_open_issues(ast, meetings)
    if ast.template == "criteria":
        return _handle_criteria(ast, meetings)
    if ast.template == "dissent_criteria":
        return _handle_criteria(ast, meetings, dissent=True)
    if ast.template == "contradictions":
        return _handle_contradictions(ast, meetings)
    if ast.template == "democratic":
        return _handle_democratic(ast, meetings)
    return _handle_find(ast, index, meetings)


def run_query(text: str, index: IndexSet) -> Answer:
    return execute(parse_query(text), index)
