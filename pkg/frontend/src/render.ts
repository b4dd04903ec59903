/** HTML fragments for the workbench panes.
 *
 * Everything here returns a string; main.ts owns the DOM. Evidence
 * items render as links only when they resolve to a transcript
 * position, so every rendered jump works.
 */

import { episodeLabel, jumpTarget, spanTurns, turnById } from "./meeting.js";
import type {
  AnswerDoc,
  EpisodeDoc,
  EvidenceRef,
  MeetingDoc,
  SuggestionDoc,
  ValidationReport,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function renderTurnList(
  meeting: MeetingDoc,
  highlighted: Set<string>,
  selectedTurn: string | null = null,
): string {
  const rows = meeting.turns.map((turn) => {
    const texts = turn.utterances
      .map((id) => meeting.utterances.find((u) => u.id === id))
      .filter((u) => u !== undefined && u.text !== "")
      .map((u) => escapeHtml((u as { text: string }).text));
    const classes = ["turn"];
    if (highlighted.has(turn.id)) classes.push("highlight");
    if (turn.id === selectedTurn) classes.push("selected");
    return `
      <li id="turn-${escapeHtml(turn.id)}" class="${classes.join(" ")}" data-turn="${escapeHtml(turn.id)}">
        <span class="turn-id">${escapeHtml(turn.id)}</span>
        <span class="turn-speaker">${escapeHtml(turn.speaker ?? "(silence)")}</span>
        <span class="turn-text">${texts.join(" ")}</span>
      </li>`;
  });
  return `<ol class="turn-list">${rows.join("")}</ol>`;
}

function renderEpisodeNode(meeting: MeetingDoc, episode: EpisodeDoc, selected: string | null): string {
  const bits = [
    `<span class="episode-label">${escapeHtml(episodeLabel(episode))}</span>`,
    `<span class="episode-id">${escapeHtml(episode.id)}</span>`,
  ];
  if (episode.topic) bits.push(`<span class="episode-topic">${escapeHtml(episode.topic)}</span>`);
  if (episode.target) bits.push(`<span class="episode-target">${escapeHtml(episode.target)}</span>`);
  if (episode.turn_span) {
    bits.push(
      `<span class="episode-span">${escapeHtml(episode.turn_span[0])}..${escapeHtml(episode.turn_span[1])}</span>`,
    );
  }
  const children = episode.children
    .map((id) => meeting.episodes.find((e) => e.id === id))
    .filter((e): e is EpisodeDoc => e !== undefined)
    .map((child) => renderEpisodeNode(meeting, child, selected));
  const classes = episode.id === selected ? "episode selected" : "episode";
  return `
    <li class="${classes}" data-episode="${escapeHtml(episode.id)}">
      <span class="episode-head" data-episode="${escapeHtml(episode.id)}">${bits.join(" ")}</span>
      ${children.length > 0 ? `<ul>${children.join("")}</ul>` : ""}
    </li>`;
}

export function renderEpisodeTree(meeting: MeetingDoc, selected: string | null = null): string {
  const root = meeting.episodes.find((e) => e.id === meeting.root);
  if (!root) return `<p class="empty">no episodes</p>`;
  return `<ul class="episode-tree">${renderEpisodeNode(meeting, root, selected)}</ul>`;
}

export function renderContextChain(meeting: MeetingDoc, chain: string[]): string {
  if (chain.length === 0) return `<p class="context-chain empty">no context</p>`;
  const items = chain.map((id) => {
    const episode = meeting.episodes.find((e) => e.id === id);
    const label = episode ? episodeLabel(episode) : id;
    return `
      <li data-episode="${escapeHtml(id)}">
        <span class="chain-label">${escapeHtml(label)}</span>
        <span class="chain-id">${escapeHtml(id)}</span>
      </li>`;
  });
  return `<ol class="context-chain">${items.join("")}</ol>`;
}

export function renderReport(report: ValidationReport): string {
  if (report.ok) return `<p class="report ok">${escapeHtml(report.meeting)}: no violations</p>`;
  const rows = report.violations.map(
    (v) => `
      <li class="violation" data-episode="${escapeHtml(v.subject)}">
        <span class="violation-code">${escapeHtml(v.code)}</span>
        <span class="violation-subject">${escapeHtml(v.subject)}</span>
        <span class="violation-message">${escapeHtml(v.message)}</span>
      </li>`,
  );
  return `<ul class="report violations">${rows.join("")}</ul>`;
}

export function renderEvidence(meeting: MeetingDoc | null, refs: EvidenceRef[]): string {
  const items = refs.map((ref) => {
    const text = escapeHtml(ref.label ?? ref.episode ?? ref.segment ?? ref.meeting);
    const turn = meeting === null ? null : jumpTarget(meeting, ref);
    if (turn === null) return `<span class="evidence">${text}</span>`;
    return `<a class="evidence" href="#turn-${escapeHtml(turn)}" data-jump-turn="${escapeHtml(turn)}"${
      ref.episode !== undefined ? ` data-jump-episode="${escapeHtml(ref.episode)}"` : ""
    }>${text}</a>`;
  });
  return items.join(" ");
}

function renderAnswerValue(value: unknown): string {
  if (value === null) return `<em>none</em>`;
  if (Array.isArray(value)) {
    if (value.every((v) => typeof v === "string")) {
      return escapeHtml(value.join(", ") || "(none)");
    }
    return value.map((v) => renderAnswerValue(v)).join("");
  }
  if (typeof value === "object") {
    const rows = Object.entries(value as Record<string, unknown>)
      .filter(([key]) => key !== "evidence")
      .map(
        ([key, v]) =>
          `<div class="answer-field"><span class="field-name">${escapeHtml(key)}</span> ${renderAnswerValue(v)}</div>`,
      );
    return `<div class="answer-object">${rows.join("")}</div>`;
  }
  return escapeHtml(String(value));
}

export function renderAnswer(meeting: MeetingDoc | null, answer: AnswerDoc): string {
  const rows = answer.payload.map((element) => {
    const fields = Object.entries(element)
      .filter(([key]) => key !== "evidence")
      .map(
        ([key, value]) =>
          `<div class="answer-field"><span class="field-name">${escapeHtml(key)}</span> ${renderAnswerValue(value)}</div>`,
      );
    const evidence = element.evidence ?? [];
    return `
      <li class="answer-row">
        ${fields.join("")}
        <div class="answer-evidence">${renderEvidence(meeting, evidence)}</div>
      </li>`;
  });
  const note = answer.note === null ? "" : `<p class="answer-note">${escapeHtml(answer.note)}</p>`;
  return `
    <section class="answer" data-template="${escapeHtml(answer.template)}">
      <h3>${escapeHtml(answer.template)} <span class="answer-kind">${escapeHtml(answer.kind)}</span></h3>
      ${rows.length > 0 ? `<ul class="answer-payload">${rows.join("")}</ul>` : ""}
      ${note}
    </section>`;
}

/** A parse failure with the caret under the offending byte. */
export function renderParseError(query: string, message: string, offset: number): string {
  const caret = " ".repeat(Math.max(0, offset)) + "^";
  return `
    <section class="parse-error">
      <p>${escapeHtml(message)}</p>
      <pre class="query-echo">${escapeHtml(query)}\n${caret}</pre>
    </section>`;
}

export function renderSuggestions(meeting: MeetingDoc, suggestions: SuggestionDoc[]): string {
  if (suggestions.length === 0) return `<p class="empty">no suggestions</p>`;
  const rows = suggestions.map((s, index) => {
    const children = s.children
      .map((c) => `${escapeHtml(c.label)} at ${escapeHtml(c.turn_span[0])}`)
      .join(", ");
    return `
      <li class="suggestion" data-suggestion="${index}">
        <span class="suggestion-label">${escapeHtml(s.label)}</span>
        <span class="suggestion-span">${escapeHtml(s.turn_span[0])}..${escapeHtml(s.turn_span[1])}</span>
        <span class="suggestion-confidence">${s.confidence.toFixed(2)}</span>
        <div class="suggestion-children">${children}</div>
        <button type="button" data-accept-suggestion="${index}">accept</button>
        <button type="button" data-dismiss-suggestion="${index}">dismiss</button>
      </li>`;
  });
  return `<ul class="suggestion-list">${rows.join("")}</ul>`;
}

/** Turns covered by the selected episode, for transcript highlighting. */
export function highlightedTurns(meeting: MeetingDoc, episodeId: string | null): Set<string> {
  if (episodeId === null) return new Set();
  return new Set(spanTurns(meeting, episodeId));
}

export function describeTurn(meeting: MeetingDoc, turnId: string): string {
  const turn = turnById(meeting, turnId);
  return `${turn.id} (${turn.speaker ?? "silence"})`;
}
