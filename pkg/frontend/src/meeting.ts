/** Pure lookups over a meeting document. */

import type { EpisodeDoc, EvidenceRef, MeetingDoc, TurnDoc } from "./types.js";

export function episodeById(meeting: MeetingDoc, id: string): EpisodeDoc {
  const episode = meeting.episodes.find((e) => e.id === id);
  if (!episode) throw new Error(`no episode ${id} in ${meeting.id}`);
  return episode;
}

export function turnById(meeting: MeetingDoc, id: string): TurnDoc {
  const turn = meeting.turns.find((t) => t.id === id);
  if (!turn) throw new Error(`no turn ${id} in ${meeting.id}`);
  return turn;
}

export function episodeLabel(episode: EpisodeDoc): string {
  return episode.parameter === null
    ? episode.category
    : `${episode.category}(${episode.parameter})`;
}

export function turnStart(meeting: MeetingDoc, turnId: string): number {
  const turn = turnById(meeting, turnId);
  return Math.min(
    ...meeting.utterances.filter((u) => turn.utterances.includes(u.id)).map((u) => u.start),
  );
}

export function turnEnd(meeting: MeetingDoc, turnId: string): number {
  const turn = turnById(meeting, turnId);
  return Math.max(
    ...meeting.utterances.filter((u) => turn.utterances.includes(u.id)).map((u) => u.end),
  );
}

/** Seconds covered by an episode, or null when it has no turn span. */
export function episodeInterval(
  meeting: MeetingDoc,
  episodeId: string,
): [number, number] | null {
  const span = episodeById(meeting, episodeId).turn_span;
  if (span === null) return null;
  return [turnStart(meeting, span[0]), turnEnd(meeting, span[1])];
}

/** Turn ids covered by an episode's span, in transcript order. */
export function spanTurns(meeting: MeetingDoc, episodeId: string): string[] {
  const span = episodeById(meeting, episodeId).turn_span;
  if (span === null) return [];
  const ids = meeting.turns.map((t) => t.id);
  const first = ids.indexOf(span[0]);
  const last = ids.indexOf(span[1]);
  if (first < 0 || last < 0 || last < first) return [];
  return ids.slice(first, last + 1);
}

export function parentOf(meeting: MeetingDoc, episodeId: string): string | null {
  const parent = meeting.episodes.find((e) => e.children.includes(episodeId));
  return parent ? parent.id : null;
}

export function ancestorsOf(meeting: MeetingDoc, episodeId: string): string[] {
  const out: string[] = [];
  let current = parentOf(meeting, episodeId);
  while (current !== null) {
    out.push(current);
    current = parentOf(meeting, current);
  }
  return out;
}

export function replyTargets(meeting: MeetingDoc, episodeId: string): string[] {
  const edge = meeting.reply_to.find((e) => e.source === episodeId);
  return edge ? edge.targets : [];
}

function chainOrder(meeting: MeetingDoc, a: string, b: string): number {
  const ia = episodeInterval(meeting, a);
  const ib = episodeInterval(meeting, b);
  if (ia === null || ib === null) {
    if (ia !== ib) return ia === null ? 1 : -1;
  } else if (ia[0] !== ib[0]) {
    return ia[0] - ib[0];
  } else if (ia[1] !== ib[1]) {
    return ia[1] - ib[1];
  }
  return a < b ? -1 : a > b ? 1 : 0;
}

/** Episodes an episode responds to, directly or through its ancestors:
 * the reply closure of the episode and everything above it, minus the
 * episode itself and the root, in time order. */
export function contextChain(meeting: MeetingDoc, episodeId: string): string[] {
  const members = new Set<string>([episodeId, ...ancestorsOf(meeting, episodeId)]);
  let grew = true;
  while (grew) {
    grew = false;
    for (const id of [...members]) {
      for (const target of replyTargets(meeting, id)) {
        if (!members.has(target)) {
          members.add(target);
          grew = true;
        }
      }
    }
  }
  members.delete(episodeId);
  members.delete(meeting.root);
  return [...members].sort((a, b) => chainOrder(meeting, a, b));
}

/** Transcript position an evidence item should jump to: the first turn
 * of the referenced episode or segment. */
export function jumpTarget(meeting: MeetingDoc, ref: EvidenceRef): string | null {
  if (ref.meeting !== meeting.id) return null;
  if (ref.episode !== undefined) {
    const span = episodeById(meeting, ref.episode).turn_span;
    return span === null ? null : span[0];
  }
  if (ref.segment === undefined) return null;
  if (ref.granularity === "turn") return ref.segment;
  if (ref.granularity === "utterance") {
    const turn = meeting.turns.find((t) => t.utterances.includes(ref.segment as string));
    return turn ? turn.id : null;
  }
  if (ref.granularity === "episode") {
    const span = episodeById(meeting, ref.segment).turn_span;
    return span === null ? null : span[0];
  }
  return meeting.turns.length > 0 ? meeting.turns[0].id : null;
}

/** Next free episode id, matching the server's numbering. */
export function nextEpisodeId(meeting: MeetingDoc): string {
  const taken = new Set(meeting.episodes.map((e) => e.id));
  let n = meeting.episodes.length;
  while (taken.has(`e${n}`)) n += 1;
  return `e${n}`;
}
