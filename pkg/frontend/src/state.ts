/** View state and its transitions.
 *
 * Transitions are pure: pending edits accumulate in the buffer and
 * reach the server only through submitPending. The displayed report
 * always belongs to the revision in `etag`.
 */

import { ApiClient, ApiError } from "./api.js";
import type { GrammarRules } from "./grammar.js";
import { nextEpisodeId } from "./meeting.js";
import { childPrecheck, replyPrecheck } from "./precheck.js";
import type {
  AnswerDoc,
  EditOp,
  MeetingDoc,
  SuggestionDoc,
  ValidationReport,
  Violation,
} from "./types.js";

export interface ViewState {
  meeting: MeetingDoc | null;
  etag: string | null;
  grammar: GrammarRules | null;
  selectedEpisode: string | null;
  selectedTurn: string | null;
  pendingEdits: EditOp[];
  report: ValidationReport | null;
  answer: AnswerDoc | null;
  suggestions: SuggestionDoc[];
  blocked: Violation | null;
  offline: boolean;
  conflict: boolean;
}

export function initialState(): ViewState {
  return {
    meeting: null,
    etag: null,
    grammar: null,
    selectedEpisode: null,
    selectedTurn: null,
    pendingEdits: [],
    report: null,
    answer: null,
    suggestions: [],
    blocked: null,
    offline: false,
    conflict: false,
  };
}

export function withMeeting(state: ViewState, meeting: MeetingDoc, etag: string): ViewState {
  return {
    ...state,
    meeting,
    etag,
    selectedEpisode: null,
    selectedTurn: null,
    pendingEdits: [],
    report: null,
    blocked: null,
    conflict: false,
  };
}

export function selectEpisode(state: ViewState, episodeId: string | null): ViewState {
  return { ...state, selectedEpisode: episodeId, blocked: null };
}

export function selectTurn(state: ViewState, turnId: string | null): ViewState {
  return { ...state, selectedTurn: turnId };
}

export function queueEdit(state: ViewState, op: EditOp): ViewState {
  return { ...state, pendingEdits: [...state.pendingEdits, op], blocked: null };
}

export function clearEdits(state: ViewState): ViewState {
  return { ...state, pendingEdits: [] };
}

/** Queue a reply-to link, or refuse it with the violation the server
 * would raise. Nothing is queued on refusal. */
export function attemptReplyLink(
  state: ViewState,
  sourceId: string,
  targetId: string,
): ViewState {
  if (state.meeting === null) return state;
  const violation = replyPrecheck(state.meeting, sourceId, targetId);
  if (violation !== null) return { ...state, blocked: violation };
  return queueEdit(state, { op: "add_reply_to", source: sourceId, targets: [targetId] });
}

/** Queue an episode insertion, or refuse an unlicensed child. */
export function attemptInsert(
  state: ViewState,
  parentId: string,
  category: string,
  parameter: string | null,
  turnSpan: [string, string] | null,
): ViewState {
  if (state.meeting === null || state.grammar === null) return state;
  const violation = childPrecheck(state.grammar, state.meeting, parentId, category, parameter);
  if (violation !== null) return { ...state, blocked: violation };
  const op: EditOp = { op: "insert_episode", parent: parentId, category };
  if (parameter !== null) op.parameter = parameter;
  if (turnSpan !== null) op.turn_span = turnSpan;
  return queueEdit(state, op);
}

/** The edit batch that realizes one suggestion: the grouping episode,
 * its children with explicit ids, then the proposed reply edges. */
export function buildSuggestionEdits(meeting: MeetingDoc, suggestion: SuggestionDoc): EditOp[] {
  const taken = new Set(meeting.episodes.map((e) => e.id));
  let n = meeting.episodes.length;
  const claim = (): string => {
    while (taken.has(`e${n}`)) n += 1;
    const id = `e${n}`;
    taken.add(id);
    return id;
  };
  const splitLabel = (label: string): { category: string; parameter?: string } => {
    const match = /^([A-Z_]+)(?:\(([a-z_]+)\))?$/.exec(label);
    if (!match) throw new Error(`bad suggestion label: ${label}`);
    return match[2] === undefined
      ? { category: match[1] }
      : { category: match[1], parameter: match[2] };
  };
  const parentId = claim();
  const ops: EditOp[] = [
    {
      op: "insert_episode",
      parent: meeting.root,
      ...splitLabel(suggestion.label),
      turn_span: suggestion.turn_span,
      id: parentId,
    },
  ];
  const childIds = suggestion.children.map(() => claim());
  suggestion.children.forEach((child, index) => {
    ops.push({
      op: "insert_episode",
      parent: parentId,
      ...splitLabel(child.label),
      turn_span: child.turn_span,
      id: childIds[index],
    });
  });
  suggestion.children.forEach((child, index) => {
    if (child.replies_to !== null) {
      ops.push({
        op: "add_reply_to",
        source: childIds[index],
        targets: [childIds[child.replies_to]],
      });
    }
  });
  return ops;
}

export function acceptSuggestion(state: ViewState, index: number): ViewState {
  if (state.meeting === null) return state;
  const suggestion = state.suggestions[index];
  if (suggestion === undefined) return state;
  let next = state;
  for (const op of buildSuggestionEdits(state.meeting, suggestion)) {
    next = queueEdit(next, op);
  }
  return { ...next, suggestions: state.suggestions.filter((_, i) => i !== index) };
}

export function dismissSuggestion(state: ViewState, index: number): ViewState {
  return { ...state, suggestions: state.suggestions.filter((_, i) => i !== index) };
}

/** Send the buffer to the server. A stale etag marks a conflict and
 * keeps the buffer so nothing is lost across the reload prompt. */
export async function submitPending(api: ApiClient, state: ViewState): Promise<ViewState> {
  if (state.meeting === null || state.pendingEdits.length === 0) return state;
  try {
    const revision = await api.postEdits(
      state.meeting.id,
      state.pendingEdits,
      state.etag ?? undefined,
    );
    return {
      ...state,
      meeting: revision.meeting,
      etag: revision.etag,
      pendingEdits: [],
      conflict: false,
    };
  } catch (error) {
    if (error instanceof ApiError && error.status === 412) {
      return { ...state, conflict: true };
    }
    throw error;
  }
}
