/** Wire types, field for field what the service sends. */

export interface UtteranceDoc {
  id: string;
  speaker: string | null;
  start: number;
  end: number;
  text: string;
  modality: string;
  da_tags: string[];
}

export interface TurnDoc {
  id: string;
  speaker: string | null;
  utterances: string[];
}

export interface EpisodeDoc {
  id: string;
  category: string;
  parameter: string | null;
  topic: string | null;
  target: string | null;
  attributed_speaker: string | null;
  turn_span: [string, string] | null;
  children: string[];
}

export interface ReplyToDoc {
  source: string;
  targets: string[];
}

export interface DocumentDoc {
  id: string;
  title: string;
  text: string;
}

export interface MeetingDoc {
  schema: string;
  id: string;
  title: string;
  date: string;
  participants: string[];
  documents: DocumentDoc[];
  utterances: UtteranceDoc[];
  turns: TurnDoc[];
  episodes: EpisodeDoc[];
  reply_to: ReplyToDoc[];
  root: string;
}

export interface MeetingListEntry {
  id: string;
  title: string;
  date: string;
  episodes: number;
}

export interface Violation {
  code: string;
  subject: string;
  message: string;
}

export interface ValidationReport {
  meeting: string;
  ok: boolean;
  violations: Violation[];
}

export interface EvidenceRef {
  meeting: string;
  episode?: string;
  label?: string;
  segment?: string;
  granularity?: string;
}

export type AnswerElement = Record<string, unknown> & { evidence?: EvidenceRef[] };

export interface AnswerDoc {
  template: string;
  kind: string;
  payload: AnswerElement[];
  evidence: EvidenceRef[];
  note: string | null;
}

export interface SuggestionChildDoc {
  label: string;
  turn_span: [string, string];
  confidence: number;
  replies_to: number | null;
}

export interface SuggestionDoc {
  label: string;
  turn_span: [string, string];
  confidence: number;
  evidence: string[];
  children: SuggestionChildDoc[];
}

/** One entry of a POST /meetings/{id}/edits batch. */
export type EditOp =
  | {
      op: "insert_episode";
      parent: string;
      category: string;
      parameter?: string;
      topic?: string;
      turn_span?: [string, string];
      attributed_speaker?: string;
      target?: string;
      id?: string;
    }
  | { op: "add_reply_to"; source: string; targets: string[] };
