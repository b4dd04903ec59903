/** Fixture loading and fetch stubs shared by the test files.
 *
 * The JSON fixtures are recorded service responses (see
 * scripts/record-fixtures.py), so every expectation here is pinned to
 * what the real API sends.
 */

import { readFileSync } from "node:fs";

import type { AnswerDoc, MeetingDoc, SuggestionDoc } from "../src/types.js";

function fixture(name: string): string {
  return readFileSync(new URL(`./fixtures/${name}`, import.meta.url), "utf-8");
}

export function m1(): MeetingDoc {
  return JSON.parse(fixture("m1.json")) as MeetingDoc;
}

export function m1Bare(): MeetingDoc {
  return JSON.parse(fixture("m1_bare.json")) as MeetingDoc;
}

export function grammarText(): string {
  return fixture("grammar.mds");
}

export function openIssuesAnswer(): AnswerDoc {
  return JSON.parse(fixture("open_issues.json")) as AnswerDoc;
}

export function parseErrorBody(): { error: { code: string; message: string; offset: number } } {
  return JSON.parse(fixture("parse_error.json"));
}

export function bareSuggestions(): SuggestionDoc[] {
  return JSON.parse(fixture("suggestions_bare.json")) as SuggestionDoc[];
}

export interface RecordedCall {
  url: string;
  method: string;
  headers: Headers;
  body: unknown;
}

export interface FetchStub {
  fetchFn: (input: string, init?: RequestInit) => Promise<Response>;
  calls: RecordedCall[];
}

/** A fetch replacement that pops canned responses in order. */
export function stubFetch(responses: Array<Response | Error>): FetchStub {
  const calls: RecordedCall[] = [];
  const queue = [...responses];
  return {
    calls,
    fetchFn: async (input, init) => {
      calls.push({
        url: input,
        method: init?.method ?? "GET",
        headers: new Headers(init?.headers),
        body: typeof init?.body === "string" ? JSON.parse(init.body) : null,
      });
      const next = queue.shift();
      if (next === undefined) throw new Error(`unexpected request: ${input}`);
      if (next instanceof Error) throw next;
      return next;
    },
  };
}

export function jsonResponse(body: unknown, status = 200, headers: Record<string, string> = {}): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json", ...headers },
  });
}
