import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { parseGrammar } from "../src/grammar.js";
import {
  acceptSuggestion,
  attemptInsert,
  attemptReplyLink,
  buildSuggestionEdits,
  initialState,
  queueEdit,
  selectEpisode,
  submitPending,
  withMeeting,
  type ViewState,
} from "../src/state.js";
import { bareSuggestions, grammarText, jsonResponse, m1, m1Bare, stubFetch } from "./helpers.js";

function loadedState(): ViewState {
  const state = withMeeting(initialState(), m1(), '"v1"');
  return { ...state, grammar: parseGrammar(grammarText()) };
}

describe("selection", () => {
  it("tracks the selected episode", () => {
    const state = selectEpisode(loadedState(), "e12");
    expect(state.selectedEpisode).toBe("e12");
    expect(selectEpisode(state, null).selectedEpisode).toBeNull();
  });
});

describe("edit buffer", () => {
  it("queues reply links that pass the pre-check", () => {
    const state = attemptReplyLink(loadedState(), "e13", "e6");
    expect(state.blocked).toBeNull();
    expect(state.pendingEdits).toEqual([
      { op: "add_reply_to", source: "e13", targets: ["e6"] },
    ]);
  });

  it("blocks later-to-earlier violations without queuing anything", () => {
    const state = attemptReplyLink(loadedState(), "e7", "e13");
    expect(state.blocked?.code).toBe("REPLY_NOT_EARLIER");
    expect(state.pendingEdits).toEqual([]);
  });

  it("blocks unlicensed children without queuing anything", () => {
    const state = attemptInsert(loadedState(), "e1", "DECISION", null, ["t1", "t1"]);
    expect(state.blocked?.code).toBe("CHILD_UNLICENSED");
    expect(state.pendingEdits).toEqual([]);
  });

  it("queues licensed insertions with their span and parameter", () => {
    const state = attemptInsert(loadedState(), "e4", "PROPOSE", "alternative", ["t13", "t13"]);
    expect(state.blocked).toBeNull();
    expect(state.pendingEdits).toEqual([
      {
        op: "insert_episode",
        parent: "e4",
        category: "PROPOSE",
        parameter: "alternative",
        turn_span: ["t13", "t13"],
      },
    ]);
  });
});

describe("submitting", () => {
  it("never touches the server while edits are only queued", () => {
    const stub = stubFetch([]);
    new ApiClient("", stub.fetchFn);
    let state = loadedState();
    state = attemptReplyLink(state, "e13", "e6");
    state = queueEdit(state, { op: "add_reply_to", source: "e14", targets: ["e6"] });
    expect(stub.calls).toHaveLength(0);
    expect(state.pendingEdits).toHaveLength(2);
  });

  it("posts the whole buffer once and adopts the new revision", async () => {
    const updated = m1();
    const stub = stubFetch([jsonResponse(updated, 200, { ETag: '"v2"' })]);
    const api = new ApiClient("", stub.fetchFn);
    let state = attemptReplyLink(loadedState(), "e13", "e6");
    state = await submitPending(api, state);
    expect(stub.calls).toHaveLength(1);
    expect(stub.calls[0].url).toBe("/meetings/M1/edits");
    expect(stub.calls[0].headers.get("If-Match")).toBe('"v1"');
    expect(stub.calls[0].body).toEqual({
      edits: [{ op: "add_reply_to", source: "e13", targets: ["e6"] }],
    });
    expect(state.pendingEdits).toEqual([]);
    expect(state.etag).toBe('"v2"');
  });

  it("keeps the buffer and flags the conflict on a stale revision", async () => {
    const stub = stubFetch([
      jsonResponse({ error: { code: "CONFLICT", message: "meeting changed" } }, 412),
    ]);
    const api = new ApiClient("", stub.fetchFn);
    let state = attemptReplyLink(loadedState(), "e13", "e6");
    state = await submitPending(api, state);
    expect(state.conflict).toBe(true);
    expect(state.pendingEdits).toHaveLength(1);
  });

  it("does nothing when the buffer is empty", async () => {
    const stub = stubFetch([]);
    const api = new ApiClient("", stub.fetchFn);
    const state = await submitPending(api, loadedState());
    expect(stub.calls).toHaveLength(0);
    expect(state.conflict).toBe(false);
  });
});

describe("suggestions", () => {
  it("expands the top suggestion into ids the server will assign", () => {
    const ops = buildSuggestionEdits(m1Bare(), bareSuggestions()[0]);
    expect(ops[0]).toEqual({
      op: "insert_episode",
      parent: "e0",
      category: "DISCUSSION",
      turn_span: ["t7", "t12"],
      id: "e1",
    });
    expect(ops[1]).toMatchObject({
      op: "insert_episode",
      parent: "e1",
      category: "PROPOSE",
      parameter: "alternative",
      turn_span: ["t7", "t7"],
      id: "e2",
    });
    expect(ops).toHaveLength(12);
    const replies = ops.filter((op) => op.op === "add_reply_to");
    expect(replies).toEqual([
      { op: "add_reply_to", source: "e3", targets: ["e2"] },
      { op: "add_reply_to", source: "e5", targets: ["e4"] },
      { op: "add_reply_to", source: "e7", targets: ["e6"] },
      { op: "add_reply_to", source: "e8", targets: ["e6"] },
    ]);
  });

  it("accepting queues the edits and removes the suggestion", () => {
    let state = withMeeting(initialState(), m1Bare(), '"v1"');
    state = { ...state, grammar: parseGrammar(grammarText()), suggestions: bareSuggestions() };
    const before = state.suggestions.length;
    state = acceptSuggestion(state, 0);
    expect(state.pendingEdits.length).toBeGreaterThan(0);
    expect(state.suggestions).toHaveLength(before - 1);
    expect(state.pendingEdits[0]).toMatchObject({ op: "insert_episode", category: "DISCUSSION" });
  });
});
