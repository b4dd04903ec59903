import { describe, expect, it } from "vitest";

import {
  contextChain,
  episodeById,
  episodeInterval,
  episodeLabel,
  jumpTarget,
  nextEpisodeId,
  spanTurns,
  turnStart,
} from "../src/meeting.js";
import { m1, m1Bare } from "./helpers.js";

describe("meeting lookups", () => {
  it("resolves episodes and labels", () => {
    const meeting = m1();
    expect(episodeLabel(episodeById(meeting, "e7"))).toBe("PROPOSE(alternative)");
    expect(episodeLabel(episodeById(meeting, "e15"))).toBe("DECISION");
    expect(() => episodeById(meeting, "e99")).toThrow("no episode e99");
  });

  it("computes turn and episode times", () => {
    const meeting = m1();
    expect(turnStart(meeting, "t1")).toBe(0);
    const interval = episodeInterval(meeting, "e3");
    expect(interval).not.toBeNull();
    expect((interval as [number, number])[0]).toBe(turnStart(meeting, "t7"));
  });

  it("lists the turns an episode covers", () => {
    expect(spanTurns(m1(), "e3")).toEqual(["t7", "t8", "t9", "t10", "t11", "t12"]);
    expect(spanTurns(m1(), "e1")).toEqual(["t1"]);
  });
});

describe("context chain", () => {
  it("walks ancestors and reply edges for e12", () => {
    // e12 sits under AGENDA and replies to e11, which replies to e5.
    expect(contextChain(m1(), "e12")).toEqual(["e2", "e5", "e11"]);
  });

  it("orders same-start members by interval end", () => {
    expect(contextChain(m1(), "e8")).toEqual(["e7", "e3"]);
  });

  it("is empty at the root", () => {
    expect(contextChain(m1(), "e0")).toEqual([]);
  });
});

describe("evidence jumps", () => {
  it("lands episode references on their first turn", () => {
    expect(jumpTarget(m1(), { meeting: "M1", episode: "e4" })).toBe("t13");
    expect(jumpTarget(m1(), { meeting: "M1", episode: "e9" })).toBe("t10");
  });

  it("resolves segment references per granularity", () => {
    const meeting = m1();
    expect(jumpTarget(meeting, { meeting: "M1", segment: "t5", granularity: "turn" })).toBe("t5");
    const holder = meeting.turns.find((t) => t.utterances.includes("u19"));
    expect(
      jumpTarget(meeting, { meeting: "M1", segment: "u19", granularity: "utterance" }),
    ).toBe(holder?.id);
    expect(
      jumpTarget(meeting, { meeting: "M1", segment: "e3", granularity: "episode" }),
    ).toBe("t7");
  });

  it("returns null for other meetings and spanless episodes", () => {
    expect(jumpTarget(m1(), { meeting: "M2", episode: "e4" })).toBeNull();
  });
});

describe("id allocation", () => {
  it("matches the server's next-free-id rule", () => {
    expect(nextEpisodeId(m1())).toBe("e17");
    expect(nextEpisodeId(m1Bare())).toBe("e1");
  });
});
