/** The two structural pre-checks mirrored from the server.
 *
 * Only REPLY_NOT_EARLIER and CHILD_UNLICENSED are duplicated here, so a
 * doomed edit is flagged before it is submitted; everything else stays
 * with the server's validator.
 */

import { type GrammarRules, licensedChildren, patternMatches } from "./grammar.js";
import { episodeById, episodeInterval } from "./meeting.js";
import type { MeetingDoc, Violation } from "./types.js";

export function replyPrecheck(
  meeting: MeetingDoc,
  sourceId: string,
  targetId: string,
): Violation | null {
  const fail = (message: string): Violation => ({
    code: "REPLY_NOT_EARLIER",
    subject: sourceId,
    message,
  });
  if (sourceId === targetId) return fail(`${sourceId}: cannot reply to itself`);
  const source = episodeInterval(meeting, sourceId);
  if (source === null) return fail(`${sourceId}: cannot reply from an episode without a span`);
  const target = episodeInterval(meeting, targetId);
  if (target === null || target[0] >= source[0]) {
    return fail(`${sourceId}: reply target ${targetId} does not start earlier`);
  }
  return null;
}

export function childPrecheck(
  rules: GrammarRules,
  meeting: MeetingDoc,
  parentId: string,
  childCategory: string,
  childParameter: string | null,
): Violation | null {
  const parent = episodeById(meeting, parentId);
  const licensed = licensedChildren(rules, parent.category, parent.parameter).some(
    (pattern) => patternMatches(pattern, childCategory, childParameter),
  );
  if (licensed) return null;
  const childLabel =
    childParameter === null ? childCategory : `${childCategory}(${childParameter})`;
  return {
    code: "CHILD_UNLICENSED",
    subject: parentId,
    message: `${parent.category} does not admit ${childLabel} children`,
  };
}
