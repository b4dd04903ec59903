/** Client-side reading of the grammar text.
 *
 * The server stays authoritative; this parse exists only to populate
 * the label picker and to run the two cheap structural pre-checks
 * before an edit is submitted.
 */

export interface LabelPattern {
  category: string;
  /** null means the (*) wildcard; a bare category is the same thing. */
  parameter: string | null;
}

export interface GrammarRules {
  child: Array<[LabelPattern, LabelPattern]>;
  reply: Array<[LabelPattern, LabelPattern]>;
  exclusive: Set<string>;
}

const PATTERN = /^([A-Z_]+)(?:\(([a-z_]+|\*)\))?$/;

export function parsePattern(text: string): LabelPattern {
  const match = PATTERN.exec(text);
  if (!match) throw new Error(`bad label pattern: ${text}`);
  const parameter = match[2] === undefined || match[2] === "*" ? null : match[2];
  return { category: match[1], parameter };
}

export function renderPattern(pattern: LabelPattern): string {
  return pattern.parameter === null
    ? pattern.category
    : `${pattern.category}(${pattern.parameter})`;
}

export function parseGrammar(text: string): GrammarRules {
  const rules: GrammarRules = { child: [], reply: [], exclusive: new Set() };
  text.split("\n").forEach((raw, index) => {
    const line = raw.trim();
    if (line === "" || line.startsWith("#")) return;
    const parts = line.split(/\s+/);
    const where = `grammar line ${index + 1}`;
    if (parts[0] === "exclusive" && parts.length === 2) {
      rules.exclusive.add(parts[1]);
      return;
    }
    if ((parts[0] === "child" || parts[0] === "reply") && parts.length === 3) {
      const pair: [LabelPattern, LabelPattern] = [
        parsePattern(parts[1]),
        parsePattern(parts[2]),
      ];
      (parts[0] === "child" ? rules.child : rules.reply).push(pair);
      return;
    }
    throw new Error(`${where}: unrecognized rule: ${line}`);
  });
  return rules;
}

export function patternMatches(
  pattern: LabelPattern,
  category: string,
  parameter: string | null,
): boolean {
  if (pattern.category !== category) return false;
  return pattern.parameter === null || pattern.parameter === parameter;
}

/** Child patterns an episode with this label may contain. */
export function licensedChildren(
  rules: GrammarRules,
  parentCategory: string,
  parentParameter: string | null,
): LabelPattern[] {
  const seen = new Set<string>();
  const out: LabelPattern[] = [];
  for (const [parent, child] of rules.child) {
    if (!patternMatches(parent, parentCategory, parentParameter)) continue;
    const key = renderPattern(child);
    if (seen.has(key)) continue;
    seen.add(key);
    out.push(child);
  }
  return out;
}

export function replyLicensed(
  rules: GrammarRules,
  source: { category: string; parameter: string | null },
  target: { category: string; parameter: string | null },
): boolean {
  return rules.reply.some(
    ([from, to]) =>
      patternMatches(from, source.category, source.parameter) &&
      patternMatches(to, target.category, target.parameter),
  );
}
