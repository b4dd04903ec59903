"""Argumentation dependency grammar: which labels may nest or reply.

A grammar is a set of licensing rules over label patterns.  Child rules
say which labels may appear directly under a parent; reply rules say
which labels may reply to which antecedents.  A pattern names a
category with an exact parameter or a wildcard; a bare category is the
wildcard.  The parameters a category may carry are those spelled out
explicitly somewhere in the rules.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .errors import GrammarError
from .model import CATEGORIES, ArgLabel

_PATTERN_RE = re.compile(r"^([A-Z_]+)(?:\(([a-z_]+|\*)\))?$")


@dataclass(frozen=True)
class LabelPattern:
    """CATEGORY, CATEGORY(param), or CATEGORY(*); None parameter = wildcard."""

    category: str
    parameter: str | None = None

    @classmethod
    def parse(cls, text: str, position: int = 0) -> "LabelPattern":
        match = _PATTERN_RE.match(text)
        if not match:
            raise GrammarError(f"malformed label pattern {text!r}", position=position)
        category, parameter = match.group(1), match.group(2)
        if category not in CATEGORIES:
            raise GrammarError(f"unknown category {category!r}", position=position)
        if parameter == "*":
            parameter = None
        return cls(category, parameter)

    def matches(self, label: ArgLabel) -> bool:
        if label.category != self.category:
            return False
        return self.parameter is None or label.parameter == self.parameter

    def render(self) -> str:
        return f"{self.category}({self.parameter})" if self.parameter else self.category


@dataclass(frozen=True)
class GrammarRuleSet:
    """Child and reply licensing rules, as (subject, object) pattern pairs."""

    child_rules: tuple[tuple[LabelPattern, LabelPattern], ...]
    reply_rules: tuple[tuple[LabelPattern, LabelPattern], ...]
    exclusive: frozenset[str] = frozenset()

    def licenses_child(self, parent: ArgLabel, child: ArgLabel) -> bool:
        return any(p.matches(parent) and c.matches(child) for p, c in self.child_rules)

    def licenses_reply(self, replier: ArgLabel, antecedent: ArgLabel) -> bool:
        return any(r.matches(replier) and a.matches(antecedent) for r, a in self.reply_rules)

    def children_allowed(self, parent: ArgLabel) -> tuple[LabelPattern, ...]:
        return tuple(c for p, c in self.child_rules if p.matches(parent))

    def is_exclusive(self, parent: ArgLabel) -> bool:
        return parent.category in self.exclusive

    def declared_parameters(self, category: str) -> frozenset[str]:
        """Parameters spelled out for the category anywhere in the rules."""
        params = set()
        for pair in self.child_rules + self.reply_rules:
            for pattern in pair:
                if pattern.category == category and pattern.parameter is not None:
                    params.add(pattern.parameter)
        return frozenset(params)

    def knows_parameter(self, label: ArgLabel) -> bool:
        return label.parameter is None or label.parameter in self.declared_parameters(label.category)


def parse_grammar(text: str) -> GrammarRuleSet:
    child_rules: list[tuple[LabelPattern, LabelPattern]] = []
    reply_rules: list[tuple[LabelPattern, LabelPattern]] = []
    exclusive: set[str] = set()
    offset = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line_start = offset
        offset += len(raw) + 1
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        keyword = parts[0]
        if keyword == "exclusive":
            if len(parts) != 2:
                raise GrammarError("exclusive takes one category", line=lineno)
            if parts[1] not in CATEGORIES:
                raise GrammarError(f"unknown category {parts[1]!r}", line=lineno)
            exclusive.add(parts[1])
            continue
        if keyword not in ("child", "reply"):
            raise GrammarError(f"unknown rule keyword {keyword!r}", line=lineno)
        if len(parts) != 3:
            raise GrammarError(f"{keyword} rule takes two patterns", line=lineno)
        try:
            subject = LabelPattern.parse(parts[1], position=line_start + raw.find(parts[1]))
            obj = LabelPattern.parse(parts[2], position=line_start + raw.rfind(parts[2]))
        except GrammarError as exc:
            raise GrammarError(str(exc), line=lineno) from None
        rule = (subject, obj)
        if keyword == "child" and rule not in child_rules:
            child_rules.append(rule)
        elif keyword == "reply" and rule not in reply_rules:
            reply_rules.append(rule)
    return GrammarRuleSet(tuple(child_rules), tuple(reply_rules), frozenset(exclusive))


def serialize_grammar(grammar: GrammarRuleSet) -> str:
    lines = []
    for category in sorted(grammar.exclusive):
        lines.append(f"exclusive {category}")
    for parent, child in grammar.child_rules:
        lines.append(f"child {parent.render()} {child.render()}")
    for replier, antecedent in grammar.reply_rules:
        lines.append(f"reply {replier.render()} {antecedent.render()}")
    return "\n".join(lines) + "\n"


def load_grammar(path=None) -> GrammarRuleSet:
    """Load a grammar file, or the built-in default when path is None."""
    if path is None:
        text = resources.files("ibismeet.data").joinpath("mds-default.grammar").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    return parse_grammar(text)
