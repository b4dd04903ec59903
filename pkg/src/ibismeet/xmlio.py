"""XML interchange for meetings.

The exporter is deterministic (fixed element order, fixed attribute
order, two-space indent), so exporting, importing, and exporting again
reproduces the original bytes exactly.  The document structure is
described by the shipped ``mds-meeting.xsd``.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from xml.sax.saxutils import escape, quoteattr

from .errors import ModelError, StoreError
from .model import (
    ArgLabel,
    Document,
    Episode,
    Meeting,
    Participant,
    ReplyToEdge,
    Turn,
    Utterance,
)

XML_SCHEMA = "ibismeet/mds@1"


def _attrs(pairs) -> str:
    out = []
    for key, value in pairs:
        if value is None:
            continue
        out.append(f" {key}={quoteattr(str(value))}")
    return "".join(out)


def export_mds_xml(meeting: Meeting) -> bytes:
    lines: list[str] = ['<?xml version="1.0" encoding="UTF-8"?>']
    push = lines.append
    push(
        "<meeting"
        + _attrs(
            [
                ("schema", XML_SCHEMA),
                ("id", meeting.id),
                ("title", meeting.title),
                ("date", meeting.date),
            ]
        )
        + ">"
    )
    push("  <participants>")
    for p in meeting.participants:
        push("    <participant" + _attrs([("id", p.id), ("name", p.name), ("role", p.role)]) + "/>")
    push("  </participants>")
    push("  <utterances>")
    for u in meeting.utterances:
        push(
            "    <utterance"
            + _attrs(
                [
                    ("id", u.id),
                    ("speaker", u.speaker),
                    ("start", repr(float(u.start))),
                    ("end", repr(float(u.end))),
                    ("modality", u.modality),
                ]
            )
            + ">"
        )
        for tag in u.da_tags:
            push(f"      <da>{escape(tag)}</da>")
        push(f"      <text>{escape(u.text)}</text>")
        push("    </utterance>")
    push("  </utterances>")
    push("  <turns>")
    for t in meeting.turns:
        push("    <turn" + _attrs([("id", t.id), ("speaker", t.speaker)]) + ">")
        for utt_id in t.utterances:
            push(f'      <u ref={quoteattr(utt_id)}/>')
        push("    </turn>")
    push("  </turns>")
    push("  <episodes" + _attrs([("root", meeting.root)]) + ">")
    for e in meeting.episodes:
        attrs = [
            ("id", e.id),
            ("category", e.label.category),
            ("parameter", e.label.parameter),
            ("topic", e.label.topic),
            ("speaker", e.attributed_speaker),
            ("target", e.target),
        ]
        if e.turn_span is not None:
            attrs += [("first", e.turn_span[0]), ("last", e.turn_span[1])]
        if e.children:
            push("    <episode" + _attrs(attrs) + ">")
            for child in e.children:
                push(f"      <child ref={quoteattr(child)}/>")
            push("    </episode>")
        else:
            push("    <episode" + _attrs(attrs) + "/>")
    push("  </episodes>")
    if meeting.reply_to:
        push("  <replies>")
        for edge in meeting.reply_to:
            push("    <reply" + _attrs([("source", edge.source)]) + ">")
            for target in edge.targets:
                push(f"      <to ref={quoteattr(target)}/>")
            push("    </reply>")
        push("  </replies>")
    if meeting.documents:
        push("  <documents>")
        for d in meeting.documents:
            push("    <document" + _attrs([("id", d.id), ("title", d.title)]) + ">")
            push(f"      <text>{escape(d.text)}</text>")
            push("    </document>")
        push("  </documents>")
    push("</meeting>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def _text_of(element, child_tag: str) -> str:
    node = element.find(child_tag)
    if node is None:
        raise StoreError(f"<{element.tag}> is missing <{child_tag}>")
    return node.text or ""


def import_mds_xml(blob: bytes) -> Meeting:
    try:
        root = ET.fromstring(blob)
    except ET.ParseError as exc:
        raise StoreError(f"not well-formed XML: {exc}") from None
    if root.tag != "meeting":
        raise StoreError(f"expected <meeting> document, got <{root.tag}>")
    if root.get("schema") != XML_SCHEMA:
        raise StoreError(f"unsupported schema {root.get('schema')!r}")
    try:
        participants = tuple(
            Participant(id=p.get("id"), name=p.get("name"), role=p.get("role"))
            for p in root.findall("participants/participant")
        )
        utterances = tuple(
            Utterance(
                id=u.get("id"),
                speaker=u.get("speaker"),
                start=float(u.get("start")),
                end=float(u.get("end")),
                text=_text_of(u, "text"),
                modality=u.get("modality"),
                da_tags=tuple(d.text or "" for d in u.findall("da")),
            )
            for u in root.findall("utterances/utterance")
        )
        turns = tuple(
            Turn(
                id=t.get("id"),
                speaker=t.get("speaker"),
                utterances=tuple(u.get("ref") for u in t.findall("u")),
            )
            for t in root.findall("turns/turn")
        )
        episodes_node = root.find("episodes")
        if episodes_node is None:
            raise StoreError("<meeting> is missing <episodes>")
        episodes = []
        for e in episodes_node.findall("episode"):
            first, last = e.get("first"), e.get("last")
            if (first is None) != (last is None):
                raise StoreError(f"episode {e.get('id')!r} has half a turn span")
            episodes.append(
                Episode(
                    id=e.get("id"),
                    label=ArgLabel(
                        category=e.get("category"),
                        parameter=e.get("parameter"),
                        topic=e.get("topic"),
                    ),
                    turn_span=(first, last) if first is not None else None,
                    children=tuple(c.get("ref") for c in e.findall("child")),
                    attributed_speaker=e.get("speaker"),
                    target=e.get("target"),
                )
            )
        reply_to = tuple(
            ReplyToEdge(
                source=r.get("source"),
                targets=tuple(t.get("ref") for t in r.findall("to")),
            )
            for r in root.findall("replies/reply")
        )
        documents = tuple(
            Document(id=d.get("id"), title=d.get("title"), text=_text_of(d, "text"))
            for d in root.findall("documents/document")
        )
        return Meeting(
            id=root.get("id"),
            title=root.get("title") or "",
            date=root.get("date") or "",
            participants=participants,
            utterances=utterances,
            turns=turns,
            episodes=tuple(episodes),
            root=episodes_node.get("root"),
            reply_to=reply_to,
            documents=documents,
        )
    except (TypeError, ValueError, ModelError) as exc:
        raise StoreError(f"malformed meeting XML: {exc}") from None
