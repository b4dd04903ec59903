"""Command-line interface.

Exit codes: 0 on success, 1 when a check found problems (validation
violations), 2 for usage errors, unreadable input, or missing entities.
The store directory comes from --store or the IBISMEET_STORE variable.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from .canonical import canonical_bytes
from .errors import IbismeetError
from .grammar import load_grammar
from .indexing import build_indexes
from .mds import apply_edits, validate
from .queries import parse_query, execute
from .store import Store
from .transcript import load_vocabulary, parse_transcript


class SystemExit2(Exception):
    """Usage-level failure; reported on stderr with exit code 2."""


def _store_from(args) -> Store:
    root = args.store or os.environ.get("IBISMEET_STORE")
    if not root:
        raise SystemExit2("no store given: pass --store or set IBISMEET_STORE")
    return Store(root)


def _grammar_from(args, store: Store):
    if getattr(args, "grammar", None):
        return load_grammar(args.grammar)
    return store.load_grammar()


def _emit(args, data, text: str) -> None:
    if getattr(args, "format", "text") == "structured":
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_ingest(args) -> int:
    store = _store_from(args)
    try:
        with open(args.transcript, encoding="utf-8") as handle:
            raw = handle.read()
    except OSError as exc:
        raise SystemExit2(f"cannot read transcript: {exc}") from None
    meeting = parse_transcript(
        raw, vocabulary=load_vocabulary(), title=args.title, date=args.date or ""
    )
    if args.id:
        meeting = replace(meeting, id=args.id, title=args.title or args.id)
    if args.edits:
        try:
            with open(args.edits, encoding="utf-8") as handle:
                edits = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise SystemExit2(f"cannot read edits: {exc}") from None
        meeting = apply_edits(meeting, edits, grammar=_grammar_from(args, store))
    digest = store.save_meeting(meeting)
    _emit(
        args,
        {"id": meeting.id, "sha256": digest, "turns": len(meeting.turns)},
        f"ingested {meeting.id}: {len(meeting.utterances)} utterances, "
        f"{len(meeting.turns)} turns, checksum {digest[:12]}",
    )
    return 0


def cmd_validate(args) -> int:
    store = _store_from(args)
    meeting = store.load_meeting(args.meeting)
    report = validate(meeting, _grammar_from(args, store))
    if args.format == "structured":
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        print(f"{meeting.id}: {len(report.violations)} violations")
        for v in report.violations:
            print(f"{meeting.id}: {v.code} at {v.subject}: {v.message}")
    return 0 if report.ok else 1


def cmd_suggest(args) -> int:
    from .assist import suggest_annotations

    store = _store_from(args)
    meeting = store.load_meeting(args.meeting)
    suggestions = suggest_annotations(meeting, _grammar_from(args, store))
    data = [
        {
            "label": str(s.label),
            "turn_span": list(s.turn_span),
            "confidence": s.confidence,
            "evidence": list(s.evidence),
            "children": [
                {
                    "label": str(c.label),
                    "turn_span": list(c.turn_span),
                    "confidence": c.confidence,
                    "replies_to": c.replies_to,
                }
                for c in s.children
            ],
        }
        for s in suggestions
    ]
    lines = [
        f"{s.label} over {s.turn_span[0]}..{s.turn_span[1]} "
        f"(confidence {s.confidence:.3f}, {len(s.children)} parts)"
        for s in suggestions
    ] or ["no suggestions"]
    _emit(args, data, "\n".join(lines))
    return 0


def _load_corpus(store: Store):
    return [store.load_meeting(entry["id"]) for entry in store.list_meetings()]


def cmd_index(args) -> int:
    store = _store_from(args)
    index = build_indexes(_load_corpus(store))
    stats = {
        "meetings": len(index.meetings),
        "segments": {g: index.segment_count(g) for g in sorted(index.vectors)},
        "episodes": len(index.arg_entries),
        "documents": len(index.doc_links),
    }
    text = ", ".join(
        [f"{stats['meetings']} meeting(s)"]
        + [f"{n} {g} segments" for g, n in stats["segments"].items()]
    )
    _emit(args, stats, text)
    return 0


def _payload_line(item: dict) -> str:
    if "episode" in item:
        parts = [f"{item.get('meeting', '?')}/{item['episode']}"]
        if item.get("label"):
            parts.append(item["label"])
        speaker = item.get("speaker") or item.get("holder")
        if speaker:
            parts.append(f"by {speaker}")
        extras = {
            k: item[k] for k in ("role", "polarity", "attached_to") if item.get(k) is not None
        }
        if extras:
            parts.append(" ".join(f"{k}={v}" for k, v in extras.items()))
        return " ".join(parts)
    if "segment" in item:
        return f"{item['meeting']}/{item['segment']} score={item['score']:.4f}"
    plain = {k: v for k, v in item.items() if k != "evidence"}
    return json.dumps(plain, sort_keys=True)


def cmd_query(args) -> int:
    store = _store_from(args)
    index = build_indexes(_load_corpus(store))
    answer = execute(parse_query(args.query), index)
    if args.format == "structured":
        print(json.dumps(answer.to_dict(), indent=2, sort_keys=True))
        return 0
    for item in answer.payload:
        print(_payload_line(item))
    if answer.note:
        print(f"note: {answer.note}")
    return 0


def cmd_export(args) -> int:
    store = _store_from(args)
    meeting = store.load_meeting(args.meeting)
    if args.format == "xml":
        from .xmlio import export_mds_xml

        blob = export_mds_xml(meeting)
    else:
        blob = canonical_bytes(meeting)
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(blob)
    else:
        sys.stdout.buffer.write(blob)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(_store_from(args), ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ibismeet",
        description="Annotate, validate, index, and query meeting transcripts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grammar=False, fmt=("text", "structured")):
        p.add_argument("--store", help="store directory (default: $IBISMEET_STORE)")
        if grammar:
            p.add_argument("--grammar", help="grammar file overriding the store's")
        if fmt:
            p.add_argument("--format", choices=fmt, default=fmt[0])

    p = sub.add_parser("ingest", help="parse a TSV transcript into the store")
    p.add_argument("transcript")
    p.add_argument("--id", help="override the meeting id from the file")
    p.add_argument("--title")
    p.add_argument("--date")
    p.add_argument("--edits", help="JSON edit list to apply after parsing")
    common(p, grammar=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("validate", help="check a stored meeting against the grammar")
    p.add_argument("meeting")
    common(p, grammar=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("suggest", help="propose episode structure for a stored meeting")
    p.add_argument("meeting")
    common(p, grammar=True)
    p.set_defaults(func=cmd_suggest)

    p = sub.add_parser("index", help="build the retrieval indexes and report sizes")
    common(p)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="run a template query against the store")
    p.add_argument("query")
    common(p)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("export", help="write a meeting as XML or canonical JSON")
    p.add_argument("meeting")
    p.add_argument("--out", help="output file (default: stdout)")
    common(p, fmt=("xml", "structured"))
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.add_argument("--ui", help="directory of built workbench files to serve at /")
    common(p, fmt=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except SystemExit2 as exc:
        print(f"ibismeet: {exc}", file=sys.stderr)
        return 2
    except IbismeetError as exc:
        print(f"ibismeet: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
