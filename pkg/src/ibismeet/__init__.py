"""Corpus engine for argumentatively annotated meeting transcripts."""

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
from .errors import (
    GrammarError,
    IbismeetError,
    ModelError,
    NotFoundError,
    QueryParseError,
    ReplyOrderError,
    StoreError,
    TranscriptError,
    VocabularyError,
)
from .grammar import GrammarRuleSet, LabelPattern, load_grammar, parse_grammar, serialize_grammar
from .mds import ValidationReport, Violation, add_reply_to, context_chain, insert_episode, refine_episode, validate
from .transcript import attach_dialogue_acts, load_vocabulary, mark_topic_shifts, parse_transcript, segment_turns
from .indexing import IndexSet, SegmentRef, build_indexes
from .queries import Answer, execute, parse_query, render_query, run_query, summarize_decisions
from .store import Store

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "ArgLabel",
    "Document",
    "Episode",
    "GrammarError",
    "GrammarRuleSet",
    "IbismeetError",
    "IndexSet",
    "LabelPattern",
    "Meeting",
    "ModelError",
    "NotFoundError",
    "Participant",
    "QueryParseError",
    "ReplyOrderError",
    "ReplyToEdge",
    "SegmentRef",
    "Store",
    "StoreError",
    "TranscriptError",
    "Turn",
    "Utterance",
    "ValidationReport",
    "Violation",
    "VocabularyError",
    "add_reply_to",
    "attach_dialogue_acts",
    "build_indexes",
    "context_chain",
    "execute",
    "insert_episode",
    "load_grammar",
    "load_vocabulary",
    "mark_topic_shifts",
    "parse_grammar",
    "parse_query",
    "parse_transcript",
    "refine_episode",
    "render_query",
    "run_query",
    "segment_turns",
    "serialize_grammar",
    "summarize_decisions",
    "validate",
]
