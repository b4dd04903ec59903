"""Exception hierarchy shared across the package."""


class IbismeetError(Exception):
    """Base class for all domain errors."""


class ModelError(IbismeetError):
    """A domain value violates one of its construction invariants."""


class ReplyOrderError(ModelError):
    """A reply-to edge would point at a non-earlier episode."""


class TranscriptError(IbismeetError):
    """Raised for malformed transcript input; carries the offending line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VocabularyError(IbismeetError):
    """Unknown dialogue-act tag; lists nearest known tags when possible."""

    def __init__(self, tag: str, suggestions: list[str] | None = None):
        self.tag = tag
        self.suggestions = suggestions or []
        message = f"unknown dialogue-act tag {tag!r}"
        if self.suggestions:
            message += " (did you mean: " + ", ".join(self.suggestions) + "?)"
        super().__init__(message)


class GrammarError(IbismeetError):
    """Malformed grammar file or label pattern; carries a position."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        self.position = position
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        elif position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class QueryParseError(IbismeetError):
    """Query string rejected; offset is the byte position of the problem."""

    def __init__(self, message: str, offset: int):
        self.offset = offset
        super().__init__(f"{message} (at offset {offset})")


class NotFoundError(IbismeetError):
    """A referenced entity (meeting, episode, utterance, ...) does not exist."""


class StoreError(IbismeetError):
    """Persistence failure: corrupt file, checksum mismatch, bad manifest."""
