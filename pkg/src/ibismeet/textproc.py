"""Shared token pipeline: lowercase words, stopword removal, stemming."""
from __future__ import annotations

import re
from importlib import resources

from .stemming import stem

_WORD_RE = re.compile(r"[a-z]+")


def load_stopwords(path=None) -> frozenset[str]:
    if path is None:
        text = resources.files("ibismeet.data").joinpath("stopwords.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    words = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            words.add(line)
    return frozenset(words)


def tokenize(text: str) -> list[str]:
    return _WORD_RE.findall(text.lower())


def content_stems(text: str, stopwords: frozenset[str]) -> list[str]:
    """Stems of the non-stopword tokens, in text order."""
    return [stem(token) for token in tokenize(text) if token not in stopwords]
