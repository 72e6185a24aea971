"""Cascaded back-off translation.

Lexicons are ordered by measured 1-best precision on a development bitext;
each source word is translated with the rank-1 entry of the most precise
lexicon that knows it. Words no lexicon knows stay untranslated, and count
as wrong when scoring.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Bitext
from .errors import FormatError
from .evaluation import evaluate
from .scoring import NBestLexicon, format_header

UNKNOWN = "UNKNOWN"  # literal written for untranslatable tokens


@dataclass(frozen=True)
class ChainEntry:
    label: str
    lexicon: NBestLexicon
    measured_precision: float


@dataclass(frozen=True)
class BackoffChain:
    entries: tuple[ChainEntry, ...]

    def __post_init__(self):
        precisions = [e.measured_precision for e in self.entries]
        if any(x < y for x, y in zip(precisions, precisions[1:])):
            raise ValueError("chain precision must be non-increasing")

    def __len__(self) -> int:
        return len(self.entries)


def order_chain(lexicons, dev: Bitext, workers: int = 1) -> BackoffChain:
    """Measure each labeled lexicon's 1-best precision on the dev bitext and
    order the chain by it, most precise first; ties go by label."""
    if not lexicons:
        raise ValueError("need at least one lexicon")
    if not dev.pairs:
        raise ValueError("dev bitext is empty")
    scored = [
        ChainEntry(label, lex, evaluate(lex, dev, "precision", workers=workers).cumulative_hit_rate[0])
        for label, lex in lexicons
    ]
    scored.sort(key=lambda e: (-e.measured_precision, e.label))
    return BackoffChain(tuple(scored))


def translate_word(word: str, chain: BackoffChain) -> str | None:
    """Rank-1 translation from the first chain lexicon that knows the word,
    None if none does."""
    for entry in chain.entries:
        translations = entry.lexicon.translations(word)
        if translations:
            return translations[0].target
    return None


def score_corpus(chain: BackoffChain, test: Bitext) -> float:
    """Token-level percent correct: a translation is right when it matches a
    not-yet-consumed target token of its pair (leftmost match consumed)."""
    if not test.pairs:
        raise ValueError("test bitext is empty")
    correct = 0
    total = 0
    for pair in test.pairs:
        remaining = [t.surface for t in pair.target]
        for tok in pair.source:
            total += 1
            translation = translate_word(tok.surface, chain)
            if translation is not None and translation in remaining:
                remaining.remove(translation)
                correct += 1
    return correct / total


def read_chain_spec(path) -> list[tuple[str, str]]:
    """Read `label<TAB>lexicon-path` lines; relative lexicon paths resolve
    against the spec file's directory."""
    import os

    base = os.path.dirname(os.path.abspath(path))
    chain = []
    with open(path, encoding="utf-8") as f:
        for i, line in enumerate(f.read().splitlines()):
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise FormatError(f"{path}:{i + 1}: expected label<TAB>lexicon-path")
            label, lex_path = fields
            if not os.path.isabs(lex_path):
                lex_path = os.path.join(base, lex_path)
            chain.append((label, lex_path))
    if not chain:
        raise FormatError(f"{path}: chain spec names no lexicons")
    return chain


def write_translations(chain: BackoffChain, test: Bitext, path,
                       header: dict | None = None) -> None:
    """Write `source_token<TAB>translation` rows, one sentence per blank-line
    separated block."""
    lines = format_header(header or {})
    for pair in test.pairs:
        for tok in pair.source:
            translation = translate_word(tok.surface, chain)
            lines.append(f"{tok.surface}\t{translation if translation is not None else UNKNOWN}")
        lines.append("")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
