"""Sentence-aligned bitexts, tagged tokens, and oracle word lists.

File formats:
  * plain bitext: two parallel UTF-8 files, one sentence per line, tokens
    separated by single spaces;
  * tagged bitext: same, each token written ``surface/TAG`` (split at the
    last slash, so surfaces may contain slashes);
  * oracle list: UTF-8 TSV, one ``source<TAB>target`` pair per line.

Input is assumed pre-tokenized and pre-stemmed. Everything returned here is
immutable and safe to share read-only across parallel workers.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field

from .errors import FormatError


@dataclass(frozen=True)
class Token:
    surface: str
    position: int
    tag: str | None = None

    def __post_init__(self):
        if not self.surface or any(c.isspace() for c in self.surface):
            raise ValueError(f"bad token surface: {self.surface!r}")
        if self.position < 0:
            raise ValueError(f"negative token position: {self.position}")


@dataclass(frozen=True)
class SentencePair:
    """One aligned sentence pair; the unit of candidate generation."""

    id: int
    source: tuple[Token, ...]
    target: tuple[Token, ...]

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"negative pair id: {self.id}")
        for name, side in (("source", self.source), ("target", self.target)):
            if not side:
                raise ValueError(f"pair {self.id}: empty {name} sentence")
            if [t.position for t in side] != list(range(len(side))):
                raise ValueError(f"pair {self.id}: {name} positions not consecutive from 0")


@dataclass(frozen=True)
class Bitext:
    """An ordered corpus of sentence pairs plus per-type document frequencies
    (number of pairs a type occurs in, counted once per pair)."""

    pairs: tuple[SentencePair, ...]
    source_vocab: dict[str, int]
    target_vocab: dict[str, int]

    @classmethod
    def from_pairs(cls, pairs) -> "Bitext":
        pairs = tuple(pairs)
        ids = {p.id for p in pairs}
        if len(ids) != len(pairs):
            raise ValueError("duplicate pair ids")
        src, tgt = Counter(), Counter()
        for p in pairs:
            src.update({t.surface for t in p.source})
            tgt.update({t.surface for t in p.target})
        return cls(pairs, dict(src), dict(tgt))

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass(frozen=True)
class OracleList:
    """A trusted set of (source word, target word) translation pairs, with
    per-side indexes for locus lookup."""

    pairs: frozenset[tuple[str, str]]
    by_source: dict[str, frozenset[str]] = field(repr=False, default_factory=dict)
    by_target: dict[str, frozenset[str]] = field(repr=False, default_factory=dict)

    @classmethod
    def from_pairs(cls, pairs) -> "OracleList":
        pairs = frozenset(pairs)
        by_source, by_target = {}, {}
        for s, t in pairs:
            by_source.setdefault(s, set()).add(t)
            by_target.setdefault(t, set()).add(s)
        return cls(
            pairs,
            {s: frozenset(ts) for s, ts in by_source.items()},
            {t: frozenset(ss) for t, ss in by_target.items()},
        )

    def __contains__(self, pair) -> bool:
        return pair in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def parse_sentence(line: str, tagged: bool = False, lowercase: bool = False,
                   where: str = "") -> tuple[Token, ...]:
    """Parse one sentence line into tokens. `where` prefixes error messages
    with file/line context."""
    tokens = []
    for i, part in enumerate(line.split(" ")):
        if not part:
            raise FormatError(f"{where}empty token (adjacent spaces?)")
        if tagged:
            surface, slash, tag = part.rpartition("/")
            if not slash or not tag:
                raise FormatError(f"{where}token {part!r} lacks a /TAG suffix")
            if not surface:
                raise FormatError(f"{where}token {part!r} has an empty surface")
        else:
            surface, tag = part, None
        if lowercase:
            surface = surface.lower()
        tokens.append(Token(surface, i, tag))
    return tuple(tokens)


def _read_lines(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return f.read().splitlines()


def load_bitext(source_path, target_path, tagged: bool = False,
                lowercase: bool = False) -> Bitext:
    """Load two parallel one-sentence-per-line files. Pair ids are line
    indexes, so provenance stays reproducible downstream."""
    src_lines = _read_lines(source_path)
    tgt_lines = _read_lines(target_path)
    if len(src_lines) != len(tgt_lines):
        raise FormatError(
            f"aligned files differ in length: {source_path} has {len(src_lines)} "
            f"lines, {target_path} has {len(tgt_lines)}"
        )
    pairs = []
    for i, (sline, tline) in enumerate(zip(src_lines, tgt_lines)):
        for path, line in ((source_path, sline), (target_path, tline)):
            if not line.strip():
                raise FormatError(f"{path}:{i + 1}: empty sentence")
        source = parse_sentence(sline, tagged, lowercase, where=f"{source_path}:{i + 1}: ")
        target = parse_sentence(tline, tagged, lowercase, where=f"{target_path}:{i + 1}: ")
        pairs.append(SentencePair(i, source, target))
    return Bitext.from_pairs(pairs)


def restrict_bitext(bitext: Bitext, max_len: int) -> Bitext:
    """Keep only pairs whose sides are both at most max_len tokens long.
    Pair ids are preserved; the result may be empty."""
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    return Bitext.from_pairs(
        p for p in bitext.pairs if len(p.source) <= max_len and len(p.target) <= max_len
    )


def split_bitext(bitext: Bitext, test_count: int, seed: int) -> tuple[Bitext, Bitext]:
    """Deterministic seeded train/test split; both sides keep the original
    pair order. Same seed, same split."""
    n = len(bitext.pairs)
    if not 0 <= test_count <= n:
        raise ValueError(f"test_count {test_count} exceeds corpus size {n}")
    rng = random.Random(seed)
    test_idx = set(rng.sample(range(n), test_count))
    train = Bitext.from_pairs(p for i, p in enumerate(bitext.pairs) if i not in test_idx)
    test = Bitext.from_pairs(p for i, p in enumerate(bitext.pairs) if i in test_idx)
    return train, test


def load_oracle_list(path, lowercase: bool = False) -> OracleList:
    """Load a source<TAB>target word list; duplicate lines collapse."""
    pairs = set()
    for i, line in enumerate(_read_lines(path)):
        fields = line.split("\t")
        if len(fields) != 2:
            raise FormatError(f"{path}:{i + 1}: expected 2 tab-separated fields, got {len(fields)}")
        s, t = fields
        if lowercase:
            s, t = s.lower(), t.lower()
        pairs.add((s, t))
    return OracleList.from_pairs(pairs)
