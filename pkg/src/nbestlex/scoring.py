"""Co-occurrence counting, the G2 dependence statistic, and lexicon assembly.

Counting is binary per sentence pair: a pair contributes at most once to
each cell, with margins taken from the raw corpus and the joint cell from
the candidates that survived filtering. A pair where S and T co-occur but
the candidate was filtered away therefore counts against the pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import chain

from .corpus import Bitext
from .errors import ContractViolationError, FormatError


@dataclass(frozen=True)
class ContingencyTable:
    """Presence/absence counts over sentence pairs: a = both sides present
    (and the candidate surviving), b = source only, c = target only,
    d = neither."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for cell, value in zip("abcd", (self.a, self.b, self.c, self.d)):
            if value < 0:
                raise ValueError(f"negative cell {cell}: {value}")

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


def count_cooccurrences(candidates, corpus: Bitext) -> dict[tuple[str, str], ContingencyTable]:
    """Build one contingency table per distinct surviving (S, T) word pair.

    `candidates` is any iterable of surviving CandidatePair objects (nested
    per-pair lists are accepted). Cell a counts pairs with at least one
    surviving candidate for (S, T); margins come from the corpus document
    frequencies.
    """
    known_ids = {p.id for p in corpus.pairs}
    joint: dict[tuple[str, str], set[int]] = {}
    for cand in candidates:
        if isinstance(cand, list):
            raise TypeError("pass a flat iterable; use flatten_candidates() on nested lists")
        if cand.pair_id not in known_ids:
            raise ContractViolationError(
                f"candidate {cand.source_word!r}/{cand.target_word!r} cites unknown "
                f"pair id {cand.pair_id}"
            )
        joint.setdefault((cand.source_word, cand.target_word), set()).add(cand.pair_id)
    total = len(corpus.pairs)
    tables = {}
    for (s, t), ids in joint.items():
        a = len(ids)
        b = corpus.source_vocab[s] - a
        c = corpus.target_vocab[t] - a
        # heavy filtering can push the neither-cell below zero because pairs
        # with both words present but no surviving candidate are debited
        # from both margins; clamp, the table must stay non-negative
        d = max(total - a - b - c, 0)
        tables[(s, t)] = ContingencyTable(a, b, c, d)
    return tables


def flatten_candidates(per_pair) -> list:
    return list(chain.from_iterable(per_pair))


def g2(table: ContingencyTable) -> float:
    """Binomial log-likelihood ratio of the table, 2 * sum O*ln(O/E) with E
    the independence expectation; zero cells contribute nothing and a zero
    margin makes the statistic zero."""
    a, b, c, d = table.a, table.b, table.c, table.d
    n = a + b + c + d
    if n == 0:
        raise ValueError("G2 is undefined for an all-zero table")
    row0, row1, col0, col1 = a + b, c + d, a + c, b + d
    if 0 in (row0, row1, col0, col1):
        return 0.0
    score = 0.0
    for o, row, col in ((a, row0, col0), (b, row0, col1), (c, row1, col0), (d, row1, col1)):
        if o:
            # ln(O/E) = log1p((o*n - row*col) / (row*col)) with an exact
            # integer numerator, so near-independence keeps full relative
            # precision and exact independence yields exactly 0.0
            score += o * math.log1p((o * n - row * col) / (row * col))
    return max(2.0 * score, 0.0)


@dataclass(frozen=True)
class LexiconEntry:
    target: str
    score: float
    cooccurrence: int


@dataclass(frozen=True)
class NBestLexicon:
    """Up to n_max ranked candidate translations per source word."""

    n_max: int
    entries: dict[str, tuple[LexiconEntry, ...]]

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"negative n_max: {self.n_max}")

    def translations(self, word: str) -> tuple[LexiconEntry, ...]:
        return self.entries.get(word, ())

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def build_lexicon(counts: dict[tuple[str, str], ContingencyTable], n: int,
                  min_cooccurrence: int = 1) -> NBestLexicon:
    """Rank each source word's targets by G2, break ties by co-occurrence
    count then target byte order, and keep the top n with at least
    min_cooccurrence joint pairs."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ranked: dict[str, list[tuple[float, int, str]]] = {}
    for (s, t), table in counts.items():
        if table.a < min_cooccurrence:
            continue
        ranked.setdefault(s, []).append((g2(table), table.a, t))
    entries = {}
    for s, scored in ranked.items():
        scored.sort(key=lambda item: (-item[0], -item[1], item[2]))
        entries[s] = tuple(LexiconEntry(t, score, count) for score, count, t in scored[:n])
    return NBestLexicon(n, entries)


def format_header(config: dict) -> list[str]:
    return [f"# {key} = {value}" for key, value in config.items()]


def parse_header(lines) -> dict[str, str]:
    header = {}
    for line in lines:
        body = line.lstrip("#").strip()
        if " = " in body:
            key, _, value = body.partition(" = ")
            header[key.strip()] = value.strip()
    return header


def write_lexicon(lexicon: NBestLexicon, path, header: dict | None = None) -> None:
    """Write `source<TAB>rank<TAB>target<TAB>score<TAB>cooccurrence` rows,
    grouped by source word in byte order; identical lexicons serialize to
    identical bytes."""
    lines = format_header({"n": lexicon.n_max, **(header or {})})
    for s in sorted(lexicon.entries):
        for rank, entry in enumerate(lexicon.entries[s], 1):
            lines.append(f"{s}\t{rank}\t{entry.target}\t{entry.score!r}\t{entry.cooccurrence}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


def read_lexicon(path) -> NBestLexicon:
    with open(path, encoding="utf-8") as f:
        lines = f.read().splitlines()
    header = parse_header(line for line in lines if line.startswith("#"))
    entries: dict[str, list[LexiconEntry]] = {}
    for i, line in enumerate(lines):
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 5:
            raise FormatError(f"{path}:{i + 1}: expected 5 tab-separated fields, got {len(fields)}")
        s, rank, t, score, count = fields
        try:
            rank_no, score_val, count_val = int(rank), float(score), int(count)
        except ValueError as e:
            raise FormatError(f"{path}:{i + 1}: {e}") from e
        rows = entries.setdefault(s, [])
        if rank_no != len(rows) + 1:
            raise FormatError(f"{path}:{i + 1}: rank {rank_no} out of sequence for {s!r}")
        rows.append(LexiconEntry(t, score_val, count_val))
    n_max = int(header["n"]) if "n" in header else max((len(v) for v in entries.values()), default=0)
    return NBestLexicon(n_max, {s: tuple(rows) for s, rows in entries.items()})
