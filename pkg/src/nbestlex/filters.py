"""Candidate generation and the filter cascade.

Every sentence pair yields the full cross-product of (source word, target
word) candidates; an arbitrary subsequence of the four filters then prunes
them. Filters only ever remove candidates, so any cascade order is legal:

  * ``pos``      keeps candidates whose coarse part-of-speech tags match;
  * ``mrbd``     trusts a bilingual dictionary: where a dictionary pair
                 (S, T) occurs in a sentence pair, all candidates (S, not T)
                 and (not S, T) are removed there;
  * ``cognate``  same removal rule, with spelling-based matches as the
                 trusted pairs;
  * ``align``    picks a maximal non-crossing set of trusted matches as
                 partition loci and removes candidates that cross (or
                 half-straddle) any locus.

Dictionary and cognate matches are always computed from the raw sentence
pair, never from the surviving candidates, so cascade order changes which
removals happen but never which loci exist.
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources

from .cognate import LcsrParams, _surfaces_are_cognate
from .corpus import Bitext, OracleList, SentencePair
from .errors import ConfigurationError, ContractViolationError, FormatError

FILTER_NAMES = ("pos", "mrbd", "cognate", "align")

KIND_COGNATE = "cognate"
KIND_DICTIONARY = "dictionary"


@dataclass(frozen=True)
class CandidatePair:
    """One (source word, target word) hypothesis with the positions and the
    sentence pair it came from."""

    source_word: str
    target_word: str
    source_pos: int
    target_pos: int
    pair_id: int


@dataclass(frozen=True)
class Locus:
    """A trusted position match inside one sentence pair."""

    source_pos: int
    target_pos: int
    kind: str


@dataclass(frozen=True)
class TagMatchTable:
    """Coarse tag compatibility: ``match_sets`` says which coarse tags each
    coarse tag may pair with, ``remap`` folds tagger-specific fine tags down
    to coarse ones."""

    match_sets: dict[str, frozenset[str]]
    remap: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for tag, matches in self.match_sets.items():
            if tag not in matches:
                raise ValueError(f"tag {tag} does not match itself")
            for m in matches:
                if m not in self.match_sets:
                    raise ValueError(f"tag {m} appears in a match set but has none of its own")
        for fine, coarse in self.remap.items():
            if coarse not in self.match_sets:
                raise ValueError(f"remap target {coarse} (from {fine}) is not a known coarse tag")

    def coarse(self, tag: str) -> str:
        if tag in self.remap:
            return self.remap[tag]
        if tag in self.match_sets:
            return tag
        raise FormatError(f"tag {tag!r} is not mappable by the tag table")

    def tags_match(self, source_tag: str, target_tag: str) -> bool:
        return self.coarse(target_tag) in self.match_sets[self.coarse(source_tag)]


def load_tag_table(path) -> TagMatchTable:
    """Read a tag table file: ``COARSE: A,B,C`` match lines and
    ``FINE -> COARSE`` remap lines; blank lines and # comments ignored."""
    match_sets: dict[str, frozenset[str]] = {}
    remap: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for i, raw in enumerate(f.read().splitlines()):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "->" in line:
                fine, _, coarse = line.partition("->")
                fine, coarse = fine.strip(), coarse.strip()
                if not fine or not coarse:
                    raise FormatError(f"{path}:{i + 1}: malformed remap line {raw!r}")
                remap[fine] = coarse
            elif ":" in line:
                tag, _, rest = line.partition(":")
                tag = tag.strip()
                matches = frozenset(m.strip() for m in rest.split(",") if m.strip())
                if not tag or not matches:
                    raise FormatError(f"{path}:{i + 1}: malformed match line {raw!r}")
                match_sets[tag] = matches
            else:
                raise FormatError(f"{path}:{i + 1}: unrecognized line {raw!r}")
    try:
        return TagMatchTable(match_sets, remap)
    except ValueError as e:
        raise FormatError(f"{path}: {e}") from e


def default_tag_map_path() -> str:
    return str(resources.files("nbestlex").joinpath("data/tagmap_default.txt"))


def default_tag_table() -> TagMatchTable:
    """The tag table shipped with the package (see data/tagmap_default.txt)."""
    return load_tag_table(default_tag_map_path())


@dataclass(frozen=True)
class CascadeConfig:
    """An ordered filter list plus the resources the named filters need."""

    filters: tuple[str, ...] = ()
    lcsr: LcsrParams | None = None
    oracle: OracleList | None = None
    tag_table: TagMatchTable | None = None

    def __post_init__(self):
        seen = set()
        for name in self.filters:
            if name not in FILTER_NAMES:
                raise ConfigurationError(
                    f"unknown filter {name!r}; expected one of {', '.join(FILTER_NAMES)}"
                )
            if name in seen:
                raise ConfigurationError(f"duplicate filter {name!r} in cascade")
            seen.add(name)
        requirements = {
            "pos": (self.tag_table, "a tag match table"),
            "mrbd": (self.oracle, "an oracle word list"),
            "cognate": (self.lcsr, "LCSR parameters"),
            "align": (self.lcsr, "LCSR parameters"),
        }
        for name in self.filters:
            resource, what = requirements[name]
            if resource is None:
                raise ConfigurationError(f"filter {name!r} requires {what}")


def generate_candidates(pair: SentencePair) -> list[CandidatePair]:
    """The full cross-product: one candidate per (source pos, target pos)."""
    return [
        CandidatePair(s.surface, t.surface, s.position, t.position, pair.id)
        for s in pair.source
        for t in pair.target
    ]


def pos_filter(cands, pair: SentencePair, table: TagMatchTable) -> list[CandidatePair]:
    """Keep candidates whose coarse tags are compatible. Untagged or
    unmappable tokens are hard errors, silent passes would bias cascade
    comparisons."""
    coarse_src, coarse_tgt = [], []
    for side, out in ((pair.source, coarse_src), (pair.target, coarse_tgt)):
        for tok in side:
            if tok.tag is None:
                raise FormatError(
                    f"pair {pair.id}: token {tok.surface!r} has no tag; "
                    "the pos filter needs a tagged bitext"
                )
            out.append(table.coarse(tok.tag))
    return [
        c for c in cands
        if coarse_tgt[c.target_pos] in table.match_sets[coarse_src[c.source_pos]]
    ]


def oracle_matches(pair: SentencePair, oracle: OracleList) -> set[Locus]:
    """All position pairs whose surfaces form a dictionary pair."""
    found = set()
    for s in pair.source:
        partners = oracle.by_source.get(s.surface)
        if not partners:
            continue
        for t in pair.target:
            if t.surface in partners:
                found.add(Locus(s.position, t.position, KIND_DICTIONARY))
    return found


def cognate_matches(pair: SentencePair, params: LcsrParams) -> set[Locus]:
    """All position pairs whose surfaces pass the cognate test."""
    return {
        Locus(s.position, t.position, KIND_COGNATE)
        for s in pair.source
        for t in pair.target
        if _surfaces_are_cognate(s.surface, t.surface, params.cutoff, params.min_alpha_len)
    }


def oracle_filter(cands, matches: set[Locus]) -> list[CandidatePair]:
    """Trusted-pair removal: once a position is matched, only its matched
    partners survive as candidates for it; candidates between two unmatched
    positions pass through untouched."""
    if not matches:
        return list(cands)
    src_partners: dict[int, set[int]] = defaultdict(set)
    tgt_partners: dict[int, set[int]] = defaultdict(set)
    for m in matches:
        src_partners[m.source_pos].add(m.target_pos)
        tgt_partners[m.target_pos].add(m.source_pos)
    out = []
    for c in cands:
        sp = src_partners.get(c.source_pos)
        if sp is not None and c.target_pos not in sp:
            continue
        tp = tgt_partners.get(c.target_pos)
        if tp is not None and c.source_pos not in tp:
            continue
        out.append(c)
    return out


def select_loci(matches) -> list[Locus]:
    """Choose partition loci from a match set: at most one locus per source
    and per target position, pairwise non-crossing, of maximum cardinality
    (a longest strictly-increasing chain in both coordinates). Ties go to
    the lexicographically smallest position sequence.
    """
    # matches at the same positions may differ only in kind; keep one,
    # preferring the dictionary as the more explicit authority
    by_pos: dict[tuple[int, int], Locus] = {}
    for m in sorted(matches, key=lambda m: (m.source_pos, m.target_pos, m.kind != KIND_DICTIONARY)):
        by_pos.setdefault((m.source_pos, m.target_pos), m)
    pts = sorted(by_pos.values(), key=lambda m: (m.source_pos, m.target_pos))
    n = len(pts)
    if n == 0:
        return []
    # best[i]: longest strictly-increasing chain starting at pts[i]
    best = [1] * n
    for i in range(n - 2, -1, -1):
        for j in range(i + 1, n):
            if (pts[j].source_pos > pts[i].source_pos
                    and pts[j].target_pos > pts[i].target_pos
                    and best[j] + 1 > best[i]):
                best[i] = best[j] + 1
    chain: list[Locus] = []
    prev: Locus | None = None
    start = 0
    for need in range(max(best), 0, -1):
        for k in range(start, n):
            p = pts[k]
            if best[k] != need:
                continue
            if prev is None or (p.source_pos > prev.source_pos
                                and p.target_pos > prev.target_pos):
                chain.append(p)
                prev = p
                start = k + 1
                break
    return chain


def _consistent_with_locus(c: CandidatePair, m: Locus) -> bool:
    if c.source_pos == m.source_pos and c.target_pos == m.target_pos:
        return True
    if c.source_pos < m.source_pos and c.target_pos < m.target_pos:
        return True
    return c.source_pos > m.source_pos and c.target_pos > m.target_pos


def alignment_filter(cands, loci) -> list[CandidatePair]:
    """Keep candidates that fall strictly inside one segment of the
    partition induced by the loci (or coincide with a locus). Candidates
    that cross or half-straddle any locus are removed."""
    loci = list(loci)
    for prev, cur in zip(loci, loci[1:]):
        if cur.source_pos <= prev.source_pos or cur.target_pos <= prev.target_pos:
            raise ContractViolationError(
                f"loci must be sorted and non-crossing: {prev} then {cur}"
            )
    if not loci:
        return list(cands)
    return [c for c in cands if all(_consistent_with_locus(c, m) for m in loci)]


def _alignment_loci(pair: SentencePair, config: CascadeConfig) -> list[Locus]:
    # use the match sources of the oracle filters present in the cascade;
    # with neither configured, fall back to every resource available
    use_mrbd = "mrbd" in config.filters
    use_cognate = "cognate" in config.filters
    if not use_mrbd and not use_cognate:
        use_mrbd = config.oracle is not None
        use_cognate = config.lcsr is not None
    matches: set[Locus] = set()
    if use_mrbd and config.oracle is not None:
        matches |= oracle_matches(pair, config.oracle)
    if use_cognate and config.lcsr is not None:
        matches |= cognate_matches(pair, config.lcsr)
    return select_loci(matches)


class Attrition:
    """Candidate counts surviving each cascade stage, mergeable across
    workers."""

    def __init__(self, filters=()):
        self.counts: dict[str, int] = {"generated": 0}
        for name in filters:
            self.counts[name] = 0

    def add(self, stage: str, n: int) -> None:
        self.counts[stage] = self.counts.get(stage, 0) + n

    def merge(self, other: "Attrition") -> None:
        for stage, n in other.counts.items():
            self.add(stage, n)


def run_cascade(pair: SentencePair, config: CascadeConfig,
                attrition: Attrition | None = None) -> list[CandidatePair]:
    """Generate the cross-product for one pair and apply the configured
    filters in order."""
    cands = generate_candidates(pair)
    if attrition is not None:
        attrition.add("generated", len(cands))
    for name in config.filters:
        if name == "pos":
            cands = pos_filter(cands, pair, config.tag_table)
        elif name == "mrbd":
            cands = oracle_filter(cands, oracle_matches(pair, config.oracle))
        elif name == "cognate":
            cands = oracle_filter(cands, cognate_matches(pair, config.lcsr))
        else:  # align
            cands = alignment_filter(cands, _alignment_loci(pair, config))
        if attrition is not None:
            attrition.add(name, len(cands))
    return cands


def _cascade_batch(args) -> tuple[list[list[CandidatePair]], Attrition]:
    pairs, config = args
    attrition = Attrition(config.filters)
    return [run_cascade(p, config, attrition) for p in pairs], attrition


def cascade_corpus(bitext: Bitext, config: CascadeConfig,
                   workers: int = 1) -> tuple[list[list[CandidatePair]], Attrition]:
    """Run the cascade over a whole corpus, optionally on several worker
    processes. Results come back in pair order, so the output is identical
    for any worker count."""
    pairs = list(bitext.pairs)
    if workers <= 1 or len(pairs) < 2:
        return _cascade_batch((pairs, config))
    chunk = max(1, len(pairs) // (workers * 4))
    batches = [(pairs[i:i + chunk], config) for i in range(0, len(pairs), chunk)]
    merged: list[list[CandidatePair]] = []
    attrition = Attrition(config.filters)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for cands, part in pool.map(_cascade_batch, batches):
            merged.extend(cands)
            attrition.merge(part)
    return merged, attrition
