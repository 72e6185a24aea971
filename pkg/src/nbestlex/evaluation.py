"""Hit-rate evaluation of n-best lexicons against a held-out bitext.

For each test pair and each source token that qualifies, the token's ranked
translations are scanned in order; the first one present in the (mutable)
target sentence consumes that target token and records a hit at its rank.
Per-word hit rates HitCount[S,k] / frq(S) are then averaged over qualifying
source words, counting words by type, and accumulated into cumulative
rates: cumulative[k] is the average fraction of a word's test occurrences
covered by its best k translations.

Two modes differ only in which types qualify:

  * ``precision``       only lexicon headwords accrue occurrence counts and
                        enter the average;
  * ``percent_correct`` every source token accrues a count, so types the
                        lexicon misses drag the average down.

Per-type accumulation uses exact rationals, so scores are identical for any
worker count and for any ordering of the test pairs.
"""

from __future__ import annotations

import statistics
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import sqrt

from .corpus import Bitext
from .errors import ConfigurationError
from .scoring import NBestLexicon, format_header

MODES = ("precision", "percent_correct")


@dataclass(frozen=True)
class EvaluationReport:
    mode: str
    n: int
    cumulative_hit_rate: tuple[float, ...]
    evaluated_source_types: int
    recall: float          # fraction of test source tokens that are headwords
    recall_by_type: float  # fraction of test source types that are headwords


def _evaluate_batch(args):
    pairs, lexicon = args
    hits: Counter = Counter()          # (source type, rank) -> hit count
    frq: Counter = Counter()           # headword type -> test occurrences
    source_types = set()
    source_tokens = 0
    headword_tokens = 0
    for pair in pairs:
        remaining = [t.surface for t in pair.target]
        for tok in pair.source:
            s = tok.surface
            source_tokens += 1
            source_types.add(s)
            translations = lexicon.translations(s)
            if not translations:
                continue
            headword_tokens += 1
            frq[s] += 1
            for k, entry in enumerate(translations, 1):
                if entry.target in remaining:
                    remaining.remove(entry.target)  # leftmost occurrence
                    hits[(s, k)] += 1
                    break
    return hits, frq, source_types, source_tokens, headword_tokens


def evaluate(lexicon: NBestLexicon, test: Bitext, mode: str = "precision",
             workers: int = 1) -> EvaluationReport:
    """Score a lexicon on a test bitext; see the module docstring."""
    if mode not in MODES:
        raise ConfigurationError(f"unknown evaluation mode {mode!r}; expected one of {MODES}")
    if lexicon.n_max < 1:
        raise ConfigurationError("cannot evaluate a lexicon with n_max = 0")

    pairs = list(test.pairs)
    if workers <= 1 or len(pairs) < 2:
        partials = [_evaluate_batch((pairs, lexicon))]
    else:
        chunk = max(1, len(pairs) // (workers * 4))
        batches = [(pairs[i:i + chunk], lexicon) for i in range(0, len(pairs), chunk)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_evaluate_batch, batches))

    hits: Counter = Counter()
    frq: Counter = Counter()
    source_types: set[str] = set()
    source_tokens = 0
    headword_tokens = 0
    for part_hits, part_frq, part_types, part_tokens, part_head in partials:
        hits.update(part_hits)
        frq.update(part_frq)
        source_types |= part_types
        source_tokens += part_tokens
        headword_tokens += part_head

    qualifying = len(frq) if mode == "precision" else len(source_types)
    n = lexicon.n_max
    hit_rate = [Fraction(0)] * (n + 1)
    if qualifying:
        for (s, k), count in hits.items():
            hit_rate[k] += Fraction(count, frq[s])
        for k in range(1, n + 1):
            hit_rate[k] /= qualifying
    cumulative = []
    running = Fraction(0)
    for k in range(1, n + 1):
        running += hit_rate[k]
        cumulative.append(float(running))

    return EvaluationReport(
        mode=mode,
        n=n,
        cumulative_hit_rate=tuple(cumulative),
        evaluated_source_types=qualifying,
        recall=headword_tokens / source_tokens if source_tokens else 0.0,
        recall_by_type=len(frq) / len(source_types) if source_types else 0.0,
    )


def aggregate_runs(scores) -> tuple[float, float]:
    """Mean and 95% confidence half-width (1.96 * sample sd / sqrt(n)) of
    repeated scores, assuming normality."""
    scores = list(scores)
    if len(scores) < 2:
        raise ValueError(f"need at least 2 scores to aggregate, got {len(scores)}")
    return statistics.fmean(scores), 1.96 * statistics.stdev(scores) / sqrt(len(scores))


def write_report(reports: list[EvaluationReport], path, header: dict | None = None) -> None:
    """Write one report as `k<TAB>rate` rows followed by summary key-value
    lines; with several reports (one per test split), write per-split rows
    plus mean and 95% confidence rows."""
    if not reports:
        raise ValueError("no reports to write")
    lines = format_header(header or {})
    if len(reports) == 1:
        rep = reports[0]
        lines.append("k\tcumulative_hit_rate")
        for k, rate in enumerate(rep.cumulative_hit_rate, 1):
            lines.append(f"{k}\t{rate!r}")
        lines.append(f"recall\t{rep.recall!r}")
        lines.append(f"recall_by_type\t{rep.recall_by_type!r}")
        lines.append(f"evaluated_types\t{rep.evaluated_source_types}")
        lines.append(f"mode\t{rep.mode}")
    else:
        lines.append("split\tk\tcumulative_hit_rate")
        for i, rep in enumerate(reports):
            for k, rate in enumerate(rep.cumulative_hit_rate, 1):
                lines.append(f"{i}\t{k}\t{rate!r}")
        n = min(rep.n for rep in reports)
        for k in range(1, n + 1):
            mean, ci = aggregate_runs([rep.cumulative_hit_rate[k - 1] for rep in reports])
            lines.append(f"mean\t{k}\t{mean!r}")
            lines.append(f"ci95\t{k}\t{ci!r}")
        recall_mean, recall_ci = aggregate_runs([rep.recall for rep in reports])
        lines.append(f"recall\t{recall_mean!r}")
        lines.append(f"recall_ci95\t{recall_ci!r}")
        type_mean, _ = aggregate_runs([rep.recall_by_type for rep in reports])
        lines.append(f"recall_by_type\t{type_mean!r}")
        lines.append(f"evaluated_types\t{statistics.fmean(r.evaluated_source_types for r in reports)!r}")
        lines.append(f"mode\t{reports[0].mode}")
        lines.append(f"splits\t{len(reports)}")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
