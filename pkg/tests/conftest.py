import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from nbestlex.corpus import Bitext, SentencePair, parse_sentence
from nbestlex.scoring import LexiconEntry, NBestLexicon


def make_pair(pid: int, source: str, target: str, tagged: bool = False) -> SentencePair:
    return SentencePair(pid, parse_sentence(source, tagged), parse_sentence(target, tagged))


def random_eval_instance(rng, max_pairs=5, max_len=6, max_n=3):
    """A toy lexicon and test bitext over a small shared vocabulary."""
    source_vocab = [f"s{i}" for i in range(rng.randint(1, 6))]
    target_vocab = [f"t{i}" for i in range(rng.randint(1, 6))]
    lex_entries = {}
    for s in source_vocab:
        if rng.random() < 0.7:
            k = rng.randint(1, max_n)
            lex_entries[s] = tuple(
                LexiconEntry(t, float(k - i), 1)
                for i, t in enumerate(rng.sample(target_vocab, min(k, len(target_vocab))))
            )
    n = rng.randint(1, max_n)
    lexicon = NBestLexicon(n, {s: e[:n] for s, e in lex_entries.items()})
    pairs = []
    for i in range(rng.randint(1, max_pairs)):
        src = [rng.choice(source_vocab) for _ in range(rng.randint(1, max_len))]
        tgt = [rng.choice(target_vocab) for _ in range(rng.randint(1, max_len))]
        pairs.append(make_pair(i, " ".join(src), " ".join(tgt)))
    return lexicon, Bitext.from_pairs(pairs)


def reference_rates(lexicon, bitext, mode):
    """Rates from the independent reference scorer in oracles.py."""
    from oracles import hit_rates_reference

    entries = {s: [e.target for e in es] for s, es in lexicon.entries.items()}
    pairs = [([t.surface for t in p.source], [t.surface for t in p.target])
             for p in bitext.pairs]
    return hit_rates_reference(entries, pairs, lexicon.n_max,
                               count_all_types=(mode == "percent_correct"))


@pytest.fixture
def bitext_files(tmp_path):
    """Write parallel files and return their paths."""

    def write(source_lines, target_lines, prefix="corpus"):
        src = tmp_path / f"{prefix}.src.txt"
        tgt = tmp_path / f"{prefix}.tgt.txt"
        src.write_text("\n".join(source_lines) + "\n", encoding="utf-8")
        tgt.write_text("\n".join(target_lines) + "\n", encoding="utf-8")
        return src, tgt

    return write
