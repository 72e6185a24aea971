import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nbestlex.corpus import Bitext
from nbestlex.errors import ContractViolationError
from nbestlex.filters import CandidatePair, generate_candidates
from nbestlex.scoring import (
    ContingencyTable,
    build_lexicon,
    count_cooccurrences,
    flatten_candidates,
    g2,
    read_lexicon,
    write_lexicon,
)

from conftest import make_pair
from oracles import g2_highprec

cells = st.integers(min_value=0, max_value=10 ** 6)


def table_for(s, t, candidates, corpus):
    return count_cooccurrences(candidates, corpus)[(s, t)]


def test_counting_saturated():
    bt = Bitext.from_pairs([make_pair(0, "S", "T"), make_pair(1, "S", "T")])
    cands = flatten_candidates(generate_candidates(p) for p in bt.pairs)
    t = table_for("S", "T", cands, bt)
    assert (t.a, t.b, t.c, t.d) == (2, 0, 0, 0)


def test_counting_respects_filtering():
    # S and T co-occur in all three pairs but the candidate survived in two
    bt = Bitext.from_pairs([
        make_pair(0, "S x", "T y"),
        make_pair(1, "S", "T"),
        make_pair(2, "S z", "T w"),
    ])
    surviving = [c for p in bt.pairs[:2] for c in generate_candidates(p)]
    t = table_for("S", "T", surviving, bt)
    # manual count: a covers pairs 0 and 1 only; margins from the raw corpus
    assert t.a == 2
    assert t.b == bt.source_vocab["S"] - 2 == 1
    assert t.c == bt.target_vocab["T"] - 2 == 1
    assert t.a + t.b + t.c + t.d == 3 or t.d == 0


def test_counting_margins_worked_example():
    # S in 4 pairs, T in 3, surviving together in 2, corpus of 10
    pairs = []
    for i in range(10):
        src = "S" if i < 4 else "p"
        tgt = "T" if i in (0, 1, 5) else "q"
        pairs.append(make_pair(i, src, tgt))
    bt = Bitext.from_pairs(pairs)
    surviving = [CandidatePair("S", "T", 0, 0, 0), CandidatePair("S", "T", 0, 0, 1)]
    t = table_for("S", "T", surviving, bt)
    assert (t.a, t.b, t.c, t.d) == (2, 2, 1, 5)


def test_counting_duplicate_candidates_count_once_per_pair():
    bt = Bitext.from_pairs([make_pair(0, "S S", "T")])
    cands = generate_candidates(bt.pairs[0])
    assert len(cands) == 2
    t = table_for("S", "T", cands, bt)
    assert t.a == 1


def test_unknown_pair_id_is_provenance_error():
    bt = Bitext.from_pairs([make_pair(0, "S", "T")])
    with pytest.raises(ContractViolationError, match="99"):
        count_cooccurrences([CandidatePair("S", "T", 0, 0, 99)], bt)


def test_table_invariants():
    with pytest.raises(ValueError):
        ContingencyTable(1, -1, 0, 0)
    assert ContingencyTable(1, 2, 3, 4).total == 10


def test_g2_worked_values():
    assert g2(ContingencyTable(5, 5, 5, 5)) == 0.0
    assert abs(g2(ContingencyTable(10, 0, 0, 10)) - 40 * math.log(2)) < 1e-12
    assert abs(g2(ContingencyTable(1, 0, 0, 1)) - 4 * math.log(2)) < 1e-12
    with pytest.raises(ValueError):
        g2(ContingencyTable(0, 0, 0, 0))


def test_g2_zero_margin_is_zero():
    assert g2(ContingencyTable(3, 5, 0, 0)) == 0.0
    assert g2(ContingencyTable(0, 0, 2, 7)) == 0.0
    assert g2(ContingencyTable(4, 0, 6, 0)) == 0.0


def test_g2_exact_independence_is_exact_zero():
    # any table with a*d == b*c and positive margins
    for a, b, k in ((1, 2, 3), (5, 5, 1), (2, 4, 7), (10, 30, 2)):
        assert g2(ContingencyTable(a, b, k * a, k * b)) == 0.0


@given(cells, cells, cells, cells)
def test_g2_nonnegative_and_symmetric(a, b, c, d):
    if a + b + c + d == 0:
        return
    value = g2(ContingencyTable(a, b, c, d))
    assert value >= 0.0
    # swapping both rows and columns relabels presence/absence
    assert g2(ContingencyTable(d, c, b, a)) == pytest.approx(value, rel=1e-9, abs=1e-9)


def test_g2_against_high_precision_oracle():
    rng = random.Random(20240817)
    checked = 0
    while checked < 400:
        limit = 10 ** 6 if checked % 2 else 250_000
        a, b, c, d = (rng.randint(0, limit) for _ in range(4))
        if a + b + c + d == 0:
            continue
        expected = g2_highprec(a, b, c, d)
        got = g2(ContingencyTable(a, b, c, d))
        if abs(expected) < 1e-6:
            assert abs(got - expected) < 1e-9
        else:
            assert abs(got - expected) / abs(expected) < 1e-9
        checked += 1


def test_g2_accurate_near_independence():
    # second-order statistics: tables built to sit just off independence
    rng = random.Random(8)
    for _ in range(300):
        a = rng.randint(1, 1000)
        b, c = rng.randint(0, 1000), rng.randint(0, 1000)
        d = (b * c) // a + rng.randint(-2, 2)
        if d < 0:
            continue
        expected = g2_highprec(a, b, c, d)
        got = g2(ContingencyTable(a, b, c, d))
        if abs(expected) < 1e-6:
            assert abs(got - expected) < 1e-9
        else:
            assert abs(got - expected) / abs(expected) < 1e-9


def test_g2_scaling_preserves_ranking():
    rng = random.Random(4)
    tables = [tuple(rng.randint(0, 50) for _ in range(4)) for _ in range(30)]
    tables = [t for t in tables if sum(t) > 0]
    base = [g2(ContingencyTable(*t)) for t in tables]
    scaled = [g2(ContingencyTable(*(7 * x for x in t))) for t in tables]
    base_order = sorted(range(len(tables)), key=lambda i: base[i])
    scaled_order = sorted(range(len(tables)), key=lambda i: scaled[i])
    assert base_order == scaled_order


def test_build_lexicon_ranking_and_ties():
    counts = {
        ("s", "high"): ContingencyTable(5, 0, 0, 5),    # strong association
        ("s", "tie_b"): ContingencyTable(4, 1, 1, 4),
        ("s", "tie_a"): ContingencyTable(4, 1, 1, 4),   # same score, same count
        ("s", "weak"): ContingencyTable(2, 3, 3, 2),
    }
    lex = build_lexicon(counts, n=3)
    targets = [e.target for e in lex.translations("s")]
    assert targets == ["high", "tie_a", "tie_b"]  # score desc, then byte order
    assert lex.translations("s")[0].cooccurrence == 5


def test_build_lexicon_count_tiebreak_beats_byte_order():
    counts = {
        ("s", "zz"): ContingencyTable(5, 5, 2, 8),
        ("s", "aa"): ContingencyTable(5, 5, 2, 8),
    }
    # equal tables: equal score and count, byte order decides
    lex = build_lexicon(counts, n=2)
    assert [e.target for e in lex.translations("s")] == ["aa", "zz"]


def test_build_lexicon_count_breaks_score_ties():
    # one clear winner, then two exactly independent targets (score 0.0)
    # whose co-occurrence counts decide second place
    counts = {
        ("s", "strong"): ContingencyTable(5, 0, 0, 5),
        ("s", "rare"): ContingencyTable(1, 2, 2, 4),
        ("s", "often"): ContingencyTable(2, 4, 4, 8),
    }
    lex = build_lexicon(counts, n=2)
    assert [e.target for e in lex.translations("s")] == ["strong", "often"]


def test_build_lexicon_min_cooccurrence():
    counts = {
        ("s", "kept"): ContingencyTable(2, 1, 1, 6),
        ("s", "dropped"): ContingencyTable(1, 2, 2, 5),
    }
    lex = build_lexicon(counts, n=7, min_cooccurrence=2)
    assert [e.target for e in lex.translations("s")] == ["kept"]
    empty = build_lexicon({("s", "x"): ContingencyTable(1, 0, 0, 1)}, n=1, min_cooccurrence=2)
    assert "s" not in empty and len(empty) == 0


def test_build_lexicon_caps_at_n():
    counts = {("s", f"t{i}"): ContingencyTable(i + 1, 1, 1, 20) for i in range(9)}
    lex = build_lexicon(counts, n=7)
    assert len(lex.translations("s")) == 7
    assert lex.n_max == 7
    scores = [e.score for e in lex.translations("s")]
    assert scores == sorted(scores, reverse=True)


def test_lexicon_file_roundtrip(tmp_path):
    counts = {
        ("zèbre", "zebra"): ContingencyTable(3, 1, 0, 6),
        ("zèbre", "stripe"): ContingencyTable(2, 2, 1, 5),
        ("âne", "donkey"): ContingencyTable(4, 0, 1, 5),
    }
    lex = build_lexicon(counts, n=2)
    path = tmp_path / "lex.tsv"
    write_lexicon(lex, path, header={"filters": "cognate,align"})
    text = path.read_text(encoding="utf-8")
    assert "# n = 2" in text and "# filters = cognate,align" in text
    again = read_lexicon(path)
    assert again.n_max == lex.n_max
    assert again.entries == lex.entries
    # byte determinism
    path2 = tmp_path / "lex2.tsv"
    write_lexicon(build_lexicon(counts, n=2), path2, header={"filters": "cognate,align"})
    assert path.read_bytes() == path2.read_bytes()
