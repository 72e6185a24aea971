"""Induce, evaluate, and apply n-best translation lexicons from
sentence-aligned bitexts using cascades of candidate filters."""

from .cognate import LcsrParams, is_cognate, lcs_length, lcsr
from .corpus import (
    Bitext,
    OracleList,
    SentencePair,
    Token,
    load_bitext,
    load_oracle_list,
    restrict_bitext,
    split_bitext,
)
from .errors import ConfigurationError, ContractViolationError, FormatError, NbestlexError
from .evaluation import EvaluationReport, aggregate_runs, evaluate
from .filters import (
    CandidatePair,
    CascadeConfig,
    Locus,
    TagMatchTable,
    alignment_filter,
    cascade_corpus,
    cognate_matches,
    default_tag_table,
    generate_candidates,
    oracle_filter,
    oracle_matches,
    pos_filter,
    run_cascade,
    select_loci,
)
from .scoring import (
    ContingencyTable,
    LexiconEntry,
    NBestLexicon,
    build_lexicon,
    count_cooccurrences,
    g2,
    read_lexicon,
    write_lexicon,
)
from .translate import BackoffChain, order_chain, score_corpus, translate_word

__version__ = "0.1.0"
