"""Command-line interface: induce, evaluate, translate, cognates.

Every command resolves its defaults into the output header so a run can be
reproduced from its artifact alone. Output bytes depend only on the inputs
and configuration, never on the worker count.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass

from . import evaluation, filters, scoring, translate as backoff
from .cognate import LcsrParams, lcsr
from .corpus import Bitext, load_bitext, load_oracle_list, restrict_bitext
from .errors import ConfigurationError, NbestlexError


@dataclass
class RunConfig:
    command: str
    source: str | None = None
    target: str | None = None
    lexicon: str | None = None
    chain: str | None = None
    dev_source: str | None = None
    dev_target: str | None = None
    output: str = "out.tsv"
    filters: tuple[str, ...] = ()
    n: int = 7
    lcsr_cutoff: float = 0.58
    min_alpha_len: int = 2
    max_len: int = 15
    min_cooccurrence: int = 1
    seed: int = 0
    mode: str = "precision"
    splits: int = 1
    tagged: bool = False
    lowercase: bool = False
    tag_map: str | None = None
    oracle: str | None = None
    workers: int = 1
    plot: str | None = None
    no_plot: bool = False


def parse_filter_spec(spec: str) -> tuple[str, ...]:
    return tuple(name.strip() for name in spec.split(",") if name.strip())


def _load_corpus(cfg: RunConfig, source: str, target: str) -> Bitext:
    return load_bitext(source, target, tagged=cfg.tagged, lowercase=cfg.lowercase)


def _cascade_config(cfg: RunConfig) -> filters.CascadeConfig:
    if "pos" in cfg.filters and cfg.tag_map is None:
        raise ConfigurationError("filter 'pos' requires --tag-map")
    if "pos" in cfg.filters and not cfg.tagged:
        raise ConfigurationError("filter 'pos' requires a tagged bitext (--tagged)")
    if "mrbd" in cfg.filters and cfg.oracle is None:
        raise ConfigurationError("filter 'mrbd' requires --oracle")
    return filters.CascadeConfig(
        filters=cfg.filters,
        lcsr=LcsrParams(cfg.lcsr_cutoff, cfg.min_alpha_len),
        oracle=load_oracle_list(cfg.oracle, lowercase=cfg.lowercase) if cfg.oracle else None,
        tag_table=filters.load_tag_table(cfg.tag_map) if cfg.tag_map else None,
    )


def cmd_induce(cfg: RunConfig) -> int:
    cascade = _cascade_config(cfg)
    corpus = _load_corpus(cfg, cfg.source, cfg.target)
    used = restrict_bitext(corpus, cfg.max_len)
    per_pair, attrition = filters.cascade_corpus(used, cascade, workers=cfg.workers)
    counts = scoring.count_cooccurrences(scoring.flatten_candidates(per_pair), used)
    lexicon = scoring.build_lexicon(counts, cfg.n, cfg.min_cooccurrence)
    scoring.write_lexicon(lexicon, cfg.output, header={
        "command": "induce",
        "source": cfg.source,
        "target": cfg.target,
        "tagged": cfg.tagged,
        "lowercase": cfg.lowercase,
        "filters": ",".join(cfg.filters),
        "lcsr_cutoff": cfg.lcsr_cutoff,
        "min_alpha_len": cfg.min_alpha_len,
        "max_len": cfg.max_len,
        "min_cooccurrence": cfg.min_cooccurrence,
        "oracle": cfg.oracle,
        "tag_map": cfg.tag_map,
    })
    print(f"pairs loaded                {len(corpus.pairs)}")
    print(f"pairs used (max_len={cfg.max_len})    {len(used.pairs)}")
    print(f"candidates generated        {attrition.counts['generated']}")
    for name in cfg.filters:
        print(f"after {name:<8}              {attrition.counts[name]}")
    print(f"distinct word pairs counted {len(counts)}")
    print(f"lexicon headwords           {len(lexicon)}")
    print(f"wrote {cfg.output}")
    return 0


def _partition_bitext(bitext: Bitext, k: int, seed: int) -> list[Bitext]:
    """Mutually exclusive test splits of near-equal size, deterministic in
    the seed; each split keeps the original pair order."""
    n = len(bitext.pairs)
    if k > n:
        raise ConfigurationError(f"cannot make {k} splits from {n} pairs")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    sizes = [n // k + (1 if i < n % k else 0) for i in range(k)]
    parts, at = [], 0
    for size in sizes:
        chosen = sorted(order[at:at + size])
        parts.append(Bitext.from_pairs(bitext.pairs[i] for i in chosen))
        at += size
    return parts


def cmd_evaluate(cfg: RunConfig) -> int:
    lexicon = scoring.read_lexicon(cfg.lexicon)
    test = _load_corpus(cfg, cfg.source, cfg.target)
    if not any(s in lexicon for s in test.source_vocab):
        print("warning: lexicon and test source vocabulary do not overlap; "
              "the scores carry no information", file=sys.stderr)
    splits = [test] if cfg.splits <= 1 else _partition_bitext(test, cfg.splits, cfg.seed)
    reports = [evaluation.evaluate(lexicon, part, cfg.mode, workers=cfg.workers)
               for part in splits]
    evaluation.write_report(reports, cfg.output, header={
        "command": "evaluate",
        "lexicon": cfg.lexicon,
        "source": cfg.source,
        "target": cfg.target,
        "tagged": cfg.tagged,
        "lowercase": cfg.lowercase,
        "mode": cfg.mode,
        "splits": cfg.splits,
        "seed": cfg.seed,
        "n": lexicon.n_max,
    })
    print(f"wrote {cfg.output}")
    if not cfg.no_plot:
        from .plots import save_hit_rate_figure

        plot_path = cfg.plot or _default_plot_path(cfg.output)
        save_hit_rate_figure(reports, plot_path, title=f"{cfg.mode} on {cfg.source}")
        print(f"wrote {plot_path}")
    if len(reports) == 1:
        rate1 = reports[0].cumulative_hit_rate[0] if reports[0].n else 0.0
        print(f"cumulative hit rate at k=1: {rate1:.4f}  recall: {reports[0].recall:.4f}")
    else:
        mean, ci = evaluation.aggregate_runs([r.cumulative_hit_rate[0] for r in reports])
        print(f"cumulative hit rate at k=1: {mean:.4f} +- {ci:.4f} over {len(reports)} splits")
    return 0


def _default_plot_path(output: str) -> str:
    stem, dot, ext = output.rpartition(".")
    return f"{stem}.png" if dot and ext != "png" else f"{output}.png"


def cmd_cognates(cfg: RunConfig) -> int:
    corpus = _load_corpus(cfg, cfg.source, cfg.target)
    params = LcsrParams(cfg.lcsr_cutoff, cfg.min_alpha_len)
    lines = scoring.format_header({
        "command": "cognates",
        "source": cfg.source,
        "target": cfg.target,
        "tagged": cfg.tagged,
        "lowercase": cfg.lowercase,
        "lcsr_cutoff": cfg.lcsr_cutoff,
        "min_alpha_len": cfg.min_alpha_len,
    })
    lines.append("pair_id\tsource_pos\ttarget_pos\tsource_word\ttarget_word\tlcsr")
    matched_tokens = 0
    total_tokens = 0
    for pair in corpus.pairs:
        loci = sorted(filters.cognate_matches(pair, params),
                      key=lambda m: (m.source_pos, m.target_pos))
        matched_positions = {m.source_pos for m in loci}
        matched_tokens += len(matched_positions)
        total_tokens += len(pair.source)
        for m in loci:
            s = pair.source[m.source_pos].surface
            t = pair.target[m.target_pos].surface
            lines.append(f"{pair.id}\t{m.source_pos}\t{m.target_pos}\t{s}\t{t}\t{lcsr(s, t)!r}")
    fraction = matched_tokens / total_tokens if total_tokens else 0
    lines.append(f"matched_source_tokens\t{matched_tokens}")
    lines.append(f"total_source_tokens\t{total_tokens}")
    lines.append(f"source_token_match_fraction\t{fraction!r}")
    with open(cfg.output, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    print(f"wrote {cfg.output} ({matched_tokens}/{total_tokens} source tokens matched)")
    return 0


def cmd_translate(cfg: RunConfig) -> int:
    spec = backoff.read_chain_spec(cfg.chain)
    lexicons = [(label, scoring.read_lexicon(path)) for label, path in spec]
    dev = _load_corpus(cfg, cfg.dev_source, cfg.dev_target)
    test = _load_corpus(cfg, cfg.source, cfg.target)
    chain = backoff.order_chain(lexicons, dev, workers=cfg.workers)
    percent_correct = backoff.score_corpus(chain, test)
    baseline = backoff.BackoffChain((chain.entries[-1],))
    baseline_pc = backoff.score_corpus(baseline, test)
    backoff.write_translations(chain, test, cfg.output, header={
        "command": "translate",
        "chain": cfg.chain,
        "dev_source": cfg.dev_source,
        "dev_target": cfg.dev_target,
        "source": cfg.source,
        "target": cfg.target,
        "tagged": cfg.tagged,
        "lowercase": cfg.lowercase,
        "chain_order": ",".join(e.label for e in chain.entries),
        "percent_correct_by_token": repr(percent_correct),
        "baseline_percent_correct_by_token": repr(baseline_pc),
    })
    print("chain order: " + " > ".join(
        f"{e.label}({e.measured_precision:.4f})" for e in chain.entries))
    print(f"percent correct by token: {percent_correct:.4f}")
    print(f"baseline ({chain.entries[-1].label}) alone: {baseline_pc:.4f}")
    if baseline_pc > 0:
        print(f"improvement over baseline: {percent_correct / baseline_pc - 1:+.1%}")
    print(f"wrote {cfg.output}")
    return 0


def _add_common(parser, with_seed=True):
    parser.add_argument("-o", "--output", required=True, help="output TSV path")
    parser.add_argument("--tagged", action="store_true",
                        help="parse tokens as surface/TAG")
    parser.add_argument("--lowercase", action="store_true",
                        help="lowercase all surfaces at load time")
    parser.add_argument("--workers", type=int, default=1,
                        help="worker processes (never changes output bytes)")
    if with_seed:
        parser.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nbestlex",
        description="Induce, evaluate, and apply n-best translation lexicons "
                    "from sentence-aligned bitexts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="induce an n-best lexicon from a training bitext")
    p.add_argument("source", help="source-side text, one sentence per line")
    p.add_argument("target", help="target-side text, aligned line by line")
    p.add_argument("--filters", default="",
                   help="comma-separated cascade, e.g. pos,cognate,mrbd,align (default: none)")
    p.add_argument("--n", type=int, default=7, help="translations kept per source word")
    p.add_argument("--lcsr-cutoff", type=float, default=0.58)
    p.add_argument("--min-alpha-len", type=int, default=2)
    p.add_argument("--max-len", type=int, default=15,
                   help="drop pairs with a side longer than this")
    p.add_argument("--min-cooccurrence", type=int, default=1)
    p.add_argument("--tag-map", help="tag table file (required by the pos filter)")
    p.add_argument("--oracle", help="source<TAB>target word list (required by the mrbd filter)")
    _add_common(p)

    p = sub.add_parser("evaluate", help="score a lexicon against a held-out bitext")
    p.add_argument("lexicon", help="lexicon TSV written by induce")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--mode", choices=list(evaluation.MODES), default="precision")
    p.add_argument("--splits", type=int, default=1,
                   help="evaluate on this many mutually exclusive test splits")
    p.add_argument("--plot", help="figure path (default: output path with .png)")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    _add_common(p)

    p = sub.add_parser("cognates", help="list spelling-based matches per sentence pair")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--lcsr-cutoff", type=float, default=0.58)
    p.add_argument("--min-alpha-len", type=int, default=2)
    _add_common(p, with_seed=False)

    p = sub.add_parser("translate", help="back-off translate a test bitext with a lexicon chain")
    p.add_argument("chain", help="chain spec file: label<TAB>lexicon-path per line")
    p.add_argument("dev_source", help="dev bitext used to order the chain")
    p.add_argument("dev_target")
    p.add_argument("source", help="test bitext to translate and score")
    p.add_argument("target")
    _add_common(p, with_seed=False)

    return parser


_COMMANDS = {
    "induce": cmd_induce,
    "evaluate": cmd_evaluate,
    "cognates": cmd_cognates,
    "translate": cmd_translate,
}


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command)
    for key, value in vars(args).items():
        if key == "filters":
            value = parse_filter_spec(value)
        if hasattr(cfg, key):
            setattr(cfg, key, value)
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](config_from_args(args))
    except NbestlexError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
