"""Command-line surface: train, align, tune, eval, and the experiment grid.

Exit codes: 0 success, 1 usage or bad argument, 2 data/format problem,
3 tuning failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field

from .corpus import (
    UNKNOWN_ID,
    ParallelCorpus,
    SentencePair,
    load_annotations,
    load_parallel_corpus,
    occurrence_stats,
    read_token_lines,
    split_annotated,
    split_unannotated,
)
from .errors import DataFormatError, TuningError, UnknownTokenError
from .evaluation import evaluate_corpus
from .model import read_table, viterbi_align, write_table
from .objectives import OBJECTIVE_NAMES, DevSet, Objective
from .smoothing import STRATEGY_NAMES, make_strategy
from .trainer import TrainConfig, train
from .tuner import TuneConfig, tune


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _corpus_args(sub):
    sub.add_argument("-s", "--source", required=True, help="source-side corpus file")
    sub.add_argument("-t", "--target", required=True, help="target-side corpus file")
    sub.add_argument("--lowercase", action="store_true", help="lowercase all tokens")


def _train_args(sub):
    sub.add_argument("--iters", type=int, default=10, help="EM iterations (default 10)")
    sub.add_argument("--epsilon", type=float, default=1.0, help="model constant (default 1)")


def _tune_args(sub):
    sub.add_argument("--grid", type=_parse_grid, default=None,
                     help="comma-separated lambda candidates (default log-spaced 1e-4..1e4 plus 0)")
    sub.add_argument("--tol", type=float, default=1e-4, help="refinement tolerance on lambda")
    sub.add_argument("--max-evals", type=int, default=100, help="refinement evaluation cap")
    sub.add_argument("--alpha", type=float, default=10.0,
                     help="sharpness of the smoothed error count (default 10)")
    sub.add_argument("--seed", type=int, default=13, help="seed for all data splits")
    sub.add_argument("--dev-size", type=int, default=None,
                     help="annotated pairs held out for tuning (default: a third)")
    sub.add_argument("--dev-fraction", type=float, default=0.1,
                     help="corpus fraction held out for ml-unannotated tuning")


def _parse_grid(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("grid must not be empty")
    return tuple(sorted(values))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alignsmooth", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("train", help="train a translation table with EM")
    _corpus_args(p)
    _train_args(p)
    p.add_argument("--strategy", choices=STRATEGY_NAMES, default="add-one")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="smoothing scale (0 = unsmoothed baseline)")
    p.add_argument("-o", "--out", required=True, help="model file to write")
    p.set_defaults(func=cmd_train)

    p = commands.add_parser("align", help="Viterbi-align a corpus with a trained model")
    _corpus_args(p)
    p.add_argument("-m", "--model", required=True, help="model file from `train`")
    p.add_argument("-o", "--out", default=None, help="alignment file (default stdout)")
    p.add_argument("--emit-null", action="store_true", help="include 0-j NULL links")
    p.set_defaults(func=cmd_align)

    p = commands.add_parser("tune", help="search the smoothing scale on development data")
    _corpus_args(p)
    _train_args(p)
    _tune_args(p)
    p.add_argument("-a", "--annotations", default=None, help="gold alignment file")
    p.add_argument("--strategy", choices=STRATEGY_NAMES, default="add-one")
    p.add_argument("--objective", choices=OBJECTIVE_NAMES, default="smoothed-error-count")
    p.add_argument("-o", "--out", default=None, help="tuning trace file")
    p.set_defaults(func=cmd_tune)

    p = commands.add_parser("eval", help="score a model against gold alignments")
    _corpus_args(p)
    p.add_argument("-m", "--model", required=True)
    p.add_argument("-a", "--annotations", required=True)
    p.add_argument("--emit-null", action="store_true")
    p.add_argument("-o", "--out", default=None, help="machine-readable report file")
    p.set_defaults(func=cmd_eval)

    p = commands.add_parser("experiment",
                            help="baseline plus the full strategy-by-objective grid")
    _corpus_args(p)
    _train_args(p)
    _tune_args(p)
    p.add_argument("-a", "--annotations", required=True)
    p.add_argument("--strategies", default=",".join(STRATEGY_NAMES),
                   help="comma-separated adding strategies to run")
    p.add_argument("--objectives", default=",".join(OBJECTIVE_NAMES),
                   help="comma-separated objectives to run")
    p.add_argument("-o", "--out", required=True, help="report directory")
    p.set_defaults(func=cmd_experiment)
    return parser


def cmd_train(args) -> int:
    corpus = load_parallel_corpus(args.source, args.target, args.lowercase)
    strategy = None
    if args.lam > 0:
        strategy = make_strategy(args.strategy, occurrence_stats(corpus))
    config = TrainConfig(args.iters, args.lam, strategy, args.epsilon)
    result = train(corpus, config)
    write_table(result.table, args.out, iterations=args.iters,
                strategy=args.strategy if args.lam > 0 else "none", lam=args.lam)
    with open(args.out + ".trace", "w", encoding="utf-8") as handle:
        for value in result.log_likelihood_trace:
            handle.write(f"{value!r}\n")
    print(f"wrote {args.out} ({len(corpus.pairs)} pairs, {args.iters} iterations)")
    return 0


def cmd_align(args) -> int:
    table, _ = read_table(args.model)
    source_sentences = read_token_lines(args.source, args.lowercase)
    target_sentences = read_token_lines(args.target, args.lowercase)
    if not source_sentences or not target_sentences:
        raise DataFormatError("corpus is empty")
    if len(source_sentences) != len(target_sentences):
        raise DataFormatError(
            f"line count mismatch: {args.source} has {len(source_sentences)} lines, "
            f"{args.target} has {len(target_sentences)}"
        )
    warned: set[str] = set()

    def resolve(vocab, word):
        wid = vocab.get(word, UNKNOWN_ID)
        if wid == UNKNOWN_ID and word not in warned:
            warned.add(word)
            print(f"warning: token {word!r} not in model vocabulary", file=sys.stderr)
        return wid

    lines = []
    for src, tgt in zip(source_sentences, target_sentences):
        pair = SentencePair(
            tuple(resolve(table.source_vocab, w) for w in src),
            tuple(resolve(table.target_vocab, w) for w in tgt),
        )
        alignment = viterbi_align(pair, table)
        tokens = [
            f"{i}-{j}"
            for j, i in enumerate(alignment, start=1)
            if i != 0 or args.emit_null
        ]
        lines.append(" ".join(tokens))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _tune_setup(args, corpus: ParallelCorpus, objective: Objective):
    """Resolve the (train corpus, dev set) pair an objective tunes against."""
    if objective.requires_annotation:
        if not args.annotations:
            raise ValueError(f"objective {objective.name!r} requires --annotations")
        annotation = load_annotations(args.annotations, corpus)
        if args.dev_size is not None:
            dev_annotation, _ = split_annotated(annotation, args.dev_size, args.seed)
        else:
            dev_annotation = annotation
        return corpus, DevSet.from_annotations(corpus, dev_annotation)
    train_part, dev_part = split_unannotated(corpus, args.dev_fraction, args.seed)
    return train_part, DevSet.unannotated(dev_part.pairs)


def _tune_config(args) -> TuneConfig:
    if args.grid is None:
        return TuneConfig(tolerance=args.tol, max_refine_evals=args.max_evals)
    return TuneConfig(grid=args.grid, tolerance=args.tol, max_refine_evals=args.max_evals)


def cmd_tune(args) -> int:
    corpus = load_parallel_corpus(args.source, args.target, args.lowercase)
    objective = Objective(args.objective, args.alpha)
    train_corpus, dev = _tune_setup(args, corpus, objective)
    strategy = make_strategy(args.strategy, occurrence_stats(train_corpus))
    result = tune(
        train_corpus, dev, strategy, objective,
        _tune_config(args), TrainConfig(iterations=args.iters, epsilon=args.epsilon),
    )
    lines = [
        f"strategy\t{result.strategy}",
        f"objective\t{result.objective}",
        f"lambda_star\t{result.lambda_star!r}",
        f"objective_value\t{result.objective_value!r}",
    ]
    lines += [f"evaluation\t{lam!r}\t{value!r}" for lam, value in result.evaluations]
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    print(f"lambda* = {result.lambda_star!r} "
          f"({result.objective} = {result.objective_value!r}, "
          f"{len(result.evaluations)} candidates)")
    return 0


def cmd_eval(args) -> int:
    corpus = load_parallel_corpus(args.source, args.target, args.lowercase)
    table, _ = read_table(args.model)
    annotation = load_annotations(args.annotations, corpus)
    report = evaluate_corpus(table, corpus, annotation, emit_null=args.emit_null)
    print(report.pretty())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("\n".join(report.to_tsv_lines()) + "\n")
    return 0


@dataclass
class ExperimentSpec:
    source_path: str
    target_path: str
    annotations_path: str
    out_dir: str
    strategies: tuple[str, ...] = STRATEGY_NAMES
    objectives: tuple[str, ...] = OBJECTIVE_NAMES
    dev_size: int | None = None
    dev_fraction: float = 0.1
    seed: int = 13
    iterations: int = 10
    epsilon: float = 1.0
    alpha: float = 10.0
    tune_config: TuneConfig = field(default_factory=TuneConfig)
    lowercase: bool = False

    def __post_init__(self):
        if not self.strategies or not self.objectives:
            raise ValueError("need at least one strategy and one objective")


@dataclass
class CellResult:
    strategy: str
    objective: str
    status: str = "ok"
    lam: float | None = None
    aer: float | None = None
    error_count: int | None = None
    decrease: float | None = None
    reason: str | None = None


def run_experiment(spec: ExperimentSpec):
    """Baseline plus one tuned cell per strategy/objective combination.

    Following the alignment protocol, every model (baseline and tuned) is
    trained on the full corpus, test sentences included; only the gold
    links of the dev split are visible to tuning, and dev pairs are
    excluded from test scoring.
    """
    corpus = load_parallel_corpus(spec.source_path, spec.target_path, spec.lowercase)
    annotation = load_annotations(spec.annotations_path, corpus)
    dev_size = spec.dev_size if spec.dev_size is not None else max(1, len(annotation) // 3)
    dev_annotation, test_annotation = split_annotated(annotation, dev_size, spec.seed)

    stats = occurrence_stats(corpus)
    baseline = train(corpus, TrainConfig(spec.iterations, 0.0, None, spec.epsilon))
    baseline_report = evaluate_corpus(baseline.table, corpus, test_annotation)

    dev_annotated = DevSet.from_annotations(corpus, dev_annotation)
    unannotated_setup = None  # built lazily; only ml-unannotated cells need it

    cells = []
    final_tables: dict[tuple[str, float], object] = {}
    for strategy_name in spec.strategies:
        for objective_name in spec.objectives:
            cell = CellResult(strategy_name, objective_name)
            cells.append(cell)
            try:
                objective = Objective(objective_name, spec.alpha)
                if objective.requires_annotation:
                    tune_corpus, dev, tune_stats = corpus, dev_annotated, stats
                else:
                    if unannotated_setup is None:
                        train_part, dev_part = split_unannotated(
                            corpus, spec.dev_fraction, spec.seed
                        )
                        unannotated_setup = (
                            train_part,
                            DevSet.unannotated(dev_part.pairs),
                            occurrence_stats(train_part),
                        )
                    tune_corpus, dev, tune_stats = unannotated_setup
                result = tune(
                    tune_corpus, dev, make_strategy(strategy_name, tune_stats), objective,
                    spec.tune_config, TrainConfig(iterations=spec.iterations, epsilon=spec.epsilon),
                )
                key = (strategy_name, result.lambda_star)
                if key not in final_tables:
                    final_tables[key] = train(
                        corpus,
                        TrainConfig(spec.iterations, result.lambda_star,
                                    make_strategy(strategy_name, stats), spec.epsilon),
                    ).table
                report = evaluate_corpus(final_tables[key], corpus, test_annotation)
                cell.lam = result.lambda_star
                cell.aer = report.aer
                cell.error_count = report.error_count
                cell.decrease = baseline_report.aer - report.aer
            except (TuningError, DataFormatError, UnknownTokenError, ValueError) as err:
                cell.status = "failed"
                cell.reason = str(err)
    return baseline_report, cells


def _experiment_tsv(baseline_report, cells) -> str:
    lines = [
        f"baseline\taer\t{baseline_report.aer!r}",
        f"baseline\terror_count\t{baseline_report.error_count}",
        f"baseline\tprecision\t{baseline_report.precision!r}",
        f"baseline\trecall\t{baseline_report.recall!r}",
    ]
    for cell in cells:
        prefix = f"cell\t{cell.strategy}\t{cell.objective}"
        lines.append(f"{prefix}\tstatus\t{cell.status}")
        if cell.status == "ok":
            lines.append(f"{prefix}\tlambda\t{cell.lam!r}")
            lines.append(f"{prefix}\taer\t{cell.aer!r}")
            lines.append(f"{prefix}\terror_count\t{cell.error_count}")
            lines.append(f"{prefix}\tdecreasement\t{cell.decrease!r}")
        else:
            lines.append(f"{prefix}\treason\t{cell.reason}")
    return "\n".join(lines) + "\n"


def _experiment_text(spec, baseline_report, cells) -> str:
    lines = [
        "experiment report",
        "=================",
        f"iterations {spec.iterations}, seed {spec.seed}, "
        f"test pairs {baseline_report.pair_count}",
        f"baseline (lambda=0): AER {baseline_report.aer:.6f}, "
        f"error count {baseline_report.error_count}, "
        f"precision {baseline_report.precision:.6f}, recall {baseline_report.recall:.6f}",
        "",
        "tuned cells (decreasement = baseline AER - tuned AER; positive is better):",
    ]
    for cell in cells:
        head = f"[{cell.strategy} / {cell.objective}]"
        if cell.status == "ok":
            lines.append(
                f"{head:48s} lambda* {cell.lam:<12.6g} AER {cell.aer:.6f} "
                f"decreasement {cell.decrease:+.6f}"
            )
        else:
            lines.append(f"{head:48s} FAILED: {cell.reason}")
    return "\n".join(lines) + "\n"


def cmd_experiment(args) -> int:
    strategies = tuple(x for x in args.strategies.split(",") if x)
    objectives = tuple(x for x in args.objectives.split(",") if x)
    for name in strategies:
        if name not in STRATEGY_NAMES:
            raise ValueError(f"unknown adding strategy {name!r}")
    for name in objectives:
        if name not in OBJECTIVE_NAMES:
            raise ValueError(f"unknown objective {name!r}")
    spec = ExperimentSpec(
        source_path=args.source,
        target_path=args.target,
        annotations_path=args.annotations,
        out_dir=args.out,
        strategies=strategies,
        objectives=objectives,
        dev_size=args.dev_size,
        dev_fraction=args.dev_fraction,
        seed=args.seed,
        iterations=args.iters,
        epsilon=args.epsilon,
        alpha=args.alpha,
        tune_config=_tune_config(args),
        lowercase=args.lowercase,
    )
    baseline_report, cells = run_experiment(spec)
    os.makedirs(spec.out_dir, exist_ok=True)
    tsv_path = os.path.join(spec.out_dir, "report.tsv")
    txt_path = os.path.join(spec.out_dir, "report.txt")
    with open(tsv_path, "w", encoding="utf-8") as handle:
        handle.write(_experiment_tsv(baseline_report, cells))
    with open(txt_path, "w", encoding="utf-8") as handle:
        handle.write(_experiment_text(spec, baseline_report, cells))
    failures = [cell for cell in cells if cell.status != "ok"]
    print(f"wrote {tsv_path} ({len(cells)} cells, {len(failures)} failed)")
    return 3 if failures else 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (DataFormatError, UnknownTokenError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except TuningError as err:
        print(f"tuning error: {err}", file=sys.stderr)
        return 3
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
