"""``semsketch`` command line.

Exit status: 0 on success, 1 on usage errors, 2 on data or validation errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import ExitStack
from pathlib import Path

from semsketch import __version__
from semsketch.corpus import (
    ALL_FLAGS,
    SemSketchError,
    dump_mapping,
    ingest_contexts,
    ingest_corpus,
    load_mapping,
    write_contexts,
    write_corpus,
)
from semsketch.datasets import DESK_SPLITS, emit_dataset, parse_split_specs, pool_by_sense, split_dataset
from semsketch.evaluate import accuracy, format_accuracy
from semsketch.fill import EMBED, FILL, Combined, PluginClient, train_cooccurrence
from semsketch.matchers import STRATEGIES, MatchConfig, run_matching
from semsketch.render import html_filename, render_sketch
from semsketch.sketches import (
    BuildConfig,
    anonymize,
    build_all,
    filter_records,
    read_secret,
    read_sketches,
    write_secret,
    write_sketches,
)

log = logging.getLogger("semsketch")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _flags(text: str) -> frozenset[str]:
    flags = frozenset(f for f in text.split(",") if f)
    unknown = flags - ALL_FLAGS
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown flags {sorted(unknown)}; known: {sorted(ALL_FLAGS)}")
    return flags


def _splits(text: str):
    try:
        return parse_split_specs(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="semsketch", description="Semantic sketch toolkit.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    s = sub.add_parser("ingest", help="validate and normalize a corpus and/or context file")
    s.add_argument("--corpus")
    s.add_argument("--contexts")
    s.add_argument("--out", required=True, help="output directory")

    s = sub.add_parser("build", help="build sketches from a dependency-record corpus")
    s.add_argument("--corpus", required=True)
    s.add_argument("--out", required=True, help="output directory (writes sketches.jsonl)")
    s.add_argument("--threshold", type=int, default=2000, help="minimum dependencies per sense")
    s.add_argument("--min-meanings", type=_positive, default=2)
    s.add_argument("--max-roles", type=_positive, default=8)
    s.add_argument("--max-fillers", type=_positive, default=10)
    s.add_argument("--exclude-flags", type=_flags, default=ALL_FLAGS, help="comma-separated flags to drop")

    s = sub.add_parser("anonymize", help="hide sketch senses behind opaque ids")
    s.add_argument("--sketches", required=True)
    s.add_argument("--out", required=True, help="output directory (sketches.jsonl, secret.json)")
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("dataset", help="sample trial/dev/manual_dev splits")
    s.add_argument("--sketches", required=True, help="anonymized sketches")
    s.add_argument("--secret", required=True, help="secret id -> sense mapping")
    s.add_argument("--contexts", required=True, help="context pool; entries carry a sense")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument(
        "--splits",
        type=_splits,
        default=list(DESK_SPLITS),
        help="name:n_sketches:contexts_per_sketch[:max_contexts],... (default: desk sizes)",
    )
    s.add_argument("--strict", action="store_true", help="fail instead of warning on short context pools")

    s = sub.add_parser("match", help="predict a context -> sketch mapping")
    s.add_argument("--sketches", required=True)
    s.add_argument("--contexts", required=True)
    s.add_argument("--out", required=True, help="predicted mapping JSON file")
    s.add_argument("--strategy", choices=STRATEGIES, default=STRATEGIES[0])
    s.add_argument("--corpus", help="corpus for the built-in co-occurrence fill model")
    s.add_argument("--plugin", help="command launching a fill/embed plugin")
    s.add_argument("--embed-plugin", help="separate command for an embed plugin")
    s.add_argument("--top-n", type=_positive, default=1000)
    s.add_argument("--template", default="{mask} {cell}", help="cell template with {mask} and {cell} slots")
    s.add_argument("--restoration-top-k", type=_positive, default=1)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--flagged", help="write ids of fallback-decided contexts here")

    s = sub.add_parser("score", help="accuracy of a predicted mapping against gold")
    s.add_argument("--pred", required=True)
    s.add_argument("--gold", required=True)
    s.add_argument("--report", help="write the full report as JSON")

    s = sub.add_parser("render", help="render sketches as HTML tables")
    s.add_argument("--sketches", required=True)
    s.add_argument("--out", required=True, help="output directory")
    s.add_argument("--id", action="append", help="only these sketch ids")
    return p


def _out_dir(path: str) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_ingest(args) -> int:
    if not args.corpus and not args.contexts:
        raise UsageError("ingest needs --corpus and/or --contexts")
    records = ingest_corpus(args.corpus) if args.corpus else None
    contexts = ingest_contexts(args.contexts) if args.contexts else None
    out = _out_dir(args.out)
    if records is not None:
        write_corpus(records, out / "records.tsv")
        log.info("%d records", len(records))
    if contexts is not None:
        write_contexts(contexts, out / "contexts.jsonl")
        log.info("%d contexts", len(contexts))
    return 0


def cmd_build(args) -> int:
    config = BuildConfig(
        dependency_threshold=args.threshold,
        min_meanings=args.min_meanings,
        max_roles=args.max_roles,
        max_fillers_per_role=args.max_fillers,
        excluded_flags=args.exclude_flags,
    )
    records = ingest_corpus(args.corpus)
    sketches = build_all(records, config)
    write_sketches(sketches, _out_dir(args.out) / "sketches.jsonl")
    log.info("%d sketches from %d records", len(sketches), len(records))
    return 0


def cmd_anonymize(args) -> int:
    sketches, secret = anonymize(read_sketches(args.sketches), args.seed)
    out = _out_dir(args.out)
    write_sketches(sketches, out / "sketches.jsonl")
    write_secret(secret, out / "secret.json")
    return 0


def cmd_dataset(args) -> int:
    sketches = read_sketches(args.sketches)
    secret = read_secret(args.secret)
    pool = pool_by_sense(ingest_contexts(args.contexts))
    datasets = split_dataset(sketches, pool, args.splits, args.seed, secret=secret, strict=args.strict)
    out = _out_dir(args.out)
    for ds in datasets:
        emit_dataset(ds, out / ds.split.name, answers=out / "answers" / f"{ds.split.name}.gold.json")
        log.info("%s: %d sketches, %d contexts", ds.split.name, len(ds.sketches), len(ds.contexts))
    return 0


def cmd_match(args) -> int:
    if args.strategy in ("baseline-intersection", "template-score", "predicate-restoration"):
        if not args.corpus and not args.plugin:
            raise UsageError(f"{args.strategy} needs --corpus or --plugin for a fill model")
    if args.strategy == "flatten-similarity" and not (args.plugin or args.embed_plugin):
        raise UsageError("flatten-similarity needs an embed plugin (--plugin or --embed-plugin)")
    config = MatchConfig(
        strategy=args.strategy,
        top_n=args.top_n,
        template_pattern=args.template,
        restoration_top_k=args.restoration_top_k,
    )
    sketches = read_sketches(args.sketches)
    contexts = ingest_contexts(args.contexts)
    with ExitStack() as stack:
        plugin = stack.enter_context(PluginClient(args.plugin)) if args.plugin else None
        embed_plugin = stack.enter_context(PluginClient(args.embed_plugin)) if args.embed_plugin else None
        filler = plugin if plugin is not None and FILL in plugin.capabilities else None
        if filler is None and args.corpus:
            filler = train_cooccurrence(filter_records(ingest_corpus(args.corpus), BuildConfig()))
        embedder = embed_plugin or (plugin if plugin is not None and EMBED in plugin.capabilities else None)
        model = Combined(filler, embedder)
        outcome = run_matching(contexts, sketches, config, model, model, jobs=args.jobs)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(dump_mapping(outcome.mapping), encoding="utf-8")
    if outcome.flagged:
        log.warning("%d of %d contexts decided by fallback", len(outcome.flagged), len(contexts))
    if args.flagged:
        Path(args.flagged).write_text("".join(f"{c}\n" for c in outcome.flagged), encoding="utf-8")
    return 0


def cmd_score(args) -> int:
    report = accuracy(load_mapping(args.pred), load_mapping(args.gold))
    print(format_accuracy(report.accuracy))
    if args.report:
        Path(args.report).write_text(report.to_json(), encoding="utf-8")
    return 0


def cmd_render(args) -> int:
    sketches = read_sketches(args.sketches)
    if args.id:
        wanted = set(args.id)
        missing = wanted - {s.id for s in sketches}
        if missing:
            raise SemSketchError(f"unknown sketch ids: {sorted(missing)}")
        sketches = [s for s in sketches if s.id in wanted]
    out = _out_dir(args.out)
    for sk in sketches:
        render_sketch(sk, out / html_filename(sk))
    return 0


COMMANDS = {
    "ingest": cmd_ingest,
    "build": cmd_build,
    "anonymize": cmd_anonymize,
    "dataset": cmd_dataset,
    "match": cmd_match,
    "score": cmd_score,
    "render": cmd_render,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="semsketch: %(levelname)s: %(message)s",
        stream=sys.stderr,
    )
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"semsketch {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except (SemSketchError, ValueError, OSError) as exc:
        print(f"semsketch {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
