"""Command-line interface.

Subcommands wire the pipeline end to end: ``gen`` plants a synthetic
corpus, ``validate`` lints KB and corpus files, ``vectorize`` exports
tf.idf weights, ``cluster`` runs the multi-phase hierarchy and writes the
JSON (and optionally HTML) report, and ``tune`` sweeps k for one feature
space. Exit codes: 0 success, 1 data or validation error, 2 usage error.
Failures print a single line naming the stage that failed.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .corpus import Corpus, dump_corpus, lint_corpus, load_corpus
from .errors import ParseError, ValidationError
from .evaluate import label_documents, tune_k
from .hierarchy import ClusterConfig, hierarchical_cluster
from .kb import KnowledgeBase, dump_kb, load_kb
from .report import build_report, dumps_json, dumps_report, format_float, render_html
from .synth import GenParams, SynthSchema, gen_synthetic
from .vsm import FeatureSpace, build_index, build_vectors, term_key, vectorize


class _StageFailure(Exception):
    """A pipeline stage failed; carries the exit code and a one-line message."""

    def __init__(self, stage: str, message: str, code: int):
        super().__init__(f"stage={stage}: {message}")
        self.stage = stage
        self.message = message
        self.code = code


def _load_kb_file(path: str) -> KnowledgeBase:
    try:
        return load_kb(path)
    except FileNotFoundError:
        raise _StageFailure("load_kb", f"no such file: {path}", 2) from None
    except (ParseError, ValidationError) as exc:
        raise _StageFailure("load_kb", str(exc), 1) from None


def _load_corpus_file(path: str, kb: KnowledgeBase) -> Corpus:
    try:
        return load_corpus(path, kb)
    except FileNotFoundError:
        raise _StageFailure("load_corpus", f"no such file: {path}", 2) from None
    except (ParseError, ValidationError) as exc:
        raise _StageFailure("load_corpus", str(exc), 1) from None


def _write_output(text: str, path: str | None, stage: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _StageFailure(stage, f"cannot write {path}: {exc}", 2) from None


def _parse_phases(text: str, parser: argparse.ArgumentParser) -> list[FeatureSpace]:
    try:
        phases = [FeatureSpace.parse(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        parser.error(str(exc))
    if not phases:
        parser.error("--phases must name at least one feature space")
    return phases


def _parse_k(text: str, n_phases: int, parser: argparse.ArgumentParser) -> list[int | str]:
    tokens = [part.strip() for part in text.split(",") if part.strip()]
    if not tokens:
        parser.error("--k must not be empty")
    ks: list[int | str] = []
    for token in tokens:
        if token == "auto":
            ks.append("auto")
            continue
        try:
            value = int(token)
        except ValueError:
            parser.error(f"--k entries must be integers or 'auto', got {token!r}")
        if value < 1:
            parser.error(f"--k entries must be at least 1, got {value}")
        ks.append(value)
    if len(ks) == 1:
        ks = ks * n_phases
    if len(ks) != n_phases:
        parser.error(f"--k lists {len(ks)} values for {n_phases} phases")
    return ks


def _parse_k_range(text: str, parser: argparse.ArgumentParser) -> list[int]:
    text = text.strip()
    try:
        if ".." in text:
            lo_text, hi_text = text.split("..", 1)
            lo, hi = int(lo_text), int(hi_text)
            ks = list(range(lo, hi + 1))
        else:
            ks = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        parser.error(f"cannot parse --k-range {text!r}: use 'LO..HI' or 'K1,K2,...'")
    if not ks:
        parser.error("--k-range is empty")
    if any(k < 1 for k in ks):
        parser.error("--k-range values must be at least 1")
    return ks


def _check_unit_interval(value: float, flag: str, parser: argparse.ArgumentParser) -> float:
    if not 0.0 <= value <= 1.0:
        parser.error(f"{flag} must lie in [0, 1], got {value}")
    return value


def _add_io_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--kb", required=True, help="knowledge base JSON file")
    sub.add_argument("--corpus", required=True, help="corpus JSONL file")


def _add_run_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--alpha", type=float, default=0.5,
                     help="weight of cluster entropy in the overall measure")
    sub.add_argument("--tc", type=float, default=0.4,
                     help="labeling threshold as a fraction of document weight")
    sub.add_argument("--seed", type=int, default=42)
    sub.add_argument("--restarts", type=int, default=4)
    sub.add_argument("--max-iter", type=int, default=100, dest="max_iter")
    sub.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="necluster",
        description="Cluster NE-annotated documents over name, type, "
                    "name-type, and identifier feature spaces.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_cluster = subs.add_parser("cluster", help="run multi-phase hierarchical clustering")
    _add_io_flags(p_cluster)
    p_cluster.add_argument("--phases", required=True,
                           help="comma-separated feature spaces, e.g. type,identifier")
    p_cluster.add_argument("--k", default="auto",
                           help="per-phase cluster counts ('auto' or comma-separated)")
    _add_run_flags(p_cluster)
    p_cluster.add_argument("--rescope-idf", action="store_true", dest="rescope_idf",
                           help="recompute idf inside each leaf instead of corpus-wide")
    p_cluster.add_argument("--out", help="JSON report path (default: stdout)")
    p_cluster.add_argument("--html", help="also write an HTML tree here")

    p_tune = subs.add_parser("tune", help="sweep k and report entropies")
    _add_io_flags(p_tune)
    p_tune.add_argument("--phases", required=True,
                        help="a single feature space to tune on")
    p_tune.add_argument("--k-range", required=True, dest="k_range",
                        help="'2..10' or a comma-separated list")
    _add_run_flags(p_tune)
    p_tune.add_argument("--out", help="CSV table path (default: stdout)")
    p_tune.add_argument("--summary", help="JSON summary path (default: stdout)")

    p_gen = subs.add_parser("gen", help="generate a synthetic corpus with planted structure")
    p_gen.add_argument("--groups", type=int, default=3)
    p_gen.add_argument("--docs-per-group", type=int, default=20, dest="docs_per_group")
    p_gen.add_argument("--mentions-per-doc", type=int, default=8, dest="mentions_per_doc")
    p_gen.add_argument("--noise-rate", type=float, default=0.1, dest="noise_rate")
    p_gen.add_argument("--seed", type=int, default=42)
    p_gen.add_argument("--entities-per-group", type=int, default=4, dest="entities_per_group")
    p_gen.add_argument("--aliases-per-entity", type=int, default=1, dest="aliases_per_entity")
    p_gen.add_argument("--types-per-group", type=int, default=2, dest="types_per_group")
    p_gen.add_argument("--identity-focus", type=float, default=1.0, dest="identity_focus")
    p_gen.add_argument("--out-kb", required=True, dest="out_kb")
    p_gen.add_argument("--out-corpus", required=True, dest="out_corpus")

    p_validate = subs.add_parser("validate", help="lint a KB and corpus")
    _add_io_flags(p_validate)

    p_vec = subs.add_parser("vectorize", help="export tf.idf vectors as JSONL")
    _add_io_flags(p_vec)
    p_vec.add_argument("--phases", default="name,type,nametype,identifier",
                       help="feature spaces to export (default: all)")
    p_vec.add_argument("--out", help="JSONL path (default: stdout)")

    return parser


def _cmd_cluster(args, parser: argparse.ArgumentParser) -> int:
    phases = _parse_phases(args.phases, parser)
    ks = _parse_k(args.k, len(phases), parser)
    _check_unit_interval(args.alpha, "--alpha", parser)
    _check_unit_interval(args.tc, "--tc", parser)
    kb = _load_kb_file(args.kb)
    corpus = _load_corpus_file(args.corpus, kb)
    configs = [ClusterConfig(k=k, seed=args.seed, restarts=args.restarts,
                             max_iterations=args.max_iter) for k in ks]
    try:
        result = hierarchical_cluster(corpus, phases, configs, alpha=args.alpha,
                                      tc_fraction=args.tc, rescope_idf=args.rescope_idf,
                                      threads=args.threads)
    except ValueError as exc:
        raise _StageFailure("cluster", str(exc), 1) from None
    config_echo = {
        "kb": args.kb,
        "corpus": args.corpus,
        "phases": [space.value for space in phases],
        "k": ks,
        "alpha": float(args.alpha),
        "tc_fraction": float(args.tc),
        "seed": args.seed,
        "restarts": args.restarts,
        "max_iterations": args.max_iter,
        "rescope_idf": bool(args.rescope_idf),
    }
    report = build_report(result, corpus, config_echo)
    _write_output(dumps_report(report), args.out, "write_report")
    if args.html is not None:
        _write_output(render_html(report), args.html, "write_html")
    return 0


def _cmd_tune(args, parser: argparse.ArgumentParser) -> int:
    phases = _parse_phases(args.phases, parser)
    if len(phases) != 1:
        parser.error("tune works on exactly one feature space")
    ks = _parse_k_range(args.k_range, parser)
    _check_unit_interval(args.alpha, "--alpha", parser)
    _check_unit_interval(args.tc, "--tc", parser)
    kb = _load_kb_file(args.kb)
    corpus = _load_corpus_file(args.corpus, kb)
    space = phases[0]
    index = build_index(corpus, space)
    vectors = build_vectors(corpus, index)
    labels = label_documents(vectors, index, args.tc)
    try:
        best_k, reports = tune_k(vectors, labels, ks, alpha=args.alpha,
                                 restarts=args.restarts, seed=args.seed,
                                 max_iterations=args.max_iter, threads=args.threads)
    except ValueError as exc:
        raise _StageFailure("tune", str(exc), 1) from None
    rows = ["k,cluster_entropy,class_entropy,overall_entropy"]
    for rep in reports:
        rows.append(",".join([str(rep.k), format_float(rep.cluster_entropy),
                              format_float(rep.class_entropy), format_float(rep.overall)]))
    _write_output("\n".join(rows) + "\n", args.out, "write_table")
    summary = {
        "space": space.value,
        "alpha": float(args.alpha),
        "tc_fraction": float(args.tc),
        "seed": args.seed,
        "restarts": args.restarts,
        "k_range": ks,
        "best_k": best_k,
    }
    _write_output(dumps_json(summary, indent=2) + "\n", args.summary, "write_summary")
    return 0


def _cmd_gen(args, parser: argparse.ArgumentParser) -> int:
    params = GenParams(groups=args.groups, docs_per_group=args.docs_per_group,
                       mentions_per_doc=args.mentions_per_doc,
                       noise_rate=args.noise_rate, seed=args.seed)
    schema = SynthSchema(entities_per_group=args.entities_per_group,
                         aliases_per_entity=args.aliases_per_entity,
                         types_per_group=args.types_per_group,
                         identity_focus=args.identity_focus)
    try:
        corpus, kb = gen_synthetic(params, schema)
    except ValueError as exc:
        parser.error(str(exc))
    _write_output(dump_kb(kb), args.out_kb, "write_kb")
    _write_output(dump_corpus(corpus), args.out_corpus, "write_corpus")
    print(f"generated {len(corpus)} documents over {args.groups} groups "
          f"({args.entities_per_group} identities each), "
          f"noise rate {args.noise_rate}, seed {args.seed}")
    print("ground truth: group in 'group_truth', identity encoded in doc_id")
    return 0


def _cmd_validate(args, parser: argparse.ArgumentParser) -> int:
    try:
        kb = load_kb(args.kb)
    except FileNotFoundError:
        raise _StageFailure("load_kb", f"no such file: {args.kb}", 2) from None
    except (ParseError, ValidationError) as exc:
        print(f"kb: {exc}")
        return 1
    try:
        diagnostics = lint_corpus(args.corpus, kb)
    except FileNotFoundError:
        raise _StageFailure("load_corpus", f"no such file: {args.corpus}", 2) from None
    for line in diagnostics:
        print(line)
    if diagnostics:
        return 1
    corpus = _load_corpus_file(args.corpus, kb)
    print(f"ok: {len(kb.entities)} entities, {len(corpus)} documents")
    return 0


def _cmd_vectorize(args, parser: argparse.ArgumentParser) -> int:
    phases = _parse_phases(args.phases, parser)
    kb = _load_kb_file(args.kb)
    corpus = _load_corpus_file(args.corpus, kb)
    indexes = {space: build_index(corpus, space) for space in phases}
    lines = []
    for doc in corpus:
        for space in phases:
            index = indexes[space]
            vec = vectorize(doc, index, kb)
            weights = {term_key(index.terms[dim]): vec.entries[dim]
                       for dim in sorted(vec.entries)}
            lines.append(dumps_json({"doc_id": doc.doc_id, "space": space.value,
                                     "weights": weights}))
    _write_output("\n".join(lines) + "\n", args.out, "write_vectors")
    return 0


_COMMANDS = {
    "cluster": _cmd_cluster,
    "tune": _cmd_tune,
    "gen": _cmd_gen,
    "validate": _cmd_validate,
    "vectorize": _cmd_vectorize,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args, parser)
    except _StageFailure as failure:
        print(f"error: {failure}", file=sys.stderr)
        return failure.code
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


def run() -> None:
    sys.exit(main(sys.argv[1:]))
