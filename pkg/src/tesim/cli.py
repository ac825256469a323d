"""Command-line entry point.

Exit codes: 0 success, 1 partial failure, 2 invalid invocation or config.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable, Sequence, TextIO

from . import resources as res
from .evaluation import PairFileError, evaluation_report, load_pairs
from .extraction import ArticleFormatError, ExtractionError, extract_topic_event, parse_article
from .model import RecordError, TopicEvent, ValidationError, parse_topic_events, serialize_topic_events
from .ontology import OntologyError, link_terminology, load_ontology
from .similarity import (
    ConfigError,
    Settings,
    SimilarityConfig,
    dump_settings,
    load_settings,
    te_similarity,
)
from .termsim import OntologyBackend, VectorBackend, build_lsa_space, dump_vectors, load_vectors
from .text import DET, OTHER, PREP, PUNCT, tag_tokens, tokenize

EXIT_OK, EXIT_PARTIAL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad arguments, resources or configuration (exit code 2)."""


@dataclass
class RunManifest:
    command: str
    resources: dict[str, str] = field(default_factory=dict)
    inputs: list[str] = field(default_factory=list)
    output: str = ""
    timings: dict[str, float] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def stage(self, name: str):
        return _Stage(self, name)

    def render(self) -> str:
        lines = [f"command={self.command}"]
        lines += [f"resource.{k}={v}" for k, v in sorted(self.resources.items())]
        lines += [f"input={p}" for p in self.inputs]
        lines.append(f"output={self.output}")
        lines += [f"time.{k}={v:.6f}" for k, v in self.timings.items()]
        lines.append(f"peak_memory_mb={_peak_memory_mb():.1f}")
        lines += [f"note={n}" for n in self.notes]
        return "\n".join(lines) + "\n"


class _Stage:
    def __init__(self, manifest: RunManifest, name: str):
        self.manifest, self.name = manifest, name

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.manifest.timings[self.name] = time.perf_counter() - self.start
        return False


def _peak_memory_mb() -> float:
    try:
        import resource
    except ImportError:  # pragma: no cover - non-unix
        return 0.0
    return resource.getrusage(resource.RUSAGE_SELF).ru_maxrss / 1024.0


def _resolve(path: str | None, bundled: str, manifest: RunManifest, key: str) -> str | None:
    if path is None:
        manifest.resources[key] = f"bundled:{bundled}"
        return None
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{key} file not found: {path}")
    manifest.resources[key] = str(p)
    return str(p)


def _map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- topic event files ------------------------------------------------------------------


def read_te_records(path: str | Path) -> dict[str, TopicEvent]:
    """TE records from a file or from every ``*.json``/``*.jsonl`` file in a directory."""
    p = Path(path)
    if p.is_dir():
        files = sorted(q for q in p.iterdir() if q.suffix in (".json", ".jsonl"))
    elif p.is_file():
        files = [p]
    else:
        raise UsageError(f"no such TE file or directory: {path}")
    out: dict[str, TopicEvent] = {}
    for f in files:
        for te in parse_topic_events(f.read_bytes()):
            out.setdefault(te.did, te)
    return out


def _read_single_te(path: str) -> TopicEvent:
    try:
        tes = parse_topic_events(Path(path).read_bytes())
    except FileNotFoundError:
        raise UsageError(f"no such TE file: {path}") from None
    if len(tes) != 1:
        raise UsageError(f"{path}: expected exactly one TE record, found {len(tes)}")
    return tes[0]


def article_tokens(text: str) -> list[str]:
    """Lowercased content-word tokens of an article (for the LSA matrix)."""
    art = parse_article(text)
    words = tokenize(art.title) + [w for s in art.sections for w in tokenize(s.body)]
    skip = {DET, PREP, OTHER, PUNCT}
    return [w.lower() for w, t in zip(words, tag_tokens(words)) if t not in skip]


def _article_files(path: str) -> list[Path]:
    p = Path(path)
    if p.is_dir():
        return sorted(q for q in p.iterdir() if q.suffix == ".txt")
    if p.is_file():
        return [p]
    raise UsageError(f"no such article file or directory: {path}")


# -- similarity configuration -----------------------------------------------------------


def _settings(args, manifest: RunManifest, out: TextIO) -> Settings:
    if args.config is None:
        settings = Settings()
        print("# config: defaults", file=out)
        manifest.resources["config"] = "defaults"
    else:
        try:
            settings = load_settings(Path(args.config).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise UsageError(f"config file not found: {args.config}") from None
        print(f"# config: {args.config}", file=out)
        manifest.resources["config"] = args.config
    overrides = {}
    if args.backend is not None:
        overrides["backend"] = args.backend
    if args.lsa_rank is not None:
        overrides["lsa_rank"] = args.lsa_rank
    return replace(settings, **overrides) if overrides else settings


def _similarity_config(args, settings: Settings, manifest: RunManifest, out: TextIO) -> SimilarityConfig:
    onto_path = _resolve(args.ontology, res.DATA_FILES["ontology"], manifest, "ontology")
    style_path = _resolve(args.style_ontology, res.DATA_FILES["style_ontology"], manifest, "style_ontology")
    graph = res.default_ontology() if onto_path is None else load_ontology(Path(onto_path).read_text("utf-8"))
    style = res.load_style_graph(style_path)
    onto_backend = OntologyBackend(graph)

    if settings.backend == "onto":
        backend = onto_backend
    elif settings.backend == "vectors":
        if args.vectors is None:
            raise UsageError("--backend vectors requires --vectors FILE")
        manifest.resources["vectors"] = args.vectors
        backend = VectorBackend(load_vectors(Path(args.vectors).read_text("utf-8")))
    else:
        if args.corpus is None:
            raise UsageError("--backend lsa requires --corpus DIR of articles")
        manifest.resources["corpus"] = args.corpus
        space = _lsa_space(args.corpus, settings.lsa_rank, manifest)
        if space.k != settings.lsa_rank:
            print(f"# lsa_rank clamped to {space.k}", file=out)
        backend = space.backend()
    print(f"# backend: {settings.backend}", file=out)
    return SimilarityConfig(backend, style, dict(settings.weights), domain_backend=onto_backend)


def _lsa_space(corpus: str, rank: int, manifest: RunManifest):
    files = _article_files(corpus)
    docs, ids = [], []
    for f in files:
        docs.append(article_tokens(f.read_text("utf-8")))
        ids.append(f.stem)
    if not docs:
        raise UsageError(f"no articles in {corpus}")
    vocab = len(set().union(*map(set, docs)))
    k = min(rank, vocab, len(docs))
    if k != rank:
        manifest.notes.append(f"lsa_rank clamped from {rank} to {k}")
    return build_lsa_space(docs, k, ids)


# -- commands -----------------------------------------------------------------------------


def cmd_extract(args, out: TextIO, err: TextIO) -> int:
    manifest = RunManifest("extract")
    with manifest.stage("load_resources"):
        paths = {
            "ontology": _resolve(args.ontology, res.DATA_FILES["ontology"], manifest, "ontology"),
            "patterns": _resolve(args.patterns, res.DATA_FILES["patterns"], manifest, "patterns"),
            "style_rules": _resolve(args.style_rules, res.DATA_FILES["style_rules"], manifest, "style_rules"),
            "triggers": _resolve(args.triggers, res.DATA_FILES["triggers"], manifest, "triggers"),
        }
        resources = res.load_resources(**paths)
    files = _article_files(args.input)
    manifest.inputs = [str(f) for f in files]

    def run(path: Path):
        try:
            article = parse_article(path.read_text(encoding="utf-8"))
        except (OSError, UnicodeDecodeError, ArticleFormatError) as exc:
            return path.name, None, f"{path.name}: {exc}"
        try:
            return article.did, extract_topic_event(article, resources), None
        except ExtractionError as exc:
            return article.did, None, str(exc)

    with manifest.stage("extract"):
        results = sorted(_map(run, files, args.workers), key=lambda r: r[0])
    records = [te for _, te, _ in results if te is not None]
    errors = [(key, msg) for key, _, msg in results if msg is not None]

    with manifest.stage("write"):
        text = serialize_topic_events(records)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
            manifest.output = args.out
        else:
            out.write(text)
            manifest.output = "-"
    for key, msg in errors:
        print(f"error[{key}]: {msg}", file=err)
        manifest.notes.append(f"error {key}: {msg}")
    if args.out:
        Path(args.out + ".manifest").write_text(manifest.render(), encoding="utf-8")
    if files and not records:
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_link(args, out: TextIO, err: TextIO) -> int:
    manifest = RunManifest("link")
    path = _resolve(args.ontology, res.DATA_FILES["ontology"], manifest, "ontology")
    graph = res.default_ontology() if path is None else load_ontology(Path(path).read_text("utf-8"))
    for term in args.terms:
        link = link_terminology(graph, term)
        label = graph.nodes[link.node_id].label
        print(
            f"{term}\t{link.node_id}\t{label}\tscore={link.score}\t"
            f"{'confident' if link.confident else 'low-confidence'}",
            file=out,
        )
    return EXIT_OK


def cmd_sim(args, out: TextIO, err: TextIO) -> int:
    manifest = RunManifest("sim")
    settings = _settings(args, manifest, out)
    cfg = _similarity_config(args, settings, manifest, out)
    try:
        a, b = _read_single_te(args.te_a), _read_single_te(args.te_b)
    except ValidationError as exc:
        print(f"invalid topic event: {', '.join(exc.fields)} ({exc})", file=err)
        return EXIT_USAGE
    breakdown = te_similarity(a, b, cfg)
    print(f"# pair: {a.did} {b.did}", file=out)
    for line in breakdown.lines():
        print(line, file=out)
    return EXIT_OK


def cmd_eval(args, out: TextIO, err: TextIO) -> int:
    manifest = RunManifest("eval")
    settings = _settings(args, manifest, out)
    with manifest.stage("load"):
        cfg = _similarity_config(args, settings, manifest, out)
        tes = read_te_records(args.te_dir)
        try:
            pairs = load_pairs(Path(args.pairs).read_bytes())
        except FileNotFoundError:
            raise UsageError(f"pairs file not found: {args.pairs}") from None
    manifest.inputs = [args.te_dir, args.pairs]
    if not pairs:
        print("error: no pairs", file=err)
        return EXIT_USAGE

    usable, skipped = [], []
    for p in pairs:
        missing = [d for d in (p.did_a, p.did_b) if d not in tes]
        if missing:
            skipped.append((p, missing))
        else:
            usable.append(p)
    for p, missing in skipped:
        print(f"skip: {p.did_a}\t{p.did_b}\tmissing={','.join(missing)}", file=out)
    print(f"pairs={len(pairs)} scored={len(usable)} skipped={len(skipped)}", file=out)
    if len(skipped) * 2 > len(pairs):
        print(f"error: {len(skipped)} of {len(pairs)} pairs skipped (more than half)", file=err)
        return EXIT_PARTIAL

    def score(p):
        start = time.perf_counter()
        total = te_similarity(tes[p.did_a], tes[p.did_b], cfg).total
        return total, time.perf_counter() - start

    with manifest.stage("score"):
        results = _map(score, usable, args.workers)
    scores = [s for s, _ in results]
    mean_time = sum(t for _, t in results) / len(results) if results else 0.0

    with manifest.stage("report"):
        report = evaluation_report(scores, usable)
        Path(args.out).write_text(report, encoding="utf-8")
    manifest.output = args.out
    manifest.notes.append(f"mean_pair_seconds={mean_time:.6f}")
    Path(args.out + ".manifest").write_text(manifest.render(), encoding="utf-8")
    for line in report.splitlines():
        if "=" in line:
            print(line, file=out)
    print(f"mean_pair_seconds={mean_time:.6f}", file=out)
    return EXIT_OK


def cmd_lsa_build(args, out: TextIO, err: TextIO) -> int:
    manifest = RunManifest("lsa-build")
    rank = args.lsa_rank if args.lsa_rank is not None else Settings().lsa_rank
    with manifest.stage("build"):
        space = _lsa_space(args.corpus, rank, manifest)
    text = dump_vectors({t: space.term_vectors[i] for t, i in space.vocabulary.items()})
    Path(args.out).write_text(text, encoding="utf-8")
    manifest.output = args.out
    Path(args.out + ".manifest").write_text(manifest.render(), encoding="utf-8")
    print(f"terms={len(space.vocabulary)} docs={len(space.doc_ids)} k={space.k}", file=out)
    return EXIT_OK


def cmd_ontology_check(args, out: TextIO, err: TextIO) -> int:
    try:
        text = Path(args.path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    try:
        graph = load_ontology(text)
    except OntologyError as exc:
        print(f"invalid ontology: {exc}", file=err)
        return EXIT_PARTIAL
    print(f"nodes={len(graph)} max_depth={graph.max_depth}", file=out)
    print(f"root={graph.root} label={graph.nodes[graph.root].label}", file=out)
    for depth, count in graph.depth_histogram().items():
        print(f"depth.{depth}={count}", file=out)
    return EXIT_OK


def cmd_config(args, out: TextIO, err: TextIO) -> int:
    out.write(dump_settings(Settings()))
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------------


def _add_similarity_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value weights/backend file (defaults if omitted)")
    p.add_argument("--ontology", help="domain ontology file")
    p.add_argument("--style-ontology", help="research style hierarchy file")
    p.add_argument("--backend", choices=("onto", "lsa", "vectors"))
    p.add_argument("--lsa-rank", type=int, metavar="K")
    p.add_argument("--vectors", help="vector file for --backend vectors")
    p.add_argument("--corpus", help="article directory for --backend lsa")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tesim", description="Topic event extraction and document similarity."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="extract topic events from article files")
    p.add_argument("input", help="article file or directory of *.txt articles")
    p.add_argument("--out", help="output TE batch file (stdout if omitted)")
    p.add_argument("--ontology")
    p.add_argument("--patterns")
    p.add_argument("--style-rules")
    p.add_argument("--triggers")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("link", help="link terms to ontology concepts")
    p.add_argument("terms", nargs="+")
    p.add_argument("--ontology")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("sim", help="similarity breakdown of two TE records")
    p.add_argument("te_a")
    p.add_argument("te_b")
    _add_similarity_flags(p)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("eval", help="score annotated pairs and sweep thresholds")
    p.add_argument("te_dir", help="TE batch file or directory of TE records")
    p.add_argument("pairs", help="annotated pair file")
    p.add_argument("--out", required=True, help="CSV report path")
    p.add_argument("--workers", type=int, default=1)
    _add_similarity_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("lsa-build", help="build LSA term vectors from articles")
    p.add_argument("corpus", help="directory of *.txt articles")
    p.add_argument("--out", required=True, help="vector file path")
    p.add_argument("--lsa-rank", type=int, metavar="K")
    p.set_defaults(func=cmd_lsa_build)

    p = sub.add_parser("ontology-check", help="validate an ontology file and print stats")
    p.add_argument("path")
    p.set_defaults(func=cmd_ontology_check)

    p = sub.add_parser("config", help="print the default configuration")
    p.set_defaults(func=cmd_config)
    return parser


def main(argv: Iterable[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    args = build_parser().parse_args(None if argv is None else list(argv))
    try:
        return args.func(args, out, err)
    except (UsageError, ConfigError, OntologyError, PairFileError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_USAGE
    except (RecordError, ValidationError) as exc:
        print(f"invalid topic event record: {exc}", file=err)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
