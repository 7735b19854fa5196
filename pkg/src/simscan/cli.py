"""Command-line interface for the detection pipeline.

Commands mirror the pipeline stages: segment raw text into a corpus file,
synthesize a labeled dataset, build and query vector indexes, train the
classifier, evaluate, run detection, and serve the HTTP API. All output
meant for machines is JSON on stdout; progress goes to stderr.
"""

from __future__ import annotations

import json
import logging
import os
import sys

import click
import numpy as np

from .config import EngineConfig, load_config
from .corpus import (
    build_dataset,
    generate_corpus,
    read_corpus,
    read_dataset,
    segment_document,
    shuffle_plagiarize,
    split_dataset,
    write_corpus,
    write_dataset,
)
from .embedding import ProviderConfig, make_embedder
from .engine import DetectionEngine
from .errors import SimscanError
from .index import FlatIndex, IvfIndex, load_index, save_index
from .metrics import evaluate_classifier, evaluate_retrieval
from .mlp import PairClassifier, pair_features
from .server import serve as run_server


def _fail(exc):
    click.echo(f"error: {exc}", err=True)
    sys.exit(1)


def _engine_config(config_path, **overrides):
    config = load_config(config_path) if config_path else EngineConfig()
    changed = {k: v for k, v in overrides.items() if v is not None}
    if not changed:
        return config
    values = {f: getattr(config, f) for f in config.__dataclass_fields__}
    values.update(changed)
    return EngineConfig(**values)


def _embedder_from(config):
    return make_embedder(
        ProviderConfig(
            kind=config.provider_kind,
            dimension=config.dimension,
            normalize=config.normalize,
            endpoint=config.endpoint,
            seed=config.seed,
        )
    )


def _load_engine(state, config_path, corpus, index, params, **overrides):
    if state:
        return DetectionEngine.load(state)
    if not (corpus and index):
        raise click.UsageError(
            "provide --state DIR or both --corpus and --index"
        )
    config = _engine_config(config_path, **overrides)
    return DetectionEngine.from_artifacts(config, corpus, index, params)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log progress to stderr.")
def main(verbose):
    """Text similarity search and plagiarism detection."""
    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(name)s %(message)s",
    )


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.argument("output_path", type=click.Path())
@click.option("--max-tokens", default=512, show_default=True)
def segment(input_path, output_path, max_tokens):
    """Split plain-text documents into a corpus file.

    INPUT_PATH is one text file or a directory of .txt files; each file
    becomes one document whose id is the file name without extension.
    """
    paths = []
    if os.path.isdir(input_path):
        for name in sorted(os.listdir(input_path)):
            if name.endswith(".txt"):
                paths.append(os.path.join(input_path, name))
    else:
        paths.append(input_path)
    segments = []
    try:
        for path in paths:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
            doc_id = os.path.splitext(os.path.basename(path))[0]
            segments.extend(
                segment_document(
                    doc_id, text, max_tokens=max_tokens, id_start=len(segments)
                )
            )
        write_corpus(segments, output_path)
    except (OSError, SimscanError) as exc:
        _fail(exc)
    click.echo(json.dumps({"documents": len(paths), "segments": len(segments)}))


@main.command()
@click.argument("corpus_path", type=click.Path())
@click.argument("output_path", type=click.Path())
@click.option("--seed", default=0, show_default=True)
@click.option("--n-negative", default=1, show_default=True)
@click.option("--n-imitation", default=1, show_default=True)
@click.option("--n-shuffle", default=1, show_default=True)
@click.option("--n-decoy", default=0, show_default=True)
@click.option(
    "--generate",
    default=None,
    metavar="DOCSxSEGS",
    help="First write a generated corpus of DOCSxSEGS segments to CORPUS_PATH.",
)
def synth(corpus_path, output_path, seed, n_negative, n_imitation, n_shuffle,
          n_decoy, generate):
    """Build a labeled (t1, t2, label) dataset from a corpus file."""
    try:
        if generate:
            n_docs, _, per_doc = generate.lower().partition("x")
            segments = generate_corpus(
                n_docs=int(n_docs), segments_per_doc=int(per_doc), seed=seed
            )
            write_corpus(segments, corpus_path)
        segments = read_corpus(corpus_path)
        pairs = build_dataset(
            segments,
            seed=seed,
            n_negative=n_negative,
            n_imitation=n_imitation,
            n_shuffle=n_shuffle,
            n_decoy=n_decoy,
        )
        write_dataset(pairs, output_path)
    except (ValueError, SimscanError) as exc:
        _fail(exc)
    click.echo(json.dumps({"segments": len(segments), "pairs": len(pairs)}))


@main.group()
def index():
    """Build or query a vector index over a corpus."""


@index.command("build")
@click.argument("corpus_path", type=click.Path(exists=True))
@click.argument("index_path", type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--nlist", type=int, default=None,
              help="Inverted lists; 0 builds an exact index.")
@click.option("--nprobe", type=int, default=None)
@click.option("--metric", type=click.Choice(["inner_product", "l2"]),
              default=None)
@click.option("--pq-segments", type=int, default=None)
@click.option("--dim", type=int, default=None)
@click.option("--seed", type=int, default=None)
def index_build(corpus_path, index_path, config_path, nlist, nprobe, metric,
                pq_segments, dim, seed):
    """Embed a corpus and persist the index."""
    try:
        cfg = _engine_config(
            config_path, nlist=nlist, nprobe=nprobe, metric=metric,
            pq_segments=pq_segments, dimension=dim, seed=seed,
        )
        segments = read_corpus(corpus_path)
        embedder = _embedder_from(cfg)
        vectors = embedder.transform([s.text for s in segments])
        ids = np.array([s.id for s in segments], dtype=np.int64)
        if cfg.nlist == 0:
            built = FlatIndex(dim=cfg.dimension, metric=cfg.metric)
            built.add(vectors, ids=ids)
        else:
            built = IvfIndex(
                n_lists=cfg.nlist,
                n_probe=min(cfg.nprobe, cfg.nlist),
                metric=cfg.metric,
                pq_segments=cfg.pq_segments,
                pq_centroids=cfg.pq_centroids,
                random_state=cfg.seed,
            )
            built.fit(vectors, ids=ids)
        save_index(built, index_path)
    except (ValueError, SimscanError) as exc:
        _fail(exc)
    click.echo(json.dumps({"count": built.count, "dim": cfg.dimension}))


@index.command("query")
@click.argument("index_path", type=click.Path(exists=True))
@click.argument("query_file", type=click.Path(exists=True))
@click.option("-k", default=10, show_default=True)
@click.option("--nprobe", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--dim", type=int, default=None)
@click.option("--seed", type=int, default=None)
def index_query(index_path, query_file, k, nprobe, config_path, dim, seed):
    """Search the index with the text in QUERY_FILE; print hits as JSON."""
    try:
        cfg = _engine_config(config_path, dimension=dim, seed=seed)
        with open(query_file, "r", encoding="utf-8") as fh:
            text = fh.read().strip()
        query = _embedder_from(cfg).embed(text)
        loaded = load_index(index_path)
        kwargs = {"n_probe": nprobe} if (
            nprobe is not None and isinstance(loaded, IvfIndex)
        ) else {}
        result = loaded.search(np.asarray(query, dtype=np.float64), k, **kwargs)
        hits = [{"id": int(i), "score": float(s)} for i, s in result.hits]
    except (OSError, ValueError, SimscanError) as exc:
        _fail(exc)
    click.echo(json.dumps({"hits": hits}))


@main.command()
@click.argument("dataset_path", type=click.Path(exists=True))
@click.argument("params_path", type=click.Path())
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--hidden-dim", type=int, default=None)
@click.option("--learning-rate", type=float, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--max-epochs", type=int, default=None)
@click.option("--dim", type=int, default=None)
@click.option("--seed", type=int, default=None)
def train(dataset_path, params_path, config_path, hidden_dim, learning_rate,
          batch_size, max_epochs, dim, seed):
    """Train the pair classifier on a dataset file and save its weights."""
    try:
        cfg = _engine_config(
            config_path, hidden_dim=hidden_dim, learning_rate=learning_rate,
            batch_size=batch_size, max_epochs=max_epochs, dimension=dim,
            seed=seed,
        )
        pairs = read_dataset(dataset_path)
        embedder = _embedder_from(cfg)
        X = pair_features(
            embedder.transform([p.t1 for p in pairs]),
            embedder.transform([p.t2 for p in pairs]),
        )
        y = np.array([p.label for p in pairs], dtype=np.int64)
        clf = PairClassifier(
            hidden_dim=cfg.hidden_dim,
            learning_rate=cfg.learning_rate,
            batch_size=cfg.batch_size,
            max_epochs=cfg.max_epochs,
            random_state=cfg.seed,
        )
        clf.fit(X, y)
        clf.save(params_path)
    except (ValueError, SimscanError) as exc:
        _fail(exc)
    final = clf.history_[-1] if clf.history_ else {}
    click.echo(
        json.dumps(
            {
                "pairs": len(pairs),
                "epochs": len(clf.history_),
                "final_loss": final.get("loss"),
                "final_accuracy": final.get("accuracy"),
            }
        )
    )


@main.group()
def eval():
    """Evaluate a trained classifier or a built index."""


@eval.command("classify")
@click.argument("dataset_path", type=click.Path(exists=True))
@click.argument("params_path", type=click.Path(exists=True))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--ratio", type=float, default=None,
              help="Evaluate only the held-out side of a stratified split.")
@click.option("--dim", type=int, default=None)
@click.option("--seed", type=int, default=None)
def eval_classify(dataset_path, params_path, config_path, ratio, dim, seed):
    """Print accuracy/precision/recall/F1 for a saved classifier."""
    try:
        cfg = _engine_config(config_path, dimension=dim, seed=seed)
        pairs = read_dataset(dataset_path)
        if ratio is not None:
            _, pairs = split_dataset(pairs, ratio=ratio, seed=cfg.seed)
        embedder = _embedder_from(cfg)
        X = pair_features(
            embedder.transform([p.t1 for p in pairs]),
            embedder.transform([p.t2 for p in pairs]),
        )
        y = np.array([p.label for p in pairs], dtype=np.int64)
        clf = PairClassifier.load(params_path)
        report, _ = evaluate_classifier(clf, X, y)
    except (ValueError, SimscanError) as exc:
        _fail(exc)
    click.echo(json.dumps(report.to_dict(), sort_keys=True))


@eval.command("retrieve")
@click.argument("corpus_path", type=click.Path(exists=True))
@click.argument("index_path", type=click.Path(exists=True))
@click.option("-k", default=10, show_default=True)
@click.option("--nprobe", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--dim", type=int, default=None)
@click.option("--seed", type=int, default=None)
def eval_retrieve(corpus_path, index_path, k, nprobe, config_path, dim, seed):
    """Success rate of shuffled-segment queries against their sources."""
    try:
        cfg = _engine_config(config_path, dimension=dim, seed=seed)
        segments = read_corpus(corpus_path)
        embedder = _embedder_from(cfg)
        queries = embedder.transform(
            [shuffle_plagiarize(s.text, seed=cfg.seed) for s in segments]
        )
        expected = np.array([s.id for s in segments], dtype=np.int64)
        loaded = load_index(index_path)
        n_probe = nprobe if isinstance(loaded, IvfIndex) else None
        result = evaluate_retrieval(
            loaded, expected, queries, k=k, n_probe=n_probe
        )
    except (ValueError, SimscanError) as exc:
        _fail(exc)
    click.echo(json.dumps(result.to_dict(), sort_keys=True))


@main.command()
@click.argument("query_file", type=click.Path(exists=True))
@click.option("-k", type=int, default=None)
@click.option("--nprobe", type=int, default=None)
@click.option("--state", type=click.Path(exists=True, file_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--corpus", type=click.Path(exists=True))
@click.option("--index", "index_path", type=click.Path(exists=True))
@click.option("--params", type=click.Path(exists=True))
@click.option("--dim", type=int, default=None)
@click.option("--seed", type=int, default=None)
def detect(query_file, k, nprobe, state, config_path, corpus, index_path,
           params, dim, seed):
    """Run the full pipeline on the text in QUERY_FILE; print the report."""
    try:
        engine = _load_engine(
            state, config_path, corpus, index_path, params,
            dimension=dim, seed=seed,
        )
        with open(query_file, "r", encoding="utf-8") as fh:
            text = fh.read().strip()
        report = engine.detect(text, k=k, n_probe=nprobe)
    except (OSError, ValueError, SimscanError) as exc:
        _fail(exc)
    click.echo(json.dumps(report.to_dict(), sort_keys=True))


@main.command()
@click.option("--bind", default="127.0.0.1:8000", show_default=True)
@click.option("--state", type=click.Path(exists=True, file_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--corpus", type=click.Path(exists=True))
@click.option("--index", "index_path", type=click.Path(exists=True))
@click.option("--params", type=click.Path(exists=True))
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False))
@click.option("--dim", type=int, default=None)
@click.option("--seed", type=int, default=None)
def serve(bind, state, config_path, corpus, index_path, params, ui_dir, dim,
          seed):
    """Serve the HTTP API (and the review UI when --ui points at a build)."""
    try:
        if state or corpus:
            engine = _load_engine(
                state, config_path, corpus, index_path, params,
                dimension=dim, seed=seed,
            )
        else:
            config = load_config(config_path) if config_path else EngineConfig()
            engine = DetectionEngine(config)
        run_server(engine, bind=bind, ui_dir=ui_dir)
    except (ValueError, SimscanError) as exc:
        _fail(exc)


if __name__ == "__main__":
    main()
