"""Command line pipeline: ``triframes {induce,eval,gold,graph}``."""

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import evaluation
from .cw import chinese_whispers, read_clustering_tsv, singleton_clustering, whole_clustering, write_clustering_tsv
from .embeddings import load_embeddings_file
from .frames import aggregate_frames, write_frames
from .gold import build_gold, read_annotations
from .graph import build_knn_graph, write_edge_list
from .kmeans import KMeansParams, kmeans
from .triples import embed_store, load_triples_file, read_node_table, write_node_table
from .watset import watset

log = logging.getLogger("triframes")

METHODS = ("watset", "cw", "kmeans", "singletons", "whole")


@dataclass
class PipelineConfig:
    embeddings: Path = None
    triples: Path = None
    output: Path = None
    method: str = "watset"
    k: int = 10
    seed: int = 0
    kmeans_k: int = 10000
    max_iters: int = 20
    min_freq: float = 1.0
    mutual_knn: bool = False
    normalize: bool = False
    lowercase: bool = False
    threads: int = None


def resolve_threads(threads=None):
    if threads:
        return threads
    env = os.environ.get("TRIFRAMES_THREADS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _embedded(cfg, triples):
    model = load_embeddings_file(cfg.embeddings)
    store = embed_store(model, triples)
    log.info("triples: %d kept, %d dropped (out of vocabulary)", len(store.kept), len(store.dropped))
    return store


def induce(cfg: PipelineConfig, triples=None):
    """Cluster triples with ``cfg.method``; returns (triples, clusters of triple ids)."""
    if triples is None:
        triples = load_triples_file(cfg.triples, lowercase=cfg.lowercase, min_freq=cfg.min_freq)
    if not triples:
        raise ValueError("no triples to cluster")
    if cfg.method == "singletons":
        return triples, singleton_clustering(range(len(triples))).clusters
    if cfg.method == "whole":
        return triples, whole_clustering(range(len(triples))).clusters
    if cfg.method not in METHODS:
        raise ValueError(f"unknown method {cfg.method!r}")

    store = _embedded(cfg, triples)
    threads = resolve_threads(cfg.threads)
    if cfg.method == "kmeans":
        rows = store.matrix
        if cfg.normalize:
            rows = rows / np.linalg.norm(rows, axis=1, keepdims=True)
        result = kmeans(rows, KMeansParams(k=cfg.kmeans_k, seed=cfg.seed))
        local = result.clustering.clusters
    else:
        if len(store.kept) < 2:
            local = [[0]]
        else:
            g = build_knn_graph(store.matrix, k=cfg.k, mutual=cfg.mutual_knn, threads=threads)
            log.info("graph: %d nodes, %d edges", len(g), g.num_edges())
            if cfg.method == "watset":
                local = watset(g, seed=cfg.seed, max_iters=cfg.max_iters, threads=threads).clusters
            else:
                local = chinese_whispers(g, max_iters=cfg.max_iters, seed=cfg.seed).clusters
    clusters = [[store.kept[i] for i in c] for c in local]
    log.info("clusters: %d", len(clusters))
    return triples, clusters


def cmd_induce(cfg):
    triples, clusters = induce(cfg)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "nodes.tsv", "w", encoding="utf-8") as f:
        write_node_table(f, triples)
    with open(out / "clusters.tsv", "w", encoding="utf-8") as f:
        write_clustering_tsv(f, clusters)
    with open(out / "frames.txt", "w", encoding="utf-8") as f:
        write_frames(f, aggregate_frames(triples, clusters))


def evaluate_files(nodes, clusters, gold, modes=evaluation.MODES, dedup_slot=False):
    with open(nodes, encoding="utf-8") as f:
        triples = read_node_table(f)
    with open(clusters, encoding="utf-8") as f:
        groups = read_clustering_tsv(f)
    with open(gold, encoding="utf-8") as f:
        gold_instances = evaluation.read_gold(f)
    bad = sorted({i for c in groups for i in c if not 0 <= i < len(triples)})
    if bad:
        raise ValueError(f"{len(bad)} cluster node ids outside the node table, first: {bad[:10]}")
    groups = evaluation.complete_clusters(groups, len(triples))
    return [(m, evaluation.evaluate(groups, triples, gold_instances, m, dedup_slot)) for m in modes]


def cmd_eval(args):
    rows = evaluate_files(args.nodes, args.clusters, args.gold, dedup_slot=args.dedup_slot)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            evaluation.write_report(f, rows)
    else:
        evaluation.write_report(sys.stdout, rows)


def cmd_gold(args):
    with open(args.annotations, encoding="utf-8") as f:
        gold = build_gold(read_annotations(f))
    log.info("gold: %d unique triples in %d frames", len(gold), len({g.frame for g in gold}))
    with open(args.output, "w", encoding="utf-8") as f:
        evaluation.write_gold(f, gold)


def cmd_graph(cfg, nodes_path=None):
    triples = load_triples_file(cfg.triples, lowercase=cfg.lowercase, min_freq=cfg.min_freq)
    store = _embedded(cfg, triples)
    g = build_knn_graph(store.matrix, k=cfg.k, mutual=cfg.mutual_knn, threads=resolve_threads(cfg.threads))
    log.info("graph: %d nodes, %d edges", len(g), g.num_edges())
    with open(cfg.output, "w", encoding="utf-8") as f:
        write_edge_list(f, g, labels=store.kept)
    if nodes_path:
        with open(nodes_path, "w", encoding="utf-8") as f:
            write_node_table(f, triples)


def _add_common(p, embeddings_required=True):
    p.add_argument("--embeddings", type=Path, required=embeddings_required,
                   help="word2vec text file (.gz accepted)")
    p.add_argument("--triples", type=Path, required=True, help="subject/verb/object[/freq] TSV")
    p.add_argument("--k", type=int, default=10, help="nearest neighbours per triple")
    p.add_argument("--min-freq", type=float, default=1.0)
    p.add_argument("--mutual-knn", action="store_true", help="keep only mutual neighbour edges")
    p.add_argument("--lowercase", action="store_true", help="lowercase triple words before lookup")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $TRIFRAMES_THREADS or CPU count)")


def build_parser():
    parser = argparse.ArgumentParser(prog="triframes", description="Frame induction from SVO triples.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="cluster triples into triframes")
    _add_common(p, embeddings_required=False)
    p.add_argument("--output", type=Path, required=True, help="output directory")
    p.add_argument("--method", choices=METHODS, default="watset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kmeans-k", type=int, default=10000)
    p.add_argument("--max-iters", type=int, default=20, help="Chinese Whispers sweep cap")
    p.add_argument("--normalize", action="store_true", help="unit-normalize rows before k-means")

    p = sub.add_parser("eval", help="score a clustering against gold frames")
    p.add_argument("--nodes", type=Path, required=True, help="node table written by induce")
    p.add_argument("--clusters", type=Path, required=True)
    p.add_argument("--gold", type=Path, required=True)
    p.add_argument("--output", type=Path, help="CSV path (default: standard output)")
    p.add_argument("--dedup-slot", action="store_true", help="count each slot word once per cluster")

    p = sub.add_parser("gold", help="build gold triples from frame annotations")
    p.add_argument("--annotations", type=Path, required=True)
    p.add_argument("--output", type=Path, required=True)

    p = sub.add_parser("graph", help="write the k-NN triple graph as an edge list")
    _add_common(p)
    p.add_argument("--output", type=Path, required=True)
    p.add_argument("--nodes", type=Path, help="also write the node table here")
    return parser


def _config(args):
    fields = PipelineConfig.__dataclass_fields__
    return PipelineConfig(**{k: v for k, v in vars(args).items() if k in fields})


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                        level=logging.DEBUG if args.verbose else logging.INFO)
    try:
        if args.command == "induce":
            cfg = _config(args)
            if cfg.method not in ("singletons", "whole") and cfg.embeddings is None:
                raise ValueError(f"--embeddings is required for method {cfg.method}")
            cmd_induce(cfg)
        elif args.command == "eval":
            cmd_eval(args)
        elif args.command == "gold":
            cmd_gold(args)
        else:
            cmd_graph(_config(args), args.nodes)
    except (OSError, ValueError, RuntimeError) as e:
        log.error("%s", e)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
