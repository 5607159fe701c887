"""Unsupervised semantic frame induction from subject-verb-object triples."""

from .cw import HardClustering, chinese_whispers, singleton_clustering, whole_clustering
from .embeddings import EmbeddingModel, cosine, load_embeddings, load_embeddings_file
from .evaluation import Scores, evaluate, f1, frame_tuples, nipu, nmpu
from .frames import Triframe, aggregate_frames
from .gold import FrameAnnotation, build_gold
from .graph import WeightedGraph, build_knn_graph
from .kmeans import KMeansParams, kmeans
from .triples import Triple, embed_store, embed_triple, load_triples
from .watset import FuzzyClustering, Sense, build_sense_graph, induce_senses, watset

__version__ = "0.1.0"
