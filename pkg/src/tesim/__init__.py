"""Topic event extraction and ontology-based similarity between academic articles."""

from .model import (
    PubDate,
    ResearchStyle,
    Terminology,
    TopicEvent,
    parse_topic_event,
    serialize_topic_event,
    validate_topic_event,
)
from .ontology import OntologyGraph, lcs, levenshtein, link_terminology, load_ontology, wu_palmer
from .extraction import ArticleText, classify_style, extract_topic_event, parse_article
from .termsim import OntologyBackend, VectorBackend, build_lsa_space, set_similarity
from .similarity import SimilarityConfig, date_similarity, style_similarity, te_similarity
from .evaluation import accuracy, f_score, pearson, threshold_sweep
from .resources import default_ontology, default_style_ontology, load_resources

__version__ = "0.1.0"
