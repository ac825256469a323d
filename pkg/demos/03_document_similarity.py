"""
Comparing two topic events
==========================

Element scores, effective weights and the weighted total.
"""

from tesim import (
    PubDate, ResearchStyle, SimilarityConfig, Terminology, TopicEvent,
    default_ontology, default_style_ontology, te_similarity,
)
from tesim.termsim import OntologyBackend

cfg = SimilarityConfig(OntologyBackend(default_ontology()), default_style_ontology())

a = TopicEvent(
    eid="TE-A", did="A",
    target=(Terminology("relation extraction"),),
    methodology=(Terminology("kernel methods"),),
    domain=Terminology("information extraction"),
    style=ResearchStyle.ISSUE_SOLUTION,
    keywords=(Terminology("relation extraction"), Terminology("dependency parsing")),
    date=PubDate(2009, 6),
)
b = TopicEvent(
    eid="TE-B", did="B",
    target=(Terminology("event extraction"),),
    domain=Terminology("information extraction"),
    style=ResearchStyle.SURVEY,
    keywords=(Terminology("event extraction"),),
    date=PubDate(2016, 1),
)

breakdown = te_similarity(a, b, cfg)
# b has no methodology, so that weight is spread over the others
print("\n".join(breakdown.lines()))

# same event, one year later
import dataclasses
later = dataclasses.replace(a, did="A2", eid="TE-A2", date=PubDate(2010, 6))
print(te_similarity(a, later, cfg).total)

# custom weights: date only
only_date = {k: 0.0 for k in breakdown.weights}
only_date["date"] = 1.0
print(te_similarity(a, later, cfg.with_weights(only_date)).total)
