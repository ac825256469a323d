"""
From article text to a topic event
==================================
"""

from tesim import extract_topic_event, load_resources, parse_article, serialize_topic_event
from tesim.extraction import classify_style
from tesim.text import tag_and_chunk

article = parse_article("""did: W1
title: Relation Extraction using Kernels
date: 2009-06
== Abstract
In this paper, we propose a supervised machine learning approach for relation extraction.
Experiments on news text show strong gains.
== 2 Experiments
We ran things.
""")

# the tagger and chunker behind the pattern rules
s = tag_and_chunk(article.sections[0].body.split(".")[0])
print(list(zip(s.words, s.tags)))
print(s.noun_phrases())

res = load_resources()
te = extract_topic_event(article, res)
print(serialize_topic_event(te))

# "Experiments" is not among the selected sections, so only the abstract counts
print([sec.heading for sec in article.sections])

# titles drive the research style
for title in [
    "TEXTRUNNER: Open Information Extraction on the Web",
    "An Overview of Event Extraction from Text",
    "Improving LDA Topic Models for Microblogs via Tweet Pooling",
    "Biological Event Extraction using Subgraph Matching",
]:
    print(f"{classify_style(title, res.style_rules).value:24} {title}")
