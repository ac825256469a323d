"""
Concepts, depths and Wu-Palmer similarity
=========================================

Load the bundled computational-linguistics ontology, walk a few paths and
compare concepts.
"""

from tesim import default_ontology, link_terminology, lcs, wu_palmer

g = default_ontology()
print(len(g), "nodes, max depth", g.max_depth)
print(g.depth_histogram())

# the root sits at depth 1
print(g.root, g.depth(g.root))

# a root-to-node path
print(" > ".join(g.ancestors("RelationExtraction")))

# siblings share their parent as LCS
print(lcs(g, "RelationExtraction", "EventExtraction"))
print(wu_palmer(g, "RelationExtraction", "EventExtraction"))

# cousins score lower
print(wu_palmer(g, "RelationExtraction", "MachineTranslation"))

# free text is linked to a node first; synonyms count as exact hits
for text in ["event detection", "Relation Extractoin", "cross linguistic retrieval", "knitting"]:
    link = link_terminology(g, text)
    print(f"{text!r:32} -> {link.node_id:24} distance={link.score} confident={link.confident}")
