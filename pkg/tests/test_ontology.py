import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tesim.model import Terminology
from tesim.ontology import (
    OntologyError,
    lcs,
    levenshtein,
    link_terminology,
    load_ontology,
    load_style_ontology,
    wu_palmer,
)
from tesim.resources import data_text

import oracles

NODES = [
    "CL", "ResearchTopic", "InformationExtraction", "RelationExtraction",
    "EventExtraction", "MachineTranslation", "GeneralApproach", "MachineLearning",
]


@pytest.fixture(scope="module")
def parents(fixtures_dir):
    return oracles.parents_from_file((fixtures_dir / "fixture_ontology.tsv").read_text())


class TestLoad:
    def test_fixture_depths(self, fixture_graph):
        assert len(fixture_graph) == 8
        assert fixture_graph.root == "CL"
        assert fixture_graph.depth("CL") == 1
        assert fixture_graph.depth("RelationExtraction") == 4
        assert fixture_graph.depth("MachineTranslation") == 3
        assert fixture_graph.max_depth == 4

    def test_self_parent_is_a_cycle(self):
        with pytest.raises(OntologyError, match="cycle.*'B'"):
            load_ontology("A\t-\ta\t\nB\tB\tb\t\n")

    def test_longer_cycle(self):
        with pytest.raises(OntologyError, match="cycle"):
            load_ontology("A\t-\ta\t\nB\tC\tb\t\nC\tB\tc\t\n")

    def test_rootless_file_is_a_cycle(self):
        with pytest.raises(OntologyError, match="cycle"):
            load_ontology("A\tB\ta\t\nB\tA\tb\t\n")

    def test_two_roots(self):
        with pytest.raises(OntologyError, match="multiple roots"):
            load_ontology("A\t-\ta\t\nB\t-\tb\t\n")

    def test_dangling_parent(self):
        with pytest.raises(OntologyError, match="dangling"):
            load_ontology("A\t-\ta\t\nB\tZ\tb\t\n")

    def test_comments_and_synonyms(self):
        g = load_ontology("# comment\nA\t-\tAlpha\tfirst letter; the top\n")
        assert g.nodes["A"].synonyms == ("first letter", "the top")
        assert g.find_label("TOP") == ["A"]

    def test_empty_label_rejected(self):
        with pytest.raises(OntologyError):
            load_ontology("A\t-\t \t\n")

    def test_bundled_ontologies_load(self):
        g = load_ontology(data_text("cl_ontology.tsv"))
        assert g.depth("RelationExtraction") == 4
        style = load_style_ontology(data_text("style_ontology.tsv"))
        assert len(style.leaves()) == 7

    def test_style_ontology_requires_seven_leaves(self):
        with pytest.raises(OntologyError, match="style leaves"):
            load_style_ontology("R\t-\troot\t\nSurvey\tR\tsurvey\t\n")


class TestLcsAndWuPalmer:
    def test_lcs_examples(self, fixture_graph):
        assert lcs(fixture_graph, "EventExtraction", "EventExtraction") == "EventExtraction"
        assert lcs(fixture_graph, "RelationExtraction", "EventExtraction") == "InformationExtraction"
        assert lcs(fixture_graph, "RelationExtraction", "MachineLearning") == "CL"

    def test_wu_palmer_examples(self, fixture_graph):
        assert wu_palmer(fixture_graph, "MachineLearning", "MachineLearning") == 1.0
        assert wu_palmer(fixture_graph, "RelationExtraction", "EventExtraction") == 0.75
        assert wu_palmer(fixture_graph, "RelationExtraction", "MachineTranslation") == pytest.approx(
            4 / 7, abs=1e-12
        )

    def test_all_pairs_match_brute_force(self, fixture_graph, parents):
        for a, b in itertools.product(NODES, NODES):
            assert lcs(fixture_graph, a, b) == oracles.brute_lcs(parents, a, b)
            assert wu_palmer(fixture_graph, a, b) == oracles.brute_wu_palmer(parents, a, b)

    def test_unknown_node(self, fixture_graph):
        with pytest.raises(KeyError):
            wu_palmer(fixture_graph, "CL", "Nope")
        with pytest.raises(KeyError):
            lcs(fixture_graph, "Nope", "CL")

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 60))
    def test_random_trees(self, seed, n):
        rng = np.random.default_rng(seed)
        parents = oracles.random_tree(rng, n)
        g = load_ontology(oracles.tree_to_text(parents))
        nodes = list(parents)
        for _ in range(20):
            a, b = rng.choice(nodes, 2)
            common = lcs(g, a, b)
            assert common in oracles.ancestors_of(parents, a)
            assert common in oracles.ancestors_of(parents, b)
            w = wu_palmer(g, a, b)
            assert w == wu_palmer(g, b, a)
            assert 0 < w <= 1
            assert w == oracles.brute_wu_palmer(parents, a, b)
            assert wu_palmer(g, a, a) == 1.0


class TestLevenshtein:
    def test_classic(self):
        assert levenshtein("kitten", "sitting") == 3
        assert oracles.recursive_edit_distance("kitten", "sitting") == 3

    def test_identity_and_empty(self):
        assert levenshtein("parsing", "parsing") == 0
        assert levenshtein("", "parsing") == 7

    def test_normalizes_case_and_space(self):
        assert levenshtein("Machine   Translation", "machine translation") == 0

    @settings(max_examples=200)
    @given(a=st.text("abc ", max_size=7), b=st.text("abc ", max_size=7))
    def test_matches_recursive_oracle(self, a, b):
        na, nb = " ".join(a.split()), " ".join(b.split())
        assert levenshtein(a, b) == oracles.recursive_edit_distance(na, nb)

    @given(a=st.text("abcd", max_size=8), b=st.text("abcd", max_size=8), c=st.text("abcd", max_size=8))
    def test_metric_properties(self, a, b, c):
        assert levenshtein(a, b) == levenshtein(b, a)
        assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)


class TestLinking:
    def test_synonym_exact(self):
        g = load_ontology(
            "R\t-\troot\t\n"
            "CLIR\tR\tcross linguistic retrieval\tmultilingual information retrieval\n"
            "MU\tR\ttext understanding\tmessage understanding\n"
        )
        link = link_terminology(g, Terminology("multilingual information retrieval"))
        assert (link.node_id, link.score, link.confident) == ("CLIR", 0, True)

    def test_suffix_variant(self, fixture_graph):
        link = link_terminology(fixture_graph, Terminology("relation extractions"))
        assert (link.node_id, link.score) == ("RelationExtraction", 1)
        # oracle: distance from every fixture name, minimum is unique
        names = {"computational linguistics": "CL", "nlp": "CL", "research topic": "ResearchTopic",
                 "information extraction": "InformationExtraction", "ie": "InformationExtraction",
                 "relation extraction": "RelationExtraction", "relation detection": "RelationExtraction",
                 "event extraction": "EventExtraction", "event detection": "EventExtraction",
                 "machine translation": "MachineTranslation", "mt": "MachineTranslation",
                 "general approach": "GeneralApproach", "machine learning": "MachineLearning"}
        dists = {n: oracles.recursive_edit_distance("relation extractions", n) for n in names}
        best = min(dists.values())
        assert [names[n] for n, d in dists.items() if d == best] == ["RelationExtraction"]

    def test_exact_label(self, fixture_graph):
        link = link_terminology(fixture_graph, Terminology("machine translation"))
        assert (link.node_id, link.score) == ("MachineTranslation", 0)

    def test_leading_article_stripped(self, fixture_graph):
        assert link_terminology(fixture_graph, "The Machine Translation").score == 0

    def test_unrelated_string_is_low_confidence(self, fixture_graph):
        assert not link_terminology(fixture_graph, "quantum chromodynamics").confident

    def test_tie_breaks_on_label_then_id(self):
        g = load_ontology("R\t-\tzzz\t\nB\tR\tab\t\nA\tR\tab\t\nC\tR\tac\t\n")
        # "ax" is distance 1 from both "ab" and "ac"; label "ab" wins, then id "A"
        assert link_terminology(g, "ax").node_id == "A"

    def test_every_name_links_to_itself(self, fixture_graph):
        for node in fixture_graph.nodes.values():
            for name in node.names:
                link = link_terminology(fixture_graph, name)
                assert link.score == 0 and link.node_id == node.node_id
