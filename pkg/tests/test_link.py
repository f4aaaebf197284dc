import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gost.errors import DegenerateVector, FormatError
from gost.extract import MentionCandidate, MentionSource
from gost.graph import Graph
from gost.link import (
    EmbeddingStore,
    LinkMethod,
    canonical_key,
    cosine,
    embedding_keys,
    jaccard,
    lexical_link,
    link_mention,
)


def candidate(description, surface="x", code=None):
    return MentionCandidate(doc_id="d", title="T", surface=surface,
                            description=description, char_span=(0, 1),
                            source=MentionSource.GAZETTEER if code else MentionSource.EXTERNAL,
                            occupation_code=code)


def cosine_oracle(u, v):
    """Pure-python scalar cosine, independent of the numpy path."""
    dot = math.fsum(a * b for a, b in zip(u, v))
    nu = math.sqrt(math.fsum(a * a for a in u))
    nv = math.sqrt(math.fsum(b * b for b in v))
    return dot / (nu * nv)


class TestCosine:
    def test_identity(self):
        assert cosine([3.0, 4.0], [3.0, 4.0]) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0

    def test_hand_arithmetic(self):
        # 32 / (sqrt(14) * sqrt(77))
        assert cosine([1, 2, 3], [4, 5, 6]) == pytest.approx(0.9746318461970762, abs=1e-9)

    def test_zero_vector_degenerate(self):
        with pytest.raises(DegenerateVector):
            cosine([0.0, 0.0], [1.0, 2.0])

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            cosine([1.0], [1.0, 2.0])


class TestLinkMention:
    def make_fixture(self):
        """Two occupations with distinguishable embedding directions."""
        graph = Graph()
        graph.add_occupation("2", "Professionals", "professional umbrella")
        graph.add_occupation("22", "Health Professionals", "health umbrella")
        graph.add_occupation("221", "Medical Doctors", "doctors treat patients")
        graph.add_occupation("222", "Nursing Professionals", "nurses provide care")
        store = EmbeddingStore(3)
        store.add("doctors treat patients", [1.0, 0.0, 0.0])
        store.add("nurses provide care", [0.0, 1.0, 0.0])
        store.add("professional umbrella", [0.0, 0.0, 1.0])
        store.add("health umbrella", [0.5, 0.5, 0.0])
        store.add("a person who treats the sick", [0.9, 0.1, 0.0])
        store.add("a person who cares for patients", [0.1, 0.9, 0.0])
        store.add("a kind of fruit", [0.0, 0.05, 0.05])
        return graph, store

    def test_doctor_candidate_links_to_221(self):
        graph, store = self.make_fixture()
        mention = link_mention(candidate("a person who treats the sick"), graph, store, 0.75)
        assert mention.occupation == "isco08:221"
        assert mention.method is LinkMethod.EMBEDDING
        assert mention.similarity >= 0.75

    def test_nurse_candidate_links_to_222(self):
        graph, store = self.make_fixture()
        mention = link_mention(candidate("a person who cares for patients"), graph, store, 0.75)
        assert mention.occupation == "isco08:222"

    def test_below_threshold_disregarded(self):
        graph, store = self.make_fixture()
        # oracle: brute-force best cosine for the fruit vector over the four
        # occupation description vectors
        fruit = [0.0, 0.05, 0.05]
        best = max(cosine_oracle(fruit, v) for v in
                   ([1, 0, 0], [0, 1, 0], [0, 0, 1], [0.5, 0.5, 0]))
        assert best < 0.75
        assert link_mention(candidate("a kind of fruit"), graph, store, 0.75) is None

    def test_gazetteer_candidate_bypasses_retrieval(self):
        graph, store = self.make_fixture()
        mention = link_mention(candidate("", code="isco08:221"), graph, store, 0.75)
        assert mention.occupation == "isco08:221"
        assert mention.similarity == 1.0

    def test_missing_description_falls_back_to_lexical(self):
        graph, store = self.make_fixture()
        mention = link_mention(
            candidate("nurses provide warm care"), graph, store, 0.75, 0.4)
        assert mention is not None
        assert mention.method is LinkMethod.LEXICAL

    def test_tie_breaks_to_smallest_code(self):
        graph = Graph()
        graph.add_occupation("3", "Technicians", "shared words here")
        graph.add_occupation("2", "Professionals", "shared words here two")
        store = EmbeddingStore(2)
        store.add("shared words here", [1.0, 0.0])
        store.add("shared words here two", [1.0, 0.0])
        store.add("query", [1.0, 0.0])
        mention = link_mention(candidate("query"), graph, store, 0.5)
        assert mention.occupation == "isco08:2"

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1),
           st.integers(min_value=10, max_value=200),
           st.integers(min_value=4, max_value=64))
    def test_property_top1_equals_bruteforce(self, seed, n, dim):
        rng = np.random.default_rng(seed)
        graph = Graph()
        store = EmbeddingStore(dim)
        keys = []
        for i in range(n):
            code = str(1000 + i)
            description = f"synthetic role {i}"
            graph.add_occupation(code, f"occ {i}", description)
            store.add(description, rng.normal(size=dim))
            keys.append((f"isco08:{code}", description))
        query_desc = "the query description"
        store.add(query_desc, rng.normal(size=dim))
        mention = link_mention(candidate(query_desc), graph, store, -1.0)
        query_vec = store.get(query_desc)
        scored = []
        for key, description in keys:
            scored.append((cosine_oracle(query_vec.tolist(),
                                         store.get(description).tolist()), key))
        best_score = max(s for s, _ in scored)
        best_key = min(k for s, k in scored if abs(s - best_score) < 1e-12)
        assert mention.occupation == best_key
        assert mention.similarity == pytest.approx(best_score, abs=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1),
           st.sampled_from([0.25, 0.5, 2.0, 4.0, 1024.0]))
    def test_property_scale_invariance(self, seed, scale):
        rng = np.random.default_rng(seed)
        dim = 8
        graph = Graph()
        store_a = EmbeddingStore(dim)
        store_b = EmbeddingStore(dim)
        for i in range(12):
            code = str(1000 + i)
            description = f"synthetic role {i}"
            graph.add_occupation(code, f"occ {i}", description)
        vectors = {f"synthetic role {i}": rng.normal(size=dim) for i in range(12)}
        query = rng.normal(size=dim)
        scaled_index = int(rng.integers(0, 12))
        for i, (key, vec) in enumerate(sorted(vectors.items())):
            store_a.add(key, vec)
            store_b.add(key, vec * scale if i == scaled_index else vec)
        store_a.add("q", query)
        store_b.add("q", query * scale)
        a = link_mention(candidate("q"), graph, store_a, -1.0)
        b = link_mention(candidate("q"), graph, store_b, -1.0)
        assert a.occupation == b.occupation

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1),
           st.floats(min_value=-1.0, max_value=1.0),
           st.floats(min_value=0.0, max_value=2.0))
    def test_property_threshold_monotonicity(self, seed, high, delta):
        low = max(-1.0, high - delta)
        rng = np.random.default_rng(seed)
        dim = 6
        graph = Graph()
        store = EmbeddingStore(dim)
        for i in range(5):
            description = f"synthetic role {i}"
            graph.add_occupation(str(1000 + i), f"occ {i}", description)
            store.add(description, rng.normal(size=dim))
        store.add("q", rng.normal(size=dim))
        accepted_high = link_mention(candidate("q"), graph, store, high)
        if accepted_high is not None:
            accepted_low = link_mention(candidate("q"), graph, store, low)
            assert accepted_low is not None
            assert accepted_low.occupation == accepted_high.occupation


class TestLexicalLink:
    def make_graph(self):
        graph = Graph()
        graph.add_occupation("2", "Professionals",
                             "Broad professional work across domains and sectors.")
        graph.add_occupation("22", "Health Professionals",
                             "Health practice and research across care settings.")
        graph.add_occupation("221", "Medical Doctors",
                             "A medical professional. Diagnoses and treats illnesses and injuries of patients.")
        graph.add_occupation("261", "Legal Professionals",
                             "Advises clients on legal matters and pleads cases in court.")
        return graph

    def test_shared_tokens_link_to_221(self):
        graph = self.make_graph()
        description = "A medical professional who diagnoses and treats illnesses and injuries."
        # oracle: hand Jaccard. candidate tokens (stopwords removed):
        # {medical, professional, diagnoses, treats, illnesses, injuries}
        # 221 tokens: same six plus {patients} -> 6/7
        mention = lexical_link(candidate(description), graph, 0.4)
        assert mention.occupation == "isco08:221"
        assert mention.similarity == pytest.approx(6 / 7)
        assert mention.method is LinkMethod.LEXICAL

    def test_empty_description_returns_none(self):
        assert lexical_link(candidate(""), self.make_graph(), 0.4) is None

    def test_gazetteer_candidate_short_circuits(self):
        mention = lexical_link(candidate("", code="isco08:221"), self.make_graph(), 0.4)
        assert mention.occupation == "isco08:221" and mention.similarity == 1.0

    def test_stopwords_do_not_count(self):
        assert jaccard(frozenset(), frozenset({"x"})) == 0.0


class TestEmbeddingStore:
    def test_round_trip_exact_floats(self, tmp_path):
        store = EmbeddingStore(3)
        rng = np.random.default_rng(11)
        for i in range(20):
            store.add(f"key {i}", rng.normal(size=3))
        path = tmp_path / "store.jsonl"
        store.save(path)
        loaded = EmbeddingStore.load(path)
        assert loaded.dim == 3
        for key in store.keys():
            assert np.array_equal(loaded.get(key), store.get(key))

    def test_dim_mismatch_in_file(self, tmp_path):
        path = tmp_path / "store.jsonl"
        path.write_text('{"dim":3}\n{"key":"k","vector":[1.0,2.0]}\n')
        with pytest.raises(FormatError):
            EmbeddingStore.load(path)

    def test_missing_header(self, tmp_path):
        path = tmp_path / "store.jsonl"
        path.write_text('{"key":"k","vector":[1.0,2.0]}\n')
        with pytest.raises(FormatError):
            EmbeddingStore.load(path)

    def test_canonical_key_collapses_whitespace_and_case(self):
        assert canonical_key("  Medical   Doctors\ntreat ") == "medical doctors treat"


def test_embedding_keys_cover_descriptions_once(isco_graph):
    keys = embedding_keys(isco_graph)
    assert len(keys) == len(set(keys))
    descriptions = {canonical_key(n.description)
                    for n in isco_graph.occupations.values() if n.description}
    assert set(keys) == descriptions
