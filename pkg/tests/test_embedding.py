"""Tokenizer and embedding providers: determinism, geometry, wire protocol."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import requests

from simscan.corpus import generate_corpus, shuffle_plagiarize
from simscan.embedding import (
    DEFAULT_DIM,
    MAX_TOKENS,
    HashEmbedder,
    ProviderConfig,
    RemoteEmbedder,
    embed_text,
    hash_embed,
    make_embedder,
    tokenize,
)
from simscan.errors import DimensionMismatch, PartialResponse, RemoteUnavailable


class TestTokenize:
    def test_empty_text(self):
        assert tokenize("") == []

    def test_lowercases_and_splits(self):
        assert tokenize("The program runs fast") == [
            "the",
            "program",
            "runs",
            "fast",
        ]

    def test_punctuation_runs_dropped(self):
        assert tokenize("stop... now!?") == ["stop", "now"]

    def test_truncates_to_cap(self):
        # independent count: 600 words joined by single spaces
        words = [f"w{i}" for i in range(600)]
        text = " ".join(words)
        assert len(text.split(" ")) == 600
        out = tokenize(text)
        assert len(out) == MAX_TOKENS
        assert out == [w for w in words[:MAX_TOKENS]]

    @given(st.text(max_size=200))
    @settings(max_examples=60, deadline=None)
    def test_idempotent_on_own_output(self, text):
        tokens = tokenize(text)
        assert tokenize(" ".join(tokens)) == tokens


class TestProviderConfig:
    def test_hash_default(self):
        cfg = ProviderConfig()
        assert cfg.kind == "hash"
        assert cfg.dimension == DEFAULT_DIM

    def test_remote_requires_endpoint(self):
        with pytest.raises(ValueError):
            ProviderConfig(kind="remote")

    def test_hash_rejects_endpoint(self):
        with pytest.raises(ValueError):
            ProviderConfig(kind="hash", endpoint="http://x")

    def test_dimension_positive(self):
        with pytest.raises(ValueError):
            ProviderConfig(dimension=0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ProviderConfig(kind="tfidf")


class TestHashEmbed:
    def test_empty_tokens_zero_vector(self):
        vec = hash_embed([], dimension=32)
        assert vec.shape == (32,)
        assert not vec.any()

    def test_identical_tokens_identical_output(self):
        a = hash_embed(["alpha", "beta"], dimension=64, seed=3)
        b = hash_embed(["alpha", "beta"], dimension=64, seed=3)
        np.testing.assert_array_equal(a, b)

    def test_seed_changes_vector(self):
        a = hash_embed(["alpha", "beta"], dimension=64, seed=0)
        b = hash_embed(["alpha", "beta"], dimension=64, seed=1)
        assert not np.array_equal(a, b)

    def test_nonzero_output_unit_norm(self):
        vec = hash_embed(["alpha", "beta", "gamma"], dimension=128)
        assert abs(np.linalg.norm(vec) - 1.0) <= 1e-6

    def test_dimension_contract(self):
        for dim in (8, 100, 768):
            assert hash_embed(["x"], dimension=dim).shape == (dim,)

    def test_rejects_nonpositive_dimension(self):
        with pytest.raises(ValueError):
            hash_embed(["x"], dimension=0)

    def test_order_sensitivity_is_mild(self):
        # bigram half-weights shift the vector, shared vocabulary dominates
        a = hash_embed(["one", "two", "three", "four"], dimension=256)
        b = hash_embed(["four", "three", "two", "one"], dimension=256)
        cos = float(a @ b)
        assert cos < 1.0 - 1e-9
        assert cos > 0.5

    def test_shuffled_sentences_stay_close(self):
        # measured over 50 segment/shuffle pairs from the synthetic corpus
        segs = generate_corpus(n_docs=10, segments_per_doc=5, seed=7)
        emb = HashEmbedder()
        low = 1.0
        for seg in segs[:50]:
            a = emb.embed(seg.text)
            b = emb.embed(shuffle_plagiarize(seg.text, seed=11))
            low = min(low, float(a @ b))
        assert low >= 0.9

    def test_unrelated_texts_far_apart(self):
        # measured over 100 cross-document pairs: mean sits near 0.4 with a
        # tail to ~0.65, far under the ~0.98 shuffle band
        segs = generate_corpus(n_docs=20, segments_per_doc=5, seed=13)
        emb = HashEmbedder()
        rng = np.random.default_rng(13)
        cosines = []
        while len(cosines) < 100:
            i, j = rng.choice(len(segs), size=2, replace=False)
            if segs[i].doc_id == segs[j].doc_id:
                continue
            cosines.append(float(emb.embed(segs[i].text) @ emb.embed(segs[j].text)))
        assert float(np.mean(cosines)) < 0.5
        assert max(cosines) < 0.8


class TestHashEmbedder:
    def test_embed_deterministic(self):
        emb = HashEmbedder(dimension=64, seed=5)
        np.testing.assert_array_equal(emb.embed("some text"), emb.embed("some text"))

    def test_transform_shape(self):
        emb = HashEmbedder(dimension=32)
        out = emb.transform(["a b", "c d", "e"])
        assert out.shape == (3, 32)

    def test_transform_empty_list(self):
        assert HashEmbedder(dimension=16).transform([]).shape == (0, 16)

    def test_normalize_off_returns_counts(self):
        emb = HashEmbedder(dimension=64, normalize=False)
        vec = emb.embed("alpha alpha")
        # two identical tokens stack in one bucket; norm is not 1
        assert abs(np.linalg.norm(vec) - 1.0) > 1e-6

    def test_respects_max_tokens(self):
        emb_all = HashEmbedder(dimension=128, max_tokens=None)
        emb_two = HashEmbedder(dimension=128, max_tokens=2)
        text = "one two three four five"
        assert not np.array_equal(emb_all.embed(text), emb_two.embed(text))
        np.testing.assert_array_equal(
            emb_two.embed(text), emb_all.embed("one two")
        )

    def test_get_params_round_trip(self):
        emb = HashEmbedder(dimension=48, seed=9)
        params = emb.get_params()
        clone = HashEmbedder(**params)
        np.testing.assert_array_equal(clone.embed("t"), emb.embed("t"))


class _FakeResponse:
    def __init__(self, payload, status=200):
        self._payload = payload
        self.status_code = status

    def raise_for_status(self):
        if self.status_code != 200:
            raise requests.HTTPError(f"status {self.status_code}")

    def json(self):
        return self._payload


class TestRemoteEmbedder:
    def test_empty_input_no_network_call(self, monkeypatch):
        def boom(*a, **k):
            raise AssertionError("network touched for empty input")

        monkeypatch.setattr(requests, "post", boom)
        out = RemoteEmbedder("http://svc/embed", dimension=4).transform([])
        assert out.shape == (0, 4)

    def test_order_preserved(self, monkeypatch):
        def fake_post(url, json=None, timeout=None):
            vecs = [[float(i + 1)] * 4 for i in range(len(json["texts"]))]
            return _FakeResponse({"vectors": vecs})

        monkeypatch.setattr(requests, "post", fake_post)
        out = RemoteEmbedder(
            "http://svc/embed", dimension=4, normalize=False
        ).transform(["a", "b", "c"])
        np.testing.assert_array_equal(out[:, 0], [1.0, 2.0, 3.0])

    def test_wrong_length_vector(self, monkeypatch):
        monkeypatch.setattr(
            requests,
            "post",
            lambda *a, **k: _FakeResponse({"vectors": [[0.0] * 767]}),
        )
        with pytest.raises(DimensionMismatch):
            RemoteEmbedder("http://svc/embed", dimension=768).transform(["x"])

    def test_count_mismatch(self, monkeypatch):
        monkeypatch.setattr(
            requests,
            "post",
            lambda *a, **k: _FakeResponse({"vectors": [[0.0] * 4]}),
        )
        with pytest.raises(PartialResponse):
            RemoteEmbedder("http://svc/embed", dimension=4).transform(["x", "y"])

    def test_unreachable_endpoint(self, monkeypatch):
        def fake_post(*a, **k):
            raise requests.ConnectionError("refused")

        monkeypatch.setattr(requests, "post", fake_post)
        with pytest.raises(RemoteUnavailable):
            RemoteEmbedder("http://svc/embed", dimension=4).transform(["x"])

    def test_http_error_maps_to_remote_unavailable(self, monkeypatch):
        monkeypatch.setattr(
            requests, "post", lambda *a, **k: _FakeResponse({}, status=500)
        )
        with pytest.raises(RemoteUnavailable):
            RemoteEmbedder("http://svc/embed", dimension=4).transform(["x"])

    def test_normalizes_when_asked(self, monkeypatch):
        monkeypatch.setattr(
            requests,
            "post",
            lambda *a, **k: _FakeResponse({"vectors": [[3.0, 4.0]]}),
        )
        out = RemoteEmbedder("http://svc/embed", dimension=2).transform(["x"])
        assert abs(np.linalg.norm(out[0]) - 1.0) <= 1e-6


class TestFactory:
    def test_hash_kind(self):
        emb = make_embedder(ProviderConfig(kind="hash", dimension=32, seed=2))
        assert isinstance(emb, HashEmbedder)
        assert emb.dimension == 32

    def test_remote_kind(self):
        emb = make_embedder(
            ProviderConfig(kind="remote", dimension=16, endpoint="http://svc")
        )
        assert isinstance(emb, RemoteEmbedder)
        assert emb.endpoint == "http://svc"

    def test_embed_text_matches_provider(self):
        cfg = ProviderConfig(dimension=64, seed=4)
        np.testing.assert_array_equal(
            embed_text("hello world", cfg),
            HashEmbedder(dimension=64, seed=4).embed("hello world"),
        )

    def test_embed_text_dimension(self):
        assert embed_text("t", ProviderConfig(dimension=96)).shape == (96,)
