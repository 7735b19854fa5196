"""Detection engine: ingest, detect, training, persistence."""

import hashlib
import os

import numpy as np
import pytest

from simscan.config import EngineConfig
from simscan.corpus import PlagiarismLabel, generate_corpus, rule_paraphrase
from simscan.engine import DetectionEngine
from simscan.errors import CorruptFile, EmptyIndex, EngineNotReady
from simscan.index import FlatIndex, IvfIndex


def small_config(**overrides):
    base = dict(nlist=0, dimension=128, max_epochs=3, batch_size=64)
    base.update(overrides)
    return EngineConfig(**base)


@pytest.fixture(scope="module")
def trained_engine():
    engine = DetectionEngine(small_config())
    segs = generate_corpus(n_docs=6, segments_per_doc=3, seed=0)
    engine.ingest(segs)
    engine.train_classifier(
        engine.build_training_pairs(n_negative=2, n_imitation=1, n_shuffle=1)
    )
    return engine, segs


class TestIngest:
    def test_counts_and_flat_index(self):
        engine = DetectionEngine(small_config())
        segs = generate_corpus(n_docs=4, segments_per_doc=3, seed=1)
        assert engine.ingest(segs) == 12
        assert isinstance(engine.index, FlatIndex)
        assert engine.index.count == 12

    def test_ivf_when_nlist_positive(self):
        engine = DetectionEngine(small_config(nlist=3, nprobe=3))
        segs = generate_corpus(n_docs=4, segments_per_doc=3, seed=1)
        engine.ingest(segs)
        assert isinstance(engine.index, IvfIndex)
        assert engine.index.n_lists == 3

    def test_empty_ingest_then_detect(self):
        engine = DetectionEngine(small_config())
        assert engine.ingest([]) == 0
        with pytest.raises(EmptyIndex):
            engine.detect("anything")

    def test_duplicate_ids_rejected(self):
        engine = DetectionEngine(small_config())
        segs = generate_corpus(n_docs=2, segments_per_doc=2, seed=0)
        segs[1].id = segs[0].id
        with pytest.raises(ValueError):
            engine.ingest(segs)

    def test_reingest_deterministic(self, tmp_path):
        # same corpus twice -> byte-identical persisted index
        segs = generate_corpus(n_docs=4, segments_per_doc=3, seed=2)
        digests = []
        for run in range(2):
            engine = DetectionEngine(small_config(nlist=2, nprobe=2))
            engine.ingest(segs)
            path = tmp_path / f"index-{run}.dat"
            engine.index.save(path)
            digests.append(hashlib.sha256(path.read_bytes()).hexdigest())
        assert digests[0] == digests[1]


class TestDetect:
    def test_verbatim_query_is_top_candidate(self, trained_engine):
        engine, segs = trained_engine
        report = engine.detect(segs[7].text, k=5)
        assert report.candidates[0]["id"] == segs[7].id
        # index stores vectors at f32, so self-similarity is 1 to f32 eps
        assert report.candidates[0]["score"] == pytest.approx(1.0, abs=1e-6)

    def test_k_larger_than_corpus(self, trained_engine):
        engine, segs = trained_engine
        report = engine.detect("completely unrelated words", k=500)
        assert len(report.candidates) == len(segs)

    def test_never_more_than_k(self, trained_engine):
        engine, _ = trained_engine
        assert len(engine.detect("some query", k=4).candidates) == 4

    def test_candidates_sorted_by_score(self, trained_engine):
        engine, _ = trained_engine
        scores = [c["score"] for c in engine.detect("query text", k=10).candidates]
        assert scores == sorted(scores, reverse=True)

    def test_candidates_exist_in_store(self, trained_engine):
        engine, _ = trained_engine
        for c in engine.detect("query text", k=10).candidates:
            assert c["id"] in engine.segments
            assert engine.segments[c["id"]].doc_id == c["doc_id"]

    def test_probabilities_sum_to_one(self, trained_engine):
        engine, _ = trained_engine
        for c in engine.detect("query text", k=10).candidates:
            assert abs(sum(c["probabilities"]) - 1.0) <= 1e-6
            assert len(c["probabilities"]) == 3
            assert c["label"] == int(np.argmax(c["probabilities"]))

    def test_timings_present(self, trained_engine):
        engine, _ = trained_engine
        t = engine.detect("query", k=2).timings
        assert set(t) == {"embed_ms", "retrieve_ms", "classify_ms"}
        assert all(v >= 0 for v in t.values())

    def test_untrained_classifier(self):
        engine = DetectionEngine(small_config())
        engine.ingest(generate_corpus(n_docs=2, segments_per_doc=2, seed=0))
        with pytest.raises(EngineNotReady):
            engine.detect("query")

    def test_bad_k(self, trained_engine):
        engine, _ = trained_engine
        with pytest.raises(ValueError):
            engine.detect("query", k=0)

    def test_report_dict_shape(self, trained_engine):
        engine, _ = trained_engine
        d = engine.detect("query", k=1).to_dict()
        assert set(d) == {"query_text", "candidates", "timings"}
        assert d["query_text"] == "query"


class TestTraining:
    def test_pairs_require_corpus(self):
        with pytest.raises(EngineNotReady):
            DetectionEngine(small_config()).build_training_pairs()

    def test_label_pattern_on_paraphrase(self, trained_engine):
        engine, segs = trained_engine
        query = rule_paraphrase(segs[4].text, seed=9)
        report = engine.detect(query, k=5)
        by_id = {c["id"]: c for c in report.candidates}
        assert segs[4].id in by_id

    def test_same_seed_same_outputs(self):
        reports = []
        segs = generate_corpus(n_docs=4, segments_per_doc=3, seed=5)
        for _ in range(2):
            engine = DetectionEngine(small_config(seed=11))
            engine.ingest(segs)
            engine.train_classifier(engine.build_training_pairs())
            reports.append(engine.detect(segs[3].text, k=4))
        a, b = reports
        assert [c["probabilities"] for c in a.candidates] == [
            c["probabilities"] for c in b.candidates
        ]

    def test_train_from_file(self, tmp_path, trained_engine):
        from simscan.corpus import write_dataset

        engine, _ = trained_engine
        pairs = engine.build_training_pairs()
        path = tmp_path / "dataset.jsonl"
        write_dataset(pairs, path)
        fresh = DetectionEngine(small_config())
        fresh.ingest(generate_corpus(n_docs=6, segments_per_doc=3, seed=0))
        history = fresh.train_from_file(path)
        assert len(history) == 3
        assert fresh.classifier is not None


class TestPersistence:
    def test_round_trip_identical_outputs(self, tmp_path, trained_engine):
        engine, segs = trained_engine
        query = rule_paraphrase(segs[10].text, seed=4)
        before = engine.detect(query, k=6)
        out = tmp_path / "state"
        engine.save(out)
        loaded = DetectionEngine.load(out)
        after = loaded.detect(query, k=6)
        strip = lambda r: [
            (c["id"], c["score"], c["label"], c["probabilities"])
            for c in r.candidates
        ]
        assert strip(before) == strip(after)

    def test_save_requires_corpus(self, tmp_path):
        with pytest.raises(EngineNotReady):
            DetectionEngine(small_config()).save(tmp_path / "state")

    def test_corrupted_index_rejected(self, tmp_path, trained_engine):
        engine, _ = trained_engine
        out = tmp_path / "state"
        engine.save(out)
        index_path = out / "index.dat"
        blob = bytearray(index_path.read_bytes())
        blob[len(blob) // 2] ^= 0xFF
        index_path.write_bytes(bytes(blob))
        with pytest.raises(CorruptFile):
            DetectionEngine.load(out)

    def test_state_files_on_disk(self, tmp_path, trained_engine):
        engine, _ = trained_engine
        out = tmp_path / "state"
        engine.save(out)
        assert sorted(os.listdir(out)) == [
            "classifier.dat",
            "config.cfg",
            "corpus.jsonl",
            "index.dat",
        ]

    def test_index_ids_must_match_corpus(self, tmp_path, trained_engine):
        engine, _ = trained_engine
        out = tmp_path / "state"
        engine.save(out)
        corpus_path = out / "corpus.jsonl"
        lines = corpus_path.read_text().splitlines()
        corpus_path.write_text("\n".join(lines[:-1]) + "\n")
        with pytest.raises(EngineNotReady):
            DetectionEngine.load(out)
