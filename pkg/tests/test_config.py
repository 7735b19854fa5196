"""Configuration defaults, file parsing, and round-trips."""

import pytest

from simscan.config import (
    EngineConfig,
    config_to_dict,
    format_config,
    load_config,
    parse_config_text,
    save_config,
)
from simscan.errors import CorruptFile, IoFailure


class TestDefaults:
    def test_default_values(self):
        cfg = EngineConfig()
        assert cfg.dimension == 768
        assert cfg.nlist == 100
        assert cfg.nprobe == 20
        assert cfg.k == 10
        assert cfg.hidden_dim == 512
        assert cfg.learning_rate == 0.001

    def test_remote_needs_endpoint(self):
        with pytest.raises(ValueError):
            EngineConfig(provider_kind="remote")

    def test_hash_rejects_endpoint(self):
        with pytest.raises(ValueError):
            EngineConfig(endpoint="http://svc")

    def test_zero_nlist_allowed(self):
        assert EngineConfig(nlist=0).nlist == 0

    def test_bad_values(self):
        with pytest.raises(ValueError):
            EngineConfig(dimension=-1)
        with pytest.raises(ValueError):
            EngineConfig(metric="cosine")
        with pytest.raises(ValueError):
            EngineConfig(learning_rate=0)
        with pytest.raises(ValueError):
            EngineConfig(pq_centroids=300)


class TestParsing:
    def test_basic_file(self):
        cfg = parse_config_text(
            """
            # engine settings
            provider.kind = hash
            provider.dimension = 256
            index.nlist = 8          # eight cells
            classifier.learning_rate = 0.01
            seed = 42
            """
        )
        assert cfg.dimension == 256
        assert cfg.nlist == 8
        assert cfg.learning_rate == 0.01
        assert cfg.seed == 42
        assert cfg.nprobe == 20  # untouched default

    def test_quoted_and_boolean_values(self):
        cfg = parse_config_text(
            'provider.kind = "remote"\n'
            'provider.endpoint = "http://svc/embed"\n'
            "provider.normalize = false\n"
        )
        assert cfg.provider_kind == "remote"
        assert cfg.endpoint == "http://svc/embed"
        assert cfg.normalize is False

    def test_none_clears_option(self):
        cfg = parse_config_text("index.pq_segments = none\n")
        assert cfg.pq_segments is None

    def test_unknown_key(self):
        with pytest.raises(CorruptFile, match="line 1"):
            parse_config_text("index.cells = 5")

    def test_missing_equals(self):
        with pytest.raises(CorruptFile, match="line 2"):
            parse_config_text("seed = 1\njust words\n")

    def test_invalid_value_combination(self):
        with pytest.raises(CorruptFile):
            parse_config_text("provider.kind = remote\n")


class TestRoundTrip:
    def test_format_parse_identity(self):
        cfg = EngineConfig(
            dimension=128, nlist=0, pq_segments=8, learning_rate=0.005, seed=9
        )
        assert parse_config_text(format_config(cfg)) == cfg

    def test_file_round_trip(self, tmp_path):
        cfg = EngineConfig(nlist=50, nprobe=5, seed=3)
        path = tmp_path / "engine.cfg"
        save_config(cfg, path)
        assert load_config(path) == cfg

    def test_missing_file(self, tmp_path):
        with pytest.raises(IoFailure):
            load_config(tmp_path / "absent.cfg")

    def test_to_dict_nesting(self):
        d = config_to_dict(EngineConfig(seed=7))
        assert d["provider"]["kind"] == "hash"
        assert d["index"]["nlist"] == 100
        assert d["classifier"]["hidden_dim"] == 512
        assert d["detect"]["k"] == 10
        assert d["seed"] == 7
