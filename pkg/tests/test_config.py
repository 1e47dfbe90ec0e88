"""Config dataclass validation and the key=value file grammar."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cropsim.config import (
    ConfigError,
    CropConfig,
    DEFAULT_TOTAL_EPOCHS,
    InvalidAlphaError,
    config_from_mapping,
    load_config,
    parse_config_text,
)


class TestCropConfig:
    def test_defaults(self):
        cfg = CropConfig()
        assert cfg.scale_min == 0.2
        assert cfg.scale_max == 1.0
        assert cfg.ratio_min == 0.75
        assert cfg.ratio_max == pytest.approx(4.0 / 3.0)
        assert cfg.k == 0.1
        assert cfg.alpha == 0.6
        assert cfg.update_freq == 0.2

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"scale_min": 0.0},
            {"scale_min": 0.9, "scale_max": 0.5},
            {"scale_max": 1.5},
            {"ratio_min": 0.0},
            {"ratio_min": 2.0, "ratio_max": 1.0},
            {"k": -0.01},
            {"k": 1.01},
            {"update_freq": 0.6},
            {"update_freq": -0.1},
        ],
    )
    def test_rejects_bad_ranges(self, kwargs):
        with pytest.raises(ConfigError):
            CropConfig(**kwargs)

    @pytest.mark.parametrize("alpha", [0.0, -1.0])
    def test_rejects_bad_alpha_specifically(self, alpha):
        with pytest.raises(InvalidAlphaError):
            CropConfig(alpha=alpha)

    def test_boundary_values_accepted(self):
        CropConfig(scale_min=1.0, scale_max=1.0)
        CropConfig(k=0.0)
        CropConfig(k=1.0)
        CropConfig(update_freq=0.0)
        CropConfig(update_freq=0.5)

    def test_frozen(self):
        with pytest.raises(AttributeError):
            CropConfig().k = 0.3


class TestParseConfigText:
    def test_full_file(self):
        text = (
            "# sampler\n"
            "scale_min = 0.3\n"
            "alpha = 0.8  # inline comment\n"
            "\n"
            "total_epochs = 200\n"
        )
        raw = parse_config_text(text)
        assert raw == {"scale_min": "0.3", "alpha": "0.8", "total_epochs": "200"}

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            parse_config_text("beta = 0.5\n")

    def test_duplicate_key(self):
        with pytest.raises(ConfigError, match="line 2"):
            parse_config_text("alpha = 0.5\nalpha = 0.7\n")

    def test_missing_value(self):
        with pytest.raises(ConfigError, match="missing value"):
            parse_config_text("alpha =\n")

    def test_not_an_assignment(self):
        with pytest.raises(ConfigError, match="line 1"):
            parse_config_text("alpha 0.5\n")

    def test_empty_file_gives_empty_mapping(self):
        assert parse_config_text("# nothing here\n\n") == {}


class TestConfigFromMapping:
    def test_defaults_from_empty(self):
        cfg, plan = config_from_mapping({})
        assert cfg == CropConfig()
        assert plan.total_epochs == DEFAULT_TOTAL_EPOCHS
        assert plan.update_freq == cfg.update_freq

    def test_strings_and_numbers_equivalent(self):
        a, plan_a = config_from_mapping({"alpha": "0.9", "total_epochs": "50"})
        b, plan_b = config_from_mapping({"alpha": 0.9, "total_epochs": 50})
        assert a == b
        assert plan_a == plan_b

    def test_update_freq_flows_into_plan(self):
        _, plan = config_from_mapping({"update_freq": 0.25, "total_epochs": 40})
        assert plan.update_freq == 0.25
        assert plan.total_epochs == 40

    def test_unknown_key(self):
        with pytest.raises(ConfigError, match="unknown config key"):
            config_from_mapping({"scale": 0.5})

    def test_non_numeric_value(self):
        with pytest.raises(ConfigError, match="must be numeric"):
            config_from_mapping({"alpha": "strong"})

    def test_fractional_epochs_rejected(self):
        with pytest.raises(ConfigError, match="total_epochs"):
            config_from_mapping({"total_epochs": 10.5})

    def test_bad_alpha_type_preserved(self):
        with pytest.raises(InvalidAlphaError):
            config_from_mapping({"alpha": "-2"})

    @given(
        st.floats(0.01, 1.0),
        st.floats(0.3, 3.0),
        st.floats(0.0, 1.0),
        st.floats(0.01, 10.0),
        st.floats(0.0, 0.5),
        st.integers(1, 1000),
    )
    def test_round_trips_valid_values(self, smin, rmin, k, alpha, freq, epochs):
        mapping = {
            "scale_min": smin,
            "scale_max": 1.0,
            "ratio_min": rmin,
            "ratio_max": rmin,
            "k": k,
            "alpha": alpha,
            "update_freq": freq,
            "total_epochs": epochs,
        }
        cfg, plan = config_from_mapping(mapping)
        assert cfg.scale_min == smin
        assert cfg.alpha == alpha
        assert plan.total_epochs == epochs


class TestLoadConfig:
    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("alpha = 1.2\nk = 0.2\ntotal_epochs = 30\n", encoding="utf-8")
        cfg, plan = load_config(path)
        assert cfg.alpha == 1.2
        assert cfg.k == 0.2
        assert plan.total_epochs == 30

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(tmp_path / "absent.cfg")
