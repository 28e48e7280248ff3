import json
from pathlib import Path

import pytest

from hbfsim.core.base import ConfigurationError
from hbfsim.harness.config import WORKERS_ENV, CampaignConfig, apply_environment, build_config, load_config

CONFIG_DIR = Path(__file__).resolve().parents[1] / "configs"


def test_defaults_follow_reference_system():
    cfg = CampaignConfig()
    assert (cfg.carrier, cfg.bandwidth, cfg.tx_power, cfg.noise_figure) == (28.0, 100e6, 35.2, 10.0)
    assert (cfg.tp_array.rows, cfg.tp_array.cols, cfg.tp_array.polarizations) == (8, 16, 2)
    assert cfg.tp_ura().n_elements == 256
    assert cfg.ue_ura().n_elements == 8
    assert cfg.channel_profile == "few-strong-lobes"
    assert cfg.budget().noise_power == pytest.approx(-84.0)


def test_default_schemes_drop_gmr_when_dimensions_mismatch():
    assert CampaignConfig().active_schemes() == ["baseline", "lsp", "slnr"]
    assert "gmr" in CampaignConfig(streams_per_user=4).active_schemes()


def test_explicit_gmr_with_mismatched_dimensions_is_rejected():
    cfg = CampaignConfig(schemes=["baseline", "gmr"])
    with pytest.raises(ConfigurationError):
        cfg.active_schemes()


def test_invalid_values_are_configuration_errors():
    with pytest.raises(ConfigurationError):
        build_config({"streams_per_user": 5})
    with pytest.raises(ConfigurationError):
        build_config({"cell_radius": 5.0})
    with pytest.raises(ConfigurationError):
        build_config({"schemes": ["zf"]})
    with pytest.raises(ConfigurationError):
        build_config({"unknown_key": 1})


def test_with_overrides_revalidates():
    cfg = CampaignConfig().with_overrides(users_per_cell=12, seed=None)
    assert cfg.users_per_cell == 12 and cfg.seed == 2018
    with pytest.raises(ConfigurationError):
        cfg.with_overrides(ue_chains=16)


def test_profile_overrides_reach_the_channel_profile():
    cfg = CampaignConfig(channel_profile="many-weak-clusters", profile_overrides={"los_mode": "never"})
    assert cfg.profile().los_mode == "never"


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "campaign.json"
    path.write_text(json.dumps({"users_per_cell": 12, "realizations": 100, "cell_radius": 200.0}))
    cfg = load_config(path)
    assert cfg.users_per_cell == 12 and cfg.realizations == 100 and cfg.cell_radius == 200.0


@pytest.mark.parametrize(
    "content",
    ["{not json", json.dumps({"channel_profile": "rural-macro"}), json.dumps({"realizations": 0})],
)
def test_load_config_rejects_bad_files(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    with pytest.raises(ConfigurationError):
        load_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_config(tmp_path / "absent.json")


def test_shipped_presets_load():
    presets = sorted(CONFIG_DIR.glob("*.json"))
    assert len(presets) == 7
    for preset in presets:
        cfg = load_config(preset)
        assert cfg.active_schemes()
    assert load_config(CONFIG_DIR / "full_k3_r50.json").realizations == 400
    assert load_config(CONFIG_DIR / "full_k12_r50.json").realizations == 100


def test_worker_count_from_environment(monkeypatch):
    monkeypatch.setenv(WORKERS_ENV, "3")
    assert apply_environment(CampaignConfig()).workers == 3
    monkeypatch.setenv(WORKERS_ENV, "many")
    with pytest.raises(ConfigurationError):
        apply_environment(CampaignConfig())
