import pytest

from pscale.config import CONFIG_ENV, DEFAULT_PE_COUNTS, SweepConfig, load_config
from pscale.errors import ConfigError

FULL = """
[sweep]
workloads = ["preset:resnet18", "net.csv"]
pe_counts = [16, 32]
tile_dim = 2
interposer_delay = 3
output_dir = "results"
wall_threshold = 0.5

[buffers]
ifmap_sram_bytes = 1024
filter_sram_bytes = 2048
ofmap_sram_bytes = 4096
word_bytes = 2

[optical]
mzi_loss_db = 0.3
link_budget_db = 20.0

[laser]
laser_power_w = 0.5
cycle_time_s = 2e-9
"""


def test_load_full(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text(FULL)
    cfg = load_config(path)
    assert cfg.workloads == ("preset:resnet18", "net.csv")
    assert cfg.pe_counts == (16, 32)
    assert (cfg.tile_dim, cfg.interposer_delay, cfg.output_dir, cfg.wall_threshold) == (2, 3, "results", 0.5)
    assert cfg.buffers.word_bytes == 2 and cfg.buffers.filter_sram_bytes == 2048
    assert cfg.optical.mzi_loss_db == 0.3 and cfg.optical.crossing_loss_db == 0.05
    assert cfg.laser.cycle_time_s == 2e-9


def test_empty_file_gives_defaults(tmp_path):
    path = tmp_path / "empty.toml"
    path.write_text("")
    cfg = load_config(path)
    assert cfg == SweepConfig()
    assert cfg.pe_counts == DEFAULT_PE_COUNTS == (64, 128, 256, 512, 1024)
    assert cfg.tile_dim == 4 and cfg.interposer_delay == 0


def test_env_var_default(tmp_path, monkeypatch):
    path = tmp_path / "env.toml"
    path.write_text("[sweep]\npe_counts = [8]\n")
    monkeypatch.setenv(CONFIG_ENV, str(path))
    assert load_config().pe_counts == (8,)
    monkeypatch.delenv(CONFIG_ENV)
    assert load_config() == SweepConfig()


def test_violations_are_collected(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("[sweep]\npe_counts = [64, 32]\nbogus = 1\n[optical]\nlink_budget_db = -1\n[extra]\n")
    with pytest.raises(ConfigError) as exc:
        load_config(path)
    msg = str(exc.value)
    assert "bogus" in msg and "extra" in msg and "link_budget_db" in msg


def test_bad_toml_and_missing(tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text("[sweep\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    with pytest.raises(OSError, match="missing.toml"):
        load_config(tmp_path / "missing.toml")


def test_round_trip_through_dict():
    from pscale.config import config_from_dict

    cfg = SweepConfig(pe_counts=(4, 8), interposer_delay=2)
    d = cfg.to_dict()
    sections = {k: d.pop(k) for k in ("buffers", "optical", "laser")}
    assert config_from_dict({"sweep": d, **sections}) == cfg
