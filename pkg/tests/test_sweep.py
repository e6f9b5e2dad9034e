import pytest

from oracles import divisor_count
from pscale.config import SweepConfig
from pscale.dataflow import evaluate_layer
from pscale.errors import ConfigError
from pscale.sweep import detect_symmetric_rule, detect_utilization_wall, run_sweep
from pscale.topology import GridTopology, effective_dims
from pscale.workload import LayerShape, Workload, load_preset


def one(layer):
    return Workload("syn", (layer,))


def test_composition_single_layer_tile_one():
    layer = LayerShape("l", 6, 6, 3, 3, 2, 5, 1, 1)
    cfg = SweepConfig(workloads=("x",), pe_counts=(4,), tile_dim=1)
    res = run_sweep(cfg, workloads=[one(layer)])
    labels = [u.topology.label for u in res.topologies("syn", 4)]
    assert labels == ["1x4", "2x2", "4x1"]
    for u in res.topologies("syn", 4):
        direct = evaluate_layer(layer, *effective_dims(u.topology), buffers=cfg.buffers)
        assert u.layers == (direct,)


def test_alphagozero_512_has_ten_topologies():
    res = run_sweep(SweepConfig(workloads=("preset:alphagozero",), pe_counts=(512,)))
    assert len(res.topologies("alphagozero", 512)) == divisor_count(512) == 10


def test_googlenet_eta_pair():
    res = run_sweep(SweepConfig(workloads=("preset:googlenet",), pe_counts=(128, 1024)))
    table = dict(res.eta_table("googlenet"))
    assert table[128] == 1.0
    assert 0 < table[1024] < 1


def test_completeness_all_presets():
    cfg = SweepConfig()
    res = run_sweep(cfg)
    for wl in res.workloads:
        for n in cfg.pe_counts:
            assert len(res.topologies(wl, n)) == divisor_count(n)
    assert len(res.units) == 4 * sum(divisor_count(n) for n in cfg.pe_counts)


def test_parallel_equals_sequential(tiny_workload):
    cfg = SweepConfig(workloads=("x",), pe_counts=(16, 64))
    seq = run_sweep(cfg, workloads=[tiny_workload], workers=1)
    par = run_sweep(cfg, workloads=[tiny_workload], workers=2)
    assert list(seq.units) == list(par.units)
    assert [u.layers for u in seq.units.values()] == [u.layers for u in par.units.values()]


def test_linear_workload_scales_ideally():
    big = LayerShape("big", 64, 64, 1, 1, 1024, 1024)
    res = run_sweep(SweepConfig(workloads=("x",), pe_counts=(64, 128, 256)), workloads=[one(big)])
    wall = detect_utilization_wall(res, "syn")
    assert [p.pe_count for p in wall] == [64, 128, 256]
    assert all(p.eta == pytest.approx(1.0, abs=0.05) for p in wall)
    assert not any(p.flagged for p in wall)


def test_identical_cycles_flagged():
    tiny = LayerShape("t", 4, 4, 1, 1, 2, 3)
    res = run_sweep(SweepConfig(workloads=("x",), pe_counts=(4, 8)), workloads=[one(tiny)])
    wall = detect_utilization_wall(res, "syn")
    assert wall[1].eta == 4 / 8
    assert [p.flagged for p in wall] == [False, True]


def test_wall_needs_two_scales_and_known_workload():
    res = run_sweep(SweepConfig(workloads=("x",), pe_counts=(4,)), workloads=[one(LayerShape("t", 2, 2, 1, 1, 1, 1))])
    with pytest.raises(ValueError):
        detect_utilization_wall(res, "syn")
    res2 = run_sweep(SweepConfig(workloads=("x",), pe_counts=(4, 8)), workloads=[one(LayerShape("t", 2, 2, 1, 1, 1, 1))])
    with pytest.raises(KeyError):
        detect_utilization_wall(res2, "nope")


def test_symmetric_rule_single_pe():
    res = run_sweep(SweepConfig(workloads=("x",), pe_counts=(1,)), workloads=[one(LayerShape("t", 5, 5, 3, 3, 2, 9))])
    rule = detect_symmetric_rule(res, "syn", 1)
    assert rule.best == GridTopology(1, 1)
    assert rule.util_ratio_best_over_worst_linear == 1.0
    assert rule.traffic_ratio_linear_over_best == 1.0


def test_symmetric_rule_alphagozero_512():
    res = run_sweep(SweepConfig(workloads=("preset:alphagozero",), pe_counts=(512,)))
    rule = detect_symmetric_rule(res, "alphagozero", 512)
    assert rule.util_ratio_best_over_worst_linear >= 3
    assert rule.traffic_ratio_linear_over_best >= 1.4


def test_symmetric_rule_single_chiplet_fit_ties():
    fit = LayerShape("t", 5, 5, 2, 2, 1, 4)
    res = run_sweep(SweepConfig(workloads=("x",), pe_counts=(16,)), workloads=[one(fit)])
    units = res.topologies("syn", 16)
    assert len({u.total_cycles for u in units}) == 1
    assert len({u.useful_macs for u in units}) == 1
    assert detect_symmetric_rule(res, "syn", 16).best == GridTopology(4, 4)


def test_unreadable_workload_names_path(tmp_path):
    missing = tmp_path / "missing.csv"
    with pytest.raises(OSError, match="missing.csv"):
        run_sweep(SweepConfig(workloads=(str(missing),), pe_counts=(4,)))


def test_duplicate_workload_names_rejected():
    wl = load_preset("resnet18")
    with pytest.raises(ConfigError):
        run_sweep(SweepConfig(pe_counts=(4,)), workloads=[wl, wl])


def test_invalid_config_lists_violations():
    with pytest.raises(ConfigError) as exc:
        SweepConfig(workloads=(), pe_counts=(128, 64), tile_dim=0)
    assert len(exc.value.violations) == 3


def test_laser_energy_follows_cycles():
    res = run_sweep(SweepConfig(workloads=("preset:resnet18",), pe_counts=(64,)))
    for u in res.topologies("resnet18", 64):
        assert res.laser_energy(u) == pytest.approx(u.total_cycles * 1e-9)
