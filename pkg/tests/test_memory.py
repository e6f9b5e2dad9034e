import pytest
from hypothesis import given, settings, strategies as st

from oracles import dram_replay
from pscale.dataflow import plan_folds
from pscale.memory import (
    BufferConfig,
    MemoryTraffic,
    aggregate_traffic,
    demand_traffic,
    dram_traffic,
    working_sets,
)
from pscale.refsim import simulate_ws_reference
from pscale.topology import GridTopology, effective_dims, enumerate_topologies, symmetry_score
from pscale.workload import LayerShape, load_preset

HUGE = 10**12


def test_single_fold_demand():
    plan = plan_folds(LayerShape("l", 4, 4, 2, 2, 1, 4), 4, 4)
    d = demand_traffic(plan)
    assert d.ifmap_reads == plan.t * plan.sr
    assert d.psum_reads == 0


def test_row_fold_psum_reads_match_reference():
    layer = LayerShape("l", 5, 5, 3, 3, 1, 4)
    d = demand_traffic(plan_folds(layer, 4, 4))
    ref = simulate_ws_reference(layer, 4, 4)
    assert d.psum_reads == ref.psum_reads == 72


def test_ifmap_reads_ordered_by_column_count():
    for layer in load_preset("resnet18"):
        for n in (64, 256, 1024):
            sq = max(enumerate_topologies(n), key=lambda t: (symmetry_score(t), -t.pe_rows))
            if layer.num_filters <= effective_dims(sq)[1]:
                continue
            reads = [
                demand_traffic(plan_folds(layer, *effective_dims(t))).ifmap_reads
                for t in (GridTopology(1, n), sq, GridTopology(n, 1))
            ]
            assert reads[0] < reads[1] < reads[2]


def test_filter_reads_topology_invariant():
    for layer in load_preset("mobilenet"):
        reads = {demand_traffic(plan_folds(layer, *effective_dims(t))).filter_reads for t in enumerate_topologies(128)}
        assert reads == {layer.window_size * layer.num_filters}


def test_dram_infinite_buffers_is_working_set():
    layer = LayerShape("l", 8, 8, 3, 3, 4, 6, 1, 1)
    plan = plan_folds(layer, 4, 4)
    dram = dram_traffic(plan, layer, demand_traffic(plan), BufferConfig(HUGE, HUGE, HUGE))
    assert dram.ifmap_reads == 10 * 10 * 4
    assert dram.filter_reads == 3 * 3 * 4 * 6
    assert dram.ofmap_writes == 8 * 8 * 6 and dram.psum_reads == 0


def test_dram_one_word_buffers_is_demand():
    layer = LayerShape("l", 8, 8, 3, 3, 4, 6, 1, 1)
    plan = plan_folds(layer, 4, 4)
    demand = demand_traffic(plan)
    assert dram_traffic(plan, layer, demand, BufferConfig(1, 1, 1)) == demand


def test_dram_mid_buffers_resnet_conv1_matches_replay():
    conv1 = load_preset("resnet18").layers[0]
    ar, ac = effective_dims(GridTopology(16, 16))
    buf = BufferConfig(ifmap_sram_bytes=256 * 1024, filter_sram_bytes=4096, ofmap_sram_bytes=512 * 1024)
    plan = plan_folds(conv1, ar, ac)
    demand = demand_traffic(plan)
    got = dram_traffic(plan, conv1, demand, buf)
    expected_dram, replay_demand = dram_replay(224, 224, 7, 7, 3, 64, 2, 3, ar, ac, 256 * 1024, 4096, 512 * 1024)
    assert demand.as_tuple() == (replay_demand[0], replay_demand[1], replay_demand[2], replay_demand[3])
    assert got.as_tuple() == expected_dram
    # ifmap fits (one pass), filters and outputs stream
    assert got.ifmap_reads == 229 * 229 * 3
    assert got.filter_reads == demand.filter_reads and got.ofmap_writes == demand.ofmap_writes


@st.composite
def layer_plan_buffers(draw):
    R, S = draw(st.integers(1, 3)), draw(st.integers(1, 3))
    pad = draw(st.integers(0, 1))
    H = draw(st.integers(max(1, R - 2 * pad), 7))
    W = draw(st.integers(max(1, S - 2 * pad), 7))
    layer = LayerShape("l", H, W, R, S, draw(st.integers(1, 3)), draw(st.integers(1, 6)), draw(st.integers(1, 3)), pad)
    caps = [draw(st.integers(1, 400)) for _ in range(3)]
    return layer, draw(st.integers(1, 8)), draw(st.integers(1, 8)), caps


@settings(max_examples=200, deadline=None)
@given(layer_plan_buffers())
def test_dram_matches_replay_oracle(args):
    layer, ar, ac, caps = args
    plan = plan_folds(layer, ar, ac)
    demand = demand_traffic(plan)
    got = dram_traffic(plan, layer, demand, BufferConfig(*caps))
    l = layer
    expected, replay_demand = dram_replay(
        l.ifmap_h, l.ifmap_w, l.filt_h, l.filt_w, l.channels, l.num_filters, l.stride, l.padding, ar, ac, *caps
    )
    assert got.as_tuple() == expected
    assert demand.as_tuple() == replay_demand


@settings(max_examples=200, deadline=None)
@given(layer_plan_buffers(), st.integers(0, 2), st.integers(1, 200))
def test_dram_bounds_and_capacity_monotone(args, which, extra):
    layer, ar, ac, caps = args
    plan = plan_folds(layer, ar, ac)
    demand = demand_traffic(plan)
    ws = working_sets(layer)
    small = dram_traffic(plan, layer, demand, BufferConfig(*caps))
    bigger_caps = list(caps)
    bigger_caps[which] += extra
    big = dram_traffic(plan, layer, demand, BufferConfig(*bigger_caps))
    for lo, mid, hi in zip(
        (ws.ifmap_reads, ws.filter_reads, 0, ws.ofmap_writes), small.as_tuple(), demand.as_tuple()
    ):
        assert lo <= mid <= hi
    assert all(b <= s for b, s in zip(big.as_tuple(), small.as_tuple()))


def test_aggregate_traffic():
    assert aggregate_traffic([]) == MemoryTraffic()
    x = MemoryTraffic(1, 2, 3, 4)
    assert aggregate_traffic([x]) == x
    assert aggregate_traffic([x, MemoryTraffic(10, 20, 30, 40)]) == MemoryTraffic(11, 22, 33, 44)
    assert x.total == 10


def test_traffic_overflow_and_validation():
    big = MemoryTraffic(2**62, 0, 0, 0)
    with pytest.raises(OverflowError):
        aggregate_traffic([big, big])
    with pytest.raises(ValueError):
        MemoryTraffic(-1)
    with pytest.raises(ValueError):
        BufferConfig(1, 1, 1, word_bytes=2)
