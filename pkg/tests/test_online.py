import random

import pytest

from cellcall.hexnet import Network, flower_network, hex_patch
from cellcall.online import (
    Caco2Algorithm,
    GreedyAlgorithm,
    NotTriangleFreeError,
    PartitionReserveAlgorithm,
    UnknownAlgorithmError,
    UnknownRequestCellError,
    caco_algorithm,
    make_algorithm,
    overflow_order_violations,
    run_sequence,
)
from conftest import random_network, random_requests

STAR = Network([(0, 0), (-1, 1), (0, -1), (1, 0)])  # R center, G outer


def accepted_freqs(trace):
    return [out.frequency for _, _, out in trace.events if out.accepted]


def outcomes(trace):
    return [out.accepted for _, _, out in trace.events]


# greedy

def test_greedy_accepts_minimum():
    net = Network([(0, 0)])
    trace = run_sequence(GreedyAlgorithm(net, 7), net, 7, [(0, 0)])
    assert accepted_freqs(trace) == [1]


def test_greedy_rejects_when_spectrum_blocked():
    net = Network([(0, 0), (1, 0)])
    seq = [(0, 0)] * 2 + [(1, 0)] * 2
    trace = run_sequence(GreedyAlgorithm(net, 3), net, 3, seq + [(1, 0)])
    # first cell takes 1,2; neighbor takes 3 then has nothing left
    assert accepted_freqs(trace) == [1, 2, 3]
    assert outcomes(trace) == [True, True, True, False, False]


def test_greedy_skips_neighbor_frequencies():
    net = Network([(0, 0), (1, 0)])
    trace = run_sequence(GreedyAlgorithm(net, 7), net, 7, [(0, 0), (0, 0), (1, 0)])
    assert accepted_freqs(trace) == [1, 2, 3]


def test_greedy_rejections_are_forced():
    # replay: every rejection happened with zero available frequencies
    rng = random.Random(5)
    net = random_network(rng, max_cells=7)
    omega = 5
    seq = random_requests(rng, net, 80)
    trace = run_sequence(GreedyAlgorithm(net, omega), net, omega, seq)
    from cellcall.spectrum import AssignmentState

    replay = AssignmentState(net, omega)
    for _, cell, out in trace.events:
        if out.accepted:
            replay.assign(cell, out.frequency)
        else:
            assert replay.first_available(cell, range(1, omega + 1)) is None


# caco / partition family

def test_caco_single_cell_nine_then_reject():
    net = Network([(0, 0)])
    trace = run_sequence(caco_algorithm(net, 21), net, 21, [(0, 0)] * 10)
    assert accepted_freqs(trace) == [1, 2, 3, 4, 5, 6, 19, 20, 21]
    assert outcomes(trace)[-1] is False


def test_caco_green_cell_overflows_to_shared():
    net = STAR
    trace = run_sequence(caco_algorithm(net, 21), net, 21, [(1, 0)] * 7)
    assert accepted_freqs(trace) == [7, 8, 9, 10, 11, 12, 19]


def test_caco_rejects_when_shared_taken_by_neighbor():
    net = STAR
    seq = [(0, 0)] * 21 + [(1, 0)] * 7
    trace = run_sequence(caco_algorithm(net, 21), net, 21, seq)
    # center used its 6 own + all 3 shared; outer gets its 6 own then rejects
    assert trace.accepted_at((1, 0)) == 6
    assert outcomes(trace)[-1] is False


def test_partition_2_1_identical_to_caco():
    rng = random.Random(7)
    net = random_network(rng, max_cells=8)
    seq = random_requests(rng, net, 100)
    t1 = run_sequence(caco_algorithm(net, 21), net, 21, seq)
    t2 = run_sequence(PartitionReserveAlgorithm(net, 21, 2, 1), net, 21, seq)
    assert [o.frequency for _, _, o in t1.events] == [o.frequency for _, _, o in t2.events]


def test_partition_1_1_single_cell():
    net = Network([(0, 0)])
    trace = run_sequence(PartitionReserveAlgorithm(net, 4, 1, 1), net, 4, [(0, 0)] * 4)
    assert sum(outcomes(trace)) == 2  # one own + one shared


def test_partition_3_1_single_cell():
    net = Network([(0, 0)])
    trace = run_sequence(PartitionReserveAlgorithm(net, 10, 3, 1), net, 10, [(0, 0)] * 10)
    assert sum(outcomes(trace)) == 4


# caco2

def test_caco2_requires_triangle_free():
    with pytest.raises(NotTriangleFreeError):
        Caco2Algorithm(hex_patch(1), 9)


def test_caco2_isolated_cell_uses_whole_spectrum():
    net = Network([(0, 0)])
    trace = run_sequence(Caco2Algorithm(net, 9), net, 9, [(0, 0)] * 10)
    assert accepted_freqs(trace) == list(range(1, 10))
    assert outcomes(trace)[-1] is False


def test_caco2_structure_a_overflow_ascending():
    # R center, three G neighbors: overflow goes to F_B bottom-to-top
    trace = run_sequence(Caco2Algorithm(STAR, 9), STAR, 9, [(0, 0)] * 7)
    assert accepted_freqs(trace) == [1, 2, 3, 7, 8, 9]


def test_caco2_structure_b_overflow_descending():
    net = Network([(0, 0), (1, 0), (-1, 0)])  # R center, G and B neighbors
    trace = run_sequence(Caco2Algorithm(net, 9), net, 9, [(0, 0)] * 7)
    assert accepted_freqs(trace) == [1, 2, 3, 6, 5, 4]
    assert outcomes(trace)[-1] is False


def test_caco2_single_neighbor_acts_like_structure_b():
    net = Network([(0, 0), (1, 0)])  # G cell with single R neighbor
    trace = run_sequence(Caco2Algorithm(net, 9), net, 9, [(1, 0)] * 7)
    # G's own range then F_B top-to-bottom
    assert accepted_freqs(trace) == [4, 5, 6, 9, 8, 7]
    assert (1, 0) in trace.flagged_cells


def test_caco2_opposite_end_consumption():
    rng = random.Random(11)
    for _ in range(30):
        net = random_network(rng, max_cells=9, triangle_free=True)
        seq = random_requests(rng, net, rng.randint(0, 60))
        trace = run_sequence(Caco2Algorithm(net, 9), net, 9, seq)
        assert overflow_order_violations(trace) == []


# run_sequence plumbing

def test_empty_sequence_all_zero():
    net = flower_network()
    trace = run_sequence(caco_algorithm(net, 21), net, 21, [])
    assert trace.total_accepted() == 0
    assert not trace.demands


def test_fig2_center_phase_accepts_three_sevenths():
    trace = run_sequence(caco_algorithm(STAR, 21), STAR, 21, [(0, 0)] * 21)
    assert trace.accepted_at((0, 0)) == 9  # = 3*omega/7


def test_fig2_full_run_total():
    seq = [(0, 0)] * 21 + [c for c in [(-1, 1), (0, -1), (1, 0)] for _ in range(21)]
    trace = run_sequence(caco_algorithm(STAR, 21), STAR, 21, seq)
    assert trace.total_accepted() == 27


def test_unknown_request_cell_reports_index():
    net = Network([(0, 0)])
    with pytest.raises(UnknownRequestCellError) as err:
        run_sequence(GreedyAlgorithm(net, 7), net, 7, [(0, 0), (3, 3)])
    assert err.value.index == 1


def test_determinism():
    rng = random.Random(3)
    net = random_network(rng, max_cells=8, triangle_free=True)
    seq = random_requests(rng, net, 60)
    for selector in ("greedy", "caco2"):
        a = run_sequence(make_algorithm(selector, net, 9), net, 9, seq)
        b = run_sequence(make_algorithm(selector, net, 9), net, 9, seq)
        assert a.events == b.events


def test_make_algorithm_selectors():
    net = Network([(0, 0)])
    assert make_algorithm("greedy", net, 7).name == "greedy"
    assert make_algorithm("caco", net, 21).name == "caco"
    assert make_algorithm("partition:3:1", net, 10).name == "partition:3:1"
    assert make_algorithm("caco2", net, 9).name == "caco2"
    with pytest.raises(UnknownAlgorithmError):
        make_algorithm("magic", net, 7)
    with pytest.raises(UnknownAlgorithmError):
        make_algorithm("partition:a:b", net, 7)


def test_trace_demand_counters():
    net = STAR
    seq = [(0, 0)] * 3 + [(1, 0)] * 2
    trace = run_sequence(caco_algorithm(net, 21), net, 21, seq)
    assert trace.demands[(0, 0)] == 3
    assert trace.demands[(1, 0)] == 2
    for cell in net.sorted_cells():
        assert trace.demands.get(cell, 0) >= trace.accepted_at(cell)
