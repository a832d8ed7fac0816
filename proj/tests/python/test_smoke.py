from fractions import Fraction

import pytest

import ncswitch as nc


def test_speedup_constant():
    assert nc.speedup_for_rate(nc.speedup_pattern_2x3()) == Fraction(5, 4)
    assert nc.min_speedup_exact(nc.speedup_pattern_2x3()) == Fraction(5, 4)


def test_fanout_splitting_scaling():
    for n in range(3, 9):
        assert nc.fs_min_scaling(n) == Fraction(3, 2) - Fraction(1, n)


def test_pattern_round_trip():
    tp = nc.special_rate_point(4)
    again = nc.TrafficPattern.from_json(tp.to_json())
    assert again == tp
    assert again.num_inputs == 2 and again.num_outputs == 4
    assert tp.flows[0] == (1, [1, 2, 3, 4], Fraction(3, 4))
    assert tp.is_admissible()


def test_pattern_from_python_values():
    tp = nc.TrafficPattern(2, 2, [(1, [1, 2], "1/2"), (2, [1], Fraction(1, 2)), (2, [2], "0.5")])
    assert len(tp) == 3
    assert tp.port_loads() == [Fraction(1, 2), Fraction(1), Fraction(1), Fraction(1)]


def test_errors_carry_codes():
    with pytest.raises(nc.NcswitchError) as info:
        nc.TrafficPattern.from_json('{"K": 1, "N": 2, "flows": [{"input": 1, "fanout": [1, 1], "rate": "1/2"}]}')
    assert info.value.code == "duplicate_output"
    assert isinstance(info.value, ValueError)
    with pytest.raises(nc.NcswitchError) as info:
        nc.offline_schedule(nc.speedup_pattern_2x3())
    assert info.value.code == "not_in_stab"
    assert info.value.chi_f == Fraction(5, 4)


def test_graph_structure():
    g = nc.enhanced_conflict_graph(nc.speedup_pattern_2x3())
    assert not g.is_perfect()
    assert len(g.odd_hole()) == 5
    assert nc.enhanced_conflict_graph(nc.relaxed_pattern_bipartite()).is_perfect()
    assert nc.imperfection_ratio(nc.cycle_graph(5)) == Fraction(5, 4)
    c5 = nc.ConflictGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    assert nc.fractional_chromatic(c5, [1] * 5)["value"] == Fraction(5, 2)


def test_region_and_schedule():
    tp = nc.special_rate_point(3)
    r = nc.region(tp)
    assert r["in_stab"] and r["chi_f"] == 1
    assert sum(t["coefficient"] for t in r["decomposition"]) == 1
    s = nc.offline_schedule(tp, verify=True)
    assert s["frame_size"] == 3 and s["served"] and s["innovation_sets_stable"]
    s = nc.offline_schedule(nc.speedup_pattern_2x3(), speedup="5/4")
    assert (s["frame_size"], s["physical_slots"]) == (5, 4)


def test_mds_round_trip():
    data = [b"abcd", b"efgh", b"ijkl"]
    code = nc.mds_encode(data, 6)
    assert nc.mds_decode([(5, code[5]), (1, code[1]), (3, code[3])], 3, 6) == data


def test_simulation_smoke():
    tp = nc.special_rate_point(3)
    zero = nc.simulate(tp, 0.0, delta=200, horizon=2000)
    assert zero["arrivals"] == 0 and zero["empty_visits"] == 2000
    a = nc.simulate(tp, 0.6, scheduler="mwss-rand", delta=200, eps="0.005", horizon=5000, seed=3)
    b = nc.simulate(tp, 0.6, scheduler="mwss-rand", delta=200, eps="0.005", horizon=5000, seed=3)
    assert a == b
    assert a["conservation_ok"] and a["vq_consistent"] and a["stable"]
    fs = nc.simulate(tp, 0.6, scheduler="fs", horizon=5000)
    assert fs["conservation_ok"]
    table = nc.sweep(tp, [0.2, 0.4], delta=200, horizon=3000, threads=2)
    assert [row["alpha"] for row in table["rows"]] == [0.2, 0.4]
    assert table["csv"].startswith("alpha,scheduler,mean_delay,throughput,max_vq,stable\n")
    probe = nc.stability_probe(tp, 0.5, horizon=5000)
    assert probe["empty_visits"] > 0 and probe["inconsistent_visits"] == 0


def test_acceptance_subset():
    results = nc.run_acceptance([1, 2, 3, 9])
    assert [r["id"] for r in results] == [1, 2, 3, 9]
    assert all(r["passed"] for r in results)
