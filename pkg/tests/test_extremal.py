from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oriham import (
    ExtremalParams,
    InfeasibleParamsError,
    OrientedGraph,
    PartitionNotCoveringError,
    Partition4,
    SIZE_ROUNDING_ALLOWANCE,
    bipartite_tournament,
    feasible_a_values,
    find_extremal_partition,
    find_sharp_pair,
    generate_extremal,
    minimal_eta,
    near_regular_tournament,
    random_tournament,
    sharp_bound,
    table_params,
    verify_partition,
)


def test_sharp_bound_values():
    assert sharp_bound(7) == 4
    assert sharp_bound(12) == 8
    assert sharp_bound(13) == 8
    assert sharp_bound(14) == 9


def test_size_allowance_constant():
    assert SIZE_ROUNDING_ALLOWANCE == 2


def test_table_params_rows():
    p = table_params(12, 0)
    assert (p.a, p.size_b, p.size_c, p.size_d) == (0, 4, 5, 3)
    assert p.bound == 8
    assert p.sizes == (0, 4, 5, 3)
    p = table_params(7, 0)
    assert p.sizes == (0, 3, 2, 2)
    assert p.bound == 4
    p = table_params(13, 2)
    assert p.sizes == (2, 4, 4, 3)
    assert p.bound == 8


@given(st.integers(7, 60))
def test_table_params_consistent(n):
    for a in feasible_a_values(n):
        p = table_params(n, a)
        assert sum(p.sizes) == n
        assert p.bound == sharp_bound(n)
        assert -(-a // 2) <= p.size_d


def test_table_params_errors():
    with pytest.raises(InfeasibleParamsError):
        table_params(6, 0)
    with pytest.raises(InfeasibleParamsError):
        table_params(7, 2)
    with pytest.raises(InfeasibleParamsError):
        table_params(12, -1)
    with pytest.raises(InfeasibleParamsError):
        table_params(12, 0, ac_extra=-1)
    with pytest.raises(InfeasibleParamsError):
        table_params(12, 0, d_extra=-2)


def test_feasible_a_values():
    assert feasible_a_values(7) == [0, 1]
    for n in range(7, 40):
        vals = feasible_a_values(n)
        assert vals == list(range(len(vals)))
        for a in vals:
            p = table_params(n, a)
            assert a <= p.size_c and -(-a // 2) <= p.size_d
        with pytest.raises(InfeasibleParamsError):
            table_params(n, vals[-1] + 1)


# -- tournaments -----------------------------------------------------------------


def test_near_regular_small():
    assert near_regular_tournament(0).n == 0
    assert near_regular_tournament(1).arc_count == 0
    g = near_regular_tournament(5)
    assert all(g.degrees(v) == (2, 2) for v in range(5))


def test_near_regular_even():
    g = near_regular_tournament(4)
    assert g.arcs() == [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 0)]
    assert sorted(g.out_degree(v) for v in range(4)) == [1, 1, 2, 2]


@given(st.integers(0, 11))
def test_near_regular_is_balanced_tournament(m):
    g = near_regular_tournament(m)
    assert g.arc_count == m * (m - 1) // 2
    for v in range(m):
        o, i = g.degrees(v)
        assert o + i == m - 1
        assert abs(o - i) <= 1


def test_near_regular_relabel_keeps_degrees():
    base = near_regular_tournament(7)
    shuf = near_regular_tournament(7, seed=5)
    assert base.arc_count == shuf.arc_count
    assert (sorted(base.degrees(v) for v in range(7))
            == sorted(shuf.degrees(v) for v in range(7)))


def test_bipartite_tournament_counts():
    b_to_d, d_to_b = bipartite_tournament(3, 2, 1)
    assert len(b_to_d) == 3
    assert len(d_to_b) == 3
    b_to_d, d_to_b = bipartite_tournament(4, 3, 1)
    assert len(b_to_d) == 4
    assert len(d_to_b) == 8
    b_to_d, d_to_b = bipartite_tournament(3, 4, 0)
    assert b_to_d == []
    assert len(d_to_b) == 12


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(0, 9))
def test_bipartite_tournament_regular_rows(b, d, out, seed):
    if out > d:
        with pytest.raises(InfeasibleParamsError):
            bipartite_tournament(b, d, out, seed=seed)
        return
    b_to_d, d_to_b = bipartite_tournament(b, d, out, seed=seed)
    assert len(b_to_d) == b * out
    assert len(d_to_b) == b * (d - out)
    seen = set(b_to_d) | {(y, x) for x, y in d_to_b}
    assert len(seen) == b * d
    for i in range(b):
        assert sum(1 for x, _ in b_to_d if x == i) == out


# -- generation ------------------------------------------------------------------


def test_generate_structure_n7():
    g, part = generate_extremal(table_params(7, 0))
    assert g.n == 7
    assert part.sizes() == {"A": 0, "B": 3, "C": 2, "D": 2}
    for b in part.B:
        assert g.out_degree(b) == 2
        assert all(g.has_arc(b, c) for c in part.C)
    for c in part.C:
        assert all(g.has_arc(c, d) for d in part.D)
    for d in part.D:
        assert all(g.has_arc(d, b) for b in part.B)


def test_generate_blocks_are_id_ordered():
    g, part = generate_extremal(table_params(13, 2))
    assert sorted(part.A) == [0, 1]
    assert sorted(part.B) == [2, 3, 4, 5]
    assert sorted(part.C) == [6, 7, 8, 9]
    assert sorted(part.D) == [10, 11, 12]
    for a in part.A:
        assert all(g.has_arc(a, b) for b in part.B)
        assert all(g.has_arc(d, a) for d in part.D)


def test_generate_b_to_d_split():
    for n, a in ((9, 1), (13, 2), (16, 3)):
        g, part = generate_extremal(table_params(n, a))
        want = -(-a // 2)
        for b in part.B:
            assert g.count_arcs_between({b}, part.D) == want


def test_generate_extra_arcs():
    p = table_params(12, 2, ac_extra=5, d_extra=1)
    g, part = generate_extremal(p)
    assert g.count_arcs_between(part.A, part.C) == 5
    assert g.count_arcs_within(part.D) == 1


def test_generate_extra_arcs_capped_by_room():
    # only |A| * |C| slots exist; requests beyond that saturate
    p = table_params(12, 1, ac_extra=99, d_extra=99)
    g, part = generate_extremal(p)
    assert g.count_arcs_between(part.A, part.C) == len(part.A) * len(part.C)
    assert g.count_arcs_within(part.D) == 3  # 3 = C(3,2) tournament on D


def test_generate_seed_changes_tournament_not_sizes():
    g0, p0 = generate_extremal(table_params(13, 1, seed=0))
    g1, p1 = generate_extremal(table_params(13, 1, seed=9))
    assert p0.sizes() == p1.sizes() == {"A": 1, "B": 4, "C": 5, "D": 3}
    assert g0.arc_count == g1.arc_count


def test_sharp_pair_n12():
    g, part = generate_extremal(table_params(12, 0))
    pair = find_sharp_pair(g, 8)
    assert pair is not None
    x, y = pair
    assert not g.has_arc(x, y)
    assert g.out_degree(x) + g.in_degree(y) == 8
    assert x in part.B and y in part.B


def test_sharp_pair_n13():
    g, part = generate_extremal(table_params(13, 0))
    pair = find_sharp_pair(g, 8)
    assert pair is not None
    x, y = pair
    assert g.out_degree(x) + g.in_degree(y) == 8
    assert not g.has_arc(x, y)


def test_sharp_pair_absent_when_bound_too_low():
    g, _ = generate_extremal(table_params(12, 0))
    assert find_sharp_pair(g, 0) is None


# -- scoring ---------------------------------------------------------------------


def test_verify_clean_extremal():
    g, part = generate_extremal(table_params(12, 0))
    rep = verify_partition(g, part, Fraction(1, 100))
    assert rep.verdict
    assert rep.failing() == []
    assert rep.slacks["e_AC"] == Fraction(36, 25)
    assert rep.slacks["e_D"] == Fraction(36, 25)
    assert rep.min_slack() == Fraction(28, 25)
    assert set(rep.slacks) == {
        "size_AC", "size_B", "size_D",
        "e_AB", "e_BC", "e_CD", "e_DA", "e_BD", "e_DB",
        "e_A", "e_C", "e_AC", "e_D",
    }


def test_verify_swapped_labels_fail():
    g, part = generate_extremal(table_params(12, 0))
    swapped = Partition4(part.C, part.B, part.A, part.D)
    rep = verify_partition(g, swapped, Fraction(1, 100))
    assert not rep.verdict
    assert rep.slacks["e_AB"] == Fraction(-464, 25)
    assert "e_AB" in rep.failing()


def test_verify_requires_cover():
    g, _ = generate_extremal(table_params(12, 0))
    bad = Partition4.of([0], [1], [2], [3])
    with pytest.raises(PartitionNotCoveringError):
        verify_partition(g, bad, Fraction(1, 100))


def test_report_serializes():
    g, part = generate_extremal(table_params(12, 0))
    d = verify_partition(g, part, Fraction(1, 100)).to_json_dict()
    assert d["verdict"] is True
    assert d["eta"] == {"num": 1, "den": 100}
    assert d["slacks"]["e_AC"] == {"num": 36, "den": 25}


def test_minimal_eta_clean_instance():
    g, part = generate_extremal(table_params(12, 0))
    assert minimal_eta(g, part) == 0


def test_minimal_eta_with_extras():
    g, part = generate_extremal(table_params(12, 2, ac_extra=5))
    eta = minimal_eta(g, part)
    assert eta == Fraction(5, 144)
    assert verify_partition(g, part, eta).verdict
    assert not verify_partition(g, part, eta - Fraction(1, 10000)).verdict


def test_minimal_eta_requires_cover():
    g, _ = generate_extremal(table_params(12, 0))
    with pytest.raises(PartitionNotCoveringError):
        minimal_eta(g, part=Partition4.of([0], [1], [2], [3]))


def test_slacks_monotone_in_eta():
    g, part = generate_extremal(table_params(12, 2, ac_extra=5, d_extra=3))
    lo = verify_partition(g, part, Fraction(1, 100)).slacks
    hi = verify_partition(g, part, Fraction(5, 100)).slacks
    for key in lo:
        assert hi[key] >= lo[key]


def test_find_partition_recovers_extremal():
    g, _ = generate_extremal(table_params(12, 0))
    found = find_extremal_partition(g, Fraction(1, 20))
    assert found is not None
    part, rep = found
    assert rep.verdict
    assert verify_partition(g, part, Fraction(1, 20)).verdict


def test_find_partition_rejects_plain_cycle():
    g = OrientedGraph(12, [(i, (i + 1) % 12) for i in range(12)])
    found = find_extremal_partition(g, Fraction(1, 100))
    assert found is None or not found[1].verdict


def test_find_partition_rejects_random_tournament():
    g = random_tournament(12, 3)
    found = find_extremal_partition(g, Fraction(1, 100))
    assert found is None or not found[1].verdict


def test_find_partition_tiny_graph():
    assert find_extremal_partition(OrientedGraph.empty(3), Fraction(1, 10)) is None


def test_params_frozen():
    p = table_params(12, 0)
    assert isinstance(p, ExtremalParams)
    with pytest.raises(Exception):
        p.a = 3
