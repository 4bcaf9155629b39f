import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ergogap.ergotropy import all_gaps
from ergogap.errors import EmptyGaps, OutOfRange, WrongArity, WrongPartyCount
from ergogap.measures import (
    concurrence,
    concurrence_fill,
    delta_avg,
    delta_fill,
    delta_min,
    delta_volume,
    gap_concurrence_relation,
    gap_from_concurrence,
    gmc,
    measure_report,
    min_concurrence,
    step,
)
from ergogap.partitions import bipartitions
from ergogap.states import extended_ghz, ghz, random_schmidt, random_state, table2_state, tri_bell, w_state

gaps_st = st.lists(st.floats(0, 2, allow_nan=False), min_size=1, max_size=8)


def test_gap_sequence_measures():
    assert delta_min([1, 0.5, 0.7]) == 0.5
    assert delta_avg([1, 0.5, 0.6]) == pytest.approx(0.7)
    assert delta_avg([1, 0.0, 1]) == 0.0
    assert delta_volume([1, 0.5, 0.25]) == pytest.approx(0.5)
    assert delta_volume([1, 1e-12, 1]) == 0.0
    assert step([1, 1e-10]) == 0
    with pytest.raises(EmptyGaps):
        delta_min([])


def test_fill_values():
    assert delta_fill([1, 1, 1]) == pytest.approx(1.0)
    assert delta_fill([1, 1, 0]) == 0.0
    with pytest.raises(WrongArity):
        delta_fill([1, 1])


@given(gaps_st)
def test_am_gm_and_order(g):
    assert delta_volume(g) <= delta_avg(g) + 1e-9
    if step(g):
        assert delta_min(g) <= delta_volume(g) + 1e-9


def test_ghz_values():
    r = measure_report(ghz(3))
    assert (r.delta_min, r.delta_avg, r.delta_vol, r.delta_fill) == pytest.approx((1, 1, 1, 1))
    assert r.gmc == pytest.approx(1.0)
    assert r.concurrence_fill == pytest.approx(1.0)


def test_maximal_w_values():
    c = 1 / math.sqrt(3)
    r = measure_report(tri_bell(c, c, c))
    # normalized volume; the unnormalized product would be 8/27
    assert r.delta_vol == pytest.approx(2 / 3)
    assert r.delta_fill == pytest.approx(2 / 3)


def test_tri_bell_fill_example():
    s = tri_bell(1 / math.sqrt(2), 0.5, 0.5)
    assert measure_report(s).delta_fill == pytest.approx(1 / math.sqrt(3))


@pytest.mark.parametrize("name,dmin,printed,avg,fill,F,vol", [
    ("psi", 0.667, 0.943, 0.667, 0.667, 0.889, 0.667),
    ("phi", 0.250, 0.661, 0.750, 0.559, 0.702, 0.630),
    ("chi", 0.500, 0.866, 0.500, 0.500, 0.750, 0.500),
    ("zeta", 0.250, 0.661, 0.583, 0.479, 0.679, 0.520),
    ("eta", 0.360, 0.768, 0.360, 0.360, 0.590, 0.360),
])
def test_comparison_states(name, dmin, printed, avg, fill, F, vol):
    r = measure_report(table2_state(name))
    got = (r.delta_min, r.gmc_printed, r.delta_avg, r.delta_fill, r.concurrence_fill, r.delta_vol)
    assert got == pytest.approx((dmin, printed, avg, fill, F, vol), abs=1e-3)
    assert r.gmc == pytest.approx(r.gmc_printed ** 2)


# (measure, measure, state, state) pairs whose orders disagree
REVERSALS = [
    ("delta_min", "delta_avg", "phi", "chi"),
    ("delta_min", "delta_fill", "phi", "chi"),
    ("delta_min", "concurrence_fill", "phi", "eta"),
    ("delta_min", "delta_vol", "zeta", "eta"),
    ("delta_avg", "delta_fill", "chi", "zeta"),
    ("delta_avg", "concurrence_fill", "chi", "zeta"),
    ("delta_avg", "delta_vol", "psi", "phi"),
    ("delta_fill", "concurrence_fill", "phi", "chi"),
    ("delta_fill", "delta_vol", "chi", "zeta"),
    ("concurrence_fill", "delta_vol", "phi", "chi"),
]


@pytest.mark.parametrize("m1,m2,a,b", REVERSALS)
def test_measure_inequivalence(m1, m2, a, b):
    ra, rb = measure_report(table2_state(a)).values(), measure_report(table2_state(b)).values()
    assert (ra[m1] - rb[m1]) * (ra[m2] - rb[m2]) < 0
    # gmc orders like delta_min
    if m1 == "delta_min":
        assert (ra["gmc"] - rb["gmc"]) * (ra[m2] - rb[m2]) < 0


def test_concurrence_relation_round_trip():
    rng = np.random.default_rng(7)
    for _ in range(200):
        s = random_state((2, 2, 2), rng)
        for r in all_gaps(s, None, 2):
            c = concurrence(s, r.partition)
            assert c == pytest.approx(gap_concurrence_relation(r.gap), abs=1e-9)
            assert gap_from_concurrence(c) == pytest.approx(r.gap, abs=1e-9)


def test_concurrence_relation_range():
    with pytest.raises(OutOfRange):
        gap_concurrence_relation(1.5)
    with pytest.raises(OutOfRange):
        gap_from_concurrence(-0.1)


def test_three_qubit_only_comparators():
    s = w_state(4)
    with pytest.raises(WrongPartyCount):
        gmc(s)
    with pytest.raises(WrongPartyCount):
        concurrence_fill(s)
    with pytest.raises(WrongPartyCount):
        min_concurrence(s)
    r = measure_report(s)
    assert r.gmc is None and r.delta_fill is None
    assert r.delta_min > 0


def test_delta_min_bounded_by_one():
    rng = np.random.default_rng(8)
    for n in (2, 3, 4, 5):
        for _ in range(20):
            assert measure_report(random_state((2,) * n, rng)).delta_min <= 1 + 1e-9


def test_equal_gap_member_maximizes_volume_in_bin():
    rng = np.random.default_rng(9)
    best = {}
    for _ in range(2000):
        g = [r.gap for r in all_gaps(random_state((2, 2, 2), rng), None, 2)]
        b = int(delta_avg(g) / 0.01)
        best[b] = max(best.get(b, 0.0), delta_volume(g))
    for b, v in best.items():
        # equal gaps give volume equal to their mean, the bin's upper edge at most
        assert v <= (b + 1) * 0.01 + 1e-9


def test_extended_ghz_volume_below_w_past_crossover():
    c = 1 / math.sqrt(3)
    w = measure_report(tri_bell(c, c, c)).delta_vol
    for l1 in (0.4976 + 1e-9, 0.55, 0.7):
        r = math.sqrt(1 - l1 * l1)
        for t in np.linspace(0.01, math.pi / 2 - 0.01, 60):
            s = extended_ghz(1, r * math.cos(t), l1, r * math.sin(t))
            assert measure_report(s).delta_vol <= w + 1e-6


def test_k_measures_four_qubits():
    r = measure_report(ghz(4), k=3)
    assert r.k == 3
    assert len(r.gaps) == 6
    assert r.full_gap == pytest.approx(2.0)
