import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergogap.errors import DimensionMismatch
from ergogap.locc import (
    complete_measure_check,
    fill_scenario_scan,
    is_majorized,
    majorization_check,
    monotonicity_probe,
    single_party_cuts,
)
from ergogap.model import validate_state
from ergogap.partitions import bipartitions, parse_partition
from ergogap.states import build_schmidt, generalized_ghz, ghz, random_schmidt, random_state, w_state

prob = st.lists(st.floats(0, 1), min_size=2, max_size=5).filter(lambda x: sum(x) > 0).map(
    lambda x: np.array(x) / sum(x))


def brute_majorized(x, y, tol=1e-10):
    x, y = sorted(x, reverse=True), sorted(y, reverse=True)
    return all(sum(x[: k + 1]) <= sum(y[: k + 1]) + tol for k in range(len(x)))


def test_basic_verdicts():
    prod = validate_state(np.eye(8)[0], (2, 2, 2))
    cut = parse_partition("A|BC")
    assert majorization_check(ghz(3), ghz(3), cut).majorized
    assert majorization_check(ghz(3), prod, cut).majorized
    v = majorization_check(prod, ghz(3), cut)
    assert not v.majorized and v.first_violation_index == 0
    with pytest.raises(DimensionMismatch):
        majorization_check(ghz(3), ghz(4), cut)


@given(prob, prob)
def test_is_majorized_matches_prefix_oracle(x, y):
    if len(x) == len(y):
        assert is_majorized(x, y)[0] == brute_majorized(x, y)


@given(prob, prob, prob)
def test_majorization_reflexive_transitive(x, y, z):
    assert is_majorized(x, x)[0]
    if len(x) == len(y) == len(z) and is_majorized(x, y, 0)[0] and is_majorized(y, z, 0)[0]:
        assert is_majorized(x, z, 1e-12)[0]


def test_ghz_to_generalized_ghz():
    r = monotonicity_probe(ghz(3), generalized_ghz(np.sqrt(1 / 3)))
    assert r.hypothesis and r.consistent
    gaps = {name: (a, b) for name, a, b, _ in r.checks}
    assert gaps["gap[A|BC]"] == pytest.approx((1.0, 2 / 3))
    assert r.fill is not None


def test_identical_states_trivially_consistent():
    s = w_state(3)
    r = monotonicity_probe(s, s)
    assert r.hypothesis and r.consistent
    assert all(v.majorized for v in r.verdicts)


def test_probe_on_random_filtered_pairs():
    rng = np.random.default_rng(11)
    kept = 0
    while kept < 100:
        a, b = build_schmidt(random_schmidt(rng)), build_schmidt(random_schmidt(rng))
        r = monotonicity_probe(a, b)
        if not r.hypothesis:
            continue
        kept += 1
        assert r.consistent, r.violations


def test_single_party_cuts():
    assert len(single_party_cuts(4)) == 4
    assert len(single_party_cuts(3)) == 3


def test_complete_measure_ghz4():
    rep = complete_measure_check(ghz(4), roof_budget=50)
    assert rep.ok
    assert rep.full_gap == pytest.approx(2.0)
    assert set(rep.marginal) == {c for r in (2, 3) for c in itertools.combinations(range(4), r)}
    assert all(status in ("pass", "inconclusive") for _, status in rep.marginal.values())


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6))
def test_complete_measure_random(seed):
    s = random_state((2, 2, 2, 2), np.random.default_rng(seed))
    rep = complete_measure_check(s, roof_budget=20)
    assert rep.ok


def test_fill_scan_is_data_only():
    out = fill_scenario_scan(200, seed=1)
    assert isinstance(out, list)
    for sc in out:
        assert all(b < a for a, b in zip(sc.psi_gaps, sc.phi_gaps))
        assert sc.phi_fill > sc.psi_fill
