import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ergogap.errors import BadK, BadPartition, NoRefinableBlock, TooFewParties
from ergogap.model import Partition
from ergogap.partitions import (
    bipartitions,
    coarsen,
    format_partition,
    k_partitions,
    parse_partition,
    refinements,
    restricted_growth_strings,
    stirling2,
)


def brute_partitions(n, k):
    """Set partitions by labelling every party with a block id and deduplicating."""
    seen = set()
    for labels in itertools.product(range(k), repeat=n):
        if len(set(labels)) != k:
            continue
        blocks = [[i for i in range(n) if labels[i] == b] for b in range(k)]
        seen.add(Partition.of(blocks, n))
    return seen


def stirling_explicit(n, k):
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)


@pytest.mark.parametrize("n", range(2, 7))
def test_k_partitions_match_brute_force(n):
    for k in range(2, n + 1):
        ours = k_partitions(n, k)
        assert len(set(ours)) == len(ours)
        assert set(ours) == brute_partitions(n, k)


@pytest.mark.parametrize("n", range(1, 9))
def test_stirling_counts(n):
    for k in range(1, n + 1):
        assert stirling2(n, k) == stirling_explicit(n, k)
        if k >= 2 and n >= 2:
            assert len(k_partitions(n, k)) == stirling2(n, k)


def test_bell_numbers_from_rgs():
    bell = [1, 1, 2, 5, 15, 52, 203, 877]
    for n in range(1, 8):
        assert sum(1 for _ in restricted_growth_strings(n)) == bell[n]


def test_canonical_order():
    assert [format_partition(p) for p in bipartitions(3)] == ["A|BC", "AC|B", "AB|C"]
    assert k_partitions(4, 4)[0].blocks == ((0,), (1,), (2,), (3,))


def test_k_partition_errors():
    with pytest.raises(TooFewParties):
        k_partitions(1, 1)
    with pytest.raises(BadK):
        k_partitions(3, 4)
    with pytest.raises(BadK):
        k_partitions(3, 1)


def test_refinements_and_coarsen():
    p = parse_partition("AB|CD")
    refs = refinements(p)
    assert set(refs) == {parse_partition("A|B|CD"), parse_partition("AB|C|D")}
    for q in refs:
        assert q.k == p.k + 1
    assert coarsen(parse_partition("A|B|CD"), 0, 1) == p
    with pytest.raises(NoRefinableBlock):
        refinements(parse_partition("A|B|C"))


def test_refinement_counts_brute():
    # a block of size s splits into 2^(s-1) - 1 unordered pairs
    p = parse_partition("ABC|DE")
    assert len(refinements(p)) == 3 + 1


@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n))))
def test_format_parse_round_trip(nk):
    n, k = nk
    for p in k_partitions(n, k):
        assert parse_partition(format_partition(p), n) == p
        assert parse_partition(format_partition(p, "indices"), n) == p


def test_parse_errors():
    for text in ["A||B", "A|B?", "0|1"]:
        with pytest.raises(BadPartition):
            parse_partition(text)
    with pytest.raises(BadPartition):
        parse_partition("A|C", 3)
