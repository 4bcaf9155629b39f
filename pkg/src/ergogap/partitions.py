"""Enumeration of set partitions of parties.

Partitions come out in a fixed canonical order: blocks inside a partition
are ordered by smallest element, and partitions are sorted by their blocks
ranked (size, members). For three parties and two blocks this yields the
familiar ``A|BC, AC|B, AB|C`` sequence (the 1-vs-rest cuts for A, B, C).
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator

from .errors import BadK, BadPartition, NoRefinableBlock, TooFewParties
from .model import Partition

LETTERS = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All restricted growth strings of length ``n`` in lexicographic order.

    ``a[0] = 0`` and ``a[i] <= 1 + max(a[:i])``; each string labels the block
    of every party, so strings and set partitions are in bijection.
    """
    if n <= 0:
        return
    a = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield tuple(a)
            return
        for v in range(top + 2):
            a[i] = v
            yield from rec(i + 1, max(top, v))

    yield from rec(1, 0)


def _blocks_from_rgs(rgs: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    k = max(rgs) + 1
    blocks: list[list[int]] = [[] for _ in range(k)]
    for party, b in enumerate(rgs):
        blocks[b].append(party)
    return tuple(tuple(b) for b in blocks)


def order_key(p: Partition):
    ranked = sorted(p.blocks, key=lambda b: (len(b), b))
    return tuple((len(b), b) for b in ranked)


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind via the standard recurrence."""
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def _k_partitions(n: int, k: int) -> tuple[Partition, ...]:
    parts = [Partition(_blocks_from_rgs(r)) for r in restricted_growth_strings(n) if max(r) + 1 == k]
    return tuple(sorted(parts, key=order_key))


def k_partitions(n: int, k: int) -> tuple[Partition, ...]:
    """All partitions of parties ``0..n-1`` into exactly ``k`` blocks."""
    if n < 2:
        raise TooFewParties(f"need at least two parties, got {n}")
    if k < 2 or k > n:
        raise BadK(f"block count k={k} must satisfy 2 <= k <= n={n}")
    return _k_partitions(n, k)


def bipartitions(n: int) -> tuple[Partition, ...]:
    """The ``2**(n-1) - 1`` cuts ``X|X^C`` of ``n`` parties, each counted once."""
    if n < 2:
        raise TooFewParties(f"need at least two parties, got {n}")
    return _k_partitions(n, 2)


def refinements(p: Partition) -> tuple[Partition, ...]:
    """Partitions obtained by splitting exactly one block of ``p`` in two."""
    out = set()
    for i, block in enumerate(p.blocks):
        if len(block) < 2:
            continue
        head, rest = block[0], block[1:]
        # The part holding ``head`` determines the split; this visits each once.
        for size in range(0, len(rest)):
            for extra in combinations(rest, size):
                left = (head,) + extra
                right = tuple(x for x in rest if x not in extra)
                blocks = list(p.blocks[:i]) + [left, right] + list(p.blocks[i + 1:])
                out.add(Partition.of(blocks, p.n))
    if not out:
        raise NoRefinableBlock(f"every block of {format_partition(p)} is a singleton")
    return tuple(sorted(out, key=order_key))


def coarsen(p: Partition, i: int, j: int) -> Partition:
    """Merge blocks ``i`` and ``j`` of ``p``."""
    merged = p.blocks[i] + p.blocks[j]
    rest = [b for t, b in enumerate(p.blocks) if t not in (i, j)]
    return Partition.of(rest + [merged], p.n)


def format_partition(p: Partition, style: str = "letters") -> str:
    """Render as ``"AB|C"`` (letters) or ``"1,2|3"`` (1-based indices)."""
    if style == "letters" and p.n <= len(LETTERS):
        return "|".join("".join(LETTERS[i] for i in b) for b in p.blocks)
    return "|".join(",".join(str(i + 1) for i in b) for b in p.blocks)


def parse_partition(text: str, n: int | None = None) -> Partition:
    """Parse ``"AB|C"`` or ``"1,2|3"`` into a canonical :class:`Partition`."""
    blocks = []
    for chunk in text.strip().split("|"):
        chunk = chunk.strip()
        if not chunk:
            raise BadPartition(f"empty block in {text!r}")
        if chunk.replace(",", "").replace(" ", "").isdigit():
            blocks.append([int(x) - 1 for x in chunk.replace(" ", "").split(",") if x])
        elif chunk.isalpha():
            blocks.append([LETTERS.index(c.upper()) for c in chunk])
        else:
            raise BadPartition(f"cannot parse block {chunk!r} in {text!r}")
    if any(i < 0 for b in blocks for i in b):
        raise BadPartition(f"party indices are 1-based in {text!r}")
    return Partition.of(blocks, n)
