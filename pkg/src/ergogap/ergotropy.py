"""Passive states, ergotropy and k-separable ergotropic gaps.

For a non-interacting Hamiltonian ``H = sum_i H_i`` the work extractable
with unitaries acting jointly inside each block of a partition is the sum of
block ergotropies. The gap of a partition is the global ergotropy minus that
sum; for a pure state it equals the sum of the block passive-state energies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from . import linalg
from .errors import (
    BadPartition,
    DimensionMismatch,
    EmptyBlock,
    LengthMismatch,
    NotAProbabilityVector,
    NumericalFailure,
)
from .model import (
    DensityOperator,
    LocalHamiltonian,
    MixedState,
    Partition,
    StateVector,
    default_hamiltonian,
)
from .partitions import k_partitions

ZERO_TOL = 1e-9
PROB_TOL = 1e-9

State = Union[StateVector, DensityOperator, MixedState]


def passive_energy(spectrum: Sequence[float], ladder: Sequence[float]) -> float:
    """Energy of the passive state: largest populations on the lowest levels.

    Both inputs are sorted here (populations descending, energies
    ascending), so callers may pass them in any order. This is the minimum
    of ``sum_i spectrum[pi(i)] * ladder[i]`` over all permutations ``pi``.
    """
    lam = np.asarray(spectrum, dtype=float)
    e = np.asarray(ladder, dtype=float)
    if lam.shape != e.shape or lam.ndim != 1:
        raise LengthMismatch(f"spectrum has {lam.size} entries, ladder {e.size}")
    if np.any(lam < linalg.EIGEN_FLOOR) or abs(lam.sum() - 1.0) > PROB_TOL:
        raise NotAProbabilityVector(f"not a probability vector (sum {lam.sum():.12g}, min {lam.min():.3e})")
    lam = np.sort(np.clip(lam, 0.0, None), kind="stable")[::-1]
    e = np.sort(e, kind="stable")
    return float(np.dot(lam, e))


def group_energies(h: LocalHamiltonian, block: Iterable[int]) -> np.ndarray:
    """Diagonal of the block Hamiltonian in computational-basis order."""
    block = sorted(set(block))
    if not block:
        raise EmptyBlock("a block must contain at least one party")
    out = np.zeros(1)
    for i in block:
        out = np.add.outer(out, np.asarray(h.energies[i])).reshape(-1)
    return out


def group_hamiltonian(h: LocalHamiltonian, block: Iterable[int]) -> np.ndarray:
    """Weakly ascending energy ladder of the block (all level sums)."""
    return np.sort(group_energies(h, block), kind="stable")


def _hamiltonian_for(state, h: LocalHamiltonian | None) -> LocalHamiltonian:
    if h is None:
        return default_hamiltonian(state.dims)
    if h.dims != tuple(state.dims):
        raise DimensionMismatch(f"Hamiltonian dims {list(h.dims)} do not match state dims {list(state.dims)}")
    return h


def ergotropy(rho: DensityOperator, h: LocalHamiltonian | None = None) -> float:
    """Maximal work extractable from ``rho`` by a unitary on all its parties.

    ``h`` covers exactly the parties of ``rho`` (use
    :meth:`LocalHamiltonian.restrict` for marginals).
    """
    h = _hamiltonian_for(rho, h)
    energies = group_energies(h, range(rho.n))
    mean = float(np.dot(np.diag(rho.matrix).real, energies))
    w = mean - passive_energy(rho.spectrum(), energies)
    if w < -ZERO_TOL:
        raise NumericalFailure(f"negative ergotropy {w:.3e}")
    return max(w, 0.0)


@dataclass(frozen=True)
class GapReport:
    partition: Partition
    global_ergotropy: float
    partitioned_ergotropy: float
    gap: float

    def __str__(self) -> str:
        return f"{self.partition}: {self.gap:.6f}"


class GapEngine:
    """Evaluates gaps of one state, caching per-block marginal data.

    Many partitions share blocks, so each block marginal is reduced and
    diagonalized once.
    """

    def __init__(self, state: State, h: LocalHamiltonian | None = None):
        if isinstance(state, MixedState):
            state = state.density()
        self.state = state
        self.h = _hamiltonian_for(state, h)
        self.pure = isinstance(state, StateVector)
        self.global_ergotropy = ergotropy(state.density() if self.pure else state, self.h)
        self._blocks: dict[tuple[int, ...], tuple[float, float]] = {}

    @property
    def n(self) -> int:
        return len(self.state.dims)

    def block(self, block: Iterable[int]) -> tuple[float, float]:
        """(ergotropy, passive energy) of the block marginal."""
        key = tuple(sorted(block))
        if key not in self._blocks:
            rho = linalg.partial_trace(self.state, key)
            energies = group_energies(self.h, key)
            mean = float(np.dot(np.diag(rho.matrix).real, energies))
            passive = passive_energy(rho.spectrum(), energies)
            self._blocks[key] = (mean - passive, passive)
        return self._blocks[key]

    def gap(self, p: Partition) -> GapReport:
        if p.n != self.n:
            raise BadPartition(f"partition {p} covers {p.n} parties, state has {self.n}")
        parts = [self.block(b) for b in p.blocks]
        partitioned = float(sum(w for w, _ in parts))
        gap = self.global_ergotropy - partitioned
        if self.pure:
            direct = float(sum(e for _, e in parts))
            if abs(gap - direct) > ZERO_TOL:
                raise NumericalFailure(
                    f"gap {gap:.12g} disagrees with passive-energy sum {direct:.12g} on {p}"
                )
        if gap < -ZERO_TOL:
            raise NumericalFailure(f"negative gap {gap:.3e} on {p}")
        if gap < 0.0:
            gap, partitioned = 0.0, self.global_ergotropy
        return GapReport(p, self.global_ergotropy, partitioned, gap)

    def all_gaps(self, k: int) -> tuple[GapReport, ...]:
        return tuple(self.gap(p) for p in k_partitions(self.n, k))


def k_gap(state: State, h: LocalHamiltonian | None, p: Partition) -> GapReport:
    """Ergotropic gap of ``state`` for the partition ``p``."""
    return GapEngine(state, h).gap(p)


def all_gaps(state: State, h: LocalHamiltonian | None, k: int) -> tuple[GapReport, ...]:
    """One :class:`GapReport` per k-block partition, in canonical order."""
    return GapEngine(state, h).all_gaps(k)


def gap_values(reports: Iterable[GapReport]) -> list[float]:
    return [r.gap for r in reports]
