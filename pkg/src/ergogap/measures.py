"""Genuine and k-nonseparability measures built from ergotropic gaps.

Gap-sequence measures (``delta_*``) take plain sequences of gap values so
they can be reused on any family of partitions. A gap at or below
``ZERO_TOL`` counts as zero for the step gate in :func:`delta_avg` and for
:func:`delta_volume`.

The concurrence comparators (``concurrence``, ``gmc``,
``concurrence_fill``) are purity-based and do not depend on the
Hamiltonian.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .ergotropy import GapEngine, GapReport
from .errors import EmptyGaps, OutOfRange, WrongArity, WrongPartyCount
from .linalg import reduce_pure
from .model import LocalHamiltonian, Partition, StateVector
from .partitions import bipartitions

ZERO_TOL = 1e-9


def _gaps(gaps: Sequence[float]) -> np.ndarray:
    g = np.asarray([float(x) for x in gaps], dtype=float)
    if g.size == 0:
        raise EmptyGaps("at least one gap is required")
    return g


def step(gaps: Sequence[float]) -> int:
    """1 when every gap is nonzero, else 0 (the product gate)."""
    return int(bool(np.all(_gaps(gaps) > ZERO_TOL)))


def delta_min(gaps: Sequence[float]) -> float:
    """Smallest gap over the partitions considered."""
    m = float(np.min(_gaps(gaps)))
    return 0.0 if m <= ZERO_TOL else m


def delta_avg(gaps: Sequence[float]) -> float:
    """Mean gap, gated to zero when any single gap vanishes."""
    g = _gaps(gaps)
    return float(g.mean()) if step(g) else 0.0


def delta_volume(gaps: Sequence[float]) -> float:
    """Geometric mean of the gaps (normalized hyper-cuboid volume)."""
    g = _gaps(gaps)
    if not step(g):
        return 0.0
    return float(math.exp(np.mean(np.log(g))))


def delta_fill(gaps: Sequence[float]) -> float:
    """Heron-type area from exactly three bipartite gaps.

    ``(1/sqrt 3) * sqrt((sum g)^2 - 2 sum g^2)``; the radicand is clamped at
    zero against rounding.
    """
    g = np.asarray([float(x) for x in gaps], dtype=float)
    if g.size != 3:
        raise WrongArity(f"ergotropic fill needs exactly three gaps, got {g.size}")
    radicand = g.sum() ** 2 - 2.0 * np.sum(g * g)
    return float(math.sqrt(max(0.0, radicand)) / math.sqrt(3.0))


# --------------------------------------------------------------- concurrence


def concurrence(state: StateVector, cut: Partition) -> float:
    """Pure-state bipartite concurrence ``sqrt(2 (1 - Tr rho_X^2))``."""
    if cut.k != 2 or cut.n != state.n:
        raise WrongArity(f"concurrence needs a bipartition of {state.n} parties, got {cut}")
    rho = reduce_pure(state.amplitudes, state.dims, cut.blocks[0])
    purity = float(np.sum(np.abs(rho) ** 2))
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def _require_three_qubits(state: StateVector, what: str) -> None:
    if tuple(state.dims) != (2, 2, 2):
        raise WrongPartyCount(f"{what} is defined for three qubits, got dims {list(state.dims)}")


def _squared_concurrences(state: StateVector) -> list[float]:
    return [concurrence(state, cut) ** 2 for cut in bipartitions(state.n)]


def gmc(state: StateVector) -> float:
    """Genuinely multipartite concurrence: the smallest squared concurrence over cuts."""
    _require_three_qubits(state, "GMC")
    return float(min(_squared_concurrences(state)))


def min_concurrence(state: StateVector) -> float:
    """Smallest (unsquared) concurrence over the three cuts.

    This is the value the published comparison table prints in its GMC
    column; :func:`gmc` returns the squared quantity.
    """
    _require_three_qubits(state, "GMC")
    return float(math.sqrt(min(_squared_concurrences(state))))


def gap_concurrence_relation(delta: float) -> float:
    """Concurrence of a qubit cut from its gap: ``sqrt(delta (2 - delta))``."""
    if not -ZERO_TOL <= delta <= 1.0 + ZERO_TOL:
        raise OutOfRange(f"gap {delta} outside [0, 1]")
    d = min(max(delta, 0.0), 1.0)
    return math.sqrt(d * (2.0 - d))


def gap_from_concurrence(c: float) -> float:
    """Inverse of :func:`gap_concurrence_relation`: ``1 - sqrt(1 - c^2)``."""
    if not -ZERO_TOL <= c <= 1.0 + ZERO_TOL:
        raise OutOfRange(f"concurrence {c} outside [0, 1]")
    c = min(max(c, 0.0), 1.0)
    return 1.0 - math.sqrt(1.0 - c * c)


def concurrence_fill(state: StateVector) -> float:
    """Concurrence fill of a three-qubit pure state.

    Heron area of the triangle with squared concurrences as sides,
    normalized to one for GHZ: ``[(16/3) Q (Q-a)(Q-b)(Q-c)]^(1/4)`` with
    ``Q`` the half perimeter.
    """
    _require_three_qubits(state, "concurrence fill")
    sides = _squared_concurrences(state)
    q = 0.5 * sum(sides)
    prod = q * np.prod([q - s for s in sides])
    return float((16.0 / 3.0 * max(0.0, prod)) ** 0.25)


# -------------------------------------------------------------------- report


@dataclass
class MeasureReport:
    label: str
    k: int
    gaps: tuple[GapReport, ...]
    delta_min: float
    delta_avg: float
    delta_vol: float
    delta_fill: float | None = None
    gmc: float | None = None
    gmc_printed: float | None = None
    concurrence_fill: float | None = None
    full_gap: float | None = None
    notes: list[str] = field(default_factory=list)

    def values(self) -> dict:
        """Scalar summary without the per-partition table."""
        d = asdict(self)
        d.pop("gaps")
        d.pop("notes")
        return d


def measure_report(state: StateVector, h: LocalHamiltonian | None = None, k: int = 2) -> MeasureReport:
    """All applicable measures for a pure state at block count ``k``.

    Three-qubit-only comparators (ergotropic fill at ``k=2``, GMC,
    concurrence fill) are ``None`` for other systems.
    """
    engine = GapEngine(state, h)
    reports = engine.all_gaps(k)
    g = [r.gap for r in reports]
    report = MeasureReport(
        label=state.label,
        k=k,
        gaps=reports,
        delta_min=delta_min(g),
        delta_avg=delta_avg(g),
        delta_vol=delta_volume(g),
        notes=list(state.notes) + list(engine.h.notes),
    )
    if state.n >= 2 and k != state.n:
        report.full_gap = engine.all_gaps(state.n)[0].gap
    else:
        report.full_gap = reports[0].gap
    if state.n == 3 and k == 2:
        report.delta_fill = delta_fill(g)
    if tuple(state.dims) == (2, 2, 2):
        report.gmc = gmc(state)
        report.gmc_printed = min_concurrence(state)
        report.concurrence_fill = concurrence_fill(state)
    return report
