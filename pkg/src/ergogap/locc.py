"""Majorization-based LOCC checks and property harnesses.

A deterministic pure-state conversion ``psi -> phi`` under LOCC is possible
across a bipartite cut iff the marginal spectrum of ``psi`` is majorized by
that of ``phi``. Requiring this on every single-party cut is used here as the
practical LOCC-compatibility filter.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .ergotropy import GapEngine
from .errors import DimensionMismatch
from .linalg import partial_trace
from .measures import delta_avg, delta_fill, delta_min, delta_volume
from .model import LocalHamiltonian, Partition, StateVector
from .partitions import bipartitions, format_partition, k_partitions, refinements

MAJ_TOL = 1e-10
MONO_TOL = 1e-9


@dataclass(frozen=True)
class MajorizationVerdict:
    cut: Partition
    psi_spectrum: tuple[float, ...]
    phi_spectrum: tuple[float, ...]
    majorized: bool
    first_violation_index: int | None = None


def is_majorized(x, y, tol: float = MAJ_TOL) -> tuple[bool, int | None]:
    """Whether ``x`` is majorized by ``y`` (prefix sums of sorted ``x`` never exceed ``y``'s).

    Returns the verdict and the first failing prefix index.
    """
    x = np.sort(np.asarray(x, dtype=float))[::-1]
    y = np.sort(np.asarray(y, dtype=float))[::-1]
    size = max(x.size, y.size)
    x = np.pad(x, (0, size - x.size))
    y = np.pad(y, (0, size - y.size))
    bad = np.nonzero(np.cumsum(x) > np.cumsum(y) + tol)[0]
    if bad.size:
        return False, int(bad[0])
    return True, None


def cut_spectrum(state: StateVector, cut: Partition) -> np.ndarray:
    """Descending marginal spectrum on the smaller side of a bipartition."""
    side = min(cut.blocks, key=lambda b: (int(np.prod([state.dims[i] for i in b])), b))
    return partial_trace(state, side).spectrum()


def majorization_check(psi: StateVector, phi: StateVector, cut: Partition) -> MajorizationVerdict:
    """Nielsen criterion for ``psi -> phi`` across ``cut``."""
    if psi.dims != phi.dims:
        raise DimensionMismatch(f"states have dims {list(psi.dims)} and {list(phi.dims)}")
    lp, lf = cut_spectrum(psi, cut), cut_spectrum(phi, cut)
    ok, idx = is_majorized(lp, lf)
    return MajorizationVerdict(cut, tuple(map(float, lp)), tuple(map(float, lf)), ok, idx)


def single_party_cuts(n: int) -> list[Partition]:
    return [p for p in bipartitions(n) if min(len(b) for b in p.blocks) == 1]


@dataclass
class MonotonicityReport:
    verdicts: list[MajorizationVerdict]
    hypothesis: bool
    checks: list[tuple[str, float, float, bool]] = field(default_factory=list)
    fill: tuple[float, float] | None = None

    @property
    def violations(self) -> list[tuple[str, float, float, bool]]:
        return [c for c in self.checks if not c[3]]

    @property
    def consistent(self) -> bool:
        return not self.violations


def monotonicity_probe(psi: StateVector, phi: StateVector, h: LocalHamiltonian | None = None) -> MonotonicityReport:
    """Check that monotones do not increase when ``psi -> phi`` passes the filter.

    When every single-party cut is majorized, asserts the fully separable gap
    and every bipartite gap whose own cut is majorized are non-increasing;
    when all bipartite cuts are majorized, also the genuine measures
    (minimum, average, volume). The ergotropic fill is recorded, not asserted.
    """
    if psi.dims != phi.dims:
        raise DimensionMismatch(f"states have dims {list(psi.dims)} and {list(phi.dims)}")
    n = psi.n
    cuts = bipartitions(n)
    verdicts = [majorization_check(psi, phi, c) for c in cuts]
    singles = {p for p in single_party_cuts(n)}
    hypothesis = all(v.majorized for v in verdicts if v.cut in singles)
    report = MonotonicityReport(verdicts, hypothesis)
    if not hypothesis:
        return report

    ep, ef = GapEngine(psi, h), GapEngine(phi, h)

    def check(name, a, b):
        report.checks.append((name, a, b, a >= b - MONO_TOL))

    full = k_partitions(n, n)[0]
    check("full_gap", ep.gap(full).gap, ef.gap(full).gap)
    gp, gf = [], []
    for v in verdicts:
        a, b = ep.gap(v.cut).gap, ef.gap(v.cut).gap
        gp.append(a)
        gf.append(b)
        if v.majorized:
            check(f"gap[{format_partition(v.cut)}]", a, b)
    if all(v.majorized for v in verdicts):
        check("delta_min", delta_min(gp), delta_min(gf))
        check("delta_avg", delta_avg(gp), delta_avg(gf))
        check("delta_vol", delta_volume(gp), delta_volume(gf))
    if n == 3:
        report.fill = (delta_fill(gp), delta_fill(gf))
    return report


@dataclass
class CompletenessReport:
    full_gap: float
    c4_violations: list[tuple[str, float]] = field(default_factory=list)
    refinement_violations: list[tuple[str, str]] = field(default_factory=list)
    permutation_violations: list[tuple[tuple[int, ...], float]] = field(default_factory=list)
    marginal: dict[tuple[int, ...], tuple[float, str]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not (self.c4_violations or self.refinement_violations or self.permutation_violations)


def _relabelings(n: int) -> list[tuple[int, ...]]:
    """All transpositions plus the full reversal; they generate every relabeling."""
    out = []
    for i, j in combinations(range(n), 2):
        order = list(range(n))
        order[i], order[j] = j, i
        out.append(tuple(order))
    out.append(tuple(reversed(range(n))))
    return out


def complete_measure_check(
    state: StateVector,
    h: LocalHamiltonian | None = None,
    roof_budget: int = 100,
    seed: int = 0,
) -> CompletenessReport:
    """Executable form of the completeness conditions for the fully separable gap.

    * every k-partition gap is bounded by the fully separable gap, and gaps
      never drop under a one-step refinement;
    * the fully separable gap is invariant under party relabeling;
    * for every marginal on 2..n-1 parties, a convex-roof upper bound of its
      fully separable gap at or below the full gap passes; a larger bound is
      recorded as inconclusive.
    """
    from .roof import roof_upper_bound

    n = state.n
    engine = GapEngine(state, h)
    hh = engine.h
    full = engine.all_gaps(n)[0].gap
    report = CompletenessReport(full)
    for k in range(2, n + 1):
        for p in k_partitions(n, k):
            g = engine.gap(p).gap
            if g > full + MONO_TOL:
                report.c4_violations.append((format_partition(p), g))
            if k < n and any(len(b) > 1 for b in p.blocks):
                for q in refinements(p):
                    if engine.gap(q).gap < g - MONO_TOL:
                        report.refinement_violations.append((format_partition(p), format_partition(q)))
    for order in _relabelings(n):
        other = GapEngine(state.permuted(order), hh.permuted(order)).all_gaps(n)[0].gap
        if abs(other - full) > MONO_TOL:
            report.permutation_violations.append((order, other))
    for size in range(2, n):
        for subset in combinations(range(n), size):
            rho = partial_trace(state, subset)
            est = roof_upper_bound(rho, "full", hh.restrict(subset), budget=roof_budget, seed=seed)
            status = "pass" if est.value <= full + MONO_TOL else "inconclusive"
            report.marginal[subset] = (est.value, status)
    return report


@dataclass(frozen=True)
class FillScenario:
    psi: tuple[float, ...]
    phi: tuple[float, ...]
    psi_gaps: tuple[float, float, float]
    phi_gaps: tuple[float, float, float]
    psi_fill: float
    phi_fill: float
    majorized: bool


def fill_scenario_scan(samples: int = 1000, seed: int = 0) -> list[FillScenario]:
    """Collect three-qubit pairs where every gap shrinks but the fill grows.

    Such pairs are exactly where fill monotonicity could fail. They are
    returned as data together with whether the pair also passes the
    single-party majorization filter; nothing is asserted.
    """
    from .states import build_schmidt, closed_form_gaps, random_schmidt

    rng = np.random.default_rng(seed)
    found = []
    for _ in range(samples):
        a, b = random_schmidt(rng), random_schmidt(rng)
        ga, gb = closed_form_gaps(a), closed_form_gaps(b)
        if ga < gb:
            a, b, ga, gb = b, a, gb, ga
        fa, fb = delta_fill(ga), delta_fill(gb)
        if all(y < x - MONO_TOL for x, y in zip(ga, gb)) and fb > fa + MONO_TOL:
            psi, phi = build_schmidt(a), build_schmidt(b)
            ok = all(majorization_check(psi, phi, c).majorized for c in single_party_cuts(3))
            found.append(FillScenario(a.lambdas + (a.phi,), b.lambdas + (b.phi,), ga, gb, fa, fb, ok))
    return found
