"""Heuristic convex-roof upper bounds for mixed states.

Every pure-state decomposition of a rank-``r`` operator
``rho = B B^dagger`` (``B = V sqrt(w)`` from the eigendecomposition) has the
form ``psi_j = sum_i U[j, i] B[:, i]`` with ``U`` an ``m x r`` isometry. The
search walks the unitary group ``U(m)`` (first ``r`` columns used) by
Cayley-transform steps with annealed acceptance and an adaptive step size,
keeping the best decomposition seen. Any decomposition it reports is a
genuine decomposition, so the value is always an upper bound on the roof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BadSelector, RankTooLarge, WrongPartyCount
from .ergotropy import GapEngine, group_energies
from .linalg import reduce_pure
from .measures import delta_avg, delta_fill, delta_min, delta_volume
from .model import DensityOperator, LocalHamiltonian, MixedState, StateVector, default_hamiltonian
from .model import _frozen
from .partitions import k_partitions

MAX_RANK = 8
RANK_TOL = 1e-12
DROP_TOL = 1e-14

SELECTORS = ("min", "avg", "vol", "fill", "full")
_ALIASES = {"delta_min": "min", "delta_avg": "avg", "delta_vol": "vol", "delta_volume": "vol",
            "delta_fill": "fill", "delta_n": "full"}


@dataclass(frozen=True)
class RoofEstimate:
    """Upper bound on a convex-roof measure, with the decomposition achieving it."""

    value: float
    decomposition: tuple[tuple[float, StateVector], ...]
    iterations: int
    converged: bool
    measure: str = "min"
    history: tuple[float, ...] = ()
    kind: str = "upper bound"

    def density(self) -> np.ndarray:
        d = self.decomposition[0][1].dim
        rho = np.zeros((d, d), dtype=complex)
        for p, s in self.decomposition:
            rho += p * np.outer(s.amplitudes, s.amplitudes.conj())
        return rho


class PureMeasure:
    """Fast evaluator of a gap-based measure on pure amplitude vectors.

    Uses the pure-state identity gap = sum of block passive energies, with
    block results cached per call.
    """

    def __init__(self, selector: str, dims, h: LocalHamiltonian | None = None, k: int = 2):
        selector = _ALIASES.get(selector, selector)
        if selector not in SELECTORS:
            raise BadSelector(f"unknown measure {selector!r}; choose from {SELECTORS}")
        self.selector = selector
        self.dims = tuple(dims)
        n = len(self.dims)
        self.h = h or default_hamiltonian(self.dims)
        if selector == "full":
            k = n
        if selector == "fill" and (n != 3 or k != 2):
            raise WrongPartyCount("ergotropic fill needs three parties and k=2")
        self.k = k
        self.partitions = k_partitions(n, k)
        blocks = {b for p in self.partitions for b in p.blocks}
        self.ladders = {b: np.sort(group_energies(self.h, b)) for b in blocks}
        self._reduce: Callable[[list[float]], float] = {
            "min": delta_min, "avg": delta_avg, "vol": delta_volume,
            "fill": delta_fill, "full": lambda g: g[0],
        }[selector]

    def gaps(self, psi: np.ndarray) -> list[float]:
        passive = {}
        for b, ladder in self.ladders.items():
            rho = reduce_pure(psi, self.dims, b)
            lam = np.clip(np.linalg.eigvalsh(rho)[::-1], 0.0, None)
            passive[b] = float(np.dot(lam, ladder))
        return [max(0.0, sum(passive[b] for b in p.blocks)) for p in self.partitions]

    def __call__(self, psi: np.ndarray) -> float:
        return float(self._reduce(self.gaps(psi)))

    def exact(self, state: StateVector) -> float:
        """Value through the gap engine, identical to the pure-state report."""
        gaps = [r.gap for r in GapEngine(state, self.h).all_gaps(self.k)]
        return float(self._reduce(gaps))


def _as_operator(rho) -> tuple[np.ndarray, tuple[int, ...], list[tuple[float, np.ndarray]]]:
    if isinstance(rho, StateVector):
        return rho.density().matrix, rho.dims, [(1.0, np.asarray(rho.amplitudes))]
    if isinstance(rho, MixedState):
        terms = [(p, np.asarray(s.amplitudes)) for p, s in rho.terms]
        return rho.density().matrix, rho.dims, terms
    if isinstance(rho, DensityOperator):
        return np.asarray(rho.matrix), rho.dims, []
    raise TypeError(f"cannot estimate a roof for {type(rho).__name__}")


def _cayley(h: np.ndarray) -> np.ndarray:
    eye = np.eye(h.shape[0])
    return np.linalg.solve(eye - 0.5j * h, eye + 0.5j * h)


def _complete_unitary(cols: np.ndarray, m: int, rng) -> np.ndarray:
    """Extend orthonormal columns to an ``m x m`` unitary."""
    extra = rng.normal(size=(m, m - cols.shape[1])) + 1j * rng.normal(size=(m, m - cols.shape[1]))
    q, r = np.linalg.qr(np.hstack([cols, extra]))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    q[:, : cols.shape[1]] = cols
    return q


class _Search:
    def __init__(self, basis: np.ndarray, measure: PureMeasure, m: int):
        self.basis = basis  # d x r, columns sqrt(w_i) v_i
        self.measure = measure
        self.m = m
        self.r = basis.shape[1]

    def vectors(self, w: np.ndarray) -> np.ndarray:
        return self.basis @ w[:, : self.r].T

    def evaluate(self, w: np.ndarray) -> float:
        vecs = self.vectors(w)
        total = 0.0
        for j in range(vecs.shape[1]):
            p = float(np.vdot(vecs[:, j], vecs[:, j]).real)
            if p > DROP_TOL:
                total += p * self.measure(vecs[:, j] / math.sqrt(p))
        return total

    def decomposition(self, w: np.ndarray) -> list[tuple[float, np.ndarray]]:
        vecs = self.vectors(w)
        out = []
        for j in range(vecs.shape[1]):
            p = float(np.vdot(vecs[:, j], vecs[:, j]).real)
            if p > DROP_TOL:
                out.append((p, vecs[:, j] / math.sqrt(p)))
        return out

    def anneal(self, w: np.ndarray, budget: int, rng, temperature: float = 1e-2):
        """Returns (best_w, best_value, history, converged)."""
        cur_w, cur = w, self.evaluate(w)
        best_w, best = cur_w, cur
        sigma = 0.3
        history = []
        last_gain = 0
        for it in range(budget):
            g = rng.normal(size=(self.m, self.m)) + 1j * rng.normal(size=(self.m, self.m))
            h = (g + g.conj().T) / (2.0 * math.sqrt(self.m))
            cand_w = cur_w @ _cayley(sigma * h)
            cand = self.evaluate(cand_w)
            t = temperature * 0.995**it
            if cand <= cur or (t > 0 and rng.random() < math.exp(-(cand - cur) / t)):
                cur_w, cur = cand_w, cand
                sigma = min(1.0, sigma * 1.3)
            else:
                sigma = max(1e-12, sigma * 0.93)
            if cur < best:
                if best - cur > 1e-12:
                    last_gain = it
                best_w, best = cur_w, cur
            history.append(best)
            if best <= 0.0:
                break
        window = max(100, budget // 5)
        converged = best <= 1e-12 or (len(history) - 1 - last_gain) >= window
        return best_w, best, history, converged


def roof_upper_bound(
    rho,
    measure: str = "min",
    h: LocalHamiltonian | None = None,
    budget: int = 1000,
    seed: int = 0,
    k: int = 2,
    restarts: int = 1,
    initial: str = "auto",
) -> RoofEstimate:
    """Search decompositions of ``rho`` for a small average pure-state measure.

    Parameters
    ----------
    rho : StateVector, MixedState or DensityOperator
        Pure input returns the pure-state value with a one-term decomposition.
        A :class:`MixedState` contributes its own ensemble as a starting
        candidate.
    measure : {"min", "avg", "vol", "fill", "full"}
        Pure-state measure averaged over the decomposition; ``"full"`` is the
        fully separable gap. ``k`` selects the block count for min/avg/vol.
    budget : int
        Annealing steps per restart.
    seed : int
        Seed for all randomness; equal seeds give identical results.
    initial : {"auto", "random"}
        ``"auto"`` starts from the best of the eigendecomposition and any
        supplied ensemble; ``"random"`` starts every restart from a random
        isometry.

    Returns
    -------
    RoofEstimate
        ``value`` is an upper bound on the convex roof, never an exact value.
    """
    mat, dims, given = _as_operator(rho)
    pm = PureMeasure(measure, dims, h, k)
    w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    keep = w > RANK_TOL
    r = int(np.sum(keep))
    if r > MAX_RANK:
        raise RankTooLarge(f"rank {r} exceeds the supported maximum {MAX_RANK}")

    def wrap(pairs, iterations, converged, history):
        dec = tuple((float(p), StateVector(tuple(dims), _frozen(psi), "roof term")) for p, psi in pairs)
        value = float(sum(p * pm(s.amplitudes) for p, s in dec))
        return RoofEstimate(value, dec, iterations, converged, pm.selector, tuple(history))

    if r == 1:
        if isinstance(rho, StateVector):
            state = rho
        else:
            psi = v[:, -1]
            phase = psi[np.argmax(np.abs(psi))]
            state = StateVector(tuple(dims), _frozen(psi * (abs(phase) / phase)), "roof term")
        return RoofEstimate(pm.exact(state), ((1.0, state),), 0, True, pm.selector, ())

    basis = v[:, keep] * np.sqrt(w[keep])
    m = r * r
    search = _Search(basis, pm, m)
    root = np.random.SeedSequence(seed)
    streams = [np.random.default_rng(s) for s in root.spawn(max(1, restarts))]

    seeds = [np.eye(m, dtype=complex)]
    direct_candidates = []
    if given:
        # coordinates of the supplied ensemble in the scaled eigenbasis
        coords = np.array([math.sqrt(p) * (v[:, keep].conj().T @ psi) / np.sqrt(w[keep]) for p, psi in given])
        if len(given) <= m and np.allclose(coords.conj().T @ coords, np.eye(r), atol=1e-8):
            padded = np.zeros((m, r), dtype=complex)
            padded[: len(given)] = coords
            seeds.append(_complete_unitary(padded, m, streams[0]))
        else:
            direct_candidates.append([(p, np.asarray(psi)) for p, psi in given])

    results = []
    steps = 0
    for idx, rng in enumerate(streams):
        if initial == "random":
            start = _complete_unitary(np.zeros((m, 0), dtype=complex), m, rng)
        elif initial == "auto":
            start = min(seeds, key=search.evaluate) if idx == 0 else _complete_unitary(
                np.zeros((m, 0), dtype=complex), m, rng)
        else:
            raise ValueError(f"unknown initial mode {initial!r}")
        best_w, best, history, converged = search.anneal(start, budget, rng)
        steps += len(history)
        results.append((best, idx, best_w, history, converged))
    best, _, best_w, history, converged = min(results, key=lambda t: (t[0], t[1]))
    pairs = search.decomposition(best_w)
    for cand in direct_candidates:
        value = sum(p * pm(psi) for p, psi in cand)
        if value < best:
            best, pairs = value, cand
    return wrap(pairs, steps, converged, history)
