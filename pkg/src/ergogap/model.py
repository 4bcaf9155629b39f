"""Validated data model: states, density operators, Hamiltonians, partitions.

Party indices are 0-based throughout the library; the text syntax in
:mod:`ergogap.partitions` renders them as letters ``A, B, C, ...``.
Local Hamiltonians are diagonal in the computational basis, level ``j`` of
party ``i`` carrying energy ``energies[i][j]``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .errors import (
    BadPartition,
    BadProbabilities,
    DecreasingLadder,
    DimensionMismatch,
    NotNormalized,
    TooManyDegenerateGrounds,
    ValidationError,
)

log = logging.getLogger(__name__)

NORM_TOL = 1e-10
RENORM_LIMIT = 1e-6
DEGENERACY_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on parties with dimensions ``dims``."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray
    label: str = ""
    notes: tuple[str, ...] = ()

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def density(self) -> "DensityOperator":
        psi = self.amplitudes
        return DensityOperator._trusted(self.dims, np.outer(psi, psi.conj()))

    def permuted(self, order: Sequence[int]) -> "StateVector":
        """Relabel parties so that new party ``j`` is old party ``order[j]``."""
        order = list(order)
        t = np.transpose(self.tensor(), order)
        dims = tuple(self.dims[i] for i in order)
        return StateVector(dims, _frozen(t.reshape(-1)), self.label, self.notes)

    def with_label(self, label: str) -> "StateVector":
        return StateVector(self.dims, self.amplitudes, label, self.notes)

    def __repr__(self) -> str:
        return f"StateVector(dims={self.dims}, label={self.label!r})"


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite operator on ``dims``."""

    dims: tuple[int, ...]
    matrix: np.ndarray
    label: str = ""

    @classmethod
    def _trusted(cls, dims, matrix, label: str = "") -> "DensityOperator":
        return cls(tuple(int(d) for d in dims), _frozen(np.asarray(matrix, dtype=complex)), label)

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    def spectrum(self) -> np.ndarray:
        """Eigenvalues, descending, with rounding-level negatives clamped."""
        return linalg.clamp_spectrum(linalg.hermitian_eigenvalues(self.matrix))

    def __repr__(self) -> str:
        return f"DensityOperator(dims={self.dims}, label={self.label!r})"


@dataclass(frozen=True)
class LocalHamiltonian:
    """Per-party ascending energy ladders, each starting at zero."""

    energies: tuple[tuple[float, ...], ...]
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def n(self) -> int:
        return len(self.energies)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(e) for e in self.energies)

    def restrict(self, parties: Iterable[int]) -> "LocalHamiltonian":
        return LocalHamiltonian(tuple(self.energies[i] for i in sorted(parties)))

    def permuted(self, order: Sequence[int]) -> "LocalHamiltonian":
        return LocalHamiltonian(tuple(self.energies[i] for i in order))


@dataclass(frozen=True, order=True)
class Partition:
    """Set partition of parties ``0..n-1`` into disjoint nonempty blocks.

    Always stored canonically: each block ascending, blocks ordered by their
    smallest element. Build with :meth:`of` rather than the raw constructor.
    """

    blocks: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        bs = [tuple(sorted(int(i) for i in b)) for b in blocks]
        if any(len(b) == 0 for b in bs):
            raise BadPartition("partition blocks must be nonempty")
        flat = [i for b in bs for i in b]
        if len(flat) != len(set(flat)):
            raise BadPartition(f"blocks overlap: {bs}")
        if n is None:
            n = max(flat) + 1 if flat else 0
        if sorted(flat) != list(range(n)):
            raise BadPartition(f"blocks {bs} do not cover parties 0..{n - 1}")
        if any(len(set(b)) != len(b) for b in bs):
            raise BadPartition(f"repeated party inside a block: {bs}")
        return cls(tuple(sorted(bs, key=lambda b: b[0])))

    @property
    def k(self) -> int:
        return len(self.blocks)

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __str__(self) -> str:
        from .partitions import format_partition

        return format_partition(self)


@dataclass(frozen=True, eq=False)
class MixedState:
    """Explicit ensemble ``sum_l p_l |psi_l><psi_l|``."""

    terms: tuple[tuple[float, StateVector], ...]
    label: str = ""
    notes: tuple[str, ...] = ()

    @property
    def dims(self) -> tuple[int, ...]:
        return self.terms[0][1].dims

    @property
    def n(self) -> int:
        return len(self.dims)

    def density(self) -> DensityOperator:
        d = self.terms[0][1].dim
        rho = np.zeros((d, d), dtype=complex)
        for p, s in self.terms:
            rho += p * np.outer(s.amplitudes, s.amplitudes.conj())
        return DensityOperator._trusted(self.dims, rho, self.label)


# ---------------------------------------------------------------- validation


def _as_amplitudes(raw) -> np.ndarray:
    arr = np.asarray(raw)
    if arr.dtype == object:
        raise ValidationError("amplitudes must be numbers or [re, im] pairs")
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    if arr.ndim != 1:
        raise DimensionMismatch(f"amplitudes must be a flat sequence, got shape {arr.shape}")
    return arr.astype(complex)


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionMismatch("dims must be nonempty")
    if any(d < 2 for d in dims):
        raise DimensionMismatch(f"every party needs dimension >= 2, got {dims}")
    return dims


def validate_state(amplitudes, dims, label: str = "") -> StateVector:
    """Check shape and normalization of raw amplitudes.

    Amplitudes may be complex numbers or ``[re, im]`` pairs. A norm deviation
    up to 1e-6 (rounded decimals in user files) is fixed by renormalizing and
    recorded in ``notes``; anything larger raises :class:`NotNormalized`.
    """
    dims = _check_dims(dims)
    psi = _as_amplitudes(amplitudes)
    expected = int(np.prod(dims))
    if psi.size != expected:
        raise DimensionMismatch(f"{psi.size} amplitudes given for dims {list(dims)} (need {expected})")
    if not np.all(np.isfinite(psi)):
        raise ValidationError("amplitudes must be finite")
    norm2 = float(np.vdot(psi, psi).real)
    deviation = abs(norm2 - 1.0)
    notes: list[str] = []
    if deviation > RENORM_LIMIT:
        raise NotNormalized(f"squared norm {norm2:.9g} deviates from 1 by {deviation:.3e}")
    if deviation > 0.0:
        psi = psi / np.sqrt(norm2)
        if deviation > NORM_TOL:
            notes.append(f"renormalized state (squared norm was {norm2:.12g})")
            log.info("renormalized %s: squared norm %.12g", label or "state", norm2)
    return StateVector(dims, _frozen(psi), label, tuple(notes))


def validate_density(matrix, dims, label: str = "") -> DensityOperator:
    dims = _check_dims(dims)
    m = linalg.check_hermitian(matrix)
    if m.shape[0] != int(np.prod(dims)):
        raise DimensionMismatch(f"matrix of size {m.shape[0]} does not match dims {list(dims)}")
    tr = np.trace(m).real
    if abs(tr - 1.0) > NORM_TOL:
        raise NotNormalized(f"trace {tr:.12g} is not 1")
    ev = linalg.hermitian_eigenvalues(m)
    if ev[-1] < linalg.EIGEN_FLOOR:
        raise ValidationError(f"density operator has negative eigenvalue {ev[-1]:.3e}")
    return DensityOperator(dims, _frozen(0.5 * (m + m.conj().T)), label)


def validate_hamiltonian(ladders, dims: Sequence[int] | None = None) -> LocalHamiltonian:
    """Validate per-party energy ladders.

    Each ladder must be weakly increasing. Ladders not starting at zero are
    shifted down by their lowest level (noted). At most one party may have a
    degenerate ground level.
    """
    out = []
    notes: list[str] = []
    for i, raw in enumerate(ladders):
        e = [float(x) for x in raw]
        if len(e) < 2:
            raise DimensionMismatch(f"party {i}: ladder needs at least two levels")
        if not all(np.isfinite(e)):
            raise ValidationError(f"party {i}: energies must be finite")
        if any(b < a for a, b in zip(e, e[1:])):
            raise DecreasingLadder(f"party {i}: ladder {e} is not weakly increasing")
        if e[0] != 0.0:
            notes.append(f"party {i}: ladder shifted by {-e[0]:.12g}")
            e = [x - e[0] for x in e]
        out.append(tuple(e))
    if not out:
        raise DimensionMismatch("at least one ladder is required")
    degenerate = [i for i, e in enumerate(out) if e[1] - e[0] <= DEGENERACY_TOL]
    if len(degenerate) > 1:
        raise TooManyDegenerateGrounds(
            f"parties {degenerate} have degenerate ground levels; at most one may"
        )
    if dims is not None and tuple(len(e) for e in out) != tuple(dims):
        raise DimensionMismatch(
            f"ladder sizes {[len(e) for e in out]} do not match dims {list(dims)}"
        )
    return LocalHamiltonian(tuple(out), tuple(notes))


def default_hamiltonian(dims: Sequence[int]) -> LocalHamiltonian:
    """Equally spaced ladder ``0, 1, ..., d-1`` per party ([0, 1] for qubits)."""
    return LocalHamiltonian(tuple(tuple(float(j) for j in range(d)) for d in dims))


def validate_mixed(terms, label: str = "") -> MixedState:
    """Validate an ensemble of ``(probability, StateVector)`` pairs."""
    terms = [(float(p), s) for p, s in terms]
    if not terms:
        raise BadProbabilities("a mixed state needs at least one term")
    if any(not p > 0 for p, _ in terms):
        raise BadProbabilities("probabilities must be positive")
    dims = terms[0][1].dims
    if any(s.dims != dims for _, s in terms):
        raise DimensionMismatch("all ensemble members must share dims")
    total = sum(p for p, _ in terms)
    notes: list[str] = []
    if abs(total - 1.0) > RENORM_LIMIT:
        raise BadProbabilities(f"probabilities sum to {total:.9g}, not 1")
    if total != 1.0:
        terms = [(p / total, s) for p, s in terms]
        if abs(total - 1.0) > NORM_TOL:
            notes.append(f"renormalized probabilities (sum was {total:.12g})")
    return MixedState(tuple(terms), label, tuple(notes))


# --------------------------------------------------------------------- files


def state_from_dict(doc: dict, label: str = "") -> StateVector:
    try:
        dims = doc["dims"]
        amps = doc["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"state object needs 'dims' and 'amplitudes' (missing {exc})") from None
    return validate_state(amps, dims, label=label)


def state_to_dict(state: StateVector) -> dict:
    return {
        "dims": list(state.dims),
        "amplitudes": [[float(a.real), float(a.imag)] for a in state.amplitudes],
    }


def mixed_from_dict(doc: dict, label: str = "") -> MixedState:
    terms = []
    for j, t in enumerate(doc["terms"]):
        try:
            terms.append((t["p"], state_from_dict(t["state"], label=f"{label}[{j}]")))
        except ValidationError as exc:
            raise type(exc)(f"terms[{j}]: {exc}") from None
    return validate_mixed(terms, label=label)


def hamiltonian_from_dict(doc: dict, dims=None) -> LocalHamiltonian:
    if "energies" not in doc:
        raise ValidationError("Hamiltonian object needs 'energies'")
    return validate_hamiltonian(doc["energies"], dims)


def _read_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"{path}: cannot read file ({exc.strerror})") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def read_state_file(path) -> StateVector | MixedState:
    """Load a pure-state or mixed-state JSON file."""
    doc = _read_json(path)
    label = Path(path).stem
    try:
        if isinstance(doc, dict) and "terms" in doc:
            return mixed_from_dict(doc, label=label)
        if not isinstance(doc, dict):
            raise ValidationError("top level must be a JSON object")
        return state_from_dict(doc, label=label)
    except ValidationError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def read_hamiltonian_file(path, dims=None) -> LocalHamiltonian:
    doc = _read_json(path)
    try:
        return hamiltonian_from_dict(doc, dims)
    except ValidationError as exc:
        raise type(exc)(f"{path}: {exc}") from None
