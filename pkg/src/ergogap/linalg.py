"""Dense complex linear algebra for small multipartite systems.

Matrices are plain 2-D numpy arrays. The computational basis is ordered
lexicographically with party 0 as the most significant digit, so a state on
dims ``(d0, d1, ..., d_{n-1})`` reshapes directly to a tensor with one axis
per party.
"""

from __future__ import annotations

from contextlib import contextmanager
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptySubset, IndexOutOfRange, NonHermitian, NonSquare, NumericalFailure

HERMITIAN_TOL = 1e-9
JACOBI_TOL = 1e-12
EIGEN_FLOOR = -1e-10

_METHODS = ("lapack", "jacobi")
_default_method = "lapack"


def as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-entry norm of ``m - m^dagger``."""
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)))


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_square(m)
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NonHermitian(f"matrix is not Hermitian: max |M - M^dagger| = {defect:.3e}")
    return m


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigenvalues(m, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each pivot ``(p, q)`` is annihilated by a unitary rotation that first
    removes the phase of ``a[p, q]`` and then applies the real symmetric
    Jacobi angle. Sweeps stop once the off-diagonal Frobenius norm drops
    below ``tol`` (scaled by the matrix norm for large entries).

    Returns the eigenvalues sorted descending.
    """
    a = check_hermitian(m).copy()
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        if _off_norm(a) < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(tau) > 1e150:
                    t = 0.5 / tau
                else:
                    t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array([[c, s * phase], [-s * np.conj(phase), c]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
    else:
        off = _off_norm(a)
        if off >= tol * scale:
            raise NumericalFailure(f"Jacobi did not converge (off-diagonal norm {off:.3e})")
    return np.sort(np.diag(a).real)[::-1]


@contextmanager
def eigen_method(method: str):
    """Temporarily switch the solver used when ``method`` is not given."""
    global _default_method
    if method not in _METHODS:
        raise ValueError(f"unknown eigen method {method!r}")
    previous, _default_method = _default_method, method
    try:
        yield
    finally:
        _default_method = previous


def hermitian_eigenvalues(m, method: str | None = None) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, sorted descending.

    ``method="lapack"`` uses ``numpy.linalg.eigvalsh``; ``method="jacobi"``
    uses the in-house cyclic Jacobi solver. Both validate hermiticity first
    (:class:`NonHermitian` above 1e-9, :class:`NonSquare` on shape mismatch).
    """
    m = check_hermitian(m)
    method = method or _default_method
    if method == "jacobi":
        return jacobi_eigenvalues(m)
    if method != "lapack":
        raise ValueError(f"unknown eigen method {method!r}")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))[::-1].copy()


def clamp_spectrum(values: np.ndarray, floor: float = EIGEN_FLOOR) -> np.ndarray:
    """Zero out rounding-level negative eigenvalues in ``[floor, 0)``.

    Values below ``floor`` are left alone so callers can detect them.
    """
    values = np.array(values, dtype=float)
    values[(values < 0) & (values >= floor)] = 0.0
    return values


def tensor_product(a, b) -> np.ndarray:
    """Kronecker product in the standard row-major block layout."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(factors: Iterable) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        f = np.asarray(f, dtype=complex)
        if f.ndim == 1:
            f = f.reshape(-1, 1)
        out = np.kron(out, f)
    return out


def _normalize_keep(keep: Iterable[int], n: int) -> tuple[int, ...]:
    keep = tuple(sorted(set(int(i) for i in keep)))
    if not keep:
        raise EmptySubset("keep must name at least one party")
    bad = [i for i in keep if i < 0 or i >= n]
    if bad:
        raise IndexOutOfRange(f"party indices {bad} outside 0..{n - 1}")
    return keep


def reduce_pure(amplitudes: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of a pure state vector on the parties ``keep``."""
    dims = tuple(dims)
    keep = _normalize_keep(keep, len(dims))
    rest = [i for i in range(len(dims)) if i not in keep]
    psi = np.asarray(amplitudes, dtype=complex).reshape(dims)
    dk = int(np.prod([dims[i] for i in keep]))
    mat = np.transpose(psi, list(keep) + rest).reshape(dk, -1)
    return mat @ mat.conj().T


def reduce_mixed(rho: np.ndarray, dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix of a density operator on the parties ``keep``."""
    dims = tuple(dims)
    n = len(dims)
    keep = _normalize_keep(keep, n)
    rest = [i for i in range(n) if i not in keep]
    dk = int(np.prod([dims[i] for i in keep]))
    dr = int(np.prod([dims[i] for i in rest])) if rest else 1
    t = np.asarray(rho, dtype=complex).reshape(dims + dims)
    perm = list(keep) + rest + [n + i for i in keep] + [n + i for i in rest]
    t = np.transpose(t, perm).reshape(dk, dr, dk, dr)
    return np.einsum("ijkj->ik", t)


def partial_trace(state, keep: Iterable[int]):
    """Marginal of ``state`` on the parties in ``keep`` (0-based indices).

    ``state`` is a :class:`~ergogap.model.StateVector` or a
    :class:`~ergogap.model.DensityOperator`. The returned
    :class:`~ergogap.model.DensityOperator` lists the kept parties in
    ascending order.
    """
    from .model import DensityOperator, StateVector

    if isinstance(state, StateVector):
        mat = reduce_pure(state.amplitudes, state.dims, keep)
    elif isinstance(state, DensityOperator):
        mat = reduce_mixed(state.matrix, state.dims, keep)
    else:
        raise TypeError(f"cannot take a partial trace of {type(state).__name__}")
    kept = _normalize_keep(keep, len(state.dims))
    return DensityOperator._trusted(tuple(state.dims[i] for i in kept), mat)
