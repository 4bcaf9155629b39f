"""Named state families and the three-qubit generalized Schmidt form.

:func:`closed_form_gaps` evaluates the bipartite gaps of a three-qubit state
directly from its Schmidt parameters. It never calls the numeric engine in
:mod:`ergogap.ergotropy`, so the two can be checked against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.stats import unitary_group

from .errors import BadParameterCount, NotNormalized, UnknownFamily, ValidationError
from .model import RENORM_LIMIT, StateVector, validate_state

SCHMIDT_TOL = 1e-10

# basis indices of |000>, |100>, |101>, |110>, |111>
SCHMIDT_INDICES = (0, 4, 5, 6, 7)


@dataclass(frozen=True)
class SchmidtParams:
    """Coefficients of ``l0|000> + l1 e^{i phi}|100> + l2|101> + l3|110> + l4|111>``."""

    l0: float
    l1: float
    l2: float
    l3: float
    l4: float
    phi: float = 0.0

    def __post_init__(self):
        lam = self.lambdas
        if any(not math.isfinite(x) for x in lam + (self.phi,)):
            raise ValidationError("Schmidt parameters must be finite")
        if any(x < 0 for x in lam):
            raise ValidationError(f"Schmidt coefficients must be nonnegative, got {lam}")
        if not 0.0 <= self.phi <= math.pi:
            raise ValidationError(f"phase must lie in [0, pi], got {self.phi}")
        total = sum(x * x for x in lam)
        if abs(total - 1.0) > SCHMIDT_TOL:
            raise NotNormalized(f"sum of squared coefficients is {total:.12g}")

    @classmethod
    def normalized(cls, l0, l1, l2, l3, l4, phi=0.0) -> "SchmidtParams":
        """Build from rounded inputs, rescaling if the norm is off by at most 1e-6."""
        lam = [float(x) for x in (l0, l1, l2, l3, l4)]
        total = sum(x * x for x in lam)
        if abs(total - 1.0) > RENORM_LIMIT:
            raise NotNormalized(f"sum of squared coefficients is {total:.9g}")
        s = math.sqrt(total)
        return cls(*(x / s for x in lam), phi=float(phi))

    @property
    def lambdas(self) -> tuple[float, float, float, float, float]:
        return (self.l0, self.l1, self.l2, self.l3, self.l4)

    @property
    def alpha(self) -> float:
        """``|l1 l4 e^{i phi} - l2 l3|^2``."""
        z = self.l1 * self.l4 * complex(math.cos(self.phi), math.sin(self.phi)) - self.l2 * self.l3
        return abs(z) ** 2


def build_schmidt(params: SchmidtParams, label: str = "") -> StateVector:
    psi = np.zeros(8, dtype=complex)
    coeffs = list(params.lambdas)
    coeffs[1] = coeffs[1] * np.exp(1j * params.phi)
    psi[list(SCHMIDT_INDICES)] = coeffs
    return validate_state(psi, (2, 2, 2), label=label)


def _gap_from_determinant(det: float) -> float:
    return 1.0 - math.sqrt(max(0.0, 1.0 - 4.0 * det))


def closed_form_gaps(params: SchmidtParams) -> tuple[float, float, float]:
    """Bipartite gaps (A|BC, B|CA, C|AB) under unit qubit ladders.

    Each gap is twice the smaller eigenvalue of the single-qubit marginal,
    written through the marginal determinant.
    """
    l0, l1, l2, l3, l4 = params.lambdas
    a = params.alpha
    s0 = l0 * l0
    return (
        _gap_from_determinant(s0 * (1.0 - (s0 + l1 * l1))),
        _gap_from_determinant(s0 * (l3 * l3 + l4 * l4) + a),
        _gap_from_determinant(s0 * (l2 * l2 + l4 * l4) + a),
    )


# ------------------------------------------------------------------ families


def ghz(n: int) -> StateVector:
    _check_n(n, 2)
    psi = np.zeros(2**n, dtype=complex)
    psi[0] = psi[-1] = 1 / math.sqrt(2)
    return validate_state(psi, (2,) * n, label=f"ghz:{n}")


def w_state(n: int) -> StateVector:
    _check_n(n, 2)
    psi = np.zeros(2**n, dtype=complex)
    for i in range(n):
        psi[1 << i] = 1 / math.sqrt(n)
    return validate_state(psi, (2,) * n, label=f"w:{n}")


def bell_pair_product(n: int) -> StateVector:
    """Bell pairs on parties (0,1), (2,3), ...; ``n`` must be even."""
    _check_n(n, 2)
    if n % 2:
        raise BadParameterCount(f"bell_pair_product needs an even party count, got {n}")
    bell = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    psi = np.ones(1, dtype=complex)
    for _ in range(n // 2):
        psi = np.kron(psi, bell)
    return validate_state(psi, (2,) * n, label=f"bellpairs:{n}")


def generalized_ghz(l0: float) -> StateVector:
    l4 = math.sqrt(max(0.0, 1.0 - l0 * l0))
    return build_schmidt(SchmidtParams.normalized(l0, 0, 0, 0, l4), label=f"gghz:{l0 * l0:.6g}")


def tri_bell(l0: float, l2: float, l3: float) -> StateVector:
    return build_schmidt(SchmidtParams.normalized(l0, 0, l2, l3, 0), label="tribell")


def extended_ghz(kind: int, l0: float, mid: float, l4: float, phi: float = 0.0) -> StateVector:
    """Extended GHZ: ``l0|000> + mid|x> + l4|111>`` with ``x`` = 100, 101 or 110."""
    lam = [l0, 0.0, 0.0, 0.0, l4]
    if kind not in (1, 2, 3):
        raise UnknownFamily(f"extended GHZ kind must be 1, 2 or 3, got {kind}")
    lam[kind] = mid
    if kind != 1 and phi:
        raise ValidationError("a phase is only meaningful for extended_ghz_1")
    return build_schmidt(SchmidtParams.normalized(*lam, phi=phi), label=f"eghz{kind}")


def _check_n(n: int, low: int) -> None:
    if int(n) != n or n < low:
        raise ValidationError(f"party count must be an integer >= {low}, got {n}")


_FAMILIES = {
    "ghz": ("n", ghz),
    "w": ("n", w_state),
    "bell_pair_product": ("n", bell_pair_product),
    "generalized_ghz": ((1,), generalized_ghz),
    "tri_bell": ((3,), tri_bell),
    "extended_ghz_1": ((3, 4), lambda *a: extended_ghz(1, *a)),
    "extended_ghz_2": ((3,), lambda *a: extended_ghz(2, *a)),
    "extended_ghz_3": ((3,), lambda *a: extended_ghz(3, *a)),
}

_ALIASES = {
    "ghz_n": "ghz",
    "w_n": "w",
    "bellpairs": "bell_pair_product",
    "gghz": "generalized_ghz",
    "tribell": "tri_bell",
    "eghz1": "extended_ghz_1",
    "eghz2": "extended_ghz_2",
    "eghz3": "extended_ghz_3",
}


def named_state(family: str, params: Sequence[float] = (), n: int = 3) -> StateVector:
    """Member of a named family.

    Party-count families (``ghz``, ``w``, ``bell_pair_product``) take ``n``;
    the three-qubit families take amplitude parameters, e.g.
    ``named_state("tri_bell", (l0, l2, l3))``.
    """
    name = _ALIASES.get(family, family)
    if name not in _FAMILIES:
        raise UnknownFamily(f"unknown state family {family!r}")
    arity, ctor = _FAMILIES[name]
    if arity == "n":
        if params:
            raise BadParameterCount(f"{name} takes only the party count")
        return ctor(n)
    if len(params) not in arity:
        raise BadParameterCount(f"{name} takes {' or '.join(map(str, arity))} parameters, got {len(params)}")
    return ctor(*[float(x) for x in params])


# Five states used to compare the genuine measures against each other.
TABLE2_PARAMS = {
    "psi": SchmidtParams.normalized(math.sqrt(1 / 3), 0, 0, 0, math.sqrt(2 / 3)),
    "phi": SchmidtParams.normalized(math.sqrt(1 / 2), 0, 0, math.sqrt(9 / 32), math.sqrt(7 / 32)),
    "chi": SchmidtParams.normalized(1 / 2, 0, 0, 0, math.sqrt(3) / 2),
    "zeta": SchmidtParams.normalized(math.sqrt(3 / 8), 0, 0, math.sqrt(1 / 3), math.sqrt(7 / 24)),
    "eta": SchmidtParams.normalized(3 / math.sqrt(50), 0, 0, 0, math.sqrt(41 / 50)),
}


def table2_state(name: str) -> StateVector:
    if name not in TABLE2_PARAMS:
        raise UnknownFamily(f"unknown comparison state {name!r}; choose from {sorted(TABLE2_PARAMS)}")
    return build_schmidt(TABLE2_PARAMS[name], label=name)


# -------------------------------------------------------------------- random


def random_schmidt(rng: np.random.Generator) -> SchmidtParams:
    """Uniform direction on the nonnegative part of the unit 4-sphere, uniform phase."""
    lam = np.abs(rng.normal(size=5))
    lam /= np.linalg.norm(lam)
    return SchmidtParams(*map(float, lam), phi=float(rng.uniform(0, math.pi)))


def random_state(dims: Sequence[int], rng: np.random.Generator) -> StateVector:
    """Haar-random pure state."""
    d = int(np.prod(dims))
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return validate_state(z / np.linalg.norm(z), dims, label="random")


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(d, random_state=rng)


def apply_local(state: StateVector, unitaries: Sequence[np.ndarray]) -> StateVector:
    """Apply one unitary per party."""
    t = state.tensor()
    for axis, u in enumerate(unitaries):
        t = np.moveaxis(np.tensordot(u, t, axes=([1], [axis])), 0, axis)
    return validate_state(t.reshape(-1), state.dims, label=state.label)
