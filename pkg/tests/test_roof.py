import numpy as np
import pytest

from ergogap.errors import BadSelector, RankTooLarge
from ergogap.measures import measure_report
from ergogap.model import validate_density, validate_mixed, validate_state
from ergogap.roof import PureMeasure, roof_upper_bound
from ergogap.states import ghz, random_state, w_state


def basis(i, n=3):
    return validate_state(np.eye(2**n)[i], (2,) * n)


def grid_oracle(rho, measure, steps=(61, 120)):
    """Minimum over two-term decompositions on a (theta, beta) grid of U(2) mod phases."""
    w, v = np.linalg.eigh(rho)
    keep = w > 1e-12
    b = v[:, keep] * np.sqrt(w[keep])
    best = np.inf
    for th in np.linspace(0, np.pi / 2, steps[0]):
        for be in np.linspace(0, 2 * np.pi, steps[1], endpoint=False):
            u = np.array([[np.cos(th), -np.exp(1j * be) * np.sin(th)],
                          [np.sin(th), np.exp(1j * be) * np.cos(th)]])
            total = 0.0
            for row in u:
                psi = b @ row
                p = np.vdot(psi, psi).real
                if p > 1e-14:
                    total += p * measure(psi / np.sqrt(p))
            best = min(best, total)
    return best


def check_sound(est, rho, measure):
    assert np.max(np.abs(est.density() - rho)) < 1e-8
    recomputed = sum(p * measure(s.amplitudes) for p, s in est.decomposition)
    assert abs(recomputed - est.value) < 1e-10
    assert sum(p for p, _ in est.decomposition) == pytest.approx(1.0)


@pytest.mark.parametrize("sel,attr", [("min", "delta_min"), ("avg", "delta_avg"), ("vol", "delta_vol"),
                                      ("fill", "delta_fill"), ("full", "full_gap")])
def test_pure_input_exact(sel, attr):
    s = w_state(3)
    est = roof_upper_bound(s, sel)
    assert est.value == getattr(measure_report(s), attr)
    assert len(est.decomposition) == 1 and est.converged
    assert est.kind == "upper bound"


def test_separable_mixture_reaches_zero():
    m = validate_mixed([(0.5, basis(0)), (0.5, basis(7))])
    rho = m.density().matrix
    est = roof_upper_bound(validate_density(rho, (2, 2, 2)), "min", budget=10_000, initial="random")
    assert est.value <= 1e-6
    check_sound(est, rho, PureMeasure("min", (2, 2, 2)))


def test_grid_oracle_rank_two():
    m = validate_mixed([(0.5, ghz(3)), (0.5, basis(0))])
    rho = m.density().matrix
    pm = PureMeasure("min", (2, 2, 2))
    grid = grid_oracle(rho, pm)
    est = roof_upper_bound(validate_density(rho, (2, 2, 2)), "min", budget=5000, seed=0)
    check_sound(est, rho, pm)
    assert est.value <= grid + 1e-6
    # the supplied ensemble is an upper bound too
    assert est.value <= 0.5 * pm(ghz(3).amplitudes) + 1e-12


def test_history_monotone_and_budget_monotone():
    m = validate_mixed([(0.3, w_state(3)), (0.7, ghz(3))])
    values = []
    for budget in (50, 200, 800):
        est = roof_upper_bound(m, "avg", budget=budget, seed=4, initial="random")
        assert all(b <= a for a, b in zip(est.history, est.history[1:]))
        values.append(est.value)
    assert values[0] >= values[1] >= values[2]


def test_deterministic_for_seed():
    m = validate_mixed([(0.4, w_state(3)), (0.6, ghz(3))])
    a = roof_upper_bound(m, "vol", budget=100, seed=7, restarts=2)
    b = roof_upper_bound(m, "vol", budget=100, seed=7, restarts=2)
    assert a.value == b.value
    assert a.iterations == b.iterations == 200


def test_convexity_on_random_rank_two_pairs():
    rng = np.random.default_rng(12)
    pm = PureMeasure("min", (2, 2, 2))
    for _ in range(5):
        states = [random_state((2, 2, 2), rng) for _ in range(4)]
        r1 = validate_mixed([(0.5, states[0]), (0.5, states[1])])
        r2 = validate_mixed([(0.3, states[2]), (0.7, states[3])])
        e1 = roof_upper_bound(r1, "min", budget=150, seed=1)
        e2 = roof_upper_bound(r2, "min", budget=150, seed=1)
        p = rng.uniform(0.1, 0.9)
        union = validate_mixed([(p * q, s) for q, s in e1.decomposition] +
                               [((1 - p) * q, s) for q, s in e2.decomposition])
        e = roof_upper_bound(union, "min", budget=50, seed=1)
        assert e.value <= p * e1.value + (1 - p) * e2.value + 1e-6
        check_sound(e, union.density().matrix, pm)


def test_errors():
    rho = validate_density(np.eye(16) / 16, (2,) * 4)
    with pytest.raises(RankTooLarge):
        roof_upper_bound(rho, "min")
    with pytest.raises(BadSelector):
        roof_upper_bound(ghz(3), "entropy")
