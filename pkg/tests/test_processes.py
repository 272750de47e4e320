from math import comb

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from quasistatic import systems
from quasistatic.geometry import EuclideanSpace
from quasistatic.jets import JetSign, classify
from quasistatic.processes import AdmissibilityError, Process, work_along, work_jet


@pytest.fixture
def space():
    return EuclideanSpace(3)


def _random_poly_process(space, rng, degree=3, a=1.0):
    rows = rng.standard_normal((degree + 1, space.dim))
    while np.linalg.norm(rows[1]) < 0.3:
        rows[1] = rng.standard_normal(space.dim)
    return Process.from_polynomial(space, rows, a)


def _shifted_tail(space, proc, s_star):
    """The remainder of the arc, re-based at gamma(s_star)."""
    rows = proc.taylor
    deg = rows.shape[0] - 1
    out = np.zeros_like(rows)
    for i in range(space.dim):
        c = rows[:, i]
        out[:, i] = [
            sum(c[j] * comb(j, m) * s_star ** (j - m) for j in range(m, deg + 1))
            for m in range(deg + 1)
        ]
    return Process.from_polynomial(space, out, proc.a - s_star)


# -- construction invariants ---------------------------------------------

def test_rejects_zero_velocity(space):
    rows = np.zeros((2, 3))
    rows[0] = [1, 0, 0]
    with pytest.raises(ValueError):
        Process.from_polynomial(space, rows, 1.0)


def test_rejects_cycle(space):
    with pytest.raises(ValueError):
        Process.from_callable(space, lambda s: np.array([np.cos(2 * np.pi * s), np.sin(2 * np.pi * s), 0.0]), 1.0, 2)


def test_rejects_mismatched_start(space):
    rows = np.array([[0.0, 0, 0], [1.0, 0, 0]])
    with pytest.raises(ValueError):
        Process(space, 1.0, gamma=lambda s: np.array([s + 0.5, 0, 0]), dgamma=lambda s: np.array([1.0, 0, 0]), taylor=rows)


def test_restrict_full_is_identity(space):
    p = Process.line(space, [0, 0, 0], [1, 0, 0], 2.0)
    r = p.restrict(2.0)
    assert r.a == p.a
    assert np.allclose(r.point_at(1.3), p.point_at(1.3))


def test_restrict_shares_map(space):
    p = Process.line(space, [0, 0, 0], [1, 2, 0], 2.0)
    r = p.restrict(1.0)
    assert np.allclose(r.point_at(1.0), p.point_at(1.0))
    with pytest.raises(ValueError):
        p.restrict(2.5)
    with pytest.raises(ValueError):
        p.restrict(0.0)


# -- work integral ---------------------------------------------------------

def test_spring_line_work_is_energy_difference(space):
    sys_ = systems.spring(space, [0, 0, 0], 2.0)
    total = work_along(sys_, Process.line(space, [0, 0, 0], [1, 0, 0], 1.0)).total
    assert total == pytest.approx(1.0, abs=1e-10)


def test_friction_work_is_arc_length(space):
    sys_ = systems.friction(space)
    total = work_along(sys_, Process.line(space, [0.3, 0.1, 0], [0, 0, 1.0], 2.5)).total
    assert total == pytest.approx(2.5, abs=1e-10)


def test_zero_form_zero_work(space):
    total = work_along(systems.free(space), Process.line(space, [0, 0, 0], [1, 1, 0], 1.0)).total
    assert total == 0.0


def test_work_samples_start_at_zero(space):
    ws = work_along(systems.spring(space, [0, 0, 0], 1.0), Process.line(space, [1, 0, 0], [0, 1, 0], 1.0))
    assert ws.values[0] == 0.0
    assert ws.total == ws.values[-1]


def test_monotonicity_is_recorded_not_asserted(space):
    fric = systems.friction(space)
    assert work_along(fric, Process.line(space, [0, 0, 0], [1, 0, 0], 1.0)).monotone
    spring = systems.spring(space, [0, 0, 0], 1.0)
    through = Process.line(space, [-1.0, 0, 0], [1.0, 0, 0], 2.0)  # through the center
    ws = work_along(spring, through)
    assert not ws.monotone  # the integrand changes sign; still a valid result
    assert ws.total == pytest.approx(0.0, abs=1e-10)


def test_admissibility_violation_reports_parameter(space):
    sys_ = systems.coulomb(space, [0, 0, 0], [0, 0, 1.0], 0.5)
    dive = Process.line(space, [0, 0, 0.5], [0, 0, -1.0], 1.0)
    with pytest.raises(AdmissibilityError) as err:
        work_along(sys_, dive)
    assert err.value.s is not None


def test_additivity_over_split(space):
    rng = np.random.default_rng(5)
    sys_ = systems.friction(space, np.diag([2.0, 1.0, 0.5]))
    for _ in range(20):
        p = _random_poly_process(space, rng)
        s_star = float(rng.uniform(0.2, 0.8) * p.a)
        total = work_along(sys_, p).total
        head = work_along(sys_, p.restrict(s_star)).total
        tail = work_along(sys_, _shifted_tail(space, p, s_star)).total
        assert total == pytest.approx(head + tail, abs=1e-9)


def test_reparameterization_invariance(space):
    rng = np.random.default_rng(6)
    sys_ = systems.friction(space)
    for _ in range(20):
        p = _random_poly_process(space, rng, degree=2, a=1.0)
        a_tilde = 0.8
        b = (p.a - a_tilde) / a_tilde**2
        sigma = Polynomial([0.0, 1.0, b])  # sigma(s) = s + b s^2, increasing, sigma(a_tilde) = a
        comp_rows = [Polynomial(p.taylor[:, i])(sigma).coef for i in range(space.dim)]
        deg = max(len(c) for c in comp_rows)
        rows = np.zeros((deg, space.dim))
        for i, c in enumerate(comp_rows):
            rows[: len(c), i] = c
        reparam = Process.from_polynomial(space, rows, a_tilde)
        assert np.allclose(reparam.point_at(a_tilde), p.point_at(p.a), atol=1e-12)
        w1 = work_along(sys_, p).total
        w2 = work_along(sys_, reparam).total
        assert w1 == pytest.approx(w2, abs=1e-9)


def test_potential_path_independence(space):
    rng = np.random.default_rng(7)
    sys_ = systems.spring(space, [0.2, -0.1, 0.4], 1.7)
    for _ in range(20):
        q0 = rng.standard_normal(3)
        q1 = rng.standard_normal(3)
        line = Process.line(space, q0, q1 - q0, 1.0)
        r1, r2 = rng.standard_normal(3), rng.standard_normal(3)
        r3 = (q1 - q0) - r1 - r2
        arc = Process.from_polynomial(space, np.vstack([q0, r1, r2, r3]), 1.0)
        assert work_along(sys_, line).total == pytest.approx(work_along(sys_, arc).total, abs=1e-9)


# -- work jets ---------------------------------------------------------------

def test_spring_work_jet_at_center(space):
    sys_ = systems.spring(space, [0, 0, 0], 2.0)
    v = np.array([0.6, -0.8, 0.0])
    j = work_jet(sys_, Process.line(space, [0, 0, 0], v, 1.0), 2)
    assert j.coeffs == pytest.approx((0.0, 0.0, 1.0))  # (k/2)|v|^2
    assert classify(j, zero_tol=1e-9) == JetSign.POSITIVE


def test_spring_work_jet_descent(space):
    sys_ = systems.spring(space, [0, 0, 0], 2.0)
    q = np.array([0.5, 0.5, 0.0])
    j = work_jet(sys_, Process.line(space, q, -q, 1.0), 2)
    assert j.coeffs[1] == pytest.approx(-2.0 * float(q @ q))
    assert classify(j, zero_tol=1e-9) == JetSign.NEGATIVE


def test_friction_work_jet_positive(space):
    sys_ = systems.friction(space)
    rng = np.random.default_rng(8)
    for _ in range(10):
        p = _random_poly_process(space, rng, degree=2)
        j = work_jet(sys_, p, 3)
        assert j.coeffs[1] == pytest.approx(np.linalg.norm(p.initial_velocity), rel=1e-12)
        assert classify(j, zero_tol=1e-9) == JetSign.POSITIVE


def test_work_jet_matches_quadrature(space):
    rng = np.random.default_rng(9)
    sys_ = systems.friction(space, np.diag([2.0, 1.0, 0.5]))
    for _ in range(5):
        p = _random_poly_process(space, rng, degree=3)
        k = 3
        j = work_jet(sys_, p, k)
        for s in (1e-2, 2e-2, 4e-2):
            ws = work_along(sys_, p.restrict(s), n_grid=4)
            taylor_val = j(s)
            assert abs(taylor_val - ws.total) < 50.0 * s ** (k + 1)


def test_zero_form_work_jet_is_zero_sign(space):
    sys_ = systems.rod(space, [0, 0, 0], 1.0)
    arc = Process.from_callable(
        space,
        lambda s: np.array([np.cos(s), np.sin(s), 0.0]),
        0.5,
        order=3,
        dgamma=lambda s: np.array([-np.sin(s), np.cos(s), 0.0]),
    )
    j = work_jet(sys_, arc, 3)
    assert classify(j, source_is_zero=True) == JetSign.ZERO


def test_work_jet_needs_taylor_data(space):
    p = Process.from_callable(space, lambda s: np.array([s, s * s, 0.0]), 1.0, order=2)
    with pytest.raises(ValueError):
        work_jet(systems.friction(space), p, 5)
