import numpy as np
import pytest

from quasistatic.dynamics import (
    CustomLagrangian,
    DiscretePath,
    QuadraticLagrangian,
    boundary_momenta,
    discrete_action,
    el_residuals,
    segment_momenta,
    solve_bvp,
)


@pytest.fixture
def free():
    return QuadraticLagrangian([[1.0]])


@pytest.fixture
def harmonic():
    return QuadraticLagrangian([[1.0]], [[1.0]])


# -- validation ----------------------------------------------------------------

def test_lagrangian_validation():
    with pytest.raises(ValueError):
        QuadraticLagrangian([[0.0]])  # not positive definite
    with pytest.raises(ValueError):
        QuadraticLagrangian(np.eye(2), [[1.0, 0.5], [0.2, 1.0]])  # asymmetric stiffness
    with pytest.raises(ValueError):
        QuadraticLagrangian(np.eye(2), np.eye(2), [1.0, 2.0, 3.0])


def test_path_validation():
    with pytest.raises(ValueError):
        DiscretePath(0.0, 1.0, np.zeros((2, 1)))  # fewer than two segments
    with pytest.raises(ValueError):
        DiscretePath(1.0, 0.0, np.zeros((4, 1)))


# -- action and exactness ---------------------------------------------------------

def test_free_particle_action(free):
    for n in (2, 5, 16):
        path = solve_bvp(free, [0.0], [1.0], n, (0.0, 1.0))
        assert np.allclose(path.points[:, 0], np.linspace(0, 1, n + 1), atol=1e-14)
        assert discrete_action(free, path) == pytest.approx(0.5, abs=1e-13)


def test_zero_path_zero_action(harmonic):
    path = DiscretePath(0.0, 1.0, np.zeros((9, 1)))
    assert discrete_action(harmonic, path) == 0.0


def test_harmonic_action_matches_fine_reference(harmonic):
    t_span = (0.0, np.pi / 2)
    ref_path = DiscretePath(*t_span, np.cos(np.linspace(*t_span, 4097))[:, None])
    reference = discrete_action(harmonic, ref_path)
    path64 = DiscretePath(*t_span, np.cos(np.linspace(*t_span, 65))[:, None])
    a64 = discrete_action(harmonic, path64)
    h = path64.h
    assert abs(a64 - reference) < 2.0 * h**2


# -- boundary-value solver ----------------------------------------------------------

def test_harmonic_bvp_matches_cosine(harmonic):
    path = solve_bvp(harmonic, [1.0], [0.0], 64, (0.0, np.pi / 2))
    exact = np.cos(path.times)
    assert np.abs(path.points[:, 0] - exact).max() < 2e-3


def test_convergence_order(harmonic):
    errs = []
    for n in (16, 32, 64, 128):
        path = solve_bvp(harmonic, [1.0], [0.0], n, (0.0, np.pi / 2))
        errs.append(np.abs(path.points[:, 0] - np.cos(path.times)).max())
    for e_coarse, e_fine in zip(errs, errs[1:]):
        assert e_coarse / e_fine >= 3.5


def test_constant_force_parabola(free):
    f = 2.0
    path = solve_bvp(free, [0.0], [1.0], 32, (0.0, 1.0), force=lambda t: [f])
    t = path.times
    expected = f * t**2 / 2 + (1.0 - f / 2) * t
    assert np.abs(path.points[:, 0] - expected).max() < 1e-12


def test_interior_residuals_vanish(harmonic):
    force = lambda t: [0.3 * np.sin(t)]  # noqa: E731
    path = solve_bvp(harmonic, [1.0], [0.3], 48, (0.0, 2.0), force=force)
    assert np.abs(el_residuals(harmonic, path, force)).max() < 1e-10


def test_custom_lagrangian_matches_quadratic(harmonic):
    cust = CustomLagrangian(
        1,
        value=lambda q, v: 0.5 * float(v @ v) - 0.5 * float(q @ q),
        d_dq=lambda q, v: -np.asarray(q, float),
        d_dv=lambda q, v: np.asarray(v, float),
    )
    a = solve_bvp(cust, [1.0], [0.0], 24, (0.0, np.pi / 2))
    b = solve_bvp(harmonic, [1.0], [0.0], 24, (0.0, np.pi / 2))
    assert np.abs(a.points - b.points).max() < 1e-10


def test_pendulum_custom_solver():
    pend = CustomLagrangian(
        1,
        value=lambda q, v: 0.5 * float(v @ v) + np.cos(q[0]),
        d_dq=lambda q, v: np.array([-np.sin(q[0])]),
        d_dv=lambda q, v: np.asarray(v, float),
    )
    path = solve_bvp(pend, [0.0], [0.5], 40, (0.0, 1.0))
    assert np.abs(el_residuals(pend, path)).max() < 1e-10


# -- momenta -------------------------------------------------------------------------

def test_free_particle_momenta_exact(free):
    path = solve_bvp(QuadraticLagrangian([[2.0]]), [0.0], [3.0], 10, (0.0, 1.5))
    p0, p1 = boundary_momenta(QuadraticLagrangian([[2.0]]), path)
    expect = 2.0 * 3.0 / 1.5
    assert p0[0] == pytest.approx(expect, abs=1e-12)
    assert p1[0] == pytest.approx(expect, abs=1e-12)


def test_constant_path_zero_momenta(harmonic):
    path = DiscretePath(0.0, 1.0, np.full((9, 1), 0.7))
    p0, p1 = boundary_momenta(harmonic, path)
    assert p0[0] == pytest.approx(0.0, abs=1e-14)
    assert p1[0] == pytest.approx(0.0, abs=1e-14)


def test_harmonic_momenta_converge(harmonic):
    path = solve_bvp(harmonic, [1.0], [0.0], 128, (0.0, np.pi / 2))
    p0, p1 = boundary_momenta(harmonic, path)
    assert abs(p0[0] - 0.0) < 5e-3
    assert abs(p1[0] + 1.0) < 5e-3


def test_segment_momenta_shape(harmonic):
    path = solve_bvp(harmonic, [1.0], [0.0], 16, (0.0, np.pi / 2))
    p = segment_momenta(harmonic, path)
    assert p.shape == (16, 1)


# -- the discrete variational identity -------------------------------------------------

def _action_with_force(lagr, pts, t0, t1, force):
    path = DiscretePath(t0, t1, pts)
    a = discrete_action(lagr, path)
    if force is not None:
        h = path.h
        times = path.times
        w = 0.0
        for i in range(1, path.n_segments):
            w += float(np.asarray(force(times[i])) @ pts[i]) * h
        a += w
    return a


def test_variational_identity_interior(harmonic):
    force = lambda t: [0.2 * np.cos(t)]  # noqa: E731
    n = 48
    path = solve_bvp(harmonic, [1.0], [0.2], n, (0.0, 2.0), force=force)
    rng = np.random.default_rng(5)
    for _ in range(5):
        w = rng.standard_normal((n + 1, 1))
        w[0] = 0.0
        w[-1] = 0.0
        eps = 1e-6
        ap = _action_with_force(harmonic, path.points + eps * w, 0.0, 2.0, force)
        am = _action_with_force(harmonic, path.points - eps * w, 0.0, 2.0, force)
        assert abs((ap - am) / (2 * eps)) < 1e-8


def test_boundary_term_bookkeeping(harmonic):
    # with endpoint variations the first variation reduces to the
    # momentum pairing at the ends; large n keeps the endpoint-momentum
    # estimate within the identity's tolerance
    n = 2000
    path = solve_bvp(harmonic, [1.0], [0.0], n, (0.0, np.pi / 2))
    p0, p1 = boundary_momenta(harmonic, path)
    rng = np.random.default_rng(6)
    for _ in range(3):
        w = rng.standard_normal((n + 1, 1))
        eps = 1e-6
        ap = _action_with_force(harmonic, path.points + eps * w, 0.0, np.pi / 2, None)
        am = _action_with_force(harmonic, path.points - eps * w, 0.0, np.pi / 2, None)
        derivative = (ap - am) / (2 * eps)
        expected = float(p1 @ w[-1] - p0 @ w[0])
        scale = 1.0 + abs(expected)
        assert abs(derivative - expected) < 1e-6 * scale
