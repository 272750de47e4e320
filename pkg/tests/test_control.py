import numpy as np
import pytest

from quasistatic import control
from quasistatic.geometry import EuclideanSpace


@pytest.fixture
def space():
    return EuclideanSpace(3)


# -- fibrations ------------------------------------------------------------

def test_fibration_validation(space):
    base = EuclideanSpace(2)
    with pytest.raises(ValueError):
        control.Fibration(space, base, np.zeros((2, 3)))  # not surjective
    fib = control.Fibration(space, base, np.array([[1.0, 0, 0], [0, 1.0, 0]]))
    assert np.allclose(fib.project([1, 2, 3]), [1, 2])
    vb = fib.vertical_basis()
    assert vb.shape == (3, 1)
    assert np.allclose(np.abs(vb[:, 0]), [0, 0, 1])


def test_fiber_point_solves_projection(space):
    base = EuclideanSpace(1)
    fib = control.Fibration(space, base, np.array([[1.0, 1.0, 0.0]]))
    q = fib.fiber_point([2.0])
    assert np.allclose(fib.project(q), [2.0])


# -- spring chain -----------------------------------------------------------

def test_chain_section_and_force(space):
    rng = np.random.default_rng(0)
    for _ in range(5):
        k10, k20, k21 = rng.uniform(0.5, 3.0, 3)
        csys = control.spring_chain(space, [0, 0, 0], k10, k20, k21)
        q1 = rng.standard_normal(3)
        sol = control.solve_critical(csys, q1, seed=1)
        assert sol.section and len(sol.points) == 1
        q2 = control.spring_chain_section(csys, q1)
        assert np.linalg.norm(sol.points[0].qbar[3:] - q2) < 1e-8
        f, rank = control.reduced_force(csys, sol.points[0])
        keff = k10 + k20 * k21 / (k20 + k21)
        assert rank == 3
        assert np.linalg.norm(f - keff * q1) < 1e-8


def test_chain_residual_formulas(space):
    csys = control.spring_chain(space, [0, 0, 0], 1.0, 1.0, 1.0)
    q1 = np.array([0.8, -0.3, 0.2])
    q2 = control.spring_chain_section(csys, q1)
    assert control.critical_residual(csys, np.concatenate([q1, q2])) < 1e-12
    delta = np.array([0.01, -0.02, 0.005])
    res = control.critical_residual(csys, np.concatenate([q1, q2 + delta]))
    assert res == pytest.approx(2.0 * np.linalg.norm(delta), abs=1e-12)


def test_chain_rejects_bad_constants(space):
    with pytest.raises(ValueError):
        control.spring_chain(space, [0, 0, 0], -1.0, 1.0, 1.0)


# -- buckling rod --------------------------------------------------------------

def test_buckling_branch_structure(space):
    csys = control.buckling_rod(space, [0, 0, 0], [1, 0, 0], 1.0, 1.0, 1.0)
    assert csys.params["threshold"] == pytest.approx(0.5)
    extra = [np.array([0.4, 0, 0, 0, r, 0]) for r in (0.3, 1e-3)]
    sol = control.solve_critical(csys, [0.4, 0, 0], n_seeds=10, seed=1, extra_seeds=extra)
    branches = set(p.branch for p in sol.points)
    assert "straight" in branches and "buckled" in branches
    for p in sol.points:
        if p.branch == "buckled":
            assert np.linalg.norm(p.qbar[3:] - p.qbar[:3]) == pytest.approx(0.5, abs=1e-8)
    sol_hi = control.solve_critical(csys, [0.8, 0, 0], n_seeds=10, seed=1,
                                    extra_seeds=[np.array([0.8, 0, 0, 0, 0.3, 0])])
    assert set(p.branch for p in sol_hi.points) == {"straight"}


def test_buckling_forces(space):
    csys = control.buckling_rod(space, [0, 0, 0], [1, 0, 0], 1.0, 1.0, 1.0)
    sol = control.solve_critical(csys, [0.8, 0, 0], n_seeds=6, seed=2)
    straight = [p for p in sol.points if p.branch == "straight"][0]
    f, _ = control.reduced_force(csys, straight)
    assert f[0] == pytest.approx((1 - 1 / 0.8) * 0.8, abs=1e-8)
    extra = [np.array([0.3, 0, 0, 0, 0.4, 0])]
    sol_lo = control.solve_critical(csys, [0.3, 0, 0], n_seeds=8, seed=2, extra_seeds=extra)
    buckled = [p for p in sol_lo.points if p.branch == "buckled"][0]
    fb, _ = control.reduced_force(csys, buckled)
    assert fb[0] == pytest.approx(-0.3, abs=1e-8)


def test_buckling_control_must_sit_on_the_axis(space):
    csys = control.buckling_rod(space, [0, 0, 0], [1, 0, 0], 1.0, 1.0, 1.0)
    sol = control.solve_critical(csys, [0.5, 0.3, 0.0], n_seeds=4, seed=0)
    assert len(sol.points) == 0  # the fiber misses the constraint set


# -- rod on a sphere -------------------------------------------------------------

def test_rod_sphere_two_points_and_forces(space):
    csys = control.rod_sphere(space, [0, 0, 0], 1.0, 1.0)
    q1 = np.array([0.6, 0.2, -0.1])
    r = np.linalg.norm(q1)
    sol = control.solve_critical(csys, q1, n_seeds=14, seed=2)
    assert len(sol.points) == 2
    assert not sol.section
    assert {p.branch for p in sol.points} == {"near", "far"}
    for p in sol.points:
        sgn = 1.0 if p.branch == "near" else -1.0
        assert np.linalg.norm(p.qbar[3:] - sgn * q1 / r) < 1e-8
        f, _ = control.reduced_force(csys, p)
        assert np.linalg.norm(f - (1 - sgn / r) * q1) < 1e-8


def test_rod_sphere_center_is_a_family(space):
    csys = control.rod_sphere(space, [0, 0, 0], 1.0, 1.0)
    sol = control.solve_critical(csys, np.zeros(3), n_seeds=16, seed=0)
    assert sol.family
    for p in sol.points:
        assert p.branch == "sphere"
        assert np.linalg.norm(p.qbar[3:]) == pytest.approx(1.0, abs=1e-8)


def test_reduced_force_needs_critical_point(space):
    csys = control.spring_chain(space, [0, 0, 0], 1.0, 1.0, 1.0)
    fake = control.CriticalPoint(
        qbar=np.array([1.0, 0, 0, 0.9, 0, 0]), control=np.array([1.0, 0, 0]),
        residual=0.5, branch="x",
    )
    with pytest.raises(ValueError):
        control.reduced_force(csys, fake)


# -- fold diagnostics -------------------------------------------------------------

def test_sphere_family_rank(space):
    assert control.sphere_family_rank(space, [0, 0, 1.0], 1.0) == 3
    assert control.sphere_family_rank(space, [0, 0, 1.0], 0.0) == 1
    assert control.sphere_family_rank(space, [0, 0, 1.0], 1e-12) == 1
    assert control.sphere_family_rank(space, [0, 0, 1.0], -0.7) == 3


def test_fold_pullback_vanishes(space):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(100):
        w = rng.standard_normal(3)
        w /= np.linalg.norm(w)
        r = float(rng.uniform(-2, 2))
        worst = max(worst, control.fold_pullback_residual(space, [0, 0, 0], 1.0, 1.0, w, r, rng))
    assert worst < 1e-9
