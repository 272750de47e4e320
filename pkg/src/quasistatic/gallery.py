"""Desk-scale showcase scenarios with self-verifying check suites.

Each scenario builds one of the catalog systems with canonical
parameters, runs the checks that pin down its characteristic behavior
(closed-form work values, constitutive verdicts, critical sets,
bifurcation thresholds, composition rules) and reports pass/fail per
check.  The suites are deterministic for a fixed seed and double as an
end-to-end exercise of the library.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import compose as compose_mod
from . import control, systems
from .equilibrium import EquilibriumStatus, jet_equilibrium_check, virtual_work_check
from .geometry import EuclideanSpace
from .legendre import Containment, ConstitutiveSet, skate_constitutive
from .processes import Process, work_along


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str


@dataclass
class ExampleReport:
    number: int
    title: str
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, label: str, passed, detail: str = ""):
        self.checks.append(Check(label, bool(passed), detail))


def _fmt(x) -> str:
    return f"{float(x):.9g}"


def _cross_check(system, q_samples, rng, n: int = 120, f_scale: float = 2.0, skip_band: float = 1e-6):
    """Exact and generic membership must agree away from decision bands."""
    exact = ConstitutiveSet(system, method="exact")
    generic = ConstitutiveSet(system, method="generic")
    disagreements = 0
    used = 0
    for i in range(n):
        q = q_samples[i % len(q_samples)]
        f = f_scale * rng.standard_normal(system.space.dim)
        me = exact.membership(q, f)
        mg = generic.membership(q, f)
        if min(abs(me.margin), abs(mg.margin)) <= skip_band:
            continue
        used += 1
        if me.containment != mg.containment:
            disagreements += 1
    return disagreements, used


def example_1(seed: int) -> ExampleReport:
    rep = ExampleReport(1, "linear spring to a fixed point")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    k = 2.0
    sys_ = systems.spring(sp, [0.0, 0.0, 0.0], k)
    rep.add("energy vanishes at the center", abs(sys_.potential([0.0, 0.0, 0.0])) < 1e-15, "U(center)=0")
    u1 = sys_.potential([1.0, 0.0, 0.0])
    rep.add("energy at unit offset", abs(u1 - 1.0) < 1e-12, f"U={_fmt(u1)} expected 1")
    q = rng.standard_normal(3)
    v = rng.standard_normal(3)
    rep.add("work form is the energy differential", systems.check_potential_consistency(sys_, q, v), "finite differences at 1e-8")
    total = work_along(sys_, Process.line(sp, [0, 0, 0], [1.0, 0, 0], 1.0)).total
    rep.add("straight-line work equals the energy difference", abs(total - 1.0) < 1e-9, f"W={_fmt(total)}")
    cs = ConstitutiveSet(sys_)
    qq = np.array([1.0, 0.0, 0.0])
    rep.add("balanced force k g(q-q0) accepted", cs.contains(qq, [2.0, 0.0, 0.0]) == Containment.IN, "f=(2,0,0)")
    rep.add("unbalanced force rejected", cs.contains(qq, [2.0, 0.3, 0.0]) == Containment.OUT, "f=(2,0.3,0)")
    vd = jet_equilibrium_check(sys_, [0.0, 0.0, 0.0], order=2, seed=seed)
    rep.add("center is a sampled equilibrium", vd.status == EquilibriumStatus.EQUILIBRIUM_SAMPLED, str(vd.status.value))
    vd2 = virtual_work_check(sys_, [0.4, 0.0, 0.0], seed=seed)
    rep.add("offset point fails the virtual-work inequality", vd2.status == EquilibriumStatus.NOT_EQUILIBRIUM, str(vd2.status.value))
    bad, used = _cross_check(sys_, [rng.standard_normal(3) for _ in range(8)], rng)
    rep.add("exact and generic membership agree", bad == 0, f"{used} decisive samples")
    return rep


def example_2(seed: int) -> ExampleReport:
    rep = ExampleReport(2, "bilinear work form, symmetric and not")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(2)
    center = np.zeros(2)
    sym = np.array([[2.0, 0.5], [0.5, 1.0]])
    anti = np.array([[0.0, 1.0], [-1.0, 0.0]])
    s_sym = systems.bilinear(sp, center, sym)
    s_anti = systems.bilinear(sp, center, anti)
    rep.add("orthogonal displacement does no work (identity form)",
            abs(systems.bilinear(sp, center, np.eye(2)).theta([1.0, 0.0], [0.0, 1.0])) < 1e-15, "omega(e1, e2)=0")
    q = rng.standard_normal(2)
    v = rng.standard_normal(2)
    rep.add("symmetric form has the quadratic potential", systems.check_potential_consistency(s_sym, q, v), "dU check at 1e-8")
    rep.add("antisymmetric form has no potential", s_anti.potential is None, "no U attached")
    out = work_along(s_anti, Process.line(sp, [0, 0], [1.0, 0.3], 1.0)).total
    back = work_along(s_anti, Process.line(sp, [1.0, 0.3], [-0.7, 0.4], 1.0)).total
    ret = work_along(s_anti, Process.line(sp, [0.3, 0.7], [-0.3, -0.7], 1.0)).total
    loop = out + back + ret
    rep.add("round trip does net work without symmetry", abs(loop) > 1e-6, f"closed-loop work {_fmt(loop)}")
    cs = ConstitutiveSet(s_sym)
    qq = rng.standard_normal(2)
    rep.add("balanced force is the form against the offset", cs.contains(qq, sym.T @ qq) == Containment.IN, "f = omega^T (q-q0)")
    bad, used = _cross_check(s_sym, [rng.standard_normal(2) for _ in range(8)], rng)
    rep.add("exact and generic membership agree", bad == 0, f"{used} decisive samples")
    return rep


def example_3(seed: int) -> ExampleReport:
    rep = ExampleReport(3, "isotropic and anisotropic friction")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    iso = systems.friction(sp)
    rho = np.diag([4.0, 1.0, 1.0])
    aniso = systems.friction(sp, rho)
    q = rng.standard_normal(3)
    ok = all(systems.check_homogeneity(iso, q, rng.standard_normal(3)) for _ in range(10))
    rep.add("work form is positive homogeneous", ok, "factors 0.5, 2, 10")
    L = 2.5
    total = work_along(iso, Process.line(sp, [0, 0, 0], [0, 1.0, 0], L)).total
    rep.add("unit-speed work is the arc length", abs(total - L) < 1e-9, f"W={_fmt(total)} over length {L}")
    th = aniso.theta([0.0, 0.0, 0.0], [1.0, 0.0, 0.0])
    rep.add("anisotropic value", abs(th - 2.0) < 1e-12, "sqrt(4)=2 along the heavy axis")
    cs = ConstitutiveSet(iso)
    rep.add("small force inside the unit ball", cs.contains(q, 0.5 * _unit(rng, 3)) == Containment.IN, "|f|=0.5")
    rep.add("large force outside", cs.contains(q, 2.0 * _unit(rng, 3)) == Containment.OUT, "|f|=2")
    # Schwarz step: admissible forces never beat the friction form
    fs = rng.standard_normal((200, 3))
    fs = fs / np.sqrt(np.einsum("ij,jk,ik->i", fs, np.linalg.inv(rho), fs))[:, None]
    fs *= rng.uniform(0.1, 1.0, 200)[:, None]
    vs = rng.standard_normal((10_000, 3))
    lhs = fs[:50] @ vs.T
    rhs = np.sqrt(np.einsum("ij,jk,ik->i", vs, rho, vs))[None, :]
    worst = float((lhs - rhs).max())
    rep.add("admissible forces obey the cone inequality", worst <= 1e-9, f"max excess {_fmt(worst)} over 10^4 displacements")
    bad, used = _cross_check(aniso, [rng.standard_normal(3) for _ in range(8)], rng)
    rep.add("exact and generic membership agree", bad == 0, f"{used} decisive samples")
    boundary = ConstitutiveSet(systems.friction(EuclideanSpace(2)), seed=seed).sample_boundary([0.0, 0.0], 64)
    rep.data["ball_boundary"] = np.asarray(boundary)
    return rep


def example_4(seed: int) -> ExampleReport:
    rep = ExampleReport(4, "rigid rod: point on a sphere")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    a = 1.0
    sys_ = systems.rod(sp, [0.0, 0.0, 0.0], a)
    q = _unit(rng, 3) * a
    vset = sys_.virtual_at(q)
    rep.add("virtual displacements form the tangent plane", vset.subspace_basis().shape[1] == 2, "dimension 2 = dim Q - 1")
    rep.add("tangent displacement admitted", vset.contains(_tangent(rng, q)), "orthogonal to the radius")
    rep.add("radial displacement rejected", not vset.contains(q), "along the radius")
    cs = ConstitutiveSet(sys_)
    rep.add("radial reaction accepted", cs.contains(q, 3.0 * sp.lower(q) / a**2) == Containment.IN, "f parallel to g(q-q0)")
    f_bad = 3.0 * sp.lower(q) + 0.5 * sp.lower(_tangent(rng, q))
    rep.add("tangential component rejected", cs.contains(q, f_bad) == Containment.OUT, "mixed direction")
    arc = Process.from_callable(sp, lambda s: np.array([np.cos(s), np.sin(s), 0.0]), 0.8, order=3,
                                dgamma=lambda s: np.array([-np.sin(s), np.cos(s), 0.0]))
    total = work_along(sys_, arc).total
    rep.add("sphere arcs do no work", abs(total) < 1e-12, f"W={_fmt(total)} along a great-circle arc")
    bad, used = _cross_check(sys_, [_unit(rng, 3) * a for _ in range(8)], rng)
    rep.add("exact and generic membership agree", bad == 0, f"{used} decisive samples")
    return rep


def example_5(seed: int) -> ExampleReport:
    rep = ExampleReport(5, "one-sided corner constraints")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    sys_ = systems.corner(sp, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    inner = np.array([0.5, 0.5, 0.0])
    rep.add("interior point is unconstrained", isinstance(sys_.virtual_at(inner), systems.FullSpace), "full space inside")
    vset = sys_.virtual_at(np.zeros(3))
    rep.add("corner admits the inward cone", vset.contains([1.0, 1.0, 0.2]) and not vset.contains([-1.0, 0.0, 0.0]),
            "inward yes, outward no")
    cs = ConstitutiveSet(sys_)
    m_in = cs.membership(np.zeros(3), np.array([-1.0, -0.5, 0.0]))
    rep.add("wall reactions are balanced", m_in.containment != Containment.OUT, f"margin {_fmt(m_in.margin)}")
    rep.add("pulling force is not balanced", cs.contains(np.zeros(3), np.array([0.5, -0.5, 0.0])) == Containment.OUT, "positive component")
    rep.add("third-axis force is not balanced", cs.contains(np.zeros(3), np.array([-1.0, -0.5, 0.3])) == Containment.OUT, "off the wall normals")
    lin = systems.polynomial_potential(sp, [((1, 0, 0), 1.0), ((0, 1, 0), 1.0)])
    loaded = compose_mod.compose(sys_, lin)
    vw = virtual_work_check(loaded, np.zeros(3), seed=seed)
    rep.add("pressing load passes the first-order test", vw.status != EquilibriumStatus.NOT_EQUILIBRIUM, str(vw.status.value))
    vw2 = virtual_work_check(compose_mod.compose(sys_, systems.polynomial_potential(sp, [((1, 0, 0), -1.0)])), np.zeros(3), seed=seed)
    rep.add("pulling load fails the first-order test", vw2.status == EquilibriumStatus.NOT_EQUILIBRIUM, str(vw2.status.value))
    bad, used = _cross_check(sys_, [np.zeros(3)], rng)
    rep.add("exact and generic membership agree", bad == 0, f"{used} decisive samples")
    return rep


def example_6(seed: int) -> ExampleReport:
    rep = ExampleReport(6, "knife-edge skate")
    rng = np.random.default_rng(seed)
    sys_ = systems.skate()
    phi = float(rng.uniform(0.0, 2.0 * np.pi))
    q = np.array([0.3, -0.2, phi])
    blade = np.array([np.cos(phi), np.sin(phi)])
    perp = np.array([-np.sin(phi), np.cos(phi)])
    vset = sys_.virtual_at(q)
    rep.add("sliding along the blade is admissible", vset.contains(np.append(blade, 0.4)), "with any heading change")
    rep.add("sideways slip is inadmissible", not vset.contains(np.append(perp, 0.0)), "perpendicular to the blade")
    rep.add("transverse force balanced", skate_constitutive(sys_, q, perp, 0.0) == Containment.IN, "f perpendicular, no torque")
    rep.add("force along the blade unbalanced", skate_constitutive(sys_, q, blade, 0.0) == Containment.OUT, "f parallel")
    rep.add("torque unbalanced", skate_constitutive(sys_, q, np.zeros(2), 0.3) == Containment.OUT, "tau nonzero")
    track = Process.line(sys_.space, q, np.append(blade, 0.0), 1.2)
    rep.add("blade tracks do no work", abs(work_along(sys_, track).total) < 1e-12, "zero work form")
    bad, used = _cross_check(sys_, [np.array([0.1, 0.2, a]) for a in rng.uniform(0, 2 * np.pi, 6)], rng)
    rep.add("exact and generic membership agree", bad == 0, f"{used} decisive samples")
    return rep


def example_7(seed: int) -> ExampleReport:
    rep = ExampleReport(7, "dry friction on a half-space boundary")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    nu = 0.5
    sys_ = systems.coulomb(sp, [0.0, 0.0, 0.0], [0.0, 0.0, 1.0], nu)
    qb = np.array([0.3, -0.1, 0.0])
    vset = sys_.virtual_at(qb)
    # membership against the defining inequality, vectorized
    dq = rng.standard_normal((10_000, 3))
    lhs = dq[:, 2]
    rhs = nu * np.sqrt(np.maximum(np.einsum("ij,ij->i", dq, dq) - dq[:, 2] ** 2, 0.0))
    want = lhs >= rhs - 1e-9 * (1.0 + np.linalg.norm(dq, axis=1))
    got = np.array([vset.contains(row) for row in dq[:2000]])
    rep.add("cone membership matches the defining inequality", bool(np.all(got == want[:2000])), "2000 random displacements")
    rep.add("interior of the region is unconstrained", isinstance(sys_.virtual_at(np.array([0, 0, 0.5])), systems.FullSpace), "full space off the wall")
    nu0 = systems.coulomb(sp, [0, 0, 0], [0, 0, 1.0], 0.0)
    rep.add("frictionless limit gives the half-space of displacements",
            isinstance(nu0.virtual_at(qb), systems.HalfSpaceCone), "nu=0 on the boundary")
    cs = ConstitutiveSet(sys_)
    rep.add("pure pressing force balanced", cs.contains(qb, [0.0, 0.0, -1.0]) == Containment.IN, "f = -g(k)")
    rep.add("pure tangential force unbalanced", cs.contains(qb, [1.0, 0.0, 0.0]) == Containment.OUT, "f tangent")
    inside = np.array([0.3, 0.0, -1.0])   # slip 0.3 <= nu * 1
    outside = np.array([0.8, 0.0, -1.0])  # slip 0.8 > nu * 1
    rep.add("cone rule on mixed forces", cs.contains(qb, inside) == Containment.IN and cs.contains(qb, outside) == Containment.OUT,
            "slip vs nu * pressing")
    rep.add("interior admits only the zero force",
            cs.contains(np.array([0, 0, 0.4]), [0.0, 0.0, 0.0]) == Containment.IN
            and cs.contains(np.array([0, 0, 0.4]), [0.0, 0.0, -0.2]) == Containment.OUT, "off the wall")
    bad, used = _cross_check(sys_, [qb, np.array([-0.2, 0.4, 0.0])], rng)
    rep.add("exact and generic membership agree", bad == 0, f"{used} decisive samples")
    boundary = cs.sample_boundary(qb, 48, seed=seed)
    rep.data["cone_boundary"] = np.asarray(boundary)
    return rep


def example_8(seed: int) -> ExampleReport:
    rep = ExampleReport(8, "hidden point behind a spring chain")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    k10 = k20 = k21 = 1.0
    csys = control.spring_chain(sp, [0.0, 0.0, 0.0], k10, k20, k21)
    keff = csys.params["effective_stiffness"]
    rep.add("effective stiffness value", abs(keff - 1.5) < 1e-15, f"k_eff={_fmt(keff)} for unit constants")
    q1 = np.array([0.8, -0.3, 0.2])
    sol = control.solve_critical(csys, q1, seed=seed)
    rep.add("one internal equilibrium per control point", sol.section and len(sol.points) == 1, f"{len(sol.points)} point(s)")
    q2_closed = control.spring_chain_section(csys, q1)
    err = np.linalg.norm(sol.points[0].qbar[3:] - q2_closed)
    rep.add("equilibrium lies on the section", err < 1e-8, f"offset {_fmt(err)}")
    on = np.concatenate([q1, q2_closed])
    rep.add("section points have zero residual", control.critical_residual(csys, on) < 1e-12, "vertical gradient vanishes")
    delta = np.array([0.01, -0.02, 0.005])
    res = control.critical_residual(csys, np.concatenate([q1, q2_closed + delta]))
    expect = (k20 + k21) * np.linalg.norm(delta)
    rep.add("perturbation residual scales with the spring sum", abs(res - expect) < 1e-12,
            f"residual {_fmt(res)} vs (k20+k21)|delta|={_fmt(expect)}")
    f, _ = control.reduced_force(csys, sol.points[0])
    ferr = np.linalg.norm(f - keff * sp.lower(q1))
    rep.add("reduced force is the one-spring law", ferr < 1e-8, f"|f - k_eff g(q1-q0)| = {_fmt(ferr)}")
    worst = 0.0
    for _ in range(5):
        qc = rng.standard_normal(3)
        solc = control.solve_critical(csys, qc, seed=seed)
        fc, _ = control.reduced_force(csys, solc.points[0])
        worst = max(worst, float(np.linalg.norm(fc - keff * sp.lower(qc))))
    rep.add("hidden point can be ignored across controls", worst < 1e-8, f"worst law deviation {_fmt(worst)}")
    return rep


def _buckling_branches(csys, x: float, seed: int):
    q = np.array([x, 0.0, 0.0])
    radius_guess = np.sqrt(max(csys.params["threshold"] ** 2 - x**2, 0.0))
    extra = []
    for r in (radius_guess, 1e-3, 1e-4, 0.3):
        if r <= 0:
            continue
        extra.append(np.array([x, 0.0, 0.0, 0.0, r, 0.0]))
        extra.append(np.array([x, 0.0, 0.0, 0.0, 0.0, r]))
    sol = control.solve_critical(csys, q, n_seeds=10, seed=seed, extra_seeds=extra)
    return sol, sorted(set(p.branch for p in sol.points) - {"unresolved"})


def example_9(seed: int) -> ExampleReport:
    rep = ExampleReport(9, "discrete buckling of a compressed rod")
    sp = EuclideanSpace(3)
    a, k, k_perp = 1.0, 1.0, 1.0
    csys = control.buckling_rod(sp, [0.0, 0.0, 0.0], [1.0, 0.0, 0.0], a, k, k_perp)
    threshold = csys.params["threshold"]
    rep.add("threshold value", abs(threshold - 0.5) < 1e-15, f"k a/(k+k')={_fmt(threshold)}")
    sol_hi, branches_hi = _buckling_branches(csys, 0.8, seed)
    rep.add("beyond the threshold only the straight state", branches_hi == ["straight"], f"branches {branches_hi}")
    sol_lo, branches_lo = _buckling_branches(csys, 0.4, seed)
    rep.add("compressed past the threshold the rod buckles", branches_lo == ["buckled", "straight"], f"branches {branches_lo}")
    buckled = [p for p in sol_lo.points if p.branch == "buckled"]
    L_err = max(abs(np.linalg.norm(p.qbar[3:] - p.qbar[:3]) - threshold) for p in buckled)
    rep.add("buckled states keep the critical length", L_err < 1e-6, f"| |q2-q1| - {_fmt(threshold)} | <= {_fmt(L_err)}")

    lo, hi = 0.3, 0.7
    for _ in range(22):
        mid = 0.5 * (lo + hi)
        _, branches = _buckling_branches(csys, mid, seed)
        if "buckled" in branches:
            lo = mid
        else:
            hi = mid
    found = 0.5 * (lo + hi)
    rep.add("bisection locates the threshold", abs(found - threshold) < 1e-6, f"found {_fmt(found)}")

    straight = [p for p in sol_hi.points if p.branch == "straight"][0]
    f, _ = control.reduced_force(csys, straight)
    expect = k * (1.0 - a / 0.8) * 0.8
    rep.add("straight-branch force follows the rod law", abs(f[0] - expect) < 1e-8,
            f"<f,u>={_fmt(f[0])} vs k(1-a/x)x={_fmt(expect)}")
    fb, _ = control.reduced_force(csys, buckled[0])
    rep.add("buckled-branch force follows the plane spring", abs(fb[0] - (-k_perp * 0.4)) < 1e-8,
            f"<f,u>={_fmt(fb[0])} vs -k'x={_fmt(-k_perp*0.4)}")

    xs = np.linspace(0.05, 0.95, 19)
    radii = [np.sqrt(max(threshold**2 - x**2, 0.0)) for x in xs]
    rep.data["bifurcation"] = {"x": xs, "radius": np.array(radii), "threshold": threshold}
    return rep


def example_10(seed: int) -> ExampleReport:
    rep = ExampleReport(10, "sphere-bound point dragged by a spring")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    a, k = 1.0, 1.0
    csys = control.rod_sphere(sp, [0.0, 0.0, 0.0], a, k)
    q1 = np.array([0.6, 0.2, -0.1])
    r = float(np.linalg.norm(q1))
    sol = control.solve_critical(csys, q1, n_seeds=14, seed=seed)
    rep.add("two internal equilibria off the center", len(sol.points) == 2, f"{len(sol.points)} points")
    rep.add("critical set is not a section", not sol.section, "fold over the center")
    pole_err = 0.0
    force_err = 0.0
    for p in sol.points:
        sgn = 1.0 if p.branch == "near" else -1.0
        pole_err = max(pole_err, float(np.linalg.norm(p.qbar[3:] - sgn * a * q1 / r)))
        f, _ = control.reduced_force(csys, p)
        expect = k * (1.0 - sgn * a / r) * sp.lower(q1)
        force_err = max(force_err, float(np.linalg.norm(f - expect)))
    rep.add("equilibria sit at the poles along the pull", pole_err < 1e-8, f"worst offset {_fmt(pole_err)}")
    rep.add("reduced force law on both branches", force_err < 1e-8, f"worst deviation {_fmt(force_err)}")
    mag = k * abs(0.0 - a)  # at the center the force magnitude is k a for every direction
    rep.add("above the center a whole sphere of equilibria",
            abs(mag - k * a) < 1e-15, "family (w, r=0) |-> force k a g(w); reported as a family, not points")
    rep.add("family projection has full rank off the center", control.sphere_family_rank(sp, [0.0, 0.0, 1.0], 1.0) == 3, "rank 3 at r=1")
    rep.add("family projection drops rank at the center", control.sphere_family_rank(sp, [0.0, 0.0, 1.0], 0.0) == 1, "rank 1 at r=0")
    rep.add("numerical rank convention at tiny reach", control.sphere_family_rank(sp, [0.0, 0.0, 1.0], 1e-12) == 1, "r=1e-12 counts as 0")
    worst = 0.0
    for _ in range(100):
        w = _unit(rng, 3)
        rr = float(rng.uniform(-2.0, 2.0))
        worst = max(worst, control.fold_pullback_residual(sp, [0, 0, 0], a, k, w, rr, rng))
    rep.add("reduced family is Lagrangian", worst < 1e-9, f"pulled-back two-form residual {_fmt(worst)}")
    rs = np.linspace(-2.0, 2.0, 41)
    rep.data["force_fold"] = {"r": rs, "force": k * (rs - a)}
    return rep


def example_11(seed: int) -> ExampleReport:
    rep = ExampleReport(11, "two rigid rods composed")
    rng = np.random.default_rng(seed)
    sp = EuclideanSpace(3)
    a = 1.0
    rod1 = systems.rod(sp, [0.0, 0.0, 0.0], a)

    rod2 = systems.rod(sp, [a, 0.0, 0.0], a)
    q_on_circle = np.array([0.5 * a, np.sqrt(3.0) / 2.0 * a, 0.0])
    report = compose_mod.clean_check(rod1, rod2, q_on_circle)
    rep.add("overlapping spheres intersect cleanly", report.verdict == compose_mod.CleanVerdict.CLEAN,
            f"virtual dim {report.virtual_dim} = tangent dim {report.linearized_dim}")
    composed = compose_mod.compose(rod1, rod2)
    vdim = composed.virtual_at(q_on_circle).subspace_basis().shape[1]
    rep.add("composed virtual set is the circle tangent", vdim == 1, f"dimension {vdim} = dim Q - 2")
    sum_rep = compose_mod.minkowski_sum_check(rod1, rod2, q_on_circle, trials=500, seed=seed)
    rep.add("constitutive sets add fiberwise", sum_rep.max_violation < 1e-8,
            f"max violation {_fmt(sum_rep.max_violation)} over {sum_rep.trials} covectors")
    cs = ConstitutiveSet(composed)
    f_member = 0.7 * sp.lower(q_on_circle) + 1.3 * sp.lower(q_on_circle - np.array([a, 0, 0]))
    rep.add("normal combinations are balanced", cs.contains(q_on_circle, f_member) == Containment.IN, "span of the two radial reactions")
    tangent = np.cross(q_on_circle, q_on_circle - np.array([a, 0, 0]))
    rep.add("circle-tangent forces are not balanced", cs.contains(q_on_circle, tangent) == Containment.OUT, "annihilator violated")

    rod2_far = systems.rod(sp, [2.0 * a, 0.0, 0.0], a)
    q_mid = np.array([a, 0.0, 0.0])
    report2 = compose_mod.clean_check(rod1, rod2_far, q_mid)
    rep.add("touching spheres do not intersect cleanly", report2.verdict == compose_mod.CleanVerdict.NOT_CLEAN,
            f"virtual dim {report2.virtual_dim} vs point region; obstruction {_fmt(report2.obstruction)}")
    rep.add("non-clean case carries a warning", report2.warning is not None, "fallback set announced")
    composed2 = compose_mod.compose(rod1, rod2_far)
    cs2 = ConstitutiveSet(composed2)
    rep.add("touching case keeps only the common-normal reactions",
            cs2.contains(q_mid, sp.lower(q_mid)) == Containment.IN
            and cs2.contains(q_mid, np.array([0.0, 1.0, 0.0])) == Containment.OUT,
            "set generated by the intersected displacements")
    rep.data["geometry"] = {"centers_clean": np.array([[0.0, 0.0, 0.0], [a, 0.0, 0.0]]),
                            "centers_touching": np.array([[0.0, 0.0, 0.0], [2.0 * a, 0.0, 0.0]]),
                            "radius": a}
    _ = rng
    return rep


def _unit(rng, dim: int) -> np.ndarray:
    while True:
        v = rng.standard_normal(dim)
        n = np.linalg.norm(v)
        if n > 1e-9:
            return v / n


def _tangent(rng, q: np.ndarray) -> np.ndarray:
    while True:
        v = rng.standard_normal(q.size)
        v = v - (v @ q) / (q @ q) * q
        n = np.linalg.norm(v)
        if n > 1e-9:
            return v / n


_EXAMPLES = {
    1: example_1,
    2: example_2,
    3: example_3,
    4: example_4,
    5: example_5,
    6: example_6,
    7: example_7,
    8: example_8,
    9: example_9,
    10: example_10,
    11: example_11,
}


def run_example(number: int, seed: int = 0) -> ExampleReport:
    if number not in _EXAMPLES:
        raise ValueError(f"example number must be 1..11, got {number}")
    return _EXAMPLES[number](seed)
