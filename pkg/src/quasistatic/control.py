"""Partially controlled systems: fibrations, critical sets, reduced forces.

Control acts through a linear-affine surjection from an internal
configuration space onto a control space.  A configuration is critical
when the work form is non-negative on every vertical (uncontrolled)
admissible displacement; for potential systems this reduces to the
vertical gradient of the internal energy vanishing.  The reduced force
is the covector on the control space that balances the work form
through the projection.

Three classic scenarios are provided as builders: a chain of two springs
behind a controlled point (whose internal point can be ignored), a
discrete buckling rod with a pitchfork bifurcation, and a point on a
sphere dragged by a spring (a fold singularity over the sphere center).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .geometry import EuclideanSpace, product_space
from .systems import Constraint, FullSpace, LinearSubspace, StaticSystem, _dot, _mat_vec

GRAD_TOL = 1e-10
NEWTON_MAX_ITER = 100
FD_STEP = 1e-6
DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class Fibration:
    """Linear-affine surjection eta(qbar) = matrix @ qbar + offset."""

    total: EuclideanSpace
    base: EuclideanSpace
    matrix: np.ndarray
    offset: np.ndarray | None = None

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.shape != (self.base.dim, self.total.dim):
            raise ValueError("projection matrix shape must be (base dim, total dim)")
        if np.linalg.matrix_rank(m) != self.base.dim:
            raise ValueError("projection must be surjective")
        object.__setattr__(self, "matrix", m)
        off = np.zeros(self.base.dim) if self.offset is None else np.asarray(self.offset, dtype=float)
        object.__setattr__(self, "offset", off)

    def project(self, qbar) -> np.ndarray:
        return self.matrix @ np.asarray(qbar, dtype=float) + self.offset

    def project_vector(self, v) -> np.ndarray:
        return self.matrix @ np.asarray(v, dtype=float)

    def vertical_basis(self) -> np.ndarray:
        """Orthonormal basis of ker(T eta), shape (total dim, vertical dim)."""
        _, s, vt = np.linalg.svd(self.matrix)
        rank = int((s > 1e-12 * s[0]).sum())
        return vt[rank:].T

    def fiber_point(self, q) -> np.ndarray:
        """Least-norm solution of eta(qbar) = q."""
        sol, *_ = np.linalg.lstsq(self.matrix, np.asarray(q, dtype=float) - self.offset, rcond=None)
        return sol


@dataclass(frozen=True)
class ControlledSystem:
    system: StaticSystem
    fibration: Fibration
    labeler: object = None  # qbar -> branch name
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CriticalPoint:
    qbar: np.ndarray
    control: np.ndarray
    residual: float
    branch: str


@dataclass(frozen=True)
class CriticalSolve:
    points: tuple
    section: bool  # exactly one internal equilibrium per control point
    family: bool  # the solutions look like a continuum, not isolated points


def _subspace_intersection(b1: np.ndarray, b2: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(b1) ∩ span(b2); bases are column matrices."""
    if b1.shape[1] == 0 or b2.shape[1] == 0:
        return np.zeros((b1.shape[0], 0))
    stacked = np.hstack([b1, -b2])
    _, s, vt = np.linalg.svd(stacked)
    rank = int((s > 1e-12 * max(1.0, s[0])).sum()) if s.size else 0
    null = vt[rank:].T
    if null.size == 0:
        return np.zeros((b1.shape[0], 0))
    vecs = b1 @ null[: b1.shape[1]]
    q, r = np.linalg.qr(vecs)
    keep = np.abs(np.diag(r)) > 1e-10 * max(1.0, np.abs(r).max())
    return q[:, keep]


def vertical_admissible_basis(csys: ControlledSystem, qbar: np.ndarray) -> np.ndarray:
    """Basis of vertical directions that are admissible displacements."""
    vset = csys.system.virtual_at(qbar)
    vert = csys.fibration.vertical_basis()
    basis = vset.subspace_basis()
    if basis is None:
        raise ValueError("vertical-admissible basis needs a subspace virtual set")
    if isinstance(vset, FullSpace):
        return vert
    return _subspace_intersection(vert, basis)


def critical_residual(csys: ControlledSystem, qbar) -> float:
    """How far a configuration is from vertical equilibrium.

    For a potential system with reversible vertical displacements this
    is the norm of the vertical gradient of the internal energy; in
    general it is the largest sampled value of minus the work form over
    unit vertical admissible displacements.
    """
    system = csys.system
    qbar = np.asarray(qbar, dtype=float)
    if not system.admissible(qbar):
        raise ValueError("configuration is outside the admissible region")
    vset = system.virtual_at(qbar)
    if system.potential_grad is not None and vset.reversible and vset.subspace_basis() is not None:
        basis = vertical_admissible_basis(csys, qbar)
        if basis.shape[1] == 0:
            return 0.0
        grad = np.asarray(system.potential_grad(qbar), dtype=float)
        return float(np.linalg.norm(basis.T @ grad))
    if system.theta_is_zero:
        return 0.0
    rng = np.random.default_rng(0)
    vert = csys.fibration.vertical_basis()
    worst = 0.0
    for z in np.vstack([np.eye(vert.shape[1]), -np.eye(vert.shape[1]), rng.standard_normal((64, vert.shape[1]))]):
        v = vert @ z
        nrm = np.linalg.norm(v)
        if nrm < 1e-12 or not vset.contains(v):
            continue
        worst = max(worst, -float(system.theta(qbar, v / nrm)))
    return worst


def _stationarity_residual(csys: ControlledSystem, qbar: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Fiber, constraint and projected-vertical-gradient residuals.

    The vertical part uses the projector onto the vertical admissible
    subspace (basis-independent, hence smooth in qbar), which keeps the
    finite-difference Jacobian honest; the system is overdetermined and
    solved in the Gauss-Newton sense.
    """
    system = csys.system
    fiber = csys.fibration.project(qbar) - q
    cons = np.array([float(c.value(qbar)) for c in system.equality_constraints()])
    if system.potential_grad is not None:
        basis = _frozen_vertical_basis(csys, qbar)
        grad = np.asarray(system.potential_grad(qbar), dtype=float)
        vert = basis @ (basis.T @ grad) if basis.shape[1] else np.zeros(qbar.size)
    else:
        vert = np.zeros(0)
    return np.concatenate([fiber, cons, vert])


def solve_critical(csys: ControlledSystem, q, n_seeds: int = 12, seed: int = 0, extra_seeds=()) -> CriticalSolve:
    """All critical internal configurations above one control point.

    Damped Newton (least-squares steps, so continua of solutions are
    handled) on the fiber, constraint and vertical-gradient residuals,
    started from the seeded fiber neighborhood.  Converged points are
    deduplicated and labeled by the scenario's branch predicates.
    """
    system = csys.system
    fib = csys.fibration
    q = np.asarray(q, dtype=float)
    rng = np.random.default_rng(seed)
    base_point = fib.fiber_point(q)
    vert = fib.vertical_basis()

    seeds = [base_point.copy()]
    scales = [0.05, 0.2, 0.5, 1.0, 2.0]
    i = 0
    while len(seeds) < n_seeds:
        z = rng.standard_normal(vert.shape[1])
        z /= max(np.linalg.norm(z), 1e-12)
        seeds.append(base_point + scales[i % len(scales)] * (vert @ z))
        i += 1
    seeds.extend(np.asarray(s, dtype=float) for s in extra_seeds)

    found = []
    for s0 in seeds:
        sol = _newton_solve(csys, s0, q)
        if sol is not None:
            found.append(sol)

    points = []
    for qbar in found:
        if any(np.linalg.norm(qbar - p) <= DEDUP_TOL for p in points):
            continue
        points.append(qbar)
    crit = []
    for qbar in points:
        branch = csys.labeler(qbar) if csys.labeler is not None else f"branch-{len(crit)}"
        crit.append(
            CriticalPoint(
                qbar=qbar,
                control=fib.project(qbar),
                residual=critical_residual(csys, qbar),
                branch=branch,
            )
        )
    crit.sort(key=lambda cp: (cp.branch, tuple(np.round(cp.qbar, 9))))
    family = len(crit) > max(6, n_seeds // 2)
    return CriticalSolve(points=tuple(crit), section=len(crit) == 1, family=family)


def _newton_solve(csys: ControlledSystem, qbar0: np.ndarray, q: np.ndarray):
    qbar = qbar0.copy()
    n = qbar.size
    for _ in range(NEWTON_MAX_ITER):
        res = _stationarity_residual(csys, qbar, q)
        if np.linalg.norm(res) <= GRAD_TOL:
            return qbar
        jac = np.empty((res.size, n))
        for j in range(n):
            e = np.zeros(n)
            e[j] = FD_STEP
            rp = _stationarity_residual(csys, qbar + e, q)
            rm = _stationarity_residual(csys, qbar - e, q)
            jac[:, j] = (rp - rm) / (2 * FD_STEP)
        step, *_ = np.linalg.lstsq(jac, -res, rcond=None)
        lam = 1.0
        base_norm = np.linalg.norm(res)
        for _ in range(30):
            trial = qbar + lam * step
            if np.linalg.norm(_stationarity_residual(csys, trial, q)) < base_norm:
                qbar = trial
                break
            lam *= 0.5
        else:
            return None
    if np.linalg.norm(_stationarity_residual(csys, qbar, q)) <= GRAD_TOL:
        return qbar
    return None


def _frozen_vertical_basis(csys: ControlledSystem, qbar: np.ndarray) -> np.ndarray:
    try:
        return vertical_admissible_basis(csys, qbar)
    except ValueError:
        return np.zeros((qbar.size, 0))


def reduced_force(csys: ControlledSystem, critical: CriticalPoint, residual_tol: float = 1e-6):
    """Control-space covector balancing the work form at a critical point.

    Solves <f, T eta(w)> = theta(w) over a basis of admissible
    displacements, in the least-squares sense; the minimum-norm solution
    is returned together with the rank actually determined (directions
    outside the projected admissible set stay zero).
    """
    system = csys.system
    qbar = critical.qbar
    if critical.residual > residual_tol:
        raise ValueError("reduced force is defined at critical points only")
    vset = system.virtual_at(qbar)
    basis = vset.subspace_basis()
    if basis is None:
        raise ValueError("reduced force needs reversible (subspace) displacements")
    rows = []
    rhs = []
    for i in range(basis.shape[1]):
        w = basis[:, i]
        rows.append(csys.fibration.project_vector(w))
        rhs.append(float(system.theta(qbar, w)))
    a = np.vstack(rows)
    b = np.asarray(rhs)
    f, _, rank, _ = np.linalg.lstsq(a, b, rcond=None)
    resid = np.linalg.norm(a @ f - b)
    if resid > 1e-8 * (1.0 + np.linalg.norm(b)):
        raise ValueError("work form is inconsistent with the fibration at this point")
    return f, int(rank)


# ---------------------------------------------------------------------------
# scenario builders
# ---------------------------------------------------------------------------

def _block_metric_energy(space: EuclideanSpace):
    g = space.metric

    def sq(u):
        return _dot(_mat_vec(g, u), u)

    return sq


def spring_chain(space: EuclideanSpace, anchor, k10: float, k20: float, k21: float) -> ControlledSystem:
    """Controlled point q1 and hidden point q2, all pairwise spring-coupled to an anchor.

    The critical set is the graph of a section, so the hidden point can
    be ignored: the reduced behavior is a single spring of stiffness
    k10 + k20 k21 / (k20 + k21).
    """
    for k in (k10, k20, k21):
        if k <= 0:
            raise ValueError("spring constants must be positive")
    anchor = space._coords(anchor)
    total = product_space(space, space)
    d = space.dim
    g = space.metric
    sq = _block_metric_energy(space)

    def potential(qbar):
        q1 = qbar[:d]
        q2 = qbar[d:]
        d10 = [a - b for a, b in zip(q1, anchor)]
        d20 = [a - b for a, b in zip(q2, anchor)]
        d21 = [a - b for a, b in zip(q2, q1)]
        return 0.5 * k10 * sq(d10) + 0.5 * k20 * sq(d20) + 0.5 * k21 * sq(d21)

    def potential_grad(qbar):
        qbar = np.asarray(qbar, dtype=float)
        q1, q2 = qbar[:d], qbar[d:]
        g1 = k10 * (g @ (q1 - anchor)) - k21 * (g @ (q2 - q1))
        g2 = k20 * (g @ (q2 - anchor)) + k21 * (g @ (q2 - q1))
        return np.concatenate([g1, g2])

    def theta(qbar, v):
        return _dot(list(_grad_seq(qbar)), v)

    def _grad_seq(qbar):
        q1, q2 = qbar[:d], qbar[d:]
        d10 = [a - b for a, b in zip(q1, anchor)]
        d20 = [a - b for a, b in zip(q2, anchor)]
        d21 = [a - b for a, b in zip(q2, q1)]
        g1 = [k10 * x - k21 * y for x, y in zip(_mat_vec(g, d10), _mat_vec(g, d21))]
        g2 = [k20 * x + k21 * y for x, y in zip(_mat_vec(g, d20), _mat_vec(g, d21))]
        return g1 + g2

    system = StaticSystem(
        space=total,
        kind="potential",
        theta=theta,
        virtual_at=lambda qbar: FullSpace(total.dim),
        admissible=lambda qbar: True,
        potential=potential,
        potential_grad=potential_grad,
        theta_many=lambda qbar, rows: np.asarray(rows, float) @ potential_grad(qbar),
        params={"anchor": anchor, "k10": k10, "k20": k20, "k21": k21},
    )
    fib = Fibration(total, space, np.hstack([np.eye(d), np.zeros((d, d))]))
    keff = k10 + k20 * k21 / (k20 + k21)
    params = {"effective_stiffness": keff, "anchor": anchor, "ratio": k21 / (k20 + k21)}
    return ControlledSystem(system, fib, labeler=lambda qbar: "section", params=params)


def spring_chain_section(csys: ControlledSystem, q1) -> np.ndarray:
    """Closed-form internal point above a control point for the spring chain."""
    anchor = csys.params["anchor"]
    ratio = csys.params["ratio"]
    q1 = np.asarray(q1, dtype=float)
    return anchor + ratio * (q1 - anchor)


def buckling_rod(space: EuclideanSpace, origin, axis, length: float, k: float, k_perp: float) -> ControlledSystem:
    """Compressible rod on an axis with its far end sprung to the origin plane.

    The controlled end q1 slides on the axis line; the hidden end q2
    moves in the orthogonal plane.  Below the critical compression the
    straight state is the only critical point; past it a ring of buckled
    states appears at distance length*k/(k+k_perp) from the controlled
    end.  The bifurcation threshold in the control coordinate is
    length*k/(k+k_perp).
    """
    if length <= 0 or k <= 0 or k_perp <= 0:
        raise ValueError("length and stiffnesses must be positive")
    origin = space._coords(origin)
    axis = space._coords(axis)
    g = space.metric
    if abs(space.vector_norm(axis) - 1.0) > 1e-9:
        raise ValueError("axis must be a unit vector")
    total = product_space(space, space)
    d = space.dim
    L = space.metric_sqrt()
    _, _, vt = np.linalg.svd((L @ axis)[None, :])
    plane_vecs = [np.linalg.inv(L) @ vt[i] for i in range(1, d)]  # metric-unit, orthogonal to axis

    sq = _block_metric_energy(space)

    def potential(qbar):
        q1, q2 = qbar[:d], qbar[d:]
        d12 = [a - b for a, b in zip(q1, q2)]
        d20 = [a - b for a, b in zip(q2, origin)]
        stretch = jets.sqrt(sq(d12)) - length
        return 0.5 * k * stretch * stretch + 0.5 * k_perp * sq(d20)

    def potential_grad(qbar):
        qbar = np.asarray(qbar, dtype=float)
        q1, q2 = qbar[:d], qbar[d:]
        delta = q1 - q2
        dist = space.vector_norm(delta)
        coeff = k * (1.0 - length / dist)
        g1 = coeff * (g @ delta)
        g2 = -coeff * (g @ delta) + k_perp * (g @ (q2 - origin))
        return np.concatenate([g1, g2])

    def theta(qbar, v):
        q1, q2 = list(qbar[:d]), list(qbar[d:])
        v1, v2 = list(v[:d]), list(v[d:])
        d12 = [a - b for a, b in zip(q1, q2)]
        d20 = [a - b for a, b in zip(q2, origin)]
        coeff = k * (1.0 - length / jets.sqrt(sq(d12)))
        gd = _mat_vec(g, d12)
        stretch_part = coeff * (_dot(gd, v1) - _dot(gd, v2))
        return stretch_part + k_perp * _dot(_mat_vec(g, d20), v2)

    constraints = []
    for t in plane_vecs:
        gt = g @ t
        constraints.append(
            Constraint(
                kind="eq",
                value=(lambda qbar, gt=gt: _dot(gt, [a - b for a, b in zip(qbar[:d], origin)])),
                grad=(lambda qbar, gt=gt: np.concatenate([gt, np.zeros(d)])),
                hess=lambda qbar: np.zeros((2 * d, 2 * d)),
            )
        )
    g_axis = g @ axis
    constraints.append(
        Constraint(
            kind="eq",
            value=lambda qbar: _dot(g_axis, [a - b for a, b in zip(qbar[d:], origin)]),
            grad=lambda qbar: np.concatenate([np.zeros(d), g_axis]),
            hess=lambda qbar: np.zeros((2 * d, 2 * d)),
        )
    )

    v_cols = [np.concatenate([axis, np.zeros(d)])] + [np.concatenate([np.zeros(d), t]) for t in plane_vecs]
    v_basis = np.column_stack(v_cols)

    def admissible(qbar):
        return all(abs(float(c.value(qbar))) <= 1e-8 for c in constraints)

    system = StaticSystem(
        space=total,
        kind="potential",
        theta=theta,
        virtual_at=lambda qbar: LinearSubspace(v_basis),
        admissible=admissible,
        constraints=tuple(constraints),
        potential=potential,
        potential_grad=potential_grad,
        theta_many=lambda qbar, rows: np.asarray(rows, float) @ potential_grad(qbar),
        params={"origin": origin, "axis": axis, "length": length, "k": k, "k_perp": k_perp},
    )
    fib = Fibration(total, space, np.hstack([np.eye(d), np.zeros((d, d))]))

    critical_length = length * k / (k + k_perp)

    def labeler(qbar):
        q1, q2 = qbar[:d], qbar[d:]
        if space.vector_norm(q2 - origin) <= 1e-6:
            return "straight"
        # the buckled branch keeps the rod at its critical length exactly;
        # near the pitchfork loosely converged points must not pass as buckled
        gap = abs((k + k_perp) * space.vector_norm(q2 - q1) - k * length)
        if gap <= 5e-7 * (1.0 + k * length):
            return "buckled"
        return "unresolved"

    threshold = critical_length
    return ControlledSystem(
        system, fib, labeler=labeler, params={"threshold": threshold, "origin": origin, "axis": axis}
    )


def rod_sphere(space: EuclideanSpace, center, radius: float, k: float) -> ControlledSystem:
    """Hidden point on a sphere, dragged by a spring from the controlled point.

    The critical set carries exactly two internal states per control
    point away from the sphere center (the near and far poles along the
    pull direction) and a whole sphere of states above the center, so it
    is not the image of a section; the reduced constitutive set develops
    a fold there.
    """
    if radius <= 0 or k <= 0:
        raise ValueError("radius and stiffness must be positive")
    center = space._coords(center)
    total = product_space(space, space)
    d = space.dim
    g = space.metric
    sq = _block_metric_energy(space)

    def potential(qbar):
        q1, q2 = qbar[:d], qbar[d:]
        d12 = [a - b for a, b in zip(q1, q2)]
        return 0.5 * k * sq(d12)

    def potential_grad(qbar):
        qbar = np.asarray(qbar, dtype=float)
        q1, q2 = qbar[:d], qbar[d:]
        g1 = k * (g @ (q1 - q2))
        return np.concatenate([g1, -g1])

    def theta(qbar, v):
        q1, q2 = list(qbar[:d]), list(qbar[d:])
        d12 = [a - b for a, b in zip(q1, q2)]
        gd = _mat_vec(g, d12)
        return k * (_dot(gd, v[:d]) - _dot(gd, v[d:]))

    constraint = Constraint(
        kind="eq",
        value=lambda qbar: _dot(_mat_vec(g, [a - b for a, b in zip(qbar[d:], center)]), [a - b for a, b in zip(qbar[d:], center)]) - radius**2,
        grad=lambda qbar: np.concatenate([np.zeros(d), 2.0 * (g @ (np.asarray(qbar, float)[d:] - center))]),
        hess=lambda qbar: np.block([[np.zeros((d, d)), np.zeros((d, d))], [np.zeros((d, d)), 2.0 * g]]),
    )

    def admissible(qbar):
        return abs(float(constraint.value(np.asarray(qbar, float)))) <= 1e-8 * (1.0 + radius**2)

    def virtual_at(qbar):
        qbar = np.asarray(qbar, dtype=float)
        normal = g @ (qbar[d:] - center)
        _, _, vt = np.linalg.svd(normal[None, :])
        cols = [np.concatenate([e, np.zeros(d)]) for e in np.eye(d)]
        cols += [np.concatenate([np.zeros(d), t]) for t in vt[1:]]
        return LinearSubspace(np.column_stack(cols))

    system = StaticSystem(
        space=total,
        kind="potential",
        theta=theta,
        virtual_at=virtual_at,
        admissible=admissible,
        constraints=(constraint,),
        potential=potential,
        potential_grad=potential_grad,
        theta_many=lambda qbar, rows: np.asarray(rows, float) @ potential_grad(qbar),
        params={"center": center, "radius": radius, "k": k},
    )
    fib = Fibration(total, space, np.hstack([np.eye(d), np.zeros((d, d))]))

    def labeler(qbar):
        qbar = np.asarray(qbar, dtype=float)
        q1, q2 = qbar[:d], qbar[d:]
        pull = q1 - center
        if space.vector_norm(pull) <= 1e-9:
            return "sphere"
        align = float((g @ pull) @ (q2 - center))
        return "near" if align > 0 else "far"

    return ControlledSystem(system, fib, labeler=labeler, params={"center": center, "radius": radius, "k": k})


# ---------------------------------------------------------------------------
# fold-singularity diagnostics for the rod-sphere scenario
# ---------------------------------------------------------------------------

def sphere_family_rank(space: EuclideanSpace, w, r: float, sv_tol: float = 1e-8) -> int:
    """Rank of the control projection of the (direction, reach) family.

    The family maps (w, r) on sphere x line to center + r w; its tangent
    image degenerates from full rank to rank one at r = 0.
    """
    if space.dim != 3:
        raise ValueError("the fold diagnostic is for three-dimensional control spaces")
    w = space._coords(w)
    L = space.metric_sqrt()
    _, _, vt = np.linalg.svd((L @ w)[None, :])
    tangents = [np.linalg.inv(L) @ vt[i] for i in range(1, 3)]
    cols = [w] + [float(r) * t for t in tangents]
    jac = np.column_stack(cols)
    s = np.linalg.svd(jac, compute_uv=False)
    return int((s > sv_tol * s[0]).sum())


def fold_pullback_residual(
    space: EuclideanSpace, center, radius: float, k: float, w, r: float, rng, n_pairs: int = 1
) -> float:
    """Largest violation of the symplectic form vanishing on the reduced family.

    The reduced constitutive set is the image of (w, r) |-> (center + r w,
    k (r - radius) g(w)); the canonical two-form pulled back along this
    map must vanish identically, which certifies the image is Lagrangian.
    """
    w = space._coords(w)
    g = space.metric
    L = space.metric_sqrt()
    _, _, vt = np.linalg.svd((L @ w)[None, :])
    tangents = [np.linalg.inv(L) @ vt[i] for i in range(1, space.dim)]

    def tangent_lift(dw, dr):
        dq = dr * w + r * dw
        df = k * dr * (g @ w) + k * (r - radius) * (g @ dw)
        return dq, df

    worst = 0.0
    for _ in range(n_pairs):
        c1 = rng.standard_normal(len(tangents) + 1)
        c2 = rng.standard_normal(len(tangents) + 1)
        dw1 = sum(c * t for c, t in zip(c1[:-1], tangents))
        dw2 = sum(c * t for c, t in zip(c2[:-1], tangents))
        dq1, df1 = tangent_lift(dw1, c1[-1])
        dq2, df2 = tangent_lift(dw2, c2[-1])
        worst = max(worst, abs(float(df1 @ dq2 - df2 @ dq1)))
    return worst
