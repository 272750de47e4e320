"""Composition of static systems sharing a configuration space.

Composition intersects the admissible regions and virtual sets and adds
the work forms.  The fiberwise constitutive set of the composition is
then the Minkowski sum of the members' sets, provided the constraint
intersection is *clean*: the tangent of the intersection must equal the
intersection of the tangents.  Rigid constraints meeting tangentially
(two spheres touching at one point) break cleanliness, and the simple
sum rule with it; the composed system then only carries the set
generated by the intersected virtual displacements, and callers get an
explicit warning from the cleanliness check.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .systems import (
    FullSpace,
    LinearSubspace,
    PredicateSet,
    StaticSystem,
    VirtualSet,
)

RANK_TOL = 1e-8


def compose(sys1: StaticSystem, sys2: StaticSystem) -> StaticSystem:
    """Intersect constraints and virtual sets, add work forms."""
    if sys1.space != sys2.space:
        raise ValueError("systems must share one configuration space")
    space = sys1.space

    def admissible(q):
        return sys1.admissible(q) and sys2.admissible(q)

    def virtual_at(q):
        return intersect_virtual(sys1.virtual_at(q), sys2.virtual_at(q))

    both_zero = sys1.theta_is_zero and sys2.theta_is_zero

    def theta(q, v):
        if both_zero:
            return 0.0
        return sys1.theta(q, v) + sys2.theta(q, v)

    def theta_many(q, rows):
        return sys1.theta_rows(q, rows) + sys2.theta_rows(q, rows)

    potential = None
    potential_grad = None
    if sys1.potential is not None and sys2.potential is not None:

        def potential(q):
            return sys1.potential(q) + sys2.potential(q)

        def potential_grad(q):
            return np.asarray(sys1.potential_grad(q), float) + np.asarray(sys2.potential_grad(q), float)

    return StaticSystem(
        space=space,
        kind="composed",
        theta=theta,
        virtual_at=virtual_at,
        admissible=admissible,
        constraints=sys1.constraints + sys2.constraints,
        potential=potential,
        potential_grad=potential_grad,
        theta_many=theta_many,
        theta_is_zero=both_zero,
        constraint_order=max(sys1.constraint_order, sys2.constraint_order),
        params={"members": (sys1, sys2)},
    )


def intersect_virtual(v1: VirtualSet, v2: VirtualSet) -> VirtualSet:
    """Pointwise intersection of two virtual-displacement sets."""
    if isinstance(v1, FullSpace):
        return v2
    if isinstance(v2, FullSpace):
        return v1
    b1, b2 = v1.subspace_basis(), v2.subspace_basis()
    if b1 is not None and b2 is not None:
        stacked = np.hstack([b1, -b2])
        _, s, vt = np.linalg.svd(stacked)
        rank = int((s > 1e-12 * max(1.0, s[0])).sum()) if s.size else 0
        null = vt[rank:].T
        if null.size == 0:
            return LinearSubspace(np.zeros((b1.shape[0], 0)))
        return LinearSubspace(b1 @ null[: b1.shape[1]])

    def predicate(v, tol):
        return v1.contains(v, tol) and v2.contains(v, tol)

    def sampler(n, rng):
        out = []
        for v in list(v1.directions(3 * n, rng)) + list(v2.directions(3 * n, rng)):
            v = np.asarray(v, dtype=float)
            if v1.contains(v) and v2.contains(v):
                out.append(v)
            if len(out) >= n:
                break
        return out

    dim = getattr(v1, "ambient_dim", getattr(v2, "ambient_dim", None)) or b1.shape[0]
    return PredicateSet(dim, predicate, sampler, reversible=False)


class CleanVerdict(enum.Enum):
    CLEAN = "clean"
    NOT_CLEAN = "not-clean"


@dataclass(frozen=True)
class CleanReport:
    verdict: CleanVerdict
    virtual_dim: int
    linearized_dim: int
    obstruction: float  # largest unresolvable second-order term
    warning: str | None = None


def clean_check(sys1: StaticSystem, sys2: StaticSystem, q) -> CleanReport:
    """Decide whether two constraint sets intersect cleanly at q.

    The linearized tangent (common null space of the stacked equality
    gradients) always contains the true tangent of the intersection; the
    intersection is clean exactly when every linearized direction admits
    a curve staying on both constraint sets.  To second order that means
    the quadratic terms must be absorbable by a curvature correction,
    i.e. the stacked Hessian contractions must lie in the range of the
    stacked Jacobian.  Touching spheres fail this: their common normal
    leaves a sign-definite unresolvable term.
    """
    if sys1.space != sys2.space:
        raise ValueError("systems must share one configuration space")
    q = np.asarray(q, dtype=float) if not hasattr(q, "coords") else np.asarray(q.coords, dtype=float)
    if not (sys1.admissible(q) and sys2.admissible(q)):
        raise ValueError("the point must satisfy both admissible regions")
    eqs = sys1.equality_constraints() + sys2.equality_constraints()
    if not eqs:
        return CleanReport(CleanVerdict.CLEAN, sys1.space.dim, sys1.space.dim, 0.0)
    for c in eqs:
        if c.grad is None:
            raise ValueError("cleanliness check needs constraint gradients")

    jac = np.vstack([np.asarray(c.grad(q), dtype=float) for c in eqs])
    _, s, vt = np.linalg.svd(jac)
    rank = int((s > RANK_TOL * s[0]).sum()) if s.size and s[0] > 0 else 0
    null = vt[rank:].T  # linearized tangent directions
    lin_dim = null.shape[1]

    vset = intersect_virtual(sys1.virtual_at(q), sys2.virtual_at(q))
    basis = vset.subspace_basis()
    v_dim = basis.shape[1] if basis is not None else lin_dim

    hessians = [c.hessian(q) for c in eqs]
    worst = 0.0
    for i in range(lin_dim):
        for j in range(i, lin_dim):
            di, dj = null[:, i], null[:, j]
            rhs = np.array([-(di @ h @ dj) for h in hessians])
            sol, *_ = np.linalg.lstsq(jac, rhs, rcond=None)
            resid = float(np.linalg.norm(jac @ sol - rhs))
            worst = max(worst, resid)
    scale = 1.0 + max(float(np.abs(h).max()) for h in hessians) if hessians else 1.0
    clean = worst <= RANK_TOL * scale and v_dim == lin_dim
    if clean:
        return CleanReport(CleanVerdict.CLEAN, v_dim, lin_dim, worst)
    warning = (
        "constraint intersection is not clean: the composed constitutive set is the one "
        "generated by the intersected virtual displacements, not by the tangent of the region"
    )
    return CleanReport(CleanVerdict.NOT_CLEAN, v_dim, lin_dim, worst, warning=warning)


@dataclass(frozen=True)
class SumReport:
    trials: int
    members: int
    max_violation: float


def minkowski_sum_check(sys1: StaticSystem, sys2: StaticSystem, q, trials: int = 100, seed: int = 0) -> SumReport:
    """Verify fiberwise additivity of constitutive sets over random covectors.

    Requires the virtual sets to be linear subspaces.  For each covector
    f the construction splits f into f1 + f2 with fi matching the i-th
    work form on its own virtual subspace, using complements of the
    intersection; the split reproduces f exactly when f belongs to the
    composed set, and the mismatch otherwise equals the distance of f
    from it.  The report carries the largest violation of those
    identities.
    """
    if sys1.space != sys2.space:
        raise ValueError("systems must share one configuration space")
    q = np.asarray(q, dtype=float) if not hasattr(q, "coords") else np.asarray(q.coords, dtype=float)
    dim = sys1.space.dim
    v1, v2 = sys1.virtual_at(q), sys2.virtual_at(q)
    b1, b2 = v1.subspace_basis(), v2.subspace_basis()
    if b1 is None or b2 is None:
        raise ValueError("the sum rule is established for subspace virtual sets only")
    inter = intersect_virtual(v1, v2)
    b = inter.subspace_basis()

    def complement(inside: np.ndarray, of: np.ndarray) -> np.ndarray:
        """Orthogonal complement of span(inside) within span(of)."""
        if of.shape[1] == 0:
            return of
        if inside.shape[1]:
            qi, ri = np.linalg.qr(inside)
            qi = qi[:, np.abs(np.diag(ri)) > 1e-10 * max(1.0, np.abs(ri).max())]
            proj = of - qi @ (qi.T @ of)
        else:
            proj = of
        qm, r = np.linalg.qr(proj)
        keep = np.abs(np.diag(r)) > 1e-10 * max(1.0, np.abs(r).max())
        return qm[:, keep]

    b1p = complement(b, b1)  # complement of V in V1
    b2p = complement(b, b2)  # complement of V in V2
    span12 = np.hstack([b, b1p, b2p])
    b0 = complement(span12, np.eye(dim))  # complement of V1 + V2 in the whole space

    frame = np.hstack([b, b1p, b2p, b0])
    if frame.shape[1] != dim:
        raise ValueError("degenerate subspace arrangement; cannot build complements")

    rng = np.random.default_rng(seed)
    worst = 0.0
    members = 0
    n_b, n_1, n_2, n_0 = b.shape[1], b1p.shape[1], b2p.shape[1], b0.shape[1]

    def theta_values(system, cols):
        return np.array([float(system.theta(q, cols[:, i])) for i in range(cols.shape[1])])

    th1_b, th2_b = theta_values(sys1, b), theta_values(sys2, b)
    th1_b1p = theta_values(sys1, b1p)
    th2_b2p = theta_values(sys2, b2p)
    th1_b2p = theta_values(sys1, b2p)
    th2_b1p = theta_values(sys2, b1p)

    for t in range(trials):
        f = rng.standard_normal(dim) * 2.0
        if t % 2 == 0 and n_b:
            # project onto the composed set: enforce f|V = theta|V
            coeffs = b.T @ f
            f = f - b @ (coeffs - (th1_b + th2_b))
        # f1 on the frame: theta1 on V and V1', f - theta2 on V2', half on V0
        vals_f1 = np.concatenate(
            [
                th1_b,
                th1_b1p,
                (f @ b2p - th2_b2p) if n_2 else np.zeros(0),
                0.5 * (f @ b0) if n_0 else np.zeros(0),
            ]
        )
        vals_f2 = np.concatenate(
            [
                th2_b,
                (f @ b1p - th1_b1p) if n_1 else np.zeros(0),
                th2_b2p,
                0.5 * (f @ b0) if n_0 else np.zeros(0),
            ]
        )
        f1 = np.linalg.solve(frame.T, vals_f1)
        f2 = np.linalg.solve(frame.T, vals_f2)

        # membership residuals of the split parts in their own sets
        r1 = np.abs(np.concatenate([f1 @ b - th1_b if n_b else np.zeros(0), f1 @ b1p - th1_b1p if n_1 else np.zeros(0)]))
        r2 = np.abs(np.concatenate([f2 @ b - th2_b if n_b else np.zeros(0), f2 @ b2p - th2_b2p if n_2 else np.zeros(0)]))
        worst = max(worst, float(r1.max(initial=0.0)), float(r2.max(initial=0.0)))

        # the split must reproduce f exactly on the composed set, and
        # miss it by exactly the set distance otherwise
        dist = float(np.linalg.norm((f @ b) - (th1_b + th2_b))) if n_b else 0.0
        mismatch = float(np.linalg.norm(f1 + f2 - f))
        worst = max(worst, abs(mismatch - dist))
        if dist <= 1e-9:
            members += 1
    return SumReport(trials=trials, members=members, max_violation=worst)
