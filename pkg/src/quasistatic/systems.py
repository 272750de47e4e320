"""Static systems: admissible regions, virtual-displacement sets, work forms.

A static system bundles an admissible-region predicate, a family of
virtual-displacement sets over configurations, and a work form that is
positive-homogeneous in the displacement.  The constructors reproduce
the classic desk-scale catalog: springs, bilinear forms, isotropic and
anisotropic friction, rigid rods, corner (one-sided) constraints, the
knife-edge skate, and dry friction on a half-space boundary.

Work forms are written against plain scalar arithmetic plus the
dispatching elementary functions from :mod:`quasistatic.jets`, so the
same code path evaluates them on floats and on jets.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import jets
from .geometry import EuclideanSpace, Point, Vector

ACTIVE_TOL = 1e-9
MEMBERSHIP_TOL = 1e-9


def _dot(u, w):
    """Scalar product usable on sequences of floats or jets."""
    acc = u[0] * w[0]
    for a, b in zip(u[1:], w[1:]):
        acc = acc + a * b
    return acc


def _mat_vec(m: np.ndarray, u):
    return [_dot(row, u) for row in m]


def _float_coords(q) -> np.ndarray:
    return np.asarray(q, dtype=float)


# ---------------------------------------------------------------------------
# virtual-displacement sets at a configuration
# ---------------------------------------------------------------------------

class VirtualSet:
    """Cone of admissible virtual displacements at one configuration."""

    reversible: bool = False

    def contains(self, v, tol: float = MEMBERSHIP_TOL) -> bool:
        raise NotImplementedError

    def directions(self, n: int, rng: np.random.Generator):
        """Unit directions covering the set; includes its generators when polyhedral."""
        raise NotImplementedError

    def subspace_basis(self):
        """Orthonormal basis when the set is a linear subspace, else None."""
        return None

    def project(self, m: np.ndarray) -> np.ndarray:
        """Row-wise projection onto the set (closest point, Euclidean)."""
        raise NotImplementedError


class FullSpace(VirtualSet):
    reversible = True

    def __init__(self, dim: int):
        self.dim = dim

    def contains(self, v, tol=MEMBERSHIP_TOL):
        return True

    def directions(self, n, rng):
        out = [e for e in np.eye(self.dim)] + [-e for e in np.eye(self.dim)]
        if self.dim == 2:
            # an even angular sweep gives complete second-order coverage
            # up to the gap between consecutive directions
            m = max(n, 8)
            angles = 2.0 * np.pi * np.arange(m) / m
            out += [np.array([np.cos(a), np.sin(a)]) for a in angles]
            return out[: m + 4]
        extra = rng.standard_normal((max(0, n - len(out)), self.dim))
        out += [row / np.linalg.norm(row) for row in extra if np.linalg.norm(row) > 1e-12]
        return out[:max(n, 2 * self.dim)]

    def subspace_basis(self):
        return np.eye(self.dim)

    def project(self, m):
        return np.asarray(m, dtype=float)


class LinearSubspace(VirtualSet):
    reversible = True

    def __init__(self, basis):
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if basis.shape[0] < basis.shape[1]:
            basis = basis.T  # columns are generators
        q, r = np.linalg.qr(basis)
        keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, np.abs(r).max())
        self.basis = q[:, keep]
        self.dim = int(keep.sum())
        self.ambient_dim = basis.shape[0]

    def contains(self, v, tol=MEMBERSHIP_TOL):
        v = _float_coords(v)
        resid = v - self.basis @ (self.basis.T @ v)
        return np.linalg.norm(resid) <= tol * (1.0 + np.linalg.norm(v))

    def directions(self, n, rng):
        cols = [self.basis[:, i] for i in range(self.dim)]
        out = cols + [-c for c in cols]
        extra = rng.standard_normal((max(0, n - len(out)), self.dim)) @ self.basis.T
        out += [row / np.linalg.norm(row) for row in extra if np.linalg.norm(row) > 1e-12]
        return out[:max(n, 2 * self.dim)] if self.dim else []

    def subspace_basis(self):
        return self.basis

    def project(self, m):
        m = np.asarray(m, dtype=float)
        return (m @ self.basis) @ self.basis.T


class HalfSpaceCone(VirtualSet):
    """Intersection of half-spaces {v : <n_i, v> >= 0} for the active normals."""

    reversible = False

    def __init__(self, normals):
        normals = np.atleast_2d(np.asarray(normals, dtype=float))
        self.normals = normals / np.linalg.norm(normals, axis=1, keepdims=True)
        self.ambient_dim = normals.shape[1]

    def contains(self, v, tol=MEMBERSHIP_TOL):
        v = _float_coords(v)
        slack = self.normals @ v
        return bool(np.all(slack >= -tol * (1.0 + np.linalg.norm(v))))

    def directions(self, n, rng):
        out = [row.copy() for row in self.normals]
        # directions orthogonal to every active normal come in both signs
        _, s, vt = np.linalg.svd(self.normals)
        rank = int((s > 1e-12 * s[0]).sum()) if s.size else 0
        for row in vt[rank:]:
            out.append(row.copy())
            out.append(-row.copy())
        for i in range(len(self.normals)):
            for j in range(i + 1, len(self.normals)):
                mix = self.normals[i] + self.normals[j]
                if np.linalg.norm(mix) > 1e-12:
                    out.append(mix / np.linalg.norm(mix))
        extra = rng.standard_normal((3 * n, self.ambient_dim))
        for row in extra:
            p = self.project(row[None, :])[0]
            nrm = np.linalg.norm(p)
            if nrm > 1e-9:
                out.append(p / nrm)
            if len(out) >= 4 * n:
                break
        return out[:max(n, len(self.normals) + 2)]

    def project(self, m):
        # iterated half-space clipping; exact when the normals are orthogonal
        m = np.array(m, dtype=float)
        for _ in range(8):
            changed = False
            for nrm in self.normals:
                slack = m @ nrm
                bad = slack < 0.0
                if np.any(bad):
                    m[bad] -= np.outer(slack[bad], nrm)
                    changed = True
            if not changed:
                break
        return m


class FrictionCone(VirtualSet):
    """Displacements whose normal advance dominates nu times the tangential slip."""

    reversible = False

    def __init__(self, space: EuclideanSpace, normal, nu: float):
        if nu < 0.0:
            raise ValueError("friction coefficient must be non-negative")
        self.space = space
        normal = np.asarray(normal, dtype=float)
        self.normal = normal / space.vector_norm(normal)
        self.nu = float(nu)

    def _parts(self, v):
        v = _float_coords(v)
        advance = float(self.space.lower(self.normal) @ v)
        tang_sq = self.space.vector_norm(v) ** 2 - advance**2
        return advance, float(np.sqrt(max(tang_sq, 0.0)))

    def contains(self, v, tol=MEMBERSHIP_TOL):
        advance, slip = self._parts(v)
        scale = 1.0 + self.space.vector_norm(_float_coords(v))
        return advance >= self.nu * slip - tol * scale

    def directions(self, n, rng):
        out = [self.normal.copy()]
        dim = self.normal.size
        # boundary rays: advance exactly nu times the tangential slip
        basis = np.linalg.svd(self.space.lower(self.normal)[None, :])[2][1:]
        for t in basis:
            slip = self.space.vector_norm(t)
            for sgn in (1.0, -1.0):
                ray = self.nu * slip * self.normal + sgn * t
                nrm = np.linalg.norm(ray)
                if nrm > 1e-12:
                    out.append(ray / nrm)
        extra = rng.standard_normal((3 * n, dim))
        for row in extra:
            if self.contains(row):
                out.append(row / np.linalg.norm(row))
            if len(out) >= 3 * n:
                break
        return out[:max(n, 3)]

    def project(self, m):
        # second-order cone projection in the metric frame of the normal
        m = np.array(m, dtype=float)
        L = self.space.metric_sqrt()
        y = m @ L.T
        axis = L @ self.normal
        axis = axis / np.linalg.norm(axis)
        adv = y @ axis
        tang = y - np.outer(adv, axis)
        slip = np.linalg.norm(tang, axis=1)
        out = y.copy()
        nu = self.nu
        inside = adv >= nu * slip
        polar = nu * adv <= -slip  # such points project to the apex
        out[polar] = 0.0
        mid = ~inside & ~polar
        if np.any(mid):
            rho = (nu * adv[mid] + slip[mid]) / (1.0 + nu * nu)
            safe = np.where(slip[mid] > 0.0, slip[mid], 1.0)
            t_unit = tang[mid] / safe[:, None]
            out[mid] = (nu * rho)[:, None] * axis[None, :] + rho[:, None] * t_unit
        return out @ np.linalg.inv(L).T


class PredicateSet(VirtualSet):
    """Membership predicate plus a direction sampler (used for intersections)."""

    def __init__(self, dim, predicate, sampler=None, reversible=False):
        self.dim = dim
        self.predicate = predicate
        self.sampler = sampler
        self.reversible = reversible

    def contains(self, v, tol=MEMBERSHIP_TOL):
        return bool(self.predicate(_float_coords(v), tol))

    def directions(self, n, rng):
        if self.sampler is not None:
            return self.sampler(n, rng)
        out = []
        dim = self.dim
        for row in rng.standard_normal((50 * n, dim)):
            if self.contains(row):
                out.append(row / np.linalg.norm(row))
            if len(out) >= n:
                break
        return out

    def project(self, m):
        raise NotImplementedError("generic predicate sets do not support projection")


def is_reversible(vset: VirtualSet, rng=None, n: int = 24) -> bool:
    """A set is flagged reversible when every sampled member has its negation inside."""
    if isinstance(vset, (FullSpace, LinearSubspace)):
        return True
    rng = rng or np.random.default_rng(0)
    for v in vset.directions(n, rng):
        if not vset.contains(-np.asarray(v)):
            return False
    return True


# ---------------------------------------------------------------------------
# constraints and the system record
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    """Scalar constraint c(q) = 0 (kind 'eq') or c(q) >= 0 (kind 'ineq')."""

    kind: str
    value: object  # jet-capable scalar function of the coordinate sequence
    grad: object  # q -> ndarray
    hess: object = None  # q -> ndarray, optional

    def hessian(self, q: np.ndarray, step: float = 1e-5) -> np.ndarray:
        if self.hess is not None:
            return np.asarray(self.hess(q), dtype=float)
        q = _float_coords(q)
        n = q.size
        h = np.zeros((n, n))
        for i in range(n):
            e = np.zeros(n)
            e[i] = step
            gp = np.asarray(self.grad(q + e), dtype=float)
            gm = np.asarray(self.grad(q - e), dtype=float)
            h[i] = (gp - gm) / (2 * step)
        return 0.5 * (h + h.T)


@dataclass(frozen=True, eq=False)
class StaticSystem:
    """Admissible region, virtual-displacement family and work form."""

    space: EuclideanSpace
    kind: str
    theta: object  # (q_seq, v_seq) -> float | Jet
    virtual_at: object  # q_coords -> VirtualSet
    admissible: object  # q_coords -> bool
    constraints: tuple = ()
    potential: object = None  # jet-capable U(q_seq)
    potential_grad: object = None  # q -> ndarray
    theta_many: object = None  # (q, V_rows) -> ndarray, vectorized work form
    theta_is_zero: bool = False
    constraint_order: int = 0
    params: dict = field(default_factory=dict)

    # wrapper-level conveniences ---------------------------------------

    def admits(self, q: Point) -> bool:
        return bool(self.admissible(q.coords))

    def work_form(self, q: Point, v: Vector) -> float:
        return float(self.theta(q.coords, v.coords))

    def virtual_set(self, q: Point) -> VirtualSet:
        return self.virtual_at(q.coords)

    def theta_rows(self, q: np.ndarray, rows: np.ndarray) -> np.ndarray:
        """Work form on a batch of displacement rows."""
        if self.theta_many is not None:
            return np.asarray(self.theta_many(q, rows), dtype=float)
        return np.array([self.theta(q, row) for row in rows], dtype=float)

    def equality_constraints(self):
        return tuple(c for c in self.constraints if c.kind == "eq")

    def inequality_constraints(self):
        return tuple(c for c in self.constraints if c.kind == "ineq")


# ---------------------------------------------------------------------------
# catalog constructors
# ---------------------------------------------------------------------------

def spring(space: EuclideanSpace, center, stiffness: float) -> StaticSystem:
    """Material point tied to a fixed center by a linear spring.

    Unconstrained potential system with internal energy
    (stiffness/2) * ||q - center||^2.
    """
    if stiffness <= 0.0:
        raise ValueError("spring stiffness must be positive")
    center = space._coords(center)
    g = space.metric
    k = float(stiffness)

    def potential(q):
        d = [qi - ci for qi, ci in zip(q, center)]
        return 0.5 * k * _dot(_mat_vec(g, d), d)

    def theta(q, v):
        d = [qi - ci for qi, ci in zip(q, center)]
        return k * _dot(_mat_vec(g, d), v)

    def theta_many(q, rows):
        f = k * (g @ (np.asarray(q, float) - center))
        return rows @ f

    return StaticSystem(
        space=space,
        kind="spring",
        theta=theta,
        virtual_at=lambda q: FullSpace(space.dim),
        admissible=lambda q: True,
        potential=potential,
        potential_grad=lambda q: k * (g @ (_float_coords(q) - center)),
        theta_many=theta_many,
        params={"center": center, "stiffness": k},
    )


def bilinear(space: EuclideanSpace, center, form) -> StaticSystem:
    """Work form omega(q - center, v) for a (not necessarily symmetric) bilinear omega.

    A potential exists only when the form is symmetric; an antisymmetric
    part makes the work path-dependent.
    """
    center = space._coords(center)
    omega = np.asarray(form, dtype=float)
    if omega.shape != (space.dim, space.dim):
        raise ValueError("bilinear form must be a dim x dim matrix")
    symmetric = bool(np.allclose(omega, omega.T, atol=1e-12, rtol=0.0))

    def theta(q, v):
        d = [qi - ci for qi, ci in zip(q, center)]
        return _dot(_mat_vec(omega.T, v), d)

    potential = None
    potential_grad = None
    if symmetric:

        def potential(q):
            d = [qi - ci for qi, ci in zip(q, center)]
            return 0.5 * _dot(_mat_vec(omega, d), d)

        def potential_grad(q):
            return omega @ (_float_coords(q) - center)

    def theta_many(q, rows):
        f = omega.T @ (np.asarray(q, float) - center)
        return rows @ f

    return StaticSystem(
        space=space,
        kind="bilinear",
        theta=theta,
        virtual_at=lambda q: FullSpace(space.dim),
        admissible=lambda q: True,
        potential=potential,
        potential_grad=potential_grad,
        theta_many=theta_many,
        params={"center": center, "form": omega, "symmetric": symmetric},
    )


def friction(space: EuclideanSpace, form=None) -> StaticSystem:
    """Isotropic or anisotropic friction: the work form sqrt(<rho v, v>).

    Positive-homogeneous of degree one, even in v, so the work is
    path-length-like and the system has no potential.
    """
    rho = np.asarray(form, dtype=float) if form is not None else space.metric.copy()
    if rho.shape != (space.dim, space.dim):
        raise ValueError("friction form must be a dim x dim matrix")
    if not np.allclose(rho, rho.T, atol=1e-12, rtol=0.0):
        raise ValueError("friction form must be symmetric")
    try:
        np.linalg.cholesky(rho)
    except np.linalg.LinAlgError as exc:
        raise ValueError("friction form must be positive definite") from exc

    def theta(q, v):
        return jets.sqrt(_dot(_mat_vec(rho, v), v))

    def theta_many(q, rows):
        rows = np.asarray(rows, dtype=float)
        return np.sqrt(np.maximum(np.einsum("ij,jk,ik->i", rows, rho, rows), 0.0))

    return StaticSystem(
        space=space,
        kind="friction",
        theta=theta,
        virtual_at=lambda q: FullSpace(space.dim),
        admissible=lambda q: True,
        theta_many=theta_many,
        constraint_order=1,
        params={"form": rho},
    )


def _zero_theta(q, v):
    return 0.0


def rod(space: EuclideanSpace, center, length: float) -> StaticSystem:
    """Point tied to a center by a rigid rod: sphere constraint, zero work form."""
    if length <= 0.0:
        raise ValueError("rod length must be positive")
    center = space._coords(center)
    g = space.metric
    a = float(length)

    def constraint_value(q):
        d = [qi - ci for qi, ci in zip(q, center)]
        return _dot(_mat_vec(g, d), d) - a * a

    constraint = Constraint(
        kind="eq",
        value=constraint_value,
        grad=lambda q: 2.0 * (g @ (_float_coords(q) - center)),
        hess=lambda q: 2.0 * g,
    )

    def admissible(q):
        return abs(constraint_value(_float_coords(q))) <= ACTIVE_TOL * (1.0 + a * a)

    def virtual_at(q):
        normal = g @ (_float_coords(q) - center)
        _, _, vt = np.linalg.svd(normal[None, :])
        return LinearSubspace(vt[1:].T)

    return StaticSystem(
        space=space,
        kind="rod",
        theta=_zero_theta,
        virtual_at=virtual_at,
        admissible=admissible,
        constraints=(constraint,),
        theta_many=lambda q, rows: np.zeros(len(rows)),
        theta_is_zero=True,
        params={"center": center, "length": a},
    )


def corner(space: EuclideanSpace, vertex, u1, u2) -> StaticSystem:
    """Two one-sided planar walls meeting at a vertex, zero work form.

    The admissible region is the intersection of the half-spaces with
    inward normals u1 and u2 (orthonormal in the metric); the virtual
    set is the full space inside and the matching half-space cone where
    walls are active.
    """
    vertex = space._coords(vertex)
    u1 = space._coords(u1)
    u2 = space._coords(u2)
    g = space.metric
    for u in (u1, u2):
        if abs(space.vector_norm(u) - 1.0) > 1e-9:
            raise ValueError("corner directions must be unit vectors")
    if abs(float(u1 @ g @ u2)) > 1e-9:
        raise ValueError("corner directions must be orthogonal")
    normals = np.vstack([g @ u1, g @ u2])

    def gaps(q):
        return normals @ (_float_coords(q) - vertex)

    def admissible(q):
        return bool(np.all(gaps(q) >= -ACTIVE_TOL))

    def virtual_at(q):
        active = np.abs(gaps(q)) <= ACTIVE_TOL
        if not np.any(active):
            return FullSpace(space.dim)
        return HalfSpaceCone(normals[active])

    constraints = tuple(
        Constraint(
            kind="ineq",
            value=(lambda q, row=normals[i]: _dot(row, [qi - ci for qi, ci in zip(q, vertex)])),
            grad=(lambda q, row=normals[i]: row.copy()),
            hess=lambda q: np.zeros((space.dim, space.dim)),
        )
        for i in range(2)
    )

    return StaticSystem(
        space=space,
        kind="corner",
        theta=_zero_theta,
        virtual_at=virtual_at,
        admissible=admissible,
        constraints=constraints,
        theta_many=lambda q, rows: np.zeros(len(rows)),
        theta_is_zero=True,
        params={"vertex": vertex, "u1": u1, "u2": u2},
    )


def skate(space: EuclideanSpace | None = None) -> StaticSystem:
    """Knife-edge skate on a plane: coordinates (x, y, heading angle).

    Unconstrained region, but planar displacements must be parallel to
    the blade direction; the heading may change freely.  First-order
    (non-holonomic) constraint with zero work form.
    """
    if space is None:
        space = EuclideanSpace(3)
    if space.dim != 3:
        raise ValueError("the skate lives on (x, y, angle) coordinates")

    def virtual_at(q):
        phi = float(q[2])
        blade = np.array([np.cos(phi), np.sin(phi), 0.0])
        turn = np.array([0.0, 0.0, 1.0])
        return LinearSubspace(np.column_stack([blade, turn]))

    return StaticSystem(
        space=space,
        kind="skate",
        theta=_zero_theta,
        virtual_at=virtual_at,
        admissible=lambda q: True,
        theta_many=lambda q, rows: np.zeros(len(rows)),
        theta_is_zero=True,
        constraint_order=1,
        params={},
    )


def coulomb(space: EuclideanSpace, origin, normal, nu: float) -> StaticSystem:
    """Dry friction on the boundary plane of a half-space.

    Inside the half-space displacements are free; on the boundary the
    virtual set narrows to the friction cone with coefficient nu around
    the inward normal.  Zero work form: the resistance lives in the
    constraint, and the constitutive cone comes out of the virtual-work
    inequality.
    """
    if nu < 0.0:
        raise ValueError("friction coefficient must be non-negative")
    origin = space._coords(origin)
    normal = space._coords(normal)
    if abs(space.vector_norm(normal) - 1.0) > 1e-9:
        raise ValueError("the boundary normal must be a unit vector")
    g = space.metric
    gn = g @ normal

    def gap(q):
        return float(gn @ (_float_coords(q) - origin))

    def admissible(q):
        return gap(q) >= -ACTIVE_TOL

    def virtual_at(q):
        if gap(q) > ACTIVE_TOL:
            return FullSpace(space.dim)
        if nu == 0.0:
            return HalfSpaceCone(gn[None, :])
        return FrictionCone(space, normal, nu)

    constraint = Constraint(
        kind="ineq",
        value=lambda q: _dot(gn, [qi - oi for qi, oi in zip(q, origin)]),
        grad=lambda q: gn.copy(),
        hess=lambda q: np.zeros((space.dim, space.dim)),
    )

    return StaticSystem(
        space=space,
        kind="coulomb",
        theta=_zero_theta,
        virtual_at=virtual_at,
        admissible=admissible,
        constraints=(constraint,),
        theta_many=lambda q, rows: np.zeros(len(rows)),
        theta_is_zero=True,
        constraint_order=1,
        params={"origin": origin, "normal": normal, "nu": float(nu)},
    )


def free(space: EuclideanSpace) -> StaticSystem:
    """The identity element for composition: no constraints, no work."""
    return StaticSystem(
        space=space,
        kind="free",
        theta=_zero_theta,
        virtual_at=lambda q: FullSpace(space.dim),
        admissible=lambda q: True,
        theta_many=lambda q, rows: np.zeros(len(rows)),
        theta_is_zero=True,
        params={},
    )


# ---------------------------------------------------------------------------
# polynomial potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Polynomial:
    """Multivariate polynomial: exponent rows against one coefficient each."""

    exponents: np.ndarray  # (n_terms, dim) int
    coefficients: np.ndarray  # (n_terms,)

    @staticmethod
    def from_terms(dim: int, terms) -> "Polynomial":
        """terms: iterable of (exponent_tuple, coefficient)."""
        exps, coefs = [], []
        for e, c in terms:
            e = tuple(int(x) for x in e)
            if len(e) != dim or any(x < 0 for x in e):
                raise ValueError(f"bad exponent tuple {e} for dimension {dim}")
            exps.append(e)
            coefs.append(float(c))
        if not exps:
            exps, coefs = [(0,) * dim], [0.0]
        return Polynomial(np.array(exps, dtype=int), np.array(coefs, dtype=float))

    def __call__(self, q):
        acc = 0.0
        for e, c in zip(self.exponents, self.coefficients):
            term = c
            for qi, ei in zip(q, e):
                for _ in range(int(ei)):
                    term = term * qi
            acc = acc + term
        return acc

    def eval_many(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[0])
        for e, c in zip(self.exponents, self.coefficients):
            out += c * np.prod(pts ** e[None, :], axis=1)
        return out

    def gradient(self):
        dim = self.exponents.shape[1]
        grads = []
        for axis in range(dim):
            exps, coefs = [], []
            for e, c in zip(self.exponents, self.coefficients):
                if e[axis] == 0:
                    continue
                e2 = e.copy()
                e2[axis] -= 1
                exps.append(e2)
                coefs.append(c * e[axis])
            if exps:
                grads.append(Polynomial(np.array(exps), np.array(coefs)))
            else:
                grads.append(Polynomial(np.zeros((1, dim), dtype=int), np.zeros(1)))
        return grads


def polynomial_potential(space: EuclideanSpace, terms) -> StaticSystem:
    """Unconstrained potential system with a polynomial internal energy."""
    poly = terms if isinstance(terms, Polynomial) else Polynomial.from_terms(space.dim, terms)
    grads = poly.gradient()

    def theta(q, v):
        return _dot([gp(q) for gp in grads], v)

    def grad(q):
        q = _float_coords(q)
        return np.array([gp(q) for gp in grads])

    def theta_many(q, rows):
        return np.asarray(rows, float) @ grad(q)

    return StaticSystem(
        space=space,
        kind="potential",
        theta=theta,
        virtual_at=lambda q: FullSpace(space.dim),
        admissible=lambda q: True,
        potential=poly,
        potential_grad=grad,
        theta_many=theta_many,
        params={"polynomial": poly},
    )


def potential_system(space: EuclideanSpace, potential, potential_grad) -> StaticSystem:
    """Unconstrained potential system from jet-capable callables."""

    def theta(q, v):
        return _dot(potential_grad_seq(q), v)

    def potential_grad_seq(q):
        g = potential_grad(q)
        return list(g)

    return StaticSystem(
        space=space,
        kind="potential",
        theta=theta,
        virtual_at=lambda q: FullSpace(space.dim),
        admissible=lambda q: True,
        potential=potential,
        potential_grad=lambda q: np.asarray(potential_grad(q), dtype=float),
        theta_many=lambda q, rows: np.asarray(rows, float) @ np.asarray(potential_grad(q), float),
        params={},
    )


def check_homogeneity(system: StaticSystem, q, v, factors=(0.5, 2.0, 10.0), rtol=1e-12) -> bool:
    """Positive homogeneity of the work form in its vector argument."""
    q = _float_coords(q)
    v = _float_coords(v)
    base = system.theta(q, v)
    for lam in factors:
        scaled = system.theta(q, lam * v)
        if abs(scaled - lam * base) > rtol * (1.0 + abs(lam * base)):
            return False
    return True


def check_potential_consistency(system: StaticSystem, q, v, step=1e-6, tol=1e-8) -> bool:
    """theta(q, v) must match the directional derivative of the potential."""
    if system.potential is None:
        return True
    q = _float_coords(q)
    v = _float_coords(v)
    up = system.potential(q + step * v)
    um = system.potential(q - step * v)
    fd = (up - um) / (2 * step)
    value = system.theta(q, v)
    return abs(fd - value) <= tol * (1.0 + abs(value))
