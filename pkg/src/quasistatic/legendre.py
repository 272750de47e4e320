"""Constitutive sets: which external forces a system balances at a configuration.

A covector f belongs to the constitutive set at q when the virtual-work
margin  inf { theta(q, v) - <f, v> : v admissible, ||v|| = 1 }  is
non-negative.  Two decision routes are implemented:

* equality route - when the virtual set is reversible (a subspace) and
  the work form is odd on it, membership reduces to the linear condition
  f|V = theta|V, solved with a basis of V;
* margin route - otherwise the margin is evaluated, either by a closed
  form for the catalog systems or by multi-start projected descent over
  the unit sphere intersected with the virtual set.

Sets decided by the equality route have no interior, so they classify
In/Out only; margin-route sets return Boundary as a first-class answer
inside the tolerance band.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .geometry import EuclideanSpace
from .systems import (
    FrictionCone,
    FullSpace,
    HalfSpaceCone,
    LinearSubspace,
    StaticSystem,
    VirtualSet,
)

DEFAULT_TOL = 1e-7
N_STARTS = 64
N_ITERS = 200


class Containment(enum.Enum):
    IN = "in"
    OUT = "out"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class MembershipResult:
    containment: Containment
    margin: float
    route: str  # "equality" or "margin"


def _coords(space, value):
    if hasattr(value, "coords"):
        return np.asarray(value.coords, dtype=float)
    return space._coords(value)


def _theta_is_odd(system: StaticSystem, q: np.ndarray, vset: VirtualSet, rng) -> bool:
    if system.theta_is_zero:
        return True
    dirs = vset.directions(6, rng)
    for v in dirs:
        v = np.asarray(v, dtype=float)
        plus = float(system.theta(q, v))
        minus = float(system.theta(q, -v))
        if abs(plus + minus) > 1e-10 * (1.0 + abs(plus) + abs(minus)):
            return False
    return True


class ConstitutiveSet:
    """Membership oracle for covectors against one static system.

    ``method`` selects the decision path: "exact" uses the closed forms
    of the catalog systems, "generic" uses basis linear algebra or the
    sphere optimizer, "auto" prefers exact and falls back to generic.
    """

    _EXACT_KINDS = {"spring", "bilinear", "potential", "friction", "rod", "corner", "skate", "coulomb"}

    def __init__(self, system: StaticSystem, tol: float = DEFAULT_TOL, method: str = "auto", seed: int = 0):
        if method not in ("auto", "exact", "generic"):
            raise ValueError("method must be auto, exact or generic")
        if method == "exact" and system.kind not in self._EXACT_KINDS:
            raise ValueError(f"no exact membership path for system kind {system.kind!r}")
        self.system = system
        self.space: EuclideanSpace = system.space
        self.tol = float(tol)
        self.method = method
        self.seed = int(seed)

    # -- public API ----------------------------------------------------

    def contains(self, q, f) -> Containment:
        return self.membership(q, f).containment

    def margin(self, q, f) -> float:
        return self.membership(q, f).margin

    def membership(self, q, f) -> MembershipResult:
        """Classify a covector; margin-route sets may answer Boundary.

        On the equality route the reported margin is minus the residual
        of f|V = theta|V, so it is 0 on the set and negative off it.
        """
        q = _coords(self.space, q)
        f = _coords(self.space, f)
        if not self.system.admissible(q):
            raise ValueError("configuration is outside the admissible region")
        use_exact = self.method != "generic" and self.system.kind in self._EXACT_KINDS
        if use_exact:
            return self._exact_membership(q, f)
        return self._generic_membership(q, f)

    def sample_boundary(self, q, n: int, seed: int | None = None):
        """Covectors on (or within tolerance of) the boundary of the set at q."""
        q = _coords(self.space, q)
        if not self.system.admissible(q):
            raise ValueError("configuration is outside the admissible region")
        rng = np.random.default_rng(self.seed if seed is None else seed)
        if self.method != "generic" and self.system.kind in self._EXACT_KINDS:
            return self._exact_boundary(q, n, rng)
        return self._bisection_boundary(q, n, rng)

    # -- shared pieces ---------------------------------------------------

    def _scale(self, f: np.ndarray) -> float:
        return 1.0 + float(np.linalg.norm(f))

    def _equality_result(self, residual: float, f: np.ndarray) -> MembershipResult:
        inside = residual <= self.tol * self._scale(f)
        return MembershipResult(Containment.IN if inside else Containment.OUT, -residual, "equality")

    def _margin_result(self, margin: float, f: np.ndarray) -> MembershipResult:
        band = self.tol * self._scale(f)
        if margin >= band:
            containment = Containment.IN
        elif margin <= -band:
            containment = Containment.OUT
        else:
            containment = Containment.BOUNDARY
        return MembershipResult(containment, margin, "margin")

    def _subspace_residual(self, q, f, basis: np.ndarray, extra_dirs=()) -> float:
        comps = [float(self.system.theta(q, basis[:, i])) - float(f @ basis[:, i]) for i in range(basis.shape[1])]
        resid = float(np.linalg.norm(comps))
        for w in extra_dirs:
            resid = max(resid, abs(float(self.system.theta(q, w)) - float(f @ w)))
        return resid

    # -- exact route -----------------------------------------------------

    def _exact_membership(self, q, f) -> MembershipResult:
        kind = self.system.kind
        p = self.system.params
        sp = self.space
        if kind in ("spring", "potential"):
            target = (
                p["stiffness"] * sp.lower(q - p["center"])
                if kind == "spring"
                else np.asarray(self.system.potential_grad(q), dtype=float)
            )
            return self._equality_result(float(np.linalg.norm(f - target)), f)
        if kind == "bilinear":
            target = p["form"].T @ (q - p["center"])
            return self._equality_result(float(np.linalg.norm(f - target)), f)
        if kind == "friction":
            rho = p["form"]
            t = float(f @ np.linalg.solve(rho, f))
            return self._margin_result(1.0 - np.sqrt(max(t, 0.0)), f)
        if kind == "rod":
            d = q - p["center"]
            radial = (float(f @ d) / p["length"] ** 2) * sp.lower(d)
            return self._equality_result(float(np.linalg.norm(f - radial)), f)
        if kind == "skate":
            phi = float(q[2])
            blade = np.array([np.cos(phi), np.sin(phi), 0.0])
            resid = float(np.hypot(f @ blade, f[2]))
            return self._equality_result(resid, f)
        if kind == "corner":
            return self._corner_membership(q, f)
        if kind == "coulomb":
            return self._coulomb_membership(q, f)
        raise AssertionError(kind)

    def _corner_membership(self, q, f) -> MembershipResult:
        p = self.system.params
        sp = self.space
        normals = np.vstack([sp.lower(p["u1"]), sp.lower(p["u2"])])
        gaps = normals @ (q - p["vertex"])
        active = [u for u, gap in zip((p["u1"], p["u2"]), gaps) if abs(gap) <= 1e-9]
        if not active:
            # interior: the set is the zero covector alone
            return self._equality_result(float(np.linalg.norm(f)), f)
        frame = self._metric_frame(active)
        comps = frame @ f
        n_active = len(active)
        pos = np.maximum(comps[:n_active], 0.0)
        perp = comps[n_active:]
        margin = -float(np.sqrt(np.sum(pos**2) + np.sum(perp**2)))
        return self._margin_result(margin, f)

    def _metric_frame(self, leading_vectors):
        """Rows are metric-orthonormal vectors u_i, the given ones first.

        Dotting a covector f with the rows yields its pairing components
        <f, u_i> in a metric-orthonormal frame.
        """
        sp = self.space
        L = sp.metric_sqrt()
        rows = [L @ np.asarray(u, dtype=float) for u in leading_vectors]
        m = np.vstack(rows)
        _, _, vt = np.linalg.svd(m)
        rest = vt[len(rows):]
        full = np.vstack([m] + ([rest] if rest.size else []))
        return full @ np.linalg.inv(L).T

    def _coulomb_membership(self, q, f) -> MembershipResult:
        p = self.system.params
        sp = self.space
        gap = float(sp.lower(p["normal"]) @ (q - p["origin"]))
        if gap > 1e-9:
            # away from the wall only the zero force is balanced
            return self._equality_result(float(np.linalg.norm(f)), f)
        nu = p["nu"]
        k = p["normal"]
        fn = float(f @ k)
        ft = f - fn * sp.lower(k)
        slip = sp.covector_norm(ft)
        if nu == 0.0:
            frame = self._metric_frame([k])
            comps = frame @ f
            margin = -float(np.sqrt(max(comps[0], 0.0) ** 2 + np.sum(comps[1:] ** 2)))
            return self._margin_result(margin, f)
        if fn > 0.0 and slip <= fn / nu:
            best = float(np.hypot(fn, slip))
        else:
            best = (nu * fn + slip) / np.sqrt(1.0 + nu * nu)
        return self._margin_result(-best, f)

    # -- generic route -----------------------------------------------------

    def _generic_membership(self, q, f) -> MembershipResult:
        rng = np.random.default_rng(self.seed)
        vset = self.system.virtual_at(q)
        basis = vset.subspace_basis()
        if basis is not None and vset.reversible and _theta_is_odd(self.system, q, vset, rng):
            if basis.shape[1] == 0:
                return self._equality_result(0.0, f)
            extra = [np.asarray(v, float) for v in vset.directions(4, rng)]
            return self._equality_result(self._subspace_residual(q, f, basis, extra), f)
        margin = self._optimize_margin(q, f, vset, rng)
        return self._margin_result(margin, f)

    def _optimize_margin(self, q, f, vset: VirtualSet, rng) -> float:
        """Multi-start projected descent of theta(q,v) - <f,v> on the unit sphere."""
        sp = self.space
        L = sp.metric_sqrt()
        Linv = np.linalg.inv(L)
        dim = sp.dim

        def to_v(y):
            return y @ Linv.T

        def value(y):
            v = to_v(y)
            return self.system.theta_rows(q, v) - v @ f

        def project_unit(y):
            v = vset.project(to_v(y))
            y2 = v @ L.T
            norms = np.linalg.norm(y2, axis=1)
            bad = norms < 1e-12
            if np.any(bad):
                # restart collapsed iterates from fresh admissible directions
                fresh = vset.directions(int(bad.sum()) + 1, rng)
                fill = np.asarray(fresh[: int(bad.sum())], dtype=float)
                if fill.shape[0] < int(bad.sum()):
                    fill = np.vstack([fill] + [fill[-1:]] * (int(bad.sum()) - fill.shape[0]))
                y2[bad] = fill @ L.T
                norms = np.linalg.norm(y2, axis=1)
            return y2 / norms[:, None]

        starts = vset.directions(N_STARTS, rng)
        if not starts:
            return 0.0
        try:
            vset.project(np.asarray(starts[:1], dtype=float))
        except NotImplementedError:
            # no projection available (generic predicate intersections):
            # fall back to dense sampling of admissible unit directions
            dense = vset.directions(16 * N_STARTS, rng)
            rows = np.asarray(dense, dtype=float)
            norms = np.array([sp.vector_norm(r) for r in rows])
            rows = rows / norms[:, None]
            return float(np.min(self.system.theta_rows(q, rows) - rows @ f))
        y = project_unit(np.asarray(starts, dtype=float) @ L.T)
        n = y.shape[0]
        h = 1e-6
        disp = np.vstack([np.eye(dim) * h, -np.eye(dim) * h])  # (2 dim, dim)
        cur = value(y)
        best_val = cur.min()
        steps = np.full(n, 0.3)
        stall = 0
        for _ in range(N_ITERS):
            probes = (y[:, None, :] + disp[None, :, :]).reshape(n * 2 * dim, dim)
            pv = value(probes).reshape(n, 2 * dim)
            grad = (pv[:, :dim] - pv[:, dim:]) / (2 * h)
            radial = np.sum(grad * y, axis=1)
            tang = grad - radial[:, None] * y
            trial = project_unit(y - steps[:, None] * tang)
            tv = value(trial)
            improved = tv < cur - 1e-16
            y[improved] = trial[improved]
            cur[improved] = tv[improved]
            steps[~improved] *= 0.5
            steps[improved] *= 1.1
            np.clip(steps, 1e-12, 1.0, out=steps)
            best_val = min(best_val, float(tv.min()))
            if np.any(improved):
                stall = 0
            else:
                stall += 1
                if stall >= 8:
                    break
        return float(min(best_val, cur.min()))

    # -- boundary sampling ---------------------------------------------

    def _dual_sphere_dirs(self, n: int, rng) -> list:
        if self.space.dim == 2:
            angles = 2.0 * np.pi * np.arange(n) / max(n, 1)
            return [np.array([np.cos(a), np.sin(a)]) for a in angles]
        out = []
        while len(out) < n:
            w = rng.standard_normal(self.space.dim)
            nrm = np.linalg.norm(w)
            if nrm > 1e-12:
                out.append(w / nrm)
        return out

    def _exact_boundary(self, q, n, rng):
        kind = self.system.kind
        p = self.system.params
        sp = self.space
        if kind in ("spring", "potential", "bilinear"):
            if kind == "spring":
                f = p["stiffness"] * sp.lower(q - p["center"])
            elif kind == "bilinear":
                f = p["form"].T @ (q - p["center"])
            else:
                f = np.asarray(self.system.potential_grad(q), dtype=float)
            return [f]
        if kind == "friction":
            Lrho = np.linalg.cholesky(p["form"])
            return [Lrho @ u for u in self._dual_sphere_dirs(n, rng)]
        if kind == "rod":
            ray = sp.lower(q - p["center"]) / p["length"]
            ladder = [c for i in range(1, n + 1) for c in (float(i), -float(i))]
            return [c * ray for c in ladder[:n]]
        if kind == "skate":
            phi = float(q[2])
            normal = np.array([-np.sin(phi), np.cos(phi), 0.0])
            ladder = [c for i in range(1, n + 1) for c in (float(i), -float(i))]
            return [c * normal for c in ladder[:n]]
        if kind == "corner":
            normals = np.vstack([sp.lower(p["u1"]), sp.lower(p["u2"])])
            gaps = normals @ (q - p["vertex"])
            active = [normals[i] for i in range(2) if abs(gaps[i]) <= 1e-9]
            if not active:
                raise ValueError("interior point: the constitutive set is the zero covector only")
            rays = [-a for a in active]
            if len(rays) == 2:
                weights = np.linspace(0.0, 1.0, max(n, 2))
                return [-(w * normals[0] + (1.0 - w) * normals[1]) for w in weights[:n]]
            return [float(i + 1) * rays[0] for i in range(n)]
        if kind == "coulomb":
            gap = float(sp.lower(p["normal"]) @ (q - p["origin"]))
            if gap > 1e-9:
                raise ValueError("interior point: the constitutive set is the zero covector only")
            k, nu = p["normal"], p["nu"]
            L = sp.metric_sqrt()
            _, _, vt = np.linalg.svd((L @ k)[None, :])
            Linv = np.linalg.inv(L)
            tangent_vecs = [Linv @ vt[i] for i in range(1, sp.dim)]  # metric-unit, orthogonal to k
            out = []
            for i in range(n):
                angle = 2.0 * np.pi * i / max(n, 1)
                if len(tangent_vecs) > 1:
                    t = np.cos(angle) * tangent_vecs[0] + np.sin(angle) * tangent_vecs[1]
                else:
                    t = (-1.0) ** i * tangent_vecs[0]
                out.append(nu * sp.lower(t) - sp.lower(k))
            return out
        raise AssertionError(kind)

    def _bisection_boundary(self, q, n, rng):
        """Boundary points along rays from the zero covector (margin route only)."""
        base = self.membership(q, np.zeros(self.space.dim))
        if base.route != "margin":
            raise ValueError("bisection boundary sampling needs a margin-route set")
        if base.margin < 0.0:
            raise ValueError("the zero covector is not inside; no ray-based boundary search")
        out = []
        attempts = 0
        while len(out) < n and attempts < 20 * n:
            attempts += 1
            d = rng.standard_normal(self.space.dim)
            d /= np.linalg.norm(d)
            r_hi = 1.0
            while self.membership(q, r_hi * d).margin > 0.0 and r_hi < 1e3:
                r_hi *= 2.0
            if r_hi >= 1e3:
                continue  # the set is unbounded along this ray
            r_lo = 0.0
            for _ in range(60):
                mid = 0.5 * (r_lo + r_hi)
                if self.membership(q, mid * d).margin > 0.0:
                    r_lo = mid
                else:
                    r_hi = mid
            out.append(0.5 * (r_lo + r_hi) * d)
        if len(out) < n:
            raise ValueError("boundary sampling failed: the set appears unbounded or degenerate")
        return out


def skate_constitutive(system: StaticSystem, q, f_linear, tau: float, tol: float = DEFAULT_TOL) -> Containment:
    """Skate force balance: the planar force annihilates the blade, no torque."""
    if system.kind != "skate":
        raise ValueError("skate_constitutive needs a skate system")
    q = _coords(system.space, q)
    f_linear = np.asarray(f_linear, dtype=float)
    if f_linear.shape != (2,):
        raise ValueError("the planar force has two components")
    f = np.array([f_linear[0], f_linear[1], float(tau)])
    cs = ConstitutiveSet(system, tol=tol)
    return cs.contains(q, f)
