"""Discrete variational dynamics on a finite time interval.

The action of a path is the midpoint-rule sum of a Lagrangian over the
segments of a uniform time grid.  Stationarity of the force-augmented
action at interior nodes gives the discrete Euler-Lagrange equations

    (p_i - p_{i-1}) / h - avg(D1 lambda) = f(t_i),

with p_i the segment momentum D2 lambda at the i-th midpoint.  The
midpoint rule is second-order accurate and exact on linear motions.
Boundary momenta use one-sided second-order velocity estimates at the
endpoints so that they converge at the same rate as the path itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import spsolve


class QuadraticLagrangian:
    """lambda(q, v) = v.M.v/2 - q.K.q/2 - c.q with M positive definite."""

    def __init__(self, mass, stiffness=None, linear=None):
        m = np.atleast_2d(np.asarray(mass, dtype=float))
        self.dim = m.shape[0]
        if m.shape != (self.dim, self.dim):
            raise ValueError("mass matrix must be square")
        try:
            np.linalg.cholesky(m)
        except np.linalg.LinAlgError as exc:
            raise ValueError("mass matrix must be positive definite") from exc
        k = np.zeros((self.dim, self.dim)) if stiffness is None else np.atleast_2d(np.asarray(stiffness, dtype=float))
        if k.shape != m.shape:
            raise ValueError("stiffness matrix must match the mass matrix shape")
        if not np.allclose(k, k.T, atol=1e-12, rtol=0.0):
            raise ValueError("stiffness matrix must be symmetric")
        c = np.zeros(self.dim) if linear is None else np.asarray(linear, dtype=float).reshape(-1)
        if c.shape != (self.dim,):
            raise ValueError("linear term must have the mass dimension")
        self.mass = m
        self.stiffness = k
        self.linear = c

    def value(self, q, v):
        q = np.asarray(q, dtype=float)
        v = np.asarray(v, dtype=float)
        return 0.5 * v @ self.mass @ v - 0.5 * q @ self.stiffness @ q - self.linear @ q

    def d_dq(self, q, v):
        return -(self.stiffness @ np.asarray(q, dtype=float)) - self.linear

    def d_dv(self, q, v):
        return self.mass @ np.asarray(v, dtype=float)


@dataclass(frozen=True)
class CustomLagrangian:
    """Lagrangian from callables; the partials must be analytic."""

    dim: int
    value: object  # (q, v) -> float
    d_dq: object  # (q, v) -> ndarray
    d_dv: object  # (q, v) -> ndarray


@dataclass(frozen=True)
class DiscretePath:
    """Uniform time grid t_0..t_N with configurations q_0..q_N."""

    t0: float
    t1: float
    points: np.ndarray  # (N+1, dim)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[0] < 3:
            raise ValueError("a path needs at least two segments (three nodes)")
        if self.t1 <= self.t0:
            raise ValueError("the time interval must have positive length")
        object.__setattr__(self, "points", pts)

    @property
    def n_segments(self) -> int:
        return self.points.shape[0] - 1

    @property
    def h(self) -> float:
        return (self.t1 - self.t0) / self.n_segments

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.points.shape[0])

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.points[:-1] + self.points[1:])

    @property
    def velocities(self) -> np.ndarray:
        return np.diff(self.points, axis=0) / self.h


def discrete_action(lagrangian, path: DiscretePath) -> float:
    """Midpoint-rule action: sum of lambda(midpoint, velocity) * h."""
    mids = path.midpoints
    vels = path.velocities
    return float(sum(lagrangian.value(q, v) for q, v in zip(mids, vels)) * path.h)


def segment_momenta(lagrangian, path: DiscretePath) -> np.ndarray:
    return np.array([lagrangian.d_dv(q, v) for q, v in zip(path.midpoints, path.velocities)])


def el_residuals(lagrangian, path: DiscretePath, force=None) -> np.ndarray:
    """Discrete Euler-Lagrange residual at each interior node."""
    h = path.h
    p = segment_momenta(lagrangian, path)
    d1 = np.array([lagrangian.d_dq(q, v) for q, v in zip(path.midpoints, path.velocities)])
    times = path.times
    out = np.empty((path.n_segments - 1, path.points.shape[1]))
    for i in range(1, path.n_segments):
        f = np.zeros(path.points.shape[1]) if force is None else np.asarray(force(times[i]), dtype=float)
        out[i - 1] = (p[i] - p[i - 1]) / h - 0.5 * (d1[i] + d1[i - 1]) - f
    return out


def boundary_momenta(lagrangian, path: DiscretePath):
    """Endpoint momenta from one-sided second-order velocity estimates."""
    h = path.h
    pts = path.points
    v0 = (-3.0 * pts[0] + 4.0 * pts[1] - pts[2]) / (2.0 * h)
    v1 = (3.0 * pts[-1] - 4.0 * pts[-2] + pts[-3]) / (2.0 * h)
    p0 = np.asarray(lagrangian.d_dv(pts[0], v0), dtype=float)
    p1 = np.asarray(lagrangian.d_dv(pts[-1], v1), dtype=float)
    return p0, p1


def solve_bvp(lagrangian, q_start, q_end, n_segments: int, t_span=(0.0, 1.0), force=None) -> DiscretePath:
    """Path with pinned endpoints making the force-augmented action stationary.

    Quadratic Lagrangians assemble one sparse linear system; custom
    Lagrangians run damped Newton from the straight-line path using the
    block-tridiagonal structure of the residual.
    """
    if n_segments < 2:
        raise ValueError("need at least two segments")
    t0, t1 = float(t_span[0]), float(t_span[1])
    dim = lagrangian.dim if hasattr(lagrangian, "dim") else np.asarray(q_start, float).size
    q_start = np.asarray(q_start, dtype=float).reshape(dim)
    q_end = np.asarray(q_end, dtype=float).reshape(dim)
    if isinstance(lagrangian, QuadraticLagrangian):
        return _solve_quadratic(lagrangian, q_start, q_end, n_segments, t0, t1, force)
    return _solve_newton(lagrangian, q_start, q_end, n_segments, t0, t1, force)


def _force_at(force, t, dim):
    if force is None:
        return np.zeros(dim)
    return np.asarray(force(t), dtype=float).reshape(dim)


def _solve_quadratic(lagr, q_start, q_end, n, t0, t1, force) -> DiscretePath:
    dim = lagr.dim
    h = (t1 - t0) / n
    m_h2 = lagr.mass / h**2
    k4 = lagr.stiffness / 4.0
    diag_block = -2.0 * m_h2 + 2.0 * k4
    off_block = m_h2 + k4

    n_unknown = n - 1
    a = sparse.lil_matrix((n_unknown * dim, n_unknown * dim))
    b = np.zeros(n_unknown * dim)
    times = t0 + h * np.arange(n + 1)
    for i in range(1, n):
        r = (i - 1) * dim
        a[r : r + dim, r : r + dim] = diag_block
        if i > 1:
            a[r : r + dim, r - dim : r] = off_block
        if i < n - 1:
            a[r : r + dim, r + dim : r + 2 * dim] = off_block
        rhs = _force_at(force, times[i], dim) - lagr.linear
        if i == 1:
            rhs = rhs - off_block @ q_start
        if i == n - 1:
            rhs = rhs - off_block @ q_end
        b[r : r + dim] = rhs
    x = spsolve(a.tocsr(), b)
    interior = x.reshape(n_unknown, dim)
    pts = np.vstack([q_start, interior, q_end])
    return DiscretePath(t0, t1, pts)


def _solve_newton(lagr, q_start, q_end, n, t0, t1, force, max_iter=60, tol=1e-11) -> DiscretePath:
    dim = q_start.size
    line = np.linspace(0.0, 1.0, n + 1)[:, None]
    pts = (1.0 - line) * q_start + line * q_end

    def residual(pts_flat):
        p = DiscretePath(t0, t1, np.vstack([q_start, pts_flat.reshape(n - 1, dim), q_end]))
        return el_residuals(lagr, p, force).ravel()

    x = pts[1:-1].ravel().copy()
    res = residual(x)
    for _ in range(max_iter):
        nrm = np.linalg.norm(res, ord=np.inf)
        if nrm <= tol:
            break
        jac = sparse.lil_matrix((x.size, x.size))
        step_fd = 1e-7
        for j in range(x.size):
            node = j // dim
            xp = x.copy()
            xp[j] += step_fd
            rp = residual(xp)
            lo = max(0, (node - 1) * dim)
            hi = min(x.size, (node + 2) * dim)
            jac[lo:hi, j] = ((rp - res)[lo:hi] / step_fd)[:, None]
        try:
            delta = spsolve(jac.tocsr(), -res)
        except RuntimeError as exc:
            raise RuntimeError("Newton system is singular") from exc
        lam = 1.0
        while lam > 1e-10:
            x_new = x + lam * delta
            r_new = residual(x_new)
            if np.linalg.norm(r_new, ord=np.inf) < nrm:
                x, res = x_new, r_new
                break
            lam *= 0.5
        else:
            raise RuntimeError("Newton line search stalled; the boundary problem may be infeasible")
    else:
        raise RuntimeError("Newton did not converge on the boundary-value problem")
    pts = np.vstack([q_start, x.reshape(n - 1, dim), q_end])
    return DiscretePath(t0, t1, pts)
