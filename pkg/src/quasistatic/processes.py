"""Oriented quasi-static processes: parameterized arcs, work integrals, work jets.

A process is an embedded arc given by a parameterization on [0, a],
oriented by increasing parameter from the initial configuration.  It
carries per-coordinate Taylor data at s = 0 so that the jet of the work
function can be propagated exactly; totals along the whole arc come from
adaptive quadrature.  Cyclic and constant processes are excluded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import jets
from .geometry import EuclideanSpace

INITIAL_POINT_TOL = 1e-10
QUAD_ABS_TOL = 1e-12


class AdmissibilityError(ValueError):
    """A sampled configuration or velocity violates the system constraints."""

    def __init__(self, message, s=None):
        super().__init__(message)
        self.s = s


class QuadratureError(RuntimeError):
    pass


def _poly_eval_rows(rows: np.ndarray, s: float) -> np.ndarray:
    acc = np.zeros(rows.shape[1])
    for row in rows[::-1]:
        acc = acc * s + row
    return acc


@dataclass(frozen=True)
class Process:
    """Oriented arc with an evaluable map and Taylor data at s = 0.

    ``taylor`` has shape (order+1, dim); row i holds the i-th Taylor
    coefficient vector of the parameterization, so row 0 is the initial
    configuration and row 1 the (nonzero) initial velocity.  When
    ``exact_taylor`` is set the parameterization is polynomial and the
    stored rows describe it exactly; jets of any order can then be read
    off by zero-padding.
    """

    space: EuclideanSpace
    a: float
    gamma: object  # s -> coords
    dgamma: object  # s -> velocity coords
    taylor: np.ndarray
    exact_taylor: bool = False

    def __post_init__(self):
        if self.a <= 0.0:
            raise ValueError("parameter length must be positive")
        taylor = np.asarray(self.taylor, dtype=float)
        if taylor.ndim != 2 or taylor.shape[1] != self.space.dim or taylor.shape[0] < 2:
            raise ValueError("taylor data must have shape (order+1, dim) with order >= 1")
        object.__setattr__(self, "taylor", taylor)
        if np.linalg.norm(taylor[1]) == 0.0:
            raise ValueError("initial velocity must be nonzero (constant processes excluded)")
        start = np.asarray(self.gamma(0.0), dtype=float)
        if np.max(np.abs(start - taylor[0])) > INITIAL_POINT_TOL * (1.0 + np.max(np.abs(start))):
            raise ValueError("gamma(0) does not match the order-0 Taylor coefficient")
        end = np.asarray(self.gamma(self.a), dtype=float)
        if np.allclose(end, start, atol=1e-12, rtol=0.0):
            raise ValueError("cyclic processes are excluded: gamma(a) equals gamma(0)")

    @property
    def taylor_order(self) -> int:
        return self.taylor.shape[0] - 1

    def point_at(self, s: float) -> np.ndarray:
        return np.asarray(self.gamma(s), dtype=float)

    def velocity_at(self, s: float) -> np.ndarray:
        return np.asarray(self.dgamma(s), dtype=float)

    @property
    def initial_point(self) -> np.ndarray:
        return self.taylor[0]

    @property
    def initial_velocity(self) -> np.ndarray:
        return self.taylor[1]

    def coordinate_jets(self, order: int):
        """Per-coordinate jets of the parameterization at s = 0."""
        rows = self._rows(order)
        return [jets.Jet(tuple(rows[:, i])) for i in range(self.space.dim)]

    def velocity_jets(self, order: int):
        """Per-coordinate jets of the velocity at s = 0 (needs Taylor data to order+1)."""
        rows = self._rows(order + 1)
        shifted = rows[1:] * np.arange(1, order + 2)[:, None]
        return [jets.Jet(tuple(shifted[:, i])) for i in range(self.space.dim)]

    def _rows(self, order: int) -> np.ndarray:
        have = self.taylor_order
        if order <= have:
            return self.taylor[: order + 1]
        if not self.exact_taylor:
            raise ValueError(
                f"process carries Taylor data to order {have}, requested {order}; "
                "construct it with higher order or a polynomial parameterization"
            )
        pad = np.zeros((order - have, self.space.dim))
        return np.vstack([self.taylor, pad])

    # -- constructors ---------------------------------------------------

    @staticmethod
    def from_polynomial(space: EuclideanSpace, rows, a: float) -> "Process":
        """Arc gamma(s) = rows[0] + rows[1] s + rows[2] s^2 + ..."""
        rows = np.atleast_2d(np.asarray(rows, dtype=float))
        drows = rows[1:] * np.arange(1, rows.shape[0])[:, None]
        return Process(
            space,
            float(a),
            gamma=lambda s: _poly_eval_rows(rows, s),
            dgamma=lambda s: _poly_eval_rows(drows, s),
            taylor=rows,
            exact_taylor=True,
        )

    @staticmethod
    def line(space: EuclideanSpace, start, velocity, a: float) -> "Process":
        start = np.asarray(start, dtype=float)
        velocity = np.asarray(velocity, dtype=float)
        return Process.from_polynomial(space, np.vstack([start, velocity]), a)

    @staticmethod
    def from_callable(space, gamma, a: float, order: int, dgamma=None) -> "Process":
        """Arc from an evaluable map; Taylor data by finite differences."""
        if dgamma is None:
            h = 1e-6 * max(1.0, abs(a))

            def dgamma(s, _gamma=gamma, _h=h, _a=a):
                lo, hi = max(0.0, s - _h), min(_a, s + _h)
                return (np.asarray(_gamma(hi), float) - np.asarray(_gamma(lo), float)) / (hi - lo)

        coord_jets = [
            jets.from_function(lambda s, i=i: float(np.asarray(gamma(s), float)[i]), order, scale=a)
            for i in range(space.dim)
        ]
        rows = np.array([[j.coeffs[m] for j in coord_jets] for m in range(order + 1)])
        return Process(space, float(a), gamma=gamma, dgamma=dgamma, taylor=rows)

    def restrict(self, s_star: float) -> "Process":
        """Initial segment of the same arc, reparameterized on [0, s_star]."""
        if not 0.0 < s_star <= self.a:
            raise ValueError(f"restriction point {s_star} outside (0, {self.a}]")
        return Process(
            self.space, float(s_star), self.gamma, self.dgamma, self.taylor, self.exact_taylor
        )


@dataclass(frozen=True)
class WorkSamples:
    """Cumulative work w(s) on a grid, with w(0) = 0."""

    grid: np.ndarray
    values: np.ndarray
    total: float
    monotone: bool = field(default=False)


def _check_admissible(system, process, s_values):
    for s in s_values:
        q = process.point_at(s)
        if not system.admissible(q):
            raise AdmissibilityError(f"configuration leaves the admissible region at s={s:.6g}", s=s)
        v = process.velocity_at(s)
        if not system.virtual_at(q).contains(v):
            raise AdmissibilityError(f"velocity leaves the virtual-displacement set at s={s:.6g}", s=s)


def work_along(system, process: Process, n_grid: int = 32) -> WorkSamples:
    """Work function along the process by adaptive quadrature of the work form.

    Admissibility (configuration in the region, velocity in the virtual
    set) is checked at the grid nodes only; the first violating parameter
    value is reported.
    """
    grid = np.linspace(0.0, process.a, n_grid + 1)
    _check_admissible(system, process, grid)

    def integrand(s):
        return system.theta(process.point_at(s), process.velocity_at(s))

    values = np.zeros(n_grid + 1)
    acc = 0.0
    for i in range(n_grid):
        piece, err = quad(integrand, grid[i], grid[i + 1], epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL, limit=200)
        if not np.isfinite(piece):
            raise QuadratureError(f"work integral diverged on [{grid[i]:.6g}, {grid[i+1]:.6g}]")
        acc += piece
        values[i + 1] = acc
    diffs = np.diff(values)
    monotone = bool(np.all(diffs >= -1e-12) or np.all(diffs <= 1e-12))
    return WorkSamples(grid=grid, values=values, total=float(values[-1]), monotone=monotone)


def work_jet(system, process: Process, order: int) -> jets.Jet:
    """Jet of s -> w(s) at s = 0, via jet propagation through the work form.

    The integrand jet comes from pushing the arc's Taylor data through
    the work form with jet arithmetic; its antiderivative is the work
    jet, whose constant term vanishes by construction.
    """
    if not 1 <= order <= jets.K_MAX:
        raise ValueError(f"jet order must be in 1..{jets.K_MAX}")
    if system.theta_is_zero:
        return jets.Jet((0.0,) * (order + 1))
    q_jets = process.coordinate_jets(order - 1)
    v_jets = process.velocity_jets(order - 1)
    integrand = system.theta(q_jets, v_jets)
    if not isinstance(integrand, jets.Jet):
        integrand = jets.Jet.constant(float(integrand), order - 1)
    return jets.antiderivative(integrand)
