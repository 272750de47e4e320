"""Equilibrium verdicts from the virtual-work inequality and work-jet signs.

The first-order check samples the virtual-displacement set and looks for
a descent direction of the work form.  The order-k check builds trial
arcs q0 + s v + s^2 c_2 + ... that respect the constraints to the
requested order, propagates the work jet along each and classifies it.
A negative jet is a rigorous failure certificate; an all-positive sample
is reported honestly as equilibrium *over the sampled family* only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import jets
from .processes import Process, work_jet
from .systems import FullSpace, LinearSubspace, StaticSystem

SIGN_TOL = 1e-9


class EquilibriumStatus(enum.Enum):
    NOT_EQUILIBRIUM = "not-equilibrium"
    EQUILIBRIUM_SAMPLED = "equilibrium-sampled"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class EquilibriumVerdict:
    status: EquilibriumStatus
    order_used: int
    n_samples: int
    witness_direction: np.ndarray | None = None
    witness_jet: jets.Jet | None = None

    def __str__(self):
        base = f"{self.status.value} (order {self.order_used}, {self.n_samples} trials)"
        if self.witness_direction is not None:
            base += f", witness direction {np.array2string(self.witness_direction, precision=6)}"
        return base


def _coords(space, q):
    if hasattr(q, "coords"):
        return np.asarray(q.coords, dtype=float)
    return space._coords(q)


def virtual_work_check(system: StaticSystem, q0, n_samples: int = 32, seed: int = 0) -> EquilibriumVerdict:
    """First-order principle of virtual work at q0.

    Samples unit virtual displacements (all generators when the set is
    polyhedral) and evaluates the work form.  A strictly negative value
    defeats equilibrium; strictly positive values on every sample
    certify it over the sample; otherwise first order does not decide.
    """
    q0 = _coords(system.space, q0)
    if not system.admissible(q0):
        raise ValueError("the configuration is outside the admissible region")
    rng = np.random.default_rng(seed)
    dirs = system.virtual_at(q0).directions(n_samples, rng)
    if not dirs:
        return EquilibriumVerdict(EquilibriumStatus.INDETERMINATE, 1, 0)
    values = system.theta_rows(q0, np.asarray(dirs))
    worst = int(np.argmin(values))
    if values[worst] < -SIGN_TOL:
        return EquilibriumVerdict(
            EquilibriumStatus.NOT_EQUILIBRIUM,
            1,
            len(dirs),
            witness_direction=np.asarray(dirs[worst]),
        )
    if np.all(values > SIGN_TOL):
        return EquilibriumVerdict(EquilibriumStatus.EQUILIBRIUM_SAMPLED, 1, len(dirs))
    return EquilibriumVerdict(EquilibriumStatus.INDETERMINATE, 1, len(dirs))


def _constraint_rows(system: StaticSystem, q0: np.ndarray):
    eqs = system.equality_constraints()
    if not eqs:
        return None, None
    jac = np.array([np.asarray(c.grad(q0), dtype=float) for c in eqs])
    return eqs, jac


def _solve_curvatures(system, q0, v, order, rng, curvature_scale):
    """Higher Taylor coefficients of a trial arc, constraint-consistent.

    For each order j >= 2 the equality constraints give linear equations
    on c_j (the lower coefficients fix the right-hand side through the
    constraint's own jet); the undetermined components are sampled.
    Without equality constraints the coefficients are sampled inside the
    virtual subspace, or freely when every displacement is admissible.
    """
    dim = q0.size
    rows = [q0, v] + [np.zeros(dim) for _ in range(order - 1)]
    eqs, jac = _constraint_rows(system, q0)
    vset = system.virtual_at(q0)
    basis = vset.subspace_basis()
    for j in range(2, order + 1):
        if eqs is not None:
            arc = np.vstack(rows[: j + 1])
            coord_jets = [jets.Jet(tuple(arc[:, i])) for i in range(dim)]
            residual = np.empty(len(eqs))
            for m, c in enumerate(eqs):
                cj = c.value(coord_jets)
                residual[m] = cj.coeffs[j] if isinstance(cj, jets.Jet) else 0.0
            sol, *_ = np.linalg.lstsq(jac, -residual, rcond=None)
            if np.max(np.abs(jac @ sol + residual)) > 1e-8 * (1.0 + np.max(np.abs(residual))):
                raise np.linalg.LinAlgError("constraint Taylor solve is singular")
            _, s, vt = np.linalg.svd(jac)
            rank = int((s > 1e-12 * s[0]).sum())
            null = vt[rank:].T
            free = null @ rng.standard_normal(null.shape[1]) * curvature_scale if null.size else 0.0
            rows[j] = sol + free
        elif basis is not None and not isinstance(vset, FullSpace):
            rows[j] = basis @ rng.standard_normal(basis.shape[1]) * curvature_scale
        else:
            rows[j] = rng.standard_normal(dim) * curvature_scale
    return np.vstack(rows)


def _inequality_ok(system, arc_rows, s_check=0.1, n_check=16) -> bool:
    ineqs = system.inequality_constraints()
    if not ineqs:
        return True
    svals = np.linspace(s_check / n_check, s_check, n_check)
    for s in svals:
        q = np.zeros(arc_rows.shape[1])
        for row in arc_rows[::-1]:
            q = q * s + row
        for c in ineqs:
            if c.value(q) < -1e-12:
                return False
    return True


def jet_equilibrium_check(
    system: StaticSystem,
    q0,
    order: int = 2,
    n_samples: int = 16,
    curvature_trials: int = 4,
    seed: int = 0,
) -> EquilibriumVerdict:
    """Order-k work-jet test over sampled admissible trial arcs.

    Any negative work jet defeats equilibrium at every order at or above
    the first negative coefficient (the increasing-germ property), so a
    single witness suffices.  All-positive jets certify equilibrium over
    the sampled family; zero or undecided jets leave the verdict open.
    """
    q0 = _coords(system.space, q0)
    if not system.admissible(q0):
        raise ValueError("the configuration is outside the admissible region")
    if not 1 <= order <= jets.K_MAX:
        raise ValueError(f"jet order must be in 1..{jets.K_MAX}")
    rng = np.random.default_rng(seed)
    vset = system.virtual_at(q0)
    dirs = vset.directions(n_samples, rng)
    n_curv = max(1, curvature_trials) if order >= 2 else 1

    all_positive = True
    n_trials = 0
    for v in dirs:
        v = np.asarray(v, dtype=float)
        for trial in range(n_curv):
            scale = 0.0 if trial == 0 else 0.5 * trial
            rows = _solve_curvatures(system, q0, v, order, rng, scale)
            if not _inequality_ok(system, rows):
                continue
            proc = _trial_process(system, rows)
            if proc is None:
                continue
            n_trials += 1
            wjet = work_jet(system, proc, order)
            sign = jets.classify(wjet, zero_tol=SIGN_TOL, source_is_zero=system.theta_is_zero)
            if sign == jets.JetSign.NEGATIVE:
                return EquilibriumVerdict(
                    EquilibriumStatus.NOT_EQUILIBRIUM,
                    order,
                    n_trials,
                    witness_direction=v,
                    witness_jet=wjet,
                )
            if sign != jets.JetSign.POSITIVE:
                all_positive = False
    if n_trials == 0:
        return EquilibriumVerdict(EquilibriumStatus.INDETERMINATE, order, 0)
    status = EquilibriumStatus.EQUILIBRIUM_SAMPLED if all_positive else EquilibriumStatus.INDETERMINATE
    return EquilibriumVerdict(status, order, n_trials)


def _trial_process(system, rows, a: float = 0.25):
    """Polynomial trial arc; shrinks the interval if the arc closes on itself."""
    for _ in range(4):
        try:
            return Process.from_polynomial(system.space, rows, a)
        except ValueError:
            a *= 0.25
    return None
