"""Command-line interface: equilibrium checks, constitutive queries,
critical sets, composition diagnostics, discrete dynamics and the
showcase examples.

Exit codes: 0 for a positive verdict (equilibrium, membership, all
checks passed), 1 for a negative one, 3 when the mathematics genuinely
returns an undecided answer (indeterminate or boundary), and 2 for
parse or domain errors.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import control, dynamics, figures
from .compose import clean_check, minkowski_sum_check
from .equilibrium import EquilibriumStatus, jet_equilibrium_check, virtual_work_check
from .gallery import run_example
from .legendre import Containment, ConstitutiveSet
from .modelfile import ModelError, load_model

_STATUS_EXIT = {
    EquilibriumStatus.EQUILIBRIUM_SAMPLED: 0,
    EquilibriumStatus.NOT_EQUILIBRIUM: 1,
    EquilibriumStatus.INDETERMINATE: 3,
}

_CONTAINMENT_EXIT = {Containment.IN: 0, Containment.OUT: 1, Containment.BOUNDARY: 3}


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _fmt_vec(v) -> str:
    return " ".join(_fmt(x) for x in np.asarray(v, dtype=float))


def _parse_coords(text: str, dim: int, what: str) -> np.ndarray:
    parts = text.replace(",", " ").split()
    if len(parts) != dim:
        raise ValueError(f"{what}: expected {dim} components, got {len(parts)}")
    return np.array([float(p) for p in parts])


def _emit(args, payload: dict, text_lines):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, default=_json_default))
    else:
        for line in text_lines:
            print(line)


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return [float(x) for x in obj.ravel()]
    if isinstance(obj, (np.floating, np.integer)):
        return float(obj)
    raise TypeError(f"not serializable: {type(obj)!r}")


def _require_system(model):
    if model.system is None:
        raise ValueError("this command needs a [system] model (not a controlled scenario)")
    return model.system


def _require_controlled(model):
    if model.controlled is None:
        raise ValueError("this command needs a controlled model (type = controlled)")
    return model.controlled


# -- subcommands -------------------------------------------------------

def cmd_check_equilibrium(args) -> int:
    model = load_model(args.model)
    system = _require_system(model)
    q = _parse_coords(args.point, system.space.dim, "--point")
    if args.order <= 1:
        verdict = virtual_work_check(system, q, n_samples=args.samples, seed=args.seed)
    else:
        verdict = jet_equilibrium_check(
            system, q, order=args.order, n_samples=args.samples,
            curvature_trials=args.curvature_trials, seed=args.seed,
        )
    code = _STATUS_EXIT[verdict.status]
    payload = {
        "command": "check-equilibrium",
        "status": verdict.status.value,
        "order": verdict.order_used,
        "trials": verdict.n_samples,
        "witness": None if verdict.witness_direction is None else list(map(float, verdict.witness_direction)),
        "exit_code": code,
    }
    lines = [
        f"status: {verdict.status.value}",
        f"order: {verdict.order_used}",
        f"trials: {verdict.n_samples}",
    ]
    if verdict.witness_direction is not None:
        lines.append(f"witness direction: {_fmt_vec(verdict.witness_direction)}")
        if verdict.witness_jet is not None:
            lines.append(f"witness work jet: {_fmt_vec(verdict.witness_jet.coeffs)}")
    _emit(args, payload, lines)
    return code


def cmd_constitutive(args) -> int:
    model = load_model(args.model)
    system = _require_system(model)
    dim = system.space.dim
    q = _parse_coords(args.point, dim, "--point")
    cs = ConstitutiveSet(system, tol=args.tol, seed=args.seed)
    if args.action == "contains":
        f = _parse_coords(args.covector, dim, "--covector")
        result = cs.membership(q, f)
        code = _CONTAINMENT_EXIT[result.containment]
        payload = {
            "command": "constitutive contains",
            "containment": result.containment.value,
            "margin": result.margin,
            "route": result.route,
            "exit_code": code,
        }
        lines = [
            f"containment: {result.containment.value}",
            f"margin: {_fmt(result.margin)}",
            f"route: {result.route}",
        ]
        _emit(args, payload, lines)
        return code
    samples = cs.sample_boundary(q, args.count, seed=args.seed)
    payload = {
        "command": "constitutive sample",
        "samples": [list(map(float, s)) for s in samples],
        "exit_code": 0,
    }
    lines = ["f" + str(i + 1) + "," + ",".join(_fmt(x) for x in s) for i, s in enumerate(samples)]
    lines.insert(0, "label," + ",".join(f"c{j+1}" for j in range(dim)))
    _emit(args, payload, lines)
    if args.figures:
        import os

        os.makedirs(args.figures, exist_ok=True)
        out = figures.save_covector_scatter(samples, f"{args.figures}/boundary_samples.png")
        print(f"figure written: {out}", file=sys.stderr)
    return 0


def cmd_critical_set(args) -> int:
    model = load_model(args.model)
    csys = _require_controlled(model)
    q = _parse_coords(args.control, csys.fibration.base.dim, "--control")
    sol = control.solve_critical(csys, q, n_seeds=args.seeds, seed=args.seed)
    payload = {
        "command": "critical-set",
        "points": [
            {
                "branch": p.branch,
                "internal": list(map(float, p.qbar)),
                "residual": p.residual,
            }
            for p in sol.points
        ],
        "section": sol.section,
        "family": sol.family,
        "exit_code": 0,
    }
    lines = [f"critical points: {len(sol.points)}"]
    for p in sol.points:
        lines.append(f"  [{p.branch}] internal = {_fmt_vec(p.qbar)}  residual = {_fmt(p.residual)}")
    lines.append(f"section: {'yes' if sol.section else 'no (critical set is not a section)'}")
    if sol.family:
        lines.append("note: solutions form a continuum; reported points sample a family")
    _emit(args, payload, lines)
    return 0


def cmd_reduce(args) -> int:
    model = load_model(args.model)
    csys = _require_controlled(model)
    q = _parse_coords(args.control, csys.fibration.base.dim, "--control")
    sol = control.solve_critical(csys, q, n_seeds=args.seeds, seed=args.seed)
    entries = []
    lines = []
    for p in sol.points:
        f, rank = control.reduced_force(csys, p)
        entries.append({"branch": p.branch, "force": list(map(float, f)), "determined_rank": rank})
        lines.append(f"[{p.branch}] reduced force = {_fmt_vec(f)}  (determined on rank {rank})")
    payload = {"command": "reduce", "forces": entries, "exit_code": 0}
    _emit(args, payload, lines)
    return 0


def cmd_compose(args) -> int:
    model = load_model(args.model)
    system = _require_system(model)
    if system.kind != "composed" or "members" not in system.params:
        raise ValueError("the compose command needs a model with type = composed")
    sys_a, sys_b = system.params["members"]
    q = _parse_coords(args.point, system.space.dim, "--point")
    report = clean_check(sys_a, sys_b, q)
    payload = {
        "command": "compose",
        "clean": report.verdict.value,
        "virtual_dim": report.virtual_dim,
        "linearized_dim": report.linearized_dim,
        "obstruction": report.obstruction,
        "warning": report.warning,
    }
    lines = [
        f"intersection: {report.verdict.value}",
        f"virtual-set dimension: {report.virtual_dim}",
        f"linearized tangent dimension: {report.linearized_dim}",
        f"second-order obstruction: {_fmt(report.obstruction)}",
    ]
    if report.warning:
        lines.append(f"warning: {report.warning}")
    code = 0 if report.verdict.value == "clean" else 3
    if args.sum_trials > 0:
        try:
            sum_rep = minkowski_sum_check(sys_a, sys_b, q, trials=args.sum_trials, seed=args.seed)
            payload["sum_check"] = {
                "trials": sum_rep.trials,
                "members": sum_rep.members,
                "max_violation": sum_rep.max_violation,
            }
            lines.append(
                f"sum rule: max violation {_fmt(sum_rep.max_violation)} over {sum_rep.trials} covectors"
            )
        except ValueError as exc:
            payload["sum_check"] = {"skipped": str(exc)}
            lines.append(f"sum rule skipped: {exc}")
    payload["exit_code"] = code
    _emit(args, payload, lines)
    return code


def cmd_dynamics(args) -> int:
    model = load_model(args.model)
    if model.lagrangian is None:
        raise ValueError("this command needs a [dynamics] section in the model")
    lagr = model.lagrangian
    t0, t1 = model.t_span
    dim = lagr.dim
    q_start = _parse_coords(args.start, dim, "--start")
    q_end = _parse_coords(args.end, dim, "--end")
    force = None
    if args.force is not None:
        f_const = _parse_coords(args.force, dim, "--force")
        force = lambda t: f_const  # noqa: E731 - constant external force
    path = dynamics.solve_bvp(lagr, q_start, q_end, args.steps, (t0, t1), force)
    action = dynamics.discrete_action(lagr, path)
    p0, p1 = dynamics.boundary_momenta(lagr, path)
    resid = float(np.abs(dynamics.el_residuals(lagr, path, force)).max())
    payload = {
        "command": "dynamics solve",
        "action": action,
        "p0": list(map(float, p0)),
        "p1": list(map(float, p1)),
        "max_residual": resid,
        "times": list(map(float, path.times)),
        "points": [list(map(float, row)) for row in path.points],
        "exit_code": 0,
    }
    lines = ["t," + ",".join(f"q{j+1}" for j in range(dim))]
    for t, row in zip(path.times, path.points):
        lines.append(_fmt(t) + "," + ",".join(_fmt(x) for x in row))
    lines.append(f"# action = {_fmt(action)}")
    lines.append(f"# p0 = {_fmt_vec(p0)}")
    lines.append(f"# p1 = {_fmt_vec(p1)}")
    lines.append(f"# max interior residual = {_fmt(resid)}")
    _emit(args, payload, lines)
    if args.figures:
        import os

        os.makedirs(args.figures, exist_ok=True)
        out = figures.save_path_plot(path.times, path.points, f"{args.figures}/path.png")
        print(f"figure written: {out}", file=sys.stderr)
    return 0


def cmd_example(args) -> int:
    report = run_example(args.number, seed=args.seed)
    payload = {
        "command": "example",
        "number": report.number,
        "title": report.title,
        "checks": [{"label": c.label, "passed": c.passed, "detail": c.detail} for c in report.checks],
        "passed": report.passed,
        "exit_code": 0 if report.passed else 1,
    }
    lines = [f"example {report.number}: {report.title}"]
    for c in report.checks:
        mark = "PASS" if c.passed else "FAIL"
        detail = f" -- {c.detail}" if c.detail else ""
        lines.append(f"  [{mark}] {c.label}{detail}")
    lines.append(f"result: {'PASS' if report.passed else 'FAIL'}")
    _emit(args, payload, lines)
    if args.figures:
        written = figures.render_example_figures(report, args.figures)
        for w in written:
            print(f"figure written: {w}", file=sys.stderr)
    return 0 if report.passed else 1


# -- parser ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasistatic",
        description="Variational statics: equilibrium tests, constitutive sets, "
        "partial control, composition, discrete dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, tol=False):
        p.add_argument("--seed", type=int, default=0, help="seed for every sampled computation")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if tol:
            p.add_argument("--tol", type=float, default=1e-7, help="membership tolerance")

    p = sub.add_parser("check-equilibrium", help="virtual-work and work-jet equilibrium tests")
    p.add_argument("model")
    p.add_argument("--point", required=True, help="configuration coordinates, comma or space separated")
    p.add_argument("--order", type=int, default=2, help="jet order (1 = plain virtual work)")
    p.add_argument("--samples", type=int, default=16)
    p.add_argument("--curvature-trials", type=int, default=4)
    add_common(p)
    p.set_defaults(func=cmd_check_equilibrium)

    p = sub.add_parser("constitutive", help="membership and boundary samples of the constitutive set")
    p.add_argument("model")
    p.add_argument("action", choices=("contains", "sample"))
    p.add_argument("--point", required=True)
    p.add_argument("--covector", help="covector coordinates (contains)")
    p.add_argument("--count", "-n", type=int, default=8, help="number of boundary samples")
    p.add_argument("--figures", help="directory for rendered figures")
    add_common(p, tol=True)
    p.set_defaults(func=cmd_constitutive)

    p = sub.add_parser("critical-set", help="critical internal configurations over a control point")
    p.add_argument("model")
    p.add_argument("--control", required=True)
    p.add_argument("--seeds", type=int, default=12)
    add_common(p)
    p.set_defaults(func=cmd_critical_set)

    p = sub.add_parser("reduce", help="reduced forces at the critical points")
    p.add_argument("model")
    p.add_argument("--control", required=True)
    p.add_argument("--seeds", type=int, default=12)
    add_common(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("compose", help="clean-intersection and sum-rule diagnostics of a composed model")
    p.add_argument("model")
    p.add_argument("--point", required=True)
    p.add_argument("--sum-trials", type=int, default=100)
    add_common(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("dynamics", help="discrete variational boundary-value solver")
    p.add_argument("model")
    p.add_argument("action", choices=("solve",))
    p.add_argument("--start", required=True)
    p.add_argument("--end", required=True)
    p.add_argument("--steps", type=int, default=64)
    p.add_argument("--force", help="constant external force covector")
    p.add_argument("--figures", help="directory for rendered figures")
    add_common(p)
    p.set_defaults(func=cmd_dynamics)

    p = sub.add_parser("example", help="run a showcase scenario and verify its checks")
    p.add_argument("number", type=int)
    p.add_argument("--figures", help="directory for rendered figures")
    add_common(p)
    p.set_defaults(func=cmd_example)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "command", None) == "constitutive" and args.action == "contains" and not args.covector:
        print("error: contains needs --covector", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ModelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except np.linalg.LinAlgError as exc:
        print(f"error: linear algebra failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
