"""Plain-text model definitions for the command-line tools.

A model file has bracketed sections with ``key = value`` lines.  The
``[space]`` section fixes the dimension and metric; ``[system]`` builds
one of the catalog systems (or a composition, or a controlled scenario);
an optional ``[dynamics]`` section provides a quadratic Lagrangian and
a time interval.  Parsing is strict: unknown sections or keys are
errors, and every number is a decimal real.

Example::

    [space]
    dim = 3

    [system]
    type = spring
    center = 0 0 0
    stiffness = 2.0
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import control, systems
from .control import ControlledSystem
from .dynamics import QuadraticLagrangian
from .geometry import EuclideanSpace
from .systems import StaticSystem


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Model:
    space: EuclideanSpace
    system: StaticSystem | None = None
    controlled: ControlledSystem | None = None
    lagrangian: QuadraticLagrangian | None = None
    t_span: tuple | None = None


def _parse_sections(text: str) -> dict:
    sections: dict[str, dict] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if not name:
                raise ModelError(f"line {lineno}: empty section name")
            if name in sections:
                raise ModelError(f"line {lineno}: duplicate section [{name}]")
            sections[name] = {}
            current = name
            continue
        if current is None:
            raise ModelError(f"line {lineno}: content before any section")
        if "=" not in line:
            raise ModelError(f"line {lineno}: expected key = value")
        key, value = line.split("=", 1)
        key = key.strip()
        if key in sections[current]:
            raise ModelError(f"line {lineno}: duplicate key {key!r} in [{current}]")
        sections[current][key] = value.strip()
    return sections


def _parse_float(value: str, what: str) -> float:
    try:
        return float(value)
    except ValueError as exc:
        raise ModelError(f"{what}: {value!r} is not a number") from exc


def _parse_int(value: str, what: str) -> int:
    try:
        return int(value)
    except ValueError as exc:
        raise ModelError(f"{what}: {value!r} is not an integer") from exc


def _parse_vector(value: str, dim: int, what: str) -> np.ndarray:
    parts = value.replace(",", " ").split()
    if len(parts) != dim:
        raise ModelError(f"{what}: expected {dim} components, got {len(parts)}")
    return np.array([_parse_float(p, what) for p in parts])


def _parse_matrix(value: str, dim: int, what: str) -> np.ndarray:
    if value.strip() == "identity":
        return np.eye(dim)
    rows = [r for r in value.split(";") if r.strip()]
    if len(rows) != dim:
        raise ModelError(f"{what}: expected {dim} rows separated by ';'")
    return np.vstack([_parse_vector(r, dim, what) for r in rows])


def _parse_terms(value: str, dim: int):
    """Monomial list ``e1 e2 ... : coeff`` separated by commas."""
    terms = []
    for chunk in value.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ModelError(f"polynomial term {chunk!r} needs 'exponents : coefficient'")
        left, right = chunk.rsplit(":", 1)
        exps = left.split()
        if len(exps) != dim:
            raise ModelError(f"polynomial term {chunk!r}: expected {dim} exponents")
        terms.append(
            (tuple(_parse_int(e, "exponent") for e in exps), _parse_float(right.strip(), "coefficient"))
        )
    if not terms:
        raise ModelError("polynomial needs at least one term")
    return terms


def _check_keys(section: dict, allowed, name: str):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ModelError(f"[{name}]: unknown keys {sorted(unknown)}")


def _require(section: dict, key: str, name: str) -> str:
    if key not in section:
        raise ModelError(f"[{name}]: missing key {key!r}")
    return section[key]


_SYSTEM_KEYS = {
    "spring": {"type", "center", "stiffness"},
    "bilinear": {"type", "center", "form"},
    "friction": {"type", "form"},
    "rod": {"type", "center", "length"},
    "corner": {"type", "vertex", "u1", "u2"},
    "skate": {"type"},
    "coulomb": {"type", "origin", "normal", "nu"},
    "potential-poly": {"type", "terms"},
    "composed": {"type"},
    "controlled": {"type", "scenario", "anchor", "k10", "k20", "k21", "origin", "axis", "length", "k", "k-perp", "center", "radius"},
}


def _build_plain_system(space: EuclideanSpace, section: dict, name: str) -> StaticSystem:
    kind = _require(section, "type", name)
    if kind not in _SYSTEM_KEYS or kind in ("composed", "controlled"):
        raise ModelError(f"[{name}]: type {kind!r} is not a plain system type")
    _check_keys(section, _SYSTEM_KEYS[kind], name)
    d = space.dim
    if kind == "spring":
        return systems.spring(space, _parse_vector(_require(section, "center", name), d, "center"),
                              _parse_float(_require(section, "stiffness", name), "stiffness"))
    if kind == "bilinear":
        return systems.bilinear(space, _parse_vector(_require(section, "center", name), d, "center"),
                                _parse_matrix(_require(section, "form", name), d, "form"))
    if kind == "friction":
        form = _parse_matrix(section["form"], d, "form") if "form" in section else None
        return systems.friction(space, form)
    if kind == "rod":
        return systems.rod(space, _parse_vector(_require(section, "center", name), d, "center"),
                           _parse_float(_require(section, "length", name), "length"))
    if kind == "corner":
        return systems.corner(space, _parse_vector(_require(section, "vertex", name), d, "vertex"),
                              _parse_vector(_require(section, "u1", name), d, "u1"),
                              _parse_vector(_require(section, "u2", name), d, "u2"))
    if kind == "skate":
        return systems.skate(space)
    if kind == "coulomb":
        return systems.coulomb(space, _parse_vector(_require(section, "origin", name), d, "origin"),
                               _parse_vector(_require(section, "normal", name), d, "normal"),
                               _parse_float(_require(section, "nu", name), "nu"))
    if kind == "potential-poly":
        return systems.polynomial_potential(space, _parse_terms(_require(section, "terms", name), d))
    raise AssertionError(kind)


def _build_generic_controlled(space: EuclideanSpace, sections: dict) -> ControlledSystem:
    """Controlled model from an explicit projection matrix and inner system.

    The [space] section is the internal (total) space; the [fibration]
    matrix rows span the control space, which gets the identity metric.
    """
    fib_sec = sections["fibration"]
    _check_keys(fib_sec, {"matrix"}, "fibration")
    raw = _require(fib_sec, "matrix", "fibration")
    rows = [r for r in raw.split(";") if r.strip()]
    matrix = np.vstack([_parse_vector(r, space.dim, "fibration matrix") for r in rows])
    base = EuclideanSpace(matrix.shape[0])
    inner = _build_plain_system(space, sections["system.inner"], "system.inner")
    try:
        fib = control.Fibration(space, base, matrix)
    except ValueError as exc:
        raise ModelError(str(exc)) from exc
    return ControlledSystem(inner, fib)


def _build_controlled(space: EuclideanSpace, section: dict) -> ControlledSystem:
    scenario = _require(section, "scenario", "system")
    d = space.dim
    if scenario == "spring-chain":
        return control.spring_chain(
            space,
            _parse_vector(_require(section, "anchor", "system"), d, "anchor"),
            _parse_float(_require(section, "k10", "system"), "k10"),
            _parse_float(_require(section, "k20", "system"), "k20"),
            _parse_float(_require(section, "k21", "system"), "k21"),
        )
    if scenario == "buckling-rod":
        return control.buckling_rod(
            space,
            _parse_vector(_require(section, "origin", "system"), d, "origin"),
            _parse_vector(_require(section, "axis", "system"), d, "axis"),
            _parse_float(_require(section, "length", "system"), "length"),
            _parse_float(_require(section, "k", "system"), "k"),
            _parse_float(_require(section, "k-perp", "system"), "k-perp"),
        )
    if scenario == "rod-sphere":
        return control.rod_sphere(
            space,
            _parse_vector(_require(section, "center", "system"), d, "center"),
            _parse_float(_require(section, "radius", "system"), "radius"),
            _parse_float(_require(section, "k", "system"), "k"),
        )
    raise ModelError(f"unknown controlled scenario {scenario!r}")


def parse_model(text: str) -> Model:
    sections = _parse_sections(text)
    known = {"space", "system", "system.a", "system.b", "system.inner", "fibration", "dynamics"}
    unknown = set(sections) - known
    if unknown:
        raise ModelError(f"unknown sections {sorted(unknown)}")
    if "space" not in sections:
        raise ModelError("a model needs a [space] section")
    _check_keys(sections["space"], {"dim", "metric"}, "space")
    dim = _parse_int(_require(sections["space"], "dim", "space"), "dim")
    metric = None
    if "metric" in sections["space"]:
        metric = _parse_matrix(sections["space"]["metric"], dim, "metric")
    try:
        space = EuclideanSpace(dim, metric)
    except ValueError as exc:
        raise ModelError(str(exc)) from exc

    system = None
    controlled = None
    if "system" in sections:
        sec = sections["system"]
        kind = _require(sec, "type", "system")
        try:
            if kind == "composed":
                _check_keys(sec, _SYSTEM_KEYS["composed"], "system")
                if "system.a" not in sections or "system.b" not in sections:
                    raise ModelError("composed models need [system.a] and [system.b] sections")
                from .compose import compose as compose_systems

                sys_a = _build_plain_system(space, sections["system.a"], "system.a")
                sys_b = _build_plain_system(space, sections["system.b"], "system.b")
                system = compose_systems(sys_a, sys_b)
            elif kind == "controlled":
                if "fibration" in sections or "system.inner" in sections:
                    _check_keys(sec, {"type"}, "system")
                    if "fibration" not in sections or "system.inner" not in sections:
                        raise ModelError("generic controlled models need [fibration] and [system.inner]")
                    controlled = _build_generic_controlled(space, sections)
                else:
                    _check_keys(sec, _SYSTEM_KEYS["controlled"], "system")
                    controlled = _build_controlled(space, sec)
            else:
                system = _build_plain_system(space, sec, "system")
        except ModelError:
            raise
        except ValueError as exc:
            raise ModelError(str(exc)) from exc
    elif "system.a" in sections or "system.b" in sections:
        raise ModelError("[system.a]/[system.b] need a [system] section with type = composed")
    if ("fibration" in sections or "system.inner" in sections) and controlled is None:
        raise ModelError("[fibration]/[system.inner] need a [system] section with type = controlled")

    lagrangian = None
    t_span = None
    if "dynamics" in sections:
        sec = sections["dynamics"]
        _check_keys(sec, {"mass", "stiffness", "linear", "t0", "t1"}, "dynamics")
        mass = _parse_matrix(_require(sec, "mass", "dynamics"), dim, "mass")
        stiffness = _parse_matrix(sec["stiffness"], dim, "stiffness") if "stiffness" in sec else None
        linear = _parse_vector(sec["linear"], dim, "linear") if "linear" in sec else None
        try:
            lagrangian = QuadraticLagrangian(mass, stiffness, linear)
        except ValueError as exc:
            raise ModelError(str(exc)) from exc
        t_span = (
            _parse_float(sec.get("t0", "0.0"), "t0"),
            _parse_float(sec.get("t1", "1.0"), "t1"),
        )
        if t_span[1] <= t_span[0]:
            raise ModelError("[dynamics]: t1 must exceed t0")

    if system is None and controlled is None and lagrangian is None:
        raise ModelError("a model needs a [system] or a [dynamics] section")
    return Model(space=space, system=system, controlled=controlled, lagrangian=lagrangian, t_span=t_span)


def load_model(path) -> Model:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_model(fh.read())
    except OSError as exc:
        raise ModelError(f"cannot read model file {path}: {exc}") from exc
