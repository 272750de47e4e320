"""Affine Euclidean configuration spaces and their tangent/cotangent values.

A configuration space is an affine space of fixed dimension whose model
vector space carries a symmetric positive-definite metric.  Points,
vectors (virtual displacements) and covectors (forces) are thin wrappers
around dense coordinate arrays; all numerics run on the raw arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

SYMMETRY_TOL = 1e-12


class EuclideanSpace:
    """Affine space of dimension ``dim`` with an SPD metric on coordinates."""

    def __init__(self, dim: int, metric=None):
        if dim < 1:
            raise ValueError("dimension must be a positive integer")
        self.dim = int(dim)
        if metric is None:
            metric = np.eye(self.dim)
        metric = np.array(metric, dtype=float)
        if metric.shape != (self.dim, self.dim):
            raise ValueError(f"metric must be {self.dim}x{self.dim}, got {metric.shape}")
        if not np.allclose(metric, metric.T, atol=SYMMETRY_TOL, rtol=0.0):
            raise ValueError("metric matrix is not symmetric")
        try:
            self._cho = cho_factor(metric)
        except np.linalg.LinAlgError as exc:
            raise ValueError("metric matrix is not positive definite") from exc
        self.metric = metric
        self.metric.setflags(write=False)

    def __eq__(self, other):
        return (
            isinstance(other, EuclideanSpace)
            and self.dim == other.dim
            and np.array_equal(self.metric, other.metric)
        )

    def __repr__(self):
        return f"EuclideanSpace(dim={self.dim})"

    # -- constructors -------------------------------------------------

    def point(self, coords) -> "Point":
        return Point(self, self._coords(coords))

    def vector(self, coords) -> "Vector":
        return Vector(self, self._coords(coords))

    def covector(self, coords) -> "Covector":
        return Covector(self, self._coords(coords))

    def origin(self) -> "Point":
        return Point(self, np.zeros(self.dim))

    def _coords(self, values) -> np.ndarray:
        arr = np.array(values, dtype=float).reshape(-1)
        if arr.shape != (self.dim,):
            raise ValueError(f"expected {self.dim} coordinates, got {arr.shape}")
        return arr

    # -- metric operations on raw arrays ------------------------------

    def lower(self, v_coords) -> np.ndarray:
        """Metric applied to a vector: raw covector coordinates."""
        return self.metric @ np.asarray(v_coords, dtype=float)

    def raise_(self, f_coords) -> np.ndarray:
        """Inverse metric applied to a covector: raw vector coordinates."""
        return cho_solve(self._cho, np.asarray(f_coords, dtype=float))

    def vector_norm(self, v_coords) -> float:
        v = np.asarray(v_coords, dtype=float)
        return float(np.sqrt(max(v @ self.metric @ v, 0.0)))

    def covector_norm(self, f_coords) -> float:
        f = np.asarray(f_coords, dtype=float)
        return float(np.sqrt(max(f @ self.raise_(f), 0.0)))

    def metric_sqrt(self) -> np.ndarray:
        """Matrix L with ||L v|| equal to the metric norm of v (change of frame)."""
        c, lower = self._cho
        return np.tril(c).T if lower else np.triu(c)

    # -- wrapper-level operations --------------------------------------

    def metric_apply(self, v: "Vector") -> "Covector":
        self._check_owns(v)
        return Covector(self, self.lower(v.coords))

    def metric_invert(self, f: "Covector") -> "Vector":
        self._check_owns(f)
        return Vector(self, self.raise_(f.coords))

    def _check_owns(self, value):
        if value.space != self:
            raise ValueError("value belongs to a different space")


def _check_same_space(a, b):
    if a.space != b.space:
        raise ValueError("operands belong to different spaces")


@dataclass(frozen=True)
class Point:
    space: EuclideanSpace
    coords: np.ndarray

    def __sub__(self, other):
        if isinstance(other, Point):
            _check_same_space(self, other)
            return Vector(self.space, self.coords - other.coords)
        if isinstance(other, Vector):
            _check_same_space(self, other)
            return Point(self.space, self.coords - other.coords)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Vector):
            _check_same_space(self, other)
            return Point(self.space, self.coords + other.coords)
        return NotImplemented


@dataclass(frozen=True)
class Vector:
    space: EuclideanSpace
    coords: np.ndarray

    def __add__(self, other):
        if isinstance(other, Vector):
            _check_same_space(self, other)
            return Vector(self.space, self.coords + other.coords)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Vector):
            _check_same_space(self, other)
            return Vector(self.space, self.coords - other.coords)
        return NotImplemented

    def __neg__(self):
        return Vector(self.space, -self.coords)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float)):
            return Vector(self.space, self.coords * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def norm(self) -> float:
        return self.space.vector_norm(self.coords)


@dataclass(frozen=True)
class Covector:
    space: EuclideanSpace
    coords: np.ndarray

    def __add__(self, other):
        if isinstance(other, Covector):
            _check_same_space(self, other)
            return Covector(self.space, self.coords + other.coords)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Covector):
            _check_same_space(self, other)
            return Covector(self.space, self.coords - other.coords)
        return NotImplemented

    def __neg__(self):
        return Covector(self.space, -self.coords)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float)):
            return Covector(self.space, self.coords * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def norm(self) -> float:
        return self.space.covector_norm(self.coords)

    def pair(self, v: Vector) -> float:
        return pair(self, v)


def pair(f: Covector, v: Vector) -> float:
    """Canonical pairing of a covector with a vector: the coordinate dot product."""
    _check_same_space(f, v)
    return float(np.dot(f.coords, v.coords))


def product_space(a: EuclideanSpace, b: EuclideanSpace) -> EuclideanSpace:
    """Product of two spaces: concatenated coordinates, block-diagonal metric."""
    dim = a.dim + b.dim
    metric = np.zeros((dim, dim))
    metric[: a.dim, : a.dim] = a.metric
    metric[a.dim :, a.dim :] = b.metric
    return EuclideanSpace(dim, metric)


def split_coords(coords, dim_first: int):
    """Slice product-space coordinates into the two factor blocks."""
    arr = np.asarray(coords)
    return arr[:dim_first], arr[dim_first:]
