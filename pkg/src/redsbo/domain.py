"""Boxes, random candidate sets and reproducible random streams."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from redsbo.errors import EmptyDomainError, InvalidArgumentError


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``[lower, upper]`` in ``d`` dimensions."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) == 0 or len(lo) != len(hi):
            raise InvalidArgumentError("box bounds must be non-empty and of equal length")
        if any(a >= b for a, b in zip(lo, hi)):
            raise InvalidArgumentError("box requires lower < upper in every coordinate")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def unit(cls, d: int) -> "Box":
        return cls((0.0,) * d, (1.0,) * d)

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.lower) + np.asarray(self.upper))

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(points)
        return np.all((pts >= self.lower) & (pts <= self.upper), axis=1)


@dataclass(frozen=True)
class RngSeed:
    """A ``(master_seed, stream_id)`` pair naming one independent random stream."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise InvalidArgumentError("master_seed must be a 64-bit unsigned integer")
        if int(self.stream_id) < 0:
            raise InvalidArgumentError("stream_id must be non-negative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(int(self.master_seed), spawn_key=(int(self.stream_id),))
        return np.random.Generator(np.random.PCG64(seq))

    def child(self, stream_id: int) -> "RngSeed":
        return RngSeed(self.master_seed, stream_id)


def as_generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, RngSeed):
        return seed.generator()
    raise InvalidArgumentError(f"expected RngSeed or numpy Generator, got {type(seed).__name__}")


class DiscreteDomain:
    """Fixed, ordered candidate set with a shrinking active mask.

    Point indices are stable identities for the lifetime of the domain. The
    active mask only ever shrinks through :meth:`restrict`, and never becomes
    empty.
    """

    def __init__(self, points, box: Box | None = None, active=None):
        pts = np.array(points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise InvalidArgumentError("a domain needs at least one point")
        if box is None:
            box = Box(pts.min(axis=0) - 0.0, np.maximum(pts.max(axis=0), pts.min(axis=0) + 1e-12))
        if pts.shape[1] != box.d:
            raise InvalidArgumentError("point dimension does not match the box")
        if not np.all(box.contains(pts)):
            raise InvalidArgumentError("all candidate points must lie inside the box")
        pts.setflags(write=False)
        self.points = pts
        self.box = box
        if active is None:
            mask = np.ones(pts.shape[0], dtype=bool)
        else:
            mask = np.array(active, dtype=bool)
            if mask.shape != (pts.shape[0],) or not mask.any():
                raise EmptyDomainError("active mask must match the domain and keep one point")
        self._active = mask

    def __len__(self):
        return self.points.shape[0]

    def __repr__(self):
        return f"DiscreteDomain(m={len(self)}, d={self.d}, active={self.n_active})"

    @property
    def d(self) -> int:
        return self.points.shape[1]

    @property
    def active(self) -> np.ndarray:
        view = self._active.view()
        view.setflags(write=False)
        return view

    @property
    def n_active(self) -> int:
        return int(self._active.sum())

    @property
    def active_indices(self) -> np.ndarray:
        return np.flatnonzero(self._active)

    @property
    def active_points(self) -> np.ndarray:
        return self.points[self._active]

    def restrict(self, mask) -> None:
        """Replace the active mask by ``mask``, which must be a non-empty subset."""
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != self._active.shape:
            raise InvalidArgumentError("mask shape does not match the domain")
        if np.any(mask & ~self._active):
            raise InvalidArgumentError("active sets may only shrink")
        if not mask.any():
            raise EmptyDomainError("shrinking would empty the domain")
        self._active = mask.copy()

    def reset(self) -> None:
        self._active = np.ones(len(self), dtype=bool)

    def copy(self) -> "DiscreteDomain":
        return DiscreteDomain(self.points, self.box, self._active.copy())


def discretize(box: Box, m: int, seed) -> DiscreteDomain:
    """Draw ``m`` i.i.d. uniform points in ``box``; all start active."""
    if int(m) < 1:
        raise InvalidArgumentError("discretization size must be positive")
    rng = as_generator(seed)
    pts = rng.uniform(box.lower, box.upper, size=(int(m), box.d))
    return DiscreteDomain(pts, box)


def sample_uniform(dom: DiscreteDomain, n: int, seed) -> np.ndarray:
    """Indices of ``n`` i.i.d. uniform draws (with replacement) from the active set."""
    idx = dom.active_indices
    if idx.size == 0:
        raise EmptyDomainError("no active points to sample from")
    if int(n) < 1:
        raise InvalidArgumentError("sample size must be positive")
    rng = as_generator(seed)
    return idx[rng.integers(0, idx.size, size=int(n))]


def grid_argmax(f, dom: DiscreteDomain) -> tuple[int, float]:
    """Brute-force argmax of ``f`` over the active points.

    ``f`` is either a vectorized callable on an ``(k, d)`` array or an array of
    precomputed values, one per domain point. Ties go to the smallest index.
    """
    idx = dom.active_indices
    if idx.size == 0:
        raise EmptyDomainError("no active points")
    if callable(f):
        vals = np.asarray(f(dom.points[idx]), dtype=np.float64).reshape(-1)
    else:
        vals = np.asarray(f, dtype=np.float64)[idx]
    k = int(np.argmax(vals))
    return int(idx[k]), float(vals[k])
