"""Finite-alphabet probability tensors and information measures.

A :class:`JointDist` is a dense probability tensor whose axes carry
single-letter names (``X``, ``Y``, ``Z``, ``S``, ``U``, plus ``T`` for
strategy letters).  Every measure is in bits and uses ``0 log 0 = 0``.

Axis sets can be given as a string of letters (``"YS"``) or as any
iterable of names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

AXIS_NAMES = ("X", "Y", "Z", "S", "U", "T")

NORM_TOL = 1e-12


class Axis(NamedTuple):
    name: str
    size: int


def _as_names(axes: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(axes, str):
        return tuple(axes)
    return tuple(axes)


def as_prob_vec(p, tol: float = NORM_TOL) -> np.ndarray:
    """Validate a probability vector and return it as a float array."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError(f"probability vector must be 1-D and nonempty, got shape {p.shape}")
    if not np.all(np.isfinite(p)) or np.any(p < 0) or np.any(p > 1):
        raise ValueError("probability vector entries must lie in [0, 1]")
    if abs(p.sum() - 1.0) > tol:
        raise ValueError(f"probability vector sums to {p.sum()!r}, not 1")
    return p


def as_kernel(k, n_cond: int, tol: float = NORM_TOL) -> np.ndarray:
    """Validate a conditional kernel.

    The first ``n_cond`` axes index the conditioning tuple; the remaining
    axes index the target, and every row must sum to one.
    """
    k = np.asarray(k, dtype=float)
    if k.ndim <= n_cond:
        raise ValueError(f"kernel needs more than {n_cond} axes, got shape {k.shape}")
    if not np.all(np.isfinite(k)) or np.any(k < 0):
        raise ValueError("kernel entries must be finite and nonnegative")
    sums = k.reshape(k.shape[:n_cond] + (-1,)).sum(axis=-1)
    bad = np.argwhere(np.abs(sums - 1.0) > tol)
    if bad.size:
        idx = tuple(int(i) for i in bad[0])
        raise ValueError(f"kernel row {idx} sums to {sums[idx]!r}, not 1")
    return k


def entropy_of(p: np.ndarray, axis=None) -> np.ndarray:
    """Entropy in bits of the mass in ``p``, summed over ``axis``.

    Works on batched arrays; with ``axis=None`` everything is summed.
    """
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
    return terms.sum(axis=axis)


def binary_entropy(q: float) -> float:
    """Hb(q) in bits."""
    q = float(q)
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"binary_entropy needs q in [0, 1], got {q}")
    if q == 0.0 or q == 1.0:
        return 0.0
    return float(-q * np.log2(q) - (1 - q) * np.log2(1 - q))


@dataclass(frozen=True, eq=False)
class JointDist:
    """Dense joint PMF over named axes."""

    names: tuple[str, ...]
    mass: np.ndarray

    def __post_init__(self):
        names = _as_names(self.names)
        mass = np.array(self.mass, dtype=float)
        if len(names) != mass.ndim:
            raise ValueError(f"{len(names)} axis names for a {mass.ndim}-D tensor")
        if len(set(names)) != len(names):
            raise ValueError(f"axis names must be unique, got {names}")
        for n in names:
            if n not in AXIS_NAMES:
                raise ValueError(f"unknown axis name {n!r}; expected one of {AXIS_NAMES}")
        if not np.all(np.isfinite(mass)) or np.any(mass < 0):
            raise ValueError("mass must be finite and nonnegative")
        if abs(mass.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"mass sums to {mass.sum()!r}, not 1")
        mass.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "mass", mass)

    @property
    def axes(self) -> tuple[Axis, ...]:
        return tuple(Axis(n, s) for n, s in zip(self.names, self.mass.shape))

    def size(self, name: str) -> int:
        return self.mass.shape[self._index(name)]

    def _index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"axis {name!r} not in distribution axes {self.names}") from None

    def _check(self, axes) -> tuple[str, ...]:
        names = _as_names(axes)
        for n in names:
            self._index(n)
        return names

    def marginal(self, keep) -> "JointDist":
        keep = self._check(keep)
        if not keep:
            raise ValueError("marginalize needs a nonempty set of axes to keep")
        if len(set(keep)) != len(keep):
            raise ValueError(f"repeated axis in {keep}")
        drop = tuple(i for i, n in enumerate(self.names) if n not in keep)
        m = self.mass.sum(axis=drop) if drop else self.mass
        kept = tuple(n for n in self.names if n in keep)
        # reorder to the requested order
        m = np.transpose(m, [kept.index(n) for n in keep])
        return JointDist(keep, m)

    def entropy(self, targets) -> float:
        targets = self._check(targets)
        if not targets:
            return 0.0
        drop = tuple(i for i, n in enumerate(self.names) if n not in targets)
        return float(entropy_of(self.mass.sum(axis=drop) if drop else self.mass))

    def cond_entropy(self, targets, given) -> float:
        targets, given = self._check(targets), self._check(given)
        if set(targets) & set(given):
            raise ValueError(f"targets {targets} and conditioning set {given} overlap")
        return self.entropy(targets + given) - self.entropy(given)

    def mutual_info(self, a, b) -> float:
        a, b = self._check(a), self._check(b)
        if set(a) & set(b):
            raise ValueError(f"axis sets {a} and {b} overlap")
        return self.entropy(a) + self.entropy(b) - self.entropy(a + b)

    def cond_mutual_info(self, a, b, given) -> float:
        a, b, given = self._check(a), self._check(b), self._check(given)
        if set(a) & set(b) or (set(a) | set(b)) & set(given):
            raise ValueError("axis sets overlap")
        return (self.entropy(a + given) + self.entropy(b + given)
                - self.entropy(a + b + given) - self.entropy(given))


def entropy(dist: JointDist, targets) -> float:
    return dist.entropy(targets)


def conditional_entropy(dist: JointDist, targets, given) -> float:
    return dist.cond_entropy(targets, given)


def mutual_info(dist: JointDist, a, b) -> float:
    return dist.mutual_info(a, b)


def marginalize(dist: JointDist, keep) -> JointDist:
    return dist.marginal(keep)
