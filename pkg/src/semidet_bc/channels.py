"""Channel and auxiliary-policy types, plus their JSON spec files.

Semideterministic channel file::

    {"x_size": 2, "y_size": 2, "z_size": 2, "s_size": 2,
     "f": [0, 1, 1, 0],              # row-major over (x, s)
     "w": [[0.8, 0.2], ...],         # one row per (x, s), columns z
     "p_s": [0.5, 0.5]}

General channel file: same sizes, no ``f``, and ``w`` rows indexed by
(x, s) with columns (y, z) in row-major order.

Policy file: ``{"u_size": 5, "p_xu_given_s": [[...], ...]}`` with one row
per s and columns (x, u) row-major.  Selection policies (used by the
coding simulator) give ``p_yu_given_s`` rows over (y, u) and a table
``g`` over (y, u, s) row-major instead.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import SpecParseError
from .prob import NORM_TOL, JointDist

# per-row normalization tolerance for hand-written spec files
FILE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SemiDetChannel:
    """Y = f(x, S) with probability one, Z ~ W(z|x, s), S ~ p_s."""

    f: np.ndarray        # (X, S) ints in range(y_size)
    w: np.ndarray        # (X, S, Z)
    p_s: np.ndarray      # (S,)
    y_size: int

    def __post_init__(self):
        f = np.array(self.f, dtype=np.int64)
        w = np.array(self.w, dtype=float)
        p_s = np.array(self.p_s, dtype=float)
        if f.ndim != 2:
            raise ValueError(f"f must be an (x, s) table, got shape {f.shape}")
        xs, ss = f.shape
        if w.shape[:2] != (xs, ss) or w.ndim != 3:
            raise ValueError(f"w must have shape ({xs}, {ss}, z_size), got {w.shape}")
        if p_s.shape != (ss,):
            raise ValueError(f"p_s must have length {ss}, got shape {p_s.shape}")
        if np.any(f < 0) or np.any(f >= self.y_size):
            raise ValueError(f"f outputs must lie in range({self.y_size})")
        if np.any(w < 0) or np.any(np.abs(w.sum(-1) - 1) > NORM_TOL):
            raise ValueError("rows of w must be probability vectors")
        if np.any(p_s < 0) or abs(p_s.sum() - 1) > NORM_TOL:
            raise ValueError("p_s must be a probability vector")
        for name, arr in (("f", f), ("w", w), ("p_s", p_s)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "y_size", int(self.y_size))

    @property
    def x_size(self):
        return self.f.shape[0]

    @property
    def s_size(self):
        return self.f.shape[1]

    @property
    def z_size(self):
        return self.w.shape[2]

    def kernel(self) -> np.ndarray:
        """Joint output law W(y, z | x, s) as an (X, S, Y, Z) array."""
        onehot = np.zeros((self.x_size, self.s_size, self.y_size))
        np.put_along_axis(onehot, self.f[..., None], 1.0, axis=-1)
        return onehot[..., :, None] * self.w[..., None, :]

    def as_general(self) -> "GeneralChannel":
        return GeneralChannel(self.kernel(), self.p_s)


@dataclass(frozen=True, eq=False)
class GeneralChannel:
    """W(y, z | x, s) stored as an (X, S, Y, Z) array, and the state law."""

    w: np.ndarray
    p_s: np.ndarray

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        p_s = np.array(self.p_s, dtype=float)
        if w.ndim != 4:
            raise ValueError(f"w must have shape (x, s, y, z), got {w.shape}")
        if p_s.shape != (w.shape[1],):
            raise ValueError(f"p_s must have length {w.shape[1]}")
        if np.any(w < 0) or np.any(np.abs(w.sum(axis=(2, 3)) - 1) > NORM_TOL):
            raise ValueError("rows of w must be probability vectors")
        if np.any(p_s < 0) or abs(p_s.sum() - 1) > NORM_TOL:
            raise ValueError("p_s must be a probability vector")
        w.setflags(write=False)
        p_s.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "p_s", p_s)

    @property
    def x_size(self):
        return self.w.shape[0]

    @property
    def s_size(self):
        return self.w.shape[1]

    @property
    def y_size(self):
        return self.w.shape[2]

    @property
    def z_size(self):
        return self.w.shape[3]

    def kernel(self) -> np.ndarray:
        return self.w


@dataclass(frozen=True, eq=False)
class AuxPolicy:
    """P_{XU|S} stored as an (S, X, U) array."""

    p_xu_given_s: np.ndarray

    def __post_init__(self):
        q = np.array(self.p_xu_given_s, dtype=float)
        if q.ndim != 3:
            raise ValueError(f"policy must have shape (s, x, u), got {q.shape}")
        if np.any(q < 0) or np.any(np.abs(q.sum(axis=(1, 2)) - 1) > NORM_TOL):
            raise ValueError("each row of P_{XU|S} must sum to one")
        q.setflags(write=False)
        object.__setattr__(self, "p_xu_given_s", q)

    @property
    def u_size(self):
        return self.p_xu_given_s.shape[2]

    @classmethod
    def from_joint(cls, joint: JointDist) -> "AuxPolicy":
        """Read P_{XU|S} off a joint over (X, S, U, ...)."""
        m = joint.marginal("SXU").mass
        ps = m.sum(axis=(1, 2))
        q = np.divide(m, ps[:, None, None], out=np.zeros_like(m), where=ps[:, None, None] > 0)
        # states of zero probability get an arbitrary valid row
        q[ps == 0] = 1.0 / (m.shape[1] * m.shape[2])
        return cls(q)


@dataclass(frozen=True, eq=False)
class SelectionPolicy:
    """P_{YU|S} as an (S, Y, U) array plus x = g(y, u, s) as a (Y, U, S) table."""

    p_yu_given_s: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        q = np.array(self.p_yu_given_s, dtype=float)
        g = np.array(self.g, dtype=np.int64)
        if q.ndim != 3 or g.shape != (q.shape[1], q.shape[2], q.shape[0]):
            raise ValueError("p_yu_given_s must be (s, y, u) and g must be (y, u, s)")
        if np.any(q < 0) or np.any(np.abs(q.sum(axis=(1, 2)) - 1) > NORM_TOL):
            raise ValueError("each row of P_{YU|S} must sum to one")
        if np.any(g < 0):
            raise ValueError("g must map into the input alphabet")
        q.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "p_yu_given_s", q)
        object.__setattr__(self, "g", g)

    @property
    def u_size(self):
        return self.p_yu_given_s.shape[2]


# ---------------------------------------------------------------------------
# spec files


def _field(d: dict, name: str):
    if name not in d:
        raise SpecParseError(name, "missing required field")
    return d[name]


def _size(d: dict, name: str) -> int:
    v = _field(d, name)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise SpecParseError(name, f"must be a positive integer, got {v!r}")
    return v


def _numbers(d, name, count, row_len=None):
    """Flat or nested numeric list -> array of shape (count,) or (count, row_len)."""
    v = _field(d, name)
    if not isinstance(v, list):
        raise SpecParseError(name, "must be a list")
    if row_len is None:
        if len(v) != count:
            raise SpecParseError(name, f"expected {count} entries, got {len(v)}")
        out = []
        for i, x in enumerate(v):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise SpecParseError(name, f"not a number: {x!r}", i)
            out.append(x)
        return np.array(out, dtype=float)
    if len(v) != count:
        raise SpecParseError(name, f"expected {count} rows, got {len(v)}")
    rows = []
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != row_len:
            raise SpecParseError(name, f"row must be a list of {row_len} numbers", i)
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise SpecParseError(name, f"not a number: {x!r}", f"{i}][{j}")
            if x < 0:
                raise SpecParseError(name, f"negative probability {x!r}", f"{i}][{j}")
        if abs(sum(row) - 1.0) > FILE_TOL:
            raise SpecParseError(name, f"row sums to {sum(row)!r}, not 1", i)
        rows.append(np.array(row, dtype=float) / sum(row))
    return np.array(rows)


def _prob_vec(d, name, count):
    p = _numbers(d, name, count)
    for i, x in enumerate(p):
        if x < 0:
            raise SpecParseError(name, f"negative probability {x!r}", i)
    if abs(p.sum() - 1.0) > FILE_TOL:
        raise SpecParseError(name, f"sums to {p.sum()!r}, not 1")
    return p / p.sum()


def _load(source) -> dict:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError("<file>", f"invalid JSON: {e}") from None
    if not isinstance(d, dict):
        raise SpecParseError("<file>", "top level must be an object")
    return d


def parse_semidet(source) -> SemiDetChannel:
    d = _load(source)
    xs, ys, zs, ss = (_size(d, k) for k in ("x_size", "y_size", "z_size", "s_size"))
    f_raw = _field(d, "f")
    if not isinstance(f_raw, list) or len(f_raw) != xs * ss:
        raise SpecParseError("f", f"expected {xs * ss} entries (row-major over (x, s))")
    for i, v in enumerate(f_raw):
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < ys:
            raise SpecParseError("f", f"must be an integer in range({ys}), got {v!r}", i)
    w = _numbers(d, "w", xs * ss, zs)
    p_s = _prob_vec(d, "p_s", ss)
    return SemiDetChannel(np.array(f_raw).reshape(xs, ss), w.reshape(xs, ss, zs), p_s, ys)


def parse_general(source) -> GeneralChannel:
    d = _load(source)
    if "f" in d:
        return parse_semidet(d).as_general()
    xs, ys, zs, ss = (_size(d, k) for k in ("x_size", "y_size", "z_size", "s_size"))
    w = _numbers(d, "w", xs * ss, ys * zs)
    p_s = _prob_vec(d, "p_s", ss)
    return GeneralChannel(w.reshape(xs, ss, ys, zs), p_s)


def parse_policy(source, x_size: int, s_size: int):
    """AuxPolicy or SelectionPolicy, depending on the fields present."""
    d = _load(source)
    us = _size(d, "u_size")
    if "p_xu_given_s" in d:
        q = _numbers(d, "p_xu_given_s", s_size, x_size * us)
        return AuxPolicy(q.reshape(s_size, x_size, us))
    if "p_yu_given_s" in d:
        ys = _size(d, "y_size")
        q = _numbers(d, "p_yu_given_s", s_size, ys * us)
        g_raw = _field(d, "g")
        if not isinstance(g_raw, list) or len(g_raw) != ys * us * s_size:
            raise SpecParseError("g", f"expected {ys * us * s_size} entries (row-major over (y, u, s))")
        for i, v in enumerate(g_raw):
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < x_size:
                raise SpecParseError("g", f"must be an integer in range({x_size}), got {v!r}", i)
        return SelectionPolicy(q.reshape(s_size, ys, us), np.array(g_raw).reshape(ys, us, s_size))
    raise SpecParseError("p_xu_given_s", "missing required field (or give p_yu_given_s and g)")


def semidet_to_dict(ch: SemiDetChannel) -> dict:
    return {
        "x_size": ch.x_size, "y_size": ch.y_size, "z_size": ch.z_size, "s_size": ch.s_size,
        "f": ch.f.reshape(-1).tolist(),
        "w": ch.w.reshape(-1, ch.z_size).tolist(),
        "p_s": ch.p_s.tolist(),
    }


def policy_to_dict(pol: AuxPolicy) -> dict:
    q = pol.p_xu_given_s
    return {"u_size": pol.u_size, "p_xu_given_s": q.reshape(q.shape[0], -1).tolist()}
