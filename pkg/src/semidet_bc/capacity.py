"""Rate-bound triples for auxiliary policies and the searched inner region.

For a policy P_{XU|S} the joint law is
P_S(s) P_{XU|S}(x,u|s) 1{y = f(x,s)} W(z|x,s), and each policy contributes
the polytope

    R_y <= H(Y|S)
    R_z <= I(U;Z) - I(U;S)
    R_y + R_z <= H(Y|S) + I(U;Z) - I(U;S,Y)

The capacity region is the convex hull of the union of these polytopes.
:func:`bound_triple` evaluates one policy through :class:`JointDist`;
:func:`policy_triples` is a batched evaluator used by the search, and the
two are checked against each other in the tests.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channels import AuxPolicy, SemiDetChannel
from .errors import GuardError
from .geometry import BoundTriple, ConvexRegion2D, hull_of_triples, triple_vertices
from .prob import JointDist, entropy_of

MAX_AUX_SIZE = 32
# fixed member block; keeps float results independent of worker count
BLOCK = 64
IMPROVE_TOL = 1e-12
# softmax weights never reach zero; entries below this are tried as exact zeros
PRUNE_TOL = 1e-6


@dataclass(frozen=True)
class SearchConfig:
    weight_sweep_count: int = 64
    random_restarts: int = 50
    local_steps: int = 30
    seed: int = 0
    tolerance: float = 1e-9
    deterministic_selection: bool = False

    def __post_init__(self):
        for name in ("weight_sweep_count", "random_restarts", "local_steps"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")


def joint_from_kernel(kernel: np.ndarray, p_s: np.ndarray, q: np.ndarray) -> JointDist:
    """Joint over (X, Y, Z, S, U) from W(y,z|x,s), P_S and P_{XU|S}."""
    kernel = np.asarray(kernel, dtype=float)
    q = np.asarray(q, dtype=float)
    xs, ss = kernel.shape[:2]
    if q.shape[:2] != (ss, xs):
        raise ValueError(f"policy shape {q.shape} does not match |S|={ss}, |X|={xs}")
    mass = np.einsum("s,sxu,xsyz->xyzsu", p_s, q, kernel)
    return JointDist("XYZSU", mass)


def joint_from_policy(ch: SemiDetChannel, pol: AuxPolicy) -> JointDist:
    return joint_from_kernel(ch.kernel(), ch.p_s, pol.p_xu_given_s)


def triple_from_joint(joint: JointDist) -> BoundTriple:
    a = joint.cond_entropy("Y", "S")
    b = joint.mutual_info("U", "Z") - joint.mutual_info("U", "S")
    c = a + joint.mutual_info("U", "Z") - joint.mutual_info("U", "SY")
    return BoundTriple(a, b, c)


def bound_triple(ch: SemiDetChannel, pol: AuxPolicy) -> BoundTriple:
    return triple_from_joint(joint_from_policy(ch, pol))


def policy_triples(kernel, p_s, q, outer: bool = False) -> np.ndarray:
    """Triples for a batch of policies ``q`` of shape (B, S, X, U).

    With ``outer=True`` the R_y cap is I(X;Y|S) instead of H(Y|S).
    Returns an array of shape (B, 3).
    """
    kernel = np.asarray(kernel, dtype=float)
    ky = kernel.sum(axis=3)                     # (X, S, Y)
    kz = kernel.sum(axis=2)                     # (X, S, Z)
    p_sxu = p_s[None, :, None, None] * q        # (B, S, X, U)
    p_sx = p_sxu.sum(axis=3)
    p_sy = np.einsum("bsx,xsy->bsy", p_sx, ky)
    p_uz = np.einsum("bsxu,xsz->buz", p_sxu, kz)
    p_syu = np.einsum("bsxu,xsy->bsyu", p_sxu, ky)
    p_us = p_sxu.sum(axis=2)
    B = q.shape[0]
    h_s = entropy_of(p_s)
    h_ys = entropy_of(p_sy.reshape(B, -1), axis=1)
    h_z = entropy_of(p_uz.sum(axis=1), axis=1)
    h_uz = entropy_of(p_uz.reshape(B, -1), axis=1)
    h_us = entropy_of(p_us.reshape(B, -1), axis=1)
    h_syu = entropy_of(p_syu.reshape(B, -1), axis=1)
    a = h_ys - h_s
    b = h_z - h_uz - h_s + h_us
    c = a + h_z - h_uz - h_ys + h_syu
    if outer:
        h_row = entropy_of(ky, axis=2)          # H(Y | X=x, S=s)
        # rows summed from W carry rounding; point masses must give exactly 0
        h_row = np.where(ky.max(axis=2) >= 1 - 1e-12, 0.0, h_row)
        h_y_xs = np.einsum("bsx,xs->b", p_sx, h_row)
        a = a - h_y_xs
        c = c - h_y_xs
    return np.stack([a, b, c], axis=1)


# ---------------------------------------------------------------------------
# search


def _directions(count: int) -> np.ndarray:
    if count == 1:
        return np.array([[np.sqrt(0.5), np.sqrt(0.5)]])
    th = np.linspace(0.0, np.pi / 2, count)
    d = np.stack([np.cos(th), np.sin(th)], axis=1)
    d[0] = (1.0, 0.0)
    d[-1] = (0.0, 1.0)
    return d


def _softmax(theta: np.ndarray) -> np.ndarray:
    z = theta - theta.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


class _Problem:
    """Policy parametrization and objective shared by all search members."""

    def __init__(self, kernel, p_s, u_size, outer, f=None):
        self.kernel = np.asarray(kernel, dtype=float)
        self.p_s = np.asarray(p_s, dtype=float)
        self.xs, self.ss, self.ys = self.kernel.shape[:3]
        self.us = u_size
        self.outer = outer
        self.f = f
        self.selection = f is not None
        if self.selection:
            # allowed[y, s, x]: f(x, s) == y
            allowed = np.zeros((self.ys, self.ss, self.xs), dtype=bool)
            for x in range(self.xs):
                for s in range(self.ss):
                    allowed[f[x, s], s, x] = True
            self.allowed = allowed
            self.width = self.ys * self.us
        else:
            self.width = self.xs * self.us

    def init(self, rng: np.random.Generator):
        scale = rng.uniform(0.5, 4.0)
        theta = rng.normal(0.0, scale, size=(self.ss, self.width))
        if not self.selection:
            return theta, None
        g = np.empty((self.ys, self.us, self.ss), dtype=np.int64)
        for y in range(self.ys):
            for s in range(self.ss):
                opts = np.flatnonzero(self.allowed[y, s])
                if opts.size == 0:
                    opts = np.arange(self.xs)
                g[y, :, s] = rng.choice(opts, size=self.us)
        return theta, g

    def policies(self, theta, g) -> tuple[np.ndarray, np.ndarray]:
        """Batch of P_{XU|S} (B, S, X, U) and a validity mask."""
        B = theta.shape[0]
        p = _softmax(theta)
        if not self.selection:
            return p.reshape(B, self.ss, self.xs, self.us), np.ones(B, dtype=bool)
        p_yu = p.reshape(B, self.ss, self.ys, self.us)
        # x = g(y,u,s) must satisfy f(x,s) = y, other (y,u) pairs carry no mass
        gx = np.transpose(g, (0, 3, 1, 2))      # (B, S, Y, U)
        s_idx = np.arange(self.ss)[None, :, None, None]
        y_idx = np.arange(self.ys)[None, None, :, None]
        ok = self.allowed[y_idx, s_idx, gx]
        mass = np.where(ok, p_yu, 0.0)
        norm = mass.sum(axis=(2, 3))
        valid = np.all(norm > 0, axis=1)
        mass = mass / np.where(norm > 0, norm, 1.0)[:, :, None, None]
        q = np.zeros((B, self.ss, self.xs, self.us))
        bb, ss_, yy, uu = np.indices(gx.shape)
        np.add.at(q, (bb, ss_, gx, uu), mass)
        return q, valid

    def triples(self, theta, g) -> np.ndarray:
        q, valid = self.policies(theta, g)
        t = policy_triples(self.kernel, self.p_s, q, outer=self.outer)
        t[~valid] = (0.0, 0.0, 0.0)
        return t


def _support_rows(t, w):
    verts = triple_vertices(t[:, 0], t[:, 1], t[:, 2])      # (B, 5, 2)
    return (verts[..., 0] * w[:, None, 0] + verts[..., 1] * w[:, None, 1]).max(axis=1)


def _refine_block(prob: _Problem, theta, g, w, cfg: SearchConfig):
    """Coordinate-wise derivative-free ascent of the support value."""
    B = theta.shape[0]
    cur = _support_rows(prob.triples(theta, g), w)
    step = np.ones(B)
    dims = theta.shape[1] * theta.shape[2]
    flat = theta.reshape(B, dims)
    for _ in range(cfg.local_steps):
        improved = np.zeros(B, dtype=bool)
        for d in range(dims):
            for sign in (1.0, -1.0):
                cand = flat.copy()
                cand[:, d] += sign * step
                val = _support_rows(prob.triples(cand.reshape(theta.shape), g), w)
                better = val > cur + max(IMPROVE_TOL, cfg.tolerance * 1e-3)
                if better.any():
                    flat[better] = cand[better]
                    cur[better] = val[better]
                    improved |= better
        if g is not None:
            for idx in np.ndindex(*g.shape[1:]):
                for x in range(prob.xs):
                    cand_g = g.copy()
                    cand_g[(slice(None),) + idx] = x
                    val = _support_rows(prob.triples(flat.reshape(theta.shape), cand_g), w)
                    better = val > cur + max(IMPROVE_TOL, cfg.tolerance * 1e-3)
                    if better.any():
                        g[better] = cand_g[better]
                        cur[better] = val[better]
                        improved |= better
        step = np.where(improved, step, step * 0.5)
        if np.all(step < 1e-4):
            break
    theta = flat.reshape(theta.shape)
    return theta, g, prob.triples(theta, g)


@dataclass
class SearchResult:
    region: ConvexRegion2D
    triples: np.ndarray          # (members, 3), member order (sweep, restart)
    policies: np.ndarray         # (members, S, X, U)
    directions: np.ndarray       # (sweeps, 2)


def search_region(kernel, p_s, cfg: SearchConfig, outer: bool = False, f=None,
                  workers: int = 1) -> SearchResult:
    """Weighted-sum sweep with seeded random restarts.

    Member (i, k) is seeded from ``(cfg.seed, i, k)`` alone, so adding
    restarts only adds members and never changes existing ones.
    """
    kernel = np.asarray(kernel, dtype=float)
    xs, ss = kernel.shape[:2]
    u_size = xs * ss + 1
    if u_size > MAX_AUX_SIZE:
        raise GuardError(f"|X|*|S|+1 = {u_size} exceeds the limit of {MAX_AUX_SIZE}")
    if cfg.deterministic_selection and f is None:
        raise ValueError("deterministic selection needs a semideterministic channel")
    prob = _Problem(kernel, p_s, u_size, outer, f if cfg.deterministic_selection else None)
    dirs = _directions(cfg.weight_sweep_count)
    members = [(i, k) for i in range(len(dirs)) for k in range(cfg.random_restarts)]
    inits = []
    for i, k in members:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, i, k]))
        inits.append(prob.init(rng))
    blocks = [range(lo, min(lo + BLOCK, len(members))) for lo in range(0, len(members), BLOCK)]

    def run(block):
        theta = np.stack([inits[m][0] for m in block])
        g = np.stack([inits[m][1] for m in block]) if prob.selection else None
        w = dirs[[members[m][0] for m in block]]
        theta, g, t = _refine_block(prob, theta, g, w, cfg)
        q, _ = prob.policies(theta, g)
        q_p = np.where(q < PRUNE_TOL, 0.0, q)
        q_p /= q_p.sum(axis=(2, 3), keepdims=True)
        t_p = policy_triples(prob.kernel, prob.p_s, q_p, outer=prob.outer)
        take = _support_rows(t_p, w) > _support_rows(t, w)
        t[take], q[take] = t_p[take], q_p[take]
        return t, q

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            out = list(ex.map(run, blocks))
    else:
        out = [run(b) for b in blocks]
    triples = np.concatenate([o[0] for o in out])
    policies = np.concatenate([o[1] for o in out])
    return SearchResult(hull_of_triples(triples), triples, policies, dirs)


def inner_region(ch: SemiDetChannel, cfg: SearchConfig = SearchConfig(), workers: int = 1) -> ConvexRegion2D:
    """Searched estimate of the capacity region (an inner bound by construction)."""
    return search_region(ch.kernel(), ch.p_s, cfg, outer=False, f=ch.f, workers=workers).region
