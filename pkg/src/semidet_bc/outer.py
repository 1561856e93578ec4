"""Outer bounds for general state-dependent broadcast channels.

``outer_triple`` evaluates the noncausal outer bound (R_y capped by
I(X;Y|S) instead of H(Y|S)); ``causal_outer_region`` evaluates the
strategy-letter bound for causal state information, where T ranges over
all maps from states to inputs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .capacity import SearchConfig, joint_from_kernel, search_region
from .channels import AuxPolicy, GeneralChannel, SemiDetChannel
from .errors import GuardError
from .geometry import BoundTriple, ConvexRegion2D, hull_of_triples
from .prob import JointDist, entropy_of

MAX_STRATEGIES = 256
ESTIMATE_MARKER = "lower-bound-of-outer-bound"


def _general(ch) -> GeneralChannel:
    return ch.as_general() if isinstance(ch, SemiDetChannel) else ch


def outer_joint(ch: GeneralChannel, pol: AuxPolicy) -> JointDist:
    ch = _general(ch)
    return joint_from_kernel(ch.w, ch.p_s, pol.p_xu_given_s)


def outer_triple(ch: GeneralChannel, pol: AuxPolicy) -> BoundTriple:
    j = outer_joint(ch, pol)
    a = j.cond_mutual_info("X", "Y", "S")
    b = j.mutual_info("U", "Z") - j.mutual_info("U", "S")
    c = a + j.mutual_info("U", "Z") - j.mutual_info("U", "SY")
    return BoundTriple(a, b, c)


def outer_region_estimate(ch: GeneralChannel, cfg: SearchConfig = SearchConfig(),
                          workers: int = 1) -> ConvexRegion2D:
    """Searched hull of the outer-bound polytopes.

    The search under-covers the true maximum, so the result is tagged
    ``meta["estimate"] == "lower-bound-of-outer-bound"``.
    """
    ch = _general(ch)
    if cfg.deterministic_selection:
        raise ValueError("deterministic selection does not apply to the outer bound")
    res = search_region(ch.w, ch.p_s, cfg, outer=True, workers=workers)
    return ConvexRegion2D(res.region.vertices, {"estimate": ESTIMATE_MARKER})


# ---------------------------------------------------------------------------
# causal strategy letters


class StrategyLetter(NamedTuple):
    index: int
    table: tuple[int, ...]   # table[s] = x


def strategy_letter(index: int, x_size: int, s_size: int) -> StrategyLetter:
    """Mixed-radix decoding, least significant digit for s = 0."""
    if not 0 <= index < x_size ** s_size:
        raise ValueError(f"strategy index {index} out of range")
    table, r = [], index
    for _ in range(s_size):
        r, d = divmod(r, x_size)
        table.append(d)
    return StrategyLetter(index, tuple(table))


def strategy_letters(x_size: int, s_size: int) -> list[StrategyLetter]:
    count = x_size ** s_size
    if count > MAX_STRATEGIES:
        raise GuardError(f"|X|^|S| = {count} strategies exceeds the limit of {MAX_STRATEGIES}")
    return [strategy_letter(i, x_size, s_size) for i in range(count)]


def strategy_kernel(ch: GeneralChannel) -> np.ndarray:
    """P(y, z | t) = sum_s P_S(s) W(y, z | t(s), s), shape (T, Y, Z)."""
    ch = _general(ch)
    letters = strategy_letters(ch.x_size, ch.s_size)
    out = np.zeros((len(letters), ch.y_size, ch.z_size))
    for t in letters:
        for s, x in enumerate(t.table):
            out[t.index] += ch.p_s[s] * ch.w[x, s]
    return out


def strategy_joint(ch: GeneralChannel, p_t) -> JointDist:
    """Joint over (T, Y, Z) for a law on strategy letters."""
    k = strategy_kernel(ch)
    return JointDist("TYZ", np.asarray(p_t, dtype=float)[:, None, None] * k)


def _rates(p_t, k_y, k_z):
    """(I(T;Y), I(T;Z)) for a batch of P_T, shape (B, T) -> (B, 2)."""
    out = []
    for k in (k_y, k_z):
        joint = p_t[:, :, None] * k[None]
        h_out = entropy_of(joint.sum(axis=1), axis=1)
        h_cond = p_t @ entropy_of(k, axis=1)
        out.append(h_out - h_cond)
    return np.stack(out, axis=1)


def _divergences(p_t, k):
    """D(P(.|t) || P) in bits for each t, batched over rows of p_t."""
    marg = p_t @ k                                      # (B, O)
    # outputs with zero marginal only come from letters of zero mass; skip them
    live = (k[None] > 0) & (marg[:, None, :] > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(live, k[None] / np.where(live, marg[:, None, :], 1.0), 1.0)
        terms = np.where(live, k[None] * np.log2(ratio), 0.0)
    return terms.sum(axis=2)


def _seed_laws(count: int, rng: np.random.Generator, restarts: int) -> np.ndarray:
    laws = list(np.eye(count))
    if count <= 8:
        for mask in range(1, 2 ** count):
            members = [i for i in range(count) if mask >> i & 1]
            if len(members) > 1:
                v = np.zeros(count)
                v[members] = 1.0 / len(members)
                laws.append(v)
    laws.extend(rng.dirichlet(np.ones(count), size=restarts))
    return np.array(laws)


def causal_outer_region(ch: GeneralChannel, cfg: SearchConfig = SearchConfig()) -> ConvexRegion2D:
    """Hull of rectangles [0, I(T;Y)] x [0, I(T;Z)] over laws on strategy letters.

    For each sweep direction the weighted sum is concave in P_T, so a
    multiplicative (Blahut-Arimoto style) ascent started from a set of
    seeded laws reaches its maximum.
    """
    ch = _general(ch)
    k = strategy_kernel(ch)
    k_y, k_z = k.sum(axis=2), k.sum(axis=1)
    count = k.shape[0]
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 2]))
    seeds = _seed_laws(count, rng, cfg.random_restarts)
    found = [_rates(seeds, k_y, k_z)]
    n = cfg.weight_sweep_count
    thetas = np.linspace(0.0, np.pi / 2, n) if n > 1 else np.array([np.pi / 4])
    iters = max(50, 20 * cfg.local_steps)
    for th in thetas:
        w_y, w_z = np.cos(th), np.sin(th)
        p = seeds.copy()
        for _ in range(iters):
            grad = w_y * _divergences(p, k_y) + w_z * _divergences(p, k_z)
            # multiplicative update keeps p on the simplex; zeros stay zero
            p = p * np.exp2(grad - grad.max(axis=1, keepdims=True))
            p /= p.sum(axis=1, keepdims=True)
        found.append(_rates(p, k_y, k_z))
    r = np.maximum(np.concatenate(found), 0.0)
    # rectangle = triple with an inactive sum cap
    return hull_of_triples(np.column_stack([r[:, 0], r[:, 1], r[:, 0] + r[:, 1]]))
