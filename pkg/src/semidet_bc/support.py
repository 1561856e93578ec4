"""Shrinking the auxiliary alphabet while keeping the rate bounds.

Each value u of the auxiliary carries a conditional law q_u on (X, S)
(the outputs follow from the channel).  The three rate bounds depend on
the mixture only through the averages of

    h0(u) = H(S|U=u) - H(Z|U=u)
    h1(u) = H(Y,S|U=u) - H(Z|U=u)
    h_xs(u) = P(x, s | u)   for all (x, s) but the last

so the target is a point t in R^k, k = |X||S| + 1, written as a convex
combination of the atom images g(q_u).

Two stages:

1. Linear: while the atom matrix (images plus a row of ones) has a
   kernel vector, slide the weights along it until one hits zero.  This
   ends with at most k + 1 affinely independent atoms.
2. If k + 1 atoms remain, t is interior to their simplex.  Walking the
   segment q(tau) = (1 - tau) q_1 + tau q_2, the barycentric coefficients
   of t with respect to g(q(tau)) and the atoms other than 1 start all
   positive and end with one negative; at the crossing one coefficient is
   zero and t is a combination of k atoms (one of them new).
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .errors import NumericalError
from .prob import JointDist, entropy_of

DET_TOL = 1e-12
STEP_TOL = 1e-10
RANK_TOL = 1e-11


class _Atoms:
    """Conditional laws q_u on (X, S) pushed through a fixed output kernel."""

    def __init__(self, joint: JointDist):
        m = joint.marginal("XYZSU").mass
        p_xys = m.sum(axis=(2, 4))                    # (X, Y, S)
        p_xs = p_xys.sum(axis=1)
        y_given = np.divide(p_xys, p_xs[:, None, :], out=np.zeros_like(p_xys),
                            where=p_xs[:, None, :] > 0)
        if np.any((p_xs > 0) & (y_given.max(axis=1) < 1 - DET_TOL)):
            raise ValueError("Y is not a deterministic function of (X, S) under this joint")
        p_xyzs = m.sum(axis=4)
        kern = np.divide(p_xyzs, p_xs[:, None, None, :], out=np.zeros_like(p_xyzs),
                         where=p_xs[:, None, None, :] > 0)   # P(y, z | x, s)
        # outputs must be independent of U given (X, S)
        p_u = m.sum(axis=(0, 1, 2, 3))
        p_xsu = m.sum(axis=(1, 2))
        expected = kern[..., None] * p_xsu[:, None, None, :, :]
        if np.max(np.abs(expected - m)) > 1e-9:
            raise ValueError("outputs depend on U given (X, S); joint is not of the channel form")
        self.kern = kern
        self.shape = m.shape[:4]
        self.support = np.flatnonzero(p_u > 0)
        self.weights = p_u[self.support]
        self.q = np.transpose(p_xsu[:, :, self.support] / self.weights, (2, 0, 1))  # (m, X, S)

    def full(self, q):
        """Conditional law on (X, Y, Z, S) for q on (X, S)."""
        return self.kern * q[:, None, None, :]

    def image(self, q) -> np.ndarray:
        c = self.full(q)
        h_z = entropy_of(c.sum(axis=(0, 1, 3)))
        h_s = entropy_of(c.sum(axis=(0, 1, 2)))
        h_ys = entropy_of(c.sum(axis=(0, 2)))
        flat = q.reshape(-1)[:-1]
        return np.concatenate([[h_s - h_z, h_ys - h_z], flat])


def _linear_reduce(weights, images):
    """Carathéodory steps on the constraint matrix [images; ones]."""
    weights = weights.copy()
    keep = np.arange(len(weights))
    while True:
        a = np.vstack([images[keep].T, np.ones(len(keep))])
        u, sv, vt = np.linalg.svd(a)
        rank = int(np.sum(sv > RANK_TOL * max(sv[0], 1.0)))
        if rank >= len(keep):
            return weights[keep], keep
        v = vt[-1]
        if not np.any(v < 0):
            v = -v
        neg = v < 0
        ratios = weights[keep][neg] / -v[neg]
        step = ratios.min()
        before = a @ weights[keep]
        new = weights[keep] + step * v
        new[np.flatnonzero(neg)[np.argmin(ratios)]] = 0.0
        new = np.maximum(new, 0.0)
        drift = np.max(np.abs(a @ new - before))
        if drift > STEP_TOL:
            raise NumericalError(f"support-reduction step moved a constraint by {drift:.3g}")
        weights[keep] = new
        keep = keep[new > 0]


def _fenchel_step(atoms: _Atoms, q, weights, images):
    """Replace k + 1 interior atoms by k atoms, one of them on a segment."""
    t = weights @ images
    n = len(weights)
    last_err = None
    for i in range(n):
        for j in range(i + 1, n):
            rest = [r for r in range(n) if r != i]
            mat = (t[None, :] - images[rest]).T         # columns t - v_r

            def coeffs(tau):
                qt = (1 - tau) * q[i] + tau * q[j]
                return np.linalg.solve(mat, atoms.image(qt) - t)

            try:
                m0, m1 = coeffs(0.0).min(), coeffs(1.0).min()
                if not (m0 > 0 > m1):
                    continue
                tau = brentq(lambda s: coeffs(s).min(), 0.0, 1.0, xtol=1e-16, rtol=1e-15, maxiter=200)
            except (np.linalg.LinAlgError, ValueError) as e:
                last_err = e
                continue
            mu = np.maximum(coeffs(tau), 0.0)
            mu[np.argmin(coeffs(tau))] = 0.0
            total = 1.0 + mu.sum()
            new_q = [(1 - tau) * q[i] + tau * q[j]]
            new_w = [1.0 / total]
            for r, m in zip(rest, mu):
                if m > 0:
                    new_q.append(q[r])
                    new_w.append(m / total)
            return np.array(new_w), np.array(new_q)
    raise NumericalError(f"no segment crossing found while reducing support ({last_err})")


def reduce_support(joint: JointDist) -> JointDist:
    """Same-form joint whose auxiliary support is at most |X||S| + 1.

    The (X, Y, Z, S) marginal, H(Y|S), I(U;Z) - I(U;S) and
    H(Y|S) + I(U;Z) - I(U;S,Y) are preserved.
    """
    atoms = _Atoms(joint)
    xs, _, _, ss = atoms.shape
    k = xs * ss + 1
    q, w = atoms.q, atoms.weights
    if len(w) > k:
        images = np.array([atoms.image(qu) for qu in q])
        w, keep = _linear_reduce(w, images)
        q = q[keep]
        if len(w) > k:
            w, q = _fenchel_step(atoms, q, w, images[keep])
    w = w / w.sum()
    mass = np.stack([wu * atoms.full(qu) for wu, qu in zip(w, q)], axis=-1)
    mass /= mass.sum()
    return JointDist("XYZSU", mass)
