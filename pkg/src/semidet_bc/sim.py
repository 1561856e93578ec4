"""Monte Carlo simulation of the binned random-coding scheme.

The scheme uses a selection policy (P_{YU|S}, g): y-tuples are drawn IID
from P_Y into 2^{nR_y} bins of 2^{nR~_y}, u-tuples IID from P_U into
2^{nR_z} bins of 2^{nR~_z}.  The encoder looks (lexicographically in
(l_y, l_z)) for a pair jointly typical with the state sequence and sends
x = g(y, u, s) componentwise, or the all-zero word if none is found.
The deterministic receiver looks its sequence up in the y-bins; the
other receiver looks for u-tuples jointly typical with z at slack 2 eps.

Typicality is the relative notion |freq(a) - P(a)| <= eps P(a), which
also forbids symbols of probability zero.

Each trial draws its codebook, messages, state sequence and channel
noise from a stream derived from ``(seed, trial index)``, so the rates
estimate the average over the random-coding ensemble.  A fixed codebook
shared by all trials is available for inspecting a single code.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .channels import AuxPolicy, SelectionPolicy, SemiDetChannel
from .errors import GuardError
from .prob import JointDist

MAX_TUPLES = 2 ** 22
MAX_KEY_BITS = 62
# elements per vectorized work array
WORK_LIMIT = 2 ** 22
FREQ_SLACK = 1e-9


@dataclass(frozen=True)
class SimConfig:
    n: int
    rate_y: float
    rate_z: float
    cover_rate_y: float
    cover_rate_z: float
    epsilon: float
    trials: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise GuardError(f"block length n must be >= 1, got {self.n}")
        for name in ("rate_y", "rate_z", "cover_rate_y", "cover_rate_z"):
            if getattr(self, name) < 0:
                raise GuardError(f"{name} must be nonnegative")
        if not self.epsilon > 0:
            raise GuardError("epsilon must be positive")
        if self.trials < 0:
            raise GuardError("trials must be nonnegative")
        for label, r, rc in (("y", self.rate_y, self.cover_rate_y), ("u", self.rate_z, self.cover_rate_z)):
            total = _count(self.n, r) * _count(self.n, rc)
            if total > MAX_TUPLES:
                raise GuardError(
                    f"{label}-codebook would hold {total} tuples, above the 2^22 limit; "
                    f"lower n*(rate + cover rate) to at most 22 bits")

    @property
    def bins_y(self):
        return _count(self.n, self.rate_y)

    @property
    def per_bin_y(self):
        return _count(self.n, self.cover_rate_y)

    @property
    def bins_z(self):
        return _count(self.n, self.rate_z)

    @property
    def per_bin_z(self):
        return _count(self.n, self.cover_rate_z)


def _count(n: int, rate: float) -> int:
    # integer part of 2^{nR}; the factor absorbs products like 10 * 0.3 = 2.9999...
    return int(math.floor(2.0 ** (n * rate) * (1 + 1e-12)))


# ---------------------------------------------------------------------------
# selection policies


def selection_joint(ch: SemiDetChannel, sel: SelectionPolicy) -> JointDist:
    """Joint over (X, Y, Z, S, U) for x = g(y, u, s)."""
    q = sel.p_yu_given_s
    ss, ys, us = q.shape
    if (ss, ys) != (ch.s_size, ch.y_size):
        raise ValueError("selection policy does not match the channel alphabets")
    if np.any(sel.g >= ch.x_size):
        raise ValueError("g maps outside the input alphabet")
    mass = np.zeros((ch.x_size, ys, ch.z_size, ss, us))
    for y in range(ys):
        for u in range(us):
            for s in range(ss):
                if q[s, y, u] == 0:
                    continue
                x = sel.g[y, u, s]
                if ch.f[x, s] != y:
                    raise ValueError(f"g({y},{u},{s}) = {x} but f({x},{s}) = {ch.f[x, s]} != {y}")
                mass[x, y, :, s, u] += ch.p_s[s] * q[s, y, u] * ch.w[x, s]
    return JointDist("XYZSU", mass)


def selection_from_policy(ch: SemiDetChannel, pol: AuxPolicy, tol: float = 1e-12) -> SelectionPolicy:
    """Rewrite P_{XU|S} as (P_{YU|S}, g) when X is a function of (Y, U, S)."""
    q = pol.p_xu_given_s
    ss, xs, us = q.shape
    p_yu = np.zeros((ss, ch.y_size, us))
    g = np.zeros((ch.y_size, us, ss), dtype=np.int64)
    seen = np.zeros((ch.y_size, us, ss), dtype=bool)
    for s in range(ss):
        for x in range(xs):
            y = ch.f[x, s]
            for u in range(us):
                if q[s, x, u] <= tol:
                    continue
                if seen[y, u, s] and g[y, u, s] != x:
                    raise ValueError(f"X is not a function of (Y, U, S) at (y={y}, u={u}, s={s})")
                seen[y, u, s] = True
                g[y, u, s] = x
                p_yu[s, y, u] += q[s, x, u]
    p_yu /= p_yu.sum(axis=(1, 2), keepdims=True)
    return SelectionPolicy(p_yu, g)


def scheme_thresholds(joint: JointDist) -> dict:
    """Covering lower bounds and decoding upper bounds of the scheme."""
    return {
        "cover_y_min": joint.mutual_info("Y", "S"),
        "cover_z_min": joint.mutual_info("U", "S"),
        "cover_sum_min": joint.entropy("Y") + joint.entropy("U") + joint.entropy("S") - joint.entropy("YUS"),
        "det_max": joint.entropy("Y"),
        "nondet_max": joint.mutual_info("U", "Z"),
    }


def fractional_rates(thresholds: dict, frac: float = 0.7, z_share: float = 0.0):
    """(R_y, R_z, R~_y, R~_z) at a fraction of the scheme thresholds.

    Covering rates sit at threshold / frac (above the lower bounds) and the
    decoding sums at frac * (upper bound).  ``z_share`` is the part of the
    u-side budget frac * I(U;Z) given to R_z; the rest goes to R~_z.
    """
    th = thresholds
    if not 0 < frac <= 1 or not 0 <= z_share <= 1:
        raise ValueError("need 0 < frac <= 1 and 0 <= z_share <= 1")
    cover_sum = max(th["cover_sum_min"], th["cover_y_min"] + th["cover_z_min"]) / frac
    z_budget = frac * th["nondet_max"]
    rz = z_share * z_budget
    crz = max(z_budget - rz, th["cover_z_min"] / frac)
    cry = max(cover_sum - crz, th["cover_y_min"] / frac)
    ry = frac * th["det_max"] - cry
    if ry < 0 or z_budget - crz < -1e-12:
        raise ValueError("thresholds leave no room for positive rates at this fraction")
    return ry, rz, cry, crz


# ---------------------------------------------------------------------------
# typicality


def _typical_from_counts(counts, probs, n, eps):
    """counts (..., K) of symbol tuples vs probabilities (K,)."""
    expect = n * probs
    return np.all(np.abs(counts - expect) <= eps * expect + FREQ_SLACK * n, axis=-1)


def strongly_typical(seqs, joint: JointDist, eps: float) -> bool:
    """Whether the aligned sequences are eps-strongly typical for ``joint``.

    ``seqs`` holds one sequence per axis of ``joint``, in axis order.
    """
    seqs = [np.asarray(s, dtype=np.int64) for s in seqs]
    if len(seqs) != len(joint.names):
        raise ValueError(f"{len(seqs)} sequences for {len(joint.names)} axes")
    n = len(seqs[0])
    if any(len(s) != n for s in seqs):
        raise ValueError("sequences must share one length")
    shape = joint.mass.shape
    for s, k in zip(seqs, shape):
        if np.any(s < 0) or np.any(s >= k):
            raise ValueError("symbol outside the alphabet")
    code = np.ravel_multi_index(tuple(seqs), shape)
    counts = np.bincount(code, minlength=int(np.prod(shape)))
    return bool(_typical_from_counts(counts, joint.mass.reshape(-1), n, eps))


# ---------------------------------------------------------------------------
# codebook


class DecodingError(Exception):
    """Decoder failure; ``kind`` is ``"collision"`` or ``"not-found"``."""

    def __init__(self, kind):
        self.kind = kind
        super().__init__(kind)


class Codebook:
    """y-tuples (bins_y, per_bin_y, n) and u-tuples (bins_z, per_bin_z, n)."""

    def __init__(self, y_tuples, u_tuples, y_size):
        self.y_tuples = np.asarray(y_tuples, dtype=np.uint8)
        self.u_tuples = np.asarray(u_tuples, dtype=np.uint8)
        self.y_size = y_size
        n = self.y_tuples.shape[2]
        if n * max(1, math.ceil(math.log2(max(y_size, 2)))) > MAX_KEY_BITS:
            raise GuardError(f"y-sequences of length {n} over {y_size} symbols do not fit a 62-bit key")
        self._powers = np.asarray(y_size, dtype=np.int64) ** np.arange(n, dtype=np.int64)
        keys = self.y_tuples.reshape(-1, n).astype(np.int64) @ self._powers
        bins = np.repeat(np.arange(self.y_tuples.shape[0]), self.y_tuples.shape[1])
        order = np.lexsort((bins, keys))
        self._keys = keys[order]
        self._bins = bins[order]

    @property
    def n(self):
        return self.y_tuples.shape[2]

    def y_keys(self, y_seqs) -> np.ndarray:
        return np.asarray(y_seqs, dtype=np.int64) @ self._powers

    def lookup(self, keys):
        """(found, unique, bin) for packed y-sequences."""
        lo = np.searchsorted(self._keys, keys, side="left")
        hi = np.searchsorted(self._keys, keys, side="right")
        found = hi > lo
        first = self._bins[np.minimum(lo, len(self._bins) - 1)]
        last = self._bins[np.maximum(hi - 1, 0)]
        return found, found & (first == last), first


def generate_codebook(p_y, p_u, cfg: SimConfig, seed: int | None = None) -> Codebook:
    p_y = np.asarray(p_y, dtype=float)
    p_u = np.asarray(p_u, dtype=float)
    seed = cfg.seed if seed is None else seed
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0]))
    y = rng.choice(len(p_y), size=(cfg.bins_y, cfg.per_bin_y, cfg.n), p=p_y).astype(np.uint8)
    u = rng.choice(len(p_u), size=(cfg.bins_z, cfg.per_bin_z, cfg.n), p=p_u).astype(np.uint8)
    return Codebook(y, u, len(p_y))


# ---------------------------------------------------------------------------
# encoder / decoders


def _encode_batch(yc, uc, g, p_yus, s_seqs, eps):
    """Vectorized encoder over candidate bins yc (T, Ly, n) and uc (T, Lz, n).

    Returns x (T, n), ok (T,), l_y (T,), l_z (T,).
    """
    ys, us, ss = p_yus.shape
    K = ys * us * ss
    yc = yc.astype(np.int64)
    uc = uc.astype(np.int64)
    T, Ly, n = yc.shape
    Lz = uc.shape[1]
    code = (yc[:, :, None, :] * us + uc[:, None, :, :]) * ss + s_seqs[:, None, None, :]
    offsets = np.arange(T * Ly * Lz, dtype=np.int64).reshape(T, Ly, Lz, 1) * K
    counts = np.bincount((code + offsets).ravel(), minlength=T * Ly * Lz * K).reshape(T, Ly * Lz, K)
    typ = _typical_from_counts(counts, p_yus.reshape(-1), n, eps)
    ok = typ.any(axis=1)
    first = np.argmax(typ, axis=1)
    l_y, l_z = np.divmod(first, Lz)
    t_idx = np.arange(T)
    y_ch = yc[t_idx, l_y]
    u_ch = uc[t_idx, l_z]
    x = np.where(ok[:, None], g[y_ch, u_ch, s_seqs], 0)
    return x, ok, l_y, l_z


def encode(cb: Codebook, sel: SelectionPolicy, p_yus, m_y: int, m_z: int, s_seq, eps: float):
    """Encode one message pair; returns (x_seq, (l_y, l_z) or None, encoder_ok)."""
    s = np.asarray(s_seq, dtype=np.int64)[None]
    x, ok, l_y, l_z = _encode_batch(cb.y_tuples[[m_y]], cb.u_tuples[[m_z]], np.asarray(sel.g),
                                    np.asarray(p_yus, dtype=float), s, eps)
    idx = (int(l_y[0]), int(l_z[0])) if ok[0] else None
    return x[0], idx, bool(ok[0])


def decode_det(cb: Codebook, y_seq) -> int:
    found, unique, b = cb.lookup(cb.y_keys(np.asarray(y_seq)[None]))
    if not found[0]:
        raise DecodingError("not-found")
    if not unique[0]:
        raise DecodingError("collision")
    return int(b[0])


def _nondet_batch(u_tuples, z_seqs, p_uz, eps):
    """Typicality of u-codebooks (T or 1, Mz, Lz, n) against z (T, n).

    Returns (typical bin count (T,), first typical bin (T,), per-bin flags (T, Mz)).
    """
    us, zs = p_uz.shape
    K = us * zs
    _, Mz, Lz, n = u_tuples.shape
    T = z_seqs.shape[0]
    flat_u = u_tuples.reshape(-1, Mz * Lz, n).astype(np.int64)
    code = flat_u * zs + z_seqs[:, None, :]
    offsets = np.arange(T * Mz * Lz, dtype=np.int64).reshape(T, Mz * Lz, 1) * K
    counts = np.bincount((code + offsets).ravel(), minlength=T * Mz * Lz * K).reshape(T, Mz * Lz, K)
    typ = _typical_from_counts(counts, p_uz.reshape(-1), n, 2 * eps).reshape(T, Mz, Lz)
    has = typ.any(axis=2)
    return has.sum(axis=1), np.argmax(has, axis=1), has


def decode_nondet(cb: Codebook, z_seq, p_uz, eps: float) -> int:
    """Unique u-bin holding a tuple 2*eps-typical with z (eps is the encoder's slack)."""
    count, first, _ = _nondet_batch(cb.u_tuples[None], np.asarray(z_seq, dtype=np.int64)[None],
                                    np.asarray(p_uz, dtype=float), eps)
    if count[0] == 0:
        raise DecodingError("not-found")
    if count[0] > 1:
        raise DecodingError("collision")
    return int(first[0])


# ---------------------------------------------------------------------------
# trials


@dataclass(frozen=True)
class SimReport:
    n: int
    trials: int
    encoder_fail_rate: float
    det_err_rate: float
    nondet_err_rate: float
    overall_err_rate: float
    seed: int

    def to_text(self) -> str:
        lines = []
        for k, v in asdict(self).items():
            lines.append(f"{k}: {v:.6f}" if isinstance(v, float) else f"{k}: {v}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TrialOutcome:
    encoder_ok: bool
    det_ok: bool
    nondet_ok: bool


def simulate_outcomes(ch: SemiDetChannel, sel: SelectionPolicy, cfg: SimConfig,
                      workers: int = 1, fixed_codebook: bool = False) -> list[TrialOutcome]:
    """Per-trial outcomes, in trial order.

    By default every trial draws its own codebook, so the rates estimate
    the random-coding ensemble average.  Only the chosen y-bin and the
    u-codebook are drawn tuple by tuple: the other y-bins affect the
    outcome only through whether one of their tuples equals the received
    sequence, which happens with probability 1 - (1 - P_Y^n(y))^N for
    N = (bins - 1) * tuples per bin.  ``fixed_codebook`` instead draws
    one full codebook from the run seed and shares it across trials.
    """
    joint = selection_joint(ch, sel)
    if cfg.trials == 0:
        return []
    p_yus = joint.marginal("YUS").mass
    p_uz = joint.marginal("UZ").mass
    p_y = joint.marginal("Y").mass
    p_u = joint.marginal("U").mass
    cb = generate_codebook(p_y, p_u, cfg) if fixed_codebook else None
    n = cfg.n
    g = np.asarray(sel.g)
    cum_w = np.cumsum(ch.w, axis=-1)[..., :-1]     # (X, S, Z-1)
    Ly, Mz, Lz = cfg.per_bin_y, cfg.bins_z, cfg.per_bin_z
    others = (cfg.bins_y - 1) * Ly
    with np.errstate(divide="ignore"):
        log_py = np.log(p_y)
    pair_work = Ly * Lz * n
    u_work = Mz * Lz * n * (1 if fixed_codebook else 2)
    chunk = max(1, WORK_LIMIT // max(pair_work, u_work))

    def run(lo, hi):
        T = hi - lo
        s = np.empty((T, n), dtype=np.int64)
        m_y = np.empty(T, dtype=np.int64)
        m_z = np.empty(T, dtype=np.int64)
        noise = np.empty((T, n))
        if not fixed_codebook:
            yc = np.empty((T, Ly, n), dtype=np.uint8)
            uc = np.empty((T, Mz, Lz, n), dtype=np.uint8)
            clash = np.empty(T)
        for i, t in enumerate(range(lo, hi)):
            rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, 1, t]))
            s[i] = rng.choice(ch.s_size, size=n, p=ch.p_s)
            m_y[i] = rng.integers(cfg.bins_y)
            m_z[i] = rng.integers(cfg.bins_z)
            noise[i] = rng.random(n)
            if not fixed_codebook:
                yc[i] = rng.choice(len(p_y), size=(Ly, n), p=p_y)
                uc[i] = rng.choice(len(p_u), size=(Mz, Lz, n), p=p_u)
                clash[i] = rng.random()
        if fixed_codebook:
            yc, uc = cb.y_tuples[m_y], cb.u_tuples[None]
        sent_u = uc[np.zeros(T, dtype=np.int64) if fixed_codebook else np.arange(T), m_z]
        x, enc_ok, _, _ = _encode_batch(yc, sent_u, g, p_yus, s, cfg.epsilon)
        y = ch.f[x, s]
        z = (noise[..., None] >= cum_w[x, s]).sum(axis=-1)
        if fixed_codebook:
            _, unique, b = cb.lookup(cb.y_keys(y))
            det_ok = unique & (b == m_y)
        else:
            own = np.all(yc == y[:, None, :], axis=2).any(axis=1)
            # probability that none of the other y-tuples equals y
            log_p = log_py[y].sum(axis=1)
            p_none = np.exp(others * np.log1p(-np.exp(log_p))) if others else np.ones(T)
            det_ok = own & (clash < p_none)
        count, first, _ = _nondet_batch(uc, z, p_uz, cfg.epsilon)
        nondet_ok = (count == 1) & (first == m_z)
        return enc_ok, det_ok, nondet_ok

    spans = [(lo, min(lo + chunk, cfg.trials)) for lo in range(0, cfg.trials, chunk)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda sp: run(*sp), spans))
    else:
        parts = [run(*sp) for sp in spans]
    enc, det, nondet = (np.concatenate([p[i] for p in parts]) for i in range(3))
    return [TrialOutcome(bool(a), bool(b), bool(c)) for a, b, c in zip(enc, det, nondet)]


def run_trials(ch: SemiDetChannel, sel: SelectionPolicy, cfg: SimConfig, workers: int = 1,
               fixed_codebook: bool = False) -> SimReport:
    """Empirical error rates; overall error means either receiver decodes wrongly."""
    out = simulate_outcomes(ch, sel, cfg, workers, fixed_codebook)
    if not out:
        nan = float("nan")
        return SimReport(cfg.n, 0, nan, nan, nan, nan, cfg.seed)
    enc = np.array([o.encoder_ok for o in out])
    det = np.array([o.det_ok for o in out])
    nondet = np.array([o.nondet_ok for o in out])
    return SimReport(
        n=cfg.n,
        trials=len(out),
        encoder_fail_rate=float(np.mean(~enc)),
        det_err_rate=float(np.mean(~det)),
        nondet_err_rate=float(np.mean(~nondet)),
        overall_err_rate=float(np.mean(~(det & nondet))),
        seed=cfg.seed,
    )
