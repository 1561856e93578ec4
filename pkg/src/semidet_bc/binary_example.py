"""The binary example channel Y = x XOR S, Z = BSC_p(x).

Closed-form noncausal and causal regions, and the two-curve comparison
plot (CSV boundaries plus a small hand-written SVG).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channels import AuxPolicy, SemiDetChannel
from .geometry import ConvexRegion2D, hull_of_triples
from .prob import binary_entropy

DEFAULT_ALPHA_SAMPLES = 512


def _check_prob(name, v):
    v = float(v)
    if not 0.0 <= v <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {v}")
    return v


@dataclass(frozen=True)
class BinaryExampleParams:
    sigma: float = 0.5
    p: float = 0.2

    def __post_init__(self):
        _check_prob("sigma", self.sigma)
        _check_prob("p", self.p)


def build_channel(params: BinaryExampleParams) -> SemiDetChannel:
    p = params.p
    f = np.array([[0, 1], [1, 0]])
    w = np.empty((2, 2, 2))
    for x in range(2):
        w[x, :, x] = 1 - p
        w[x, :, 1 - x] = p
    return SemiDetChannel(f, w, np.array([1 - params.sigma, params.sigma]), 2)


def beta(alpha: float, p: float) -> float:
    alpha, p = _check_prob("alpha", alpha), _check_prob("p", p)
    return alpha * (1 - p) + (1 - alpha) * p


def bsc_policy(alpha: float) -> AuxPolicy:
    """U uniform and independent of S; X is U through a BSC(alpha)."""
    alpha = _check_prob("alpha", alpha)
    q = np.empty((2, 2, 2))
    for u in range(2):
        q[:, u, u] = 0.5 * (1 - alpha)
        q[:, 1 - u, u] = 0.5 * alpha
    return AuxPolicy(q)


def noncausal_corner(alpha: float, p: float) -> tuple[float, float]:
    return binary_entropy(alpha), 1.0 - binary_entropy(beta(alpha, p))


def noncausal_region(p: float, alpha_samples: int = DEFAULT_ALPHA_SAMPLES) -> ConvexRegion2D:
    """Hull of the rectangles [0, Hb(a)] x [0, 1 - Hb(beta(a, p))], a in [0, 1/2]."""
    p = _check_prob("p", p)
    if alpha_samples < 2:
        raise ValueError("alpha_samples must be at least 2")
    corners = np.array([noncausal_corner(a, p) for a in np.linspace(0.0, 0.5, alpha_samples)])
    # rectangle corners: (ry, rz) plus its projections on the axes
    return hull_of_triples(np.column_stack([corners[:, 0], corners[:, 1], corners.sum(axis=1)]))


def causal_region(p: float, sigma: float = 0.5) -> ConvexRegion2D:
    """Time-sharing triangle (0,0), (1,0), (0, 1 - Hb(p)); needs sigma = 1/2."""
    p = _check_prob("p", p)
    if _check_prob("sigma", sigma) != 0.5:
        raise ValueError("the causal region is only established for sigma = 0.5")
    return ConvexRegion2D.from_points([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0 - binary_entropy(p))])


def upper_boundary(region: ConvexRegion2D) -> np.ndarray:
    """Vertices of the upper-right boundary, from the R_z axis to the R_y axis."""
    v = region.vertices
    # drop the origin; remaining CCW order runs (max ry, 0) -> ... -> (0, max rz)
    keep = [p for p in v if not (abs(p[0]) < 1e-15 and abs(p[1]) < 1e-15)]
    return np.array(keep[::-1]) if keep else v.copy()


def _polyline(points, sx, sy):
    return " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in points)


def figure_svg(noncausal: ConvexRegion2D, causal: ConvexRegion2D | None,
               x_max: float = 1.0, y_max: float = 0.4) -> str:
    """Solid noncausal boundary, dashed causal boundary, labeled axes."""
    width, height, margin = 480, 320, 50
    sx = lambda x: margin + (width - 2 * margin) * x / x_max
    sy = lambda y: height - margin - (height - 2 * margin) * y / y_max
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{sx(0):.3f}" y1="{sy(0):.3f}" x2="{sx(x_max):.3f}" y2="{sy(0):.3f}" stroke="black"/>',
        f'<line x1="{sx(0):.3f}" y1="{sy(0):.3f}" x2="{sx(0):.3f}" y2="{sy(y_max):.3f}" stroke="black"/>',
        f'<text x="{sx(x_max) - 10:.3f}" y="{sy(0) + 30:.3f}" font-size="14">R_y</text>',
        f'<text x="{sx(0) - 40:.3f}" y="{sy(y_max) + 5:.3f}" font-size="14">R_z</text>',
    ]
    for k in range(6):
        tx = x_max * k / 5
        parts.append(f'<text x="{sx(tx) - 8:.3f}" y="{sy(0) + 16:.3f}" font-size="10">{tx:.1f}</text>')
        ty = y_max * k / 4 if k < 5 else None
        if ty is not None:
            parts.append(f'<text x="{sx(0) - 30:.3f}" y="{sy(ty) + 4:.3f}" font-size="10">{ty:.2f}</text>')
    parts.append(f'<polyline id="noncausal" fill="none" stroke="black" stroke-width="1.5" '
                 f'points="{_polyline(upper_boundary(noncausal), sx, sy)}"/>')
    if causal is not None:
        parts.append(f'<polyline id="causal" fill="none" stroke="black" stroke-width="1.5" '
                     f'stroke-dasharray="6,4" points="{_polyline(upper_boundary(causal), sx, sy)}"/>')
    parts.append(f'<text x="{sx(0.55 * x_max):.3f}" y="{sy(0.8 * y_max):.3f}" font-size="12">'
                 'Noncausal (solid), Causal (dashed)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_figure1(out_dir, p: float = 0.2, sigma: float = 0.5, causal: bool = True,
                  alpha_samples: int = DEFAULT_ALPHA_SAMPLES) -> dict:
    """Write noncausal.csv, causal.csv and figure1.svg; return the regions."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    nc = noncausal_region(p, alpha_samples)
    ca = causal_region(p, sigma) if causal else None
    (out / "noncausal.csv").write_text(nc.to_csv())
    if ca is not None:
        (out / "causal.csv").write_text(ca.to_csv())
    y_top = max(0.4, float(nc.vertices[:, 1].max()) * 1.1)
    (out / "figure1.svg").write_text(figure_svg(nc, ca, 1.0, round(y_top, 2)))
    return {"noncausal": nc, "causal": ca}
