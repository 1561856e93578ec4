import numpy as np
import pytest

from semidet_bc.binary_example import (
    BinaryExampleParams,
    beta,
    bsc_policy,
    build_channel,
    causal_region,
    noncausal_corner,
    noncausal_region,
    upper_boundary,
    write_figure1,
)
from semidet_bc.capacity import bound_triple
from semidet_bc.geometry import contains


def test_channel_structure():
    ch = build_channel(BinaryExampleParams(0.5, 0.2))
    np.testing.assert_array_equal(ch.f, [[0, 1], [1, 0]])
    np.testing.assert_allclose(ch.w[0, 1], [0.8, 0.2])
    np.testing.assert_allclose(ch.p_s, [0.5, 0.5])
    with pytest.raises(ValueError):
        BinaryExampleParams(1.5, 0.2)


def test_beta():
    assert beta(0.1, 0.2) == pytest.approx(0.26, abs=1e-15)
    assert beta(0.5, 0.3) == pytest.approx(0.5, abs=1e-15)


def test_corners():
    ry, rz = noncausal_corner(0.0, 0.2)
    assert (ry, rz) == pytest.approx((0.0, 0.2780719), abs=1e-7)
    assert noncausal_corner(0.5, 0.2) == pytest.approx((1.0, 0.0), abs=1e-15)
    ry, rz = noncausal_corner(0.11, 0.2)
    assert ry == pytest.approx(0.4999, abs=1e-4)
    assert rz == pytest.approx(0.1643, abs=1e-4)


def test_corner_is_the_policy_triple():
    ch = build_channel(BinaryExampleParams(0.5, 0.2))
    for a in (0.05, 0.2, 0.4):
        t = bound_triple(ch, bsc_policy(a))
        ry, rz = noncausal_corner(a, 0.2)
        assert t.b == pytest.approx(rz, abs=1e-12)
        assert t.c - t.b == pytest.approx(ry, abs=1e-12)


def test_causal_triangle_values():
    r = causal_region(0.2)
    np.testing.assert_allclose(r.vertices, [[0, 0], [1, 0], [0, 0.278071905112638]], atol=1e-12)
    assert contains(r, (0.5, 0.1390360), tol=1e-6)
    with pytest.raises(ValueError):
        causal_region(0.2, sigma=0.3)


def test_degenerate_p():
    assert causal_region(0.0).vertices[-1] == pytest.approx([0.0, 1.0])
    # p = 1/2: the causal region collapses onto the R_y axis
    assert causal_region(0.5).area == 0.0
    assert noncausal_region(0.5).vertices[:, 1].max() == pytest.approx(0.0, abs=1e-15)


def test_noncausal_beats_causal_at_half():
    gap = noncausal_region(0.2).max_r_z(0.5) - causal_region(0.2).max_r_z(0.5)
    assert gap >= 0.02


def test_figure_files(tmp_path):
    res = write_figure1(tmp_path, 0.2, 0.5)
    svg = (tmp_path / "figure1.svg").read_text()
    assert svg.count("<polyline") == 2 and 'stroke-dasharray' in svg
    assert "R_y" in svg and "R_z" in svg
    ub = upper_boundary(res["noncausal"])
    assert tuple(ub[0]) == pytest.approx((0.0, 0.2780719), abs=1e-7)
    assert tuple(ub[-1]) == pytest.approx((1.0, 0.0), abs=1e-12)
    write_figure1(tmp_path / "nc", 0.2, 0.3, causal=False)
    assert not (tmp_path / "nc" / "causal.csv").exists()
